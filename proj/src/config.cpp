#include "magtrace/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

namespace mag {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw std::invalid_argument("config: " + path + ": " + msg);
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) fail(path, "unknown key '" + it.key() + "'");
    }
}

double get_num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

double num_or(const json& j, const char* key, const std::string& path, double dflt) {
    if (!j.contains(key)) return dflt;
    return get_num(j.at(key), path + "." + key);
}

long int_or(const json& j, const char* key, const std::string& path, long dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_number_integer()) fail(path + "." + key, "expected an integer");
    return v.get<long>();
}

bool bool_or(const json& j, const char* key, const std::string& path, bool dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_boolean()) fail(path + "." + key, "expected a boolean");
    return v.get<bool>();
}

std::string str_or(const json& j, const char* key, const std::string& path,
                   const std::string& dflt) {
    if (!j.contains(key)) return dflt;
    const json& v = j.at(key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

std::vector<double> num_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_num(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<TrigMode> parse_modes(const json& j, const std::string& path, int d) {
    if (!j.is_array()) fail(path, "expected an array of modes");
    std::vector<TrigMode> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string mp = path + "[" + std::to_string(i) + "]";
        const json& m = j[i];
        check_keys(m, mp, {"k", "cos", "sin"});
        if (!m.contains("k")) fail(mp, "missing key 'k'");
        const json& kj = m.at("k");
        if (!kj.is_array() || static_cast<int>(kj.size()) != d)
            fail(mp + ".k", "expected an integer array of length " + std::to_string(d));
        TrigMode tm;
        tm.k = {0, 0, 0};
        bool nonzero = false;
        for (int a = 0; a < d; ++a) {
            if (!kj[a].is_number_integer()) fail(mp + ".k", "expected integers");
            tm.k[a] = kj[a].get<int>();
            if (tm.k[a] != 0) nonzero = true;
        }
        if (!nonzero) fail(mp + ".k", "zero wave vector; use 'mean' for the constant part");
        tm.c = num_or(m, "cos", mp, 0.0);
        tm.s = num_or(m, "sin", mp, 0.0);
        out.push_back(tm);
    }
    return out;
}

json modes_to_json(const std::vector<TrigMode>& modes, int d) {
    json out = json::array();
    for (const auto& m : modes) {
        json mj;
        json kj = json::array();
        for (int a = 0; a < d; ++a) kj.push_back(m.k[a]);
        mj["k"] = kj;
        mj["cos"] = m.c;
        mj["sin"] = m.s;
        out.push_back(mj);
    }
    return out;
}

TestFunction parse_phi(const json& j, const std::string& path) {
    check_keys(j, path, {"kind", "center", "width", "poly"});
    std::string kind = str_or(j, "kind", path, "bump");
    TestFunctionKind k;
    if (kind == "bump")
        k = TestFunctionKind::bump;
    else if (kind == "poly_bump")
        k = TestFunctionKind::poly_bump;
    else
        fail(path + ".kind", "expected 'bump' or 'poly_bump'");
    double center = num_or(j, "center", path, 1.25);
    double width = num_or(j, "width", path, 0.75);
    if (!(width > 0.0)) fail(path + ".width", "must be positive");
    Poly q{{1.0}};
    if (j.contains("poly")) {
        q.c = num_list(j.at("poly"), path + ".poly");
        if (q.c.empty()) fail(path + ".poly", "must not be empty");
    }
    return TestFunction(k, center, width, q);
}

Problem parse_problem(const json& j) {
    const std::string path = "problem";
    check_keys(j, path, {"d", "periods", "B", "V", "phi"});
    Problem prob;
    int d = static_cast<int>(int_or(j, "d", path, 2));
    if (d != 2 && d != 3) fail(path + ".d", "expected 2 or 3");
    prob.dom.d = d;
    prob.dom.periods = {1.0, 1.0, 1.0};
    if (j.contains("periods")) {
        std::vector<double> per = num_list(j.at("periods"), path + ".periods");
        if (static_cast<int>(per.size()) != d)
            fail(path + ".periods", "expected length " + std::to_string(d));
        for (int a = 0; a < d; ++a) {
            if (!(per[a] > 0.0)) fail(path + ".periods", "must be positive");
            prob.dom.periods[a] = per[a];
        }
    }

    double v_mean = 0.0;
    std::vector<TrigMode> v_modes;
    if (j.contains("V")) {
        const json& vj = j.at("V");
        check_keys(vj, path + ".V", {"mean", "modes"});
        v_mean = num_or(vj, "mean", path + ".V", 0.0);
        if (vj.contains("modes")) v_modes = parse_modes(vj.at("modes"), path + ".V.modes", d);
    }
    prob.V = ScalarField(d, prob.dom.periods, v_mean, v_modes);

    std::vector<std::array<int, 2>> pairs;
    std::vector<ScalarField> comps;
    if (j.contains("B")) {
        const json& bj = j.at("B");
        if (!bj.is_array()) fail(path + ".B", "expected an array of components");
        for (std::size_t i = 0; i < bj.size(); ++i) {
            std::string bp = path + ".B[" + std::to_string(i) + "]";
            const json& c = bj[i];
            check_keys(c, bp, {"pair", "mean", "modes"});
            if (!c.contains("pair")) fail(bp, "missing key 'pair'");
            const json& pj = c.at("pair");
            if (!pj.is_array() || pj.size() != 2 || !pj[0].is_number_integer() ||
                !pj[1].is_number_integer())
                fail(bp + ".pair", "expected [j, k] integers");
            int pj0 = pj[0].get<int>(), pk = pj[1].get<int>();
            if (!(0 <= pj0 && pj0 < pk && pk < d))
                fail(bp + ".pair", "expected 0 <= j < k < d");
            for (const auto& seen : pairs)
                if (seen[0] == pj0 && seen[1] == pk) fail(bp + ".pair", "duplicate pair");
            double b_mean = num_or(c, "mean", bp, 0.0);
            if (b_mean != 0.0)
                fail(bp + ".mean", "nonzero flux: the mean of B over the torus must vanish");
            std::vector<TrigMode> bm;
            if (c.contains("modes")) bm = parse_modes(c.at("modes"), bp + ".modes", d);
            pairs.push_back({pj0, pk});
            comps.push_back(ScalarField(d, prob.dom.periods, 0.0, bm));
        }
    }
    prob.B = MagneticField(d, pairs, comps);

    if (j.contains("phi"))
        prob.phi = parse_phi(j.at("phi"), path + ".phi");
    else
        prob.phi = TestFunction(TestFunctionKind::bump, 1.25, 0.75);
    return prob;
}

std::vector<double> ps_list(const json& j, const char* key, const std::string& path,
                            std::vector<double> dflt) {
    if (!j.contains(key)) return dflt;
    std::vector<double> ps = num_list(j.at(key), path + "." + key);
    if (ps.empty()) fail(path + "." + key, "must not be empty");
    for (std::size_t i = 0; i < ps.size(); ++i) {
        if (!(ps[i] > 0.0)) fail(path + "." + key, "entries must be positive");
        if (i > 0 && ps[i] <= ps[i - 1])
            fail(path + "." + key, "entries must be strictly increasing");
    }
    return ps;
}

}  // namespace

RunConfig config_from_json(const json& doc) {
    RunConfig cfg;
    check_keys(doc, "config",
               {"problem", "ladder", "trace", "eig", "hsfc", "fit", "kernel", "gauge",
                "expand", "hs_check", "tolerances", "out", "seed", "threads"});
    if (!doc.contains("problem")) fail("config", "missing required key 'problem'");
    cfg.problem = parse_problem(doc.at("problem"));
    const int d = cfg.problem.dom.d;

    if (doc.contains("ladder")) {
        const json& lj = doc.at("ladder");
        check_keys(lj, "ladder", {"ps", "method", "cross_check"});
        cfg.ladder.ps = ps_list(lj, "ps", "ladder", cfg.ladder.ps);
        std::string method = str_or(lj, "method", "ladder", "eig");
        if (method == "eig")
            cfg.ladder.method = TraceMethod::eig;
        else if (method == "hsfc")
            cfg.ladder.method = TraceMethod::hsfc;
        else
            fail("ladder.method", "expected 'eig' or 'hsfc'");
        cfg.ladder.cross_check = bool_or(lj, "cross_check", "ladder", true);
    }

    TraceSettings& ts = cfg.ladder.trace;
    if (doc.contains("trace")) {
        const json& tj = doc.at("trace");
        check_keys(tj, "trace", {"margin", "round_to", "certify"});
        ts.margin = num_or(tj, "margin", "trace", ts.margin);
        if (!(ts.margin >= 1.0)) fail("trace.margin", "must be >= 1");
        ts.round_to = static_cast<int>(int_or(tj, "round_to", "trace", ts.round_to));
        if (ts.round_to < 1) fail("trace.round_to", "must be >= 1");
        ts.certify = bool_or(tj, "certify", "trace", ts.certify);
    }
    if (doc.contains("eig")) {
        const json& ej = doc.at("eig");
        check_keys(ej, "eig",
                   {"dense_cap", "cert_dense_cap", "lanczos_tol", "lanczos_max_iter",
                    "lanczos_block"});
        ts.eig.dense_cap = int_or(ej, "dense_cap", "eig", ts.eig.dense_cap);
        ts.eig.cert_dense_cap = int_or(ej, "cert_dense_cap", "eig", ts.eig.cert_dense_cap);
        ts.eig.lanczos_tol = num_or(ej, "lanczos_tol", "eig", ts.eig.lanczos_tol);
        ts.eig.lanczos_max_iter =
            static_cast<int>(int_or(ej, "lanczos_max_iter", "eig", ts.eig.lanczos_max_iter));
        ts.eig.lanczos_block =
            static_cast<int>(int_or(ej, "lanczos_block", "eig", ts.eig.lanczos_block));
        if (ts.eig.dense_cap < 1) fail("eig.dense_cap", "must be positive");
        if (ts.eig.lanczos_block < 1) fail("eig.lanczos_block", "must be positive");
    }
    if (doc.contains("hsfc")) {
        const json& hj = doc.at("hsfc");
        check_keys(hj, "hsfc", {"N", "delta", "quad_n"});
        ts.hs_N = static_cast<int>(int_or(hj, "N", "hsfc", ts.hs_N));
        if (ts.hs_N < 1 || ts.hs_N > 4) fail("hsfc.N", "expected 1..4");
        ts.hs_delta = num_or(hj, "delta", "hsfc", ts.hs_delta);
        if (!(ts.hs_delta > 0.0)) fail("hsfc.delta", "must be positive");
        ts.hs_quad_n = static_cast<int>(int_or(hj, "quad_n", "hsfc", ts.hs_quad_n));
        if (ts.hs_quad_n < 2) fail("hsfc.quad_n", "must be >= 2");
    }

    if (doc.contains("fit")) {
        const json& fj = doc.at("fit");
        check_keys(fj, "fit", {"orders"});
        if (fj.contains("orders")) {
            const json& oj = fj.at("orders");
            if (!oj.is_array() || oj.empty()) fail("fit.orders", "expected a nonempty array");
            cfg.fit_orders.clear();
            for (std::size_t i = 0; i < oj.size(); ++i) {
                if (!oj[i].is_number_integer()) fail("fit.orders", "expected integers");
                int o = oj[i].get<int>();
                if (o < 0) fail("fit.orders", "must be nonnegative");
                if (!cfg.fit_orders.empty() && o <= cfg.fit_orders.back())
                    fail("fit.orders", "must be strictly increasing");
                cfg.fit_orders.push_back(o);
            }
        }
    }

    cfg.kernel.trace = ts;
    if (doc.contains("kernel")) {
        const json& kj = doc.at("kernel");
        check_keys(kj, "kernel", {"enabled", "ps", "points", "margin", "round_to"});
        cfg.kernel_enabled = bool_or(kj, "enabled", "kernel", false);
        cfg.kernel.ps = ps_list(kj, "ps", "kernel", cfg.kernel.ps);
        if (kj.contains("points")) {
            const json& pj = kj.at("points");
            if (!pj.is_array() || pj.empty()) fail("kernel.points", "expected a nonempty array");
            cfg.kernel.points_frac.clear();
            for (std::size_t i = 0; i < pj.size(); ++i) {
                std::string pp = "kernel.points[" + std::to_string(i) + "]";
                std::vector<double> v = num_list(pj[i], pp);
                if (static_cast<int>(v.size()) != d)
                    fail(pp, "expected length " + std::to_string(d));
                std::array<double, 3> pt{0.0, 0.0, 0.0};
                for (int a = 0; a < d; ++a) {
                    if (v[a] < 0.0 || v[a] >= 1.0) fail(pp, "fractions must lie in [0, 1)");
                    pt[a] = v[a];
                }
                cfg.kernel.points_frac.push_back(pt);
            }
        }
        cfg.kernel.trace.margin = num_or(kj, "margin", "kernel", cfg.kernel.trace.margin);
        cfg.kernel.trace.round_to =
            static_cast<int>(int_or(kj, "round_to", "kernel", cfg.kernel.trace.round_to));
    }

    if (doc.contains("gauge")) {
        const json& gj = doc.at("gauge");
        check_keys(gj, "gauge",
                   {"n_points", "n_taylor", "fd_step", "spectrum_p", "spectrum_grid",
                    "spectrum_margin", "theta_amp", "seed"});
        cfg.gauge.n_points = static_cast<int>(int_or(gj, "n_points", "gauge", cfg.gauge.n_points));
        cfg.gauge.n_taylor = static_cast<int>(int_or(gj, "n_taylor", "gauge", cfg.gauge.n_taylor));
        cfg.gauge.fd_step = num_or(gj, "fd_step", "gauge", cfg.gauge.fd_step);
        cfg.gauge.spectrum_p = num_or(gj, "spectrum_p", "gauge", cfg.gauge.spectrum_p);
        cfg.gauge.spectrum_grid =
            static_cast<int>(int_or(gj, "spectrum_grid", "gauge", cfg.gauge.spectrum_grid));
        cfg.gauge.spectrum_margin =
            num_or(gj, "spectrum_margin", "gauge", cfg.gauge.spectrum_margin);
        if (!(cfg.gauge.spectrum_margin >= 1.0))
            fail("gauge.spectrum_margin", "must be >= 1");
        cfg.gauge.theta_amp = num_or(gj, "theta_amp", "gauge", cfg.gauge.theta_amp);
        cfg.gauge.seed = static_cast<std::uint64_t>(int_or(gj, "seed", "gauge", 1));
    }

    if (doc.contains("expand")) {
        const json& ej = doc.at("expand");
        check_keys(ej, "expand", {"x0", "h_ladder", "n_samples", "sample_box", "seed"});
        if (ej.contains("x0")) {
            std::vector<double> v = num_list(ej.at("x0"), "expand.x0");
            if (static_cast<int>(v.size()) != d)
                fail("expand.x0", "expected length " + std::to_string(d));
            cfg.expand.x0 = {0.0, 0.0, 0.0};
            for (int a = 0; a < d; ++a) cfg.expand.x0[a] = v[a];
        }
        if (ej.contains("h_ladder")) {
            cfg.expand.h_ladder = num_list(ej.at("h_ladder"), "expand.h_ladder");
            if (cfg.expand.h_ladder.size() < 5)
                fail("expand.h_ladder", "need at least 5 h values");
            for (double h : cfg.expand.h_ladder)
                if (!(h > 0.0 && h <= 1.0)) fail("expand.h_ladder", "h must lie in (0, 1]");
        }
        cfg.expand.n_samples =
            static_cast<int>(int_or(ej, "n_samples", "expand", cfg.expand.n_samples));
        cfg.expand.sample_box = num_or(ej, "sample_box", "expand", cfg.expand.sample_box);
        cfg.expand.seed = static_cast<std::uint64_t>(int_or(ej, "seed", "expand", 2));
    }

    if (doc.contains("hs_check")) {
        const json& hj = doc.at("hs_check");
        check_keys(hj, "hs_check", {"dim", "N", "delta", "quad_n", "window", "seed"});
        cfg.hs_check.dim = static_cast<int>(int_or(hj, "dim", "hs_check", cfg.hs_check.dim));
        cfg.hs_check.N = static_cast<int>(int_or(hj, "N", "hs_check", cfg.hs_check.N));
        cfg.hs_check.delta = num_or(hj, "delta", "hs_check", cfg.hs_check.delta);
        cfg.hs_check.quad_n =
            static_cast<int>(int_or(hj, "quad_n", "hs_check", cfg.hs_check.quad_n));
        if (hj.contains("window")) {
            std::vector<double> w = num_list(hj.at("window"), "hs_check.window");
            if (w.size() != 2 || !(w[0] < w[1]))
                fail("hs_check.window", "expected [lo, hi] with lo < hi");
            cfg.hs_check.window_lo = w[0];
            cfg.hs_check.window_hi = w[1];
        }
        cfg.hs_check.seed = static_cast<std::uint64_t>(int_or(hj, "seed", "hs_check", 3));
    }

    if (doc.contains("tolerances")) {
        const json& tj = doc.at("tolerances");
        check_keys(tj, "tolerances",
                   {"c0_rel", "c1_frac", "c2_rel", "dual_route", "trace_kernel",
                    "kernel_order", "cert_shift", "hs_imag_rel"});
        cfg.tol.c0_rel = num_or(tj, "c0_rel", "tolerances", cfg.tol.c0_rel);
        cfg.tol.c1_frac = num_or(tj, "c1_frac", "tolerances", cfg.tol.c1_frac);
        cfg.tol.c2_rel = num_or(tj, "c2_rel", "tolerances", cfg.tol.c2_rel);
        cfg.tol.dual_route = num_or(tj, "dual_route", "tolerances", cfg.tol.dual_route);
        cfg.tol.trace_kernel = num_or(tj, "trace_kernel", "tolerances", cfg.tol.trace_kernel);
        cfg.tol.kernel_order = num_or(tj, "kernel_order", "tolerances", cfg.tol.kernel_order);
        cfg.tol.cert_shift = num_or(tj, "cert_shift", "tolerances", cfg.tol.cert_shift);
        cfg.tol.hs_imag_rel = num_or(tj, "hs_imag_rel", "tolerances", cfg.tol.hs_imag_rel);
    }

    cfg.out_dir = str_or(doc, "out", "config", cfg.out_dir);
    cfg.seed = static_cast<std::uint64_t>(int_or(doc, "seed", "config", 0));
    cfg.threads = static_cast<int>(int_or(doc, "threads", "config", 1));
    if (cfg.threads < 1) fail("threads", "must be >= 1");

    try {
        cfg.problem.validate();
    } catch (const std::exception& e) {
        fail("problem", e.what());
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const std::exception& e) {
        throw std::invalid_argument("config: invalid JSON in '" + path + "': " + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const RunConfig& cfg) {
    const Problem& prob = cfg.problem;
    const int d = prob.dom.d;
    json doc;

    json pj;
    pj["d"] = d;
    json per = json::array();
    for (int a = 0; a < d; ++a) per.push_back(prob.dom.periods[a]);
    pj["periods"] = per;
    json bj = json::array();
    for (std::size_t i = 0; i < prob.B.pairs().size(); ++i) {
        json cj;
        cj["pair"] = json::array({prob.B.pairs()[i][0], prob.B.pairs()[i][1]});
        cj["mean"] = 0.0;
        cj["modes"] = modes_to_json(prob.B.comps()[i].modes(), d);
        bj.push_back(cj);
    }
    pj["B"] = bj;
    json vj;
    vj["mean"] = prob.V.constant();
    vj["modes"] = modes_to_json(prob.V.modes(), d);
    pj["V"] = vj;
    json phij;
    phij["kind"] = prob.phi.kind() == TestFunctionKind::bump ? "bump" : "poly_bump";
    phij["center"] = prob.phi.center();
    phij["width"] = prob.phi.width();
    phij["poly"] = prob.phi.poly_factor().c;
    pj["phi"] = phij;
    doc["problem"] = pj;

    json lj;
    lj["ps"] = cfg.ladder.ps;
    lj["method"] = cfg.ladder.method == TraceMethod::eig ? "eig" : "hsfc";
    lj["cross_check"] = cfg.ladder.cross_check;
    doc["ladder"] = lj;

    const TraceSettings& ts = cfg.ladder.trace;
    json tj;
    tj["margin"] = ts.margin;
    tj["round_to"] = ts.round_to;
    tj["certify"] = ts.certify;
    doc["trace"] = tj;

    json ej;
    ej["dense_cap"] = ts.eig.dense_cap;
    ej["cert_dense_cap"] = ts.eig.cert_dense_cap;
    ej["lanczos_tol"] = ts.eig.lanczos_tol;
    ej["lanczos_max_iter"] = ts.eig.lanczos_max_iter;
    ej["lanczos_block"] = ts.eig.lanczos_block;
    doc["eig"] = ej;

    json hj;
    hj["N"] = ts.hs_N;
    hj["delta"] = ts.hs_delta;
    hj["quad_n"] = ts.hs_quad_n;
    doc["hsfc"] = hj;

    json fj;
    fj["orders"] = cfg.fit_orders;
    doc["fit"] = fj;

    json kj;
    kj["enabled"] = cfg.kernel_enabled;
    kj["ps"] = cfg.kernel.ps;
    json kpts = json::array();
    for (const auto& pt : cfg.kernel.points_frac) {
        json row = json::array();
        for (int a = 0; a < d; ++a) row.push_back(pt[a]);
        kpts.push_back(row);
    }
    kj["points"] = kpts;
    kj["margin"] = cfg.kernel.trace.margin;
    kj["round_to"] = cfg.kernel.trace.round_to;
    doc["kernel"] = kj;

    json gj;
    gj["n_points"] = cfg.gauge.n_points;
    gj["n_taylor"] = cfg.gauge.n_taylor;
    gj["fd_step"] = cfg.gauge.fd_step;
    gj["spectrum_p"] = cfg.gauge.spectrum_p;
    gj["spectrum_grid"] = cfg.gauge.spectrum_grid;
    gj["spectrum_margin"] = cfg.gauge.spectrum_margin;
    gj["theta_amp"] = cfg.gauge.theta_amp;
    gj["seed"] = cfg.gauge.seed;
    doc["gauge"] = gj;

    json xj;
    json x0 = json::array();
    for (int a = 0; a < d; ++a) x0.push_back(cfg.expand.x0[a]);
    xj["x0"] = x0;
    xj["h_ladder"] = cfg.expand.h_ladder;
    xj["n_samples"] = cfg.expand.n_samples;
    xj["sample_box"] = cfg.expand.sample_box;
    xj["seed"] = cfg.expand.seed;
    doc["expand"] = xj;

    json cj;
    cj["dim"] = cfg.hs_check.dim;
    cj["N"] = cfg.hs_check.N;
    cj["delta"] = cfg.hs_check.delta;
    cj["quad_n"] = cfg.hs_check.quad_n;
    cj["window"] = json::array({cfg.hs_check.window_lo, cfg.hs_check.window_hi});
    cj["seed"] = cfg.hs_check.seed;
    doc["hs_check"] = cj;

    json oj;
    oj["c0_rel"] = cfg.tol.c0_rel;
    oj["c1_frac"] = cfg.tol.c1_frac;
    oj["c2_rel"] = cfg.tol.c2_rel;
    oj["dual_route"] = cfg.tol.dual_route;
    oj["trace_kernel"] = cfg.tol.trace_kernel;
    oj["kernel_order"] = cfg.tol.kernel_order;
    oj["cert_shift"] = cfg.tol.cert_shift;
    oj["hs_imag_rel"] = cfg.tol.hs_imag_rel;
    doc["tolerances"] = oj;

    doc["out"] = cfg.out_dir;
    doc["seed"] = cfg.seed;
    doc["threads"] = cfg.threads;
    return doc;
}

std::string config_snapshot(const RunConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

std::uint64_t fnv1a_hash(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    std::ostringstream os;
    os << std::hex;
    for (int i = 15; i >= 0; --i) os << ((h >> (4 * i)) & 0xf);
    return os.str();
}

}  // namespace mag
