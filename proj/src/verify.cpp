#include "magtrace/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "magtrace/gauge.hpp"

namespace mag {

bool Problem::diagonal() const { return B.is_zero() && V.modes().empty(); }

void Problem::validate() const {
    dom.validate();
    B.check_zero_flux();
    if (dom.d == 3) B.check_closed();
    if (!(phi.width() > 0.0)) throw std::invalid_argument("test function has no support");
}

int grid_rule(const Problem& prob, double p, double e_max, double margin, int round_to) {
    int km = prob.V.max_wavenumber();
    for (const auto& c : prob.B.comps()) km = std::max(km, c.max_wavenumber());
    double L = 0.0;
    for (int a = 0; a < prob.dom.d; ++a) L = std::max(L, prob.dom.periods[a]);
    double nyq = margin * p * L * std::sqrt(std::max(e_max, 0.0)) / PI;
    // Truncation error decays exponentially in the number of Fourier shells
    // beyond the window, so the headroom that fixes the error level is additive.
    double need = std::max({12.0, 4.0 * km, nyq + 8.0});
    int step = std::max(2, round_to);
    if (step % 2) step *= 2;
    long n = static_cast<long>(std::ceil(need));
    n = (n + step - 1) / step * step;
    return static_cast<int>(n);
}

namespace {

struct WindowVals {
    std::vector<double> vals;
    std::string method;
};

std::unique_ptr<SpectralOperator> make_op(const Problem& prob, double p, int grid_n) {
    TorusDomain dom = prob.dom;
    dom.grid_n = grid_n;
    VectorPotential A = potential_from_field(prob.B, dom.periods);
    return std::make_unique<SpectralOperator>(dom, A, prob.V, p);
}

WindowVals window_vals_impl(const Problem& prob, double p, int grid_n, double lo,
                            double hi, const EigSettings& es, long dense_limit) {
    WindowVals out;
    TorusDomain dom = prob.dom;
    dom.grid_n = grid_n;
    if (prob.diagonal()) {
        out.method = "exact-diagonal";
        double v0 = prob.V.constant();
        for (double t : free_spectrum(dom, p)) {
            double lam = t + v0;
            if (lam >= lo && lam <= hi) out.vals.push_back(lam);
        }
        return out;
    }
    if (dom.grid_size() <= dense_limit) {
        out.method = "dense";
        auto op = make_op(prob, p, grid_n);
        EigResult eg = dense_hermitian_eig(op->assemble_dense(dense_limit), false);
        for (double lam : eg.values)
            if (lam >= lo && lam <= hi) out.vals.push_back(lam);
        return out;
    }
    out.method = "lanczos";
    auto op = make_op(prob, p, grid_n);
    EigenWindow win = lanczos_window(*op, lo, hi, es.lanczos_max_iter, es.lanczos_tol,
                                     es.lanczos_block);
    out.vals = win.values;
    return out;
}

std::vector<double> trim_window(const std::vector<double>& v, double lo, double hi,
                                double buf) {
    std::vector<double> out;
    for (double x : v)
        if (x >= lo + buf && x <= hi - buf) out.push_back(x);
    return out;
}

}  // namespace

std::vector<double> window_eigenvalues(const Problem& prob, double p, int grid_n,
                                       double lo, double hi, const EigSettings& es) {
    return window_vals_impl(prob, p, grid_n, lo, hi, es, es.dense_cap).vals;
}

Certificate resolution_certificate(const Problem& prob, double p, int grid_n, double lo,
                                   double hi, const std::vector<double>& base_vals,
                                   const EigSettings& es) {
    Certificate c;
    c.grid_n = grid_n;
    c.grid_n_fine = 2 * grid_n;
    WindowVals fine =
        window_vals_impl(prob, p, c.grid_n_fine, lo, hi, es, es.cert_dense_cap);
    c.method = fine.method;
    double buf = 1e-6 * std::max({1.0, std::abs(lo), std::abs(hi)});
    std::vector<double> a = trim_window(base_vals, lo, hi, buf);
    std::vector<double> b = trim_window(fine.vals, lo, hi, buf);
    c.count_match = a.size() == b.size();
    c.matched = static_cast<long>(a.size());
    if (!c.count_match) {
        c.max_shift = std::numeric_limits<double>::infinity();
        c.ok = false;
        return c;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
        c.max_shift = std::max(c.max_shift, std::abs(a[i] - b[i]));
    c.ok = c.max_shift <= 1e-8;
    return c;
}

double spectral_sum(const std::vector<double>& evs, const TestFunction& phi) {
    double s = 0.0;
    for (double lam : evs) s += phi.eval(lam, 0);
    return s;
}

double trace_of_phi(const Problem& prob, double p, TraceMethod method,
                    const TraceSettings& ts, Certificate* cert_out) {
    prob.validate();
    double lo = prob.phi.support_lo(), hi = prob.phi.support_hi();
    int grid_n = grid_rule(prob, p, hi, ts.margin, ts.round_to);
    WindowVals base = window_vals_impl(prob, p, grid_n, lo, hi, ts.eig, ts.eig.dense_cap);
    if (ts.certify) {
        Certificate cert = resolution_certificate(prob, p, grid_n, lo, hi, base.vals, ts.eig);
        if (cert_out) *cert_out = cert;
        if (!cert.ok) {
            std::ostringstream os;
            os << "resolution certificate failed: p=" << p << " grid=" << grid_n
               << " doubled=" << cert.grid_n_fine << " max_shift=" << cert.max_shift
               << (cert.count_match ? "" : " (window count changed)");
            throw std::runtime_error(os.str());
        }
    } else if (cert_out) {
        *cert_out = Certificate{};
    }
    if (method == TraceMethod::eig) return spectral_sum(base.vals, prob.phi);
    auto op = make_op(prob, p, grid_n);
    return hs_trace(prob.phi, *op, ts.hs_N, ts.hs_delta, ts.hs_quad_n, ts.eig.dense_cap)
        .value;
}

TraceLadder compute_ladder(const Problem& prob, const LadderSettings& ls) {
    prob.validate();
    for (std::size_t i = 1; i < ls.ps.size(); ++i)
        if (!(ls.ps[i] > ls.ps[i - 1]))
            throw std::invalid_argument("ladder p values must increase strictly");
    const TraceSettings& ts = ls.trace;
    double lo = prob.phi.support_lo(), hi = prob.phi.support_hi();
    TraceLadder lad;
    for (double p : ls.ps) {
        TraceLadderEntry e;
        e.p = p;
        e.grid_n = grid_rule(prob, p, hi, ts.margin, ts.round_to);
        TorusDomain dom = prob.dom;
        dom.grid_n = e.grid_n;
        long dims = dom.grid_size();
        WindowVals base =
            window_vals_impl(prob, p, e.grid_n, lo, hi, ts.eig, ts.eig.dense_cap);
        if (ts.certify) {
            Certificate cert =
                resolution_certificate(prob, p, e.grid_n, lo, hi, base.vals, ts.eig);
            e.certified = cert.ok;
            e.cert_shift = cert.max_shift;
            e.cert_method = cert.method;
        }
        double t_eig = spectral_sum(base.vals, prob.phi);
        bool hs_feasible = dims <= ts.eig.dense_cap;
        bool want_hs = ls.method == TraceMethod::hsfc || ls.cross_check;
        double t_hs = 0.0;
        bool have_hs = false;
        if (want_hs && hs_feasible) {
            auto op = make_op(prob, p, e.grid_n);
            HsTraceResult r =
                hs_trace(prob.phi, *op, ts.hs_N, ts.hs_delta, ts.hs_quad_n, ts.eig.dense_cap);
            t_hs = r.value;
            e.hs_imag_defect = r.imag_defect;
            have_hs = true;
        }
        if (ls.method == TraceMethod::hsfc) {
            if (!have_hs)
                throw std::runtime_error("hsfc trace requested above the dense cap");
            e.method = "hsfc";
            e.trace = t_hs;
            e.trace_alt = t_eig;
            e.has_alt = true;
        } else {
            e.method = "eig";
            e.trace = t_eig;
            e.trace_alt = t_hs;
            e.has_alt = have_hs;
        }
        if (e.has_alt)
            e.alt_rel_diff = std::abs(t_eig - t_hs) / std::max(std::abs(t_eig), 1e-300);
        lad.entries.push_back(std::move(e));
    }
    return lad;
}

ExpansionFit expansion_fit(const TraceLadder& ladder, int d, const std::vector<int>& orders,
                           bool enforce) {
    const auto& en = ladder.entries;
    if (enforce) {
        if (en.size() < 6) throw std::invalid_argument("expansion fit needs >= 6 ladder points");
        if (en.size() < orders.size() + 2)
            throw std::invalid_argument("expansion fit needs >= 2 more points than coefficients");
        for (const auto& e : en)
            if (!e.certified)
                throw std::runtime_error("ladder entry lacks a resolution certificate");
    }
    if (en.size() < orders.size()) throw std::invalid_argument("underdetermined fit");
    std::vector<std::vector<double>> X(orders.size(), std::vector<double>(en.size()));
    std::vector<double> y(en.size());
    for (std::size_t i = 0; i < en.size(); ++i) {
        y[i] = en[i].trace * std::pow(en[i].p, -d);
        for (std::size_t j = 0; j < orders.size(); ++j)
            X[j][i] = std::pow(en[i].p, -orders[j]);
    }
    FitResult fr = least_squares(X, y);
    ExpansionFit out;
    out.orders = orders;
    out.coef = fr.coef;
    out.stderrs = fr.stderrs;
    out.resid_norm = fr.resid_norm;
    out.cond = fr.cond;
    return out;
}

std::vector<double> diagonal_kernel_grid(const EigenWindow& win, const TorusDomain& dom,
                                         const TestFunction& phi) {
    if (win.vectors.size() != win.values.size())
        throw std::runtime_error("diagonal kernel requires eigenvectors");
    long m = dom.grid_size();
    double cell = dom.volume() / static_cast<double>(m);
    std::vector<double> out(m, 0.0);
    for (std::size_t k = 0; k < win.values.size(); ++k) {
        double w = phi.eval(win.values[k], 0);
        if (w == 0.0) continue;
        const GridFunction& v = win.vectors[k];
        if (static_cast<long>(v.size()) != m)
            throw std::runtime_error("eigenvector length does not match grid");
        for (long i = 0; i < m; ++i) out[i] += w * std::norm(v[i]) / cell;
    }
    return out;
}

namespace {

long flat_index(const TorusDomain& dom, const std::array<double, 3>& frac) {
    long idx = 0;
    for (int a = 0; a < dom.d; ++a) {
        double pos = frac[a] * dom.grid_n;
        long m = std::lround(pos);
        if (std::abs(pos - m) > 1e-9)
            throw std::invalid_argument("sample point is not on the grid");
        m = ((m % dom.grid_n) + dom.grid_n) % dom.grid_n;
        idx = idx * dom.grid_n + m;
    }
    return idx;
}

}  // namespace

KernelCheckResult kernel_check(const Problem& prob, const KernelCheckSettings& ks) {
    prob.validate();
    const TraceSettings& ts = ks.trace;
    double lo = prob.phi.support_lo(), hi = prob.phi.support_hi();
    KernelCheckResult res;
    res.residuals.assign(ks.points_frac.size(), {});
    for (double p : ks.ps) {
        int grid_n = grid_rule(prob, p, hi, ts.margin, ts.round_to);
        TorusDomain dom = prob.dom;
        dom.grid_n = grid_n;
        if (dom.grid_size() > ts.eig.dense_cap)
            throw std::runtime_error("kernel check requires a dense-feasible grid");
        auto op = make_op(prob, p, grid_n);
        EigResult eg = dense_hermitian_eig(op->assemble_dense(ts.eig.dense_cap), true);
        EigenWindow win = dense_window(eg, lo, hi, true);
        std::vector<double> kgrid = diagonal_kernel_grid(win, dom, prob.phi);
        double tr = spectral_sum(win.values, prob.phi);
        double kmean = 0.0;
        for (double v : kgrid) kmean += v;
        kmean = kmean / static_cast<double>(kgrid.size()) * dom.volume();
        res.max_trace_kernel_rel =
            std::max(res.max_trace_kernel_rel,
                     std::abs(kmean - tr) / std::max(std::abs(tr), 1e-300));
        Certificate cert;
        if (ts.certify)
            cert = resolution_certificate(prob, p, grid_n, lo, hi, win.values, ts.eig);
        res.certs.push_back(cert);
        double pd = std::pow(p, -prob.dom.d);
        for (std::size_t q = 0; q < ks.points_frac.size(); ++q) {
            long idx = flat_index(dom, ks.points_frac[q]);
            std::array<double, 3> x = dom.grid_point(idx);
            double f0 = f0_pointwise(prob.V, x, prob.phi, prob.dom.d);
            double f2 = f2_pointwise(prob.B, prob.V, x, prob.phi, prob.dom.d);
            double r = std::abs(kgrid[idx] * pd - f0 - f2 / (p * p));
            res.residuals[q].push_back(r);
        }
        res.ps.push_back(p);
        res.grids.push_back(grid_n);
    }
    std::vector<double> lp;
    for (double p : res.ps) lp.push_back(std::log(p));
    res.min_order = std::numeric_limits<double>::infinity();
    for (const auto& rr : res.residuals) {
        std::vector<double> lr;
        for (double r : rr) lr.push_back(std::log(std::max(r, 1e-300)));
        double ord = -line_slope(lp, lr);
        res.orders.push_back(ord);
        res.min_order = std::min(res.min_order, ord);
    }
    return res;
}

namespace {

// Central finite-difference weights for the r-th derivative on offsets -m..m.
std::vector<double> fd_stencil(int m, int r) {
    int n = 2 * m + 1;
    CMat vm(n);
    for (int q = 0; q < n; ++q)
        for (int c = 0; c < n; ++c) vm.at(q, c) = std::pow(static_cast<double>(c - m), q);
    std::vector<cplx> rhs(n, cplx(0.0));
    double fact = 1.0;
    for (int i = 2; i <= r; ++i) fact *= i;
    rhs[r] = fact;
    LuFactors lu = lu_factor(vm);
    lu_solve_inplace(lu, rhs);
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = rhs[i].real();
    return w;
}

}  // namespace

GaugeCheckResult gauge_check(const MagneticField& B, const ScalarField& V,
                             const GaugeCheckSettings& gs) {
    B.check_zero_flux();
    if (B.dim() == 3) B.check_closed();
    const int d = B.dim();
    const auto& periods = V.periods();
    Rng rng(gs.seed);
    GaugeCheckResult res;

    auto rand_x = [&]() {
        std::array<double, 3> x{0.0, 0.0, 0.0};
        for (int a = 0; a < d; ++a) x[a] = rng.uniform(0.0, periods[a]);
        return x;
    };
    auto rand_z = [&](double box) {
        std::array<double, 3> z{0.0, 0.0, 0.0};
        for (int a = 0; a < d; ++a) z[a] = rng.uniform(-box, box);
        return z;
    };

    for (int i = 0; i < gs.n_points; ++i) {
        std::array<double, 3> x0 = rand_x(), Z = rand_z(2.0);
        std::array<double, 3> A = fock_schwinger_potential(B, x0, Z);
        double s = 0.0, nz = 0.0, na = 0.0;
        for (int a = 0; a < d; ++a) {
            s += A[a] * Z[a];
            nz += Z[a] * Z[a];
            na += A[a] * A[a];
        }
        double denom = std::max(std::sqrt(nz * na), 1e-300);
        res.transversality_max = std::max(res.transversality_max, std::abs(s) / denom);
    }

    const int m = 5;
    std::array<std::vector<double>, 4> w;
    for (int r = 1; r <= 3; ++r) w[r] = fd_stencil(m, r);
    for (int t = 0; t < gs.n_taylor; ++t) {
        std::array<double, 3> x0 = rand_x(), Z = rand_z(1.0);
        std::array<std::array<double, 3>, 2 * m + 1> samples;
        for (int o = -m; o <= m; ++o) {
            std::array<double, 3> ez{0.0, 0.0, 0.0};
            for (int a = 0; a < d; ++a) ez[a] = o * gs.fd_step * Z[a];
            samples[o + m] = fock_schwinger_potential(B, x0, ez);
        }
        for (int r = 1; r <= 3; ++r) {
            HomogeneousTaylorTerm term = taylor_vector_potential(B, x0, r);
            std::array<double, 3> ana = term.eval(Z);
            double scale = 0.0, diff = 0.0;
            for (int a = 0; a < d; ++a) scale = std::max(scale, std::abs(ana[a]));
            double hr = std::pow(gs.fd_step, r);
            double fact = r == 3 ? 6.0 : r == 2 ? 2.0 : 1.0;
            for (int a = 0; a < d; ++a) {
                double num = 0.0;
                for (int o = -m; o <= m; ++o) num += w[r][o + m] * samples[o + m][a];
                // the stencil returns g^(r)(0); the homogeneous term of
                // degree r carries 1/r! of that derivative
                num /= hr * fact;
                diff = std::max(diff, std::abs(num - ana[a]));
            }
            res.taylor_max_rel = std::max(res.taylor_max_rel, diff / std::max(scale, 1e-6));
        }
    }

    for (int t = 0; t < 20; ++t) {
        std::array<double, 3> x0 = rand_x(), Z = rand_z(1.0);
        double lam = rng.uniform(0.3, 0.9);
        std::array<double, 3> lz{0.0, 0.0, 0.0};
        for (int a = 0; a < d; ++a) lz[a] = lam * Z[a];
        for (int r = 1; r <= 3; ++r) {
            HomogeneousTaylorTerm term = taylor_vector_potential(B, x0, r);
            std::array<double, 3> v = term.eval(Z), vl = term.eval(lz);
            double pw = std::pow(lam, r);
            double scale = 0.0, diff = 0.0;
            for (int a = 0; a < d; ++a) {
                scale = std::max(scale, std::abs(v[a]));
                diff = std::max(diff, std::abs(vl[a] - pw * v[a]));
            }
            res.homogeneity_max =
                std::max(res.homogeneity_max, diff / std::max(scale, 1e-300));
        }
    }

    {
        std::array<double, 3> x0 = rand_x();
        std::vector<std::array<double, 3>> dirs;
        for (int i = 0; i < 4; ++i) dirs.push_back(rand_z(1.0));
        std::vector<HomogeneousTaylorTerm> terms;
        for (int r = 1; r <= 3; ++r) terms.push_back(taylor_vector_potential(B, x0, r));
        for (int mm = 1; mm <= 3; ++mm) {
            std::vector<double> lt, lr;
            for (int e = 3; e <= 8; ++e) {
                double t = std::ldexp(1.0, -e);
                double rem = 0.0;
                for (const auto& u : dirs) {
                    std::array<double, 3> tz{0.0, 0.0, 0.0};
                    for (int a = 0; a < d; ++a) tz[a] = t * u[a];
                    std::array<double, 3> av = fock_schwinger_potential(B, x0, tz);
                    for (int r = 1; r <= mm; ++r) {
                        std::array<double, 3> tv = terms[r - 1].eval(tz);
                        for (int a = 0; a < d; ++a) av[a] -= tv[a];
                    }
                    for (int a = 0; a < d; ++a) rem = std::max(rem, std::abs(av[a]));
                }
                if (rem < 1e-14) break;
                lt.push_back(std::log(t));
                lr.push_back(std::log(rem));
            }
            res.truncation_orders[mm - 1] =
                lt.size() >= 3 ? line_slope(lt, lr) : static_cast<double>(mm + 1);
        }
    }

    VectorPotential A = potential_from_field(B, periods);
    res.curl_defect_max = curl_defect(A, B);
    const std::vector<double>& w1 = w[1];
    for (int t = 0; t < gs.n_taylor; ++t) {
        std::array<double, 3> x0 = rand_x(), Z = rand_z(1.0);
        std::array<double, 3> fs = fock_schwinger_potential(B, x0, Z);
        for (int a = 0; a < d; ++a) {
            double dphi = 0.0;
            for (int o = -m; o <= m; ++o) {
                std::array<double, 3> zo = Z;
                zo[a] += o * gs.fd_step;
                dphi += w1[o + m] * gauge_phase(A, x0, zo);
            }
            dphi /= gs.fd_step;
            std::array<double, 3> xz{0.0, 0.0, 0.0};
            for (int b = 0; b < d; ++b) xz[b] = x0[b] + Z[b];
            double lhs = A.A[a].eval(xz) + dphi;
            res.gauge_relation_max = std::max(res.gauge_relation_max, std::abs(lhs - fs[a]));
        }
    }

    std::vector<TrigMode> tmodes;
    for (int a = 0; a < d; ++a) {
        TrigMode tm;
        tm.k = {0, 0, 0};
        tm.k[a] = 1;
        tm.c = gs.theta_amp * rng.uniform(-1.0, 1.0);
        tm.s = gs.theta_amp * rng.uniform(-1.0, 1.0);
        tmodes.push_back(tm);
    }
    ScalarField theta(d, periods, 0.0, tmodes);
    VectorPotential A2;
    A2.d = d;
    for (int a = 0; a < d; ++a) A2.A[a] = A.A[a] + theta.deriv(a);
    TorusDomain dom;
    dom.d = d;
    dom.periods = periods;
    dom.grid_n = gs.spectrum_grid;
    res.spectrum_dim = dom.grid_size();
    SpectralOperator op1(dom, A, V, gs.spectrum_p);
    SpectralOperator op2(dom, A2, V, gs.spectrum_p);
    EigResult e1 = dense_hermitian_eig(op1.assemble_dense(res.spectrum_dim), false);
    EigResult e2 = dense_hermitian_eig(op2.assemble_dense(res.spectrum_dim), false);
    double lmin = periods[0];
    for (int a = 1; a < d; ++a) lmin = std::min(lmin, periods[a]);
    double ecap = PI * gs.spectrum_grid / (gs.spectrum_margin * gs.spectrum_p * lmin);
    ecap *= ecap;
    for (std::size_t i = 0; i < e1.values.size() && e1.values[i] <= ecap; ++i) {
        res.spectrum_invariance =
            std::max(res.spectrum_invariance, std::abs(e1.values[i] - e2.values[i]));
        ++res.spectrum_compared;
    }
    return res;
}

ExpandCheckResult expand_check(const MagneticField& B, const ScalarField& V,
                               const ExpandCheckSettings& es) {
    const int d = B.dim();
    GaussPolyInput u;
    u.d = d;
    u.q.add({0, 0, 0}, cplx(1.0));
    u.q.add({1, 0, 0}, cplx(0.7));
    u.q.add({0, 1, 0}, cplx(-0.4));
    u.q.add({1, 1, 0}, cplx(0.3));
    if (d == 3) u.q.add({0, 0, 1}, cplx(0.2));
    u.q.canonicalize();
    Rng rng(es.seed);
    std::vector<std::array<double, 3>> zs;
    for (int i = 0; i < es.n_samples; ++i) {
        std::array<double, 3> z{0.0, 0.0, 0.0};
        for (int a = 0; a < d; ++a) z[a] = rng.uniform(-es.sample_box, es.sample_box);
        zs.push_back(z);
    }
    ExpandCheckResult out;
    for (int m = 0; m <= 2; ++m) {
        OrderCheckResult r = expansion_order_check(B, V, es.x0, u, es.h_ladder, m, zs);
        out.slopes[m] = r.slope;
        out.saturated[m] = r.saturated;
    }
    return out;
}

HsCheckResult hs_check(const TestFunction& phi, const HsCheckSettings& hs) {
    Rng rng(hs.seed);
    const int n = hs.dim;
    CMat g(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = cplx(rng.normal(), rng.normal());
    CMat h0(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h0.at(i, j) = 0.5 * (g.at(i, j) + std::conj(g.at(j, i)));
    EigResult e = dense_hermitian_eig(h0, true);
    std::vector<double> lam(n);
    for (int i = 0; i < n; ++i)
        lam[i] = hs.window_lo + (hs.window_hi - hs.window_lo) * (i + 0.5) / n;
    auto assemble = [&](const std::vector<double>& f) {
        CMat out(n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                cplx vik = e.vectors.at(i, k) * f[k];
                for (int j = 0; j < n; ++j)
                    out.at(i, j) += vik * std::conj(e.vectors.at(j, k));
            }
        return out;
    };
    CMat H = assemble(lam);
    std::vector<CMat> fam = hs_apply_family(phi, H, 2, hs.N, hs.delta, hs.quad_n);
    HsCheckResult res;
    for (int k = 0; k <= 2; ++k) {
        std::vector<double> f(n);
        for (int i = 0; i < n; ++i) f[i] = phi.eval(lam[i], k);
        CMat exact = assemble(f);
        for (long i = 0; i < static_cast<long>(n) * n; ++i) exact.a[i] -= fam[k].a[i];
        double err = spectral_norm(exact);
        if (k == 0)
            res.apply_err = err;
        else if (k == 1)
            res.d1_err = err;
        else
            res.d2_err = err;
    }
    return res;
}

}  // namespace mag
