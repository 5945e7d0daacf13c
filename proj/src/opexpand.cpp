#include "magtrace/opexpand.hpp"

#include <algorithm>
#include <cmath>

namespace mag {

cplx CPolynomial::eval(const std::array<double, 3>& Z) const {
    cplx v = 0.0;
    for (const auto& t : terms) {
        double m = 1.0;
        for (int i = 0; i < 3; ++i)
            for (int e = 0; e < t.expo[i]; ++e) m *= Z[i];
        v += t.coeff * m;
    }
    return v;
}

int CPolynomial::degree() const {
    int deg = 0;
    for (const auto& t : terms) deg = std::max(deg, t.expo[0] + t.expo[1] + t.expo[2]);
    return deg;
}

void CPolynomial::add(std::array<int, 3> expo, cplx coeff) {
    terms.push_back({expo, coeff});
}

void CPolynomial::canonicalize() {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.expo < b.expo; });
    std::vector<Term> out;
    for (const auto& t : terms) {
        if (!out.empty() && out.back().expo == t.expo)
            out.back().coeff += t.coeff;
        else
            out.push_back(t);
    }
    std::erase_if(out, [](const Term& t) { return t.coeff == cplx(0.0); });
    terms = std::move(out);
}

int PolyDiffOp::weight() const {
    int w = 0;
    for (const auto& t : terms)
        w = std::max(w, t.poly.degree() + t.beta[0] + t.beta[1] + t.beta[2]);
    return w;
}

void PolyDiffOp::canonicalize() {
    for (auto& t : terms) t.poly.canonicalize();
    std::erase_if(terms, [](const Term& t) { return t.poly.terms.empty(); });
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return a.beta < b.beta; });
}

cplx GaussPolyInput::eval(const std::array<double, 3>& Z) const {
    double z2 = 0.0;
    for (int i = 0; i < d; ++i) z2 += Z[i] * Z[i];
    return q.eval(Z) * std::exp(-0.5 * z2);
}

GaussPolyInput GaussPolyInput::deriv(int axis) const {
    GaussPolyInput r;
    r.d = d;
    for (const auto& t : q.terms) {
        if (t.expo[axis] > 0) {
            auto e = t.expo;
            e[axis] -= 1;
            r.q.add(e, t.coeff * static_cast<double>(t.expo[axis]));
        }
        auto e = t.expo;
        e[axis] += 1;
        r.q.add(e, -t.coeff);
    }
    r.q.canonicalize();
    return r;
}

PolyDiffOp model_operator(int r, const std::array<double, 3>& x0,
                          const MagneticField& B, const ScalarField& V) {
    if (r < 0 || r > 2) throw std::invalid_argument("model_operator: r outside {0,1,2}");
    const int d = V.dim();
    PolyDiffOp op;
    op.d = d;

    auto unit = [](int axis, int count) {
        std::array<int, 3> e{0, 0, 0};
        e[axis] = count;
        return e;
    };

    if (r == 0) {
        for (int j = 0; j < d; ++j) {
            PolyDiffOp::Term t;
            t.beta = unit(j, 2);
            t.poly.add({0, 0, 0}, -1.0);
            op.terms.push_back(std::move(t));
        }
        PolyDiffOp::Term t;
        t.poly.add({0, 0, 0}, V.eval(x0));
        op.terms.push_back(std::move(t));
    } else if (r == 1) {
        for (int j = 0; j < d; ++j) {
            PolyDiffOp::Term t;
            t.beta = unit(j, 1);
            for (int k = 0; k < d; ++k) {
                double b = B.eval(k, j, x0);
                if (b != 0.0) t.poly.add(unit(k, 1), cplx(0.0, b));
            }
            if (!t.poly.terms.empty()) op.terms.push_back(std::move(t));
        }
        PolyDiffOp::Term t;
        for (int j = 0; j < d; ++j) {
            double dv = V.deriv(j).eval(x0);
            if (dv != 0.0) t.poly.add(unit(j, 1), dv);
        }
        if (!t.poly.terms.empty()) op.terms.push_back(std::move(t));
    } else {
        for (int j = 0; j < d; ++j) {
            PolyDiffOp::Term t;
            t.beta = unit(j, 1);
            for (int k = 0; k < d; ++k) {
                ScalarField bkj = B.component(k, j);
                for (int l = 0; l < d; ++l) {
                    double db = bkj.deriv(l).eval(x0);
                    if (db == 0.0) continue;
                    auto e = unit(k, 1);
                    e[l] += 1;
                    t.poly.add(e, cplx(0.0, 2.0 / 3.0 * db));
                }
            }
            if (!t.poly.terms.empty()) op.terms.push_back(std::move(t));
        }
        PolyDiffOp::Term s;
        // (i/3) sum d_jB_kj Z_k
        for (int k = 0; k < d; ++k) {
            double acc = 0.0;
            for (int j = 0; j < d; ++j) acc += B.component(k, j).deriv(j).eval(x0);
            if (acc != 0.0) s.poly.add(unit(k, 1), cplx(0.0, acc / 3.0));
        }
        // (1/4) sum_j (sum_k B_kj Z_k)^2
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) {
                    double v = 0.25 * B.eval(k, j, x0) * B.eval(l, j, x0);
                    if (v == 0.0) continue;
                    auto e = unit(k, 1);
                    e[l] += 1;
                    s.poly.add(e, v);
                }
        // (1/2) sum d_j d_k V Z_j Z_k
        for (int j = 0; j < d; ++j)
            for (int k = 0; k < d; ++k) {
                double v = 0.5 * V.deriv(j).deriv(k).eval(x0);
                if (v == 0.0) continue;
                auto e = unit(j, 1);
                e[k] += 1;
                s.poly.add(e, v);
            }
        if (!s.poly.terms.empty()) op.terms.push_back(std::move(s));
    }
    op.canonicalize();
    return op;
}

cplx apply_polydiffop(const PolyDiffOp& op, const GaussPolyInput& u,
                      const std::array<double, 3>& Z) {
    cplx v = 0.0;
    for (const auto& t : op.terms) {
        GaussPolyInput du = u;
        for (int axis = 0; axis < 3; ++axis)
            for (int e = 0; e < t.beta[axis]; ++e) du = du.deriv(axis);
        v += t.poly.eval(Z) * du.eval(Z);
    }
    return v;
}

cplx rescaled_apply(const MagneticField& B, const ScalarField& V,
                    const std::array<double, 3>& x0, double h,
                    const GaussPolyInput& u, const std::array<double, 3>& Z) {
    const int d = V.dim();
    std::array<double, 3> hZ{h * Z[0], h * Z[1], h * Z[2]};
    std::array<double, 3> A = fock_schwinger_potential(B, x0, hZ);
    double divA = fock_schwinger_divergence(B, x0, hZ);
    std::array<double, 3> xs{x0[0] + hZ[0], x0[1] + hZ[1], x0[2] + hZ[2]};

    cplx val = 0.0;
    double a2 = 0.0;
    for (int j = 0; j < d; ++j) {
        GaussPolyInput du = u.deriv(j);
        val += -du.deriv(j).eval(Z) + cplx(0.0, 2.0 * A[j]) * du.eval(Z);
        a2 += A[j] * A[j];
    }
    val += (cplx(0.0, h * divA) + a2 + V.eval(xs)) * u.eval(Z);
    return val;
}

OrderCheckResult expansion_order_check(const MagneticField& B, const ScalarField& V,
                                       const std::array<double, 3>& x0,
                                       const GaussPolyInput& u,
                                       const std::vector<double>& h_ladder, int m,
                                       const std::vector<std::array<double, 3>>& sample_Z) {
    if (h_ladder.size() < 5)
        throw std::invalid_argument("expansion_order_check: need >= 5 ladder entries");
    std::vector<PolyDiffOp> ops;
    for (int r = 0; r <= m; ++r) ops.push_back(model_operator(r, x0, B, V));

    OrderCheckResult res;
    std::vector<double> lh, lr;
    for (double h : h_ladder) {
        double sup = 0.0;
        for (const auto& Z : sample_Z) {
            cplx v = rescaled_apply(B, V, x0, h, u, Z);
            double hr = 1.0;
            for (int r = 0; r <= m; ++r) {
                v -= hr * apply_polydiffop(ops[r], u, Z);
                hr *= h;
            }
            sup = std::max(sup, std::abs(v));
        }
        res.remainders.push_back(sup);
        if (sup < 1e-13) {
            res.saturated = true;
            continue;
        }
        lh.push_back(std::log(h));
        lr.push_back(std::log(sup));
    }
    if (lh.size() >= 2) res.slope = line_slope(lh, lr);
    return res;
}

}  // namespace mag
