#include "magtrace/hsfc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "magtrace/eig.hpp"

namespace mag {

namespace {

double sigma(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double sigma_prime(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

double smoothstep(double t) {
    double a = sigma(t), b = sigma(1.0 - t);
    return a / (a + b);
}

double smoothstep_prime(double t) {
    double a = sigma(t), b = sigma(1.0 - t);
    double ap = sigma_prime(t), bp = sigma_prime(1.0 - t);
    double s = a + b;
    return (ap * b + a * bp) / (s * s);
}

}  // namespace

double cutoff_chi(double y) {
    double a = std::abs(y);
    if (a <= 0.5) return 1.0;
    if (a >= 1.0) return 0.0;
    return smoothstep(2.0 * (1.0 - a));
}

double cutoff_chi_prime(double y) {
    double a = std::abs(y);
    if (a <= 0.5 || a >= 1.0) return 0.0;
    double s = smoothstep_prime(2.0 * (1.0 - a)) * (-2.0);
    return y > 0.0 ? s : -s;
}

AlmostAnalyticExtension::AlmostAnalyticExtension(TestFunction phi, int N, double delta)
    : phi_(std::move(phi)), N_(N), delta_(delta) {
    if (N < 1 || N > 4) throw std::invalid_argument("extension order must lie in [1, 4]");
    if (N + 1 > TestFunction::max_derivative)
        throw std::invalid_argument("extension order exceeds available derivatives");
    if (!(delta > 0.0)) throw std::invalid_argument("extension width must be positive");
}

cplx AlmostAnalyticExtension::ext(double x, double y) const {
    double c = cutoff_chi(y / delta_);
    if (c == 0.0) return cplx(0.0);
    cplx sum(0.0);
    cplx iyk(1.0);
    double fact = 1.0;
    for (int k = 0; k <= N_; ++k) {
        if (k > 0) {
            iyk *= cplx(0.0, y);
            fact *= k;
        }
        sum += phi_.eval(x, k) * iyk / fact;
    }
    return c * sum;
}

cplx AlmostAnalyticExtension::dbar(double x, double y) const {
    double c = cutoff_chi(y / delta_);
    double cp = cutoff_chi_prime(y / delta_);
    if (c == 0.0 && cp == 0.0) return cplx(0.0);
    cplx sum(0.0);
    cplx iyk(1.0);
    double fact = 1.0;
    for (int k = 0; k <= N_; ++k) {
        if (k > 0) {
            iyk *= cplx(0.0, y);
            fact *= k;
        }
        if (cp != 0.0) sum += phi_.eval(x, k) * iyk / fact;
    }
    cplx out(0.0);
    if (c != 0.0) out += c * phi_.eval(x, N_ + 1) * iyk / fact;
    if (cp != 0.0) out += cplx(0.0, 1.0 / delta_) * cp * sum;
    return 0.5 * out;
}

HsQuadrature hs_quadrature(const TestFunction& phi, double delta, int quad_n) {
    if (quad_n < 2) throw std::invalid_argument("quad_n must be at least 2");
    if (!(delta > 0.0)) throw std::invalid_argument("extension width must be positive");
    HsQuadrature q;
    double lo = phi.support_lo(), hi = phi.support_hi();
    const int panels = 16;
    double w = (hi - lo) / panels;
    for (int p = 0; p < panels; ++p) {
        Quad1D g = gl_nodes(quad_n, lo + p * w, lo + (p + 1) * w);
        q.xs.insert(q.xs.end(), g.x.begin(), g.x.end());
        q.xw.insert(q.xw.end(), g.w.begin(), g.w.end());
    }
    const double yedges[3] = {0.0, 0.5 * delta, delta};
    for (int p = 0; p < 2; ++p) {
        Quad1D g = gl_nodes(quad_n, yedges[p], yedges[p + 1]);
        q.ys.insert(q.ys.end(), g.x.begin(), g.x.end());
        q.yw.insert(q.yw.end(), g.w.begin(), g.w.end());
    }
    return q;
}

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// Banded LU of (z - T) for real symmetric tridiagonal T, partial pivoting
// between adjacent rows (LAPACK gttrf/gtts2 layout).
struct TriLU {
    std::vector<cplx> dl, dd, du, du2;
    std::vector<int> swap2;  // 1 if rows i, i+1 were interchanged

    TriLU(cplx z, const std::vector<double>& diag, const std::vector<double>& sub) {
        const std::size_t n = diag.size();
        dd.resize(n);
        dl.assign(n > 0 ? n - 1 : 0, cplx(0.0));
        du.assign(n > 0 ? n - 1 : 0, cplx(0.0));
        du2.assign(n > 1 ? n - 2 : 0, cplx(0.0));
        swap2.assign(n > 0 ? n - 1 : 0, 0);
        for (std::size_t i = 0; i < n; ++i) dd[i] = z - diag[i];
        for (std::size_t i = 0; i + 1 < n; ++i) {
            dl[i] = -sub[i];
            du[i] = -sub[i];
        }
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(dd[i]) >= std::abs(dl[i])) {
                if (dd[i] != cplx(0.0)) {
                    cplx f = dl[i] / dd[i];
                    dl[i] = f;
                    dd[i + 1] -= f * du[i];
                }
            } else {
                cplx f = dd[i] / dl[i];
                dd[i] = dl[i];
                dl[i] = f;
                cplx t = du[i];
                du[i] = dd[i + 1];
                dd[i + 1] = t - f * dd[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -f * du[i + 1];
                }
                swap2[i] = 1;
            }
        }
    }

    void solve(cplx* b) const {
        const std::size_t n = dd.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!swap2[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                cplx t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - dl[i] * b[i];
            }
        }
        b[n - 1] /= dd[n - 1];
        if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / dd[n - 2];
        for (std::size_t i = n - 1; i-- > 1;)
            b[i - 1] = (b[i - 1] - du[i - 1] * b[i] - du2[i - 1] * b[i + 1]) / dd[i - 1];
    }
};

}  // namespace

// Accumulates -(k!/pi) sum w dbar(z) (z - H)^{-k-1} for k = 0..kmax in one node
// sweep over the upper half plane; the lower half enters through the exact
// identity (conj(z) - H)^{-1} = ((z - H)^{-1})^H as the conjugate transpose of
// each accumulator. Everything runs in the Householder tridiagonal frame, where
// each resolvent column is a banded solve, and rotates back at the end.
std::vector<CMat> hs_apply_family(const TestFunction& phi, const CMat& H, int kmax, int N,
                                  double delta, int quad_n, long* skipped) {
    if (kmax < 0 || kmax > 3) throw std::invalid_argument("derivative order must lie in [0, 3]");
    const int n = H.n;
    AlmostAnalyticExtension ext(phi, N, delta);
    HsQuadrature q = hs_quadrature(phi, delta, quad_n);
    if (skipped) *skipped = 0;
    Tridiag T = tridiagonalize(H, true);
    std::vector<CMat> acc(kmax + 1, CMat(n));
    std::vector<cplx> col(n);
    for (std::size_t ix = 0; ix < q.xs.size(); ++ix) {
        double x = q.xs[ix];
        for (std::size_t iy = 0; iy < q.ys.size(); ++iy) {
            double y = q.ys[iy];
            if (std::abs(y) < 1e-14) {
                if (skipped) ++*skipped;
                continue;
            }
            cplx g = ext.dbar(x, y);
            double w = q.xw[ix] * q.yw[iy];
            if (std::abs(g) * w < 1e-300) continue;
            TriLU lu(cplx(x, y), T.diag, T.sub);
            cplx f = w * g;
            for (int j = 0; j < n; ++j) {
                std::fill(col.begin(), col.end(), cplx(0.0));
                col[j] = 1.0;
                for (int k = 0; k <= kmax; ++k) {
                    lu.solve(col.data());
                    for (int i = 0; i < n; ++i) acc[k].at(i, j) += f * col[i];
                }
            }
        }
    }
    std::vector<CMat> out(kmax + 1, CMat(n));
    CMat sym(n);
    for (int k = 0; k <= kmax; ++k) {
        double s = -factorial(k) / PI;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                sym.at(i, j) = s * (acc[k].at(i, j) + std::conj(acc[k].at(j, i)));
        out[k] = matmul(matmul(T.Q, sym), adjoint(T.Q));
    }
    return out;
}

CMat hs_apply(const TestFunction& phi, const CMat& H, int N, double delta, int quad_n) {
    return std::move(hs_apply_family(phi, H, 0, N, delta, quad_n)[0]);
}

CMat hs_derivative(const TestFunction& phi, const CMat& H, int k, int N, double delta,
                   int quad_n) {
    return std::move(hs_apply_family(phi, H, k, N, delta, quad_n)[k]);
}

namespace {

// tr (z - T)^{-1} for real symmetric tridiagonal T by the two-sided LDL sweep.
cplx tridiag_resolvent_trace(const std::vector<double>& diag, const std::vector<double>& sub,
                             cplx z, std::vector<cplx>& dp, std::vector<cplx>& dm) {
    const std::size_t n = diag.size();
    dp.resize(n);
    dm.resize(n);
    dp[0] = z - diag[0];
    for (std::size_t i = 1; i < n; ++i)
        dp[i] = (z - diag[i]) - sub[i - 1] * sub[i - 1] / dp[i - 1];
    dm[n - 1] = z - diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
        dm[i] = (z - diag[i]) - sub[i] * sub[i] / dm[i + 1];
    cplx tr(0.0);
    for (std::size_t i = 0; i < n; ++i) tr += 1.0 / (dp[i] + dm[i] - (z - diag[i]));
    return tr;
}

}  // namespace

HsTraceResult hs_trace_tridiag(const TestFunction& phi, const std::vector<double>& diag,
                               const std::vector<double>& sub, int N, double delta,
                               int quad_n) {
    if (diag.empty()) throw std::invalid_argument("empty tridiagonal");
    if (sub.size() + 1 != diag.size()) throw std::invalid_argument("tridiagonal shape mismatch");
    AlmostAnalyticExtension ext(phi, N, delta);
    HsQuadrature q = hs_quadrature(phi, delta, quad_n);
    HsTraceResult res;
    cplx acc(0.0);
    std::vector<cplx> dp, dm;
    // both half planes evaluated independently so the imaginary part is a
    // genuine cancellation diagnostic
    for (std::size_t ix = 0; ix < q.xs.size(); ++ix) {
        double x = q.xs[ix];
        for (std::size_t iy = 0; iy < q.ys.size(); ++iy) {
            for (int sgn : {1, -1}) {
                double y = sgn * q.ys[iy];
                if (std::abs(y) < 1e-14) {
                    ++res.skipped_nodes;
                    continue;
                }
                cplx g = ext.dbar(x, y);
                double w = q.xw[ix] * q.yw[iy];
                if (std::abs(g) * w < 1e-300) continue;
                acc += w * g * tridiag_resolvent_trace(diag, sub, cplx(x, y), dp, dm);
            }
        }
    }
    acc *= -1.0 / PI;
    res.value = acc.real();
    res.imag_defect = std::abs(acc.imag());
    return res;
}

HsTraceResult hs_trace_matrix(const TestFunction& phi, const CMat& H, int N, double delta,
                              int quad_n) {
    Tridiag t = tridiagonalize(H, false);
    return hs_trace_tridiag(phi, t.diag, t.sub, N, delta, quad_n);
}

HsTraceResult hs_trace(const TestFunction& phi, const SpectralOperator& op, int N,
                       double delta, int quad_n, long dense_cap) {
    long dims = op.domain().grid_size();
    if (dims > dense_cap) throw std::runtime_error("operator dimension exceeds dense trace cap");
    CMat H = op.assemble_dense(dense_cap);
    return hs_trace_matrix(phi, H, N, delta, quad_n);
}

}  // namespace mag
