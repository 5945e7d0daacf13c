#include "magtrace/util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace mag {

Quad1D gl_nodes(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gl_nodes: n < 1");
    Quad1D q;
    q.x.resize(n);
    q.w.resize(n);
    // Newton iteration on P_n, nodes symmetric about 0.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double t = std::cos(PI * (i + 0.75) / (n + 0.5));
        double p0 = 0, p1 = 0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
            }
            double dp = n * (t * p0 - p1) / (t * t - 1.0);
            double dt = p0 / dp;
            t -= dt;
            if (std::abs(dt) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = 0.0;
        for (int j = 0; j < n; ++j) {
            double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j + 1.0) * t * p1 - j * p2) / (j + 1.0);
        }
        double dp = n * (t * p0 - p1) / (t * t - 1.0);
        double wi = 2.0 / ((1.0 - t * t) * dp * dp);
        double xm = 0.5 * (a + b), xl = 0.5 * (b - a);
        q.x[i] = xm - xl * t;
        q.x[n - 1 - i] = xm + xl * t;
        q.w[i] = q.w[n - 1 - i] = xl * wi;
    }
    return q;
}

double Poly::eval(double x) const {
    double v = 0.0;
    for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
    return v;
}

Poly Poly::deriv() const {
    Poly r;
    if (c.size() <= 1) return r;
    r.c.resize(c.size() - 1);
    for (size_t i = 1; i < c.size(); ++i) r.c[i - 1] = c[i] * static_cast<double>(i);
    return r;
}

Poly Poly::operator*(const Poly& o) const {
    Poly r;
    if (c.empty() || o.c.empty()) return r;
    r.c.assign(c.size() + o.c.size() - 1, 0.0);
    for (size_t i = 0; i < c.size(); ++i)
        for (size_t j = 0; j < o.c.size(); ++j) r.c[i + j] += c[i] * o.c[j];
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.c.assign(std::max(c.size(), o.c.size()), 0.0);
    for (size_t i = 0; i < c.size(); ++i) r.c[i] += c[i];
    for (size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    return r;
}

Poly Poly::scaled(double s) const {
    Poly r = *this;
    for (double& v : r.c) v *= s;
    return r;
}

void Poly::trim() {
    while (!c.empty() && c.back() == 0.0) c.pop_back();
}

namespace {

// Jacobi eigenvalues of a small symmetric matrix (row-major n x n).
std::vector<double> sym_eigvals(std::vector<double> m, int n) {
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += m[i * n + j] * m[i * n + j];
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = m[p * n + q];
                if (std::abs(apq) < 1e-300) continue;
                double theta = (m[q * n + q] - m[p * n + p]) / (2.0 * apq);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double cth = 1.0 / std::sqrt(t * t + 1.0), sth = t * cth;
                for (int k = 0; k < n; ++k) {
                    double mkp = m[k * n + p], mkq = m[k * n + q];
                    m[k * n + p] = cth * mkp - sth * mkq;
                    m[k * n + q] = sth * mkp + cth * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    double mpk = m[p * n + k], mqk = m[q * n + k];
                    m[p * n + k] = cth * mpk - sth * mqk;
                    m[q * n + k] = sth * mpk + cth * mqk;
                }
            }
    }
    std::vector<double> ev(n);
    for (int i = 0; i < n; ++i) ev[i] = m[i * n + i];
    std::sort(ev.begin(), ev.end());
    return ev;
}

}  // namespace

FitResult least_squares(const std::vector<std::vector<double>>& X,
                        const std::vector<double>& y) {
    const int m = static_cast<int>(y.size());
    const int n = static_cast<int>(X.size());
    if (n == 0 || m < n) throw std::invalid_argument("least_squares: shape");
    for (auto& col : X)
        if (static_cast<int>(col.size()) != m)
            throw std::invalid_argument("least_squares: ragged design matrix");

    std::vector<double> xtx(static_cast<size_t>(n) * n, 0.0), xty(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < m; ++k) s += X[i][k] * X[j][k];
            xtx[i * n + j] = s;
        }
        double s = 0.0;
        for (int k = 0; k < m; ++k) s += X[i][k] * y[k];
        xty[i] = s;
    }

    // Cholesky-free: solve via Gauss elimination with partial pivoting on a copy.
    std::vector<double> a = xtx, rhs = xty;
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    std::vector<double> inv(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) inv[i * n + i] = 1.0;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a[i * n + k]) > std::abs(a[piv * n + k])) piv = i;
        if (piv != k) {
            for (int j = 0; j < n; ++j) {
                std::swap(a[k * n + j], a[piv * n + j]);
                std::swap(inv[k * n + j], inv[piv * n + j]);
            }
            std::swap(rhs[k], rhs[piv]);
        }
        if (a[k * n + k] == 0.0) throw std::runtime_error("least_squares: rank deficient");
        for (int i = 0; i < n; ++i) {
            if (i == k) continue;
            double f = a[i * n + k] / a[k * n + k];
            for (int j = 0; j < n; ++j) {
                a[i * n + j] -= f * a[k * n + j];
                inv[i * n + j] -= f * inv[k * n + j];
            }
            rhs[i] -= f * rhs[k];
        }
    }
    FitResult r;
    r.coef.resize(n);
    for (int i = 0; i < n; ++i) {
        r.coef[i] = rhs[i] / a[i * n + i];
        for (int j = 0; j < n; ++j) inv[i * n + j] /= a[i * n + i];
    }

    double ss = 0.0;
    for (int k = 0; k < m; ++k) {
        double pred = 0.0;
        for (int i = 0; i < n; ++i) pred += X[i][k] * r.coef[i];
        ss += (y[k] - pred) * (y[k] - pred);
    }
    r.resid_norm = std::sqrt(ss);
    double sigma2 = (m > n) ? ss / (m - n) : 0.0;
    r.stderrs.resize(n);
    for (int i = 0; i < n; ++i) r.stderrs[i] = std::sqrt(std::max(0.0, sigma2 * inv[i * n + i]));

    auto ev = sym_eigvals(xtx, n);
    double lo = std::max(ev.front(), 0.0), hi = std::max(ev.back(), 0.0);
    r.cond = (lo > 0.0) ? std::sqrt(hi / lo) : std::numeric_limits<double>::infinity();
    return r;
}

double line_slope(const std::vector<double>& x, const std::vector<double>& y) {
    FitResult f = least_squares({std::vector<double>(x.size(), 1.0), x}, y);
    return f.coef[1];
}

CMat matmul(const CMat& A, const CMat& B) {
    CMat C(A.n);
    for (int i = 0; i < A.n; ++i)
        for (int k = 0; k < A.n; ++k) {
            cplx aik = A.at(i, k);
            if (aik == cplx(0.0)) continue;
            const cplx* brow = &B.a[static_cast<size_t>(k) * B.n];
            cplx* crow = &C.a[static_cast<size_t>(i) * C.n];
            for (int j = 0; j < A.n; ++j) crow[j] += aik * brow[j];
        }
    return C;
}

CMat adjoint(const CMat& A) {
    CMat B(A.n);
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.n; ++j) B.at(j, i) = std::conj(A.at(i, j));
    return B;
}

double fro_norm(const CMat& A) {
    double s = 0.0;
    for (const cplx& v : A.a) s += std::norm(v);
    return std::sqrt(s);
}

double herm_defect(const CMat& A) {
    double m = 0.0;
    for (int i = 0; i < A.n; ++i)
        for (int j = 0; j < A.n; ++j)
            m = std::max(m, std::abs(A.at(i, j) - std::conj(A.at(j, i))));
    return m;
}

double spectral_norm(const CMat& A) {
    const int n = A.n;
    if (n == 0) return 0.0;
    std::vector<cplx> v(n), av(n), aav(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(1.0 / std::sqrt(1.0 + i), 1.0 / (2.0 + i));
    double lam = 0.0;
    for (int it = 0; it < 200; ++it) {
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < n; ++j) s += A.at(i, j) * v[j];
            av[i] = s;
        }
        for (int i = 0; i < n; ++i) {
            cplx s = 0.0;
            for (int j = 0; j < n; ++j) s += std::conj(A.at(j, i)) * av[j];
            aav[i] = s;
        }
        double nn = 0.0;
        for (int i = 0; i < n; ++i) nn += std::norm(aav[i]);
        nn = std::sqrt(nn);
        if (nn == 0.0) return 0.0;
        double prev = lam;
        lam = nn;
        for (int i = 0; i < n; ++i) v[i] = aav[i] / nn;
        if (it > 4 && std::abs(lam - prev) < 1e-13 * lam) break;
    }
    return std::sqrt(lam);
}

cplx trace(const CMat& A) {
    cplx t = 0.0;
    for (int i = 0; i < A.n; ++i) t += A.at(i, i);
    return t;
}

LuFactors lu_factor(CMat A) {
    const int n = A.n;
    LuFactors f;
    f.piv.resize(n);
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(A.at(k, k));
        for (int i = k + 1; i < n; ++i) {
            double m = std::abs(A.at(i, k));
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        f.piv[k] = piv;
        if (piv != k)
            for (int j = 0; j < n; ++j) std::swap(A.at(k, j), A.at(piv, j));
        if (A.at(k, k) == cplx(0.0)) throw std::runtime_error("lu_factor: singular");
        cplx d = 1.0 / A.at(k, k);
        for (int i = k + 1; i < n; ++i) {
            cplx l = A.at(i, k) * d;
            A.at(i, k) = l;
            if (l == cplx(0.0)) continue;
            const cplx* krow = &A.a[static_cast<size_t>(k) * n];
            cplx* irow = &A.a[static_cast<size_t>(i) * n];
            for (int j = k + 1; j < n; ++j) irow[j] -= l * krow[j];
        }
    }
    f.lu = std::move(A);
    return f;
}

void lu_solve_inplace(const LuFactors& f, std::vector<cplx>& b) {
    const int n = f.lu.n;
    // Row interchanges must all land before elimination: the factor phase
    // swaps whole rows, multipliers included, so L is stored in the final
    // row order.
    for (int k = 0; k < n; ++k)
        if (f.piv[k] != k) std::swap(b[k], b[f.piv[k]]);
    for (int k = 0; k < n; ++k) {
        for (int i = k + 1; i < n; ++i) b[i] -= f.lu.at(i, k) * b[k];
    }
    for (int i = n - 1; i >= 0; --i) {
        cplx s = b[i];
        for (int j = i + 1; j < n; ++j) s -= f.lu.at(i, j) * b[j];
        b[i] = s / f.lu.at(i, i);
    }
}

CMat lu_inverse(const LuFactors& f) {
    const int n = f.lu.n;
    CMat inv(n);
    std::vector<cplx> e(n);
    for (int j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), cplx(0.0));
        e[j] = 1.0;
        lu_solve_inplace(f, e);
        for (int i = 0; i < n; ++i) inv.at(i, j) = e[i];
    }
    return inv;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace mag
