#include "magtrace/eig.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mag {

Tridiag tridiagonalize(const CMat& Hin, bool want_q) {
    const int n = Hin.n;
    bool already = true;
    for (int i = 0; i < n && already; ++i)
        for (int j = i + 2; j < n; ++j)
            if (Hin.at(i, j) != cplx(0.0) || Hin.at(j, i) != cplx(0.0)) {
                already = false;
                break;
            }
    for (int i = 0; i + 1 < n && already; ++i) {
        cplx s = Hin.at(i + 1, i);
        if (s.imag() != 0.0 || s.real() < 0.0) already = false;
    }
    if (already) {
        Tridiag T;
        T.diag.resize(n);
        T.sub.assign(std::max(0, n - 1), 0.0);
        for (int i = 0; i < n; ++i) T.diag[i] = Hin.at(i, i).real();
        for (int i = 0; i + 1 < n; ++i) T.sub[i] = Hin.at(i + 1, i).real();
        if (want_q) {
            T.Q = CMat(n);
            for (int i = 0; i < n; ++i) T.Q.at(i, i) = 1.0;
        }
        return T;
    }
    CMat A = Hin;
    CMat Q;
    if (want_q) {
        Q = CMat(n);
        for (int i = 0; i < n; ++i) Q.at(i, i) = 1.0;
    }
    std::vector<cplx> v(n), p(n), w(n);

    for (int k = 0; k < n - 2; ++k) {
        // Reflector zeroing A[k+2.., k].
        double xnorm2 = 0.0;
        for (int i = k + 2; i < n; ++i) xnorm2 += std::norm(A.at(i, k));
        cplx alpha = A.at(k + 1, k);
        if (xnorm2 == 0.0 && alpha.imag() == 0.0) continue;
        double anorm = std::sqrt(std::norm(alpha) + xnorm2);
        double beta = (alpha.real() >= 0.0) ? -anorm : anorm;
        cplx denom = alpha - beta;
        cplx tau = (cplx(beta) - alpha) / beta;  // tau = (beta - alpha)/beta
        int m = n - k - 1;
        v[0] = 1.0;
        for (int i = 1; i < m; ++i) v[i] = A.at(k + 1 + i, k) / denom;

        // p = A22 * v  (A22 = A[k+1.., k+1..])
        for (int i = 0; i < m; ++i) {
            cplx s = 0.0;
            const cplx* row = &A.a[static_cast<size_t>(k + 1 + i) * n + (k + 1)];
            for (int j = 0; j < m; ++j) s += row[j] * v[j];
            p[i] = s;
        }
        cplx vhp = 0.0;
        for (int i = 0; i < m; ++i) vhp += std::conj(v[i]) * p[i];
        double tau2 = std::norm(tau);
        // A22 <- H^H A22 H with H = I - tau v v^H; the reflector satisfies
        // H^H x = beta e1, so it is H^H that acts from the left.
        for (int i = 0; i < m; ++i) w[i] = tau * p[i] - 0.5 * tau2 * vhp * v[i];

        // A22 -= v w^H + w v^H
        for (int i = 0; i < m; ++i) {
            cplx vi = v[i], wi = w[i];
            cplx* row = &A.a[static_cast<size_t>(k + 1 + i) * n + (k + 1)];
            for (int j = 0; j < m; ++j)
                row[j] -= vi * std::conj(w[j]) + wi * std::conj(v[j]);
        }
        A.at(k + 1, k) = beta;
        A.at(k, k + 1) = beta;
        for (int i = k + 2; i < n; ++i) {
            A.at(i, k) = 0.0;
            A.at(k, i) = 0.0;
        }

        if (want_q) {
            // Q <- Q H on trailing columns, so that A = Q T Q^H overall
            for (int i = 0; i < n; ++i) {
                cplx s = 0.0;
                cplx* row = &Q.a[static_cast<size_t>(i) * n + (k + 1)];
                for (int j = 0; j < m; ++j) s += row[j] * v[j];
                s *= tau;
                for (int j = 0; j < m; ++j) row[j] -= s * std::conj(v[j]);
            }
        }
    }

    // Phase-scale subdiagonal to real nonnegative.
    Tridiag T;
    T.diag.resize(n);
    T.sub.assign(std::max(0, n - 1), 0.0);
    std::vector<cplx> d(n, cplx(1.0));
    for (int k = 0; k < n; ++k) T.diag[k] = A.at(k, k).real();
    for (int k = 0; k + 1 < n; ++k) {
        cplx t = A.at(k + 1, k) * d[k];
        double mag = std::abs(t);
        d[k + 1] = (mag > 0.0) ? std::conj(t) / mag : cplx(1.0);
        T.sub[k] = mag;
    }
    if (want_q) {
        for (int j = 0; j < n; ++j)
            if (d[j] != cplx(1.0))
                for (int i = 0; i < n; ++i) Q.at(i, j) *= std::conj(d[j]);
        T.Q = std::move(Q);
    }
    return T;
}

void tridiag_ql(std::vector<double>& diag, std::vector<double>& sub, CMat* z) {
    const int n = static_cast<int>(diag.size());
    if (n == 0) return;
    std::vector<double> e(n, 0.0);
    for (int i = 0; i + 1 < n; ++i) e[i] = sub[i];

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m + 1 < n; ++m) {
                double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(e[m]) <= 1e-16 * dd) break;
            }
            if (m == l) break;
            if (++iter > 50) throw std::runtime_error("tridiag_ql: no convergence");
            double g = (diag[l + 1] - diag[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = diag[m] - diag[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i], b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    diag[i + 1] -= p;
                    e[m] = 0.0;
                    break;
                }
                s = f / r;
                c = g / r;
                g = diag[i + 1] - p;
                r = (diag[i] - g) * s + 2.0 * c * b;
                p = s * r;
                diag[i + 1] = g + p;
                g = c * r - b;
                if (z) {
                    for (int row = 0; row < z->n; ++row) {
                        cplx zi = z->at(row, i), zi1 = z->at(row, i + 1);
                        z->at(row, i + 1) = s * zi + c * zi1;
                        z->at(row, i) = c * zi - s * zi1;
                    }
                }
            }
            if (r == 0.0 && m - 1 >= l) continue;
            diag[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    // Sort ascending, permuting columns of z.
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return diag[a] < diag[b]; });
    std::vector<double> ds(n);
    for (int i = 0; i < n; ++i) ds[i] = diag[idx[i]];
    diag = std::move(ds);
    if (z) {
        CMat zs(z->n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < z->n; ++i) zs.at(i, j) = z->at(i, idx[j]);
        *z = std::move(zs);
    }
    for (auto& s : sub) s = 0.0;
}

EigResult dense_hermitian_eig(const CMat& M, bool want_vectors) {
    double scale = 0.0;
    for (const auto& v : M.a) scale = std::max(scale, std::abs(v));
    if (herm_defect(M) > 1e-10 * std::max(scale, 1.0))
        throw std::invalid_argument("dense_hermitian_eig: matrix not Hermitian");
    Tridiag T = tridiagonalize(M, want_vectors);
    EigResult r;
    if (want_vectors) {
        tridiag_ql(T.diag, T.sub, &T.Q);
        r.vectors = std::move(T.Q);
    } else {
        tridiag_ql(T.diag, T.sub, nullptr);
    }
    r.values = std::move(T.diag);
    return r;
}

EigenWindow dense_window(const EigResult& eg, double lo, double hi, bool keep_vectors) {
    EigenWindow w;
    w.lo = lo;
    w.hi = hi;
    const int n = static_cast<int>(eg.values.size());
    for (int i = 0; i < n; ++i) {
        if (eg.values[i] < lo || eg.values[i] > hi) continue;
        w.values.push_back(eg.values[i]);
        if (keep_vectors && eg.vectors.n == n) {
            GridFunction v(n);
            for (int row = 0; row < n; ++row) v[row] = eg.vectors.at(row, i);
            w.vectors.push_back(std::move(v));
        }
    }
    return w;
}

namespace {

cplx dotc(const GridFunction& a, const GridFunction& b) {
    cplx s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double nrm2(const GridFunction& a) {
    double s = 0.0;
    for (const auto& v : a) s += std::norm(v);
    return std::sqrt(s);
}

}  // namespace

EigenWindow lanczos_window(const SpectralOperator& op, double lo, double hi,
                           int max_iter, double tol, int block,
                           std::uint64_t seed) {
    const long M = op.dim();
    const int b = std::max(1, block);
    Rng rng(seed);

    std::vector<GridFunction> basis;           // orthonormal, grows as columns are processed
    std::vector<std::vector<cplx>> tcols;      // tcols[j][i] = <q_i, H q_j>; complete once j processed

    // One projection sweep w -= sum_q <q, w> q over the whole basis, four vectors
    // at a time to keep w in cache; coefficients accumulate into *coef when given.
    auto sweep_subtract = [&](GridFunction& w, std::vector<cplx>* coef) {
        const std::size_t nb = basis.size();
        std::size_t q = 0;
        for (; q + 4 <= nb; q += 4) {
            const cplx* q0 = basis[q].data();
            const cplx* q1 = basis[q + 1].data();
            const cplx* q2 = basis[q + 2].data();
            const cplx* q3 = basis[q + 3].data();
            cplx c0 = 0.0, c1 = 0.0, c2 = 0.0, c3 = 0.0;
            for (long i = 0; i < M; ++i) {
                const cplx wi = w[i];
                c0 += std::conj(q0[i]) * wi;
                c1 += std::conj(q1[i]) * wi;
                c2 += std::conj(q2[i]) * wi;
                c3 += std::conj(q3[i]) * wi;
            }
            for (long i = 0; i < M; ++i)
                w[i] -= c0 * q0[i] + c1 * q1[i] + c2 * q2[i] + c3 * q3[i];
            if (coef) {
                (*coef)[q] += c0;
                (*coef)[q + 1] += c1;
                (*coef)[q + 2] += c2;
                (*coef)[q + 3] += c3;
            }
        }
        for (; q < nb; ++q) {
            cplx c = dotc(basis[q], w);
            for (long i = 0; i < M; ++i) w[i] -= c * basis[q][i];
            if (coef) (*coef)[q] += c;
        }
    };

    auto orthonormalize_in = [&](GridFunction& v) -> double {
        sweep_subtract(v, nullptr);
        sweep_subtract(v, nullptr);
        double nv = nrm2(v);
        if (nv > 0.0)
            for (auto& x : v) x /= nv;
        return nv;
    };

    auto push_random = [&](int count) {
        for (int j = 0; j < count && static_cast<long>(basis.size()) < M; ++j) {
            GridFunction v(M);
            for (long i = 0; i < M; ++i) v[i] = cplx(rng.normal(), rng.normal());
            if (orthonormalize_in(v) > 1e-8 * std::sqrt(static_cast<double>(M)))
                basis.push_back(std::move(v));
        }
    };

    push_random(b);
    if (basis.empty()) throw std::runtime_error("lanczos_window: degenerate start block");

    std::size_t processed = 0;
    // Residual-certified convergence: every Ritz value below hi + guard must be an
    // eigenvalue to within rtol before the window content is trusted.
    const double guard = std::max(0.25 * (hi - lo), 1e-3);
    const double rtol = 0.5 * tol;
    double last_bottom = std::numeric_limits<double>::quiet_NaN();

    // With full reorthogonalization the projection over processed columns is exact,
    // so the residual of a Ritz pair is the norm of the projected-column rows that
    // stick out past the processed square block.
    auto assess = [&](bool exact) -> bool {
        const int mp = static_cast<int>(processed);
        if (mp == 0) return false;
        CMat T(mp);
        for (int j = 0; j < mp; ++j)
            for (int i = 0; i < mp; ++i)
                T.at(i, j) = i < static_cast<int>(tcols[j].size()) ? tcols[j][i] : cplx(0.0);
        for (int j = 0; j < mp; ++j)
            for (int i = 0; i <= j; ++i) {
                cplx avg = 0.5 * (T.at(i, j) + std::conj(T.at(j, i)));
                T.at(i, j) = avg;
                T.at(j, i) = std::conj(avg);
            }
        EigResult et = dense_hermitian_eig(T, true);
        const int mtot = static_cast<int>(basis.size());
        auto resid = [&](int idx) {
            double r2 = 0.0;
            for (int row = mp; row < mtot; ++row) {
                cplx acc = 0.0;
                for (int j = 0; j < mp; ++j)
                    if (row < static_cast<int>(tcols[j].size()))
                        acc += tcols[j][row] * et.vectors.at(j, idx);
                r2 += std::norm(acc);
            }
            return std::sqrt(r2);
        };
        bool ok = resid(0) <= rtol;
        for (int idx = 1; ok && idx < mp && et.values[idx] <= hi + guard; ++idx)
            ok = resid(idx) <= rtol;
        if (!exact) {
            // The bottom Ritz value must have settled, otherwise part of the spectrum
            // below the window could still be undiscovered.
            if (!(std::abs(et.values[0] - last_bottom) <= 10.0 * tol)) ok = false;
            last_bottom = et.values[0];
        }
        return ok;
    };

    bool converged = false;
    std::size_t next_check = std::min<std::size_t>(static_cast<std::size_t>(M),
                                                   static_cast<std::size_t>(4 * b));
    while (!converged) {
        std::size_t round_end = std::min(processed + static_cast<std::size_t>(b), basis.size());
        for (std::size_t col = processed; col < round_end; ++col) {
            GridFunction w = op.apply(basis[col]);
            auto& tc = tcols.emplace_back();
            tc.assign(basis.size() + 1, cplx(0.0));
            double before = nrm2(w);
            sweep_subtract(w, &tc);
            // Second pass only when the first cancelled heavily (Kahan's twice-
            // is-enough criterion); its corrections also belong in the T column.
            if (nrm2(w) < 0.5 * before) sweep_subtract(w, &tc);
            double nw = nrm2(w);
            if (nw > 1e-10) {
                tc[basis.size()] = nw;
                for (auto& x : w) x /= nw;
                basis.push_back(std::move(w));
            } else {
                tc.resize(basis.size(), cplx(0.0));
            }
        }
        processed = round_end;
        bool exhausted = static_cast<long>(basis.size()) >= M && processed == basis.size();
        if (basis.size() == processed && !exhausted) {
            push_random(b);  // invariant subspace reached; explore its complement
            if (basis.size() == processed)
                throw std::runtime_error("lanczos_window: basis stalled before spanning");
        }
        if (exhausted || processed >= next_check) {
            if (std::getenv("MAG_LANCZOS_DEBUG"))
                std::fprintf(stderr, "lanczos: assess at mp=%zu basis=%zu\n", processed,
                             basis.size());
            converged = assess(exhausted);
            if (exhausted) break;
            next_check = std::max(processed + static_cast<std::size_t>(b),
                                  processed + processed / 4);
        }
        if (!converged && static_cast<int>(processed) >= max_iter)
            throw std::runtime_error(
                "lanczos_window: not converged within max_iter columns");
    }

    // Final Ritz extraction with vectors and exact residuals.
    const int m = static_cast<int>(processed);
    CMat T(m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i)
            T.at(i, j) = i < static_cast<int>(tcols[j].size()) ? tcols[j][i] : cplx(0.0);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i <= j; ++i) {
            cplx avg = 0.5 * (T.at(i, j) + std::conj(T.at(j, i)));
            T.at(i, j) = avg;
            T.at(j, i) = std::conj(avg);
        }
    EigResult et = dense_hermitian_eig(T, true);

    EigenWindow win;
    win.lo = lo;
    win.hi = hi;
    long bad = 0;
    for (int idx = 0; idx < m; ++idx) {
        double lam = et.values[idx];
        if (lam < lo || lam > hi) continue;
        GridFunction v(M, cplx(0.0));
        int q = 0;
        for (; q + 4 <= m; q += 4) {
            const cplx c0 = et.vectors.at(q, idx), c1 = et.vectors.at(q + 1, idx);
            const cplx c2 = et.vectors.at(q + 2, idx), c3 = et.vectors.at(q + 3, idx);
            const cplx* q0 = basis[q].data();
            const cplx* q1 = basis[q + 1].data();
            const cplx* q2 = basis[q + 2].data();
            const cplx* q3 = basis[q + 3].data();
            for (long i = 0; i < M; ++i)
                v[i] += c0 * q0[i] + c1 * q1[i] + c2 * q2[i] + c3 * q3[i];
        }
        for (; q < m; ++q) {
            cplx c = et.vectors.at(q, idx);
            for (long i = 0; i < M; ++i) v[i] += c * basis[q][i];
        }
        double nv = nrm2(v);
        for (auto& x : v) x /= nv;
        GridFunction hv = op.apply(v);
        for (long i = 0; i < M; ++i) hv[i] -= lam * v[i];
        double res = nrm2(hv);
        if (res > tol) ++bad;
        win.values.push_back(lam);
        win.vectors.push_back(std::move(v));
        win.residuals.push_back(res);
    }
    if (bad > 0)
        throw std::runtime_error("lanczos_window: " + std::to_string(bad) +
                                 " Ritz pairs above residual tolerance (max_iter too small?)");
    return win;
}

std::vector<double> eigenfunction_values(const EigenWindow& win, const TorusDomain& dom,
                                         long grid_idx) {
    if (win.vectors.empty() && !win.values.empty())
        throw std::invalid_argument("eigenfunction_values: eigenvectors absent");
    const double cell = dom.volume() / static_cast<double>(dom.grid_size());
    std::vector<double> out;
    out.reserve(win.vectors.size());
    for (const auto& v : win.vectors)
        out.push_back(std::norm(v[grid_idx]) / cell);
    return out;
}

}  // namespace mag
