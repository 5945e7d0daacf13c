#pragma once

#include "magtrace/discretize.hpp"
#include "magtrace/eig.hpp"
#include "magtrace/model.hpp"
#include "magtrace/util.hpp"

namespace mag {

// Smooth cutoff: 1 on [-1/2, 1/2], 0 outside (-1, 1).
double cutoff_chi(double y);
double cutoff_chi_prime(double y);

// Truncated-Taylor almost-analytic extension
//   ext(x+iy) = chi(y/delta) sum_{k<=N} phi^(k)(x) (iy)^k / k!
//   dbar = (1/2)[ chi(y/delta) phi^(N+1)(x) (iy)^N / N!
//               + (i/delta) chi'(y/delta) sum_{k<=N} phi^(k)(x) (iy)^k / k! ]
class AlmostAnalyticExtension {
  public:
    AlmostAnalyticExtension(TestFunction phi, int N, double delta);
    cplx ext(double x, double y) const;
    cplx dbar(double x, double y) const;
    int order() const { return N_; }
    double delta() const { return delta_; }
    const TestFunction& phi() const { return phi_; }

  private:
    TestFunction phi_;
    int N_;
    double delta_;
};

// Composite tensor Gauss-Legendre rule for the resolvent area integral:
// x: 16 uniform panels over supp phi (the integrand vanishes identically for
// x outside the support), y: 4 panels split at the chi kink +-delta/2;
// quad_n nodes per panel per axis.
struct HsQuadrature {
    std::vector<double> xs, xw;  // all x nodes/weights
    std::vector<double> ys, yw;  // y > 0 nodes only; the y < 0 half enters by symmetry
};
HsQuadrature hs_quadrature(const TestFunction& phi, double delta, int quad_n);

// -(k!/pi) sum w dbar(z) (z - H)^{-k-1}, dense LU with partial pivoting per node.
CMat hs_apply(const TestFunction& phi, const CMat& H, int N, double delta, int quad_n);
CMat hs_derivative(const TestFunction& phi, const CMat& H, int k, int N, double delta,
                   int quad_n);
// element k approximates phi^(k)(H); one node sweep shared across k = 0..kmax;
// nodes with |Im lambda| < 1e-14 are skipped and counted into *skipped
std::vector<CMat> hs_apply_family(const TestFunction& phi, const CMat& H, int kmax, int N,
                                  double delta, int quad_n, long* skipped = nullptr);

struct HsTraceResult {
    double value = 0.0;
    double imag_defect = 0.0;  // |Im| of the accumulated trace before taking Re
    long skipped_nodes = 0;
};

// Trace route: Householder reduction to real symmetric tridiagonal T, then
// per-node tr (z-T)^{-1} by the two-sided LDL sweep in O(n). Same nodes and
// weights as hs_apply.
HsTraceResult hs_trace_matrix(const TestFunction& phi, const CMat& H, int N,
                              double delta, int quad_n);
HsTraceResult hs_trace_tridiag(const TestFunction& phi, const std::vector<double>& diag,
                               const std::vector<double>& sub, int N, double delta,
                               int quad_n);
HsTraceResult hs_trace(const TestFunction& phi, const SpectralOperator& op, int N,
                       double delta, int quad_n, long dense_cap = 4096);

}  // namespace mag
