#pragma once

#include <functional>
#include <optional>

#include "magtrace/discretize.hpp"
#include "magtrace/util.hpp"

namespace mag {

// Hermitian tridiagonal reduction H = Q T Q^H, T real symmetric tridiagonal.
struct Tridiag {
    std::vector<double> diag;
    std::vector<double> sub;  // length n-1
    CMat Q;                   // empty unless requested
};
Tridiag tridiagonalize(const CMat& H, bool want_q);

// Eigen of a real symmetric tridiagonal by implicit-shift QL; eigenvalues
// ascending. If z is nonnull its columns are rotated along (accumulates the
// tridiagonal eigenvectors into the basis z starts with).
void tridiag_ql(std::vector<double>& diag, std::vector<double>& sub, CMat* z);

struct EigResult {
    std::vector<double> values;  // ascending
    CMat vectors;                // columns, orthonormal; empty if not requested
};
EigResult dense_hermitian_eig(const CMat& M, bool want_vectors = true);

struct EigenWindow {
    double lo = 0.0, hi = 0.0;
    std::vector<double> values;     // ascending, inside [lo, hi]
    std::vector<GridFunction> vectors;  // discrete l2-normalized; may be empty
    std::vector<double> residuals;
};

// Block Lanczos with full reorthogonalization against all stored basis vectors.
// Finds every eigenvalue in [window.lo, window.hi] (window must sit in the lower
// part of the spectrum); throws on non-convergence.
EigenWindow lanczos_window(const SpectralOperator& op, double lo, double hi,
                           int max_iter, double tol, int block = 8,
                           std::uint64_t seed = 7);

// Window extraction from a dense decomposition.
EigenWindow dense_window(const EigResult& eg, double lo, double hi, bool keep_vectors);

// |psi_k(x)|^2 at grid index, eigenfunctions L2-normalized on the torus.
std::vector<double> eigenfunction_values(const EigenWindow& win, const TorusDomain& dom,
                                         long grid_idx);

}  // namespace mag
