#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace mag {

using cplx = std::complex<double>;
inline constexpr double PI = 3.141592653589793238462643383279502884;

// Gauss-Legendre nodes and weights on [a, b].
struct Quad1D {
    std::vector<double> x, w;
};
Quad1D gl_nodes(int n, double a, double b);

// 1D polynomial with real coefficients, ascending order.
struct Poly {
    std::vector<double> c;
    double eval(double x) const;
    Poly deriv() const;
    Poly operator*(const Poly& o) const;
    Poly operator+(const Poly& o) const;
    Poly scaled(double s) const;
    void trim();
};

// Ordinary least squares y ~ X beta for small dense systems.
struct FitResult {
    std::vector<double> coef;
    std::vector<double> stderrs;
    double resid_norm = 0.0;   // ||y - X beta||_2
    double cond = 0.0;         // 2-norm condition number of X
};
FitResult least_squares(const std::vector<std::vector<double>>& X,
                        const std::vector<double>& y);

// Slope of least-squares line through (x_i, y_i).
double line_slope(const std::vector<double>& x, const std::vector<double>& y);

// Deterministic RNG wrapper.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}
    double uniform(double a, double b) {
        return std::uniform_real_distribution<double>(a, b)(eng_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(eng_); }
    std::uint64_t integer() { return eng_(); }

  private:
    std::mt19937_64 eng_;
};

// Dense complex matrix, row-major, square.
struct CMat {
    int n = 0;
    std::vector<cplx> a;
    CMat() = default;
    explicit CMat(int n_) : n(n_), a(static_cast<size_t>(n_) * n_, cplx(0.0)) {}
    cplx& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const cplx& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

CMat matmul(const CMat& A, const CMat& B);
CMat adjoint(const CMat& A);
double fro_norm(const CMat& A);
double herm_defect(const CMat& A);          // max |A - A^H| entrywise
double spectral_norm(const CMat& A);        // power iteration on A^H A
cplx trace(const CMat& A);

// LU with partial pivoting; solve and inverse for complex dense systems.
struct LuFactors {
    CMat lu;
    std::vector<int> piv;
};
LuFactors lu_factor(CMat A);
void lu_solve_inplace(const LuFactors& f, std::vector<cplx>& b);
CMat lu_inverse(const LuFactors& f);

std::string format_double(double v);  // shortest round-trip representation

}  // namespace mag
