#pragma once

#include <array>
#include <vector>

#include "magtrace/util.hpp"

namespace mag {

struct TorusDomain {
    int d = 2;
    std::array<double, 3> periods{1.0, 1.0, 1.0};
    int grid_n = 8;
    void validate() const;
    double volume() const;
    // Coordinates of grid point with flat index (row-major, axis 0 slowest).
    std::array<double, 3> grid_point(long idx) const;
    long grid_size() const;
};

struct TrigMode {
    std::array<int, 3> k{0, 0, 0};
    double c = 0.0;  // cosine amplitude
    double s = 0.0;  // sine amplitude
};

// Real trigonometric polynomial  const + sum c cos(2pi k.theta) + s sin(2pi k.theta),
// theta_i = x_i / L_i. Closed under differentiation.
class ScalarField {
  public:
    ScalarField() = default;
    ScalarField(int d, std::array<double, 3> periods, double constant,
                std::vector<TrigMode> modes);

    double eval(const std::array<double, 3>& x) const;
    ScalarField deriv(int axis) const;
    double mean() const { return constant_; }
    std::vector<double> sample_grid(const TorusDomain& dom) const;
    int max_wavenumber() const;
    bool compatible(const TorusDomain& dom) const;
    double max_abs_coeff() const;

    ScalarField operator+(const ScalarField& o) const;
    ScalarField scaled(double s) const;

    int dim() const { return d_; }
    double constant() const { return constant_; }
    const std::vector<TrigMode>& modes() const { return modes_; }
    const std::array<double, 3>& periods() const { return periods_; }

  private:
    int d_ = 2;
    std::array<double, 3> periods_{1.0, 1.0, 1.0};
    double constant_ = 0.0;
    std::vector<TrigMode> modes_;
};

// Antisymmetric B_{jk}; stores the strict upper triangle.
class MagneticField {
  public:
    MagneticField() = default;
    // pairs[i] = {j, k} with j < k, component B_{jk} = comps[i].
    MagneticField(int d, std::vector<std::array<int, 2>> pairs,
                  std::vector<ScalarField> comps);

    double eval(int j, int k, const std::array<double, 3>& x) const;
    ScalarField component(int j, int k) const;  // signed copy; zero field if absent
    int dim() const { return d_; }
    bool is_zero() const { return comps_.empty(); }
    const std::vector<std::array<int, 2>>& pairs() const { return pairs_; }
    const std::vector<ScalarField>& comps() const { return comps_; }

    void check_zero_flux() const;  // throws if any component has nonzero mean
    void check_closed() const;     // d = 3: dB = 0 by exact differentiation

  private:
    int d_ = 2;
    std::vector<std::array<int, 2>> pairs_;
    std::vector<ScalarField> comps_;
    const ScalarField* find(int j, int k) const;
};

struct VectorPotential {
    int d = 2;
    std::array<ScalarField, 3> A;
    int max_wavenumber() const;
};

// Periodic A with dA = B, zero mean, divergence-free; exact on trig polynomials.
VectorPotential potential_from_field(const MagneticField& B,
                                     const std::array<double, 3>& periods);

// Max coefficient deviation of dA - B on the trig representation.
double curl_defect(const VectorPotential& A, const MagneticField& B);

enum class TestFunctionKind { bump, poly_bump };

// Compactly supported C^inf test function on (c-w, c+w):
//   bump:      exp(-w^2 / (w^2 - (t-c)^2))
//   poly_bump: q(t-c) * exp(-w^2 / (w^2 - (t-c)^2))
// Derivatives up to order 5 in closed form via the rational recurrence
// P_{k+1} = P_k' u^2 + 4 k s P_k u - 2 s w^2 P_k,  u = w^2 - s^2.
class TestFunction {
  public:
    static constexpr int max_derivative = 5;

    TestFunction() = default;
    TestFunction(TestFunctionKind kind, double center, double width,
                 Poly poly_factor = Poly{{1.0}});

    double eval(double t, int k = 0) const;
    double operator()(double t) const { return eval(t, 0); }
    double support_lo() const { return c_ - w_; }
    double support_hi() const { return c_ + w_; }
    double center() const { return c_; }
    double width() const { return w_; }
    TestFunctionKind kind() const { return kind_; }
    const Poly& poly_factor() const { return q_; }
    TestFunction scaled(double s) const;

  private:
    TestFunctionKind kind_ = TestFunctionKind::bump;
    double c_ = 0.0, w_ = 1.0;
    Poly q_{{1.0}};
    std::array<Poly, max_derivative + 1> pk_;
};

}  // namespace mag
