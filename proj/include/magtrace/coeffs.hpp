#pragma once

#include <functional>

#include "magtrace/model.hpp"

namespace mag {

// integral over R^d of g(|xi|^2), g supported in [t_lo, t_hi]:
//   (pi^{d/2} / Gamma(d/2)) * integral of g(t) t^{d/2-1} dt over t >= 0.
// d = 3 uses t = s^2 to absorb the sqrt kink at t = 0. Composite
// Gauss-Legendre with panel doubling to absolute error <= 1e-10.
double radial_xi_integral(const std::function<double(double)>& g, int d, double t_lo,
                          double t_hi);

// f0(x0) = (2 pi)^{-d} integral of phi(|xi|^2 + V(x0))
double f0_pointwise(const ScalarField& V, const std::array<double, 3>& x0,
                    const TestFunction& phi, int d);

// identically zero; kept so fitted c1 has an analytic partner
double f1_pointwise();

// f2(x0) = -(1/12)|grad V|^2 (2pi)^{-d} I[phi'''] - (1/6)((1/2) sum B_kj^2 + lap V)
//          (2pi)^{-d} I[phi''],  I[g] = integral of g(|xi|^2 + V(x0))
double f2_pointwise(const MagneticField& B, const ScalarField& V,
                    const std::array<double, 3>& x0, const TestFunction& phi, int d);

struct CoefficientField {
    int order;
    TorusDomain dom;
    TestFunction phi;
    std::vector<double> values;  // row-major over the grid

    CoefficientField() : order(0) {}
    CoefficientField(int r, TorusDomain d, TestFunction p)
        : order(r), dom(std::move(d)), phi(std::move(p)) {}
};

CoefficientField coefficient_field(int r, const MagneticField& B, const ScalarField& V,
                                   const TestFunction& phi, const TorusDomain& dom);

// f_r(phi) = torus integral of the pointwise coefficient (grid mean x volume)
double trace_coefficient(int r, const MagneticField& B, const ScalarField& V,
                         const TestFunction& phi, const TorusDomain& dom);

}  // namespace mag
