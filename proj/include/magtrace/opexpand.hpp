#pragma once

#include "magtrace/gauge.hpp"
#include "magtrace/model.hpp"

namespace mag {

// Multivariate polynomial in Z with complex coefficients.
struct CPolynomial {
    struct Term {
        std::array<int, 3> expo{0, 0, 0};
        cplx coeff{0.0};
    };
    std::vector<Term> terms;

    cplx eval(const std::array<double, 3>& Z) const;
    int degree() const;
    void add(std::array<int, 3> expo, cplx coeff);
    void canonicalize();  // merge duplicates, drop zeros, sort by exponent
};

// sum_beta  poly_beta(Z) * d^beta / dZ^beta.
struct PolyDiffOp {
    int d = 2;
    struct Term {
        std::array<int, 3> beta{0, 0, 0};
        CPolynomial poly;
    };
    std::vector<Term> terms;

    int weight() const;  // max over terms of deg(poly) + |beta|
    void canonicalize();
};

// Gaussian-times-polynomial test input q(Z) exp(-|Z|^2/2) with exact
// derivatives of every order (d_j maps q to d_j q - Z_j q).
struct GaussPolyInput {
    int d = 2;
    CPolynomial q;
    cplx eval(const std::array<double, 3>& Z) const;
    GaussPolyInput deriv(int axis) const;
};

// Model operators of the rescaled expansion, r in {0, 1, 2}:
//   H0 = -Lap + V(x0)
//   H1 = i sum B_kj(x0) Z_k d_j + sum d_jV(x0) Z_j
//   H2 = (2/3) i sum d_lB_kj(x0) Z_k Z_l d_j + (i/3) sum d_jB_kj(x0) Z_k
//        + (1/4) sum_j (sum_k B_kj(x0) Z_k)^2 + (1/2) sum d_j d_k V(x0) Z_j Z_k
PolyDiffOp model_operator(int r, const std::array<double, 3>& x0,
                          const MagneticField& B, const ScalarField& V);

cplx apply_polydiffop(const PolyDiffOp& op, const GaussPolyInput& u,
                      const std::array<double, 3>& Z);

// Action of the rescaled operator
//   H_h u = sum_j [ -d_j^2 u + 2 i A_j(hZ) d_j u + (i h div A(hZ) + A(hZ)^2) u ] + V(x0+hZ) u
// with A = A^{(x0)} evaluated by gauge quadrature.
cplx rescaled_apply(const MagneticField& B, const ScalarField& V,
                    const std::array<double, 3>& x0, double h,
                    const GaussPolyInput& u, const std::array<double, 3>& Z);

struct OrderCheckResult {
    double slope = 0.0;
    bool saturated = false;
    std::vector<double> remainders;  // sup over sample Z per ladder entry
};

// Log-log slope of sup_Z |H_h u - sum_{r<=m} h^r H^(r) u| over the h ladder.
OrderCheckResult expansion_order_check(const MagneticField& B, const ScalarField& V,
                                       const std::array<double, 3>& x0,
                                       const GaussPolyInput& u,
                                       const std::vector<double>& h_ladder, int m,
                                       const std::vector<std::array<double, 3>>& sample_Z);

}  // namespace mag
