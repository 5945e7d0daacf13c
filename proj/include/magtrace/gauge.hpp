#pragma once

#include "magtrace/model.hpp"

namespace mag {

// A_j^{(x0)}(Z) = sum_k (int_0^1 B_{kj}(x0 + tau Z) tau dtau) Z_k.
// 16-node Gauss-Legendre on [0,1].
std::array<double, 3> fock_schwinger_potential(const MagneticField& B,
                                               const std::array<double, 3>& x0,
                                               const std::array<double, 3>& Z);

// Phi^{(x0)}(Z) = -sum_j int_0^1 A_j(x0 + tau Z) Z_j dtau.
double gauge_phase(const VectorPotential& A, const std::array<double, 3>& x0,
                   const std::array<double, 3>& Z);

// Homogeneous degree-r Taylor component of Z -> A^{(x0)}(Z),
// A_{j,r}(Z) = (1/(r+1)) sum_{|alpha|=r-1} sum_k d^alpha B_{kj}(x0) Z_k Z^alpha / alpha!.
struct HomogeneousTaylorTerm {
    int r = 1;
    int d = 2;
    struct Monomial {
        std::array<int, 3> expo{0, 0, 0};
        double coeff = 0.0;
    };
    std::array<std::vector<Monomial>, 3> comps;
    std::array<double, 3> eval(const std::array<double, 3>& Z) const;
    int max_degree() const;
};

HomogeneousTaylorTerm taylor_vector_potential(const MagneticField& B,
                                              const std::array<double, 3>& x0, int r);

// div_Y A^{(x0)}(Y) = sum_{j,k} Y_k int_0^1 (d_j B_{kj})(x0 + tau Y) tau^2 dtau.
double fock_schwinger_divergence(const MagneticField& B,
                                 const std::array<double, 3>& x0,
                                 const std::array<double, 3>& Y);

}  // namespace mag
