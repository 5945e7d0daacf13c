#pragma once

#include <memory>
#include <string>

#include "magtrace/model.hpp"

namespace mag {

using GridFunction = std::vector<cplx>;

// Fourier-spectral discretization of H_p = sum_j (D_j - A_j)^2 + V on the torus,
// D_j the exact Fourier multiplier h 2pi k_j / L_j, h = 1/p. Hermitian and PSD
// (for V >= 0) by the factorized form.
class SpectralOperator {
  public:
    SpectralOperator(TorusDomain dom, VectorPotential A, ScalarField V, double p);
    ~SpectralOperator();
    SpectralOperator(const SpectralOperator&) = delete;
    SpectralOperator& operator=(const SpectralOperator&) = delete;

    GridFunction apply(const GridFunction& u) const;
    CMat assemble_dense(long dense_cap = 4096) const;

    const TorusDomain& domain() const { return dom_; }
    double p() const { return p_; }
    long dim() const { return dom_.grid_size(); }
    const std::vector<double>& V_grid() const { return vgrid_; }
    const VectorPotential& A() const { return A_; }
    const ScalarField& V() const { return V_; }

  private:
    TorusDomain dom_;
    VectorPotential A_;
    ScalarField V_;
    double p_;
    std::array<std::vector<double>, 3> agrid_;
    std::vector<double> vgrid_;
    std::array<std::vector<double>, 3> mult_;  // per-axis multiplier values
    bool a_zero_[3] = {true, true, true};
    struct Plans;
    std::unique_ptr<Plans> plans_;

    void axis_multiplier_apply(int axis, std::vector<cplx>& buf) const;
};

// Closed-form free spectrum: all |2pi k / (p L)|^2 over representable k, ascending.
std::vector<double> free_spectrum(const TorusDomain& dom, double p);

// Row-major complex128 little-endian dump with a 16-byte header (int64 rows, cols).
void export_dense(const CMat& M, const std::string& path);

}  // namespace mag
