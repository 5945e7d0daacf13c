#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "magtrace/coeffs.hpp"
#include "magtrace/discretize.hpp"
#include "magtrace/eig.hpp"
#include "magtrace/hsfc.hpp"
#include "magtrace/model.hpp"
#include "magtrace/opexpand.hpp"

namespace mag {

struct Problem {
    TorusDomain dom;  // d and periods; grid_n is chosen per run
    MagneticField B;
    ScalarField V;
    TestFunction phi;

    // no field modes and constant V: Fourier modes are exact eigenvectors
    bool diagonal() const;
    void validate() const;
};

// Even grid size >= max(12, 4 k_max, margin p L sqrt(E_max) / pi + 8), rounded
// up to a multiple of round_to. E_max is the top of the spectral window.
int grid_rule(const Problem& prob, double p, double e_max, double margin, int round_to);

struct EigSettings {
    long dense_cap = 4096;
    long cert_dense_cap = 1024;  // above this the doubled grid uses Lanczos
    double lanczos_tol = 1e-9;
    int lanczos_max_iter = 4000;  // cap on processed Lanczos columns
    int lanczos_block = 8;
};

// Window eigenvalues of the discretized operator, ascending. Route: exact
// multipliers for diagonal problems, dense Householder+QL up to dense_cap,
// block Lanczos with full reorthogonalization beyond.
std::vector<double> window_eigenvalues(const Problem& prob, double p, int grid_n,
                                       double lo, double hi, const EigSettings& es);

struct Certificate {
    bool ok = false;
    double max_shift = 0.0;
    int grid_n = 0;
    int grid_n_fine = 0;
    long matched = 0;
    bool count_match = true;
    std::string method;  // exact-diagonal | dense | lanczos
};

// Grid-doubling stability of the window eigenvalues, pass at 1e-8.
Certificate resolution_certificate(const Problem& prob, double p, int grid_n, double lo,
                                   double hi, const std::vector<double>& base_vals,
                                   const EigSettings& es);

double spectral_sum(const std::vector<double>& evs, const TestFunction& phi);

enum class TraceMethod { eig, hsfc };

struct TraceSettings {
    double margin = 1.5;
    int round_to = 2;
    int hs_N = 4;
    double hs_delta = 1.0;
    int hs_quad_n = 40;
    bool certify = true;
    EigSettings eig;
};

// tr phi(H_p) with certificate enforcement; refuses on certificate failure.
double trace_of_phi(const Problem& prob, double p, TraceMethod method,
                    const TraceSettings& ts, Certificate* cert_out = nullptr);

struct TraceLadderEntry {
    double p = 0.0;
    double trace = 0.0;
    std::string method;
    int grid_n = 0;
    bool certified = false;
    double cert_shift = 0.0;
    std::string cert_method;
    double trace_alt = 0.0;  // cross-route value, 0 when not computed
    bool has_alt = false;
    double alt_rel_diff = 0.0;
    double hs_imag_defect = 0.0;
};

struct TraceLadder {
    std::vector<TraceLadderEntry> entries;
};

struct LadderSettings {
    std::vector<double> ps{8, 10, 12, 16, 20, 24, 32, 40};
    TraceMethod method = TraceMethod::eig;
    bool cross_check = true;  // also run the other route where dense-feasible
    TraceSettings trace;
};

TraceLadder compute_ladder(const Problem& prob, const LadderSettings& ls);

struct ExpansionFit {
    std::vector<int> orders;
    std::vector<double> coef;
    std::vector<double> stderrs;
    double resid_norm = 0.0;
    double cond = 0.0;
};

// Uniform-weight least squares of T(p) p^{-d} against sum c_r p^{-r}. With
// enforce set, requires >= 6 certified entries and >= orders + 2 points.
ExpansionFit expansion_fit(const TraceLadder& ladder, int d,
                           const std::vector<int>& orders = {0, 1, 2, 3},
                           bool enforce = true);

// K(x, x) = sum phi(lambda_k) |psi_k(x)|^2 at every grid point.
std::vector<double> diagonal_kernel_grid(const EigenWindow& win, const TorusDomain& dom,
                                         const TestFunction& phi);

struct KernelCheckSettings {
    std::vector<double> ps{8, 12, 16, 20, 24, 28, 32};
    std::vector<std::array<double, 3>> points_frac{
        {0.0, 0.0, 0.0},   {0.25, 0.5, 0.0}, {0.5, 0.25, 0.0},
        {0.75, 0.75, 0.0}, {0.25, 0.25, 0.0}};
    TraceSettings trace;  // round_to should keep the sample points on-grid
};

struct KernelCheckResult {
    std::vector<double> ps;
    std::vector<int> grids;
    std::vector<Certificate> certs;
    std::vector<std::vector<double>> residuals;  // [point][entry]
    std::vector<double> orders;                  // per point, observed decay order
    double min_order = 0.0;
    double max_trace_kernel_rel = 0.0;
};

// Pointwise expansion check: residual of p^{-d} K(x,x) - f0(x) - p^{-2} f2(x)
// against the p-ladder, plus trace-kernel consistency.
KernelCheckResult kernel_check(const Problem& prob, const KernelCheckSettings& ks);

struct GaugeCheckSettings {
    int n_points = 100;
    int n_taylor = 10;
    double fd_step = 0.05;
    double spectrum_p = 2.0;
    int spectrum_grid = 32;
    // Eigenvalues are compared only below (pi N / (margin p L))^2; above
    // that the Galerkin truncation no longer commutes with the gauge phase.
    double spectrum_margin = 2.8;
    double theta_amp = 0.02;
    std::uint64_t seed = 1;
};

struct GaugeCheckResult {
    double transversality_max = 0.0;  // |Z.A| / (|Z||A|)
    double taylor_max_rel = 0.0;
    double gauge_relation_max = 0.0;
    double curl_defect_max = 0.0;
    double homogeneity_max = 0.0;
    std::array<double, 3> truncation_orders{0.0, 0.0, 0.0};  // m = 1, 2, 3
    double spectrum_invariance = 0.0;
    long spectrum_dim = 0;
    int spectrum_compared = 0;  // eigenvalues below the resolution cap
};

GaugeCheckResult gauge_check(const MagneticField& B, const ScalarField& V,
                             const GaugeCheckSettings& gs);

struct ExpandCheckSettings {
    std::array<double, 3> x0{0.0, 0.0, 0.0};
    std::vector<double> h_ladder{0.25, 0.125, 0.0625, 0.03125, 0.015625, 0.0078125};
    int n_samples = 10;
    double sample_box = 1.5;
    std::uint64_t seed = 2;
};

struct ExpandCheckResult {
    std::array<double, 3> slopes{0.0, 0.0, 0.0};  // m = 0, 1, 2
    std::array<bool, 3> saturated{false, false, false};
};

ExpandCheckResult expand_check(const MagneticField& B, const ScalarField& V,
                               const ExpandCheckSettings& es);

struct HsCheckSettings {
    int dim = 50;
    int N = 4;
    double delta = 1.0;
    int quad_n = 60;
    double window_lo = 0.6;
    double window_hi = 1.9;
    std::uint64_t seed = 3;
};

struct HsCheckResult {
    double apply_err = 0.0;  // spectral norm vs the spectral-theorem sum
    double d1_err = 0.0;
    double d2_err = 0.0;
};

// Random Hermitian matrix with spectrum spread inside the window; compares
// hs_apply and hs_derivative against sum phi^(k)(lambda_i) v_i v_i^*.
HsCheckResult hs_check(const TestFunction& phi, const HsCheckSettings& hs);

}  // namespace mag
