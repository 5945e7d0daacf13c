#include "magtrace/discretize.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace mag {

struct SpectralOperator::Plans {
    fftw_plan fwd = nullptr, bwd = nullptr;
    std::vector<cplx> proto;  // planning buffer
    ~Plans() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
    }
};

SpectralOperator::SpectralOperator(TorusDomain dom, VectorPotential A, ScalarField V,
                                   double p)
    : dom_(dom), A_(std::move(A)), V_(std::move(V)), p_(p) {
    dom_.validate();
    if (!(p_ > 0.0)) throw std::invalid_argument("SpectralOperator: p <= 0");
    if (!V_.compatible(dom_))
        throw std::invalid_argument("SpectralOperator: V not representable on grid");
    vgrid_ = V_.sample_grid(dom_);
    for (int j = 0; j < dom_.d; ++j) {
        if (!A_.A[j].compatible(dom_) && (A_.A[j].max_wavenumber() > 0 ||
                                          A_.A[j].constant() != 0.0))
            throw std::invalid_argument("SpectralOperator: A not representable on grid");
        a_zero_[j] = A_.A[j].modes().empty() && A_.A[j].constant() == 0.0;
        if (!a_zero_[j]) agrid_[j] = A_.A[j].sample_grid(dom_);
    }

    const int N = dom_.grid_n;
    const double h = 1.0 / p_;
    for (int j = 0; j < dom_.d; ++j) {
        mult_[j].resize(N);
        for (int i = 0; i < N; ++i) {
            int k = (i < N / 2) ? i : i - N;
            mult_[j][i] = h * 2.0 * PI * k / dom_.periods[j];
        }
    }

    plans_ = std::make_unique<Plans>();
    plans_->proto.resize(dom_.grid_size());
    auto* buf = reinterpret_cast<fftw_complex*>(plans_->proto.data());
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    if (dom_.d == 2) {
        plans_->fwd = fftw_plan_dft_2d(N, N, buf, buf, FFTW_FORWARD, flags);
        plans_->bwd = fftw_plan_dft_2d(N, N, buf, buf, FFTW_BACKWARD, flags);
    } else {
        plans_->fwd = fftw_plan_dft_3d(N, N, N, buf, buf, FFTW_FORWARD, flags);
        plans_->bwd = fftw_plan_dft_3d(N, N, N, buf, buf, FFTW_BACKWARD, flags);
    }
}

SpectralOperator::~SpectralOperator() = default;

void SpectralOperator::axis_multiplier_apply(int axis, std::vector<cplx>& buf) const {
    const int N = dom_.grid_n;
    auto* raw = reinterpret_cast<fftw_complex*>(buf.data());
    fftw_execute_dft(plans_->fwd, raw, raw);
    const long M = dom_.grid_size();
    const std::vector<double>& m = mult_[axis];
    if (dom_.d == 2) {
        for (long idx = 0; idx < M; ++idx) {
            int ki = (axis == 0) ? static_cast<int>(idx / N) : static_cast<int>(idx % N);
            buf[idx] *= m[ki];
        }
    } else {
        for (long idx = 0; idx < M; ++idx) {
            long rest = idx;
            int i2 = static_cast<int>(rest % N);
            rest /= N;
            int i1 = static_cast<int>(rest % N);
            int i0 = static_cast<int>(rest / N);
            int ki = (axis == 0) ? i0 : (axis == 1) ? i1 : i2;
            buf[idx] *= m[ki];
        }
    }
    fftw_execute_dft(plans_->bwd, raw, raw);
    const double scale = 1.0 / static_cast<double>(M);
    for (auto& v : buf) v *= scale;
}

GridFunction SpectralOperator::apply(const GridFunction& u) const {
    const long M = dom_.grid_size();
    if (static_cast<long>(u.size()) != M)
        throw std::invalid_argument("SpectralOperator::apply: size mismatch");
    GridFunction out(M);
    for (long i = 0; i < M; ++i) out[i] = vgrid_[i] * u[i];

    std::vector<cplx> w(M);
    for (int j = 0; j < dom_.d; ++j) {
        w = u;
        axis_multiplier_apply(j, w);                       // D_j u
        if (!a_zero_[j])
            for (long i = 0; i < M; ++i) w[i] -= agrid_[j][i] * u[i];  // S_j u
        std::vector<cplx> w2 = w;
        axis_multiplier_apply(j, w2);                      // D_j (S_j u)
        if (!a_zero_[j])
            for (long i = 0; i < M; ++i) w2[i] -= agrid_[j][i] * w[i];
        for (long i = 0; i < M; ++i) out[i] += w2[i];
    }
    return out;
}

CMat SpectralOperator::assemble_dense(long dense_cap) const {
    const long M = dom_.grid_size();
    if (M > dense_cap)
        throw std::runtime_error("assemble_dense: dimension above dense cap");
    CMat H(static_cast<int>(M));
    GridFunction e(M, cplx(0.0));
    for (long j = 0; j < M; ++j) {
        e[j] = 1.0;
        GridFunction col = apply(e);
        e[j] = 0.0;
        for (long i = 0; i < M; ++i) H.at(static_cast<int>(i), static_cast<int>(j)) = col[i];
    }
    return H;
}

std::vector<double> free_spectrum(const TorusDomain& dom, double p) {
    const int N = dom.grid_n;
    std::vector<double> ev;
    ev.reserve(dom.grid_size());
    const double h = 1.0 / p;
    auto freq = [N](int i) { return (i < N / 2) ? i : i - N; };
    if (dom.d == 2) {
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1) {
                double a = h * 2.0 * PI * freq(i0) / dom.periods[0];
                double b = h * 2.0 * PI * freq(i1) / dom.periods[1];
                ev.push_back(a * a + b * b);
            }
    } else {
        for (int i0 = 0; i0 < N; ++i0)
            for (int i1 = 0; i1 < N; ++i1)
                for (int i2 = 0; i2 < N; ++i2) {
                    double a = h * 2.0 * PI * freq(i0) / dom.periods[0];
                    double b = h * 2.0 * PI * freq(i1) / dom.periods[1];
                    double c = h * 2.0 * PI * freq(i2) / dom.periods[2];
                    ev.push_back(a * a + b * b + c * c);
                }
    }
    std::sort(ev.begin(), ev.end());
    return ev;
}

void export_dense(const CMat& M, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("export_dense: cannot open " + path);
    std::int64_t dims[2] = {M.n, M.n};
    f.write(reinterpret_cast<const char*>(dims), 16);
    f.write(reinterpret_cast<const char*>(M.a.data()),
            static_cast<std::streamsize>(M.a.size() * sizeof(cplx)));
}

}  // namespace mag
