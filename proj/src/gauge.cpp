#include "magtrace/gauge.hpp"

#include <cmath>
#include <map>

namespace mag {

namespace {

const Quad1D& unit_gl16() {
    static const Quad1D q = gl_nodes(16, 0.0, 1.0);
    return q;
}

std::array<double, 3> shift(const std::array<double, 3>& x0,
                            const std::array<double, 3>& Z, double tau) {
    return {x0[0] + tau * Z[0], x0[1] + tau * Z[1], x0[2] + tau * Z[2]};
}

}  // namespace

std::array<double, 3> fock_schwinger_potential(const MagneticField& B,
                                               const std::array<double, 3>& x0,
                                               const std::array<double, 3>& Z) {
    const int d = B.dim();
    const Quad1D& q = unit_gl16();
    std::array<double, 3> A{0.0, 0.0, 0.0};
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int k = 0; k < d; ++k) {
            if (Z[k] == 0.0) continue;
            double integral = 0.0;
            for (size_t i = 0; i < q.x.size(); ++i)
                integral += q.w[i] * q.x[i] * B.eval(k, j, shift(x0, Z, q.x[i]));
            s += integral * Z[k];
        }
        A[j] = s;
    }
    return A;
}

double gauge_phase(const VectorPotential& A, const std::array<double, 3>& x0,
                   const std::array<double, 3>& Z) {
    const Quad1D& q = unit_gl16();
    double phi = 0.0;
    for (int j = 0; j < A.d; ++j) {
        if (Z[j] == 0.0) continue;
        double integral = 0.0;
        for (size_t i = 0; i < q.x.size(); ++i)
            integral += q.w[i] * A.A[j].eval(shift(x0, Z, q.x[i]));
        phi -= integral * Z[j];
    }
    return phi;
}

std::array<double, 3> HomogeneousTaylorTerm::eval(const std::array<double, 3>& Z) const {
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (int j = 0; j < d; ++j)
        for (const auto& m : comps[j]) {
            double v = m.coeff;
            for (int i = 0; i < d; ++i)
                for (int e = 0; e < m.expo[i]; ++e) v *= Z[i];
            out[j] += v;
        }
    return out;
}

int HomogeneousTaylorTerm::max_degree() const {
    int deg = 0;
    for (int j = 0; j < d; ++j)
        for (const auto& m : comps[j])
            deg = std::max(deg, m.expo[0] + m.expo[1] + m.expo[2]);
    return deg;
}

namespace {

void multi_indices(int d, int total, std::array<int, 3> cur, int axis,
                   std::vector<std::array<int, 3>>& out) {
    if (axis == d - 1) {
        cur[axis] = total;
        out.push_back(cur);
        return;
    }
    for (int v = 0; v <= total; ++v) {
        cur[axis] = v;
        multi_indices(d, total - v, cur, axis + 1, out);
    }
}

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

}  // namespace

double fock_schwinger_divergence(const MagneticField& B,
                                 const std::array<double, 3>& x0,
                                 const std::array<double, 3>& Y) {
    const int d = B.dim();
    const Quad1D& q = unit_gl16();
    double div = 0.0;
    for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
            if (Y[k] == 0.0 || j == k) continue;
            ScalarField dB = B.component(k, j).deriv(j);
            double integral = 0.0;
            for (size_t i = 0; i < q.x.size(); ++i)
                integral += q.w[i] * q.x[i] * q.x[i] * dB.eval(shift(x0, Y, q.x[i]));
            div += integral * Y[k];
        }
    return div;
}

HomogeneousTaylorTerm taylor_vector_potential(const MagneticField& B,
                                              const std::array<double, 3>& x0, int r) {
    if (r < 1 || r > 4)
        throw std::invalid_argument("taylor_vector_potential: r outside [1,4]");
    const int d = B.dim();
    HomogeneousTaylorTerm term;
    term.r = r;
    term.d = d;

    std::vector<std::array<int, 3>> alphas;
    multi_indices(d, r - 1, {0, 0, 0}, 0, alphas);

    for (int j = 0; j < d; ++j) {
        std::map<std::array<int, 3>, double> acc;
        for (int k = 0; k < d; ++k) {
            ScalarField bkj = B.component(k, j);
            for (const auto& alpha : alphas) {
                ScalarField dB = bkj;
                for (int axis = 0; axis < d; ++axis)
                    for (int e = 0; e < alpha[axis]; ++e) dB = dB.deriv(axis);
                double val = dB.eval(x0);
                if (val == 0.0) continue;
                double afac = 1.0;
                for (int axis = 0; axis < d; ++axis) afac *= factorial(alpha[axis]);
                std::array<int, 3> expo = alpha;
                expo[k] += 1;
                acc[expo] += val / ((r + 1.0) * afac);
            }
        }
        for (const auto& [expo, coeff] : acc)
            if (coeff != 0.0) term.comps[j].push_back({expo, coeff});
    }
    return term;
}

}  // namespace mag
