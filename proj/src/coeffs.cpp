#include "magtrace/coeffs.hpp"

#include <cmath>
#include <stdexcept>

namespace mag {

namespace {

double composite_gl(const std::function<double(double)>& f, double a, double b,
                    int panels) {
    double total = 0.0;
    double w = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        Quad1D q = gl_nodes(20, a + p * w, a + (p + 1) * w);
        for (std::size_t i = 0; i < q.x.size(); ++i) total += q.w[i] * f(q.x[i]);
    }
    return total;
}

double doubling_gl(const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return 0.0;
    int panels = 4;
    double prev = composite_gl(f, a, b, panels);
    for (int round = 0; round < 10; ++round) {
        panels *= 2;
        double cur = composite_gl(f, a, b, panels);
        if (std::abs(cur - prev) <= 5e-11) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace

double radial_xi_integral(const std::function<double(double)>& g, int d, double t_lo,
                          double t_hi) {
    if (d != 2 && d != 3) throw std::invalid_argument("dimension must be 2 or 3");
    if (!std::isfinite(t_lo) || !std::isfinite(t_hi))
        throw std::invalid_argument("unbounded support");
    double a = std::max(0.0, t_lo);
    if (!(t_hi > a)) return 0.0;
    if (d == 2) return PI * doubling_gl(g, a, t_hi);
    auto gs = [&g](double s) { return g(s * s) * s * s; };
    double val = doubling_gl(gs, std::sqrt(a), std::sqrt(t_hi));
    return 4.0 * PI * val;
}

double f0_pointwise(const ScalarField& V, const std::array<double, 3>& x0,
                    const TestFunction& phi, int d) {
    double v = V.eval(x0);
    auto g = [&phi, v](double t) { return phi.eval(t + v, 0); };
    double scale = std::pow(2.0 * PI, -d);
    return scale * radial_xi_integral(g, d, phi.support_lo() - v, phi.support_hi() - v);
}

double f1_pointwise() { return 0.0; }

double f2_pointwise(const MagneticField& B, const ScalarField& V,
                    const std::array<double, 3>& x0, const TestFunction& phi, int d) {
    double v = V.eval(x0);
    double grad2 = 0.0, lap = 0.0;
    for (int j = 0; j < d; ++j) {
        ScalarField dj = V.deriv(j);
        double g = dj.eval(x0);
        grad2 += g * g;
        lap += dj.deriv(j).eval(x0);
    }
    double b2 = 0.0;
    for (int j = 0; j < d; ++j)
        for (int k = j + 1; k < d; ++k) {
            double b = B.eval(j, k, x0);
            b2 += b * b;  // (1/2) of the full double sum over ordered pairs
        }
    double lo = phi.support_lo() - v, hi = phi.support_hi() - v;
    double scale = std::pow(2.0 * PI, -d);
    auto g3 = [&phi, v](double t) { return phi.eval(t + v, 3); };
    auto g2 = [&phi, v](double t) { return phi.eval(t + v, 2); };
    double i3 = scale * radial_xi_integral(g3, d, lo, hi);
    double i2 = scale * radial_xi_integral(g2, d, lo, hi);
    return -grad2 * i3 / 12.0 - (b2 + lap) * i2 / 6.0;
}

CoefficientField coefficient_field(int r, const MagneticField& B, const ScalarField& V,
                                   const TestFunction& phi, const TorusDomain& dom) {
    if (r < 0 || r > 2) throw std::invalid_argument("coefficient order must lie in [0, 2]");
    CoefficientField f(r, dom, phi);
    long m = dom.grid_size();
    f.values.resize(m);
    for (long i = 0; i < m; ++i) {
        std::array<double, 3> x = dom.grid_point(i);
        if (r == 0)
            f.values[i] = f0_pointwise(V, x, phi, dom.d);
        else if (r == 1)
            f.values[i] = f1_pointwise();
        else
            f.values[i] = f2_pointwise(B, V, x, phi, dom.d);
    }
    return f;
}

double trace_coefficient(int r, const MagneticField& B, const ScalarField& V,
                         const TestFunction& phi, const TorusDomain& dom) {
    CoefficientField f = coefficient_field(r, B, V, phi, dom);
    double sum = 0.0;
    for (double v : f.values) sum += v;
    return sum / static_cast<double>(f.values.size()) * dom.volume();
}

}  // namespace mag
