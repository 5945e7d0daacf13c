#include "magtrace/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace mag {

void TorusDomain::validate() const {
    if (d != 2 && d != 3) throw std::invalid_argument("TorusDomain: d must be 2 or 3");
    for (int i = 0; i < d; ++i)
        if (!(periods[i] > 0.0)) throw std::invalid_argument("TorusDomain: period <= 0");
    if (grid_n < 8 || grid_n % 2 != 0)
        throw std::invalid_argument("TorusDomain: grid_n must be even and >= 8");
}

double TorusDomain::volume() const {
    double v = 1.0;
    for (int i = 0; i < d; ++i) v *= periods[i];
    return v;
}

long TorusDomain::grid_size() const {
    long s = 1;
    for (int i = 0; i < d; ++i) s *= grid_n;
    return s;
}

std::array<double, 3> TorusDomain::grid_point(long idx) const {
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int i = d - 1; i >= 0; --i) {
        long m = idx % grid_n;
        idx /= grid_n;
        x[i] = m * periods[i] / grid_n;
    }
    return x;
}

ScalarField::ScalarField(int d, std::array<double, 3> periods, double constant,
                         std::vector<TrigMode> modes)
    : d_(d), periods_(periods), constant_(constant), modes_(std::move(modes)) {
    for (auto& m : modes_)
        for (int i = d_; i < 3; ++i)
            if (m.k[i] != 0) throw std::invalid_argument("ScalarField: mode beyond dimension");
}

double ScalarField::eval(const std::array<double, 3>& x) const {
    double v = constant_;
    for (const auto& m : modes_) {
        double ph = 0.0;
        for (int i = 0; i < d_; ++i) ph += 2.0 * PI * m.k[i] * x[i] / periods_[i];
        v += m.c * std::cos(ph) + m.s * std::sin(ph);
    }
    return v;
}

ScalarField ScalarField::deriv(int axis) const {
    std::vector<TrigMode> out;
    out.reserve(modes_.size());
    for (const auto& m : modes_) {
        double kap = 2.0 * PI * m.k[axis] / periods_[axis];
        TrigMode dm;
        dm.k = m.k;
        dm.c = kap * m.s;
        dm.s = -kap * m.c;
        if (dm.c != 0.0 || dm.s != 0.0) out.push_back(dm);
    }
    return ScalarField(d_, periods_, 0.0, std::move(out));
}

std::vector<double> ScalarField::sample_grid(const TorusDomain& dom) const {
    if (!compatible(dom)) throw std::invalid_argument("ScalarField: incompatible with domain");
    const long n = dom.grid_size();
    std::vector<double> g(n);
    for (long i = 0; i < n; ++i) g[i] = eval(dom.grid_point(i));
    return g;
}

int ScalarField::max_wavenumber() const {
    int m = 0;
    for (const auto& mo : modes_)
        for (int i = 0; i < d_; ++i) m = std::max(m, std::abs(mo.k[i]));
    return m;
}

bool ScalarField::compatible(const TorusDomain& dom) const {
    if (dom.d != d_) return false;
    for (int i = 0; i < d_; ++i)
        if (std::abs(periods_[i] - dom.periods[i]) > 1e-12 * dom.periods[i]) return false;
    return max_wavenumber() <= dom.grid_n / 2 - 1;
}

double ScalarField::max_abs_coeff() const {
    double m = std::abs(constant_);
    for (const auto& mo : modes_) m = std::max({m, std::abs(mo.c), std::abs(mo.s)});
    return m;
}

namespace {

std::vector<TrigMode> merge_modes(std::vector<TrigMode> in) {
    std::map<std::array<int, 3>, std::pair<double, double>> acc;
    for (const auto& m : in) {
        auto& e = acc[m.k];
        e.first += m.c;
        e.second += m.s;
    }
    std::vector<TrigMode> out;
    for (const auto& [k, cs] : acc) {
        if (cs.first == 0.0 && cs.second == 0.0) continue;
        out.push_back({k, cs.first, cs.second});
    }
    return out;
}

}  // namespace

ScalarField ScalarField::operator+(const ScalarField& o) const {
    if (o.d_ != d_) throw std::invalid_argument("ScalarField: dim mismatch");
    std::vector<TrigMode> all = modes_;
    all.insert(all.end(), o.modes_.begin(), o.modes_.end());
    return ScalarField(d_, periods_, constant_ + o.constant_, merge_modes(std::move(all)));
}

ScalarField ScalarField::scaled(double s) const {
    ScalarField r = *this;
    r.constant_ *= s;
    for (auto& m : r.modes_) {
        m.c *= s;
        m.s *= s;
    }
    return r;
}

MagneticField::MagneticField(int d, std::vector<std::array<int, 2>> pairs,
                             std::vector<ScalarField> comps)
    : d_(d), pairs_(std::move(pairs)), comps_(std::move(comps)) {
    if (pairs_.size() != comps_.size())
        throw std::invalid_argument("MagneticField: pairs/components mismatch");
    for (auto& pr : pairs_)
        if (!(pr[0] < pr[1] && pr[0] >= 0 && pr[1] < d_))
            throw std::invalid_argument("MagneticField: bad component index");
}

const ScalarField* MagneticField::find(int j, int k) const {
    for (size_t i = 0; i < pairs_.size(); ++i)
        if (pairs_[i][0] == j && pairs_[i][1] == k) return &comps_[i];
    return nullptr;
}

double MagneticField::eval(int j, int k, const std::array<double, 3>& x) const {
    if (j == k) return 0.0;
    if (j < k) {
        const ScalarField* f = find(j, k);
        return f ? f->eval(x) : 0.0;
    }
    const ScalarField* f = find(k, j);
    return f ? -f->eval(x) : 0.0;
}

ScalarField MagneticField::component(int j, int k) const {
    if (j < k) {
        const ScalarField* f = find(j, k);
        if (f) return *f;
    } else if (k < j) {
        const ScalarField* f = find(k, j);
        if (f) return f->scaled(-1.0);
    }
    return ScalarField(d_, comps_.empty() ? std::array<double, 3>{1, 1, 1}
                                          : comps_[0].periods(),
                       0.0, {});
}

void MagneticField::check_zero_flux() const {
    for (const auto& f : comps_)
        if (std::abs(f.mean()) > 1e-14)
            throw std::invalid_argument("MagneticField: nonzero flux component");
}

void MagneticField::check_closed() const {
    if (d_ != 3) return;
    // (dB)_{012} = d0 B12 - d1 B02 + d2 B01
    ScalarField t = component(1, 2).deriv(0) + component(0, 2).deriv(1).scaled(-1.0) +
                    component(0, 1).deriv(2);
    if (t.max_abs_coeff() > 1e-12)
        throw std::invalid_argument("MagneticField: dB != 0");
}

int VectorPotential::max_wavenumber() const {
    int m = 0;
    for (int i = 0; i < d; ++i) m = std::max(m, A[i].max_wavenumber());
    return m;
}

VectorPotential potential_from_field(const MagneticField& B,
                                     const std::array<double, 3>& periods) {
    B.check_zero_flux();
    B.check_closed();
    const int d = B.dim();
    std::array<std::vector<TrigMode>, 3> acc;
    for (size_t i = 0; i < B.pairs().size(); ++i) {
        const int a = B.pairs()[i][0], b = B.pairs()[i][1];
        for (const auto& m : B.comps()[i].modes()) {
            std::array<double, 3> kap{0, 0, 0};
            double k2 = 0.0;
            for (int t = 0; t < d; ++t) {
                kap[t] = 2.0 * PI * m.k[t] / periods[t];
                k2 += kap[t] * kap[t];
            }
            if (k2 == 0.0) {
                if (m.c != 0.0) throw std::invalid_argument("potential_from_field: flux mode");
                continue;
            }
            // A_b += -i kap_a Bhat / |kap|^2, A_a += +i kap_b Bhat / |kap|^2
            acc[b].push_back({m.k, -kap[a] * m.s / k2, kap[a] * m.c / k2});
            acc[a].push_back({m.k, kap[b] * m.s / k2, -kap[b] * m.c / k2});
        }
    }
    VectorPotential A;
    A.d = d;
    for (int j = 0; j < d; ++j)
        A.A[j] = ScalarField(d, periods, 0.0, merge_modes(std::move(acc[j])));
    return A;
}

double curl_defect(const VectorPotential& A, const MagneticField& B) {
    double worst = 0.0;
    for (int j = 0; j < A.d; ++j)
        for (int k = j + 1; k < A.d; ++k) {
            ScalarField diff =
                A.A[k].deriv(j) + A.A[j].deriv(k).scaled(-1.0) + B.component(j, k).scaled(-1.0);
            worst = std::max(worst, diff.max_abs_coeff());
        }
    return worst;
}

TestFunction::TestFunction(TestFunctionKind kind, double center, double width,
                           Poly poly_factor)
    : kind_(kind), c_(center), w_(width), q_(std::move(poly_factor)) {
    if (!(width > 0.0)) throw std::invalid_argument("TestFunction: width <= 0");
    if (kind_ == TestFunctionKind::bump) q_ = Poly{{1.0}};
    Poly u{{w_ * w_, 0.0, -1.0}};
    Poly u2 = u * u;
    pk_[0] = q_;
    for (int k = 0; k < max_derivative; ++k) {
        Poly a = pk_[k].deriv() * u2;
        Poly b = (Poly{{0.0, 4.0 * k}} * pk_[k]) * u;
        Poly c = Poly{{0.0, -2.0 * w_ * w_}} * pk_[k];
        pk_[k + 1] = a + b + c;
        pk_[k + 1].trim();
    }
}

double TestFunction::eval(double t, int k) const {
    if (k < 0 || k > max_derivative)
        throw std::invalid_argument("TestFunction: derivative order out of range");
    const double s = t - c_;
    const double u = w_ * w_ - s * s;
    if (u <= w_ * w_ / 700.0) return 0.0;
    const double g = std::exp(-w_ * w_ / u);
    return pk_[k].eval(s) / std::pow(u, 2 * k) * g;
}

TestFunction TestFunction::scaled(double s) const {
    TestFunction r = *this;
    r.kind_ = TestFunctionKind::poly_bump;
    r.q_ = q_.scaled(s);
    for (auto& p : r.pk_) p = p.scaled(s);
    return r;
}

}  // namespace mag
