#include "spectra/jet.hpp"

#include "spectra/errors.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace spectra {

struct Jet::Layout {
    int nvars = 0;
    int order = 0;
    std::vector<MultiIndex> idx;
    std::map<MultiIndex, std::size_t> pos;
    struct Triple {
        std::size_t i, j, k;
    };
    std::vector<Triple> mult;
    std::vector<double> factorial;  // α! per index
};

namespace {

void build_indices(int nvars, int total, MultiIndex& cur, int var, std::vector<MultiIndex>& out) {
    if (var == nvars - 1) {
        cur[static_cast<std::size_t>(var)] = total;
        out.push_back(cur);
        return;
    }
    for (int a = total; a >= 0; --a) {
        cur[static_cast<std::size_t>(var)] = a;
        build_indices(nvars, total - a, cur, var + 1, out);
    }
}

const Jet::Layout* get_layout(int nvars, int order) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<Jet::Layout>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{nvars, order}];
    if (slot) return slot.get();
    auto lay = std::make_unique<Jet::Layout>();
    lay->nvars = nvars;
    lay->order = order;
    MultiIndex cur(static_cast<std::size_t>(nvars), 0);
    for (int t = 0; t <= order; ++t) {
        if (nvars == 0) {
            if (t == 0) lay->idx.push_back({});
            continue;
        }
        build_indices(nvars, t, cur, 0, lay->idx);
    }
    for (std::size_t i = 0; i < lay->idx.size(); ++i) {
        lay->pos[lay->idx[i]] = i;
        double f = 1.0;
        for (int a : lay->idx[i])
            for (int q = 2; q <= a; ++q) f *= q;
        lay->factorial.push_back(f);
    }
    for (std::size_t i = 0; i < lay->idx.size(); ++i) {
        for (std::size_t j = 0; j < lay->idx.size(); ++j) {
            MultiIndex s = lay->idx[i];
            int tot = 0;
            for (std::size_t v = 0; v < s.size(); ++v) {
                s[v] += lay->idx[j][v];
                tot += s[v];
            }
            if (tot > order) continue;
            lay->mult.push_back({i, j, lay->pos.at(s)});
        }
    }
    slot = std::move(lay);
    return slot.get();
}

}  // namespace

Jet::Jet(int nvars, int order) : layout_(get_layout(nvars, order)), c_(layout_->idx.size(), 0.0) {}

Jet Jet::constant(int nvars, int order, std::complex<double> c) {
    Jet j(nvars, order);
    j.c_[0] = c;
    return j;
}

Jet Jet::variable(int nvars, int order, int axis, double x0) {
    Jet j(nvars, order);
    j.c_[0] = x0;
    if (order >= 1) {
        MultiIndex e(static_cast<std::size_t>(nvars), 0);
        e[static_cast<std::size_t>(axis)] = 1;
        j.c_[j.layout_->pos.at(e)] = 1.0;
    }
    return j;
}

int Jet::nvars() const { return layout_->nvars; }
int Jet::order() const { return layout_->order; }
const std::vector<MultiIndex>& Jet::indices() const { return layout_->idx; }

std::complex<double> Jet::coeff(const MultiIndex& alpha) const {
    auto it = layout_->pos.find(alpha);
    return it == layout_->pos.end() ? std::complex<double>(0.0) : c_[it->second];
}

std::complex<double> Jet::derivative(const MultiIndex& alpha) const {
    auto it = layout_->pos.find(alpha);
    if (it == layout_->pos.end()) throw Error(ErrorCode::InvalidArgument, "derivative order exceeds the jet order");
    return c_[it->second] * layout_->factorial[it->second];
}

Jet& Jet::operator+=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet& Jet::operator*=(std::complex<double> s) {
    for (auto& x : c_) x *= s;
    return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.nvars(), a.order());
    for (const auto& t : a.layout_->mult) r.c_[t.k] += a.c_[t.i] * b.c_[t.j];
    return r;
}

Jet Jet::compose(const std::vector<std::complex<double>>& derivs) const {
    Jet h = *this;
    h.c_[0] = 0.0;
    Jet result = constant(nvars(), order(), derivs.at(0));
    Jet power = constant(nvars(), order(), 1.0);
    double fact = 1.0;
    for (int k = 1; k <= order(); ++k) {
        power = power * h;
        fact *= k;
        const std::complex<double> g = derivs.at(static_cast<std::size_t>(k));
        if (g == 0.0) continue;
        result += power * (g / fact);
    }
    return result;
}

Jet Jet::reciprocal() const {
    const std::complex<double> x = value();
    std::vector<std::complex<double>> d(static_cast<std::size_t>(order()) + 1);
    std::complex<double> p = 1.0 / x;
    for (int k = 0; k <= order(); ++k) {
        d[static_cast<std::size_t>(k)] = p;
        p *= -static_cast<double>(k + 1) / x;
    }
    return compose(d);
}

Jet Jet::sqrt() const {
    const std::complex<double> x = value();
    std::vector<std::complex<double>> d(static_cast<std::size_t>(order()) + 1);
    std::complex<double> p = std::sqrt(x);
    for (int k = 0; k <= order(); ++k) {
        d[static_cast<std::size_t>(k)] = p;
        p *= (0.5 - k) / x;
    }
    return compose(d);
}

Jet Jet::exp() const {
    std::vector<std::complex<double>> d(static_cast<std::size_t>(order()) + 1, std::exp(value()));
    return compose(d);
}

Jet Jet::abs() const {
    Jet r = *this;
    if (value().real() < 0.0) r *= -1.0;
    return r;
}

Jet Jet::differentiate(const MultiIndex& s, int new_order) const {
    int tot = std::accumulate(s.begin(), s.end(), 0);
    if (new_order + tot > order()) throw Error(ErrorCode::InvalidArgument, "jet too short for differentiation");
    Jet r(nvars(), new_order);
    for (std::size_t i = 0; i < r.c_.size(); ++i) {
        MultiIndex a = r.layout_->idx[i];
        double f = 1.0;
        for (std::size_t v = 0; v < a.size(); ++v) {
            for (int q = 1; q <= s[v]; ++q) f *= a[v] + q;
            a[v] += s[v];
        }
        r.c_[i] = c_[layout_->pos.at(a)] * f;
    }
    return r;
}

namespace {

constexpr double kLow = 0.25;
constexpr double kHigh = 1.1 / 4.0;
constexpr double kWidth = 0.1 / 4.0;

// Jet of f(u) = exp(−1/u) for u > 0, identically zero once f underflows.
Jet flat_exp(const Jet& u) {
    const double u0 = u.value().real();
    if (u0 <= 0.0 || 1.0 / u0 > 700.0) return Jet(u.nvars(), u.order());
    Jet neg_recip = u.reciprocal();
    neg_recip *= -1.0;
    return neg_recip.exp();
}

}  // namespace

double smooth_step(double z) {
    if (z <= kLow) return 1.0;
    if (z >= kHigh) return 0.0;
    const double u = (kHigh - z) / kWidth;
    const double fu = std::exp(-1.0 / u);
    const double fv = std::exp(-1.0 / (1.0 - u));
    return fu / (fu + fv);
}

std::vector<double> smooth_step_derivatives(double z, int order) {
    std::vector<double> out(static_cast<std::size_t>(order) + 1, 0.0);
    if (z <= kLow) {
        out[0] = 1.0;
        return out;
    }
    if (z >= kHigh) return out;
    Jet zj = Jet::variable(1, order, 0, z);
    Jet u = (Jet::constant(1, order, kHigh) - zj) * (1.0 / kWidth);
    Jet v = Jet::constant(1, order, 1.0) - u;
    Jet fu = flat_exp(u);
    Jet fv = flat_exp(v);
    Jet sigma = fu * (fu + fv).reciprocal();
    for (int k = 0; k <= order; ++k) out[static_cast<std::size_t>(k)] = sigma.derivative({k}).real();
    out[0] = smooth_step(z);
    return out;
}

}  // namespace spectra
