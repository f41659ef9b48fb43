#include "spectra/heat.hpp"

#include "spectra/errors.hpp"

#include <boost/math/constants/constants.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <functional>
#include <sstream>

namespace spectra {

namespace {

Rational ipow(Rational base, int e) {
    Rational r = 1;
    for (int k = 0; k < e; ++k) r *= base;
    return r;
}

}  // namespace

double ExactScalar::value() const { return to_double(q) * std::pow(boost::math::constants::pi<double>(), pi_power); }

std::string ExactScalar::to_string() const {
    if (pi_power == 0 || q == 0) return format_rational(q);
    return format_rational(q) + "*pi^" + std::to_string(pi_power);
}

HalfGamma gamma_half(int n) {
    HalfGamma g;
    if (n % 2 == 0) {
        const int m = n / 2;
        if (m <= 0) {
            g.pole = true;
            return g;
        }
        g.q = 1;
        for (int k = 2; k < m; ++k) g.q *= k;
        return g;
    }
    // Γ(1/2) = √π, then Γ(z+1) = zΓ(z) upward or Γ(z) = Γ(z+1)/z downward.
    g.sqrt_pi = true;
    g.q = 1;
    for (int z2 = 1; z2 < n; z2 += 2) g.q *= Rational(z2, 2);
    for (int z2 = -1; z2 >= n; z2 -= 2) g.q /= Rational(z2, 2);
    return g;
}

ExactScalar unit_ball_volume(int d) {
    const HalfGamma g = gamma_half(d + 2);
    if (d % 2 == 0) return {1 / g.q, d / 2};
    return {1 / g.q, (d - 1) / 2};
}

ExactScalar weyl_constant(int d) {
    const ExactScalar w = unit_ball_volume(d);
    return {w.q / ipow(2, d), w.pi_power - d};
}

// ---- TrigPoly ----

namespace {

ComplexSurd times_i_power(const ComplexSurd& c, int n) {
    switch (((n % 4) + 4) % 4) {
        case 0: return c;
        case 1: return {-c.im, c.re};
        case 2: return -c;
        default: return {c.im, -c.re};
    }
}

}  // namespace

TrigPoly TrigPoly::constant(int d, const ComplexSurd& c) {
    TrigPoly p(d);
    p.add(FrequencyVector::zero(d), c);
    return p;
}

TrigPoly TrigPoly::from_potential(const Potential& b) {
    TrigPoly p(b.dim());
    for (const auto& [th, c] : b.coefficients()) p.add(th, c);
    return p;
}

void TrigPoly::add(const FrequencyVector& theta, const ComplexSurd& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = c_.emplace(theta, c);
    if (fresh) return;
    it->second += c;
    if (it->second.is_zero()) c_.erase(it);
}

ComplexSurd TrigPoly::coefficient(const FrequencyVector& theta) const {
    auto it = c_.find(theta);
    return it == c_.end() ? ComplexSurd() : it->second;
}

bool TrigPoly::is_real() const {
    for (const auto& [th, c] : c_)
        if (coefficient(-th) != c.conj()) return false;
    return true;
}

TrigPoly& TrigPoly::operator+=(const TrigPoly& o) {
    if (d_ == 0) d_ = o.d_;
    for (const auto& [th, c] : o.c_) add(th, c);
    return *this;
}

TrigPoly operator*(const TrigPoly& a, const TrigPoly& b) {
    TrigPoly r(std::max(a.d_, b.d_));
    for (const auto& [t1, c1] : a.c_)
        for (const auto& [t2, c2] : b.c_) r.add(t1 + t2, c1 * c2);
    return r;
}

TrigPoly TrigPoly::scaled(const ComplexSurd& s) const {
    TrigPoly r(d_);
    for (const auto& [th, c] : c_) r.add(th, c * s);
    return r;
}

TrigPoly TrigPoly::derivative(const std::vector<int>& beta) const {
    const int order = std::accumulate(beta.begin(), beta.end(), 0);
    TrigPoly r(d_);
    for (const auto& [th, c] : c_) {
        Surd m(1);
        for (int i = 0; i < d_; ++i)
            for (int k = 0; k < beta[static_cast<std::size_t>(i)]; ++k) m *= th[i];
        r.add(th, times_i_power(c * ComplexSurd(m), order));
    }
    return r;
}

TrigPoly TrigPoly::laplacian() const {
    TrigPoly r(d_);
    for (const auto& [th, c] : c_) r.add(th, c * ComplexSurd(-th.norm_sq()));
    return r;
}

std::complex<double> TrigPoly::value(const Eigen::VectorXd& x) const {
    std::complex<double> acc = 0.0;
    for (const auto& [th, c] : c_) acc += c.value() * std::polar(1.0, th.real().dot(x));
    return acc;
}

std::optional<ComplexSurd> TrigPoly::exact_value_at_pi_multiple(const std::vector<Rational>& t) const {
    ComplexSurd acc;
    for (const auto& [th, c] : c_) {
        Surd phase;
        for (int i = 0; i < d_; ++i) phase += th[i] * Surd(t[static_cast<std::size_t>(i)]);
        if (!phase.is_rational()) return std::nullopt;
        const Rational twice = 2 * phase.rational_part();
        if (boost::multiprecision::denominator(twice) != 1) return std::nullopt;
        const auto quarter = boost::multiprecision::numerator(twice) % 4;
        acc += times_i_power(c, static_cast<int>(quarter));
    }
    return acc;
}

// ---- TermElement ----

TermElement TermElement::one(int d) {
    TermElement e(d);
    e.add({std::vector<int>(static_cast<std::size_t>(d), 0), {}}, 1);
    return e;
}

TermElement TermElement::norm_power(int d, int k) {
    TermElement e(d);
    // Multinomial expansion of (Σ z_i²)^k.
    std::vector<int> m(static_cast<std::size_t>(d), 0);
    auto fact = [](int n) {
        Rational f = 1;
        for (int i = 2; i <= n; ++i) f *= i;
        return f;
    };
    std::function<void(int, int)> rec = [&](int pos, int left) {
        if (pos == d - 1) {
            m[static_cast<std::size_t>(pos)] = left;
            Rational c = fact(k);
            Key key{std::vector<int>(static_cast<std::size_t>(d)), {}};
            for (int i = 0; i < d; ++i) {
                c /= fact(m[static_cast<std::size_t>(i)]);
                key.alpha[static_cast<std::size_t>(i)] = 2 * m[static_cast<std::size_t>(i)];
            }
            e.add(key, c);
            return;
        }
        for (int a = 0; a <= left; ++a) {
            m[static_cast<std::size_t>(pos)] = a;
            rec(pos + 1, left - a);
        }
    };
    rec(0, k);
    return e;
}

void TermElement::add(const Key& k, const Rational& c) {
    if (c == 0) return;
    auto [it, fresh] = t_.emplace(k, c);
    if (fresh) return;
    it->second += c;
    if (it->second == 0) t_.erase(it);
}

TermElement& TermElement::operator+=(const TermElement& o) {
    for (const auto& [k, c] : o.t_) add(k, c);
    return *this;
}

TermElement TermElement::scaled(const Rational& s) const {
    TermElement r(d_);
    for (const auto& [k, c] : t_) r.add(k, c * s);
    return r;
}

TermElement TermElement::dy(int i) const {
    const auto ui = static_cast<std::size_t>(i);
    TermElement r(d_);
    for (const auto& [k, c] : t_) {
        // ∂_{y_i} z^α = −α_i z^{α−e_i}.
        if (k.alpha[ui] > 0) {
            Key nk = k;
            nk.alpha[ui] -= 1;
            r.add(nk, -c * k.alpha[ui]);
        }
        for (std::size_t f = 0; f < k.derivs.size(); ++f) {
            Key nk = k;
            nk.derivs[f][ui] += 1;
            std::sort(nk.derivs.begin(), nk.derivs.end());
            r.add(nk, c);
        }
    }
    return r;
}

TermElement TermElement::apply_H(int keep_budget) const {
    TermElement r(d_);
    for (int i = 0; i < d_; ++i) r += dy(i).dy(i).scaled(-1);
    for (const auto& [k, c] : t_) {
        Key nk = k;
        nk.derivs.push_back(std::vector<int>(static_cast<std::size_t>(d_), 0));
        std::sort(nk.derivs.begin(), nk.derivs.end());
        r.add(nk, c);
    }
    if (keep_budget < 0) return r;
    TermElement pruned(d_);
    for (const auto& [k, c] : r.t_)
        if (std::accumulate(k.alpha.begin(), k.alpha.end(), 0) <= 2 * keep_budget) pruned.add(k, c);
    return pruned;
}

TrigPoly TermElement::at_diagonal(const Potential& b) const {
    const TrigPoly base = TrigPoly::from_potential(b);
    std::map<std::vector<int>, TrigPoly> cache;
    auto deriv = [&](const std::vector<int>& beta) -> const TrigPoly& {
        auto it = cache.find(beta);
        if (it == cache.end()) it = cache.emplace(beta, base.derivative(beta)).first;
        return it->second;
    };
    TrigPoly r(d_);
    for (const auto& [k, c] : t_) {
        if (std::any_of(k.alpha.begin(), k.alpha.end(), [](int a) { return a != 0; })) continue;
        TrigPoly term = TrigPoly::constant(d_, ComplexSurd(Surd(c)));
        for (const auto& beta : k.derivs) term = term * deriv(beta);
        r += term;
    }
    return r;
}

std::string TermElement::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, c] : t_) {
        if (!first) os << " + ";
        first = false;
        os << format_rational(c);
        for (int i = 0; i < d_; ++i)
            if (k.alpha[static_cast<std::size_t>(i)] > 0) os << "*z" << i << "^" << k.alpha[static_cast<std::size_t>(i)];
        for (const auto& beta : k.derivs) {
            os << "*D(";
            for (std::size_t i = 0; i < beta.size(); ++i) os << (i ? "," : "") << beta[i];
            os << ")b";
        }
    }
    return first ? "0" : os.str();
}

// ---- σ_j and a_j ----

namespace {

Rational factorial(int n) {
    Rational f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

TrigPoly sigma_sum(const Potential& b, int j, int numerator_twice) {
    if (j < 0) throw Error(ErrorCode::InvalidArgument, "j must be non-negative");
    const int d = b.dim();
    const HalfGamma num = gamma_half(numerator_twice);
    TrigPoly total(d);
    for (int k = 0; k <= j; ++k) {
        const HalfGamma den = gamma_half(2 * k + d + 2);
        Rational c = num.q / den.q;
        if (j % 2 == 1) c = -c;
        c /= ipow(4, k) * factorial(k) * factorial(k + j) * factorial(j - k);
        TermElement e = TermElement::norm_power(d, k);
        const int n = k + j;
        for (int s = 1; s <= n; ++s) e = e.apply_H(n - s);
        total += e.at_diagonal(b).scaled(ComplexSurd(Surd(c)));
    }
    total += TrigPoly(d);
    return total;
}

}  // namespace

TrigPoly sigma_verbatim(const Potential& b, int j) { return sigma_sum(b, j, 2 * j + b.dim()); }

TrigPoly sigma_calibrated(const Potential& b, int j) { return sigma_sum(b, j, 2 * j + b.dim() + 2); }

ExactScalar a_prefactor(int d, int j) {
    const HalfGamma g = gamma_half(d - 2 * j + 2);
    if (g.pole) return {0, 0};
    const Rational q = 1 / (ipow(2, d) * g.q);
    return {q, d % 2 == 0 ? -d / 2 : -(d + 1) / 2};
}

double HeatCoefficient::value(const Eigen::VectorXd& x) const { return prefactor.value() * poly.value(x).real(); }

std::optional<std::pair<ComplexSurd, int>> HeatCoefficient::exact_at_pi_multiple(const std::vector<Rational>& t) const {
    auto v = poly.exact_value_at_pi_multiple(t);
    if (!v) return std::nullopt;
    return std::make_pair(*v * ComplexSurd(Surd(prefactor.q)), prefactor.pi_power);
}

std::complex<double> HeatCoefficient::mean() const {
    return prefactor.value() * poly.coefficient(FrequencyVector::zero(poly.dim())).value();
}

nlohmann::json HeatCoefficient::to_json() const {
    nlohmann::json j;
    j["j"] = this->j;
    j["prefactor"] = prefactor.to_string();
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [th, c] : poly.coefficients())
        terms.push_back({{"theta", th.to_string()}, {"re", c.re.to_string()}, {"im", c.im.to_string()}});
    j["fourier"] = terms;
    return j;
}

bool same_coefficient(const HeatCoefficient& a, const HeatCoefficient& b) {
    const bool za = a.prefactor.q == 0 || a.poly.is_zero();
    const bool zb = b.prefactor.q == 0 || b.poly.is_zero();
    if (za || zb) return za && zb;
    if (a.prefactor.pi_power != b.prefactor.pi_power) return false;
    return a.poly.scaled(ComplexSurd{Surd(a.prefactor.q), Surd()}) == b.poly.scaled(ComplexSurd{Surd(b.prefactor.q), Surd()});
}

HeatCoefficient a_from_sigma(const Potential& b, int j, bool calibrated) {
    HeatCoefficient h;
    h.j = j;
    h.prefactor = a_prefactor(b.dim(), j);
    h.poly = h.prefactor.q == 0 ? TrigPoly(b.dim()) : (calibrated ? sigma_calibrated(b, j) : sigma_verbatim(b, j));
    return h;
}

HeatCoefficient closed_form_a(const Potential& b, int j) {
    const int d = b.dim();
    const ExactScalar w = unit_ball_volume(d);
    const Rational two_d = ipow(2, d);
    HeatCoefficient h;
    h.j = j;
    const TrigPoly bp = TrigPoly::from_potential(b);
    if (j == 1) {
        h.prefactor = {-Rational(d) * w.q / (2 * two_d), w.pi_power - d};
        h.poly = bp;
    } else if (j == 2) {
        h.prefactor = {Rational(d * (d - 2)) * w.q / (24 * two_d), w.pi_power - d};
        h.poly = (bp * bp).scaled(ComplexSurd(Surd(3))) + bp.laplacian().scaled(ComplexSurd(Surd(-1)));
    } else {
        throw Error(ErrorCode::InvalidArgument, "closed forms exist for j = 1, 2 only");
    }
    if (h.prefactor.q == 0) {
        h.prefactor.pi_power = 0;
        h.poly = TrigPoly(d);
    }
    return h;
}

}  // namespace spectra
