#pragma once

#include "spectra/potential.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace spectra {

// q · π^k.
struct ExactScalar {
    Rational q{0};
    int pi_power = 0;

    double value() const;
    std::string to_string() const;
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
        return {a.q * b.q, a.pi_power + b.pi_power};
    }
};

// Γ(n/2) as q or q·√π; pole for n ≤ 0 even.
struct HalfGamma {
    Rational q{0};
    bool sqrt_pi = false;
    bool pole = false;
};
HalfGamma gamma_half(int twice_z);

// Volume of the unit ball, q·π^k.
ExactScalar unit_ball_volume(int d);
// Weyl constant C_d = w_d / (2π)^d.
ExactScalar weyl_constant(int d);

// Σ_θ c_θ e^{i⟨θ,x⟩} with exact coefficients.
class TrigPoly {
public:
    TrigPoly() = default;
    explicit TrigPoly(int d) : d_(d) {}
    static TrigPoly constant(int d, const ComplexSurd& c);
    static TrigPoly from_potential(const Potential& b);

    int dim() const { return d_; }
    const std::map<FrequencyVector, ComplexSurd>& coefficients() const { return c_; }
    void add(const FrequencyVector& theta, const ComplexSurd& c);
    ComplexSurd coefficient(const FrequencyVector& theta) const;
    bool is_zero() const { return c_.empty(); }
    bool is_real() const;   // c(−θ) = conj c(θ)

    TrigPoly& operator+=(const TrigPoly& o);
    friend TrigPoly operator+(TrigPoly a, const TrigPoly& b) { return a += b; }
    friend TrigPoly operator*(const TrigPoly& a, const TrigPoly& b);
    TrigPoly scaled(const ComplexSurd& s) const;
    // ∂^β.
    TrigPoly derivative(const std::vector<int>& beta) const;
    TrigPoly laplacian() const;

    std::complex<double> value(const Eigen::VectorXd& x) const;
    // Exact value at x = π·t when every phase is a multiple of π/2; nullopt otherwise.
    std::optional<ComplexSurd> exact_value_at_pi_multiple(const std::vector<Rational>& t) const;

    friend bool operator==(const TrigPoly& a, const TrigPoly& b) { return a.d_ == b.d_ && a.c_ == b.c_; }

private:
    int d_ = 0;
    std::map<FrequencyVector, ComplexSurd> c_;
};

// Finite sum of c · z^α · Π ∂^{β_i} b(y), z = x − y.
class TermElement {
public:
    struct Key {
        std::vector<int> alpha;
        std::vector<std::vector<int>> derivs;   // sorted multiset of β
        friend bool operator<(const Key& a, const Key& b) {
            if (a.alpha != b.alpha) return a.alpha < b.alpha;
            return a.derivs < b.derivs;
        }
        friend bool operator==(const Key&, const Key&) = default;
    };

    TermElement() = default;
    explicit TermElement(int d) : d_(d) {}
    static TermElement one(int d);
    // |z|^{2k}.
    static TermElement norm_power(int d, int k);

    int dim() const { return d_; }
    const std::map<Key, Rational>& terms() const { return t_; }
    void add(const Key& k, const Rational& c);
    TermElement& operator+=(const TermElement& o);
    TermElement scaled(const Rational& s) const;

    // ∂/∂y_i.
    TermElement dy(int i) const;
    // H_y = −Δ_y + b(y); terms with |α| > 2·keep_budget are dropped when keep_budget ≥ 0.
    TermElement apply_H(int keep_budget = -1) const;
    // Value at y = x as a trigonometric polynomial in x.
    TrigPoly at_diagonal(const Potential& b) const;
    std::string to_string() const;

private:
    int d_ = 0;
    std::map<Key, Rational> t_;
};

// The literal k-sum with Γ(j+d/2) in the numerator.
TrigPoly sigma_verbatim(const Potential& b, int j);
// Γ(j+d/2) replaced by Γ(j+d/2+1): the normalization under which a₀ = C_d and a₁ matches the closed form.
TrigPoly sigma_calibrated(const Potential& b, int j);

// a_j(x) = prefactor · poly(x).
struct HeatCoefficient {
    int j = 0;
    ExactScalar prefactor;
    TrigPoly poly;

    double value(const Eigen::VectorXd& x) const;
    // Exact q·π^k·(field element) at x = π·t, or nullopt.
    std::optional<std::pair<ComplexSurd, int>> exact_at_pi_multiple(const std::vector<Rational>& t) const;
    // 𝐌_x a_j: prefactor times the constant Fourier coefficient.
    std::complex<double> mean() const;
    nlohmann::json to_json() const;
};

// Exact equality of prefactor · poly; two vanishing coefficients compare equal.
bool same_coefficient(const HeatCoefficient& a, const HeatCoefficient& b);

// 1 / ((4π)^{d/2} Γ(d/2 − j + 1)), zero at the poles of Γ.
ExactScalar a_prefactor(int d, int j);
HeatCoefficient a_from_sigma(const Potential& b, int j, bool calibrated);
// Closed forms for j ∈ {1, 2}.
HeatCoefficient closed_form_a(const Potential& b, int j);

}  // namespace spectra
