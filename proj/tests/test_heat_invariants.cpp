#include "spectra/heat.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace spectra;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) x[i++] = c;
    return x;
}

FrequencyVector fv(std::initializer_list<long> v) { return FrequencyVector::from_ints(std::vector<long>(v)); }

Surd root2() { return Surd(Rational(0), Rational(1), 2); }

// b = 2cos x + 2v cos(√2 x).
Potential quasi(const Rational& v) {
    Potential p(1, GeneratorBasis{2});
    p.set(fv({1}), ComplexSurd(Surd(1)));
    p.set(fv({-1}), ComplexSurd(Surd(1)));
    FrequencyVector r(1);
    r[0] = root2();
    p.set(r, ComplexSurd(Surd(v)));
    p.set(-r, ComplexSurd(Surd(v)));
    return p;
}

// Heat-kernel invariants in the spectral normalization, written out by hand:
// a₁ = −b / ((4π)^{d/2}Γ(d/2)), a₂ = (b²/2 − Δb/6) / ((4π)^{d/2}Γ(d/2 − 1)).
double a1_oracle(int d, double b) { return -b / (std::pow(4 * pi, d / 2.0) * std::tgamma(d / 2.0)); }
double a2_oracle(int d, double b, double lap_b) {
    if (d == 2) return 0.0;
    return (b * b / 2 - lap_b / 6) / (std::pow(4 * pi, d / 2.0) * std::tgamma(d / 2.0 - 1));
}

}  // namespace

TEST_CASE("gamma at half integers and Weyl constants") {
    CHECK(gamma_half(2).q == 1);
    CHECK(gamma_half(8).q == 6);
    CHECK(gamma_half(0).pole);
    CHECK(gamma_half(-4).pole);
    CHECK(gamma_half(1).sqrt_pi);
    CHECK(gamma_half(1).q == 1);
    CHECK(gamma_half(5).q == Rational(3, 4));
    CHECK(gamma_half(-1).q == -2);
    for (int n = -5; n <= 9; ++n) {
        const HalfGamma g = gamma_half(n);
        if (g.pole) continue;
        const double v = g.q.convert_to<double>() * (g.sqrt_pi ? std::sqrt(pi) : 1.0);
        CHECK(v == doctest::Approx(std::tgamma(n / 2.0)));
    }
    CHECK(unit_ball_volume(1).value() == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2).value() == doctest::Approx(pi));
    CHECK(unit_ball_volume(3).value() == doctest::Approx(4 * pi / 3));
    CHECK(weyl_constant(1).value() == doctest::Approx(1 / pi));
    CHECK(weyl_constant(2).value() == doctest::Approx(1 / (4 * pi)));
    for (int d = 1; d <= 4; ++d)
        CHECK(weyl_constant(d).value() == doctest::Approx(unit_ball_volume(d).value() / std::pow(2 * pi, d)));
}

TEST_CASE("trigonometric polynomials") {
    const TrigPoly b = TrigPoly::from_potential(Potential::mathieu(Rational(1)));
    CHECK(b.is_real());
    const TrigPoly b2 = b * b;
    CHECK(b2.coefficient(fv({0})) == ComplexSurd(Surd(2)));
    CHECK(b2.coefficient(fv({2})) == ComplexSurd(Surd(1)));
    for (double x : {0.0, 0.4, 2.2}) {
        CHECK(b.laplacian().value(vec({x})).real() == doctest::Approx(-2 * std::cos(x)));
        CHECK(b.derivative({1}).value(vec({x})).real() == doctest::Approx(-2 * std::sin(x)));
        CHECK(b2.value(vec({x})).real() == doctest::Approx(4 * std::cos(x) * std::cos(x)));
    }
    // Phases at multiples of π/2 give exact values; √2·π/2 does not.
    CHECK(*b.exact_value_at_pi_multiple({Rational(1)}) == ComplexSurd(Surd(-2)));
    CHECK(*b.exact_value_at_pi_multiple({Rational(1, 2)}) == ComplexSurd());
    CHECK_FALSE(TrigPoly::from_potential(quasi(Rational(1))).exact_value_at_pi_multiple({Rational(1, 2)}));
    CHECK_FALSE(b.exact_value_at_pi_multiple({Rational(1, 3)}));
    TrigPoly skew(1);
    skew.add(fv({1}), ComplexSurd(Surd(0), Surd(1)));
    CHECK_FALSE(skew.is_real());
}

TEST_CASE("transport terms") {
    // H|z|² at the diagonal is −2d, and H²|z|² there is −4d·b.
    for (int d = 1; d <= 3; ++d) {
        const Potential b = Potential::axes(d, Rational(1, 3));
        const TermElement z2 = TermElement::norm_power(d, 1);
        const TrigPoly h1 = z2.apply_H().at_diagonal(b);
        CHECK(h1 == TrigPoly::constant(d, ComplexSurd(Surd(-2 * d))));
        const TrigPoly h2 = z2.apply_H().apply_H().at_diagonal(b);
        CHECK(h2 == TrigPoly::from_potential(b).scaled(ComplexSurd(Surd(-4 * d))));
    }
    // H1 = b at the diagonal.
    const Potential m = Potential::mathieu(Rational(2, 7));
    CHECK(TermElement::one(1).apply_H().at_diagonal(m) == TrigPoly::from_potential(m));
    CHECK(TermElement::one(1).dy(0).terms().empty());
}

TEST_CASE("σ normalizations") {
    for (int d = 1; d <= 3; ++d) {
        const Potential b = Potential::axes(d, Rational(1, 2));
        const Eigen::VectorXd x = Eigen::VectorXd::Constant(d, 0.3);
        // Calibrated σ₀ = 1 so a₀ = C_d; the literal sum gives Γ(d/2)/Γ(d/2+1) = 2/d.
        CHECK(sigma_calibrated(b, 0).value(x).real() == doctest::Approx(1.0));
        CHECK(sigma_verbatim(b, 0).value(x).real() == doctest::Approx(2.0 / d));
        CHECK(a_from_sigma(b, 0, true).value(x) == doctest::Approx(weyl_constant(d).value()));
        // The literal σ₁ is the calibrated one scaled by 2/(d+2).
        CHECK(sigma_verbatim(b, 1).value(x).real() == doctest::Approx(2.0 / (d + 2) * sigma_calibrated(b, 1).value(x).real()));
        CHECK_FALSE(same_coefficient(a_from_sigma(b, 1, false), a_from_sigma(b, 1, true)));
    }
}

TEST_CASE("closed forms against hand-written invariants") {
    // d = 1, b = 2cos x: a₁(0) = −1/π and a₂(0) = −7/(12π).
    const Potential m = Potential::mathieu(Rational(1));
    CHECK(closed_form_a(m, 1).value(vec({0.0})) == doctest::Approx(-1 / pi));
    CHECK(closed_form_a(m, 2).value(vec({0.0})) == doctest::Approx(-7 / (12 * pi)));
    const auto exact = closed_form_a(m, 1).exact_at_pi_multiple({Rational(0)});
    REQUIRE(exact);
    CHECK(exact->first == ComplexSurd(Surd(-1)));
    CHECK(exact->second == -1);

    for (int d = 1; d <= 3; ++d) {
        const Potential b = Potential::axes(d, Rational(1, 3));
        std::mt19937_64 rng(static_cast<std::uint64_t>(d));
        std::uniform_real_distribution<double> u(-pi, pi);
        for (int t = 0; t < 10; ++t) {
            Eigen::VectorXd x(d);
            for (int i = 0; i < d; ++i) x[i] = u(rng);
            const double bv = b.value(x).real();
            const double lap = -bv;
            CHECK(closed_form_a(b, 1).value(x) == doctest::Approx(a1_oracle(d, bv)));
            CHECK(closed_form_a(b, 2).value(x) == doctest::Approx(a2_oracle(d, bv, lap)).epsilon(1e-12));
            for (int j = 1; j <= 2; ++j)
                CHECK(same_coefficient(closed_form_a(b, j), a_from_sigma(b, j, true)));
        }
    }
    // a₂ vanishes identically in d = 2.
    const HeatCoefficient a2 = closed_form_a(Potential::axes(2, Rational(5)), 2);
    CHECK(a2.prefactor.q == 0);
    CHECK(same_coefficient(a2, a_from_sigma(Potential::axes(2, Rational(1)), 2, false)));
    CHECK_THROWS(closed_form_a(m, 3));
}

TEST_CASE("quasi-periodic potentials") {
    const Potential b = quasi(Rational(1, 2));
    for (int j = 1; j <= 2; ++j) CHECK(same_coefficient(closed_form_a(b, j), a_from_sigma(b, j, true)));
    for (double x : {0.0, 0.7, 3.1}) {
        const double bv = 2 * std::cos(x) + std::cos(std::sqrt(2.0) * x);
        const double lap = -2 * std::cos(x) - 2 * std::cos(std::sqrt(2.0) * x);
        CHECK(closed_form_a(b, 1).value(vec({x})) == doctest::Approx(a1_oracle(1, bv)));
        CHECK(closed_form_a(b, 2).value(vec({x})) == doctest::Approx(a2_oracle(1, bv, lap)));
    }
}

TEST_CASE("linearity, reality and means") {
    const Potential p = Potential::axes(2, Rational(1, 3));
    Potential q(2, {});
    q.set(fv({1, 1}), ComplexSurd(Surd(Rational(1, 5)), Surd(Rational(1, 7))));
    q.set(fv({-1, -1}), ComplexSurd(Surd(Rational(1, 5)), Surd(Rational(-1, 7))));
    Potential sum(2, {});
    for (const Potential* src : {&p, static_cast<const Potential*>(&q)})
        for (const auto& [th, c] : src->coefficients()) sum.set(th, sum.coefficient(th) + c);
    const auto x = vec({0.4, -1.1});
    CHECK(closed_form_a(sum, 1).value(x) ==
          doctest::Approx(closed_form_a(p, 1).value(x) + closed_form_a(q, 1).value(x)));
    for (int j = 1; j <= 2; ++j) CHECK(closed_form_a(q, j).poly.is_real());

    // 𝐌 a₁ vanishes without a constant term; 𝐌 a₂ in d = 1 is −𝐌(b²)/(8π).
    CHECK(std::abs(closed_form_a(p, 1).mean()) == 0.0);
    const Potential m = Potential::mathieu(Rational(1));
    CHECK(closed_form_a(m, 2).mean().real() == doctest::Approx(-1 / (4 * pi)));
    Potential shifted = m;
    shifted.set(fv({0}), ComplexSurd(Surd(3)));
    CHECK(closed_form_a(shifted, 1).mean().real() == doctest::Approx(a1_oracle(1, 3.0)));
    CHECK(closed_form_a(Potential::zero(1), 1).poly.is_zero());
    CHECK(closed_form_a(m, 1).to_json()["j"] == 1);
}
