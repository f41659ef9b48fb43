#include "spectra/errors.hpp"
#include "spectra/validation.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace spectra;

namespace {

constexpr double pi = std::numbers::pi;

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) x[i++] = c;
    return x;
}

template <class F>
ErrorCode code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::Malformed;
}

OracleConfig band(int M_cut) {
    OracleConfig c;
    c.M_cut = M_cut;
    c.N_k = 64;
    c.mode = OracleMode::BandResolved;
    return c;
}

FrequencySet axes(int d) {
    std::vector<FrequencyVector> el;
    for (int i = 0; i < d; ++i) {
        el.push_back(FrequencyVector::unit(d, i));
        el.push_back(-FrequencyVector::unit(d, i));
    }
    return FrequencySet(d, {}, el);
}

}  // namespace

TEST_CASE("expansion and free off-diagonal term") {
    const Potential m = Potential::mathieu(Rational(1, 5));
    const std::vector<HeatCoefficient> a{closed_form_a(m, 1), closed_form_a(m, 2)};
    const Eigen::VectorXd x = vec({0.0});
    CHECK(expansion_eval(a, 1, 400.0, x, 0) == doctest::Approx(20.0 / pi));
    CHECK(expansion_eval(a, 1, 400.0, x, 1) == doctest::Approx(20.0 / pi - 0.4 / (2 * pi) / 20.0));
    CHECK(code_of([&] { expansion_eval(a, 1, 400.0, x, 3); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([&] { expansion_eval(a, 1, 0.0, x, 1); }) == ErrorCode::InvalidArgument);

    // d = 1 is exact: sin(√λ r)/(πr).
    CHECK(free_offdiagonal(9.0, vec({0.0}), vec({0.5}), 1) == doctest::Approx(std::sin(1.5) / (0.5 * pi)));
    // d = 2 against the Bessel form √λ J₁(√λ r)/(2πr) at large λ.
    for (double lam : {1e4, 1e6}) {
        const double r = 1.3;
        const double s = std::sqrt(lam);
        const double exact = s * std::cyl_bessel_j(1.0, s * r) / (2 * pi * r);
        const double lead = free_offdiagonal(lam, vec({0.0, 0.0}), vec({r, 0.0}), 2);
        CHECK(std::abs(exact - lead) < 0.5 * std::pow(lam, -0.25));
    }
    CHECK(code_of([&] { free_offdiagonal(4.0, x, x, 1); }) == ErrorCode::CoincidingPoints);
}

TEST_CASE("ladders and log-slope fits") {
    const auto l = geometric_ladder(10.0, 1000.0, 3);
    REQUIRE(l.size() == 3);
    CHECK(l[1] == doctest::Approx(100.0));
    CHECK(geometric_ladder(5.0, 5.0, 1).front() == 5.0);
    CHECK(code_of([] { geometric_ladder(0.0, 1.0, 4); }) == ErrorCode::InvalidArgument);

    const auto lams = geometric_ladder(100.0, 1e4, 60);
    std::vector<double> r;
    for (double v : lams) r.push_back(-0.7 * std::pow(v, -1.5));
    const LadderFit fit = fit_log_slope(lams, r);
    CHECK(fit.slope == doctest::Approx(-1.5).epsilon(1e-6));
    CHECK(fit.used_bins >= 10);

    // Oscillating residual: sign-change bins are skipped, the envelope fit keeps them.
    std::vector<double> osc;
    for (double v : lams) osc.push_back(std::pow(v, -0.5) * std::sin(std::sqrt(v)));
    const LadderFit env = fit_log_slope(lams, osc, 1.3, true);
    CHECK(env.used_bins == env.bins.size());
    CHECK(env.slope == doctest::Approx(-0.5).epsilon(0.15));
    const LadderFit med = fit_log_slope(lams, osc);
    CHECK(med.used_bins < med.bins.size());
    CHECK(code_of([&] { fit_log_slope(lams, {1.0}); }) == ErrorCode::InvalidArgument);
    CHECK(fit.to_json()["bins"].size() == fit.bins.size());
}

TEST_CASE("residual ladders") {
    const auto lams = geometric_ladder(100.0, 900.0, 16);
    // b = 0: the Weyl term is exact and the L = 0 residual sits at roundoff.
    const Potential zero = Potential::zero(1);
    const auto free = residual_ladder(zero, vec({0.3}), 0, lams, band(64), {});
    CHECK(free.fits.size() == 1);
    CHECK(free.fits[0].noise_floor);
    for (double v : free.residual[0]) CHECK(std::abs(v) < 1e-9);

    // Mathieu 2v cos x, v = 1/5: R₀ ≈ a₁(x) λ^{−1/2} with a₁(0) = −2v/(2π).
    const Potential m = Potential::mathieu(Rational(1, 5));
    const std::vector<HeatCoefficient> a{closed_form_a(m, 1)};
    const auto ls = residual_ladders(m, {vec({0.0}), vec({pi})}, 1, lams, band(64), a);
    REQUIRE(ls.size() == 2);
    CHECK(ls[0].fits[0].coefficient == doctest::Approx(-0.4 / (2 * pi)).epsilon(0.05));
    CHECK(ls[1].fits[0].coefficient == doctest::Approx(0.4 / (2 * pi)).epsilon(0.05));
    CHECK(ls[0].fits[0].slope == doctest::Approx(-0.5).epsilon(0.1));
    CHECK(ls[0].fits[1].slope < -1.25);
    CHECK(ls[0].expansion.size() == 2);
    CHECK(ls[0].to_json()["fits"].size() == 2);
    CHECK(code_of([&] { residual_ladder(m, vec({0.0}), 2, lams, band(64), a); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("off-diagonal ladders") {
    const auto lams = geometric_ladder(100.0, 900.0, 12);
    const auto free = offdiagonal_ladder(Potential::zero(1), vec({0.0}), vec({1.0}), lams, band(64));
    CHECK(free.leading_exponent == 0.0);
    for (double e : free.error) CHECK(std::abs(e) < 1e-9);

    const Potential m = Potential::mathieu(Rational(1, 10));
    const auto many = offdiagonal_ladders(m, {{vec({0.0}), vec({1.0})}, {vec({0.5}), vec({2.0})}}, lams, band(64));
    REQUIRE(many.size() == 2);
    for (const auto& o : many) {
        CHECK(o.oracle.size() == lams.size());
        for (double e : o.error) CHECK(std::abs(e) < 0.1);
    }
    CHECK(code_of([&] { offdiagonal_ladder(m, vec({1.0}), vec({1.0}), lams, band(64)); }) ==
          ErrorCode::CoincidingPoints);
}

TEST_CASE("projection perturbation bounds") {
    for (int s : {0, 1, 2})
        for (double eps : {0.01, 0.1, 0.5}) {
            const auto r = check_projection_perturbation(12, s, eps, 10, 42);
            CHECK(r.pass());
            CHECK(r.delta == doctest::Approx(std::sqrt(eps)));
            CHECK(r.max_ratio_first < 1.0);
            CHECK(r.max_ratio_second < 1.0);
        }
    // E = 0: both sides vanish up to roundoff.
    const auto zero = check_projection_perturbation(10, 1, 0.0, 5, 3, 0.5);
    CHECK(zero.pass());
    CHECK(zero.max_ratio_first < 1.0);
    CHECK(zero.max_ratio_second < 1.0);
    // δ = ε is admissible, and a shifted spectrum is handled through a.
    CHECK(check_projection_perturbation(10, 0, 0.1, 10, 5, 0.1).pass());
    CHECK(check_projection_perturbation(10, 2, 0.05, 10, 5, -1.0, 7.0).pass());
    // Reproducible from the seed.
    const auto a = check_projection_perturbation(8, 2, 0.1, 6, 99);
    const auto b = check_projection_perturbation(8, 2, 0.1, 6, 99);
    CHECK(a.max_ratio_first == b.max_ratio_first);
    CHECK(a.to_json() == b.to_json());

    CHECK(code_of([] { check_projection_perturbation(5, 0, 1.0, 3, 1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { check_projection_perturbation(5, 0, 0.0, 3, 1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { check_projection_perturbation(0, 0, 0.1, 3, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("contour identity") {
    // S = 0, f = g = 1 on r ∈ [0.5, 2.5]: the window [1, 4] selects r ∈ [1, 2].
    const auto one = VectorPoly::constant(Eigen::VectorXcd::Ones(1));
    const auto r0 = check_contour_identity(MatrixFamily::scalar_zero(), one, one, {0.5, 2.5, 1.0, 4.0});
    CHECK(std::abs(r0.rhs - 1.0) < 1e-10);
    CHECK(r0.difference < 1e-10);
    CHECK(r0.breakpoints.size() == 2);

    // Constant S = c: the window selects r ∈ [√(λ′−c), √(λ″−c)], weighted by conj(g)·f.
    MatrixFamily shifted{{Eigen::MatrixXcd::Constant(1, 1, 0.3)}, 0.0};
    const auto f = VectorPoly::constant(Eigen::VectorXcd::Constant(1, {2.0, 0.0}));
    const auto g = VectorPoly::constant(Eigen::VectorXcd::Constant(1, {0.0, 3.0}));
    const auto r1 = check_contour_identity(shifted, f, g, {0.5, 2.5, 1.5, 3.5});
    const std::complex<double> expect = std::conj(std::complex<double>(0.0, 3.0)) * 2.0 * (std::sqrt(3.2) - std::sqrt(1.2));
    CHECK(std::abs(r1.lhs - expect) < 1e-10);
    CHECK(std::abs(r1.rhs - expect) < 1e-10);

    // f = 0.
    const auto z = VectorPoly::constant(Eigen::VectorXcd::Zero(4));
    const auto fam = MatrixFamily::random(4, {0.3, 0.1, 0.05}, 3.0, 17);
    const auto rz = check_contour_identity(fam, z, VectorPoly::random(4, 1, 3.0, 5), {2.0, 4.0, 7.26, 11.06});
    CHECK(std::abs(rz.lhs) == 0.0);
    CHECK(std::abs(rz.rhs) == 0.0);

    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto fm = MatrixFamily::random(4, {0.3, 0.1, 0.05}, 3.0, seed);
        const auto r = check_contour_identity(fm, VectorPoly::random(4, 1, 3.0, seed + 10),
                                              VectorPoly::random(4, 1, 3.0, seed + 20), {2.0, 4.0, 7.26, 11.06});
        CHECK(r.difference < 1e-8);
        CHECK(r.min_sigma > 1e-6);
    }

    // The locus z = a meets the contour when λ′ = a².
    ContourConfig close{0.5, 2.5, 0.25, 4.0};
    close.margin = 0.05;
    CHECK(code_of([&] { check_contour_identity(MatrixFamily::scalar_zero(), one, one, close); }) ==
          ErrorCode::ContourTooClose);
    // Non-monotone branches: ‖S′‖ ≥ 2a.
    const auto steep = MatrixFamily::random(2, {0.0, 5.0}, 3.0, 2);
    CHECK(code_of([&] { check_contour_identity(steep, VectorPoly::constant(Eigen::VectorXcd::Ones(2)),
                                               VectorPoly::constant(Eigen::VectorXcd::Ones(2)), {2.0, 4.0, 5.0, 10.0}); }) ==
          ErrorCode::InvalidArgument);
}

TEST_CASE("resolvent series") {
    const auto zero = resolvent_series_check(MatrixFamily::scalar_zero(), {3.0, 0.0}, 7.0, 4);
    CHECK(zero.ratio == 0.0);
    for (double e : zero.errors) CHECK(e < 1e-15);
    CHECK(zero.rate == 0.0);

    const auto fam = MatrixFamily::random(4, {1.0}, 0.0, 1);
    const auto rs = resolvent_series_check(fam, {3.0, 0.0}, 7.0, 12);
    CHECK(rs.ratio == doctest::Approx(0.5));
    CHECK(rs.rate <= rs.ratio * (1 + 1e-9));
    for (std::size_t l = 1; l < rs.errors.size(); ++l) CHECK(rs.errors[l] < rs.errors[l - 1]);
    CHECK(code_of([&] { resolvent_series_check(fam, {3.0, 0.0}, 8.5, 4); }) == ErrorCode::DivergentSeries);
    CHECK(code_of([&] { resolvent_series_check(fam, {3.0, 0.0}, 7.0, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("geometry suite") {
    const ResonanceGeometry g1(axes(1), ZoneParameters::defaults(1, 1000.0, 2));
    const auto r1 = geometry_suite(g1, 300, 4);
    CHECK(r1.annulus_resonant == 0);
    CHECK(r1.nonresonant == 300);
    CHECK(r1.pass());

    const ResonanceGeometry g2(algebraic_sum(axes(2), 2), ZoneParameters::defaults(2, 1000.0, 2));
    const auto pts = annulus_samples(g2, 200, 8);
    CHECK(pts.size() == 200);
    for (const auto& p : pts) {
        CHECK(p.squaredNorm() >= 0.7e6 * (1 - 1e-12));
        CHECK(p.squaredNorm() <= 17.5e6 * (1 + 1e-12));
    }
    const auto r2 = geometry_suite(g2, 400, 8);
    CHECK(r2.samples == 400);
    CHECK(r2.partition_violations == 0);
    CHECK(r2.singleton_violations == 0);
    CHECK(r2.classes > 0);
    CHECK(r2.diameter_over_2mL == 0);
    CHECK(r2.pass_relaxed());
    CHECK(r2.to_json()["pass_relaxed"] == true);
}
