#include "spectra/errors.hpp"
#include "spectra/geometry.hpp"
#include "spectra/validation.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace spectra;

namespace {

FrequencySet axes(int d) {
    std::vector<FrequencyVector> el;
    for (int i = 0; i < d; ++i) {
        el.push_back(FrequencyVector::unit(d, i));
        el.push_back(-FrequencyVector::unit(d, i));
    }
    return FrequencySet(d, {}, el);
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double c : v) x[i++] = c;
    return x;
}

bool has_point(const CongruenceClass& c, const Eigen::VectorXd& p) {
    for (const auto& q : c.points)
        if ((q - p).norm() < 1e-9) return true;
    return false;
}

}  // namespace

TEST_CASE("zone parameter defaults") {
    for (int d = 1; d <= 3; ++d) {
        const auto zp = ZoneParameters::defaults(d, 1000.0, 2);
        CHECK_NOTHROW(zp.validate());
        for (int j = 2; j <= d; ++j) CHECK(zp.L(j) > zp.L(j - 1));
        CHECK(zp.effective_beta() == doctest::Approx(zp.alpha.front() / 2));
    }
    auto bad = ZoneParameters::defaults(2, 1000.0, 2);
    bad.alpha = {0.2, 0.1};
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("resonance zones Λ(θ)") {
    const auto zp2 = ZoneParameters::defaults(2, 1000.0, 1);
    const double L1 = zp2.L(1);
    CHECK(in_lambda(FrequencyVector::unit(2, 1), vec({1000.0, 0.0}), zp2));
    CHECK(in_lambda(FrequencyVector::unit(2, 0), vec({L1, 0.0}), zp2));
    CHECK_FALSE(in_lambda(FrequencyVector::unit(2, 0), vec({std::nextafter(L1, 1e9), 0.0}), zp2));

    const auto zp1 = ZoneParameters::defaults(1, 1000.0, 1);
    CHECK_FALSE(in_lambda(FrequencyVector::unit(1, 0), vec({1000.0}), zp1));

    try {
        in_lambda(FrequencyVector::zero(2), vec({1.0, 1.0}), zp2);
        FAIL("expected ZeroFrequency");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroFrequency);
    }
}

TEST_CASE("classification") {
    const auto zp1 = ZoneParameters::defaults(1, 1000.0, 2);
    const auto S1 = algebraic_sum(FrequencySet(1, {}, {FrequencyVector::unit(1, 0), -FrequencyVector::unit(1, 0)}), 2);
    CHECK(classify_point(vec({3.0 * zp1.L(1)}), S1, zp1).subspace.dim() == 0);

    const auto zp2 = ZoneParameters::defaults(2, 1000.0, 1);
    const auto S2 = axes(2);
    const auto lab = classify_point(vec({1000.0, 0.0}), S2, zp2);
    CHECK(lab.subspace.dim() == 1);
    CHECK(lab.subspace.contains(FrequencyVector::unit(2, 1)));
    CHECK(classify_point(vec({0.0, 0.0}), S2, zp2).subspace.dim() == 2);
}

TEST_CASE("congruence classes") {
    const auto zp = ZoneParameters::defaults(2, 1000.0, 1);
    const double L1 = zp.L(1);
    const ResonanceGeometry geo(axes(2), zp);

    SUBCASE("non-resonant points are their own class") {
        const auto c = geo.congruence_class(vec({700.0, 800.0}));
        CHECK(c.points.size() == 1);
        CHECK(c.subspace.dim() == 0);
    }
    SUBCASE("a point on one slab walks along the line in integer steps") {
        const double t = 0.1;
        const auto c = geo.congruence_class(vec({1000.0, t}));
        // Independent enumeration of {(ρ, t + l) : |t + l| ≤ L1}.
        std::vector<Eigen::VectorXd> want;
        for (int l = -10; l <= 10; ++l)
            if (std::abs(t + l) <= L1) want.push_back(vec({1000.0, t + l}));
        CHECK(c.points.size() == want.size());
        for (const auto& p : want) CHECK(has_point(c, p));
        CHECK((c.points.front() - vec({1000.0, t})).norm() == 0.0);
    }
    SUBCASE("closure is symmetric on sampled classes") {
        const auto samples = annulus_samples(geo, 40, 3);
        for (const auto& xi : samples) {
            const auto c = geo.congruence_class(xi);
            for (const auto& p : c.points) CHECK(has_point(geo.congruence_class(p), xi));
        }
    }
}

TEST_CASE("partition and sum closure on the annulus") {
    for (int d : {1, 2}) {
        const auto zp = ZoneParameters::defaults(d, 1000.0, 2);
        const ResonanceGeometry geo(algebraic_sum(axes(d), 2), zp);
        for (const auto& xi : annulus_samples(geo, 500, 9)) {
            CHECK(geo.region_count(xi) == 1);
            CHECK(geo.sum_closed(xi));
        }
    }
}

TEST_CASE("shifted cylindrical coordinates") {
    const auto zp = ZoneParameters::defaults(2, 1000.0, 1);
    const ResonanceGeometry geo(axes(2), zp);
    const double L2 = zp.L(2);
    const double rho = 1000.0, t = 0.7;
    const Eigen::VectorXd xi = vec({rho, t});
    const auto label = geo.classify(xi);
    REQUIRE(label.subspace.dim() == 1);
    const auto c = geo.component_coordinates(xi, label);

    CHECK(c.X.size() == 1);
    CHECK(std::abs(c.X[0]) == doctest::Approx(t));
    CHECK(c.mu_tilde.cols() == 1);
    CHECK(std::abs(c.mu_tilde(0, 0)) == doctest::Approx(1.0));
    CHECK(c.r == doctest::Approx(std::abs(rho - L2)));
    CHECK(c.apex.norm() == doctest::Approx(L2));
    CHECK(c.odin_residual < 1e-12);
    CHECK((geo.reconstruct(c, label) - xi).norm() < 1e-10);

    SUBCASE("r vanishes at the apex") {
        // The apex lies in Ξ(ℝ²), outside this component; along the ray r is affine in ρ and
        // extrapolates to zero exactly there.
        for (double p : {100.0, 250.0, 3000.0}) {
            const Eigen::VectorXd q = vec({p, t});
            const auto cq = geo.component_coordinates(q, geo.classify(q));
            CHECK(cq.r == doctest::Approx(p - L2).epsilon(1e-12));
            CHECK((cq.apex - vec({L2, 0.0})).norm() < 1e-9);
        }
    }
    SUBCASE("inner-product profile") {
        const auto in_v = geo.inner_product_profile(xi, FrequencyVector::unit(2, 1), label);
        CHECK(in_v.linear == 0.0);
        CHECK(in_v.constant == doctest::Approx(t));

        const auto across = geo.inner_product_profile(xi, FrequencyVector::unit(2, 0), label);
        CHECK(across.sign_coherent);
        CHECK(std::abs(across.constant) == doctest::Approx(L2));
        CHECK(across.constant + c.r * across.linear == doctest::Approx(rho));
        // At r = 0 the profile would read ⟨a + X, θ⟩.
        CHECK(across.constant == doctest::Approx(c.apex.dot(vec({1.0, 0.0}))));
    }
}

TEST_CASE("coordinates round-trip and profiles reproduce ⟨ξ,θ⟩ on sampled points") {
    const auto zp = ZoneParameters::defaults(2, 1000.0, 2);
    const ResonanceGeometry geo(algebraic_sum(axes(2), 2), zp);
    const auto thetas = geo.frequencies().nonzero();
    int checked = 0;
    for (const auto& xi : annulus_samples(geo, 300, 21)) {
        const auto label = geo.classify(xi);
        if (label.subspace.dim() == 0 || label.subspace.dim() == 2) continue;
        const auto c = geo.component_coordinates(xi, label);
        CHECK((geo.reconstruct(c, label) - xi).norm() < 1e-10);
        CHECK(c.odin_residual < 1e-12);
        CHECK(c.surface_denominator >= 0.5);
        for (const auto& th : thetas) {
            const auto p = geo.inner_product_profile(xi, th, label);
            CHECK(p.sign_coherent);
            CHECK(p.constant + c.r * p.linear == doctest::Approx(xi.dot(th.real())).epsilon(1e-10));
        }
        ++checked;
    }
    CHECK(checked > 50);
}
