#include "spectra/lattice.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

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

FrequencyVector ints(std::vector<long> v) { return FrequencyVector::from_ints(v); }

// Brute-force k-fold integer sums of a set of integer vectors.
std::set<std::vector<long>> integer_sums(const std::vector<std::vector<long>>& base, int k) {
    std::set<std::vector<long>> cur{std::vector<long>(base.front().size(), 0)};
    for (int step = 0; step < k; ++step) {
        std::set<std::vector<long>> next;
        for (const auto& a : cur)
            for (const auto& b : base) {
                auto c = a;
                for (std::size_t i = 0; i < c.size(); ++i) c[i] += b[i];
                next.insert(c);
            }
        cur = next;
    }
    return cur;
}

}  // namespace

TEST_CASE("algebraic sums") {
    SUBCASE("d=1, {0,±1}, k=2") {
        const FrequencySet S(1, {}, {ints({1}), ints({-1})});
        const auto T = algebraic_sum(S, 2);
        CHECK(T.size() == 5);
        for (long v : {-2, -1, 0, 1, 2}) CHECK(T.contains(ints({v})));
    }
    SUBCASE("k=1 is the identity") {
        const auto S = axes(2);
        CHECK(algebraic_sum(S, 1).elements() == S.elements());
    }
    SUBCASE("d=2 axes, k=2 matches an exhaustive integer enumeration") {
        const auto want = integer_sums({{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}}, 2);
        CHECK(want.size() == 13);
        const auto T = algebraic_sum(axes(2), 2);
        REQUIRE(T.size() == want.size());
        for (const auto& v : want) CHECK(T.contains(ints(v)));
        CHECK(T.contains(ints({1, 1})));
        CHECK(T.contains(ints({1, -1})));
        CHECK(T.contains(ints({-2, 0})));
        CHECK(T.contains(ints({0, 2})));
    }
    SUBCASE("monotone in k and symmetric") {
        const auto S = axes(2);
        for (int k = 1; k < 4; ++k) {
            const auto a = algebraic_sum(S, k), b = algebraic_sum(S, k + 1);
            for (const auto& v : a.elements()) CHECK(b.contains(v));
            CHECK(b.is_symmetric());
            CHECK(b.contains(FrequencyVector::zero(2)));
        }
    }
}

TEST_CASE("Condition A") {
    CHECK(check_condition_A(axes(2), 2).pass);

    const GeneratorBasis b2{2};
    const FrequencyVector one(std::vector<Surd>{Surd(1), Surd(0)});
    const FrequencyVector root2(std::vector<Surd>{Surd(0, 1, 2), Surd(0)});
    const FrequencySet S(2, b2, {one, -one, root2, -root2});
    const auto r = check_condition_A(S, 1);
    CHECK_FALSE(r.pass);
    REQUIRE(r.witness.size() == 2);
    // The witness is a collinear incommensurate pair.
    std::set<FrequencyVector> w{r.witness.begin(), r.witness.end()};
    const bool has_one = w.count(one) || w.count(-one);
    const bool has_root = w.count(root2) || w.count(-root2);
    CHECK(has_one);
    CHECK(has_root);

    SUBCASE("d=1 always passes, even with incommensurate frequencies") {
        const FrequencyVector a(std::vector<Surd>{Surd(1)});
        const FrequencyVector b(std::vector<Surd>{Surd(0, 1, 2)});
        CHECK(check_condition_A(FrequencySet(1, b2, {a, -a, b, -b}), 2).pass);
    }
    SUBCASE("a generic quasi-periodic planar set passes") {
        const FrequencyVector p(std::vector<Surd>{Surd(1), Surd(0, 1, 2)});
        const FrequencyVector q(std::vector<Surd>{Surd(0, 1, 2), Surd(1)});
        CHECK(check_condition_A(FrequencySet(2, b2, {p, -p, q, -q}), 2).pass);
    }
    SUBCASE("order of the set does not matter") {
        const FrequencySet S2(2, b2, {root2, -one, -root2, one});
        CHECK(check_condition_A(S2, 1).pass == r.pass);
    }
}

TEST_CASE("quasi-lattice subspaces") {
    const auto S = axes(2);
    const auto lines = enumerate_subspaces(S, 1);
    CHECK(lines.size() == 2);
    CHECK(enumerate_subspaces(S, 0).size() == 1);
    CHECK(enumerate_subspaces(S, 0).front().dim() == 0);
    CHECK(enumerate_subspaces(S, 2).size() == 1);
    CHECK(enumerate_subspaces(S, 2).front().dim() == 2);

    const auto T = algebraic_sum(S, 2);
    const auto lines2 = enumerate_subspaces(T, 1);
    CHECK(lines2.size() == 4);
    // Axes and both diagonals, each exactly once.
    for (const auto& v : {ints({1, 0}), ints({0, 1}), ints({1, 1}), ints({1, -1})}) {
        const auto n = std::count_if(lines2.begin(), lines2.end(), [&](const auto& L) { return L.contains(v); });
        CHECK(n == 1);
    }
    // Equal spans compare equal regardless of the spanning vectors.
    CHECK(QuasiLatticeSubspace(2, {ints({2, 2})}) == QuasiLatticeSubspace(2, {ints({-1, -1}), ints({3, 3})}));
}

TEST_CASE("Diophantine constants") {
    const auto r1 = diophantine_constants(axes(2));
    CHECK(r1.s == doctest::Approx(1.0));
    CHECK(r1.r == doctest::Approx(1.0));
    CHECK(r1.R == doctest::Approx(1.0));

    // Independent oracle: smallest angle between distinct lines through Θ₂.
    const std::vector<std::pair<double, double>> dirs{{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    double min_sine = 1.0;
    for (std::size_t i = 0; i < dirs.size(); ++i)
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            const auto [a, b] = dirs[i];
            const auto [c, e] = dirs[j];
            min_sine = std::min(min_sine, std::abs(a * e - b * c) / std::hypot(a, b) / std::hypot(c, e));
        }
    const auto r2 = diophantine_constants(algebraic_sum(axes(2), 2));
    CHECK(r2.s == doctest::Approx(min_sine).epsilon(1e-12));
    CHECK(r2.s == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK(r2.r == doctest::Approx(1.0));
    CHECK(r2.R == doctest::Approx(2.0));

    const auto r3 = diophantine_constants(FrequencySet(1, {}, {ints({1}), ints({-1})}));
    CHECK(r3.s == 1.0);
    CHECK(r3.r == doctest::Approx(1.0));
    CHECK(r3.R == doctest::Approx(1.0));

    const auto j = r2.to_json();
    CHECK(j.contains("s"));
    CHECK(j.contains("r"));
    CHECK(j.contains("R"));
}

TEST_CASE("redundant vectors never increase s") {
    const auto base = algebraic_sum(axes(2), 2);
    std::vector<FrequencyVector> more = base.elements();
    more.push_back(ints({3, 3}));
    more.push_back(ints({-3, -3}));
    more.push_back(ints({0, 5}));
    more.push_back(ints({0, -5}));
    const FrequencySet bigger(2, {}, more);
    CHECK(diophantine_constants(bigger).s <= diophantine_constants(base).s + 1e-15);
    CHECK(diophantine_constants(bigger).r <= diophantine_constants(bigger).R);
}
