#include <doctest.h>

#include <algorithm>

#include "degroot/errors.hpp"
#include "degroot/linalg.hpp"
#include "degroot/netgen.hpp"
#include "degroot/rng.hpp"

using namespace degroot;

TEST_CASE("validate_stochastic accepts a doubly stochastic matrix") {
    const auto m = validate_stochastic({{0.5, 0.5}, {0.5, 0.5}}, 1e-12);
    CHECK(m.size() == 2);
    CHECK(m(0, 1) == 0.5);
    CHECK(m.row(1)[0] == 0.5);
}

TEST_CASE("validate_stochastic rejects bad input") {
    CHECK_THROWS_AS(validate_stochastic({{0.6, 0.5}, {0.5, 0.5}}, 1e-12), RowSumViolation);
    CHECK_THROWS_AS(validate_stochastic({{1.0, 0.0}, {-0.1, 1.1}}, 1e-12), NegativeEntry);
    CHECK_THROWS_AS(validate_stochastic({{1.0, 0.0}}, 1e-12), DimensionMismatch);
    CHECK_THROWS_AS(validate_stochastic({{1.0}}, 0.0), DomainError);
}

TEST_CASE("validate_stochastic honors the tolerance") {
    CHECK_NOTHROW(validate_stochastic({{0.5, 0.5 + 1e-10}, {0.5, 0.5}}, 1e-9));
    CHECK_THROWS_AS(validate_stochastic({{0.5, 0.5 + 1e-10}, {0.5, 0.5}}, 1e-12),
                    RowSumViolation);
}

TEST_CASE("mat_vec examples") {
    const auto avg = validate_stochastic({{0.5, 0.5}, {0.5, 0.5}});
    CHECK(mat_vec(avg, {0.0, 1.0}) == OpinionVector{0.5, 0.5});

    const auto swap = validate_stochastic({{0.0, 1.0}, {1.0, 0.0}});
    CHECK(mat_vec(swap, {3.0, 7.0}) == OpinionVector{7.0, 3.0});

    const auto mixed = validate_stochastic({{0.0, 1.0}, {0.5, 0.5}});
    const auto out = mat_vec(mixed, {0.0, 1.0});
    CHECK(out[0] == doctest::Approx(1.0));
    CHECK(out[1] == doctest::Approx(0.5));

    CHECK_THROWS_AS(mat_vec(avg, {1.0, 2.0, 3.0}), DimensionMismatch);
}

TEST_CASE("consensus_gap examples") {
    CHECK(consensus_gap({0.3, 0.3, 0.3}) == 0.0);
    CHECK(consensus_gap({0.0, 1.0}) == 1.0);
    CHECK(consensus_gap({0.2, 0.5, 0.4}) == doctest::Approx(0.3));
    CHECK_THROWS_AS(consensus_gap({}), EmptyVector);
}

TEST_CASE("stochastic rounds stay inside the interval hull and shrink the gap") {
    Rng rng(91);
    for (int trial = 0; trial < 50; ++trial) {
        const auto n = 2 + static_cast<std::size_t>(rng.next_below(8));
        const auto m = generate_interaction_matrix(
            {n, rng.uniform(0.2, 1.0), rng.uniform(0.05, 0.5), rng.next_u64()});
        OpinionVector v(n);
        for (auto& x : v) x = rng.uniform(-2.0, 2.0);

        const auto lo = *std::min_element(v.begin(), v.end());
        const auto hi = *std::max_element(v.begin(), v.end());
        const auto out = mat_vec(m, v);
        for (double x : out) {
            CHECK(x >= lo - 1e-12);
            CHECK(x <= hi + 1e-12);
        }
        CHECK(consensus_gap(out) <= consensus_gap(v) + 1e-12);
    }
}

TEST_CASE("require_targets validates and sorts indices") {
    CHECK(require_targets({2, 0}, 3) == std::vector<std::size_t>{0, 2});
    CHECK_THROWS_AS(require_targets({3}, 3), InvalidTargets);
    CHECK_THROWS_AS(require_targets({1, 1}, 3), InvalidTargets);
}

TEST_CASE("require_lambda validates the open interval") {
    CHECK_NOTHROW(require_lambda(0.5));
    CHECK_THROWS_AS(require_lambda(0.0), InvalidLambda);
    CHECK_THROWS_AS(require_lambda(1.0), InvalidLambda);
    CHECK_THROWS_AS(require_lambda(-0.2), InvalidLambda);
}
