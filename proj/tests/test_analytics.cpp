#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "degroot/analytics.hpp"
#include "degroot/errors.hpp"
#include "degroot/netgen.hpp"
#include "degroot/rng.hpp"

using namespace degroot;

TEST_CASE("social influence of a doubly stochastic matrix is uniform") {
    const auto s = social_influence_vector(validate_stochastic({{0.5, 0.5}, {0.5, 0.5}}));
    CHECK(s[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(0.5).epsilon(1e-12));

    const auto t = social_influence_vector(validate_stochastic(
        {{0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, {0.25, 0.25, 0.5}}));
    for (double w : t) CHECK(w == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("social influence solves the 2x2 fixed point") {
    // s T = s with sum 1 gives s = (1/3, 2/3) for this matrix.
    const auto s = social_influence_vector(validate_stochastic({{0.0, 1.0}, {0.5, 0.5}}));
    CHECK(s[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(s[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("social influence satisfies its invariants on generated networks") {
    Rng rng(1234);
    for (int trial = 0; trial < 10; ++trial) {
        const auto n = 3 + static_cast<std::size_t>(rng.next_below(30));
        const auto t = generate_interaction_matrix({n, 0.3, 0.1, rng.next_u64()});
        const auto s = social_influence_vector(t, 1e-12);

        CHECK(std::accumulate(s.begin(), s.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-10));
        for (double w : s) CHECK(w > 0.0);

        double residual = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double next = 0.0;
            for (std::size_t i = 0; i < n; ++i) next += s[i] * t(i, j);
            residual = std::max(residual, std::abs(next - s[j]));
        }
        CHECK(residual <= 1e-10);
    }
}

TEST_CASE("rows of repeated powers approach the influence vector") {
    const auto t = generate_interaction_matrix({10, 0.4, 0.1, 3});
    const auto s = social_influence_vector(t, 1e-13);
    const std::size_t n = t.size();
    for (std::size_t row = 0; row < n; ++row) {
        OpinionVector w(n, 0.0), next(n);
        w[row] = 1.0;
        for (int it = 0; it < 500; ++it) {
            std::fill(next.begin(), next.end(), 0.0);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) next[j] += w[i] * t(i, j);
            w.swap(next);
        }
        for (std::size_t j = 0; j < n; ++j) CHECK(std::abs(w[j] - s[j]) <= 1e-9);
    }
}

TEST_CASE("power iteration reports a periodic matrix") {
    // Bipartite: mass alternates between the two classes, so the iteration
    // never settles even though a fixed point exists.
    const auto t = validate_stochastic({{0.0, 0.6, 0.4}, {1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}});
    CHECK_THROWS_AS(social_influence_vector(t, 1e-12, 1000), NoConvergence);
}

TEST_CASE("combined_influence sums target weights") {
    const std::vector<double> s{0.1, 0.2, 0.3, 0.4};
    CHECK(combined_influence(s, {1, 3}) == doctest::Approx(0.6));
    CHECK(combined_influence(s, {}) == 0.0);
    CHECK_THROWS_AS(combined_influence(s, {4}), InvalidTargets);
}

TEST_CASE("closed_form_influence examples") {
    CHECK(closed_form_influence(1, 0.5, 0.2) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(closed_form_influence(2, 0.5, 0.2) == doctest::Approx(0.19).epsilon(1e-14));
    CHECK(closed_form_influence(0, 0.5, 0.2) == 0.0);

    CHECK_THROWS_AS(closed_form_influence(1, 0.0, 0.2), InvalidLambda);
    CHECK_THROWS_AS(closed_form_influence(1, 0.5, 0.0), DomainError);
    CHECK_THROWS_AS(closed_form_influence(1, 0.5, 1.5), DomainError);
}

TEST_CASE("closed form equals the explicit geometric sum") {
    Rng rng(606);
    for (int trial = 0; trial < 200; ++trial) {
        const double lambda = rng.uniform(0.01, 0.99);
        const double s = rng.uniform(0.01, 1.0);
        const auto k = static_cast<std::size_t>(rng.next_below(40));
        double sum = 0.0;
        for (std::size_t j = 0; j < k; ++j)
            sum += std::pow(1.0 - s * lambda, static_cast<double>(j)) * s * lambda;
        CHECK(closed_form_influence(k, lambda, s) == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("closed form influence rises with each argument") {
    Rng rng(505);
    for (int trial = 0; trial < 100; ++trial) {
        const double lambda = rng.uniform(0.02, 0.95);
        const double s = rng.uniform(0.02, 0.95);
        const auto k = 1 + static_cast<std::size_t>(rng.next_below(30));
        const double base = closed_form_influence(k, lambda, s);
        CHECK(closed_form_influence(k + 1, lambda, s) > base);
        CHECK(closed_form_influence(k, lambda * 1.02, s) > base);
        CHECK(closed_form_influence(k, lambda, s * 1.02) > base);
    }
}

TEST_CASE("marginal_round_gain examples and monotonicity") {
    CHECK(marginal_round_gain(0, 0.5, 0.2) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(marginal_round_gain(1, 0.5, 0.2) == doctest::Approx(0.09).epsilon(1e-14));

    Rng rng(707);
    for (int trial = 0; trial < 20; ++trial) {
        const double lambda = rng.uniform(0.01, 0.99);
        const double s = rng.uniform(0.01, 1.0);
        for (std::size_t k = 0; k < 20; ++k) {
            CHECK(marginal_round_gain(k + 1, lambda, s) < marginal_round_gain(k, lambda, s));
            const double diff = closed_form_influence(k + 1, lambda, s) -
                                closed_form_influence(k, lambda, s);
            CHECK(marginal_round_gain(k, lambda, s) == doctest::Approx(diff).epsilon(1e-10));
        }
    }
}

TEST_CASE("scaling intensity equals scaling coverage") {
    const auto pair = intensity_vs_coverage_scaling(3, 0.2, 0.3, 1.5);
    const double expected = 1.0 - std::pow(1.0 - 0.3 * 0.3, 3);  // both reduce to r*s*lambda
    CHECK(pair.scaled_intensity == doctest::Approx(expected).epsilon(1e-14));
    CHECK(pair.scaled_coverage == doctest::Approx(expected).epsilon(1e-14));
    CHECK(expected == doctest::Approx(0.246429).epsilon(1e-6));

    const auto identity = intensity_vs_coverage_scaling(4, 0.3, 0.2, 1.0);
    CHECK(identity.scaled_intensity == identity.scaled_coverage);

    Rng rng(808);
    for (int trial = 0; trial < 300; ++trial) {
        const double r = rng.uniform(1.0, 3.0);
        const double lambda = rng.uniform(1e-3, 0.999 / r);
        const double s = rng.uniform(1e-3, 0.999 / r);
        const auto k = 1 + static_cast<std::size_t>(rng.next_below(30));
        const auto p = intensity_vs_coverage_scaling(k, lambda, s, r);
        CHECK(std::abs(p.scaled_intensity - p.scaled_coverage) <= 1e-12);
    }

    CHECK_THROWS_AS(intensity_vs_coverage_scaling(3, 0.2, 0.3, 0.5), DomainError);
    CHECK_THROWS_AS(intensity_vs_coverage_scaling(3, 0.6, 0.3, 2.0), DomainError);
}

TEST_CASE("scaling coverage strictly beats scaling duration") {
    const auto small = coverage_vs_duration_scaling(1, 0.5, 0.2, 2);
    CHECK(small.scaled_coverage == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(small.scaled_duration == doctest::Approx(0.19).epsilon(1e-14));

    const auto larger = coverage_vs_duration_scaling(2, 0.1, 0.1, 3);
    CHECK(larger.scaled_coverage == doctest::Approx(1.0 - std::pow(0.97, 2)).epsilon(1e-14));
    CHECK(larger.scaled_duration == doctest::Approx(1.0 - std::pow(0.99, 6)).epsilon(1e-14));
    CHECK(larger.scaled_coverage > larger.scaled_duration);

    Rng rng(909);
    for (int trial = 0; trial < 300; ++trial) {
        const auto r = 2 + static_cast<std::size_t>(rng.next_below(3));
        const double bound = 0.999 / static_cast<double>(r);
        const double lambda = rng.uniform(1e-3, bound);
        const double s = rng.uniform(1e-3, bound);
        const auto k = 1 + static_cast<std::size_t>(rng.next_below(12));
        const auto p = coverage_vs_duration_scaling(k, lambda, s, r);
        CHECK(p.scaled_coverage > p.scaled_duration);
    }

    CHECK_THROWS_AS(coverage_vs_duration_scaling(1, 0.5, 0.2, 1), DomainError);
    CHECK_THROWS_AS(coverage_vs_duration_scaling(1, 0.2, 0.5, 2), DomainError);
}

TEST_CASE("two_intervention_limit at full coverage is 2*lambda - lambda^2") {
    const auto t = generate_interaction_matrix({6, 0.5, 0.1, 21});
    std::vector<std::size_t> all(6);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t r : {2, 7}) {
        const auto limit = two_intervention_limit(t, all, 0.3, r);
        for (double v : limit) CHECK(v == doctest::Approx(2 * 0.3 - 0.09).epsilon(1e-9));
    }
}

TEST_CASE("two_intervention_limit with no targets is zero") {
    const auto t = generate_interaction_matrix({4, 0.5, 0.1, 22});
    const auto limit = two_intervention_limit(t, {}, 0.3, 5);
    for (double v : limit) CHECK(v == 0.0);
}

TEST_CASE("two_intervention_limit matches the simulated schedule {1, r}") {
    Rng rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const auto t = generate_interaction_matrix({5, 0.5, 0.1, rng.next_u64()});
        const std::vector<std::size_t> targets{0, 2};
        const auto r = 2 + static_cast<std::size_t>(rng.next_below(8));
        const double lambda = rng.uniform(0.1, 0.9);

        const auto predicted = two_intervention_limit(t, targets, lambda, r);

        Scenario scenario{.matrix = t, .targets = targets, .lambda = lambda, .duration = 2};
        InterventionSchedule schedule;
        schedule.rounds = {1, r};
        const auto trace = run_schedule(scenario, schedule);
        REQUIRE(trace.converged);
        const double simulated = measured_influence(trace);
        CHECK(std::abs(predicted[0] - simulated) <= 1e-6);
    }
    CHECK_THROWS_AS(
        two_intervention_limit(generate_interaction_matrix({4, 0.5, 0.1, 1}), {0}, 0.3, 1),
        DomainError);
}

TEST_CASE("measured_influence reads the consensus value") {
    SimulationTrace trace;
    trace.snapshots = {{0.0, 0.0}, {0.25, 0.25}};
    trace.snapshot_rounds = {0, 7};
    trace.converged = true;
    CHECK(measured_influence(trace) == doctest::Approx(0.25));

    trace.converged = false;
    CHECK_THROWS_AS(measured_influence(trace), NotConverged);
}

TEST_CASE("consensus timing matches the closed form end to end") {
    Rng rng(4096);
    for (int trial = 0; trial < 5; ++trial) {
        const auto t = generate_interaction_matrix({12, 0.4, 0.1, rng.next_u64()});
        const auto s = social_influence_vector(t);
        std::vector<std::size_t> targets(12);
        std::iota(targets.begin(), targets.end(), 0);
        rng.shuffle(targets);
        targets.resize(1 + rng.next_below(12));

        Scenario scenario{.matrix = t, .targets = targets};
        scenario.lambda = rng.uniform(0.1, 0.9);
        scenario.duration = 1 + rng.next_below(6);
        const auto trace = simulate(scenario);
        REQUIRE(trace.converged);
        const double expected =
            closed_form_influence(scenario.duration, scenario.lambda,
                                  combined_influence(s, targets));
        CHECK(std::abs(measured_influence(trace) - expected) <= 1e-6);
    }
}

TEST_CASE("larger combined influence means larger measured influence") {
    const auto t = generate_interaction_matrix({10, 0.4, 0.1, 55});
    const auto s = social_influence_vector(t);
    std::vector<std::size_t> order(10);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return s[a] > s[b]; });

    const std::vector<std::size_t> strong{order[0], order[1], order[2]};
    const std::vector<std::size_t> weak{order[7], order[8], order[9]};
    REQUIRE(combined_influence(s, strong) > combined_influence(s, weak) + 1e-6);

    Scenario scenario{.matrix = t, .targets = strong, .lambda = 0.3, .duration = 3};
    const double strong_influence = measured_influence(simulate(scenario));
    scenario.targets = weak;
    const double weak_influence = measured_influence(simulate(scenario));
    CHECK(strong_influence > weak_influence + 1e-8);
}

TEST_CASE("report_influence fills in prediction and error") {
    const auto t = generate_interaction_matrix({8, 0.4, 0.1, 66});
    Scenario scenario{.matrix = t, .targets = {0, 3, 5}, .lambda = 0.25, .duration = 4};
    const auto report = report_influence(scenario);
    CHECK(report.measured >= 0.0);
    CHECK(report.measured <= 1.0);
    CHECK(report.abs_error <= 1e-6);
    CHECK(report.s_combined ==
          doctest::Approx(combined_influence(social_influence_vector(t), {0, 3, 5})));

    const auto kv = to_key_value(report);
    CHECK(kv.find("measured=") != std::string::npos);
    CHECK(kv.find("predicted=") != std::string::npos);
    CHECK(kv.find("s_combined=") != std::string::npos);
    CHECK(kv.find("abs_error=") != std::string::npos);

    CHECK(influence_report_csv_header() == "measured,predicted,s_combined,abs_error");
    const auto row = to_csv_row(report);
    CHECK(std::count(row.begin(), row.end(), ',') == 3);
}

TEST_CASE("report_influence with no intervention predicts zero") {
    const auto t = generate_interaction_matrix({5, 0.5, 0.1, 67});
    Scenario scenario{.matrix = t, .targets = {}, .lambda = 0.25, .duration = 4};
    const auto report = report_influence(scenario);
    CHECK(report.measured == 0.0);
    CHECK(report.predicted == 0.0);
    CHECK(report.s_combined == 0.0);
}
