#include "degroot/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <vector>

#include "degroot/analytics.hpp"
#include "degroot/dynamics.hpp"
#include "degroot/netgen.hpp"
#include "degroot/rng.hpp"

namespace degroot {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::vector<std::size_t> random_prefix(std::size_t n, std::size_t m, Rng& rng) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);
    order.resize(m);
    std::sort(order.begin(), order.end());
    return order;
}

}  // namespace

CheckResult check_consensus_prediction(std::size_t networks, std::size_t n, double tol,
                                       std::uint64_t seed) {
    const double lambdas[] = {0.1, 0.3, 0.5};
    double max_err = 0.0;
    std::size_t cases = 0;
    for (std::size_t net = 0; net < networks; ++net) {
        const auto matrix =
            generate_interaction_matrix({n, 0.3, 0.1, derive_seed(seed, 1, net)});
        const auto influence = social_influence_vector(matrix);
        Rng rng(derive_seed(seed, 2, net));
        const auto m = 1 + static_cast<std::size_t>(rng.next_below(n));
        const auto targets = random_prefix(n, m, rng);
        const double s_combined = combined_influence(influence, targets);
        for (std::size_t k = 1; k <= 5; ++k) {
            for (double lambda : lambdas) {
                Scenario scenario{.matrix = matrix, .targets = targets, .lambda = lambda, .duration = k};
                const auto trace = simulate(scenario);
                if (!trace.converged)
                    return {"consensus-timing closed-form prediction", false,
                            "simulation failed to converge"};
                const double err = std::abs(measured_influence(trace) -
                                            closed_form_influence(k, lambda, s_combined));
                max_err = std::max(max_err, err);
                ++cases;
            }
        }
    }
    return {"consensus-timing closed-form prediction", max_err <= tol,
            std::to_string(cases) + " cases, max |measured - predicted| = " + fmt(max_err) +
                " (tol " + fmt(tol) + ")"};
}

CheckResult check_step_equivalence(std::size_t draws, double tol, std::uint64_t seed) {
    Rng rng(seed);
    double max_diff = 0.0;
    for (std::size_t draw = 0; draw < draws; ++draw) {
        const auto n = 2 + static_cast<std::size_t>(rng.next_below(11));
        const auto matrix = generate_interaction_matrix(
            {n, rng.uniform(0.2, 1.0), rng.uniform(0.05, 0.5), rng.next_u64()});
        const auto m = static_cast<std::size_t>(rng.next_below(n + 1));
        const auto targets = random_prefix(n, m, rng);
        const double lambda = rng.uniform(0.05, 0.95);
        OpinionVector p(n);
        for (auto& v : p) v = rng.next_double();

        const auto direct = step_intervened(matrix, targets, lambda, p);

        auto extended_input = p;
        extended_input.push_back(1.0);
        const auto full = mat_vec(extend_matrix(matrix, targets, lambda).as_matrix(),
                                  extended_input);
        for (std::size_t i = 0; i < n; ++i)
            max_diff = std::max(max_diff, std::abs(direct[i] - full[i]));
    }
    return {"intervened round matches extended-matrix product", max_diff <= tol,
            std::to_string(draws) + " draws, max componentwise diff = " + fmt(max_diff) +
                " (tol " + fmt(tol) + ")"};
}

CheckResult check_scaling_identity(std::size_t draws, double tol, std::uint64_t seed) {
    Rng rng(seed);
    double max_diff = 0.0;
    for (std::size_t draw = 0; draw < draws; ++draw) {
        const double r = rng.uniform(1.0, 3.0);
        const double lambda = rng.uniform(1e-3, 0.999 / r);
        const double s = rng.uniform(1e-3, 0.999 / r);
        const auto k = 1 + static_cast<std::size_t>(rng.next_below(30));
        const auto pair = intensity_vs_coverage_scaling(k, lambda, s, r);
        max_diff = std::max(max_diff, std::abs(pair.scaled_intensity - pair.scaled_coverage));
    }
    return {"intensity/coverage scaling identity", max_diff <= tol,
            std::to_string(draws) + " draws, max |difference| = " + fmt(max_diff) + " (tol " +
                fmt(tol) + ")"};
}

CheckResult check_coverage_duration_dominance() {
    double min_margin = 1.0;
    std::size_t cells = 0;
    for (std::size_t r = 2; r <= 4; ++r) {
        for (std::size_t k = 1; k <= 10; ++k) {
            for (double lambda = 0.05; lambda < 0.5; lambda += 0.05) {
                for (double s = 0.05; s < 0.5; s += 0.05) {
                    if (static_cast<double>(r) * lambda >= 1.0 ||
                        static_cast<double>(r) * s >= 1.0)
                        continue;
                    const auto pair = coverage_vs_duration_scaling(k, lambda, s, r);
                    min_margin = std::min(min_margin, pair.scaled_coverage - pair.scaled_duration);
                    ++cells;
                }
            }
        }
    }
    return {"coverage scaling strictly beats duration scaling", min_margin > 0.0,
            std::to_string(cells) + " grid cells, min margin = " + fmt(min_margin)};
}

CheckResult check_full_coverage_timing(std::size_t schedules, std::size_t n, std::size_t k,
                                       double lambda, std::size_t range_hi, double pairwise_tol,
                                       double closed_form_tol, std::uint64_t seed) {
    const auto matrix = generate_interaction_matrix({n, 0.3, 0.1, derive_seed(seed, 1)});
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);

    std::vector<double> limits;
    Scenario scenario{.matrix = matrix, .targets = all, .lambda = lambda, .duration = k, .timing = Timing::uniform};
    scenario.uniform_range = {1, range_hi};
    for (std::size_t i = 0; i < schedules; ++i) {
        scenario.seed = derive_seed(seed, 2, i);
        const auto trace = simulate(scenario);
        if (!trace.converged)
            return {"full-coverage timing invariance", false, "simulation failed to converge"};
        limits.push_back(measured_influence(trace));
    }
    scenario.timing = Timing::consensus;
    const auto trace = simulate(scenario);
    if (!trace.converged)
        return {"full-coverage timing invariance", false, "simulation failed to converge"};
    limits.push_back(measured_influence(trace));

    const auto [lo, hi] = std::minmax_element(limits.begin(), limits.end());
    const double spread = *hi - *lo;
    const double expected = closed_form_influence(k, lambda, 1.0);
    double max_err = 0.0;
    for (double v : limits) max_err = std::max(max_err, std::abs(v - expected));

    return {"full-coverage timing invariance",
            spread <= pairwise_tol && max_err <= closed_form_tol,
            std::to_string(limits.size()) + " schedules, spread = " + fmt(spread) + " (tol " +
                fmt(pairwise_tol) + "), max |value - closed form| = " + fmt(max_err) + " (tol " +
                fmt(closed_form_tol) + ")"};
}

}  // namespace degroot
