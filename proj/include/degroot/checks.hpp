#pragma once

#include <cstdint>
#include <string>

namespace degroot {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

// Simulated consensus-timing influence versus the closed-form prediction on
// random networks, durations 1..5, intensities {0.1, 0.3, 0.5} and random
// target sets.
CheckResult check_consensus_prediction(std::size_t networks = 50, std::size_t n = 10,
                                       double tol = 1e-6, std::uint64_t seed = 1);

// Intervened round versus the extended-matrix product on random draws.
CheckResult check_step_equivalence(std::size_t draws = 1000, double tol = 1e-15,
                                   std::uint64_t seed = 2);

// Scaling intensity by r versus scaling coverage by r on random admissible
// draws; the closed forms must agree.
CheckResult check_scaling_identity(std::size_t draws = 1000, double tol = 1e-12,
                                   std::uint64_t seed = 3);

// Scaling coverage strictly beats scaling duration on an admissible grid.
CheckResult check_coverage_duration_dominance();

// At full coverage, random explicit schedules and the consensus schedule all
// land on the same limiting opinion, which matches the closed form.
CheckResult check_full_coverage_timing(std::size_t schedules = 20, std::size_t n = 10,
                                       std::size_t k = 5, double lambda = 0.3,
                                       std::size_t range_hi = 200, double pairwise_tol = 1e-8,
                                       double closed_form_tol = 1e-6, std::uint64_t seed = 4);

}  // namespace degroot
