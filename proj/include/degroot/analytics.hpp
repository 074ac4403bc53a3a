#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "degroot/dynamics.hpp"
#include "degroot/linalg.hpp"

namespace degroot {

// Normalized left fixed-point vector of the interaction matrix (s T = s,
// sum_i s_i = 1), computed by power iteration on the transpose from the
// uniform vector with renormalization. Under strong connectivity and
// aperiodicity s_i is agent i's weight in the limiting consensus.
std::vector<double> social_influence_vector(const InteractionMatrix& matrix, double tol = 1e-12,
                                            std::size_t max_iter = 1000000);

// Sum of the influence weights over a target set ("coverage" as a weight).
double combined_influence(const std::vector<double>& influence,
                          const std::vector<std::size_t>& targets);

// Limiting opinion when every one of the k rounds of participation happens
// at a consensus point: 1 - (1 - s*lambda)^k.
double closed_form_influence(std::size_t k, double lambda, double s_combined);

// Influence added by one more consensus-timed round: (1 - s*lambda)^k * s*lambda.
// Strictly decreasing in k.
double marginal_round_gain(std::size_t k, double lambda, double s_combined);

// Scaling intensity by r versus scaling coverage by r. The two results are
// equal in exact arithmetic; requires r >= 1, r*lambda < 1, r*s < 1.
struct ScalingPair {
    double scaled_intensity;  // closed form at (k, r*lambda, s)
    double scaled_coverage;   // closed form at (k, lambda, r*s)
};
ScalingPair intensity_vs_coverage_scaling(std::size_t k, double lambda, double s_combined,
                                          double r);

// Scaling coverage by an integer r versus scaling duration by r. The
// coverage route is strictly larger; requires r >= 2, r*lambda < 1, r*s < 1.
struct CoverageDurationPair {
    double scaled_coverage;  // closed form at (k, lambda, r*s)
    double scaled_duration;  // closed form at (r*k, lambda, s)
};
CoverageDurationPair coverage_vs_duration_scaling(std::size_t k, double lambda, double s_combined,
                                                  std::size_t r);

// Limiting opinions when the external agent participates exactly in rounds 1
// and r (r >= 2), from zero initial opinions. Agrees with simulating the
// explicit schedule {1, r}.
OpinionVector two_intervention_limit(const InteractionMatrix& matrix,
                                     const std::vector<std::size_t>& targets, double lambda,
                                     std::size_t r);

// Consensus readout of a converged trace: the mean of the final opinion
// vector, which under zero initial opinions is the external agent's social
// influence. Throws NotConverged on unconverged traces.
double measured_influence(const SimulationTrace& trace);

// Simulated influence next to the closed-form consensus-timing prediction.
struct InfluenceReport {
    double measured = 0.0;
    double predicted = 0.0;
    double s_combined = 0.0;
    double abs_error = 0.0;
};

// Runs the scenario and fills in the closed-form prediction from the
// scenario's coverage, intensity, and duration.
InfluenceReport report_influence(const Scenario& scenario);
InfluenceReport report_influence(const Scenario& scenario, const SimulationTrace& trace);

std::string to_key_value(const InfluenceReport& report);
std::string influence_report_csv_header();
std::string to_csv_row(const InfluenceReport& report);

}  // namespace degroot
