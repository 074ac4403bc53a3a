#include "degroot/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "degroot/errors.hpp"

namespace degroot {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Combined influences are sums of normalized weights, so values a rounding
// error above 1 are admitted and clamped.
double require_influence_domain(double lambda, double s_combined) {
    require_lambda(lambda);
    if (!(s_combined > 0.0) || !(s_combined <= 1.0 + 1e-9))
        throw DomainError("combined influence must lie in (0,1], got " + fmt(s_combined));
    return std::min(s_combined, 1.0);
}

}  // namespace

std::vector<double> social_influence_vector(const InteractionMatrix& matrix, double tol,
                                            std::size_t max_iter) {
    if (!(tol > 0)) throw DomainError("social_influence_vector: tol must be positive");
    const std::size_t n = matrix.size();
    std::vector<double> current(n, 1.0 / static_cast<double>(n));
    std::vector<double> next(n);

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        // next = current * T (row vector times matrix)
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double weight = current[i];
            const double* row = matrix.entries().data() + i * n;
            for (std::size_t j = 0; j < n; ++j) next[j] += weight * row[j];
        }
        double residual = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            residual = std::max(residual, std::abs(next[j] - current[j]));
        if (residual <= tol) {
            const double sum = std::accumulate(current.begin(), current.end(), 0.0);
            for (auto& w : current) w /= sum;
            return current;
        }
        const double sum = std::accumulate(next.begin(), next.end(), 0.0);
        for (auto& w : next) w /= sum;
        current.swap(next);
    }
    throw NoConvergence("social_influence_vector: no fixed point after " +
                        std::to_string(max_iter) + " iterations");
}

double combined_influence(const std::vector<double>& influence,
                          const std::vector<std::size_t>& targets) {
    const auto sorted = require_targets(targets, influence.size());
    double sum = 0.0;
    for (auto t : sorted) sum += influence[t];
    return sum;
}

double closed_form_influence(std::size_t k, double lambda, double s_combined) {
    if (k == 0) return 0.0;
    const double s = require_influence_domain(lambda, s_combined);
    return 1.0 - std::pow(1.0 - s * lambda, static_cast<double>(k));
}

double marginal_round_gain(std::size_t k, double lambda, double s_combined) {
    const double push = require_influence_domain(lambda, s_combined) * lambda;
    return std::pow(1.0 - push, static_cast<double>(k)) * push;
}

ScalingPair intensity_vs_coverage_scaling(std::size_t k, double lambda, double s_combined,
                                          double r) {
    if (!(r >= 1.0)) throw DomainError("scaling factor r must be >= 1");
    if (!(r * lambda < 1.0) || !(r * s_combined < 1.0))
        throw DomainError("scaled intensity and coverage must stay below 1");
    require_influence_domain(lambda, s_combined);
    return {closed_form_influence(k, r * lambda, s_combined),
            closed_form_influence(k, lambda, r * s_combined)};
}

CoverageDurationPair coverage_vs_duration_scaling(std::size_t k, double lambda, double s_combined,
                                                  std::size_t r) {
    if (r < 2) throw DomainError("scaling factor r must be an integer >= 2");
    const double rd = static_cast<double>(r);
    // Only the coverage gets scaled here, so only r*s needs to stay below 1.
    if (!(rd * s_combined < 1.0)) throw DomainError("scaled coverage must stay below 1");
    require_influence_domain(lambda, s_combined);
    return {closed_form_influence(k, lambda, rd * s_combined),
            closed_form_influence(r * k, lambda, s_combined)};
}

OpinionVector two_intervention_limit(const InteractionMatrix& matrix,
                                     const std::vector<std::size_t>& targets, double lambda,
                                     std::size_t r) {
    require_lambda(lambda);
    const auto sorted = require_targets(targets, matrix.size());
    if (r < 2) throw DomainError("two_intervention_limit: r must be >= 2");

    const std::size_t n = matrix.size();
    const auto influence = social_influence_vector(matrix);

    OpinionVector push(n, 0.0);
    for (auto t : sorted) push[t] = lambda;

    OpinionVector mixed = push;  // T^(r-1) * push
    for (std::size_t i = 1; i < r; ++i) mixed = mat_vec(matrix, mixed);

    double direct = 0.0;   // s . push
    double carried = 0.0;  // s . (T^(r-1) push restricted to target rows)
    for (auto t : sorted) {
        direct += influence[t] * lambda;
        carried += influence[t] * mixed[t];
    }
    return OpinionVector(n, 2.0 * direct - lambda * carried);
}

double measured_influence(const SimulationTrace& trace) {
    if (!trace.converged)
        throw NotConverged("measured_influence: trace did not reach consensus");
    const auto& last = trace.snapshots.back();
    if (last.empty()) throw EmptyVector("measured_influence: empty final snapshot");
    return std::accumulate(last.begin(), last.end(), 0.0) / static_cast<double>(last.size());
}

InfluenceReport report_influence(const Scenario& scenario) {
    return report_influence(scenario, simulate(scenario));
}

InfluenceReport report_influence(const Scenario& scenario, const SimulationTrace& trace) {
    InfluenceReport report;
    report.measured = measured_influence(trace);
    if (scenario.targets.empty() || scenario.duration == 0) {
        report.s_combined = scenario.targets.empty()
                                ? 0.0
                                : combined_influence(social_influence_vector(scenario.matrix),
                                                     scenario.targets);
        report.predicted = 0.0;
    } else {
        report.s_combined =
            combined_influence(social_influence_vector(scenario.matrix), scenario.targets);
        report.predicted =
            closed_form_influence(scenario.duration, scenario.lambda, report.s_combined);
    }
    report.abs_error = std::abs(report.measured - report.predicted);
    return report;
}

std::string to_key_value(const InfluenceReport& report) {
    std::string out;
    out += "measured=" + fmt(report.measured) + "\n";
    out += "predicted=" + fmt(report.predicted) + "\n";
    out += "s_combined=" + fmt(report.s_combined) + "\n";
    out += "abs_error=" + fmt(report.abs_error) + "\n";
    return out;
}

std::string influence_report_csv_header() { return "measured,predicted,s_combined,abs_error"; }

std::string to_csv_row(const InfluenceReport& report) {
    return fmt(report.measured) + "," + fmt(report.predicted) + "," + fmt(report.s_combined) +
           "," + fmt(report.abs_error);
}

}  // namespace degroot
