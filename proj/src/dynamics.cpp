#include "degroot/dynamics.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>

#include "degroot/errors.hpp"
#include "degroot/rng.hpp"

namespace degroot {

namespace {

std::vector<char> target_mask(const std::vector<std::size_t>& targets, std::size_t n) {
    std::vector<char> mask(n, 0);
    for (auto t : targets) mask[t] = 1;
    return mask;
}

void plain_step_into(const InteractionMatrix& m, const OpinionVector& p, OpinionVector& out) {
    const std::size_t n = m.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = m.entries().data() + i * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * p[j];
        out[i] = acc;
    }
}

// Accumulates in the same order as mat_vec over the extended matrix (scaled
// entries first, then the lambda column), so the two routes agree bitwise.
void intervened_step_into(const InteractionMatrix& m, const std::vector<char>& mask,
                          double lambda, const OpinionVector& p, OpinionVector& out) {
    const std::size_t n = m.size();
    const double keep = 1.0 - lambda;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = m.entries().data() + i * n;
        double acc = 0.0;
        if (mask[i]) {
            for (std::size_t j = 0; j < n; ++j) acc += (keep * row[j]) * p[j];
            acc += lambda;  // the external agent's opinion is fixed at 1
        } else {
            for (std::size_t j = 0; j < n; ++j) acc += row[j] * p[j];
        }
        out[i] = acc;
    }
}

void require_explicit_rounds(const std::vector<std::size_t>& rounds) {
    if (!std::is_sorted(rounds.begin(), rounds.end()) ||
        std::adjacent_find(rounds.begin(), rounds.end()) != rounds.end())
        throw DomainError("intervention rounds must be sorted and distinct");
    if (!rounds.empty() && rounds.front() < 1)
        throw DomainError("intervention rounds start at 1");
}

}  // namespace

std::string_view to_string(Timing timing) {
    switch (timing) {
        case Timing::consensus: return "consensus";
        case Timing::start: return "start";
        case Timing::uniform: return "uniform";
    }
    return "unknown";
}

std::optional<Timing> timing_from_string(std::string_view name) {
    if (name == "consensus") return Timing::consensus;
    if (name == "start") return Timing::start;
    if (name == "uniform") return Timing::uniform;
    return std::nullopt;
}

ExtendedMatrix extend_matrix(const InteractionMatrix& matrix,
                             const std::vector<std::size_t>& targets, double lambda) {
    return ExtendedMatrix(matrix, targets, lambda);
}

OpinionVector step_plain(const InteractionMatrix& matrix, const OpinionVector& opinions) {
    return mat_vec(matrix, opinions);
}

OpinionVector step_intervened(const InteractionMatrix& matrix,
                              const std::vector<std::size_t>& targets, double lambda,
                              const OpinionVector& opinions) {
    require_lambda(lambda);
    const auto sorted = require_targets(targets, matrix.size());
    if (opinions.size() != matrix.size())
        throw DimensionMismatch("step_intervened: opinion vector has wrong length");
    OpinionVector out(matrix.size());
    intervened_step_into(matrix, target_mask(sorted, matrix.size()), lambda, opinions, out);
    return out;
}

OpinionVector step_full_coverage(const InteractionMatrix& matrix, double lambda,
                                 const OpinionVector& opinions) {
    require_lambda(lambda);
    if (opinions.size() != matrix.size())
        throw DimensionMismatch("step_full_coverage: opinion vector has wrong length");
    OpinionVector out(matrix.size());
    intervened_step_into(matrix, std::vector<char>(matrix.size(), 1), lambda, opinions, out);
    return out;
}

ConsensusResult run_to_consensus(const InteractionMatrix& matrix, OpinionVector opinions,
                                 double epsilon, std::size_t max_rounds) {
    if (!(epsilon > 0)) throw DomainError("run_to_consensus: epsilon must be positive");
    if (opinions.size() != matrix.size())
        throw DimensionMismatch("run_to_consensus: opinion vector has wrong length");
    OpinionVector buffer(opinions.size());
    std::size_t rounds = 0;
    while (consensus_gap(opinions) > epsilon && rounds < max_rounds) {
        plain_step_into(matrix, opinions, buffer);
        opinions.swap(buffer);
        ++rounds;
    }
    const bool converged = consensus_gap(opinions) <= epsilon;
    return {std::move(opinions), rounds, converged};
}

std::pair<std::size_t, std::size_t> resolved_uniform_range(const Scenario& scenario) {
    if (scenario.uniform_range == std::pair<std::size_t, std::size_t>{0, 0})
        return {1, std::max<std::size_t>(1, scenario.horizon / 2)};
    return scenario.uniform_range;
}

InterventionSchedule build_schedule(const Scenario& scenario) {
    require_lambda(scenario.lambda);
    require_targets(scenario.targets, scenario.matrix.size());

    InterventionSchedule schedule;
    switch (scenario.timing) {
        case Timing::start: {
            schedule.kind = InterventionSchedule::Kind::explicit_rounds;
            schedule.rounds.resize(scenario.duration);
            std::iota(schedule.rounds.begin(), schedule.rounds.end(), std::size_t{1});
            break;
        }
        case Timing::uniform: {
            const auto [lo, hi] = resolved_uniform_range(scenario);
            if (lo < 1 || hi < lo)
                throw DomainError("uniform_range must satisfy 1 <= lo <= hi");
            const std::size_t span = hi - lo + 1;
            if (scenario.duration > span)
                throw RangeTooSmall("uniform timing: cannot draw " +
                                    std::to_string(scenario.duration) + " distinct rounds from " +
                                    std::to_string(span));
            std::vector<std::size_t> pool(span);
            std::iota(pool.begin(), pool.end(), lo);
            Rng rng(scenario.seed);
            // Partial Fisher-Yates; the first `duration` slots are the sample.
            for (std::size_t i = 0; i < scenario.duration; ++i) {
                const auto j = i + static_cast<std::size_t>(rng.next_below(span - i));
                std::swap(pool[i], pool[j]);
            }
            schedule.kind = InterventionSchedule::Kind::explicit_rounds;
            schedule.rounds.assign(pool.begin(),
                                   pool.begin() + static_cast<std::ptrdiff_t>(scenario.duration));
            std::sort(schedule.rounds.begin(), schedule.rounds.end());
            break;
        }
        case Timing::consensus: {
            schedule.kind = InterventionSchedule::Kind::consensus_triggered;
            schedule.remaining = scenario.duration;
            break;
        }
    }
    return schedule;
}

SimulationTrace run_schedule(const Scenario& scenario, const InterventionSchedule& schedule) {
    require_lambda(scenario.lambda);
    const auto targets = require_targets(scenario.targets, scenario.matrix.size());
    if (!(scenario.epsilon > 0)) throw DomainError("Scenario: epsilon must be positive");

    const std::size_t n = scenario.matrix.size();
    const auto mask = target_mask(targets, n);

    SimulationTrace trace;
    OpinionVector opinions(n, 0.0);
    OpinionVector buffer(n);
    std::size_t round = 0;

    auto snapshot = [&](bool key_round) {
        if (scenario.record_full || key_round) {
            trace.snapshots.push_back(opinions);
            trace.snapshot_rounds.push_back(round);
        }
    };
    auto plain_round = [&] {
        plain_step_into(scenario.matrix, opinions, buffer);
        opinions.swap(buffer);
        ++round;
        snapshot(false);
    };
    auto intervened_round = [&] {
        intervened_step_into(scenario.matrix, mask, scenario.lambda, opinions, buffer);
        opinions.swap(buffer);
        ++round;
        trace.intervention_rounds.push_back(round);
        snapshot(true);
    };
    auto gap = [&] { return consensus_gap(opinions); };

    snapshot(true);  // round 0

    if (schedule.kind == InterventionSchedule::Kind::explicit_rounds) {
        require_explicit_rounds(schedule.rounds);
        std::size_t applicable = 0;  // rounds that fit inside the horizon
        while (applicable < schedule.rounds.size() && schedule.rounds[applicable] <= scenario.horizon)
            ++applicable;
        const bool truncated = applicable < schedule.rounds.size();

        std::size_t next = 0;
        while (round < scenario.horizon) {
            if (next == applicable && gap() <= scenario.epsilon) break;
            if (next < applicable && schedule.rounds[next] == round + 1) {
                intervened_round();
                ++next;
            } else {
                plain_round();
            }
        }
        trace.converged = !truncated && next == applicable && gap() <= scenario.epsilon;
    } else {
        bool on_schedule = true;
        for (std::size_t i = 0; i < schedule.remaining; ++i) {
            while (gap() > scenario.epsilon && round < scenario.horizon) plain_round();
            if (gap() > scenario.epsilon || round >= scenario.horizon) {
                on_schedule = false;  // budget exhausted before this intervention
                break;
            }
            intervened_round();
        }
        if (on_schedule)
            while (gap() > scenario.epsilon && round < scenario.horizon) plain_round();
        trace.converged = on_schedule && gap() <= scenario.epsilon;
    }

    trace.rounds_executed = round;
    trace.final_gap = gap();
    if (trace.snapshot_rounds.empty() || trace.snapshot_rounds.back() != round) snapshot(true);
    return trace;
}

SimulationTrace simulate(const Scenario& scenario) {
    return run_schedule(scenario, build_schedule(scenario));
}

void write_trace_csv(const SimulationTrace& trace, std::ostream& out) {
    out << "round,agent_index,opinion,intervened_flag\n";
    char buf[32];
    for (std::size_t s = 0; s < trace.snapshots.size(); ++s) {
        const std::size_t round = trace.snapshot_rounds[s];
        const bool intervened = std::binary_search(trace.intervention_rounds.begin(),
                                                   trace.intervention_rounds.end(), round);
        const auto& opinions = trace.snapshots[s];
        for (std::size_t agent = 0; agent < opinions.size(); ++agent) {
            std::snprintf(buf, sizeof(buf), "%.17g", opinions[agent]);
            out << round << ',' << agent << ',' << buf << ',' << (intervened ? 1 : 0) << '\n';
        }
    }
    if (!out) throw IoError("write_trace_csv: stream failure");
}

}  // namespace degroot
