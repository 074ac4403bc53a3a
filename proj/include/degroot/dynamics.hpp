#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "degroot/linalg.hpp"

namespace degroot {

// When the external agent's rounds of participation take place.
enum class Timing { consensus, start, uniform };

std::string_view to_string(Timing timing);
std::optional<Timing> timing_from_string(std::string_view name);

// One fully specified experiment. Initial opinions are all 0 and the
// external agent holds opinion 1 throughout.
struct Scenario {
    InteractionMatrix matrix;
    std::vector<std::size_t> targets;  // 0-based agent indices, distinct
    double lambda = 0.1;               // weight targets place on the external agent
    std::size_t duration = 0;          // rounds of participation (k)
    Timing timing = Timing::consensus;
    std::size_t horizon = 3000;        // total round budget
    // Inclusive round interval sampled by uniform timing; {0, 0} resolves to
    // [1, horizon / 2].
    std::pair<std::size_t, std::size_t> uniform_range{0, 0};
    double epsilon = 1e-9;  // consensus-detection threshold on the opinion gap
    std::uint64_t seed = 0;
    bool record_full = false;  // keep a snapshot per round instead of key rounds only
};

struct InterventionSchedule {
    enum class Kind { explicit_rounds, consensus_triggered };
    Kind kind = Kind::explicit_rounds;
    std::vector<std::size_t> rounds;  // sorted, distinct, >= 1 (explicit kinds)
    std::size_t remaining = 0;        // interventions left (consensus-triggered kind)
};

struct SimulationTrace {
    // At minimum the initial, each post-intervention, and the final vector;
    // with Scenario::record_full every round is kept.
    std::vector<OpinionVector> snapshots;
    std::vector<std::size_t> snapshot_rounds;
    std::size_t rounds_executed = 0;
    std::vector<std::size_t> intervention_rounds;
    bool converged = false;
    double final_gap = 0.0;
};

struct ConsensusResult {
    OpinionVector opinions;
    std::size_t rounds = 0;
    bool converged = false;
};

// Builds the extended interaction matrix for the given target set.
ExtendedMatrix extend_matrix(const InteractionMatrix& matrix,
                             const std::vector<std::size_t>& targets, double lambda);

// Plain averaging round (alias of mat_vec, named for trace labeling).
OpinionVector step_plain(const InteractionMatrix& matrix, const OpinionVector& opinions);

// One round with the external agent present: (T - lambda*(T)_m) p + Lambda,
// with the external opinion fixed at 1. Matches the extended-matrix product
// restricted to the first n entries.
OpinionVector step_intervened(const InteractionMatrix& matrix,
                              const std::vector<std::size_t>& targets, double lambda,
                              const OpinionVector& opinions);

// Full-coverage round: (1 - lambda) T p + (lambda, ..., lambda).
OpinionVector step_full_coverage(const InteractionMatrix& matrix, double lambda,
                                 const OpinionVector& opinions);

// Plain rounds until the opinion gap drops to epsilon or the budget runs out.
ConsensusResult run_to_consensus(const InteractionMatrix& matrix, OpinionVector opinions,
                                 double epsilon, std::size_t max_rounds);

// Resolves the scenario's timing option into concrete events. Uniform timing
// samples `duration` distinct rounds from the configured range, deterministic
// in the scenario seed.
InterventionSchedule build_schedule(const Scenario& scenario);

// Runs a scenario against an already resolved schedule.
SimulationTrace run_schedule(const Scenario& scenario, const InterventionSchedule& schedule);

// build_schedule + run_schedule.
SimulationTrace simulate(const Scenario& scenario);

std::pair<std::size_t, std::size_t> resolved_uniform_range(const Scenario& scenario);

// Long format: round, agent_index, opinion, intervened_flag.
void write_trace_csv(const SimulationTrace& trace, std::ostream& out);

}  // namespace degroot
