#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "degroot/linalg.hpp"

namespace degroot {

// Recipe parameters for a random interaction matrix. The generated graph is
// strongly connected and aperiodic by construction: a directed Hamiltonian
// cycle over a shuffled agent order, extra directed edges added independently
// with probability edge_density, and a positive self-loop on every agent.
struct NetworkSpec {
    std::size_t n = 100;
    double edge_density = 0.3;   // expected fraction of the remaining directed edges
    double self_loop_min = 0.1;  // self-weights are drawn from [self_loop_min, 0.9]
    std::uint64_t seed = 0;
};

// Deterministic in the spec (including seed). The result always passes
// validate_stochastic, is_strongly_connected and is_aperiodic.
InteractionMatrix generate_interaction_matrix(const NetworkSpec& spec);

// Edge (i, j) exists iff entry (i, j) is positive.
bool is_strongly_connected(const InteractionMatrix& m);

// Whether the gcd of directed cycle lengths is 1, via BFS level offsets.
// Throws NotStronglyConnected when the precondition fails.
bool is_aperiodic(const InteractionMatrix& m);

// Plain-text exchange format: one row per line, comma-separated entries
// printed with 17 significant digits.
void write_matrix_csv(const InteractionMatrix& m, std::ostream& out);
void write_matrix_csv(const InteractionMatrix& m, const std::filesystem::path& path);
InteractionMatrix read_matrix_csv(std::istream& in, double tol = kStochasticTol);
InteractionMatrix read_matrix_csv(const std::filesystem::path& path, double tol = kStochasticTol);

}  // namespace degroot
