#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace degroot {

inline constexpr double kStochasticTol = 1e-12;

// Opinions are plain reals, one per permanent agent.
using OpinionVector = std::vector<double>;

// Row-stochastic n x n weight matrix; entry (i, j) is the weight agent i
// places on agent j. Only validate_stochastic() constructs one, so every
// instance satisfies the stochasticity invariants.
class InteractionMatrix {
public:
    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * n_, n_}; }
    const std::vector<double>& entries() const { return entries_; }

private:
    friend InteractionMatrix validate_stochastic(std::vector<double> entries, std::size_t n,
                                                 double tol);

    InteractionMatrix(std::vector<double> entries, std::size_t n)
        : entries_(std::move(entries)), n_(n) {}

    std::vector<double> entries_;
    std::size_t n_ = 0;
};

// Validates a square array as row-stochastic: all entries non-negative
// (NegativeEntry) and every row summing to 1 within tol (RowSumViolation).
InteractionMatrix validate_stochastic(std::vector<double> entries, std::size_t n,
                                      double tol = kStochasticTol);
InteractionMatrix validate_stochastic(const std::vector<std::vector<double>>& rows,
                                      double tol = kStochasticTol);

// (n+1) x (n+1) matrix embedding a base matrix plus one stubborn external
// agent in the last row and column. Rows of targeted agents are scaled by
// (1 - lambda) and place lambda on the external column; all other agent rows
// are copied with 0 there; the external row is (0, ..., 0, 1). Agents keep
// their natural order; canonical_entries() applies the targets-first
// permutation under which the block structure is stated.
class ExtendedMatrix {
public:
    ExtendedMatrix(InteractionMatrix base, std::vector<std::size_t> targets, double lambda);

    std::size_t base_size() const { return base_.size(); }
    std::size_t size() const { return base_.size() + 1; }
    double lambda() const { return lambda_; }
    const std::vector<std::size_t>& targets() const { return targets_; }
    const InteractionMatrix& base() const { return base_; }

    double operator()(std::size_t i, std::size_t j) const { return entries_[i * size() + j]; }
    const std::vector<double>& entries() const { return entries_; }

    // Same matrix revalidated as a plain row-stochastic matrix.
    InteractionMatrix as_matrix() const;

    // Entries reordered so targets occupy the leading rows/columns (targets
    // ascending, then the remaining agents ascending, then the external row).
    std::vector<double> canonical_entries() const;

private:
    InteractionMatrix base_;
    std::vector<std::size_t> targets_;  // sorted, distinct
    double lambda_;
    std::vector<double> entries_;  // (n+1) x (n+1), row-major, natural order
};

// One synchronous averaging round: result_i = sum_j M(i,j) v_j.
OpinionVector mat_vec(const InteractionMatrix& m, const OpinionVector& v);

// max_i v_i - min_i v_i; zero exactly at consensus.
double consensus_gap(const OpinionVector& v);

// Shared validation helpers.
void require_lambda(double lambda);  // throws InvalidLambda unless 0 < lambda < 1
// Throws InvalidTargets unless all indices are < n and distinct; returns the
// sorted copy used everywhere downstream.
std::vector<std::size_t> require_targets(std::vector<std::size_t> targets, std::size_t n);

}  // namespace degroot
