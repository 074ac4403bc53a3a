#include "degroot/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "degroot/errors.hpp"

namespace degroot {

InteractionMatrix validate_stochastic(std::vector<double> entries, std::size_t n, double tol) {
    if (n == 0) throw DomainError("validate_stochastic: empty matrix");
    if (!(tol > 0)) throw DomainError("validate_stochastic: tol must be positive");
    if (entries.size() != n * n)
        throw DimensionMismatch("validate_stochastic: expected " + std::to_string(n * n) +
                                " entries, got " + std::to_string(entries.size()));
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double w = entries[i * n + j];
            if (w < 0.0)
                throw NegativeEntry("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                    ") is negative: " + std::to_string(w));
            sum += w;
        }
        if (std::abs(sum - 1.0) > tol)
            throw RowSumViolation("row " + std::to_string(i) +
                                  " sums to " + std::to_string(sum));
    }
    return InteractionMatrix(std::move(entries), n);
}

InteractionMatrix validate_stochastic(const std::vector<std::vector<double>>& rows, double tol) {
    const std::size_t n = rows.size();
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : rows) {
        if (row.size() != n)
            throw DimensionMismatch("validate_stochastic: matrix is not square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return validate_stochastic(std::move(flat), n, tol);
}

void require_lambda(double lambda) {
    if (!(lambda > 0.0) || !(lambda < 1.0))
        throw InvalidLambda("lambda must lie in (0,1), got " + std::to_string(lambda));
}

std::vector<std::size_t> require_targets(std::vector<std::size_t> targets, std::size_t n) {
    std::sort(targets.begin(), targets.end());
    if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
        throw InvalidTargets("duplicate target index");
    if (!targets.empty() && targets.back() >= n)
        throw InvalidTargets("target index " + std::to_string(targets.back()) +
                             " out of range for n=" + std::to_string(n));
    return targets;
}

ExtendedMatrix::ExtendedMatrix(InteractionMatrix base, std::vector<std::size_t> targets,
                               double lambda)
    : base_(std::move(base)),
      targets_(require_targets(std::move(targets), base_.size())),
      lambda_(lambda) {
    require_lambda(lambda_);
    const std::size_t n = base_.size();
    const std::size_t ext = n + 1;
    entries_.assign(ext * ext, 0.0);

    std::vector<char> is_target(n, 0);
    for (auto t : targets_) is_target[t] = 1;

    const double keep = 1.0 - lambda_;
    for (std::size_t i = 0; i < n; ++i) {
        double* out = entries_.data() + i * ext;
        if (is_target[i]) {
            for (std::size_t j = 0; j < n; ++j) out[j] = keep * base_(i, j);
            out[n] = lambda_;
        } else {
            for (std::size_t j = 0; j < n; ++j) out[j] = base_(i, j);
            out[n] = 0.0;
        }
    }
    entries_[n * ext + n] = 1.0;  // the external agent is stubborn
}

InteractionMatrix ExtendedMatrix::as_matrix() const {
    return validate_stochastic(entries_, size(), kStochasticTol);
}

std::vector<double> ExtendedMatrix::canonical_entries() const {
    const std::size_t n = base_.size();
    const std::size_t ext = n + 1;
    std::vector<std::size_t> perm;  // canonical position -> natural index
    perm.reserve(ext);
    perm.insert(perm.end(), targets_.begin(), targets_.end());
    std::vector<char> is_target(n, 0);
    for (auto t : targets_) is_target[t] = 1;
    for (std::size_t i = 0; i < n; ++i)
        if (!is_target[i]) perm.push_back(i);
    perm.push_back(n);

    std::vector<double> out(ext * ext);
    for (std::size_t a = 0; a < ext; ++a)
        for (std::size_t b = 0; b < ext; ++b) out[a * ext + b] = (*this)(perm[a], perm[b]);
    return out;
}

OpinionVector mat_vec(const InteractionMatrix& m, const OpinionVector& v) {
    const std::size_t n = m.size();
    if (v.size() != n)
        throw DimensionMismatch("mat_vec: matrix of size " + std::to_string(n) +
                                " applied to vector of size " + std::to_string(v.size()));
    OpinionVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = m.entries().data() + i * n;
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
    return out;
}

double consensus_gap(const OpinionVector& v) {
    if (v.empty()) throw EmptyVector("consensus_gap: empty opinion vector");
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

}  // namespace degroot
