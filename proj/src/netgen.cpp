#include "degroot/netgen.hpp"

#include <algorithm>
#include <cstdio>
#include <charconv>
#include <fstream>
#include <numeric>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "degroot/errors.hpp"
#include "degroot/rng.hpp"

namespace degroot {

namespace {

void require_spec(const NetworkSpec& spec) {
    if (spec.n < 2) throw DomainError("NetworkSpec: n must be at least 2");
    if (!(spec.edge_density > 0.0) || !(spec.edge_density <= 1.0))
        throw DomainError("NetworkSpec: edge_density must lie in (0,1]");
    if (!(spec.self_loop_min > 0.0) || !(spec.self_loop_min < 0.9))
        throw DomainError("NetworkSpec: self_loop_min must lie in (0,0.9)");
}

// Adjacency on positive off-diagonal entries plus self-loops; i-th row of
// `adj` lists successors of i (self-loops included for the period check).
std::vector<std::vector<std::size_t>> successors(const InteractionMatrix& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (m(i, j) > 0.0) adj[i].push_back(j);
    return adj;
}

std::size_t reachable_count(const std::vector<std::vector<std::size_t>>& adj, std::size_t start) {
    std::vector<char> seen(adj.size(), 0);
    std::vector<std::size_t> stack{start};
    seen[start] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (auto v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                ++count;
                stack.push_back(v);
            }
        }
    }
    return count;
}

}  // namespace

InteractionMatrix generate_interaction_matrix(const NetworkSpec& spec) {
    require_spec(spec);
    const std::size_t n = spec.n;
    Rng rng(spec.seed);

    // Draw order is fixed: (1) cycle permutation, (2) edge coins in row-major
    // order over the remaining off-diagonal pairs, (3) self-loop weights.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<char> edge(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) edge[order[i] * n + order[(i + 1) % n]] = 1;

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || edge[i * n + j]) continue;
            if (rng.next_double() < spec.edge_density) edge[i * n + j] = 1;
        }
    }

    std::vector<double> entries(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double self = rng.uniform(spec.self_loop_min, 0.9);
        std::size_t degree = 0;
        for (std::size_t j = 0; j < n; ++j) degree += edge[i * n + j];
        const double share = (1.0 - self) / static_cast<double>(degree);
        for (std::size_t j = 0; j < n; ++j)
            if (edge[i * n + j]) entries[i * n + j] = share;
        entries[i * n + i] = self;
    }

    try {
        auto matrix = validate_stochastic(std::move(entries), n, kStochasticTol);
        if (!is_strongly_connected(matrix) || !is_aperiodic(matrix))
            throw GenerationFailure("generated matrix failed connectivity checks");
        return matrix;
    } catch (const GenerationFailure&) {
        throw;
    } catch (const Error& e) {
        throw GenerationFailure(std::string("generated matrix failed validation: ") + e.what());
    }
}

bool is_strongly_connected(const InteractionMatrix& m) {
    const std::size_t n = m.size();
    const auto adj = successors(m);
    if (reachable_count(adj, 0) != n) return false;

    std::vector<std::vector<std::size_t>> radj(n);
    for (std::size_t u = 0; u < n; ++u)
        for (auto v : adj[u]) radj[v].push_back(u);
    return reachable_count(radj, 0) == n;
}

bool is_aperiodic(const InteractionMatrix& m) {
    if (!is_strongly_connected(m))
        throw NotStronglyConnected("is_aperiodic: matrix is not strongly connected");
    const std::size_t n = m.size();
    const auto adj = successors(m);

    // BFS from node 0; the gcd of (level(u) + 1 - level(v)) over all edges
    // (u, v) is the period of a strongly connected digraph.
    std::vector<std::size_t> level(n, 0);
    std::vector<char> seen(n, 0);
    std::queue<std::size_t> queue;
    queue.push(0);
    seen[0] = 1;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop();
        for (auto v : adj[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                level[v] = level[u] + 1;
                queue.push(v);
            }
        }
    }

    std::size_t period = 0;
    for (std::size_t u = 0; u < n; ++u)
        for (auto v : adj[u]) period = std::gcd(period, level[u] + 1 - level[v]);
    return period == 1;
}

void write_matrix_csv(const InteractionMatrix& m, std::ostream& out) {
    const std::size_t n = m.size();
    char buf[32];
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw IoError("write_matrix_csv: stream failure");
}

void write_matrix_csv(const InteractionMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_matrix_csv(m, out);
}

InteractionMatrix read_matrix_csv(std::istream& in, double tol) {
    std::vector<double> entries;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::size_t count = 0;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            std::size_t next = line.find(',', pos);
            if (next == std::string::npos) next = line.size();
            double value = 0.0;
            const char* first = line.data() + pos;
            const char* last = line.data() + next;
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc() || ptr != last)
                throw IoError("read_matrix_csv: malformed entry '" +
                              line.substr(pos, next - pos) + "'");
            entries.push_back(value);
            ++count;
            pos = next + 1;
            if (next == line.size()) break;
        }
        if (rows == 0)
            cols = count;
        else if (count != cols)
            throw IoError("read_matrix_csv: ragged row " + std::to_string(rows));
        ++rows;
    }
    if (rows == 0) throw IoError("read_matrix_csv: empty input");
    if (rows != cols) throw IoError("read_matrix_csv: matrix is not square");
    return validate_stochastic(std::move(entries), rows, tol);
}

InteractionMatrix read_matrix_csv(const std::filesystem::path& path, double tol) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    return read_matrix_csv(in, tol);
}

}  // namespace degroot
