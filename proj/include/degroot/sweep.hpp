#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "degroot/dynamics.hpp"
#include "degroot/netgen.hpp"

namespace degroot {

enum class SweptFactor { duration, coverage, intensity };
enum class TargetSelection { random, top_influence };

std::string_view to_string(SweptFactor factor);
std::optional<SweptFactor> factor_from_string(std::string_view name);
std::string_view to_string(TargetSelection selection);
std::optional<TargetSelection> selection_from_string(std::string_view name);

// One batch experiment: sweep one factor over `values` while holding the
// other two at the held_* settings, for every timing option, averaging over
// replications. Replication r of any cell draws its network, targets, and
// schedule from seeds derived from (base_seed, stream, r), so cells can be
// replayed in isolation.
struct SweepConfig {
    NetworkSpec network{};  // network.seed is ignored; per-replication seeds derive from base_seed
    std::size_t replications = 1000;
    std::size_t horizon = 3000;
    SweptFactor factor = SweptFactor::duration;
    std::vector<double> values;  // empty: the factor's default grid
    double held_lambda = 0.1;
    double held_coverage = 0.3;
    std::size_t held_duration = 10;
    std::vector<Timing> timings = {Timing::consensus, Timing::start, Timing::uniform};
    TargetSelection target_selection = TargetSelection::random;
    std::uint64_t base_seed = 20240501;
    double epsilon = 1e-9;
    std::size_t workers = 0;  // 0: hardware concurrency; has no effect on results
};

// Duration: 0..45 step 1. Coverage and intensity: 0..0.9 step 0.1.
std::vector<double> default_sweep_values(SweptFactor factor);

struct ReportRow {
    Timing timing = Timing::consensus;
    double swept_value = 0.0;
    double mean_influence = 0.0;
    double std_dev = 0.0;
    std::size_t replications = 0;
    std::size_t nonconverged = 0;  // replications that exhausted the horizon
};

struct ReportTable {
    std::vector<ReportRow> rows;  // full cartesian product, timing-major
    std::uint64_t config_hash = 0;
    std::uint64_t base_seed = 0;
};

// Canonical serialization of everything that affects results (the worker
// count is excluded), FNV-1a hashed for the provenance header.
std::string canonical_config_string(const SweepConfig& config);
std::uint64_t config_hash(const SweepConfig& config);

ReportTable run_sweep(const SweepConfig& config);

// Per-value comparison of the timing options' mean influences. Slots for
// absent timing options hold NaN.
struct TimingComparisonRow {
    double swept_value = 0.0;
    double consensus_mean = std::numeric_limits<double>::quiet_NaN();
    double start_mean = std::numeric_limits<double>::quiet_NaN();
    double uniform_mean = std::numeric_limits<double>::quiet_NaN();
    double consensus_start_gap = std::numeric_limits<double>::quiet_NaN();
    double consensus_uniform_gap = std::numeric_limits<double>::quiet_NaN();
    double spread = 0.0;      // max mean - min mean over present options
    bool ordering_ok = true;  // consensus >= uniform >= start among present options
};

struct TimingComparison {
    std::vector<TimingComparisonRow> rows;
    std::size_t ordering_violations = 0;
};

// Requires at least two timing options in the table (InsufficientData).
TimingComparison compare_timing_options(const ReportTable& table);

// CSV with a '#' provenance header; floats carry 17 significant digits so a
// read round-trips losslessly. Output is byte-stable for equal configs.
void emit_csv(const ReportTable& table, std::ostream& out);
void emit_csv(const ReportTable& table, const std::filesystem::path& path);
ReportTable read_report_csv(std::istream& in);
ReportTable read_report_csv(const std::filesystem::path& path);

// Plain columnar series (swept_value, mean, std_dev), one block per timing
// option in the fixed order consensus, start, uniform.
void emit_plot_data(const ReportTable& table, std::ostream& out);
void emit_plot_data(const ReportTable& table, const std::filesystem::path& path);

// Simple SVG line chart of the same series.
void emit_plot_svg(const ReportTable& table, std::ostream& out,
                   const std::string& x_label = "swept value");
void emit_plot_svg(const ReportTable& table, const std::filesystem::path& path,
                   const std::string& x_label = "swept value");

}  // namespace degroot
