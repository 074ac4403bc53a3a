#include "degroot/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <ostream>
#include <string_view>
#include <thread>

#include "degroot/analytics.hpp"
#include "degroot/errors.hpp"
#include "degroot/rng.hpp"

namespace degroot {

namespace {

// Stream tags for derive_seed; part of the documented seeding scheme.
constexpr std::uint64_t kNetworkStream = 1;
constexpr std::uint64_t kTargetStream = 2;
constexpr std::uint64_t kScheduleStream = 3;

constexpr std::string_view kCsvHeader =
    "timing,swept_value,mean_influence,std_dev,replications,nonconverged";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(std::string_view text) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw IoError("malformed number '" + std::string(text) + "'");
    return value;
}

std::size_t parse_size(std::string_view text) {
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw IoError("malformed count '" + std::string(text) + "'");
    return value;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        parts.push_back(line.substr(pos, next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return parts;
}

struct Cell {
    std::size_t timing_idx = 0;
    std::size_t value_idx = 0;
    double value = 0.0;
    std::size_t duration = 0;
    double lambda = 0.5;
    std::size_t m = 0;
};

struct RepResult {
    double influence = 0.0;
    bool converged = false;
};

std::vector<Timing> canonical_timings(const std::vector<Timing>& timings) {
    std::vector<Timing> out;
    for (Timing t : {Timing::consensus, Timing::start, Timing::uniform})
        if (std::find(timings.begin(), timings.end(), t) != timings.end()) out.push_back(t);
    return out;
}

std::vector<double> resolved_values(const SweepConfig& config) {
    return config.values.empty() ? default_sweep_values(config.factor) : config.values;
}

void validate_config(const SweepConfig& config, const std::vector<double>& values,
                     const std::vector<Timing>& timings) {
    if (config.network.n < 2) throw ConfigError("sweep: network size must be at least 2");
    if (config.replications == 0) throw ConfigError("sweep: at least one replication required");
    if (config.horizon == 0) throw ConfigError("sweep: horizon must be positive");
    if (!(config.epsilon > 0)) throw ConfigError("sweep: epsilon must be positive");
    if (values.empty()) throw ConfigError("sweep: no swept values");
    if (timings.empty()) throw ConfigError("sweep: no timing options");
    if (!(config.held_lambda > 0.0) || !(config.held_lambda < 1.0))
        throw ConfigError("sweep: held intensity must lie in (0,1)");
    if (config.held_coverage < 0.0 || config.held_coverage > 1.0)
        throw ConfigError("sweep: held coverage must lie in [0,1]");
    for (double v : values) {
        switch (config.factor) {
            case SweptFactor::duration:
                if (v < 0.0 || v != std::floor(v))
                    throw ConfigError("sweep: duration values must be integers >= 0");
                break;
            case SweptFactor::coverage:
                if (v < 0.0 || v > 1.0)
                    throw ConfigError("sweep: coverage values must lie in [0,1]");
                break;
            case SweptFactor::intensity:
                if (v < 0.0 || v >= 1.0)
                    throw ConfigError("sweep: intensity values must lie in [0,1)");
                break;
        }
    }
}

Cell make_cell(const SweepConfig& config, std::size_t timing_idx, std::size_t value_idx,
               double value) {
    double coverage = config.held_coverage;
    double lambda = config.held_lambda;
    std::size_t duration = config.held_duration;
    switch (config.factor) {
        case SweptFactor::duration:
            duration = static_cast<std::size_t>(std::llround(value));
            break;
        case SweptFactor::coverage: coverage = value; break;
        case SweptFactor::intensity: lambda = value; break;
    }
    Cell cell{timing_idx, value_idx, value, duration, lambda, 0};
    const auto n = config.network.n;
    cell.m = std::min<std::size_t>(
        n, static_cast<std::size_t>(std::llround(coverage * static_cast<double>(n))));
    if (lambda <= 0.0 || cell.m == 0) {
        // Zero intensity or zero coverage: no effective intervention.
        cell.duration = 0;
        cell.lambda = 0.5;
    }
    return cell;
}

void run_replication(const SweepConfig& config, const std::vector<Cell>& cells,
                     const std::vector<Timing>& timings, std::size_t rep, RepResult* out) {
    NetworkSpec net = config.network;
    net.seed = derive_seed(config.base_seed, kNetworkStream, rep);
    const auto matrix = generate_interaction_matrix(net);
    const std::size_t n = matrix.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    if (config.target_selection == TargetSelection::random) {
        Rng rng(derive_seed(config.base_seed, kTargetStream, rep));
        rng.shuffle(order);
    } else {
        const auto influence = social_influence_vector(matrix);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return influence[a] > influence[b]; });
    }

    Scenario scenario{.matrix = matrix};
    scenario.horizon = config.horizon;
    scenario.epsilon = config.epsilon;
    scenario.record_full = false;

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        scenario.targets.assign(order.begin(),
                                order.begin() + static_cast<std::ptrdiff_t>(cell.m));
        std::sort(scenario.targets.begin(), scenario.targets.end());
        scenario.lambda = cell.lambda;
        scenario.duration = cell.duration;
        scenario.timing = timings[cell.timing_idx];
        scenario.seed = derive_seed(config.base_seed, kScheduleStream, rep, cell.value_idx);

        const auto trace = simulate(scenario);
        const auto& last = trace.snapshots.back();
        const double mean =
            std::accumulate(last.begin(), last.end(), 0.0) / static_cast<double>(last.size());
        out[ci] = {mean, trace.converged};
    }
}

const ReportRow* find_row(const ReportTable& table, Timing timing, double value) {
    for (const auto& row : table.rows)
        if (row.timing == timing && row.swept_value == value) return &row;
    return nullptr;
}

}  // namespace

std::string_view to_string(SweptFactor factor) {
    switch (factor) {
        case SweptFactor::duration: return "duration";
        case SweptFactor::coverage: return "coverage";
        case SweptFactor::intensity: return "intensity";
    }
    return "unknown";
}

std::optional<SweptFactor> factor_from_string(std::string_view name) {
    if (name == "duration") return SweptFactor::duration;
    if (name == "coverage") return SweptFactor::coverage;
    if (name == "intensity") return SweptFactor::intensity;
    return std::nullopt;
}

std::string_view to_string(TargetSelection selection) {
    switch (selection) {
        case TargetSelection::random: return "random";
        case TargetSelection::top_influence: return "top_influence";
    }
    return "unknown";
}

std::optional<TargetSelection> selection_from_string(std::string_view name) {
    if (name == "random") return TargetSelection::random;
    if (name == "top_influence") return TargetSelection::top_influence;
    return std::nullopt;
}

std::vector<double> default_sweep_values(SweptFactor factor) {
    std::vector<double> values;
    if (factor == SweptFactor::duration) {
        for (int k = 0; k <= 45; ++k) values.push_back(k);
    } else {
        for (int i = 0; i <= 9; ++i) values.push_back(static_cast<double>(i) / 10.0);
    }
    return values;
}

std::string canonical_config_string(const SweepConfig& config) {
    const auto values = resolved_values(config);
    const auto timings = canonical_timings(config.timings);
    std::string out;
    out += "factor=" + std::string(to_string(config.factor));
    out += ";values=";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fmt(values[i]);
    }
    out += ";n=" + std::to_string(config.network.n);
    out += ";edge_density=" + fmt(config.network.edge_density);
    out += ";self_loop_min=" + fmt(config.network.self_loop_min);
    out += ";replications=" + std::to_string(config.replications);
    out += ";horizon=" + std::to_string(config.horizon);
    out += ";held_lambda=" + fmt(config.held_lambda);
    out += ";held_coverage=" + fmt(config.held_coverage);
    out += ";held_duration=" + std::to_string(config.held_duration);
    out += ";timings=";
    for (std::size_t i = 0; i < timings.size(); ++i) {
        if (i) out += ',';
        out += std::string(to_string(timings[i]));
    }
    out += ";target_selection=" + std::string(to_string(config.target_selection));
    out += ";base_seed=" + std::to_string(config.base_seed);
    out += ";epsilon=" + fmt(config.epsilon);
    return out;
}

std::uint64_t config_hash(const SweepConfig& config) {
    const std::string text = canonical_config_string(config);
    std::uint64_t hash = 1469598103934665603ULL;  // FNV-1a 64
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ULL;
    }
    return hash;
}

ReportTable run_sweep(const SweepConfig& config) {
    const auto values = resolved_values(config);
    const auto timings = canonical_timings(config.timings);
    validate_config(config, values, timings);

    std::vector<Cell> cells;
    cells.reserve(timings.size() * values.size());
    for (std::size_t ti = 0; ti < timings.size(); ++ti)
        for (std::size_t vi = 0; vi < values.size(); ++vi)
            cells.push_back(make_cell(config, ti, vi, values[vi]));

    const std::size_t reps = config.replications;
    std::vector<RepResult> results(reps * cells.size());

    std::size_t width =
        config.workers ? config.workers
                       : std::max<std::size_t>(1, std::thread::hardware_concurrency());
    width = std::min(width, reps);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t rep = next.fetch_add(1); rep < reps; rep = next.fetch_add(1))
                run_replication(config, cells, timings, rep,
                                results.data() + rep * cells.size());
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    if (width <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(width);
        for (std::size_t i = 0; i < width; ++i) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }
    if (failure) std::rethrow_exception(failure);

    // Deterministic fold in (timing, value, replication) order.
    ReportTable table;
    table.config_hash = config_hash(config);
    table.base_seed = config.base_seed;
    table.rows.reserve(cells.size());
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        double sum = 0.0;
        std::size_t nonconverged = 0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const auto& r = results[rep * cells.size() + ci];
            sum += r.influence;
            if (!r.converged) ++nonconverged;
        }
        const double mean = sum / static_cast<double>(reps);
        double sq = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const double d = results[rep * cells.size() + ci].influence - mean;
            sq += d * d;
        }
        const double std_dev =
            reps > 1 ? std::sqrt(sq / static_cast<double>(reps - 1)) : 0.0;
        table.rows.push_back(
            {timings[cell.timing_idx], cell.value, mean, std_dev, reps, nonconverged});
    }
    return table;
}

TimingComparison compare_timing_options(const ReportTable& table) {
    std::vector<Timing> present;
    for (const auto& row : table.rows)
        if (std::find(present.begin(), present.end(), row.timing) == present.end())
            present.push_back(row.timing);
    if (present.size() < 2)
        throw InsufficientData("compare_timing_options: need at least two timing options");

    std::vector<double> values;
    for (const auto& row : table.rows)
        if (std::find(values.begin(), values.end(), row.swept_value) == values.end())
            values.push_back(row.swept_value);

    TimingComparison comparison;
    for (double value : values) {
        TimingComparisonRow out;
        out.swept_value = value;
        if (const auto* row = find_row(table, Timing::consensus, value))
            out.consensus_mean = row->mean_influence;
        if (const auto* row = find_row(table, Timing::start, value))
            out.start_mean = row->mean_influence;
        if (const auto* row = find_row(table, Timing::uniform, value))
            out.uniform_mean = row->mean_influence;

        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        for (double m : {out.consensus_mean, out.start_mean, out.uniform_mean}) {
            if (std::isnan(m)) continue;
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
        out.spread = hi - lo;

        if (!std::isnan(out.consensus_mean) && !std::isnan(out.start_mean))
            out.consensus_start_gap = out.consensus_mean - out.start_mean;
        if (!std::isnan(out.consensus_mean) && !std::isnan(out.uniform_mean))
            out.consensus_uniform_gap = out.consensus_mean - out.uniform_mean;

        // Mean differences below the consensus-detection resolution are ties,
        // not ordering violations.
        constexpr double tie = 1e-8;
        out.ordering_ok = true;
        if (!std::isnan(out.consensus_start_gap) && out.consensus_start_gap < -tie)
            out.ordering_ok = false;
        if (!std::isnan(out.consensus_uniform_gap) && out.consensus_uniform_gap < -tie)
            out.ordering_ok = false;
        if (!std::isnan(out.uniform_mean) && !std::isnan(out.start_mean) &&
            out.uniform_mean < out.start_mean - tie)
            out.ordering_ok = false;
        if (!out.ordering_ok) ++comparison.ordering_violations;
        comparison.rows.push_back(out);
    }
    return comparison;
}

void emit_csv(const ReportTable& table, std::ostream& out) {
    char hash[32];
    std::snprintf(hash, sizeof(hash), "%016llx",
                  static_cast<unsigned long long>(table.config_hash));
    out << "# config_hash=" << hash << '\n';
    out << "# base_seed=" << table.base_seed << '\n';
    out << kCsvHeader << '\n';
    for (const auto& row : table.rows) {
        out << to_string(row.timing) << ',' << fmt(row.swept_value) << ','
            << fmt(row.mean_influence) << ',' << fmt(row.std_dev) << ',' << row.replications
            << ',' << row.nonconverged << '\n';
    }
    if (!out) throw IoError("emit_csv: stream failure");
}

void emit_csv(const ReportTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    emit_csv(table, out);
}

ReportTable read_report_csv(std::istream& in) {
    ReportTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const std::string_view view(line);
            if (const auto pos = view.find("config_hash="); pos != std::string_view::npos) {
                const auto hex = view.substr(pos + 12);
                std::uint64_t hash = 0;
                const auto [ptr, ec] =
                    std::from_chars(hex.data(), hex.data() + hex.size(), hash, 16);
                if (ec != std::errc()) throw IoError("read_report_csv: bad config_hash");
                table.config_hash = hash;
            } else if (const auto spos = view.find("base_seed="); spos != std::string_view::npos) {
                table.base_seed = parse_size(view.substr(spos + 10));
            }
            continue;
        }
        if (!header_seen) {
            if (line != kCsvHeader) throw IoError("read_report_csv: unexpected header");
            header_seen = true;
            continue;
        }
        const auto fields = split(line, ',');
        if (fields.size() != 6) throw IoError("read_report_csv: expected 6 columns");
        const auto timing = timing_from_string(fields[0]);
        if (!timing) throw IoError("read_report_csv: unknown timing '" + std::string(fields[0]) + "'");
        ReportRow row;
        row.timing = *timing;
        row.swept_value = parse_double(fields[1]);
        row.mean_influence = parse_double(fields[2]);
        row.std_dev = parse_double(fields[3]);
        row.replications = parse_size(fields[4]);
        row.nonconverged = parse_size(fields[5]);
        table.rows.push_back(row);
    }
    if (!header_seen) throw IoError("read_report_csv: missing header row");
    return table;
}

ReportTable read_report_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string() + " for reading");
    return read_report_csv(in);
}

void emit_plot_data(const ReportTable& table, std::ostream& out) {
    for (Timing timing : {Timing::consensus, Timing::start, Timing::uniform}) {
        bool any = false;
        for (const auto& row : table.rows) {
            if (row.timing != timing) continue;
            if (!any) {
                out << "# series: " << to_string(timing) << '\n';
                out << "# columns: swept_value mean_influence std_dev\n";
                any = true;
            }
            out << fmt(row.swept_value) << ' ' << fmt(row.mean_influence) << ' '
                << fmt(row.std_dev) << '\n';
        }
        if (any) out << '\n';
    }
    if (!out) throw IoError("emit_plot_data: stream failure");
}

void emit_plot_data(const ReportTable& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    emit_plot_data(table, out);
}

void emit_plot_svg(const ReportTable& table, std::ostream& out, const std::string& x_label) {
    constexpr double width = 720, height = 480;
    constexpr double left = 70, right = 580, top = 30, bottom = 430;

    double x_min = std::numeric_limits<double>::infinity();
    double x_max = -x_min;
    double y_max = 0.0;
    for (const auto& row : table.rows) {
        x_min = std::min(x_min, row.swept_value);
        x_max = std::max(x_max, row.swept_value);
        y_max = std::max(y_max, row.mean_influence + row.std_dev);
    }
    if (table.rows.empty()) {
        x_min = 0;
        x_max = 1;
    }
    if (x_min == x_max) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    y_max = std::max(y_max * 1.05, 1e-9);

    auto px = [&](double v) { return left + (v - x_min) / (x_max - x_min) * (right - left); };
    auto py = [&](double v) { return bottom - v / y_max * (bottom - top); };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double xv = x_min + (x_max - x_min) * i / 5.0;
        const double yv = y_max * i / 5.0;
        out << "<line x1=\"" << num(px(xv)) << "\" y1=\"" << bottom << "\" x2=\"" << num(px(xv))
            << "\" y2=\"" << bottom + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << num(px(xv)) << "\" y=\"" << bottom + 20
            << "\" font-size=\"11\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
        out << "<line x1=\"" << left - 5 << "\" y1=\"" << num(py(yv)) << "\" x2=\"" << left
            << "\" y2=\"" << num(py(yv)) << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << num(py(yv) + 4)
            << "\" font-size=\"11\" text-anchor=\"end\">" << num(yv) << "</text>\n";
    }
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << height - 12
        << "\" font-size=\"13\" text-anchor=\"middle\">" << x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << (top + bottom) / 2
        << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
        << (top + bottom) / 2 << ")\">average social influence</text>\n";

    const struct {
        Timing timing;
        const char* color;
    } series[] = {{Timing::consensus, "#1f77b4"},
                  {Timing::start, "#d62728"},
                  {Timing::uniform, "#2ca02c"}};
    double legend_y = top + 10;
    for (const auto& s : series) {
        std::string points;
        for (const auto& row : table.rows) {
            if (row.timing != s.timing) continue;
            if (!points.empty()) points += ' ';
            points += num(px(row.swept_value)) + "," + num(py(row.mean_influence));
        }
        if (points.empty()) continue;
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"" << points << "\"/>\n";
        for (const auto& row : table.rows) {
            if (row.timing != s.timing) continue;
            out << "<circle cx=\"" << num(px(row.swept_value)) << "\" cy=\""
                << num(py(row.mean_influence)) << "\" r=\"2\" fill=\"" << s.color << "\"/>\n";
        }
        out << "<line x1=\"" << right + 14 << "\" y1=\"" << legend_y << "\" x2=\"" << right + 38
            << "\" y2=\"" << legend_y << "\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\"/>\n";
        out << "<text x=\"" << right + 44 << "\" y=\"" << legend_y + 4
            << "\" font-size=\"12\">" << to_string(s.timing) << "</text>\n";
        legend_y += 18;
    }
    out << "</svg>\n";
    if (!out) throw IoError("emit_plot_svg: stream failure");
}

void emit_plot_svg(const ReportTable& table, const std::filesystem::path& path,
                   const std::string& x_label) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    emit_plot_svg(table, out, x_label);
}

}  // namespace degroot
