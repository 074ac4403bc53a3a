// Command-line front end: network generation, one-shot influence reports,
// batch sweeps over the duration/coverage/intensity factors, and the
// analytical self-checks.

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numeric>
#include <string>
#include <vector>

#include "degroot/analytics.hpp"
#include "degroot/checks.hpp"
#include "degroot/errors.hpp"
#include "degroot/netgen.hpp"
#include "degroot/rng.hpp"
#include "degroot/sweep.hpp"

namespace {

using namespace degroot;

int run_gen_network(const NetworkSpec& spec, const std::string& out) {
    const auto matrix = generate_interaction_matrix(spec);
    if (out.empty() || out == "-")
        write_matrix_csv(matrix, std::cout);
    else
        write_matrix_csv(matrix, std::filesystem::path(out));
    return 0;
}

struct InfluenceArgs {
    std::string matrix_path;
    std::vector<std::size_t> targets;
    double coverage = -1.0;
    std::string selection = "random";
    double lambda = 0.1;
    std::size_t duration = 10;
    std::string timing = "consensus";
    std::size_t horizon = 3000;
    double epsilon = 1e-9;
    std::uint64_t seed = 0;
    std::string trace_path;
};

int run_influence(const InfluenceArgs& args) {
    const auto matrix = read_matrix_csv(std::filesystem::path(args.matrix_path), 1e-9);
    const std::size_t n = matrix.size();

    std::vector<std::size_t> targets = args.targets;
    if (targets.empty() && args.coverage >= 0.0) {
        const auto m = std::min<std::size_t>(
            n, static_cast<std::size_t>(std::llround(args.coverage * static_cast<double>(n))));
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        if (*selection_from_string(args.selection) == TargetSelection::random) {
            Rng rng(derive_seed(args.seed, 2, 0));
            rng.shuffle(order);
        } else {
            const auto influence = social_influence_vector(matrix);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return influence[a] > influence[b];
            });
        }
        targets.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
        std::sort(targets.begin(), targets.end());
    }

    Scenario scenario{.matrix = matrix, .targets = targets};
    scenario.lambda = args.lambda;
    scenario.duration = args.duration;
    scenario.timing = *timing_from_string(args.timing);
    scenario.horizon = args.horizon;
    scenario.epsilon = args.epsilon;
    scenario.seed = derive_seed(args.seed, 3, 0, 0);
    scenario.record_full = !args.trace_path.empty();

    const auto trace = simulate(scenario);
    if (!args.trace_path.empty()) {
        std::ofstream out(args.trace_path);
        if (!out) throw IoError("cannot open " + args.trace_path + " for writing");
        write_trace_csv(trace, out);
    }
    if (!trace.converged) {
        std::cerr << "error: no consensus within " << scenario.horizon << " rounds (final gap "
                  << trace.final_gap << ")\n";
        return 3;
    }
    std::cout << to_key_value(report_influence(scenario, trace));
    return 0;
}

struct SweepArgs {
    SweepConfig config;
    std::string factor = "duration";
    std::vector<std::string> timings{"consensus", "start", "uniform"};
    std::string selection = "random";
    std::string out = "sweep.csv";
    std::string plot_data;
    std::string svg;
};

int run_sweep_command(SweepArgs& args) {
    args.config.factor = *factor_from_string(args.factor);
    args.config.target_selection = *selection_from_string(args.selection);
    args.config.timings.clear();
    for (const auto& name : args.timings)
        args.config.timings.push_back(*timing_from_string(name));

    const auto table = run_sweep(args.config);
    emit_csv(table, std::filesystem::path(args.out));
    if (!args.plot_data.empty()) emit_plot_data(table, std::filesystem::path(args.plot_data));
    if (!args.svg.empty()) emit_plot_svg(table, std::filesystem::path(args.svg), args.factor);

    std::cout << "wrote " << table.rows.size() << " rows to " << args.out << '\n';
    if (args.config.timings.size() >= 2) {
        const auto comparison = compare_timing_options(table);
        double max_gap = 0.0;
        for (const auto& row : comparison.rows)
            if (!std::isnan(row.consensus_start_gap))
                max_gap = std::max(max_gap, row.consensus_start_gap);
        std::cout << "timing ordering violations: " << comparison.ordering_violations << " of "
                  << comparison.rows.size()
                  << " swept values; max consensus-start gap: " << max_gap << '\n';
    }
    return 0;
}

int run_verify(std::uint64_t seed) {
    const CheckResult results[] = {
        check_consensus_prediction(50, 10, 1e-6, derive_seed(seed, 11)),
        check_scaling_identity(1000, 1e-12, derive_seed(seed, 12)),
        check_coverage_duration_dominance(),
        check_full_coverage_timing(20, 10, 5, 0.3, 200, 1e-8, 1e-6, derive_seed(seed, 13)),
    };
    int failures = 0;
    for (const auto& result : results) {
        std::cout << (result.passed ? "PASS " : "FAIL ") << result.name << ": " << result.detail
                  << '\n';
        if (!result.passed) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"DeGroot opinion formation with a temporary external influencer"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read options from a key=value file (CLI flags win)");

    int exit_code = 0;

    NetworkSpec gen_spec;
    std::string gen_out;
    auto* gen = app.add_subcommand("gen-network", "Generate an interaction matrix as CSV");
    gen->add_option("--n", gen_spec.n, "Number of agents")->capture_default_str();
    gen->add_option("--density", gen_spec.edge_density, "Directed edge density in (0,1]")
        ->capture_default_str();
    gen->add_option("--self-loop-min", gen_spec.self_loop_min,
                    "Lower bound of the self-weight draw")
        ->capture_default_str();
    gen->add_option("--seed", gen_spec.seed, "Generator seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output path ('-' for stdout)");
    gen->callback([&] { exit_code = run_gen_network(gen_spec, gen_out); });

    InfluenceArgs inf;
    auto* influence = app.add_subcommand(
        "influence", "Simulate one scenario and report measured vs predicted influence");
    influence->add_option("--matrix", inf.matrix_path, "Interaction matrix CSV")->required();
    influence->add_option("--targets", inf.targets, "0-based target agent indices")
        ->delimiter(',');
    influence->add_option("--coverage", inf.coverage,
                          "Target fraction in [0,1]; used when --targets is absent");
    influence->add_option("--target-selection", inf.selection, "random or top_influence")
        ->check(CLI::IsMember({"random", "top_influence"}))
        ->capture_default_str();
    influence->add_option("--lambda", inf.lambda, "Intensity in (0,1)")->capture_default_str();
    influence->add_option("--duration", inf.duration, "Rounds of participation (k)")
        ->capture_default_str();
    influence->add_option("--timing", inf.timing, "consensus, start, or uniform")
        ->check(CLI::IsMember({"consensus", "start", "uniform"}))
        ->capture_default_str();
    influence->add_option("--horizon", inf.horizon, "Total round budget")->capture_default_str();
    influence->add_option("--epsilon", inf.epsilon, "Consensus gap threshold")
        ->capture_default_str();
    influence->add_option("--seed", inf.seed, "Seed for target/schedule draws")
        ->capture_default_str();
    influence->add_option("--trace", inf.trace_path, "Also write the full opinion trace CSV");
    influence->callback([&] { exit_code = run_influence(inf); });

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a batch sweep and emit a report CSV");
    sweep_cmd->add_option("--factor", sweep.factor, "duration, coverage, or intensity")
        ->check(CLI::IsMember({"duration", "coverage", "intensity"}))
        ->capture_default_str();
    sweep_cmd->add_option("--values", sweep.config.values,
                          "Swept values (default: the factor's standard grid)")
        ->delimiter(',');
    sweep_cmd->add_option("--timing", sweep.timings, "Timing options to compare")
        ->delimiter(',')
        ->check(CLI::IsMember({"consensus", "start", "uniform"}))
        ->capture_default_str();
    sweep_cmd->add_option("--n", sweep.config.network.n, "Number of agents")
        ->capture_default_str();
    sweep_cmd->add_option("--density", sweep.config.network.edge_density, "Edge density")
        ->capture_default_str();
    sweep_cmd->add_option("--self-loop-min", sweep.config.network.self_loop_min,
                          "Lower bound of the self-weight draw")
        ->capture_default_str();
    sweep_cmd->add_option("--reps", sweep.config.replications, "Replications per cell")
        ->capture_default_str();
    sweep_cmd->add_option("--horizon", sweep.config.horizon, "Round budget per simulation")
        ->capture_default_str();
    sweep_cmd->add_option("--lambda", sweep.config.held_lambda, "Held intensity")
        ->capture_default_str();
    sweep_cmd->add_option("--coverage", sweep.config.held_coverage, "Held coverage fraction")
        ->capture_default_str();
    sweep_cmd->add_option("--duration", sweep.config.held_duration, "Held duration (k)")
        ->capture_default_str();
    sweep_cmd->add_option("--target-selection", sweep.selection, "random or top_influence")
        ->check(CLI::IsMember({"random", "top_influence"}))
        ->capture_default_str();
    sweep_cmd->add_option("--seed", sweep.config.base_seed, "Base seed")->capture_default_str();
    sweep_cmd->add_option("--epsilon", sweep.config.epsilon, "Consensus gap threshold")
        ->capture_default_str();
    sweep_cmd->add_option("--workers", sweep.config.workers,
                          "Worker pool width (0: hardware concurrency)")
        ->envname("DEGSIM_WORKERS")
        ->capture_default_str();
    sweep_cmd->add_option("--out", sweep.out, "Report CSV path")->capture_default_str();
    sweep_cmd->add_option("--plot-data", sweep.plot_data, "Also write columnar plot data");
    sweep_cmd->add_option("--svg", sweep.svg, "Also render a line chart SVG");
    sweep_cmd->callback([&] { exit_code = run_sweep_command(sweep); });

    std::uint64_t verify_seed = 20240501;
    auto* verify = app.add_subcommand(
        "verify", "Run the analytical self-checks (closed form, scaling laws, full coverage)");
    verify->add_option("--seed", verify_seed, "Base seed for the randomized checks")
        ->capture_default_str();
    verify->callback([&] { exit_code = run_verify(verify_seed); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const degroot::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return exit_code;
}
