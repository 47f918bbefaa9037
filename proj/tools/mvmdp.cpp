// Command-line front end: loads an MDP instance (document or built-in
// benchmark), runs the requested solver, and emits reports and curve files.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <mvmdp/mvmdp.hpp>

namespace {

struct InstanceFlags {
    std::string input;
    std::string bench;
    int capacity = 4;
    double demand_p = 0.6;
    double order_cost = 1.0;
    double holding_cost = 0.7;
    double shortage_cost = 2.9;
    double beta = std::numeric_limits<double>::quiet_NaN();  // NaN: keep instance default
};

void add_instance_flags(CLI::App& cmd, InstanceFlags& flags) {
    auto* input = cmd.add_option("--input", flags.input, "MDP document (JSON)");
    auto* bench = cmd.add_option("--bench", flags.bench, "built-in benchmark: inventory");
    input->excludes(bench);
    bench->excludes(input);
    cmd.add_option("--capacity", flags.capacity, "inventory: warehouse capacity");
    cmd.add_option("--p", flags.demand_p, "inventory: demand success probability");
    cmd.add_option("--b", flags.order_cost, "inventory: per-unit order cost");
    cmd.add_option("--h", flags.holding_cost, "inventory: per-unit holding cost");
    cmd.add_option("--l", flags.shortage_cost, "inventory: per-unit shortage cost");
    cmd.add_option("--beta", flags.beta, "variance weight, overrides the instance's value");
}

mvmdp::Mdp resolve_instance(const InstanceFlags& flags) {
    mvmdp::Mdp mdp;
    if (!flags.input.empty()) {
        mdp = mvmdp::load_mdp_file(flags.input);
    } else if (flags.bench == "inventory") {
        mvmdp::InventoryParams params;
        params.capacity = flags.capacity;
        params.demand_p = flags.demand_p;
        params.order_cost = flags.order_cost;
        params.holding_cost = flags.holding_cost;
        params.shortage_cost = flags.shortage_cost;
        mdp = mvmdp::build_inventory_mdp(params);
        mdp.beta = params.beta;
    } else if (flags.bench.empty()) {
        throw std::invalid_argument("specify --input <path> or --bench inventory");
    } else {
        throw std::invalid_argument("unknown benchmark '" + flags.bench + "'");
    }
    if (!std::isnan(flags.beta)) {
        if (!(flags.beta >= 0.0)) throw std::invalid_argument("--beta must be nonnegative");
        mdp.beta = flags.beta;
    }
    return mdp;
}

std::uint64_t env_aux_budget() {
    const char* raw = std::getenv("MVMDP_MAX_AUX_SOLVES");
    if (raw == nullptr || *raw == '\0') return 0;
    char* end = nullptr;
    const unsigned long long value = std::strtoull(raw, &end, 10);
    if (end == raw || *end != '\0' || value == 0)
        throw std::invalid_argument("MVMDP_MAX_AUX_SOLVES must be a positive integer");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, sep)) out.push_back(token);
    return out;
}

double parse_double(const std::string& token) {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument("bad number '" + token + "'");
    return value;
}

/// A y0 grid is either a bare count (uniform over the reward range) or an
/// explicit comma-separated list of start points.
std::vector<double> resolve_y0_grid(const std::string& text, const mvmdp::RewardBounds& bounds) {
    if (text.find(',') == std::string::npos && text.find('.') == std::string::npos) {
        std::size_t used = 0;
        const long count = std::stol(text, &used);
        if (used == text.size()) {
            if (count < 1) throw std::invalid_argument("--y0-grid count must be positive");
            std::vector<double> grid(count);
            for (long i = 0; i < count; ++i)
                grid[i] = count == 1 ? 0.5 * (bounds.lo + bounds.hi)
                                     : bounds.lo + (bounds.hi - bounds.lo) * i / (count - 1);
            return grid;
        }
    }
    std::vector<double> grid;
    for (const std::string& token : split(text, ',')) grid.push_back(parse_double(token));
    if (grid.empty()) throw std::invalid_argument("--y0-grid is empty");
    return grid;
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << text;
}

std::string error_name(const mvmdp::SolverError& e) {
    if (dynamic_cast<const mvmdp::SingularSystem*>(&e)) return "SingularSystem";
    if (dynamic_cast<const mvmdp::CycleDetected*>(&e)) return "CycleDetected";
    if (dynamic_cast<const mvmdp::IdentityViolation*>(&e)) return "IdentityViolation";
    if (dynamic_cast<const mvmdp::EmptyDomain*>(&e)) return "EmptyDomain";
    if (dynamic_cast<const mvmdp::MaxIterationsExceeded*>(&e)) return "MaxIterationsExceeded";
    if (dynamic_cast<const mvmdp::PolicySpaceTooLarge*>(&e)) return "PolicySpaceTooLarge";
    if (dynamic_cast<const mvmdp::InconsistentCertificate*>(&e)) return "InconsistentCertificate";
    if (dynamic_cast<const mvmdp::SegmentLimitExceeded*>(&e)) return "SegmentLimitExceeded";
    return "SolverError";
}

void run_solve(const InstanceFlags& instance, const std::string& algorithm,
               const std::string& mode, double y0, const std::string& output) {
    const mvmdp::Mdp mdp = resolve_instance(instance);
    mvmdp::SolveOptions options;
    options.algorithm = mvmdp::parse_algorithm(algorithm);
    options.mode = mvmdp::parse_objective_mode(mode);
    options.y0 = y0;
    options.max_aux_solves = env_aux_budget();
    const mvmdp::SolveReport report = mvmdp::solve(mdp, options);
    write_text(output, mvmdp::report_to_json(report).dump(2) + "\n");
}

void run_curve(const InstanceFlags& instance, const std::string& mode, int samples,
               bool segments, const std::string& prefix) {
    const mvmdp::Mdp mdp = resolve_instance(instance);
    const mvmdp::ObjectiveMode objective_mode = mvmdp::parse_objective_mode(mode);
    const mvmdp::RewardBounds bounds = mvmdp::reward_bounds(mdp);
    if (samples < 2) throw std::invalid_argument("--samples must be at least 2");

    std::vector<std::pair<double, double>> points;
    points.reserve(samples);
    mvmdp::DeterministicPolicy warm;
    for (int i = 0; i < samples; ++i) {
        const double y = bounds.lo + (bounds.hi - bounds.lo) * i / (samples - 1);
        const mvmdp::AuxiliarySolution sol = mvmdp::solve_auxiliary(mdp, y, objective_mode, warm);
        warm = sol.policy;
        points.emplace_back(y, sol.pseudo_objective);
    }
    std::ofstream samples_out(prefix + "_samples.csv");
    if (!samples_out) throw std::invalid_argument("cannot write " + prefix + "_samples.csv");
    mvmdp::write_curve_csv(samples_out, points);

    if (segments) {
        const auto segs = mvmdp::enumerate_segments(mdp, objective_mode);
        std::ofstream segments_out(prefix + "_segments.csv");
        if (!segments_out) throw std::invalid_argument("cannot write " + prefix + "_segments.csv");
        mvmdp::write_segments_csv(segments_out, segs);

        const auto points_out_path = prefix + "_fixed_points.csv";
        const auto fixed = mvmdp::classify_fixed_points(
            segs, mvmdp::objective_curvature(mdp, objective_mode));
        std::ofstream fixed_out(points_out_path);
        if (!fixed_out) throw std::invalid_argument("cannot write " + points_out_path);
        mvmdp::write_fixed_points_csv(fixed_out, fixed);
    }
}

void run_frontier(const InstanceFlags& instance, const std::string& beta_grid,
                  const std::string& output) {
    const mvmdp::Mdp mdp = resolve_instance(instance);
    std::vector<double> betas;
    for (const std::string& token : split(beta_grid, ',')) betas.push_back(parse_double(token));
    if (betas.empty()) throw std::invalid_argument("--beta-grid is empty");
    for (double beta : betas)
        if (!(beta >= 0.0)) throw std::invalid_argument("--beta-grid values must be nonnegative");

    const auto points = mvmdp::pareto_frontier(mdp, betas);

    // Neither the variance nor the mean of the optimum may rise as beta grows.
    std::vector<mvmdp::FrontierPoint> ordered = points;
    std::sort(ordered.begin(), ordered.end(),
              [](const auto& a, const auto& b) { return a.beta < b.beta; });
    for (std::size_t i = 1; i < ordered.size(); ++i) {
        if (ordered[i].variance > ordered[i - 1].variance + 1e-9)
            std::cerr << "warning: sigma rises from " << mvmdp::format_sig(ordered[i - 1].variance)
                      << " to " << mvmdp::format_sig(ordered[i].variance) << " between beta "
                      << mvmdp::format_sig(ordered[i - 1].beta) << " and "
                      << mvmdp::format_sig(ordered[i].beta) << "\n";
        if (ordered[i].mean > ordered[i - 1].mean + 1e-9)
            std::cerr << "warning: mu rises from " << mvmdp::format_sig(ordered[i - 1].mean)
                      << " to " << mvmdp::format_sig(ordered[i].mean) << " between beta "
                      << mvmdp::format_sig(ordered[i - 1].beta) << " and "
                      << mvmdp::format_sig(ordered[i].beta) << "\n";
    }

    std::ostringstream out;
    mvmdp::write_frontier_csv(out, points);
    write_text(output, out.str());
}

void run_compare(const std::string& capacities, const InstanceFlags& instance,
                 const std::string& y0_grid, const std::string& output) {
    std::vector<int> caps;
    for (const std::string& token : split(capacities, ',')) {
        const double value = parse_double(token);
        if (value < 1 || value != std::floor(value))
            throw std::invalid_argument("--capacities must be positive integers");
        caps.push_back(static_cast<int>(value));
    }
    if (caps.empty()) throw std::invalid_argument("--capacities is empty");

    std::ostringstream out;
    bool header_written = false;
    for (int capacity : caps) {
        InstanceFlags flags = instance;
        flags.bench = "inventory";
        flags.input.clear();
        flags.capacity = capacity;
        const mvmdp::Mdp mdp = resolve_instance(flags);
        const std::vector<double> grid = resolve_y0_grid(y0_grid, mvmdp::reward_bounds(mdp));

        if (!header_written) {
            out << "capacity,global_eta,global_plus_eta,global_aux,global_plus_aux";
            for (std::size_t i = 0; i < grid.size(); ++i) out << ",local_eta_" << i + 1;
            out << '\n';
            header_written = true;
        }

        mvmdp::SolveOptions options;
        options.max_aux_solves = env_aux_budget();
        options.algorithm = mvmdp::Algorithm::Global;
        const mvmdp::SolveReport global = mvmdp::solve_global(mdp, options);
        options.algorithm = mvmdp::Algorithm::GlobalPlus;
        const mvmdp::SolveReport plus = mvmdp::solve_global(mdp, options);

        out << capacity << ',' << mvmdp::format_sig(global.eta_star) << ','
            << mvmdp::format_sig(plus.eta_star) << ',' << global.aux_solves << ','
            << plus.aux_solves;
        for (double y0 : grid) {
            options.algorithm = mvmdp::Algorithm::Local;
            options.y0 = y0;
            out << ',' << mvmdp::format_sig(mvmdp::solve_local(mdp, options).eta_star);
        }
        out << '\n';
    }
    write_text(output, out.str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Globally optimal policies for steady-state mean-variance MDP objectives"};
    app.require_subcommand(1);
    // -h stays free: the inventory flags are single letters (--h, --l, ...).
    const auto long_help_only = [](CLI::App* cmd) {
        cmd->set_help_flag("--help", "print help and exit");
    };
    long_help_only(&app);

    InstanceFlags solve_instance;
    std::string solve_algorithm = "global";
    std::string solve_mode = "mean-variance";
    double solve_y0 = std::numeric_limits<double>::quiet_NaN();
    std::string solve_output;
    auto* solve_cmd = app.add_subcommand("solve", "solve one instance and print a report");
    add_instance_flags(*solve_cmd, solve_instance);
    long_help_only(solve_cmd);
    solve_cmd->add_option("--algorithm", solve_algorithm, "global|global-plus|local|brute");
    solve_cmd->add_option("--mode", solve_mode, "mean-variance|variance");
    solve_cmd->add_option("--y0", solve_y0, "start point for the local algorithm");
    solve_cmd->add_option("--output", solve_output, "report path (default stdout)");
    solve_cmd->callback([&] {
        run_solve(solve_instance, solve_algorithm, solve_mode, solve_y0, solve_output);
    });

    InstanceFlags curve_instance;
    std::string curve_mode = "mean-variance";
    int curve_samples = 500;
    bool curve_segments = false;
    std::string curve_prefix = "curve";
    auto* curve_cmd = app.add_subcommand("curve", "sample the optimal pseudo objective curve");
    add_instance_flags(*curve_cmd, curve_instance);
    long_help_only(curve_cmd);
    curve_cmd->add_option("--mode", curve_mode, "mean-variance|variance");
    curve_cmd->add_option("--samples", curve_samples, "number of uniform samples (default 500)");
    curve_cmd->add_flag("--segments", curve_segments, "also write exact segments + fixed points");
    curve_cmd->add_option("--output-prefix", curve_prefix, "prefix for the CSV files");
    curve_cmd->callback([&] {
        run_curve(curve_instance, curve_mode, curve_samples, curve_segments, curve_prefix);
    });

    InstanceFlags frontier_instance;
    std::string frontier_betas;
    std::string frontier_output;
    auto* frontier_cmd = app.add_subcommand("frontier", "trace the mean-variance frontier");
    add_instance_flags(*frontier_cmd, frontier_instance);
    long_help_only(frontier_cmd);
    frontier_cmd->add_option("--beta-grid", frontier_betas, "comma-separated beta values")
        ->required();
    frontier_cmd->add_option("--output", frontier_output, "CSV path (default stdout)");
    frontier_cmd->callback(
        [&] { run_frontier(frontier_instance, frontier_betas, frontier_output); });

    InstanceFlags compare_instance;
    std::string compare_capacities = "4,7,10";
    std::string compare_y0_grid = "50";
    std::string compare_output;
    auto* compare_cmd =
        app.add_subcommand("compare", "compare algorithms across inventory capacities");
    add_instance_flags(*compare_cmd, compare_instance);
    long_help_only(compare_cmd);
    compare_cmd->get_option("--input")->group("");  // compare instances come from --capacities
    compare_cmd->get_option("--bench")->group("");
    compare_cmd->get_option("--capacity")->group("");
    compare_cmd->add_option("--capacities", compare_capacities, "inventory capacities to run");
    compare_cmd->add_option("--y0-grid", compare_y0_grid,
                            "local starts: a count (uniform grid) or explicit list");
    compare_cmd->add_option("--output", compare_output, "CSV path (default stdout)");
    compare_cmd->callback([&] {
        run_compare(compare_capacities, compare_instance, compare_y0_grid, compare_output);
    });

    try {
        app.parse(argc, argv);
        return 0;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const mvmdp::PolicySpaceTooLarge& e) {
        std::cerr << "error: PolicySpaceTooLarge: " << e.what() << "\n";
        return 4;
    } catch (const mvmdp::SolverError& e) {
        std::cerr << "error: " << error_name(e) << ": " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
