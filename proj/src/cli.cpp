#include "delayq/cli.hpp"

#include "delayq/dde.hpp"
#include "delayq/error.hpp"
#include "delayq/literal.hpp"
#include "delayq/report.hpp"
#include "delayq/stability.hpp"
#include "delayq/sweep.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

namespace delayq::cli {

namespace {

// Flag combination that parses but makes no sense; exit code 2.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SystemFlags {
    std::string dist;
    int n = 2;
    double lambda = 10.0;
    double mu = 1.0;

    QueueParams params() const { return {n, lambda, mu}; }
};

struct SimFlags {
    double delta = 0.0;
    std::string hist;
    std::optional<double> horizon;
    std::optional<double> h_target;
    double window_frac = 0.2;
    double amp_tol = 1e-3;
    std::string out_path;
};

struct SweepFlags {
    std::string family;
    std::string mode = "mean";
    std::optional<double> fixed;
    std::optional<double> weibull_alpha;
    double grid_min = 0.0;
    double grid_max = 0.0;
    std::size_t grid_n = 400;
    std::string select;
    double x_min = 0.0;
    double x_max = 5.0;
    std::size_t x_n = 200;
    std::string out_path;
    std::string svg_path;
};

void add_system_flags(CLI::App* cmd, SystemFlags& f)
{
    cmd->add_option("--dist", f.dist, "Distribution literal, e.g. exponential:theta=1")->required();
    cmd->add_option("--n", f.n, "Number of queues (>= 2)")->capture_default_str();
    cmd->add_option("--lambda", f.lambda, "Arrival rate")->capture_default_str();
    cmd->add_option("--mu", f.mu, "Service rate")->capture_default_str();
}

void add_sim_flags(CLI::App* cmd, SimFlags& f)
{
    cmd->add_option("--delta", f.delta, "Information delay")->required();
    cmd->add_option("--hist", f.hist, "Constant history, N comma-separated values (default: all q*)");
    cmd->add_option("--horizon", f.horizon, "Final time (default max(40, 30*delta_cr))");
    cmd->add_option("--h-target", f.h_target, "Requested step (default min(delta/100, 1/(50|C|)))");
    cmd->add_option("--window-frac", f.window_frac, "Tail fraction used for classification")->capture_default_str();
    cmd->add_option("--amp-tol", f.amp_tol, "Relative amplitude threshold")->capture_default_str();
    cmd->add_option("--out", f.out_path, "Output CSV path");
}

void add_family_flags(CLI::App* cmd, SweepFlags& f, SystemFlags& sys)
{
    cmd->add_option("--family", f.family, "exponential|normal|lognormal|weibull|gamma|hyperexp2")->required();
    cmd->add_option("--mode", f.mode, "mean|variance")->capture_default_str();
    cmd->add_option("--fixed", f.fixed, "Fixed variance (mean mode) or fixed mean (variance mode)");
    cmd->add_option("--weibull-alpha", f.weibull_alpha, "Pin the Weibull shape instead of fixing a moment");
    cmd->add_option("--n", sys.n, "Number of queues (>= 2)")->capture_default_str();
    cmd->add_option("--lambda", sys.lambda, "Arrival rate")->capture_default_str();
    cmd->add_option("--mu", sys.mu, "Service rate")->capture_default_str();
    cmd->add_option("--out", f.out_path, "Output CSV path")->required();
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open output file '" + path + "'");
    return os;
}

SweepSpec build_spec(const SweepFlags& f, const SystemFlags& sys, std::vector<double> grid)
{
    const auto family = parse_family_tag(f.family);
    if (!family) throw UsageError("unknown family '" + f.family + "'");
    if (f.mode != "mean" && f.mode != "variance") throw UsageError("--mode must be 'mean' or 'variance'");
    const bool by_mean = f.mode == "mean";

    SweepMode mode = MeanSweep{1.0};
    if (f.weibull_alpha) {
        if (*family != FamilyTag::Weibull) throw UsageError("--weibull-alpha requires --family weibull");
        if (f.fixed) throw UsageError("--weibull-alpha and --fixed are mutually exclusive");
        mode = by_mean ? SweepMode{WeibullMeanSweep{*f.weibull_alpha}} : SweepMode{WeibullVarianceSweep{*f.weibull_alpha}};
    } else if (*family == FamilyTag::Exponential) {
        // One-parameter family: the swept statistic alone fixes theta.
        mode = by_mean ? SweepMode{MeanSweep{1.0}} : SweepMode{VarianceSweep{1.0}};
    } else {
        if (!f.fixed) throw UsageError("--fixed is required for family " + f.family);
        mode = by_mean ? SweepMode{MeanSweep{*f.fixed}} : SweepMode{VarianceSweep{*f.fixed}};
    }
    SweepSpec spec{*family, mode, std::move(grid), sys.params()};
    try {
        validate(spec);
    } catch (const ConfigError& e) {
        throw UsageError(e.what());
    }
    return spec;
}

struct SimResult {
    Trajectory trajectory;
    Classification classification;
};

SimResult run_simulation(const SystemFlags& sys, const SimFlags& f)
{
    const Distribution d = parse_distribution(sys.dist);
    const QueueParams p = sys.params();
    const StabilityReport rep = analyze(d, p);

    HistorySpec hist;
    if (f.hist.empty()) {
        hist.values.assign(static_cast<std::size_t>(p.n), rep.q_star);
    } else {
        hist.values = parse_number_list(f.hist);
        if (hist.values.size() != static_cast<std::size_t>(p.n)) {
            throw UsageError("--hist needs " + std::to_string(p.n) + " values, got " +
                             std::to_string(hist.values.size()));
        }
    }

    RunConfig cfg = default_run_config(f.delta, rep);
    if (f.horizon) cfg.horizon = *f.horizon;
    if (f.h_target) cfg.h_target = *f.h_target;
    cfg.classify_window_frac = f.window_frac;
    cfg.amp_tol_rel = f.amp_tol;

    Trajectory traj = simulate(d, p, hist, cfg);
    const Classification cls = classify_trajectory(traj, rep.q_star, cfg);
    return {std::move(traj), cls};
}

void print_classification(std::ostream& out, const Classification& c)
{
    out << "verdict=" << to_string(c.verdict) << '\n';
    out << "amplitude=" << report::format_summary(c.amplitude) << '\n';
    if (c.period_estimate) out << "period_estimate=" << report::format_summary(*c.period_estimate) << '\n';
}

} // namespace

std::vector<std::string> expand_args_files(const std::vector<std::string>& args)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string path;
        if (args[i] == "--args-file") {
            if (i + 1 >= args.size()) throw UsageError("--args-file needs a path");
            path = args[++i];
        } else if (args[i].rfind("--args-file=", 0) == 0) {
            path = args[i].substr(std::string("--args-file=").size());
        } else {
            out.push_back(args[i]);
            continue;
        }
        std::ifstream in(path);
        if (!in) throw UsageError("cannot read args file '" + path + "'");
        std::string line;
        while (std::getline(in, line)) {
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            const auto last = line.find_last_not_of(" \t\r");
            line = line.substr(first, last - first + 1);
            const auto sep = line.find_first_of(" \t");
            if (sep == std::string::npos) {
                out.push_back(line);
            } else {
                out.push_back(line.substr(0, sep));
                const auto value_start = line.find_first_not_of(" \t", sep);
                out.push_back(line.substr(value_start));
            }
        }
    }
    return out;
}

int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Delayed-information fluid queue analysis"};
    app.require_subcommand(1);

    SystemFlags sys;
    SimFlags sim;
    SweepFlags sw;
    std::string stability_csv;

    auto* stability_cmd = app.add_subcommand("stability", "Equilibrium, eigenvalue and critical delay");
    add_system_flags(stability_cmd, sys);
    stability_cmd->add_option("--csv", stability_csv, "Also write the report as a one-row CSV");

    auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the delayed system and classify the run");
    add_system_flags(simulate_cmd, sys);
    add_sim_flags(simulate_cmd, sim);

    auto* phase_cmd = app.add_subcommand("phase", "Phase-plane data (q, dq/dt) of a simulated run");
    add_system_flags(phase_cmd, sys);
    add_sim_flags(phase_cmd, sim);

    auto* sweep_cmd = app.add_subcommand("sweep", "Critical delay against the mean or variance");
    add_family_flags(sweep_cmd, sw, sys);
    sweep_cmd->add_option("--grid-min", sw.grid_min, "First swept value")->required();
    sweep_cmd->add_option("--grid-max", sw.grid_max, "Last swept value")->required();
    sweep_cmd->add_option("--grid-n", sw.grid_n, "Number of grid points")->capture_default_str();
    sweep_cmd->add_option("--svg", sw.svg_path, "Also write an SVG plot of delta_cr");

    auto* densities_cmd = app.add_subcommand("densities", "Density curves for selected swept values");
    add_family_flags(densities_cmd, sw, sys);
    densities_cmd->add_option("--select", sw.select, "Comma-separated swept values")->required();
    densities_cmd->add_option("--x-min", sw.x_min, "First x")->capture_default_str();
    densities_cmd->add_option("--x-max", sw.x_max, "Last x")->capture_default_str();
    densities_cmd->add_option("--x-n", sw.x_n, "Number of x points")->capture_default_str();

    try {
        args = expand_args_files(args);
        std::vector<const char*> argv{"delayq"};
        for (const auto& a : args) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (stability_cmd->parsed()) {
            const StabilityReport rep = analyze(parse_distribution(sys.dist), sys.params());
            report::write_stability_summary(out, rep);
            if (!stability_csv.empty()) {
                auto os = open_output(stability_csv);
                os << "q_star,C,regime,omega,delta_cr\n"
                   << report::format_exact(rep.q_star) << ',' << report::format_exact(rep.c) << ','
                   << to_string(rep.regime) << ',' << (rep.omega ? report::format_exact(*rep.omega) : "") << ','
                   << (rep.delta_cr ? report::format_exact(*rep.delta_cr) : "") << '\n';
            }
        } else if (simulate_cmd->parsed()) {
            const SimResult r = run_simulation(sys, sim);
            if (!sim.out_path.empty()) {
                auto os = open_output(sim.out_path);
                report::write_trajectory_csv(os, r.trajectory);
            }
            print_classification(out, r.classification);
        } else if (phase_cmd->parsed()) {
            const SimResult r = run_simulation(sys, sim);
            if (!sim.out_path.empty()) {
                auto os = open_output(sim.out_path);
                report::write_phase_csv(os, phase_data(r.trajectory));
            }
            print_classification(out, r.classification);
        } else if (sweep_cmd->parsed()) {
            if (!(sw.grid_min < sw.grid_max) || sw.grid_n < 2) {
                throw UsageError("sweep needs --grid-min < --grid-max and --grid-n >= 2");
            }
            const SweepSpec spec = build_spec(sw, sys, linear_grid(sw.grid_min, sw.grid_max, sw.grid_n));
            const std::vector<SweepRow> rows = run_sweep(spec);
            {
                auto os = open_output(sw.out_path);
                report::write_sweep_csv(os, rows);
            }
            if (!sw.svg_path.empty()) {
                auto os = open_output(sw.svg_path);
                report::write_line_svg(os, report::sweep_series(rows, sw.mode));
            }
            out << "rows=" << rows.size() << '\n';
            for (double a : find_asymptotes(spec)) out << "asymptote=" << report::format_summary(a) << '\n';
        } else if (densities_cmd->parsed()) {
            if (!(sw.x_min < sw.x_max) || sw.x_n < 2) {
                throw UsageError("densities needs --x-min < --x-max and --x-n >= 2");
            }
            const std::vector<double> selected = parse_number_list(sw.select);
            std::vector<double> grid = selected;
            std::sort(grid.begin(), grid.end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
            const SweepSpec spec = build_spec(sw, sys, std::move(grid));
            const auto rows = density_curves(spec, selected, linear_grid(sw.x_min, sw.x_max, sw.x_n));
            auto os = open_output(sw.out_path);
            report::write_density_csv(os, rows);
            out << "rows=" << rows.size() << '\n';
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
    return kExitOk;
}

} // namespace delayq::cli
