// Command-line front end: sweeps, single-site context inspection, the
// acceptance checks, and plot-table emission.
#include "vnrf/context.hpp"
#include "vnrf/experiments.hpp"
#include "vnrf/verification.hpp"
#include "vnrf/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace {

constexpr const char* kOutputEnv = "VNRF_OUTPUT_DIR";

std::filesystem::path output_dir(const std::string& flag, const std::filesystem::path& fallback) {
    if (!flag.empty()) return flag;
    if (const char* env = std::getenv(kOutputEnv); env && *env) return env;
    return fallback;
}

vnrf::Site parse_site(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("--site expects r,c");
    try {
        return {std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    } catch (const std::exception&) {
        throw std::invalid_argument("--site expects two integers r,c, got '" + text + "'");
    }
}

int run_sweep_command(const std::string& config_path, const std::string& out_flag) {
    vnrf::SweepConfig config = vnrf::load_sweep_config(config_path);
    const auto dir = output_dir(out_flag, config.output_dir);
    const auto results = vnrf::run_sweep(config, dir);
    std::cout << "wrote " << results.size() << " cells to " << (dir / "results.csv").string() << " and "
              << (dir / "summary.json").string() << "\n";
    return 0;
}

int run_context_command(const std::string& config_path, const std::string& site_text, std::size_t cell_index,
                        std::size_t replica) {
    const vnrf::SweepConfig config = vnrf::load_sweep_config(config_path);
    const auto cells = vnrf::expand_cells(config);
    if (cell_index >= cells.size())
        throw std::invalid_argument("--cell " + std::to_string(cell_index) + " out of range (config has " +
                                    std::to_string(cells.size()) + " cells)");
    vnrf::SweepPoint cell = cells[cell_index];
    cell.samples_per_replica = 1;
    const vnrf::Site site = parse_site(site_text);
    if (!cell.window().contains(site))
        throw std::invalid_argument("site " + vnrf::to_string(site) + " is outside the " + std::to_string(cell.size) +
                                    "x" + std::to_string(cell.size) + " window");

    std::optional<vnrf::Configuration> x;
    vnrf::for_each_observed_sample(cell, replica, [&](const vnrf::Configuration& c) { x = c; });
    const vnrf::Context ctx = vnrf::compute_context(*x, site);

    std::cout << "cell " << cell_index << ": beta=" << vnrf::format_number(cell.beta)
              << " eps=" << vnrf::format_number(cell.epsilon) << " boundary=" << vnrf::to_string(cell.boundary)
              << " size=" << cell.size << " replica=" << replica << "\n";
    std::cout << "site " << vnrf::to_string(site) << ": "
              << (ctx.resolved() ? "resolved within window" : "truncated by window") << "\n";
    if (ctx.resolved()) {
        std::cout << "context size " << ctx.members.size() << ":";
        for (vnrf::Site s : ctx.members) std::cout << ' ' << vnrf::to_string(s);
        std::cout << "\n";
    }
    if (cell.size <= 64) std::cout << vnrf::render(*x);
    return 0;
}

int run_verify_command(const std::vector<int>& only) {
    const std::set<int> selected(only.begin(), only.end());
    bool all_passed = true;
    for (const auto& check : vnrf::acceptance_checks()) {
        if (!selected.empty() && !selected.count(check.id)) continue;
        const vnrf::CheckResult r = vnrf::run_check(check);
        std::cout << vnrf::format_result(r) << std::endl;
        all_passed = all_passed && r.passed;
    }
    std::cout << (all_passed ? "all checks passed" : "some checks FAILED") << "\n";
    return all_passed ? 0 : 1;
}

int run_plot_command(const std::string& results_path, const std::string& kind_text, const std::string& out_flag) {
    const vnrf::PlotKind kind = vnrf::parse_plot_kind(kind_text);
    std::filesystem::path file = results_path;
    if (std::filesystem::is_directory(file)) file /= "summary.json";
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    const auto results = vnrf::parse_summary_json(ss.str());
    const auto dir = output_dir(out_flag, file.parent_path());
    std::cout << "wrote " << vnrf::emit_plot_data(results, kind, dir).string() << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variable-neighborhood structure of noisily masked Ising fields"};
    app.set_version_flag("--version", vnrf::kVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string out_flag;

    auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep and write results.csv / summary.json");
    sweep->add_option("config", config_path, "JSON sweep config")->required()->check(CLI::ExistingFile);
    sweep->add_option("--output-dir", out_flag, std::string("Output directory (overrides ") + kOutputEnv +
                                                    " and the config)");

    std::string site_text;
    std::size_t cell_index = 0;
    std::size_t replica = 0;
    auto* context = app.add_subcommand("context", "Sample one observed field and print the context of a site");
    context->add_option("config", config_path, "JSON sweep config")->required()->check(CLI::ExistingFile);
    context->add_option("--site", site_text, "Site as r,c")->required();
    context->add_option("--cell", cell_index, "Cell index within the config grid");
    context->add_option("--replica", replica, "Replica index");

    std::vector<int> only;
    auto* verify = app.add_subcommand("verify", "Run the acceptance checks");
    verify->add_option("--only", only, "Check ids to run (default: all)");

    std::string results_path;
    std::string kind_text;
    auto* plot = app.add_subcommand("plot-data", "Emit a plot-ready table from summary.json");
    plot->add_option("results", results_path, "summary.json or the directory holding it")->required();
    plot->add_option("--kind", kind_text,
                     "phase_diagram | context_size_histogram | lemma1_comparison | scaling")
        ->required();
    plot->add_option("--output-dir", out_flag, "Directory receiving plots/<kind>.csv");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) return run_sweep_command(config_path, out_flag);
        if (*context) return run_context_command(config_path, site_text, cell_index, replica);
        if (*verify) return run_verify_command(only);
        if (*plot) return run_plot_command(results_path, kind_text, out_flag);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
