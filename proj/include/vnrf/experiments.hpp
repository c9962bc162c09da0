// Parameter sweeps over (beta, eps, boundary, window size) and the Monte
// Carlo estimators behind them.
//
// Finite-window surrogates: a -1 cluster touching two opposite window edges
// stands in for an infinite -1 path, and the fraction of truncated contexts
// stands in for the event that some context is infinite.
//
// Every replica draws from its own stream, derived from (base seed, cell
// index, replica index), and per-replica results are reduced in replica
// order, so outputs do not depend on thread scheduling.
#pragma once

#include "vnrf/lattice.hpp"
#include "vnrf/rng.hpp"
#include "vnrf/sampler.hpp"
#include "vnrf/spec.hpp"
#include "vnrf/theory.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vnrf {

enum class SamplingKind { Mcmc, Exact };

std::string to_string(SamplingKind kind);

struct SweepConfig {
    std::vector<double> betas;
    std::vector<double> epsilons;
    std::vector<BoundaryCondition> boundaries{BoundaryCondition::AllPlus};
    std::vector<int> sizes;
    int replicas = 10;
    int samples_per_replica = 1;
    std::uint64_t seed = 1;
    SamplingKind method = SamplingKind::Mcmc;
    std::uint64_t burn_in = 0; // 0: 200 * side
    std::uint64_t thin = 0;    // 0: side
    Thresholds thresholds;
    int max_path_length = 4;   // 0 disables path statistics
    std::string output_dir = "results";

    // Throws std::invalid_argument naming the offending field.
    void validate() const;
};

// JSON object whose keys map one-to-one onto SweepConfig; unknown keys are
// rejected. See README for the schema.
SweepConfig parse_sweep_config(const std::string& text);
SweepConfig load_sweep_config(const std::filesystem::path& file);
std::string canonical_config_json(const SweepConfig& config);

// One cell of a sweep grid.
struct SweepPoint {
    double beta = 0.0;
    double epsilon = 0.1;
    BoundaryCondition boundary = BoundaryCondition::AllPlus;
    int size = 16;
    int replicas = 10;
    int samples_per_replica = 1;
    std::uint64_t seed = 1;
    std::size_t cell_index = 0;
    SamplingKind method = SamplingKind::Mcmc;
    McmcMethod mcmc;

    Window window() const { return Window::square(size, boundary); }
    SpecificationParams params() const { return {beta, Model::HomogeneousIsing}; }
    NoiseParams noise() const { return {epsilon}; }
    std::size_t sample_count() const {
        return static_cast<std::size_t>(replicas) * static_cast<std::size_t>(samples_per_replica);
    }
};

std::vector<SweepPoint> expand_cells(const SweepConfig& config);

RngStream replica_stream(std::uint64_t seed, std::size_t cell_index, std::size_t replica);

struct Estimate {
    double value = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

// p-hat and sqrt(p-hat (1 - p-hat) / n).
Estimate binomial_estimate(std::size_t successes, std::size_t n);

// Draws samples_per_replica observed configurations for one replica and
// hands each to `visit`.
void for_each_observed_sample(const SweepPoint& cell, std::size_t replica,
                              const std::function<void(const Configuration&)>& visit);

using FieldSource = std::function<Configuration(RngStream&)>;

Estimate estimate_spanning_probability(const SweepPoint& cell);
// One field per replica from `source`, e.g. Bernoulli fields for calibration.
Estimate estimate_spanning_probability(const FieldSource& source, int replicas, std::uint64_t seed,
                                       std::size_t cell_index);

// Frequency, per path, of the event that every site of the path reads -1.
// Paths must stay off the window edge; requires the plus boundary.
std::vector<Estimate> estimate_path_minus_probability(const SweepPoint& cell,
                                                      const std::vector<Path>& paths);

struct TheoryFlags {
    double lambda0_plus = 0.0;
    double lambda0_minus = 0.0;
    bool thm2_finite = false;
    bool thm2_infinite = false;
    bool thm3_stated = false;
    bool thm3_beta_admissible = false;
    bool thm3_proof_region = false;
    bool above_beta_c = false;
    std::optional<double> remark_beta_bound;
    double thm3_epsilon_bound = 0.0;

    bool operator==(const TheoryFlags&) const = default;
};

TheoryFlags theory_flags(double beta, double eps, const Thresholds& t);

struct PathLengthStats {
    int length = 0;
    std::size_t path_count = 0;
    Estimate max_path_freq;   // the most frequently all -1 path
    double mean_path_freq = 0.0;
    Estimate open_path_prob;  // some path of this length is all -1
    double lemma1_bound = 0.0;
    double open_path_bound = 0.0;
};

struct SweepResult {
    SweepPoint cell;
    std::uint64_t burn_in = 0; // resolved values actually used
    std::uint64_t thin = 0;

    Estimate spanning;
    double mean_context_size = 0.0;
    double median_context_size = 0.0;
    std::size_t resolved_contexts = 0;
    Estimate truncated_fraction; // over sites off the window edge
    std::size_t max_minus_cluster = 0;
    std::vector<PathLengthStats> paths;
    std::map<std::size_t, std::size_t> context_size_histogram;

    TheoryFlags theory;
    Thresholds thresholds;
    std::string code_version;
};

SweepResult evaluate_cell(const SweepPoint& cell, const Thresholds& thresholds, int max_path_length);

// Runs every cell, writing <output_dir>/results.csv and summary.json.
// Progress is flushed after each cell; an interrupted run with the same
// config picks up from the last finished cell.
std::vector<SweepResult> run_sweep(const SweepConfig& config);
std::vector<SweepResult> run_sweep(const SweepConfig& config, const std::filesystem::path& output_dir);

std::string results_csv(const std::vector<SweepResult>& results);
std::string summary_json(const SweepConfig& config, const std::vector<SweepResult>& results);
std::vector<SweepResult> parse_summary_json(const std::string& text);

enum class PlotKind { PhaseDiagram, ContextSizeHistogram, Lemma1Comparison, Scaling };

PlotKind parse_plot_kind(const std::string& text);
std::string to_string(PlotKind kind);

// Tidy long-format table for one plot kind. Theory curves are emitted as
// extra rows tagged by their `series` column.
std::string plot_table(const std::vector<SweepResult>& results, PlotKind kind);
// Writes <dir>/plots/<kind>.csv and returns its path.
std::filesystem::path emit_plot_data(const std::vector<SweepResult>& results, PlotKind kind,
                                     const std::filesystem::path& dir);

// Shortest round-trip decimal form, used for every number we persist.
std::string format_number(double v);

} // namespace vnrf
