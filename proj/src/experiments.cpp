#include "vnrf/experiments.hpp"

#include "vnrf/context.hpp"
#include "vnrf/version.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <exception>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vnrf {

using nlohmann::json;

std::string format_number(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("cannot persist a non-finite number");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<SweepPoint> expand_cells(const SweepConfig& config) {
    config.validate();
    std::vector<SweepPoint> cells;
    for (double beta : config.betas)
        for (double eps : config.epsilons)
            for (BoundaryCondition bc : config.boundaries)
                for (int size : config.sizes) {
                    SweepPoint p;
                    p.beta = beta;
                    p.epsilon = eps;
                    p.boundary = bc;
                    p.size = size;
                    p.replicas = config.replicas;
                    p.samples_per_replica = config.samples_per_replica;
                    p.seed = config.seed;
                    p.cell_index = cells.size();
                    p.method = config.method;
                    p.mcmc = {config.burn_in, config.thin};
                    cells.push_back(p);
                }
    return cells;
}

RngStream replica_stream(std::uint64_t seed, std::size_t cell_index, std::size_t replica) {
    return RngStream(seed, derive_stream(cell_index, replica));
}

Estimate binomial_estimate(std::size_t successes, std::size_t n) {
    if (n == 0) throw std::invalid_argument("binomial estimate needs at least one sample");
    if (successes > n) throw std::invalid_argument("more successes than samples");
    const double p = static_cast<double>(successes) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n};
}

namespace {

void validate_cell(const SweepPoint& cell) {
    validate(cell.params());
    validate(cell.noise());
    if (cell.size < 1) throw std::invalid_argument("window size must be positive");
    if (cell.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    if (cell.samples_per_replica < 1) throw std::invalid_argument("samples_per_replica must be >= 1");
    if (cell.method == SamplingKind::Exact && cell.window().site_count() > kEnumerationCap)
        throw std::invalid_argument("exact sampling needs windows of at most " + std::to_string(kEnumerationCap) +
                                    " sites");
}

// Runs fn(replica) for every replica, possibly in parallel, and rethrows
// the first failure in replica order.
template <class Fn>
void for_each_replica(int replicas, Fn&& fn) {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(replicas));
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < replicas; ++r) {
        try {
            fn(static_cast<std::size_t>(r));
        } catch (...) {
            errors[static_cast<std::size_t>(r)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace

void for_each_observed_sample(const SweepPoint& cell, std::size_t replica,
                              const std::function<void(const Configuration&)>& visit) {
    validate_cell(cell);
    RngStream rng = replica_stream(cell.seed, cell.cell_index, replica);
    const Window window = cell.window();
    if (cell.method == SamplingKind::Exact) {
        const ExactGibbsSampler sampler(cell.params(), window);
        for (int s = 0; s < cell.samples_per_replica; ++s) {
            const Configuration hidden = sampler.draw(rng);
            visit(mask(hidden, sample_noise_field(cell.noise(), window, rng)));
        }
        return;
    }
    ObservedChain chain(cell.params(), cell.noise(), window, rng, cell.mcmc);
    for (int s = 0; s < cell.samples_per_replica; ++s) visit(chain.next());
}

Estimate estimate_spanning_probability(const SweepPoint& cell) {
    validate_cell(cell);
    std::vector<std::size_t> hits(static_cast<std::size_t>(cell.replicas), 0);
    for_each_replica(cell.replicas, [&](std::size_t r) {
        for_each_observed_sample(cell, r, [&](const Configuration& x) {
            if (has_spanning_minus_cluster(x)) ++hits[r];
        });
    });
    std::size_t total = 0;
    for (std::size_t h : hits) total += h;
    return binomial_estimate(total, cell.sample_count());
}

Estimate estimate_spanning_probability(const FieldSource& source, int replicas, std::uint64_t seed,
                                       std::size_t cell_index) {
    if (replicas < 1) throw std::invalid_argument("replicas must be >= 1");
    std::vector<char> hits(static_cast<std::size_t>(replicas), 0);
    for_each_replica(replicas, [&](std::size_t r) {
        RngStream rng = replica_stream(seed, cell_index, r);
        hits[r] = has_spanning_minus_cluster(source(rng)) ? 1 : 0;
    });
    std::size_t total = 0;
    for (char h : hits) total += static_cast<std::size_t>(h);
    return binomial_estimate(total, static_cast<std::size_t>(replicas));
}

namespace {

void require_interior_paths(const Window& window, const std::vector<Path>& paths) {
    for (const Path& path : paths) {
        if (path.empty()) throw std::invalid_argument("empty path");
        for (Site s : path)
            if (!window.contains(s) || window.on_edge(s))
                throw std::invalid_argument("path site " + to_string(s) + " touches the window boundary");
    }
}

bool all_minus(const Configuration& x, const Path& path) {
    for (Site s : path)
        if (x.at(s) != -1) return false;
    return true;
}

} // namespace

std::vector<Estimate> estimate_path_minus_probability(const SweepPoint& cell, const std::vector<Path>& paths) {
    validate_cell(cell);
    if (cell.boundary != BoundaryCondition::AllPlus)
        throw std::invalid_argument("path frequencies are defined under the plus boundary");
    require_interior_paths(cell.window(), paths);

    std::vector<std::vector<std::size_t>> hits(static_cast<std::size_t>(cell.replicas),
                                               std::vector<std::size_t>(paths.size(), 0));
    for_each_replica(cell.replicas, [&](std::size_t r) {
        for_each_observed_sample(cell, r, [&](const Configuration& x) {
            for (std::size_t p = 0; p < paths.size(); ++p)
                if (all_minus(x, paths[p])) ++hits[r][p];
        });
    });
    std::vector<Estimate> out;
    out.reserve(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p) {
        std::size_t total = 0;
        for (const auto& h : hits) total += h[p];
        out.push_back(binomial_estimate(total, cell.sample_count()));
    }
    return out;
}

TheoryFlags theory_flags(double beta, double eps, const Thresholds& t) {
    TheoryFlags f;
    const ExtremalRates rates = extremal_rates(SpecificationParams{beta, Model::HomogeneousIsing});
    f.lambda0_plus = rates.lambda0_plus;
    f.lambda0_minus = rates.lambda0_minus;
    f.thm2_finite = thm2_finite_condition(eps, rates.lambda0_plus, t);
    f.thm2_infinite = thm2_infinite_condition(eps, rates.lambda0_minus, t);
    f.thm3_stated = thm3_stated_region(beta, eps);
    f.thm3_beta_admissible = thm3_beta_admissible(beta);
    f.thm3_proof_region = thm3_proof_region(beta, eps);
    f.above_beta_c = beta > t.beta_c;
    f.remark_beta_bound = remark_beta_bound(eps, t);
    f.thm3_epsilon_bound = thm3_epsilon_bound(beta);
    return f;
}

namespace {

struct ReplicaTally {
    std::size_t spanning = 0;
    std::size_t truncated = 0;
    std::size_t interior_sites = 0;
    std::size_t max_cluster = 0;
    std::size_t resolved = 0;
    double size_sum = 0.0;
    std::map<std::size_t, std::size_t> histogram;
    std::vector<std::vector<std::size_t>> path_hits; // [length - 1][path]
    std::vector<std::size_t> open_hits;              // [length - 1]
};

double histogram_median(const std::map<std::size_t, std::size_t>& hist, std::size_t total) {
    if (total == 0) return 0.0;
    // Average of the order statistics at (total - 1) / 2 and total / 2.
    const std::size_t lo_rank = (total - 1) / 2;
    const std::size_t hi_rank = total / 2;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t seen = 0;
    for (const auto& [size, count] : hist) {
        if (lo_rank >= seen && lo_rank < seen + count) lo = static_cast<double>(size);
        if (hi_rank >= seen && hi_rank < seen + count) {
            hi = static_cast<double>(size);
            break;
        }
        seen += count;
    }
    return 0.5 * (lo + hi);
}

} // namespace

SweepResult evaluate_cell(const SweepPoint& cell, const Thresholds& thresholds, int max_path_length) {
    validate_cell(cell);
    thresholds.validate();
    const Window window = cell.window();

    std::vector<std::vector<Path>> paths;
    if (max_path_length > 0) {
        if (cell.boundary != BoundaryCondition::AllPlus)
            throw std::invalid_argument("path statistics need the plus boundary");
        const Site center{cell.size / 2, cell.size / 2};
        for (int n = 1; n <= max_path_length; ++n) {
            paths.push_back(paths_from_neighbors(center, n, window));
            require_interior_paths(window, paths.back());
        }
    }

    std::vector<ReplicaTally> tallies(static_cast<std::size_t>(cell.replicas));
    for_each_replica(cell.replicas, [&](std::size_t r) {
        ReplicaTally& t = tallies[r];
        t.path_hits.resize(paths.size());
        t.open_hits.assign(paths.size(), 0);
        for (std::size_t n = 0; n < paths.size(); ++n) t.path_hits[n].assign(paths[n].size(), 0);

        for_each_observed_sample(cell, r, [&](const Configuration& x) {
            const ContextCensus census = context_census(x);
            if (census.spanning) ++t.spanning;
            t.max_cluster = std::max(t.max_cluster, census.max_minus_cluster);
            for (std::size_t k = 0; k < census.sizes.size(); ++k) {
                if (window.on_edge(window.site(k))) continue;
                ++t.interior_sites;
                if (census.sizes[k]) {
                    ++t.resolved;
                    t.size_sum += static_cast<double>(*census.sizes[k]);
                    ++t.histogram[*census.sizes[k]];
                } else {
                    ++t.truncated;
                }
            }
            for (std::size_t n = 0; n < paths.size(); ++n) {
                bool any = false;
                for (std::size_t p = 0; p < paths[n].size(); ++p) {
                    if (all_minus(x, paths[n][p])) {
                        ++t.path_hits[n][p];
                        any = true;
                    }
                }
                if (any) ++t.open_hits[n];
            }
        });
    });

    SweepResult res;
    res.cell = cell;
    if (cell.method == SamplingKind::Mcmc) {
        const McmcMethod m = resolved(cell.mcmc, window);
        res.burn_in = m.burn_in;
        res.thin = m.thin;
    }
    const std::size_t samples = cell.sample_count();

    std::size_t spanning = 0;
    std::size_t truncated = 0;
    std::size_t interior_sites = 0;
    double size_sum = 0.0;
    for (const ReplicaTally& t : tallies) {
        spanning += t.spanning;
        truncated += t.truncated;
        interior_sites += t.interior_sites;
        res.resolved_contexts += t.resolved;
        size_sum += t.size_sum;
        res.max_minus_cluster = std::max(res.max_minus_cluster, t.max_cluster);
        for (const auto& [size, count] : t.histogram) res.context_size_histogram[size] += count;
    }
    res.spanning = binomial_estimate(spanning, samples);
    res.truncated_fraction = interior_sites > 0 ? binomial_estimate(truncated, interior_sites) : Estimate{};
    if (res.resolved_contexts > 0) {
        res.mean_context_size = size_sum / static_cast<double>(res.resolved_contexts);
        res.median_context_size = histogram_median(res.context_size_histogram, res.resolved_contexts);
    }

    for (std::size_t n = 0; n < paths.size(); ++n) {
        PathLengthStats s;
        s.length = static_cast<int>(n + 1);
        s.path_count = paths[n].size();
        std::size_t best = 0;
        std::size_t total_hits = 0;
        std::size_t open = 0;
        for (std::size_t p = 0; p < paths[n].size(); ++p) {
            std::size_t h = 0;
            for (const ReplicaTally& t : tallies) h += t.path_hits[n][p];
            best = std::max(best, h);
            total_hits += h;
        }
        for (const ReplicaTally& t : tallies) open += t.open_hits[n];
        s.max_path_freq = binomial_estimate(best, samples);
        s.mean_path_freq = static_cast<double>(total_hits) /
                           (static_cast<double>(samples) * static_cast<double>(paths[n].size()));
        s.open_path_prob = binomial_estimate(open, samples);
        s.lemma1_bound = lemma1_bound(cell.beta, cell.epsilon, s.length);
        s.open_path_bound = open_path_expectation_bound(cell.beta, cell.epsilon, s.length);
        res.paths.push_back(s);
    }

    res.theory = theory_flags(cell.beta, cell.epsilon, thresholds);
    res.thresholds = thresholds;
    res.code_version = kVersion;
    return res;
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

json estimate_json(const Estimate& e) {
    return json{{"value", e.value}, {"stderr", e.stderr_}, {"n", e.n}};
}

Estimate estimate_from(const json& j) {
    return {j.at("value").get<double>(), j.at("stderr").get<double>(), j.at("n").get<std::size_t>()};
}

json result_json(const SweepResult& r) {
    json cell{{"index", r.cell.cell_index},
              {"beta", r.cell.beta},
              {"epsilon", r.cell.epsilon},
              {"boundary", to_string(r.cell.boundary)},
              {"size", r.cell.size},
              {"replicas", r.cell.replicas},
              {"samples_per_replica", r.cell.samples_per_replica},
              {"method", to_string(r.cell.method)},
              {"burn_in_setting", r.cell.mcmc.burn_in},
              {"thin_setting", r.cell.mcmc.thin},
              {"burn_in", r.burn_in},
              {"thin", r.thin}};

    json hist = json::array();
    for (const auto& [size, count] : r.context_size_histogram) hist.push_back(json::array({size, count}));
    json paths = json::array();
    for (const PathLengthStats& p : r.paths)
        paths.push_back(json{{"length", p.length},
                             {"path_count", p.path_count},
                             {"max_path_freq", estimate_json(p.max_path_freq)},
                             {"mean_path_freq", p.mean_path_freq},
                             {"open_path_prob", estimate_json(p.open_path_prob)},
                             {"lemma1_bound", p.lemma1_bound},
                             {"open_path_bound", p.open_path_bound}});
    json estimates{{"spanning", estimate_json(r.spanning)},
                   {"context_size",
                    {{"mean", r.mean_context_size},
                     {"median", r.median_context_size},
                     {"resolved", r.resolved_contexts},
                     {"histogram", hist}}},
                   {"truncated_fraction", estimate_json(r.truncated_fraction)},
                   {"max_minus_cluster", r.max_minus_cluster},
                   {"paths", paths}};

    const TheoryFlags& t = r.theory;
    json theory{{"lambda0_plus", t.lambda0_plus},
                {"lambda0_minus", t.lambda0_minus},
                {"thm2_finite", t.thm2_finite},
                {"thm2_infinite", t.thm2_infinite},
                {"thm3_stated", t.thm3_stated},
                {"thm3_beta_admissible", t.thm3_beta_admissible},
                {"thm3_proof_region", t.thm3_proof_region},
                {"above_beta_c", t.above_beta_c},
                {"remark_beta_bound", t.remark_beta_bound ? json(*t.remark_beta_bound) : json(nullptr)},
                {"thm3_epsilon_bound", t.thm3_epsilon_bound}};

    json provenance{{"seed", r.cell.seed},
                    {"code_version", r.code_version},
                    {"p_star", r.thresholds.p_star},
                    {"beta_c", r.thresholds.beta_c},
                    {"schema_version", kResultsSchemaVersion}};
    return json{{"cell", cell}, {"estimates", estimates}, {"theory", theory}, {"provenance", provenance}};
}

SweepResult result_from(const json& j) {
    SweepResult r;
    const json& c = j.at("cell");
    r.cell.cell_index = c.at("index").get<std::size_t>();
    r.cell.beta = c.at("beta").get<double>();
    r.cell.epsilon = c.at("epsilon").get<double>();
    r.cell.boundary = parse_boundary_condition(c.at("boundary").get<std::string>());
    r.cell.size = c.at("size").get<int>();
    r.cell.replicas = c.at("replicas").get<int>();
    r.cell.samples_per_replica = c.at("samples_per_replica").get<int>();
    r.cell.method = c.at("method").get<std::string>() == "exact" ? SamplingKind::Exact : SamplingKind::Mcmc;
    r.cell.mcmc.burn_in = c.at("burn_in_setting").get<std::uint64_t>();
    r.cell.mcmc.thin = c.at("thin_setting").get<std::uint64_t>();
    r.burn_in = c.at("burn_in").get<std::uint64_t>();
    r.thin = c.at("thin").get<std::uint64_t>();

    const json& e = j.at("estimates");
    r.spanning = estimate_from(e.at("spanning"));
    const json& cs = e.at("context_size");
    r.mean_context_size = cs.at("mean").get<double>();
    r.median_context_size = cs.at("median").get<double>();
    r.resolved_contexts = cs.at("resolved").get<std::size_t>();
    for (const json& pair : cs.at("histogram"))
        r.context_size_histogram[pair.at(0).get<std::size_t>()] = pair.at(1).get<std::size_t>();
    r.truncated_fraction = estimate_from(e.at("truncated_fraction"));
    r.max_minus_cluster = e.at("max_minus_cluster").get<std::size_t>();
    for (const json& p : e.at("paths")) {
        PathLengthStats s;
        s.length = p.at("length").get<int>();
        s.path_count = p.at("path_count").get<std::size_t>();
        s.max_path_freq = estimate_from(p.at("max_path_freq"));
        s.mean_path_freq = p.at("mean_path_freq").get<double>();
        s.open_path_prob = estimate_from(p.at("open_path_prob"));
        s.lemma1_bound = p.at("lemma1_bound").get<double>();
        s.open_path_bound = p.at("open_path_bound").get<double>();
        r.paths.push_back(s);
    }

    const json& t = j.at("theory");
    r.theory.lambda0_plus = t.at("lambda0_plus").get<double>();
    r.theory.lambda0_minus = t.at("lambda0_minus").get<double>();
    r.theory.thm2_finite = t.at("thm2_finite").get<bool>();
    r.theory.thm2_infinite = t.at("thm2_infinite").get<bool>();
    r.theory.thm3_stated = t.at("thm3_stated").get<bool>();
    r.theory.thm3_beta_admissible = t.at("thm3_beta_admissible").get<bool>();
    r.theory.thm3_proof_region = t.at("thm3_proof_region").get<bool>();
    r.theory.above_beta_c = t.at("above_beta_c").get<bool>();
    if (!t.at("remark_beta_bound").is_null()) r.theory.remark_beta_bound = t.at("remark_beta_bound").get<double>();
    r.theory.thm3_epsilon_bound = t.at("thm3_epsilon_bound").get<double>();

    const json& p = j.at("provenance");
    r.cell.seed = p.at("seed").get<std::uint64_t>();
    r.code_version = p.at("code_version").get<std::string>();
    r.thresholds.p_star = p.at("p_star").get<double>();
    r.thresholds.beta_c = p.at("beta_c").get<double>();
    return r;
}

std::string flag(bool b) { return b ? "1" : "0"; }

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string describe(const SweepPoint& c) {
    return "cell " + std::to_string(c.cell_index) + " (beta=" + format_number(c.beta) +
           ", eps=" + format_number(c.epsilon) + ", boundary=" + to_string(c.boundary) +
           ", size=" + std::to_string(c.size) + ")";
}

} // namespace

std::string results_csv(const std::vector<SweepResult>& input) {
    std::vector<const SweepResult*> rows;
    for (const auto& r : input) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepResult* a, const SweepResult* b) { return a->cell.cell_index < b->cell.cell_index; });

    std::size_t max_len = 0;
    for (const auto* r : rows) max_len = std::max(max_len, r->paths.size());

    std::ostringstream out;
    out << "cell,beta,epsilon,boundary,size,replicas,samples_per_replica,method,burn_in,thin,seed,"
           "spanning_prob,spanning_stderr,spanning_n,mean_context_size,median_context_size,resolved_contexts,"
           "truncated_fraction,truncated_stderr,truncated_n,max_minus_cluster,"
           "lambda0_plus,lambda0_minus,thm2_finite,thm2_infinite,thm3_stated,thm3_beta_admissible,"
           "thm3_proof_region,above_beta_c,remark_beta_bound,thm3_epsilon_bound";
    for (std::size_t n = 1; n <= max_len; ++n) {
        const std::string k = std::to_string(n);
        out << ",path" << k << "_count,path" << k << "_max_freq,path" << k << "_max_stderr,path" << k
            << "_mean_freq,open_path" << k << "_prob,open_path" << k << "_stderr,lemma1_bound" << k
            << ",open_path_bound" << k;
    }
    out << ",p_star,beta_c,code_version,schema_version\n";

    for (const SweepResult* r : rows) {
        const SweepPoint& c = r->cell;
        const TheoryFlags& t = r->theory;
        out << c.cell_index << ',' << format_number(c.beta) << ',' << format_number(c.epsilon) << ','
            << to_string(c.boundary) << ',' << c.size << ',' << c.replicas << ',' << c.samples_per_replica << ','
            << to_string(c.method) << ',' << r->burn_in << ',' << r->thin << ',' << c.seed << ','
            << format_number(r->spanning.value) << ',' << format_number(r->spanning.stderr_) << ','
            << r->spanning.n << ',' << format_number(r->mean_context_size) << ','
            << format_number(r->median_context_size) << ',' << r->resolved_contexts << ','
            << format_number(r->truncated_fraction.value) << ',' << format_number(r->truncated_fraction.stderr_)
            << ',' << r->truncated_fraction.n << ',' << r->max_minus_cluster << ','
            << format_number(t.lambda0_plus) << ',' << format_number(t.lambda0_minus) << ','
            << flag(t.thm2_finite) << ',' << flag(t.thm2_infinite) << ',' << flag(t.thm3_stated) << ','
            << flag(t.thm3_beta_admissible) << ',' << flag(t.thm3_proof_region) << ',' << flag(t.above_beta_c)
            << ',' << (t.remark_beta_bound ? format_number(*t.remark_beta_bound) : std::string("NA")) << ','
            << format_number(t.thm3_epsilon_bound);
        for (std::size_t n = 0; n < max_len; ++n) {
            if (n >= r->paths.size()) {
                out << ",NA,NA,NA,NA,NA,NA,NA,NA";
                continue;
            }
            const PathLengthStats& p = r->paths[n];
            out << ',' << p.path_count << ',' << format_number(p.max_path_freq.value) << ','
                << format_number(p.max_path_freq.stderr_) << ',' << format_number(p.mean_path_freq) << ','
                << format_number(p.open_path_prob.value) << ',' << format_number(p.open_path_prob.stderr_) << ','
                << format_number(p.lemma1_bound) << ',' << format_number(p.open_path_bound);
        }
        out << ',' << format_number(r->thresholds.p_star) << ',' << format_number(r->thresholds.beta_c) << ','
            << r->code_version << ',' << kResultsSchemaVersion << '\n';
    }
    return out.str();
}

std::string summary_json(const SweepConfig& config, const std::vector<SweepResult>& input) {
    std::vector<const SweepResult*> rows;
    for (const auto& r : input) rows.push_back(&r);
    std::stable_sort(rows.begin(), rows.end(),
                     [](const SweepResult* a, const SweepResult* b) { return a->cell.cell_index < b->cell.cell_index; });
    json results = json::array();
    for (const auto* r : rows) results.push_back(result_json(*r));
    json j{{"schema_version", kResultsSchemaVersion},
           {"code_version", kVersion},
           {"config", json::parse(canonical_config_json(config))},
           {"results", results}};
    return j.dump(2) + "\n";
}

std::vector<SweepResult> parse_summary_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        const int schema = j.at("schema_version").get<int>();
        if (schema != kResultsSchemaVersion)
            throw std::invalid_argument("summary schema version " + std::to_string(schema) + " is not supported");
        std::vector<SweepResult> out;
        for (const json& r : j.at("results")) out.push_back(result_from(r));
        return out;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed summary: ") + e.what());
    }
}

std::vector<SweepResult> run_sweep(const SweepConfig& config) {
    return run_sweep(config, config.output_dir);
}

std::vector<SweepResult> run_sweep(const SweepConfig& config, const std::filesystem::path& dir) {
    const std::vector<SweepPoint> cells = expand_cells(config); // validates
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory " + dir.string() + ": " + ec.message());

    const std::string fingerprint = hex(fnv1a(canonical_config_json(config)));
    const std::filesystem::path progress = dir / "progress.jsonl";

    std::map<std::size_t, SweepResult> done;
    if (std::filesystem::exists(progress)) {
        std::ifstream in(progress);
        std::string line;
        if (std::getline(in, line)) {
            bool same = false;
            try {
                same = json::parse(line).at("fingerprint").get<std::string>() == fingerprint;
            } catch (const json::exception&) {
                same = false;
            }
            // A torn final line from an interrupted write is dropped.
            while (same && std::getline(in, line)) {
                try {
                    SweepResult r = result_from(json::parse(line));
                    if (r.cell.cell_index < cells.size()) done.emplace(r.cell.cell_index, std::move(r));
                } catch (const std::exception&) {
                    break;
                }
            }
            if (!same) done.clear();
        }
    }
    {
        // Rewrite the progress file so it holds exactly the results kept.
        std::ofstream out(progress, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + progress.string());
        out << json{{"fingerprint", fingerprint}}.dump() << '\n';
        for (const auto& [k, r] : done) out << result_json(r).dump() << '\n';
    }

    std::vector<SweepResult> results;
    for (const auto& [k, r] : done) results.push_back(r);
    for (const SweepPoint& cell : cells) {
        if (done.count(cell.cell_index)) continue;
        try {
            SweepResult r = evaluate_cell(cell, config.thresholds, config.max_path_length);
            std::ofstream out(progress, std::ios::binary | std::ios::app);
            out << result_json(r).dump() << '\n';
            out.flush();
            if (!out) throw std::runtime_error("cannot append to " + progress.string());
            results.push_back(std::move(r));
            write_file(dir / "results.csv", results_csv(results));
        } catch (const std::exception& e) {
            throw std::runtime_error(describe(cell) + ": " + e.what());
        }
    }

    std::sort(results.begin(), results.end(),
              [](const SweepResult& a, const SweepResult& b) { return a.cell.cell_index < b.cell.cell_index; });
    write_file(dir / "results.csv", results_csv(results));
    write_file(dir / "summary.json", summary_json(config, results));
    std::filesystem::remove(progress, ec);
    return results;
}

} // namespace vnrf
