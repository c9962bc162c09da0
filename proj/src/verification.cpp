#include "vnrf/verification.hpp"

#include "vnrf/context.hpp"
#include "vnrf/experiments.hpp"
#include "vnrf/lattice.hpp"
#include "vnrf/oracle.hpp"
#include "vnrf/sampler.hpp"
#include "vnrf/spec.hpp"
#include "vnrf/theory.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <fstream>
#include <sstream>

namespace vnrf {

namespace {

std::string num(double v, const char* fmt = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v);
    return buf;
}

std::string read_bytes(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SiteSet row_of(int n) {
    std::vector<Site> s;
    for (int k = 0; k < n; ++k) s.push_back({0, k});
    return SiteSet(std::move(s));
}

SiteSet subset_of(const SiteSet& outer, std::uint64_t mask) {
    std::vector<Site> s;
    for (std::size_t k = 0; k < outer.size(); ++k)
        if ((mask >> k) & 1U) s.push_back(outer[k]);
    return SiteSet(std::move(s));
}

// 1. Every inner region of a 9-site outer region, both constant exteriors.
bool check_kernel_consistency(std::string& detail) {
    const std::vector<SiteSet> outers{Window::square(3, BoundaryCondition::AllPlus).sites(), row_of(9)};
    double worst = 0.0;
    std::size_t cases = 0;
    for (double beta : {0.0, 0.5, 1.0}) {
        const auto spec = make_specification({beta, Model::HomogeneousIsing});
        for (int ext : {1, -1}) {
            for (const SiteSet& outer : outers) {
                for (std::uint64_t m = 0; m < (std::uint64_t{1} << outer.size()); ++m) {
                    worst = std::max(worst, check_consistency(*spec, subset_of(outer, m), outer, constant_exterior(ext)));
                    ++cases;
                }
            }
        }
    }
    detail = std::to_string(cases) + " (beta, exterior, inner, outer) cases, max discrepancy " + num(worst) +
             " (tolerance 1e-12)";
    return worst <= 1e-12;
}

// 2. Exact conditionals on the 3x3 plus-boundary window at the center.
bool check_context_formula(std::string& detail) {
    const Window window = Window::square(3, BoundaryCondition::AllPlus);
    const Site center{1, 1};
    double formula_gap = 0.0;
    double within = 0.0;
    double control = 0.0;
    std::size_t resolved = 0;
    for (double beta : {0.0, 0.8}) {
        for (double eps : {0.2, 0.5}) {
            const SpecificationParams params{beta, Model::HomogeneousIsing};
            const NoiseParams noise{eps};
            const ExactObservedMeasure measure(params, noise, window);
            for (std::uint64_t m = 0; m < 512; ++m) {
                const Configuration x = Configuration::from_mask(window, m);
                if (!compute_context(x, center).resolved()) continue;
                ++resolved;
                formula_gap = std::max(formula_gap, std::abs(conditional_from_phi(params, noise, x, center) -
                                                             measure.conditional_plus(x, center)));
            }
            const MeasurabilityReport report = verify_context_measurability(params, noise, window, SiteSet({center}));
            within = std::max(within, report.within_context);
            if (beta > 0.0) control = std::max(control, report.across_contexts);
        }
    }
    detail = std::to_string(resolved) + " resolved cases, formula gap " + num(formula_gap) + ", within-context gap " +
             num(within) + " (tolerance 1e-10), negative control gap " + num(control) + " (needs > 1e-3)";
    return resolved > 0 && formula_gap <= 1e-10 && within <= 1e-10 && control > 1e-3;
}

// 3. Growth algorithm against the literal intersection.
bool check_context_equivalence(std::string& detail) {
    std::size_t compared = 0;
    std::size_t mismatches = 0;
    auto compare_all = [&](const Configuration& x) {
        for (Site i : x.window().sites()) {
            ++compared;
            if (!(compute_context(x, i) == brute_force_context(x, i))) ++mismatches;
        }
    };
    const Window w3 = Window::square(3, BoundaryCondition::AllPlus);
    for (std::uint64_t m = 0; m < 512; ++m) compare_all(Configuration::from_mask(w3, m));
    const Window w4 = Window::square(4, BoundaryCondition::AllPlus);
    RngStream rng(20240607, 3);
    for (int k = 0; k < 10000; ++k) compare_all(Configuration::from_mask(w4, rng.next_u64() & 0xFFFFULL));
    detail = std::to_string(compared) + " (configuration, site) pairs, " + std::to_string(mismatches) + " mismatches";
    return mismatches == 0;
}

// 4. Path frequencies on a 13x13 plus-boundary chain.
bool check_lemma1(std::string& detail) {
    SweepPoint cell;
    cell.beta = 1.5;
    cell.epsilon = 0.05;
    cell.boundary = BoundaryCondition::AllPlus;
    cell.size = 13;
    cell.replicas = 10;
    cell.samples_per_replica = 10000;
    cell.seed = 4;
    const Site center{6, 6};
    std::size_t paths_tested = 0;
    double worst_margin = -1.0; // max of (freq - bound - 3 se), must stay <= 0
    std::string per_length;
    for (int n = 1; n <= 4; ++n) {
        const std::vector<Path> paths = paths_from_neighbors(center, n, cell.window());
        const std::vector<Estimate> est = estimate_path_minus_probability(cell, paths);
        const double bound = lemma1_bound(cell.beta, cell.epsilon, n);
        double max_freq = 0.0;
        for (const Estimate& e : est) {
            worst_margin = std::max(worst_margin, e.value - bound - 3.0 * e.stderr_);
            max_freq = std::max(max_freq, e.value);
        }
        paths_tested += paths.size();
        per_length += " n=" + std::to_string(n) + ": max " + num(max_freq) + " vs bound " + num(bound) + ";";
    }
    detail = std::to_string(paths_tested) + " paths, 1e5 samples each;" + per_length;
    return worst_margin <= 0.0;
}

// 5. Spanning probabilities under opposite boundaries above beta_c.
bool check_dichotomy(std::string& detail) {
    SweepPoint cell;
    cell.beta = 1.0;
    cell.epsilon = 0.1;
    cell.size = 64;
    cell.replicas = 200;
    cell.seed = 5;
    cell.boundary = BoundaryCondition::AllMinus;
    cell.cell_index = 0;
    const Estimate minus = estimate_spanning_probability(cell);
    cell.boundary = BoundaryCondition::AllPlus;
    cell.cell_index = 1;
    const Estimate plus = estimate_spanning_probability(cell);
    const double se = std::sqrt(minus.stderr_ * minus.stderr_ + plus.stderr_ * plus.stderr_);
    const double gap = minus.value - plus.value;

    cell.beta = 2.0;
    cell.epsilon = 0.05;
    cell.cell_index = 2;
    const bool in_region = thm3_stated_region(cell.beta, cell.epsilon);
    const Estimate deep = estimate_spanning_probability(cell);
    detail = "beta=1 eps=0.1: minus " + num(minus.value) + " +- " + num(minus.stderr_) + ", plus " + num(plus.value) +
             " +- " + num(plus.stderr_) + ", gap " + num(gap) + " vs 10 se = " + num(10 * se) +
             "; beta=2 eps=0.05 plus: " + num(deep.value) + " (needs < 0.1)";
    return in_region && gap > 10.0 * se && deep.value < 0.1;
}

// 6. Stochastic domination by the product measure with density (1 - eps) lambda0+.
bool check_domination(std::string& detail) {
    const double beta = 0.03;
    const double eps = 0.02;
    const Thresholds t;
    const auto bound = remark_beta_bound(eps, t);
    const double lambda = extremal_rates(SpecificationParams{beta, Model::HomogeneousIsing}).lambda0_plus;
    if (!bound || !(beta < *bound) || !thm2_finite_condition(eps, lambda, t)) {
        detail = "(beta, eps) = (0.03, 0.02) is not inside the finite-context region";
        return false;
    }
    const double target = std::pow((1.0 - eps) * lambda, 4);
    const std::vector<Site> block{{7, 7}, {7, 8}, {8, 7}, {8, 8}};
    bool ok = true;
    std::string parts;
    std::size_t index = 0;
    for (BoundaryCondition bc : {BoundaryCondition::AllPlus, BoundaryCondition::AllMinus}) {
        SweepPoint cell;
        cell.beta = beta;
        cell.epsilon = eps;
        cell.boundary = bc;
        cell.size = 16;
        cell.replicas = 20;
        cell.samples_per_replica = 2000;
        cell.seed = 6;
        cell.cell_index = index++;
        std::vector<std::size_t> hits(static_cast<std::size_t>(cell.replicas), 0);
        for (int r = 0; r < cell.replicas; ++r) {
            for_each_observed_sample(cell, static_cast<std::size_t>(r), [&](const Configuration& x) {
                for (Site s : block)
                    if (x.at(s) != 1) return;
                ++hits[static_cast<std::size_t>(r)];
            });
        }
        std::size_t total = 0;
        for (std::size_t h : hits) total += h;
        const Estimate e = binomial_estimate(total, cell.sample_count());
        ok = ok && e.value >= target - 4.0 * e.stderr_;
        parts += " " + to_string(bc) + " boundary " + num(e.value) + " +- " + num(e.stderr_) + ";";
    }
    detail = "P(2x2 block all +1):" + parts + " product bound " + num(target) + " (remark beta bound " +
             num(*bound) + ")";
    return ok;
}

// 7. Bernoulli fields: where does the 64x64 spanning probability cross 1/2?
bool check_percolation_calibration(std::string& detail) {
    const Window window = Window::square(64, BoundaryCondition::Free);
    const int replicas = 400;
    double prev_p = 0.0;
    double prev_v = 0.0;
    std::optional<double> crossing;
    std::size_t index = 0;
    for (int k = 0; k <= 20; ++k) {
        const double p = 0.50 + 0.01 * k;
        FieldSource source = [&](RngStream& rng) { return sample_noise_field(NoiseParams{p}, window, rng); };
        const double v = estimate_spanning_probability(source, replicas, 7, index++).value;
        if (!crossing && v >= 0.5) {
            crossing = k == 0 ? p : prev_p + (0.5 - prev_v) * (p - prev_p) / (v - prev_v);
        }
        prev_p = p;
        prev_v = v;
    }
    if (!crossing) {
        detail = "spanning probability never reached 1/2 on p in [0.50, 0.70]";
        return false;
    }
    detail = "crossing at p = " + num(*crossing) + " (window [0.55, 0.64], p* = 0.592746)";
    return *crossing >= 0.55 && *crossing <= 0.64;
}

// 8. Contour lengths and counts.
bool check_contours(std::string& detail) {
    const Window window = Window::square(3, BoundaryCondition::AllPlus);
    std::size_t bad = 0;
    for (std::uint64_t m = 0; m < 512; ++m) {
        const Configuration x = Configuration::from_mask(window, m);
        std::size_t total = 0;
        for (const Contour& c : extract_contours(x)) total += c.length();
        if (total != disagreeing_bond_count(x)) ++bad;
    }
    bool counts_ok = true;
    std::string counts;
    for (int l : {4, 6, 8}) {
        const std::size_t n = enumerate_contours_around({0, 0}, l).size();
        const std::uint64_t bound = contour_count_bound(l);
        counts_ok = counts_ok && n <= bound;
        counts += " l=" + std::to_string(l) + ": " + std::to_string(n) + " <= " + std::to_string(bound) + ";";
    }
    detail = std::to_string(bad) + " of 512 configurations with length != disagreeing bonds;" + counts;
    return bad == 0 && counts_ok;
}

// 9. Glauber histogram against the exact 3x3 measure.
bool check_mcmc(std::string& detail) {
    const SpecificationParams params{0.7, Model::HomogeneousIsing};
    const Window window = Window::square(3, BoundaryCondition::AllPlus);
    const std::vector<double> exact = finite_volume_kernel(params, window.sites(), Configuration(window, Spin{1})).weights();
    const RngStream rng(9, 0);
    ChainState state = initial_chain(params, window);
    const std::uint64_t burn_in = default_burn_in(window);
    const std::uint64_t thin = 3;
    const std::size_t samples = 200000;
    for (std::uint64_t t = 0; t < burn_in; ++t) glauber_sweep_in_place(state, rng);
    std::vector<std::size_t> counts(exact.size(), 0);
    for (std::size_t s = 0; s < samples; ++s) {
        for (std::uint64_t t = 0; t < thin; ++t) glauber_sweep_in_place(state, rng);
        ++counts[state.configuration.plus_mask()];
    }
    double tv = 0.0;
    for (std::size_t m = 0; m < exact.size(); ++m)
        tv += std::abs(static_cast<double>(counts[m]) / static_cast<double>(samples) - exact[m]);
    tv *= 0.5;
    detail = "total variation " + num(tv) + " over " + std::to_string(samples) + " samples (needs < 0.01)";
    return tv < 0.01;
}

// 10. Two sweeps with the same config write identical bytes.
bool check_determinism(std::string& detail) {
    SweepConfig config;
    config.betas = {0.3, 1.0};
    config.epsilons = {0.1};
    config.boundaries = {BoundaryCondition::AllPlus};
    config.sizes = {12};
    config.replicas = 4;
    config.samples_per_replica = 2;
    config.seed = 10;
    config.burn_in = 50;
    config.thin = 2;
    config.max_path_length = 3;

    const auto base = std::filesystem::temp_directory_path() /
                      ("vnrf_determinism_" + std::to_string(std::chrono::steady_clock::now().time_since_epoch().count()));
    run_sweep(config, base / "a");
    run_sweep(config, base / "b");
    bool same = true;
    for (const char* file : {"results.csv", "summary.json"})
        same = same && read_bytes(base / "a" / file) == read_bytes(base / "b" / file) &&
               !read_bytes(base / "a" / file).empty();
    std::error_code ec;
    std::filesystem::remove_all(base, ec);
    detail = same ? "results.csv and summary.json byte-identical across two runs" : "outputs differ between runs";
    return same;
}

} // namespace

std::vector<AcceptanceCheck> acceptance_checks() {
    return {
        {1, "kernel consistency", 10.0, check_kernel_consistency},
        {2, "context formula exactness", 60.0, check_context_formula},
        {3, "context algorithm vs brute force", 60.0, check_context_equivalence},
        {4, "path probability bound", 300.0, check_lemma1},
        {5, "boundary dichotomy above beta_c", 600.0, check_dichotomy},
        {6, "product-measure domination", 120.0, check_domination},
        {7, "percolation self-calibration", 300.0, check_percolation_calibration},
        {8, "contour diagnostics", 30.0, check_contours},
        {9, "MCMC validity", 120.0, check_mcmc},
        {10, "sweep determinism", 600.0, check_determinism},
    };
}

CheckResult run_check(const AcceptanceCheck& check) {
    CheckResult r;
    r.id = check.id;
    r.name = check.name;
    r.limit_seconds = check.limit_seconds;
    const auto start = std::chrono::steady_clock::now();
    try {
        r.passed = check.run(r.detail);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.limit_seconds) {
        r.passed = false;
        r.detail += "; exceeded time limit";
    }
    return r;
}

std::string format_result(const CheckResult& r) {
    return std::string(r.passed ? "PASS" : "FAIL") + " [" + std::to_string(r.id) + "] " + r.name + " (" +
           num(r.seconds, "%.1f") + " s / limit " + num(r.limit_seconds, "%.0f") + " s): " + r.detail;
}

} // namespace vnrf
