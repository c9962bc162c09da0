#include "vnrf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>

namespace vnrf {

double channel_probability(Spin observed, Spin hidden, double eps) {
    if (hidden < 0) return observed < 0 ? 1.0 : 0.0;
    return observed < 0 ? eps : 1.0 - eps;
}

ExactObservedMeasure::ExactObservedMeasure(const SpecificationParams& params, const NoiseParams& noise,
                                           const Window& window)
    : params_(params), noise_(noise), window_(window) {
    validate(noise);
    const std::size_t n = window.site_count();
    if (n > kObservedMeasureCap)
        throw std::length_error("exact observed measure supports at most " +
                                std::to_string(kObservedMeasureCap) + " sites, window has " + std::to_string(n));
    hidden_ = finite_volume_kernel(params, window.sites(), Configuration(window, Spin{1})).weights();

    // Apply the per-site channel one coordinate at a time. For the pair of
    // masks differing only at site k: hidden -1 stays -1; hidden +1 turns
    // into -1 with probability eps.
    table_ = hidden_;
    const double eps = noise.epsilon;
    for (std::size_t k = 0; k < n; ++k) {
        const std::uint64_t bit = std::uint64_t{1} << k;
        for (std::uint64_t m = 0; m < table_.size(); ++m) {
            if (m & bit) continue;
            const double from_minus = table_[m];
            const double from_plus = table_[m | bit];
            table_[m] = from_minus + eps * from_plus;
            table_[m | bit] = (1.0 - eps) * from_plus;
        }
    }
}

double ExactObservedMeasure::probability(const Configuration& observed) const {
    if (!observed.window().same_geometry(window_)) throw std::invalid_argument("configuration is on a different window");
    return table_[observed.plus_mask()];
}

double ExactObservedMeasure::conditional_plus(const Configuration& x, Site i) const {
    if (!x.window().same_geometry(window_)) throw std::invalid_argument("configuration is on a different window");
    const std::uint64_t bit = std::uint64_t{1} << window_.index(i);
    const std::uint64_t m = x.plus_mask();
    const double plus = table_[m | bit];
    const double minus = table_[m & ~bit];
    return plus / (plus + minus);
}

double ExactObservedMeasure::marginal_plus(Site i) const {
    const std::uint64_t bit = std::uint64_t{1} << window_.index(i);
    double p = 0.0;
    for (std::uint64_t m = 0; m < table_.size(); ++m)
        if (m & bit) p += table_[m];
    return p;
}

ExactObservedMeasure exact_observed_measure(const SpecificationParams& params, const NoiseParams& noise,
                                            const Window& window) {
    return ExactObservedMeasure(params, noise, window);
}

double phi(const SpecificationParams& params, const NoiseParams& noise, const SiteSet& interior,
           const Configuration& z) {
    validate(noise);
    for (Site s : outer_boundary(interior)) {
        if (!z.window().contains(s))
            throw std::invalid_argument("configuration does not cover the ring around the interior");
        if (z.at(s) != 1)
            throw std::invalid_argument("phi needs z == +1 on the boundary; site " + to_string(s) + " is -1");
    }
    const auto spec = make_specification(params);
    const KernelTable kernel = finite_volume_kernel(*spec, interior, constant_exterior(1));

    std::vector<Spin> target;
    target.reserve(interior.size());
    for (Site s : interior) target.push_back(z.at(s));

    double total = 0.0;
    for (std::uint64_t m = 0; m < kernel.weights().size(); ++m) {
        double w = kernel.weights()[m];
        for (std::size_t k = 0; k < target.size() && w != 0.0; ++k)
            w *= channel_probability(target[k], ((m >> k) & 1U) ? Spin{1} : Spin{-1}, noise.epsilon);
        total += w;
    }
    return total;
}

double conditional_from_phi(const SpecificationParams& params, const NoiseParams& noise,
                            const Configuration& x, Site i) {
    const Context ctx = compute_context(x, i);
    if (!ctx.resolved())
        throw std::invalid_argument("context at " + to_string(i) + " is truncated by the window");
    const SiteSet lambda = interior(ctx.closure());
    if (lambda.size() > kEnumerationCap)
        throw std::length_error("context interior of " + std::to_string(lambda.size()) +
                                " sites exceeds the enumeration cap");
    Configuration z = x;
    z.set(i, 1);
    const double plus = phi(params, noise, lambda, z);
    z.set(i, -1);
    const double minus = phi(params, noise, lambda, z);
    return plus / (plus + minus);
}

namespace {

struct GroupStats {
    double lo = 2.0;
    double hi = -1.0;
    std::uint64_t lo_mask = 0;
    std::uint64_t hi_mask = 0;
    bool resolved = false;

    void add(double v, std::uint64_t mask) {
        if (v < lo) {
            lo = v;
            lo_mask = mask;
        }
        if (v > hi) {
            hi = v;
            hi_mask = mask;
        }
    }
};

std::vector<int> context_key(const Context& ctx, const Configuration& x) {
    std::vector<int> key{ctx.resolved() ? 1 : 0};
    for (Site s : ctx.members) {
        key.push_back(s.i1);
        key.push_back(s.i2);
        key.push_back(x.at(s));
    }
    return key;
}

} // namespace

MeasurabilityReport verify_context_measurability(const SpecificationParams& params, const NoiseParams& noise,
                                                 const Window& window, const SiteSet& sites) {
    const ExactObservedMeasure measure(params, noise, window);
    const SiteSet targets = sites.empty() ? window.sites() : sites;
    const std::uint64_t count = std::uint64_t{1} << window.site_count();

    MeasurabilityReport report;
    for (Site i : targets) {
        std::map<std::vector<int>, GroupStats> groups;
        for (std::uint64_t m = 0; m < count; ++m) {
            const Configuration x = Configuration::from_mask(window, m);
            const Context ctx = compute_context(x, i);
            auto& g = groups[context_key(ctx, x)];
            g.resolved = ctx.resolved();
            g.add(measure.conditional_plus(x, i), m);
            if (ctx.resolved()) ++report.resolved_configurations;
        }
        std::vector<const GroupStats*> all;
        for (const auto& [key, g] : groups) {
            if (g.resolved) report.within_context = std::max(report.within_context, g.hi - g.lo);
            all.push_back(&g);
        }
        for (std::size_t a = 0; a < all.size(); ++a) {
            for (std::size_t b = 0; b < all.size(); ++b) {
                if (a == b) continue;
                const double gap = all[a]->hi - all[b]->lo;
                if (gap > report.across_contexts) {
                    report.across_contexts = gap;
                    report.witness.emplace(Configuration::from_mask(window, all[a]->hi_mask),
                                           Configuration::from_mask(window, all[b]->lo_mask));
                }
            }
        }
    }
    return report;
}

} // namespace vnrf
