#include "vnrf/spec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vnrf {

void validate(const SpecificationParams& params) {
    if (!(params.beta >= 0.0) || !std::isfinite(params.beta))
        throw std::invalid_argument("beta must be finite and >= 0");
}

double NearestNeighborSpecification::one_point(Spin value, std::span<const int, 4> neighbor_spins) const {
    double same = 0.0;
    double flipped = 0.0;
    for (int y : neighbor_spins) {
        same += bond_log_weight(value, y);
        flipped += bond_log_weight(-value, y);
    }
    return 1.0 / (1.0 + std::exp(flipped - same));
}

IsingSpecification::IsingSpecification(double beta) : beta_(beta) {
    validate(SpecificationParams{beta, Model::HomogeneousIsing});
}

std::unique_ptr<NearestNeighborSpecification> make_specification(const SpecificationParams& params) {
    validate(params);
    switch (params.model) {
    case Model::HomogeneousIsing: return std::make_unique<IsingSpecification>(params.beta);
    }
    throw std::invalid_argument("unknown model");
}

double ising_one_point(const SpecificationParams& params, int neighbor_spin_sum) {
    validate(params);
    if (neighbor_spin_sum < -4 || neighbor_spin_sum > 4)
        throw std::invalid_argument("neighbor spin sum " + std::to_string(neighbor_spin_sum) +
                                    " outside [-4, 4]");
    return 1.0 / (1.0 + std::exp(-2.0 * params.beta * neighbor_spin_sum));
}

ExteriorField exterior_of(const Configuration& x) {
    return [&x](Site s) { return x.spin_or_boundary(s); };
}

ExteriorField constant_exterior(int spin) {
    return [spin](Site) { return spin; };
}

double KernelTable::weight_of(const Configuration& x) const {
    std::uint64_t mask = 0;
    for (std::size_t k = 0; k < region_.size(); ++k)
        if (x.at(region_[k]) > 0) mask |= std::uint64_t{1} << k;
    return weights_[mask];
}

KernelTable finite_volume_kernel(const NearestNeighborSpecification& spec, const SiteSet& region,
                                 const ExteriorField& exterior) {
    const std::size_t n = region.size();
    if (n > kEnumerationCap)
        throw std::length_error("region of " + std::to_string(n) + " sites exceeds the exact-enumeration cap of " +
                                std::to_string(kEnumerationCap) + "; use the Glauber sampler instead");

    KernelTable table;
    table.region_ = region;

    // Field from the exterior on each region site, for either spin value.
    std::vector<double> field_plus(n, 0.0), field_minus(n, 0.0);
    std::vector<std::pair<std::size_t, std::size_t>> bonds;
    for (std::size_t k = 0; k < n; ++k) {
        for (Site d : kNeighborOffsets) {
            Site t = region[k] + d;
            const auto j = region.index_of(t);
            if (j >= 0) {
                if (static_cast<std::size_t>(j) > k) bonds.emplace_back(k, static_cast<std::size_t>(j));
                continue;
            }
            const int y = exterior(t);
            table.exterior_.emplace_back(t, y);
            field_plus[k] += spec.bond_log_weight(1, y);
            field_minus[k] += spec.bond_log_weight(-1, y);
        }
    }
    std::sort(table.exterior_.begin(), table.exterior_.end());
    table.exterior_.erase(std::unique(table.exterior_.begin(), table.exterior_.end()),
                          table.exterior_.end());

    const double pp = spec.bond_log_weight(1, 1);
    const double pm = spec.bond_log_weight(1, -1);
    const double mp = spec.bond_log_weight(-1, 1);
    const double mm = spec.bond_log_weight(-1, -1);

    const std::uint64_t count = std::uint64_t{1} << n;
    std::vector<double> log_w(count);
    double top = -std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        double e = 0.0;
        for (std::size_t k = 0; k < n; ++k) e += ((mask >> k) & 1U) ? field_plus[k] : field_minus[k];
        for (auto [a, b] : bonds) {
            const bool xa = (mask >> a) & 1U;
            const bool xb = (mask >> b) & 1U;
            e += xa ? (xb ? pp : pm) : (xb ? mp : mm);
        }
        log_w[mask] = e;
        top = std::max(top, e);
    }

    double z = 0.0;
    for (double& e : log_w) {
        e = std::exp(e - top);
        z += e;
    }
    for (double& e : log_w) e /= z;
    table.weights_ = std::move(log_w);
    return table;
}

KernelTable finite_volume_kernel(const SpecificationParams& params, const SiteSet& region,
                                 const Configuration& exterior) {
    return finite_volume_kernel(*make_specification(params), region, exterior_of(exterior));
}

double check_consistency(const NearestNeighborSpecification& spec, const SiteSet& inner,
                         const SiteSet& outer, const ExteriorField& exterior) {
    if (!inner.is_subset_of(outer)) throw std::invalid_argument("inner region is not contained in outer region");

    const KernelTable direct = finite_volume_kernel(spec, outer, exterior);
    const std::size_t n = outer.size();
    const SiteSet rest = outer.minus(inner);

    std::vector<std::size_t> inner_pos, rest_pos;
    for (std::size_t k = 0; k < n; ++k)
        (inner.contains(outer[k]) ? inner_pos : rest_pos).push_back(k);

    auto extract = [](std::uint64_t mask, const std::vector<std::size_t>& pos) {
        std::uint64_t out = 0;
        for (std::size_t b = 0; b < pos.size(); ++b)
            if ((mask >> pos[b]) & 1U) out |= std::uint64_t{1} << b;
        return out;
    };

    // Marginal of the outer kernel on outer \ inner. On an empty projection
    // it is the trivial measure, of mass one.
    const std::uint64_t rest_count = std::uint64_t{1} << rest_pos.size();
    std::vector<double> marginal(rest_count, 0.0);
    if (rest_pos.empty()) {
        marginal[0] = 1.0;
    } else {
        for (std::uint64_t x = 0; x < direct.weights().size(); ++x)
            marginal[extract(x, rest_pos)] += direct.weights()[x];
    }

    std::vector<KernelTable> inner_kernels;
    inner_kernels.reserve(rest_count);
    for (std::uint64_t w = 0; w < rest_count; ++w) {
        ExteriorField field = [&, w](Site s) -> int {
            auto k = rest.index_of(s);
            if (k >= 0) return ((w >> k) & 1U) ? 1 : -1;
            return exterior(s);
        };
        inner_kernels.push_back(finite_volume_kernel(spec, inner, field));
    }

    double excess = 0.0;
    double deficit = 0.0;
    for (std::uint64_t x = 0; x < direct.weights().size(); ++x) {
        const std::uint64_t w = extract(x, rest_pos);
        const double composed = marginal[w] * inner_kernels[w].weight(extract(x, inner_pos));
        const double diff = composed - direct.weights()[x];
        (diff > 0 ? excess : deficit) += std::abs(diff);
    }
    return std::max(excess, deficit);
}

double check_consistency(const SpecificationParams& params, const SiteSet& inner,
                         const SiteSet& outer, const Configuration& exterior) {
    return check_consistency(*make_specification(params), inner, outer, exterior_of(exterior));
}

ExtremalRates extremal_rates(const SpecificationParams& params) {
    validate(params);
    const double rate = 1.0 / (1.0 + std::exp(8.0 * params.beta));
    return {rate, rate};
}

ExtremalRates extremal_rates(const NearestNeighborSpecification& spec) {
    ExtremalRates r{1.0, 1.0};
    for (unsigned pattern = 0; pattern < 16; ++pattern) {
        std::array<int, 4> nb{};
        for (unsigned k = 0; k < 4; ++k) nb[k] = ((pattern >> k) & 1U) ? 1 : -1;
        r.lambda0_plus = std::min(r.lambda0_plus, spec.one_point(1, nb));
        r.lambda0_minus = std::min(r.lambda0_minus, spec.one_point(-1, nb));
    }
    return r;
}

} // namespace vnrf
