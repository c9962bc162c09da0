// Exact small-window computations for the masked field: the full observed
// measure, its one-point conditionals, and the context formula
//
//   p_i(+1 | z) = phi(L, (+1, z_{F\i})) / (phi(L, (+1, z_{F\i})) + phi(L, (-1, z_{F\i})))
//
// with F the closed context of i, L its interior, and
//
//   phi(L, z_F) = sum over (x1, x2) in A^L x A^L of
//                 nu_eps(x1) p_L(x2 | +) 1{x1 ^ x2 = z_L}.
//
// The formula is exact on a finite window with fixed boundary whenever F
// lies inside the window: it only uses the Markov property and kernel
// consistency of the finite-volume Gibbs measure.
#pragma once

#include "vnrf/context.hpp"
#include "vnrf/lattice.hpp"
#include "vnrf/sampler.hpp"
#include "vnrf/spec.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace vnrf {

inline constexpr std::size_t kObservedMeasureCap = 16;

// Channel q(observed | hidden): q(-1|-1) = 1, q(-1|+1) = eps,
// q(+1|+1) = 1 - eps, q(+1|-1) = 0.
double channel_probability(Spin observed, Spin hidden, double eps);

class ExactObservedMeasure {
public:
    ExactObservedMeasure(const SpecificationParams& params, const NoiseParams& noise,
                         const Window& window);

    const Window& window() const { return window_; }
    double epsilon() const { return noise_.epsilon; }
    const SpecificationParams& params() const { return params_; }
    // Indexed by observed plus-mask (bit k <=> row-major site k is +1).
    const std::vector<double>& table() const { return table_; }
    const std::vector<double>& hidden_table() const { return hidden_; }
    double probability(const Configuration& observed) const;

    // P(X_i = +1 | X_j = x_j for every other window site j).
    double conditional_plus(const Configuration& x, Site i) const;
    double marginal_plus(Site i) const;

private:
    SpecificationParams params_;
    NoiseParams noise_;
    Window window_;
    std::vector<double> hidden_;
    std::vector<double> table_;
};

ExactObservedMeasure exact_observed_measure(const SpecificationParams& params,
                                            const NoiseParams& noise, const Window& window);

// phi(L, z_F) for L = interior; z is read on L and on the ring around it,
// which must be all +1.
double phi(const SpecificationParams& params, const NoiseParams& noise, const SiteSet& interior,
           const Configuration& z);

// Requires a resolved context at i whose interior fits the enumeration cap.
double conditional_from_phi(const SpecificationParams& params, const NoiseParams& noise,
                            const Configuration& x, Site i);

struct MeasurabilityReport {
    // Max conditional gap between configurations sharing a resolved context
    // (same member set and same spins on it).
    double within_context = 0.0;
    // Max conditional gap between configurations whose contexts differ
    // (member set, spins on it, or status); with the witnessing pair.
    double across_contexts = 0.0;
    std::optional<std::pair<Configuration, Configuration>> witness;
    std::size_t resolved_configurations = 0;
};

// Exhaustive over all window configurations, at every site of `sites`
// (all window sites when empty).
MeasurabilityReport verify_context_measurability(const SpecificationParams& params,
                                                 const NoiseParams& noise, const Window& window,
                                                 const SiteSet& sites = {});

} // namespace vnrf
