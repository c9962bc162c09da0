// Draws from finite-volume Ising measures and from the masked observation
// channel: observed = hidden AND noise, where noise sites are -1 with
// probability epsilon.
#pragma once

#include "vnrf/lattice.hpp"
#include "vnrf/rng.hpp"
#include "vnrf/spec.hpp"

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

namespace vnrf {

struct NoiseParams {
    double epsilon = 0.1;
};

void validate(const NoiseParams& noise);

// Exact sampler for windows within the enumeration cap. The table is built
// once; each draw consumes one uniform.
class ExactGibbsSampler {
public:
    ExactGibbsSampler(const SpecificationParams& params, const Window& window);

    Configuration draw(RngStream& rng) const;
    const KernelTable& table() const { return table_; }

private:
    Window window_;
    KernelTable table_;
    std::vector<double> cumulative_;
};

Configuration sample_exact(const SpecificationParams& params, const Window& window, RngStream& rng);

struct ChainState {
    Configuration configuration;
    std::uint64_t sweeps = 0;
    SpecificationParams params;
};

// Start from the boundary condition's ground state (all +1 for free).
ChainState initial_chain(const SpecificationParams& params, const Window& window);

// One systematic row-major heat-bath pass. The uniform used at site k in
// sweep t is rng.word_at(t, k), so two chains sharing `rng` and sweep count
// are driven by identical randomness (the monotone coupling).
ChainState glauber_sweep(ChainState state, const RngStream& rng);
void glauber_sweep_in_place(ChainState& state, const RngStream& rng);

Configuration sample_noise_field(const NoiseParams& noise, const Window& window, RngStream& rng);

// Pointwise minimum. Throws on window mismatch.
Configuration mask(const Configuration& x1, const Configuration& x2);

struct ExactMethod {};
struct McmcMethod {
    // Zero means the default: 200 * side burn-in sweeps, side sweeps per thin.
    std::uint64_t burn_in = 0;
    std::uint64_t thin = 0;
};
using SamplingMethod = std::variant<ExactMethod, McmcMethod>;

std::uint64_t default_burn_in(const Window& window);
std::uint64_t default_thin(const Window& window);
McmcMethod resolved(const McmcMethod& method, const Window& window);

Configuration sample_observed(const SpecificationParams& params, const NoiseParams& noise,
                              const Window& window, RngStream& rng, const SamplingMethod& method);

// Observed configurations from one Glauber chain: burn_in sweeps, then one
// masked sample every `thin` sweeps. Noise draws come from the sequential
// domain of the same stream.
class ObservedChain {
public:
    ObservedChain(const SpecificationParams& params, const NoiseParams& noise,
                  const Window& window, RngStream rng, McmcMethod method);

    Configuration next();
    const ChainState& hidden() const { return state_; }

private:
    NoiseParams noise_;
    RngStream rng_;
    McmcMethod method_;
    ChainState state_;
    bool burned_in_ = false;
};

} // namespace vnrf
