#include "vnrf/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace vnrf {

void validate(const NoiseParams& noise) {
    if (!(noise.epsilon > 0.0 && noise.epsilon < 1.0))
        throw std::invalid_argument("epsilon must lie in (0, 1), got " + std::to_string(noise.epsilon));
}

ExactGibbsSampler::ExactGibbsSampler(const SpecificationParams& params, const Window& window)
    : window_(window),
      table_(finite_volume_kernel(params, window.sites(), Configuration(window, Spin{1}))) {
    cumulative_.resize(table_.weights().size());
    double acc = 0.0;
    for (std::size_t k = 0; k < cumulative_.size(); ++k) {
        acc += table_.weights()[k];
        cumulative_[k] = acc;
    }
}

Configuration ExactGibbsSampler::draw(RngStream& rng) const {
    const double u = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const auto mask = static_cast<std::uint64_t>(
        std::min<std::ptrdiff_t>(it - cumulative_.begin(), static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
    // Kernel region is window.sites(), which is the window's row-major order.
    return Configuration::from_mask(window_, mask);
}

Configuration sample_exact(const SpecificationParams& params, const Window& window, RngStream& rng) {
    return ExactGibbsSampler(params, window).draw(rng);
}

ChainState initial_chain(const SpecificationParams& params, const Window& window) {
    validate(params);
    const Spin start = window.boundary_condition() == BoundaryCondition::AllMinus ? Spin{-1} : Spin{1};
    return ChainState{Configuration(window, start), 0, params};
}

void glauber_sweep_in_place(ChainState& state, const RngStream& rng) {
    Configuration& x = state.configuration;
    const Window& w = x.window();
    const int width = w.width();
    const int height = w.height();
    const int outside = boundary_spin(w.boundary_condition());

    // u < p with u = (bits >> 11) 2^-53 is the same test as
    // (bits >> 11) < ceil(p 2^53), without the conversion.
    std::array<std::uint64_t, 9> threshold{};
    for (int s = -4; s <= 4; ++s)
        threshold[s + 4] = static_cast<std::uint64_t>(std::ceil(ising_one_point(state.params, s) * 0x1.0p53));

    std::span<Spin> spins = x.spins();
    thread_local std::vector<PhiloxBlock> blocks;
    blocks.resize((spins.size() + 3) / 4);
    rng.sweep_blocks(state.sweeps, blocks);

    std::size_t k = 0;
    for (int r = 0; r < height; ++r) {
        const bool top = r == 0;
        const bool bottom = r == height - 1;
        for (int c = 0; c < width; ++c, ++k) {
            int sum = 0;
            sum += top ? outside : spins[k - width];
            sum += bottom ? outside : spins[k + width];
            sum += c == 0 ? outside : spins[k - 1];
            sum += c == width - 1 ? outside : spins[k + 1];
            spins[k] = (blocks[k >> 2][k & 3U] >> 11) < threshold[sum + 4] ? Spin{1} : Spin{-1};
        }
    }
    ++state.sweeps;
}

ChainState glauber_sweep(ChainState state, const RngStream& rng) {
    glauber_sweep_in_place(state, rng);
    return state;
}

Configuration sample_noise_field(const NoiseParams& noise, const Window& window, RngStream& rng) {
    validate(noise);
    std::vector<Spin> spins(window.site_count());
    for (Spin& v : spins) v = rng.uniform() < noise.epsilon ? Spin{-1} : Spin{1};
    return Configuration(window, std::move(spins));
}

Configuration mask(const Configuration& x1, const Configuration& x2) {
    if (!x1.window().same_geometry(x2.window()))
        throw std::invalid_argument("cannot mask configurations on different windows");
    Configuration out = x1;
    auto a = out.spins();
    auto b = x2.spins();
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = std::min(a[k], b[k]);
    return out;
}

std::uint64_t default_burn_in(const Window& window) {
    return 200ULL * static_cast<std::uint64_t>(std::max(window.width(), window.height()));
}

std::uint64_t default_thin(const Window& window) {
    return static_cast<std::uint64_t>(std::max(window.width(), window.height()));
}

McmcMethod resolved(const McmcMethod& method, const Window& window) {
    return {method.burn_in ? method.burn_in : default_burn_in(window),
            method.thin ? method.thin : default_thin(window)};
}

Configuration sample_observed(const SpecificationParams& params, const NoiseParams& noise,
                              const Window& window, RngStream& rng, const SamplingMethod& method) {
    validate(noise);
    if (std::holds_alternative<ExactMethod>(method)) {
        Configuration hidden = sample_exact(params, window, rng);
        return mask(hidden, sample_noise_field(noise, window, rng));
    }
    const McmcMethod m = resolved(std::get<McmcMethod>(method), window);
    ChainState state = initial_chain(params, window);
    for (std::uint64_t t = 0; t < m.burn_in; ++t) glauber_sweep_in_place(state, rng);
    return mask(state.configuration, sample_noise_field(noise, window, rng));
}

ObservedChain::ObservedChain(const SpecificationParams& params, const NoiseParams& noise,
                             const Window& window, RngStream rng, McmcMethod method)
    : noise_(noise), rng_(rng), method_(resolved(method, window)),
      state_(initial_chain(params, window)) {
    validate(noise);
}

Configuration ObservedChain::next() {
    const std::uint64_t sweeps = burned_in_ ? method_.thin : method_.burn_in;
    for (std::uint64_t t = 0; t < sweeps; ++t) glauber_sweep_in_place(state_, rng_);
    burned_in_ = true;
    return mask(state_.configuration, sample_noise_field(noise_, state_.configuration.window(), rng_));
}

} // namespace vnrf
