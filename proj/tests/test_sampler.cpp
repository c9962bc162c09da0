#include "vnrf/sampler.hpp"

#include <doctest.h>

#include <cmath>

using namespace vnrf;

namespace {

// Boltzmann probabilities of every configuration of a small window, from
// the Hamiltonian directly.
std::vector<double> window_measure(double beta, const Window& w) {
    const std::size_t n = w.site_count();
    std::vector<double> p(std::size_t{1} << n);
    double z = 0.0;
    for (std::uint64_t m = 0; m < p.size(); ++m) {
        const Configuration x = Configuration::from_mask(w, m);
        double e = 0.0;
        for (Site a : w.sites()) {
            for (Site d : kNeighborOffsets) {
                const Site b = a + d;
                if (w.contains(b) && b < a) continue;
                e += x.at(a) * x.spin_or_boundary(b);
            }
        }
        p[m] = std::exp(beta * e);
        z += p[m];
    }
    for (double& v : p) v /= z;
    return p;
}

// Heat-bath probability of moving x to y by updating site k.
double site_move(double beta, const Configuration& x, std::size_t k, Spin target) {
    const double h = x.neighbor_sum(x.window().site(k));
    const double plus = std::exp(beta * h) / (std::exp(beta * h) + std::exp(-beta * h));
    return target > 0 ? plus : 1.0 - plus;
}

} // namespace

TEST_CASE("heat-bath moves satisfy detailed balance on 2x2 windows") {
    for (auto bc : {BoundaryCondition::AllPlus, BoundaryCondition::AllMinus, BoundaryCondition::Free}) {
        for (double beta : {0.0, 0.4, 1.3}) {
            const Window w = Window::square(2, bc);
            const auto pi = window_measure(beta, w);
            for (std::uint64_t m = 0; m < 16; ++m) {
                const Configuration x = Configuration::from_mask(w, m);
                for (std::size_t k = 0; k < 4; ++k) {
                    Configuration y = x;
                    y.set_index(k, static_cast<Spin>(-x.at_index(k)));
                    const double forward = pi[m] * site_move(beta, x, k, y.at_index(k));
                    const double backward = pi[y.plus_mask()] * site_move(beta, y, k, x.at_index(k));
                    CHECK(std::abs(forward - backward) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("a full sweep leaves the exact 3x3 measure invariant") {
    const double beta = 0.8;
    const Window w = Window::square(3, BoundaryCondition::AllPlus);
    const auto pi = window_measure(beta, w);
    std::vector<double> next(pi.size(), 0.0);
    std::vector<double> cur = pi;
    for (std::size_t k = 0; k < w.site_count(); ++k) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::uint64_t m = 0; m < cur.size(); ++m) {
            const Configuration x = Configuration::from_mask(w, m);
            for (Spin v : {Spin{1}, Spin{-1}}) {
                Configuration y = x;
                y.set_index(k, v);
                next[y.plus_mask()] += cur[m] * site_move(beta, x, k, v);
            }
        }
        cur = next;
    }
    for (std::size_t m = 0; m < pi.size(); ++m) CHECK(std::abs(cur[m] - pi[m]) <= 1e-12);
}

TEST_CASE("exact sampler reproduces the enumerated table") {
    const SpecificationParams params{0.5};
    const Window w = Window::square(2, BoundaryCondition::AllPlus);
    const ExactGibbsSampler sampler(params, w);
    const auto pi = window_measure(0.5, w);
    RngStream rng(11, 0);
    std::vector<double> counts(16, 0.0);
    const int n = 100000;
    for (int k = 0; k < n; ++k) counts[sampler.draw(rng).plus_mask()] += 1.0;
    double tv = 0.0;
    for (std::size_t m = 0; m < 16; ++m) {
        CHECK(sampler.table().weights()[m] == doctest::Approx(pi[m]).epsilon(1e-12));
        tv += std::abs(counts[m] / n - pi[m]);
    }
    CHECK(0.5 * tv < 0.01);
    CHECK(rng.draws() == static_cast<std::uint64_t>(n));
}

TEST_CASE("glauber chain on 3x3 matches exact enumeration") {
    const SpecificationParams params{0.7};
    const Window w = Window::square(3, BoundaryCondition::AllPlus);
    const auto pi = window_measure(0.7, w);
    const RngStream rng(21, 4);
    ChainState s = initial_chain(params, w);
    for (int t = 0; t < 600; ++t) glauber_sweep_in_place(s, rng);
    std::vector<double> counts(pi.size(), 0.0);
    const int n = 200000;
    for (int k = 0; k < n; ++k) {
        for (int t = 0; t < 3; ++t) glauber_sweep_in_place(s, rng);
        counts[s.configuration.plus_mask()] += 1.0;
    }
    double tv = 0.0;
    for (std::size_t m = 0; m < pi.size(); ++m) tv += std::abs(counts[m] / n - pi[m]);
    CHECK(0.5 * tv < 0.01);
}

TEST_CASE("monotone coupling keeps ordered chains ordered") {
    const SpecificationParams params{0.6};
    const Window w = Window::square(8, BoundaryCondition::AllPlus);
    const RngStream rng(31, 2);
    ChainState top{Configuration(w, Spin{1}), 0, params};
    ChainState bottom{Configuration(w, Spin{-1}), 0, params};
    bool ordered = true;
    bool coalesced = false;
    for (int t = 0; t < 10000 && ordered; ++t) {
        glauber_sweep_in_place(top, rng);
        glauber_sweep_in_place(bottom, rng);
        for (std::size_t k = 0; k < w.site_count(); ++k)
            if (bottom.configuration.at_index(k) > top.configuration.at_index(k)) ordered = false;
        coalesced = coalesced || top.configuration == bottom.configuration;
    }
    CHECK(ordered);
    CHECK(coalesced);
}

TEST_CASE("sweeps are reproducible and functional") {
    const SpecificationParams params{0.9};
    const Window w = Window::square(5, BoundaryCondition::AllMinus);
    const RngStream rng(1, 1);
    ChainState a = initial_chain(params, w);
    for (Spin v : a.configuration.spins()) CHECK(v == -1);
    ChainState b = a;
    for (int t = 0; t < 20; ++t) {
        glauber_sweep_in_place(a, rng);
        b = glauber_sweep(b, rng);
    }
    CHECK(a.configuration == b.configuration);
    CHECK(a.sweeps == 20);
    const ChainState free_start = initial_chain(params, w.with_boundary(BoundaryCondition::Free));
    for (Spin v : free_start.configuration.spins()) CHECK(v == 1);
}

TEST_CASE("noise field and masking") {
    const Window w = Window::square(100, BoundaryCondition::AllPlus);
    RngStream rng(2, 2);
    for (double eps : {0.1, 0.5, 0.9}) {
        const Configuration noise = sample_noise_field({eps}, w, rng);
        std::size_t minus = 0;
        for (Spin v : noise.spins()) minus += v < 0;
        const double n = static_cast<double>(w.site_count());
        CHECK(std::abs(static_cast<double>(minus) - eps * n) <= 4.0 * std::sqrt(eps * (1 - eps) * n));
    }
    CHECK_THROWS_AS(sample_noise_field({0.0}, w, rng), std::invalid_argument);
    CHECK_THROWS_AS(sample_noise_field({1.0}, w, rng), std::invalid_argument);

    const Configuration hidden = sample_noise_field({0.5}, w, rng);
    const Configuration noise = sample_noise_field({0.3}, w, rng);
    const Configuration x = mask(hidden, noise);
    for (std::size_t k = 0; k < w.site_count(); ++k) {
        if (hidden.at_index(k) < 0) CHECK(x.at_index(k) == -1);  // the channel never lifts a -1
        CHECK(x.at_index(k) == std::min(hidden.at_index(k), noise.at_index(k)));
    }
    CHECK_THROWS_AS(mask(hidden, Configuration(Window::square(3, BoundaryCondition::AllPlus), Spin{1})),
                    std::invalid_argument);
}

TEST_CASE("observed samples") {
    const Window w = Window::square(6, BoundaryCondition::AllPlus);
    RngStream r1(4, 4);
    RngStream r2(4, 4);
    CHECK(sample_observed({0.4}, {0.2}, w, r1, McmcMethod{50, 0}) ==
          sample_observed({0.4}, {0.2}, w, r2, McmcMethod{50, 0}));
    CHECK(default_burn_in(w) == 1200);
    CHECK(default_thin(w) == 6);
    CHECK(resolved(McmcMethod{}, w).burn_in == 1200);
    CHECK(resolved(McmcMethod{7, 3}, w).thin == 3);

    // Near-certain noise floods the window.
    RngStream r3(5, 5);
    const Configuration flooded = sample_observed({0.2}, {0.999999}, w, r3, McmcMethod{10, 1});
    for (Spin v : flooded.spins()) CHECK(v == -1);

    ObservedChain chain({0.3}, {0.1}, Window::square(2, BoundaryCondition::AllPlus), RngStream(6, 6), McmcMethod{5, 2});
    chain.next();
    CHECK(chain.hidden().sweeps == 5);
    chain.next();
    CHECK(chain.hidden().sweeps == 7);

    RngStream r4(7, 7);
    CHECK_THROWS_AS(sample_observed({0.1}, {0.1}, Window::square(5, BoundaryCondition::AllPlus), r4, ExactMethod{}),
                    std::length_error);
}

TEST_CASE("observed exact sampling follows the channel") {
    // At beta = 0 each observed site is -1 with probability 1/2 + eps/2.
    const Window w = Window::square(2, BoundaryCondition::AllPlus);
    RngStream rng(8, 8);
    const double eps = 0.3;
    std::size_t minus = 0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) minus += sample_observed({0.0}, {eps}, w, rng, ExactMethod{}).at_index(0) < 0;
    const double p = 0.5 + 0.5 * eps;
    CHECK(std::abs(static_cast<double>(minus) / n - p) <= 4.0 * std::sqrt(p * (1 - p) / n));
}
