// Closed-form thresholds and bounds for the masked Ising field. Pure
// arithmetic; every inequality is strict.
#pragma once

#include <cstdint>
#include <optional>

namespace vnrf {

// External constants: p* is the numerical estimate of the Z^2 site
// percolation threshold, beta_c the exact Onsager critical point
// ln(1 + sqrt 2) / 2. Both can be overridden from sweep configs.
struct Thresholds {
    double p_star = 0.592746;
    double beta_c = 0.44068679350977151; // ln(1 + sqrt(2)) / 2

    void validate() const;
};

// (1 - eps) lambda0+ > 1 - p*: all contexts finite almost surely.
bool thm2_finite_condition(double eps, double lambda0_plus, const Thresholds& t = {});
// eps + (1 - eps) lambda0- > p*: infinite contexts with positive probability.
bool thm2_infinite_condition(double eps, double lambda0_minus, const Thresholds& t = {});

// Largest beta (exclusive) for which the finite condition holds in the
// Ising case, (1/8) ln((1 - eps)/(1 - p*) - 1). Empty when no beta >= 0
// qualifies; the boundary case eps = 2 p* - 1 yields 0.
std::optional<double> remark_beta_bound(double eps, const Thresholds& t = {});

// 1/3 - e^{-2 beta}; non-positive means no admissible eps.
double thm3_epsilon_bound(double beta);

// beta > ln(3)/2 and eps < 1/3 - e^{-2 beta}.
bool thm3_stated_region(double beta, double eps);

// 2 beta > ln 3 + e^{-beta}: the sharper condition under which the
// open-path expectation 4 * 3^{n-1} (e^{-2 beta} + eps)^n vanishes.
bool thm3_beta_admissible(double beta);
bool thm3_proof_region(double beta, double eps);

// (e^{-2 beta} + eps)^n, bound on the probability that a path of n sites
// reads -1 everywhere under the plus phase.
double lemma1_bound(double beta, double eps, int path_length);

// 4 l 3^{l-2}, the count bound on closed contours of length l around a site.
std::uint64_t contour_count_bound(int length);

// 4 * 3^{n-1}, the count bound on self-avoiding paths of n sites from the
// neighbors of a site.
std::uint64_t path_count_bound(int length);

// Expected number of open paths of n sites from the four neighbors of a
// site, bounded by path_count_bound(n) * lemma1_bound(beta, eps, n).
double open_path_expectation_bound(double beta, double eps, int path_length);

} // namespace vnrf
