#include "vnrf/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace vnrf {

namespace {

void require_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
}

void require_beta(double beta) {
    if (!(beta >= 0.0)) throw std::invalid_argument("beta must be >= 0");
}

std::uint64_t checked_pow3(int e) {
    std::uint64_t v = 1;
    for (int k = 0; k < e; ++k) {
        if (v > std::numeric_limits<std::uint64_t>::max() / 3) throw std::overflow_error("count bound overflows 64 bits");
        v *= 3;
    }
    return v;
}

} // namespace

void Thresholds::validate() const {
    if (!(p_star > 0.0 && p_star < 1.0)) throw std::invalid_argument("p_star must lie in (0, 1)");
    if (!(beta_c > 0.0) || !std::isfinite(beta_c)) throw std::invalid_argument("beta_c must be positive");
}

bool thm2_finite_condition(double eps, double lambda0_plus, const Thresholds& t) {
    require_unit(eps, "eps");
    require_unit(lambda0_plus, "lambda0_plus");
    t.validate();
    return (1.0 - eps) * lambda0_plus > 1.0 - t.p_star;
}

bool thm2_infinite_condition(double eps, double lambda0_minus, const Thresholds& t) {
    require_unit(eps, "eps");
    require_unit(lambda0_minus, "lambda0_minus");
    t.validate();
    return eps + (1.0 - eps) * lambda0_minus > t.p_star;
}

std::optional<double> remark_beta_bound(double eps, const Thresholds& t) {
    require_unit(eps, "eps");
    t.validate();
    // (1 - eps)/(1 - p*) - 1 == (p* - eps)/(1 - p*)
    const double arg = (t.p_star - eps) / (1.0 - t.p_star);
    if (!(arg > 0.0)) return std::nullopt;
    const double bound = std::log(arg) / 8.0;
    if (bound < 0.0) return std::nullopt;
    return bound;
}

double thm3_epsilon_bound(double beta) {
    require_beta(beta);
    return 1.0 / 3.0 - std::exp(-2.0 * beta);
}

bool thm3_stated_region(double beta, double eps) {
    require_beta(beta);
    return beta > 0.5 * std::log(3.0) && eps < thm3_epsilon_bound(beta);
}

bool thm3_beta_admissible(double beta) {
    require_beta(beta);
    if (std::isinf(beta)) return true;
    return 2.0 * beta > std::log(3.0) + std::exp(-beta);
}

bool thm3_proof_region(double beta, double eps) {
    return thm3_beta_admissible(beta) && eps < thm3_epsilon_bound(beta);
}

double lemma1_bound(double beta, double eps, int path_length) {
    require_beta(beta);
    require_unit(eps, "eps");
    if (path_length < 1) throw std::invalid_argument("path length must be >= 1");
    return std::pow(std::exp(-2.0 * beta) + eps, path_length);
}

std::uint64_t contour_count_bound(int length) {
    if (length < 4 || length % 2 != 0)
        throw std::invalid_argument("contour length must be even and >= 4, got " + std::to_string(length));
    const std::uint64_t p = checked_pow3(length - 2);
    const auto factor = static_cast<std::uint64_t>(4) * static_cast<std::uint64_t>(length);
    if (p > std::numeric_limits<std::uint64_t>::max() / factor) throw std::overflow_error("count bound overflows 64 bits");
    return factor * p;
}

std::uint64_t path_count_bound(int length) {
    if (length < 1) throw std::invalid_argument("path length must be >= 1");
    const std::uint64_t p = checked_pow3(length - 1);
    if (p > std::numeric_limits<std::uint64_t>::max() / 4) throw std::overflow_error("count bound overflows 64 bits");
    return 4 * p;
}

double open_path_expectation_bound(double beta, double eps, int path_length) {
    return static_cast<double>(path_count_bound(path_length)) * lemma1_bound(beta, eps, path_length);
}

} // namespace vnrf
