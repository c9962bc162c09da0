// Gibbs specifications for nearest-neighbor binary fields on Z^2.
//
// Finite-volume kernels p_L(x_L | y) are computed by exhaustive enumeration
// of all 2^|L| region configurations, in log space with the maximum
// exponent subtracted so that beta up to ~50 does not overflow.
#pragma once

#include "vnrf/lattice.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

namespace vnrf {

enum class Model { HomogeneousIsing };

struct SpecificationParams {
    double beta = 0.0;
    Model model = Model::HomogeneousIsing;
};

void validate(const SpecificationParams& params);

inline constexpr std::size_t kEnumerationCap = 20;

// A nearest-neighbor pair specification: the kernel on a finite region is
// proportional to exp(sum of bond log-weights) over bonds touching it.
class NearestNeighborSpecification {
public:
    virtual ~NearestNeighborSpecification() = default;

    // Log-weight of one bond whose endpoints carry a and b. The value 0 for
    // b stands for a free-boundary hole and must contribute nothing.
    virtual double bond_log_weight(int a, int b) const = 0;

    // p_i(value | neighbors) for the four neighbor spins of a site.
    double one_point(Spin value, std::span<const int, 4> neighbor_spins) const;
};

class IsingSpecification final : public NearestNeighborSpecification {
public:
    explicit IsingSpecification(double beta);
    double beta() const { return beta_; }
    double bond_log_weight(int a, int b) const override { return beta_ * a * b; }

private:
    double beta_;
};

std::unique_ptr<NearestNeighborSpecification> make_specification(const SpecificationParams& params);

// p_i(+1 | neighbors) for the Ising model, given the sum of the neighbor
// spins. Sums must be integers in [-4, 4]; free boundaries produce odd sums.
double ising_one_point(const SpecificationParams& params, int neighbor_spin_sum);

// Spin lookup for sites outside the region being resampled.
using ExteriorField = std::function<int(Site)>;

ExteriorField exterior_of(const Configuration& x);
ExteriorField constant_exterior(int spin);

class KernelTable {
public:
    const SiteSet& region() const { return region_; }
    // Spins on the sites at L1-distance 1 from the region.
    const std::vector<std::pair<Site, int>>& exterior() const { return exterior_; }
    // Indexed by region mask: bit k set <=> region()[k] carries +1.
    const std::vector<double>& weights() const { return weights_; }
    double weight(std::uint64_t plus_mask) const { return weights_.at(plus_mask); }
    double weight_of(const Configuration& x) const;

private:
    friend KernelTable finite_volume_kernel(const NearestNeighborSpecification&, const SiteSet&,
                                            const ExteriorField&);
    SiteSet region_;
    std::vector<std::pair<Site, int>> exterior_;
    std::vector<double> weights_;
};

KernelTable finite_volume_kernel(const NearestNeighborSpecification& spec, const SiteSet& region,
                                 const ExteriorField& exterior);
KernelTable finite_volume_kernel(const SpecificationParams& params, const SiteSet& region,
                                 const Configuration& exterior);

// Max over events B of Delta-configurations of
//   | sum_z P_inner(B | z) P_outer(dz | y) - P_outer(B | y) |,
// i.e. the total-variation distance between the composed and direct kernels.
double check_consistency(const SpecificationParams& params, const SiteSet& inner,
                         const SiteSet& outer, const Configuration& exterior);
double check_consistency(const NearestNeighborSpecification& spec, const SiteSet& inner,
                         const SiteSet& outer, const ExteriorField& exterior);

struct ExtremalRates {
    double lambda0_plus = 0.5;
    double lambda0_minus = 0.5;
};

// Closed form (1 + e^{8 beta})^{-1} for the Ising model.
ExtremalRates extremal_rates(const SpecificationParams& params);
// Minimum over all 16 neighbor patterns of the one-point conditionals.
ExtremalRates extremal_rates(const NearestNeighborSpecification& spec);

} // namespace vnrf
