// Context support function of the masked field: C_i(x) is the smallest
// L1-connected set F with i in its interior and x == +1 on its boundary,
// minus i itself. Spins outside a window are unobserved, so a context that
// would need them is reported as truncated instead of guessed.
#pragma once

#include "vnrf/lattice.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace vnrf {

enum class ContextStatus { ResolvedWithinWindow, TruncatedByWindow };

struct Context {
    Site center;
    SiteSet members; // excludes center; empty when truncated
    ContextStatus status = ContextStatus::TruncatedByWindow;

    bool resolved() const { return status == ContextStatus::ResolvedWithinWindow; }
    // C_i(x) together with i.
    SiteSet closure() const;
    bool operator==(const Context&) const = default;
};

// Grows F = {i} + N(i) + (-1 clusters attached to N(i), avoiding i) + their
// outer +1 ring.
Context compute_context(const Configuration& x, Site i);

// Literal intersection over every qualifying F inside the window. Windows
// of at most 6x6 sites; throws std::length_error when more than 2^24
// candidate sets would have to be enumerated.
Context brute_force_context(const Configuration& x, Site i);

struct ContextCensus {
    // Per window site, row-major. Sites on the window edge are always truncated.
    std::vector<std::optional<std::size_t>> sizes;
    std::size_t truncated_count = 0;
    std::size_t resolved_count = 0;
    std::size_t max_minus_cluster = 0;
    bool spanning = false; // some -1 cluster touches two opposite window edges
};

ContextCensus context_census(const Configuration& x);

// Union-find labeling of -1 clusters; -1 entries for +1 sites.
struct ClusterLabels {
    std::vector<int> label;          // per site
    std::vector<std::size_t> size;   // per label
    std::vector<unsigned> edges;     // per label: bit 0 top, 1 bottom, 2 left, 3 right
};

ClusterLabels label_minus_clusters(const Configuration& x);
bool has_spanning_minus_cluster(const Configuration& x);

} // namespace vnrf
