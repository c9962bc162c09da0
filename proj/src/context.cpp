#include "vnrf/context.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

namespace vnrf {

SiteSet Context::closure() const { return members.united(SiteSet{center}); }

Context compute_context(const Configuration& x, Site i) {
    const Window& w = x.window();
    if (!w.contains(i)) throw std::out_of_range("site " + to_string(i) + " is outside the window");

    Context ctx{i, {}, ContextStatus::TruncatedByWindow};
    for (Site d : kNeighborOffsets)
        if (!w.contains(i + d)) return ctx;

    std::vector<char> in_f(w.site_count(), 0);
    std::vector<char> queued(w.site_count(), 0);
    std::deque<Site> frontier;
    in_f[w.index(i)] = 1;
    for (Site d : kNeighborOffsets) {
        Site j = i + d;
        in_f[w.index(j)] = 1;
        if (x.at(j) < 0) {
            queued[w.index(j)] = 1;
            frontier.push_back(j);
        }
    }
    while (!frontier.empty()) {
        Site s = frontier.front();
        frontier.pop_front();
        if (w.on_edge(s)) return ctx; // needs a spin outside the window
        for (Site d : kNeighborOffsets) {
            Site t = s + d;
            if (t == i) continue;
            const auto kt = w.index(t);
            in_f[kt] = 1;
            if (x.at_index(kt) < 0 && !queued[kt]) {
                queued[kt] = 1;
                frontier.push_back(t);
            }
        }
    }

    std::vector<Site> members;
    for (std::size_t k = 0; k < in_f.size(); ++k)
        if (in_f[k] && w.site(k) != i) members.push_back(w.site(k));
    ctx.members = SiteSet(std::move(members));
    ctx.status = ContextStatus::ResolvedWithinWindow;
    return ctx;
}

namespace {

// Bit-parallel set operations on a window of at most 64 sites.
class GridMasks {
public:
    explicit GridMasks(const Window& w) : width_(w.width()) {
        const auto n = w.site_count();
        full_ = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
        for (std::size_t k = 0; k < n; ++k) {
            const auto c = static_cast<int>(k % width_);
            if (c == 0) first_col_ |= std::uint64_t{1} << k;
            if (c == width_ - 1) last_col_ |= std::uint64_t{1} << k;
        }
    }

    std::uint64_t has_down(std::uint64_t f) const { return f >> width_; }
    std::uint64_t has_up(std::uint64_t f) const { return (f << width_) & full_; }
    std::uint64_t has_right(std::uint64_t f) const { return (f >> 1) & ~last_col_; }
    std::uint64_t has_left(std::uint64_t f) const { return (f << 1) & ~first_col_ & full_; }

    std::uint64_t interior(std::uint64_t f) const {
        return f & has_down(f) & has_up(f) & has_right(f) & has_left(f);
    }
    std::uint64_t spread(std::uint64_t f) const {
        return f | has_down(f) | has_up(f) | has_right(f) | has_left(f);
    }
    std::uint64_t full() const { return full_; }
    bool connected(std::uint64_t f) const {
        if (f == 0) return true;
        std::uint64_t reach = f & (~f + 1);
        for (;;) {
            const std::uint64_t grown = spread(reach) & f;
            if (grown == reach) return reach == f;
            reach = grown;
        }
    }

private:
    int width_;
    std::uint64_t full_ = 0;
    std::uint64_t first_col_ = 0;
    std::uint64_t last_col_ = 0;
};

} // namespace

Context brute_force_context(const Configuration& x, Site i) {
    const Window& w = x.window();
    if (!w.contains(i)) throw std::out_of_range("site " + to_string(i) + " is outside the window");
    if (w.width() > 6 || w.height() > 6)
        throw std::length_error("brute-force context enumeration supports windows up to 6x6");

    Context ctx{i, {}, ContextStatus::TruncatedByWindow};
    for (Site d : kNeighborOffsets)
        if (!w.contains(i + d)) return ctx; // no F inside the window has i in its interior

    const GridMasks grid(w);
    const std::uint64_t minus_mask = ~x.plus_mask() & grid.full();
    const std::uint64_t center_bit = std::uint64_t{1} << w.index(i);
    std::uint64_t forced = center_bit;
    for (Site d : kNeighborOffsets) forced |= std::uint64_t{1} << w.index(i + d);

    std::vector<std::size_t> free_bits;
    for (std::size_t k = 0; k < w.site_count(); ++k)
        if (!((forced >> k) & 1U)) free_bits.push_back(k);
    if (free_bits.size() > 24)
        throw std::length_error("brute-force context would enumerate more than 2^24 sets");

    auto qualifies = [&](std::uint64_t f) {
        const std::uint64_t inner = grid.interior(f);
        if (!(inner & center_bit)) return false;
        if ((f & ~inner) & minus_mask) return false;
        return grid.connected(f);
    };

    std::uint64_t meet = ~std::uint64_t{0};
    bool found = false;
    const std::uint64_t subsets = std::uint64_t{1} << free_bits.size();
    for (std::uint64_t s = 0; s < subsets; ++s) {
        std::uint64_t f = forced;
        for (std::size_t b = 0; b < free_bits.size(); ++b)
            if ((s >> b) & 1U) f |= std::uint64_t{1} << free_bits[b];
        if (qualifies(f)) {
            meet &= f;
            found = true;
        }
    }
    if (!found) return ctx;
    if (!qualifies(meet))
        throw std::logic_error("intersection of qualifying sets does not qualify at " + to_string(i));

    std::vector<Site> members;
    for (std::size_t k = 0; k < w.site_count(); ++k)
        if (((meet >> k) & 1U) && w.site(k) != i) members.push_back(w.site(k));
    ctx.members = SiteSet(std::move(members));
    ctx.status = ContextStatus::ResolvedWithinWindow;
    return ctx;
}

ClusterLabels label_minus_clusters(const Configuration& x) {
    const Window& w = x.window();
    const std::size_t n = w.site_count();
    const int width = w.width();

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t a) {
        while (parent[a] != a) {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        return a;
    };
    auto unite = [&](std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    };

    for (std::size_t k = 0; k < n; ++k) {
        if (x.at_index(k) > 0) continue;
        if (k % width != 0 && x.at_index(k - 1) < 0) unite(k, k - 1);
        if (k >= static_cast<std::size_t>(width) && x.at_index(k - width) < 0) unite(k, k - width);
    }

    ClusterLabels out;
    out.label.assign(n, -1);
    std::vector<int> root_label(n, -1);
    for (std::size_t k = 0; k < n; ++k) {
        if (x.at_index(k) > 0) continue;
        const std::size_t r = find(k);
        if (root_label[r] < 0) {
            root_label[r] = static_cast<int>(out.size.size());
            out.size.push_back(0);
            out.edges.push_back(0);
        }
        const int lab = root_label[r];
        out.label[k] = lab;
        ++out.size[lab];
        const Site s = w.site(k);
        if (s.i1 == w.origin().i1) out.edges[lab] |= 1U;
        if (s.i1 == w.origin().i1 + w.height() - 1) out.edges[lab] |= 2U;
        if (s.i2 == w.origin().i2) out.edges[lab] |= 4U;
        if (s.i2 == w.origin().i2 + w.width() - 1) out.edges[lab] |= 8U;
    }
    return out;
}

namespace {

bool spans(unsigned edges) { return (edges & 3U) == 3U || (edges & 12U) == 12U; }

} // namespace

bool has_spanning_minus_cluster(const Configuration& x) {
    const auto labels = label_minus_clusters(x);
    return std::any_of(labels.edges.begin(), labels.edges.end(), spans);
}

ContextCensus context_census(const Configuration& x) {
    const Window& w = x.window();
    const std::size_t n = w.site_count();
    const ClusterLabels labels = label_minus_clusters(x);
    const std::size_t clusters = labels.size.size();

    ContextCensus census;
    census.sizes.assign(n, std::nullopt);
    for (std::size_t c = 0; c < clusters; ++c) {
        census.max_minus_cluster = std::max(census.max_minus_cluster, labels.size[c]);
        census.spanning = census.spanning || spans(labels.edges[c]);
    }

    // Sites of each cluster plus its outer ring, for clusters clear of the edge.
    std::vector<std::vector<std::size_t>> hull(clusters);
    std::vector<std::size_t> stamp(n, 0);
    std::size_t epoch = 0;
    {
        std::vector<std::vector<std::size_t>> members(clusters);
        for (std::size_t k = 0; k < n; ++k)
            if (labels.label[k] >= 0) members[labels.label[k]].push_back(k);
        for (std::size_t c = 0; c < clusters; ++c) {
            if (labels.edges[c] != 0) continue;
            ++epoch;
            for (std::size_t k : members[c]) {
                const Site s = w.site(k);
                for (Site d : kNeighborOffsets) {
                    const std::size_t j = w.index(s + d);
                    if (stamp[j] != epoch) {
                        stamp[j] = epoch;
                        hull[c].push_back(j);
                    }
                }
                if (stamp[k] != epoch) {
                    stamp[k] = epoch;
                    hull[c].push_back(k);
                }
            }
        }
    }

    for (std::size_t k = 0; k < n; ++k) {
        const Site i = w.site(k);
        if (w.on_edge(i)) {
            ++census.truncated_count;
            continue;
        }
        std::array<int, 4> attached{-1, -1, -1, -1};
        std::size_t count = 0;
        if (labels.label[k] >= 0) {
            attached[count++] = labels.label[k];
        } else {
            for (Site d : kNeighborOffsets) {
                const int lab = labels.label[w.index(i + d)];
                if (lab >= 0 && std::find(attached.begin(), attached.begin() + count, lab) ==
                                    attached.begin() + count)
                    attached[count++] = lab;
            }
        }
        bool truncated = false;
        for (std::size_t a = 0; a < count; ++a) truncated = truncated || labels.edges[attached[a]] != 0;
        if (truncated) {
            ++census.truncated_count;
            continue;
        }

        ++epoch;
        std::size_t size = 0;
        auto mark = [&](std::size_t j) {
            if (stamp[j] != epoch) {
                stamp[j] = epoch;
                ++size;
            }
        };
        mark(k);
        for (Site d : kNeighborOffsets) mark(w.index(i + d));
        for (std::size_t a = 0; a < count; ++a)
            for (std::size_t j : hull[attached[a]]) mark(j);
        census.sizes[k] = size - 1;
        ++census.resolved_count;
    }
    return census;
}

} // namespace vnrf
