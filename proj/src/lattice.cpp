#include "vnrf/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace vnrf {

Site operator+(Site a, Site b) { return {a.i1 + b.i1, a.i2 + b.i2}; }
Site operator-(Site a, Site b) { return {a.i1 - b.i1, a.i2 - b.i2}; }
int l1_norm(Site s) { return std::abs(s.i1) + std::abs(s.i2); }
int l1_distance(Site a, Site b) { return l1_norm(a - b); }

std::string to_string(Site s) {
    return "(" + std::to_string(s.i1) + "," + std::to_string(s.i2) + ")";
}

// ---------------------------------------------------------------------------
// SiteSet

SiteSet::SiteSet(std::initializer_list<Site> sites) : SiteSet(std::vector<Site>(sites)) {}

SiteSet::SiteSet(std::vector<Site> sites) : sites_(std::move(sites)) {
    std::sort(sites_.begin(), sites_.end());
    sites_.erase(std::unique(sites_.begin(), sites_.end()), sites_.end());
}

bool SiteSet::contains(Site s) const {
    return std::binary_search(sites_.begin(), sites_.end(), s);
}

std::ptrdiff_t SiteSet::index_of(Site s) const {
    auto it = std::lower_bound(sites_.begin(), sites_.end(), s);
    if (it == sites_.end() || *it != s) return -1;
    return it - sites_.begin();
}

bool SiteSet::is_subset_of(const SiteSet& other) const {
    return std::includes(other.sites_.begin(), other.sites_.end(), sites_.begin(), sites_.end());
}

SiteSet SiteSet::united(const SiteSet& other) const {
    std::vector<Site> out;
    std::set_union(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                   std::back_inserter(out));
    return SiteSet(std::move(out));
}

SiteSet SiteSet::minus(const SiteSet& other) const {
    std::vector<Site> out;
    std::set_difference(sites_.begin(), sites_.end(), other.sites_.begin(), other.sites_.end(),
                        std::back_inserter(out));
    return SiteSet(std::move(out));
}

SiteSet SiteSet::intersected(const SiteSet& other) const {
    std::vector<Site> out;
    std::set_intersection(sites_.begin(), sites_.end(), other.sites_.begin(),
                          other.sites_.end(), std::back_inserter(out));
    return SiteSet(std::move(out));
}

// ---------------------------------------------------------------------------
// Boundary conditions and windows

std::string to_string(BoundaryCondition bc) {
    switch (bc) {
    case BoundaryCondition::AllPlus: return "plus";
    case BoundaryCondition::AllMinus: return "minus";
    case BoundaryCondition::Free: return "free";
    }
    return "?";
}

BoundaryCondition parse_boundary_condition(const std::string& text) {
    if (text == "plus" || text == "+") return BoundaryCondition::AllPlus;
    if (text == "minus" || text == "-") return BoundaryCondition::AllMinus;
    if (text == "free") return BoundaryCondition::Free;
    throw std::invalid_argument("unknown boundary condition '" + text +
                                "' (expected plus, minus or free)");
}

int boundary_spin(BoundaryCondition bc) {
    switch (bc) {
    case BoundaryCondition::AllPlus: return 1;
    case BoundaryCondition::AllMinus: return -1;
    case BoundaryCondition::Free: return 0;
    }
    return 0;
}

Window::Window(Site origin, int width, int height, BoundaryCondition bc)
    : origin_(origin), width_(width), height_(height), bc_(bc) {
    if (width < 1 || height < 1) throw std::invalid_argument("window sides must be >= 1");
    if (static_cast<long long>(width) * height > (1LL << 30))
        throw std::invalid_argument("window too large");
}

Window Window::centered(int n, BoundaryCondition bc) {
    if (n < 0) throw std::invalid_argument("centered window needs n >= 0");
    return Window({-n, -n}, 2 * n + 1, 2 * n + 1, bc);
}

Window Window::square(int side, BoundaryCondition bc) { return Window({0, 0}, side, side, bc); }

bool Window::contains(Site s) const {
    return s.i1 >= origin_.i1 && s.i1 < origin_.i1 + height_ && s.i2 >= origin_.i2 &&
           s.i2 < origin_.i2 + width_;
}

bool Window::on_edge(Site s) const {
    return contains(s) && (s.i1 == origin_.i1 || s.i1 == origin_.i1 + height_ - 1 ||
                           s.i2 == origin_.i2 || s.i2 == origin_.i2 + width_ - 1);
}

std::size_t Window::index(Site s) const {
    if (!contains(s)) throw std::out_of_range("site " + to_string(s) + " outside window");
    return static_cast<std::size_t>(s.i1 - origin_.i1) * width_ + (s.i2 - origin_.i2);
}

Site Window::site(std::size_t index) const {
    return {origin_.i1 + static_cast<int>(index / width_),
            origin_.i2 + static_cast<int>(index % width_)};
}

SiteSet Window::sites() const {
    std::vector<Site> out;
    out.reserve(site_count());
    for (std::size_t k = 0; k < site_count(); ++k) out.push_back(site(k));
    return SiteSet(std::move(out));
}

Window Window::with_boundary(BoundaryCondition bc) const {
    return Window(origin_, width_, height_, bc);
}

bool Window::same_geometry(const Window& other) const {
    return origin_ == other.origin_ && width_ == other.width_ && height_ == other.height_;
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(Window window, Spin fill)
    : window_(window), spins_(window.site_count(), fill) {
    if (fill != 1 && fill != -1) throw std::invalid_argument("spins must be +1 or -1");
}

Configuration::Configuration(Window window, std::vector<Spin> spins)
    : window_(window), spins_(std::move(spins)) {
    if (spins_.size() != window_.site_count())
        throw std::invalid_argument("spin vector does not cover the window");
    for (Spin v : spins_)
        if (v != 1 && v != -1) throw std::invalid_argument("spins must be +1 or -1");
}

Configuration Configuration::from_mask(const Window& window, std::uint64_t plus_mask) {
    if (window.site_count() > 64) throw std::invalid_argument("mask needs <= 64 sites");
    std::vector<Spin> spins(window.site_count());
    for (std::size_t k = 0; k < spins.size(); ++k) spins[k] = ((plus_mask >> k) & 1U) ? 1 : -1;
    return Configuration(window, std::move(spins));
}

Spin Configuration::at(Site s) const { return spins_[window_.index(s)]; }

void Configuration::set(Site s, Spin v) {
    if (v != 1 && v != -1) throw std::invalid_argument("spins must be +1 or -1");
    spins_[window_.index(s)] = v;
}

int Configuration::spin_or_boundary(Site s) const {
    if (window_.contains(s)) return spins_[window_.index(s)];
    return boundary_spin(window_.boundary_condition());
}

int Configuration::neighbor_sum(Site s) const {
    int sum = 0;
    for (Site d : kNeighborOffsets) sum += spin_or_boundary(s + d);
    return sum;
}

std::uint64_t Configuration::plus_mask() const {
    if (spins_.size() > 64) throw std::logic_error("mask needs <= 64 sites");
    std::uint64_t m = 0;
    for (std::size_t k = 0; k < spins_.size(); ++k)
        if (spins_[k] > 0) m |= std::uint64_t{1} << k;
    return m;
}

long long Configuration::magnetization() const {
    long long m = 0;
    for (Spin v : spins_) m += v;
    return m;
}

std::string render(const Configuration& x) {
    std::ostringstream os;
    const Window& w = x.window();
    for (int r = 0; r < w.height(); ++r) {
        for (int c = 0; c < w.width(); ++c)
            os << (x.at_index(static_cast<std::size_t>(r) * w.width() + c) > 0 ? '+' : '-');
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Neighborhoods

SiteSet neighbors(Site i) {
    std::vector<Site> out;
    for (Site d : kNeighborOffsets) out.push_back(i + d);
    return SiteSet(std::move(out));
}

SiteSet boundary(const SiteSet& f) {
    std::vector<Site> out;
    for (Site j : f) {
        for (Site d : kNeighborOffsets) {
            if (!f.contains(j + d)) {
                out.push_back(j);
                break;
            }
        }
    }
    return SiteSet(std::move(out));
}

SiteSet interior(const SiteSet& f) { return f.minus(boundary(f)); }

SiteSet outer_boundary(const SiteSet& f) {
    std::vector<Site> out;
    for (Site j : f)
        for (Site d : kNeighborOffsets)
            if (!f.contains(j + d)) out.push_back(j + d);
    return SiteSet(std::move(out));
}

std::vector<SiteSet> connected_components(const SiteSet& sites) {
    std::vector<SiteSet> components;
    std::vector<char> seen(sites.size(), 0);
    for (std::size_t start = 0; start < sites.size(); ++start) {
        if (seen[start]) continue;
        std::vector<Site> members;
        std::deque<std::size_t> queue{start};
        seen[start] = 1;
        while (!queue.empty()) {
            std::size_t k = queue.front();
            queue.pop_front();
            members.push_back(sites[k]);
            for (Site d : kNeighborOffsets) {
                auto j = sites.index_of(sites[k] + d);
                if (j >= 0 && !seen[j]) {
                    seen[j] = 1;
                    queue.push_back(static_cast<std::size_t>(j));
                }
            }
        }
        components.emplace_back(std::move(members));
    }
    return components;
}

bool is_l1_connected(const SiteSet& f) { return connected_components(f).size() <= 1; }

bool is_self_avoiding_path(std::span<const Site> path) {
    for (std::size_t j = 0; j < path.size(); ++j) {
        for (std::size_t k = j + 1; k < path.size(); ++k) {
            const int d = l1_distance(path[j], path[k]);
            if (d == 0) return false;
            if ((d == 1) != (k == j + 1)) return false;
        }
    }
    return true;
}

namespace {

class PathEnumerator {
public:
    PathEnumerator(const Window& window, const SiteSet& excluded, int length)
        : window_(window), length_(length), on_path_(window.site_count(), 0),
          blocked_(window.site_count(), 0) {
        for (Site s : excluded)
            if (window.contains(s)) blocked_[window.index(s)] = 1;
    }

    void from(Site start) {
        if (!admissible(start)) return;
        extend(start);
    }

    std::vector<Path> take() { return std::move(out_); }

private:
    bool admissible(Site s) const {
        return window_.contains(s) && !blocked_[window_.index(s)] && !on_path_[window_.index(s)];
    }

    // t may only touch the current end of the path.
    bool keeps_self_avoidance(Site t) const {
        for (Site d : kNeighborOffsets) {
            Site u = t + d;
            if (u != path_.back() && window_.contains(u) && on_path_[window_.index(u)]) return false;
        }
        return true;
    }

    void extend(Site s) {
        path_.push_back(s);
        on_path_[window_.index(s)] = 1;
        if (static_cast<int>(path_.size()) == length_) {
            out_.push_back(path_);
        } else {
            for (Site d : kNeighborOffsets) {
                Site t = s + d;
                if (admissible(t) && keeps_self_avoidance(t)) extend(t);
            }
        }
        on_path_[window_.index(s)] = 0;
        path_.pop_back();
    }

    const Window& window_;
    int length_;
    std::vector<char> on_path_;
    std::vector<char> blocked_;
    Path path_;
    std::vector<Path> out_;
};

} // namespace

std::vector<Path> enumerate_self_avoiding_paths(const SiteSet& start_set, int length,
                                                const Window& window, const SiteSet& excluded) {
    if (length < 1) throw std::invalid_argument("path length must be >= 1");
    PathEnumerator walker(window, excluded, length);
    for (Site s : start_set) walker.from(s);
    auto paths = walker.take();
    if (paths.empty())
        throw std::invalid_argument("window too small to hold a self-avoiding path of " +
                                    std::to_string(length) + " sites");
    return paths;
}

std::vector<Path> paths_from_neighbors(Site center, int length, const Window& window) {
    return enumerate_self_avoiding_paths(neighbors(center), length, window, SiteSet{center});
}

// ---------------------------------------------------------------------------
// Contours

namespace {

using DualEdge = std::pair<DualSite, DualSite>; // ordered: first < second

DualEdge make_edge(DualSite a, DualSite b) { return a < b ? DualEdge{a, b} : DualEdge{b, a}; }

// Dual edge crossing the bond between neighboring sites a and b.
DualEdge dual_of_bond(Site a, Site b) {
    const int m1 = a.i1 + b.i1; // doubled midpoint
    const int m2 = a.i2 + b.i2;
    if (a.i1 == b.i1) // horizontal bond -> vertical dual edge at column m2
        return make_edge({m1 - 1, m2}, {m1 + 1, m2});
    return make_edge({m1, m2 - 1}, {m1, m2 + 1});
}

// The two sites separated by a dual edge.
std::pair<Site, Site> sites_of_edge(const DualEdge& e) {
    const int m1 = (e.first.d1 + e.second.d1) / 2;
    const int m2 = (e.first.d2 + e.second.d2) / 2;
    if (m1 % 2 == 0) // vertical edge: sites left and right of it
        return {Site{m1 / 2, (m2 - 1) / 2}, Site{m1 / 2, (m2 + 1) / 2}};
    return {Site{(m1 - 1) / 2, m2 / 2}, Site{(m1 + 1) / 2, m2 / 2}};
}

DualSite other_end(const DualEdge& e, DualSite v) { return e.first == v ? e.second : e.first; }

} // namespace

std::size_t disagreeing_bond_count(const Configuration& x) {
    const Window& w = x.window();
    std::size_t count = 0;
    for (std::size_t k = 0; k < w.site_count(); ++k) {
        Site s = w.site(k);
        for (Site d : kNeighborOffsets) {
            Site t = s + d;
            const bool inside = w.contains(t);
            if (inside && t < s) continue; // counted from the other end
            const int yt = inside ? x.at(t) : 1;
            if (yt != x.at_index(k)) ++count;
        }
    }
    return count;
}

std::vector<Contour> extract_contours(const Configuration& x) {
    const Window& w = x.window();
    if (w.boundary_condition() != BoundaryCondition::AllPlus)
        throw std::invalid_argument("contour extraction requires the all-plus boundary condition");

    auto spin = [&](Site s) { return w.contains(s) ? static_cast<int>(x.at(s)) : 1; };

    std::set<DualEdge> edges;
    for (std::size_t k = 0; k < w.site_count(); ++k) {
        Site s = w.site(k);
        for (Site d : kNeighborOffsets) {
            Site t = s + d;
            if (w.contains(t) && t < s) continue;
            if (spin(t) != spin(s)) edges.insert(dual_of_bond(s, t));
        }
    }

    std::map<DualSite, std::vector<DualEdge>> incident;
    for (const auto& e : edges) {
        incident[e.first].push_back(e);
        incident[e.second].push_back(e);
    }

    // At a dual point with four disagreement edges, leave along the edge that
    // borders the same -1 site as the arriving edge, so diagonal -1 sites are
    // enclosed by separate contours touching at the point.
    auto next_edge = [&](DualSite v, const DualEdge& arriving) -> DualEdge {
        const auto& around = incident.at(v);
        if (around.size() == 2) return around[0] == arriving ? around[1] : around[0];
        auto [a, b] = sites_of_edge(arriving);
        Site minus_site = spin(a) < 0 ? a : b;
        for (const auto& e : around) {
            if (e == arriving) continue;
            auto [c, d] = sites_of_edge(e);
            if (c == minus_site || d == minus_site) return e;
        }
        throw std::logic_error("inconsistent contour vertex");
    };

    std::vector<Contour> contours;
    std::set<DualEdge> used;
    for (const auto& start : edges) {
        if (used.count(start)) continue;
        used.insert(start);
        Contour gamma;
        const DualSite v0 = start.first;
        gamma.points.push_back(v0);
        DualEdge current = start;
        DualSite v = other_end(start, v0);
        for (;;) {
            DualEdge next = next_edge(v, current);
            if (next == start) break;
            gamma.points.push_back(v);
            used.insert(next);
            v = other_end(next, v);
            current = next;
        }
        contours.push_back(std::move(gamma));
    }
    return contours;
}

bool is_closed_dual_cycle(const Contour& gamma) {
    const auto& p = gamma.points;
    if (p.size() < 4 || p.size() % 2 != 0) return false;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const DualSite a = p[k];
        const DualSite b = p[(k + 1) % p.size()];
        if ((a.d1 & 1) == 0 || (a.d2 & 1) == 0) return false;
        if (std::abs(a.d1 - b.d1) + std::abs(a.d2 - b.d2) != 2) return false;
    }
    return true;
}

bool encloses(const Contour& gamma, Site s) {
    // Ray from the doubled site towards increasing d2; site rows are even and
    // contour rows odd, so the ray never meets a vertex.
    const int p1 = 2 * s.i1;
    const int p2 = 2 * s.i2;
    const auto& pts = gamma.points;
    bool inside = false;
    for (std::size_t k = 0; k < pts.size(); ++k) {
        const DualSite a = pts[k];
        const DualSite b = pts[(k + 1) % pts.size()];
        if (a.d2 != b.d2 || a.d2 < p2) continue;
        if ((a.d1 < p1) != (b.d1 < p1)) inside = !inside;
    }
    return inside;
}

std::vector<Contour> enumerate_contours_around(Site s, int length) {
    if (length < 4 || length % 2 != 0)
        throw std::invalid_argument("contour length must be even and >= 4");
    constexpr std::array<DualSite, 4> steps{{{2, 0}, {-2, 0}, {0, 2}, {0, -2}}};
    const int c1 = 2 * s.i1;
    const int c2 = 2 * s.i2;
    const int reach = length; // doubled half-perimeter bound

    std::vector<Contour> out;
    std::vector<DualSite> walk;
    std::set<DualSite> on_walk;

    // Each polygon is produced once: walks start at its smallest vertex and
    // the orientation is fixed by comparing the second and last vertices.
    auto dfs = [&](auto&& self, DualSite v) -> void {
        if (static_cast<int>(walk.size()) == length) {
            const DualSite v0 = walk.front();
            if (std::abs(v.d1 - v0.d1) + std::abs(v.d2 - v0.d2) != 2) return;
            if (!(walk[1] < walk.back())) return;
            Contour gamma{walk};
            if (encloses(gamma, s)) out.push_back(std::move(gamma));
            return;
        }
        for (DualSite d : steps) {
            DualSite t{v.d1 + d.d1, v.d2 + d.d2};
            if (t < walk.front() || on_walk.count(t)) continue;
            if (std::abs(t.d1 - c1) > reach || std::abs(t.d2 - c2) > reach) continue;
            walk.push_back(t);
            on_walk.insert(t);
            self(self, t);
            on_walk.erase(t);
            walk.pop_back();
        }
    };

    for (int d1 = c1 - reach + 1; d1 <= c1 + reach; d1 += 2) {
        for (int d2 = c2 - reach + 1; d2 <= c2 + reach; d2 += 2) {
            DualSite v0{d1, d2};
            walk.assign(1, v0);
            on_walk = {v0};
            dfs(dfs, v0);
        }
    }
    return out;
}

} // namespace vnrf
