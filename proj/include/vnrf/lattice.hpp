// Square-lattice geometry: sites, finite windows with a boundary condition,
// spin configurations, L1 neighborhoods, self-avoiding paths and Peierls
// contours on the dual lattice.
//
// Sites are (i1, i2) with i1 the row and i2 the column. Every ordered output
// in this library is row-major, i.e. lexicographic in (i1, i2).
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace vnrf {

using Spin = std::int8_t; // -1 or +1

struct Site {
    int i1 = 0;
    int i2 = 0;

    auto operator<=>(const Site&) const = default;
};

Site operator+(Site a, Site b);
Site operator-(Site a, Site b);
int l1_norm(Site s);
int l1_distance(Site a, Site b);
std::string to_string(Site s);

// Offsets of the four L1-neighbors, in a fixed order: down, up, right, left.
inline constexpr std::array<Site, 4> kNeighborOffsets{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

// Finite, deduplicated, row-major-ordered set of sites.
class SiteSet {
public:
    SiteSet() = default;
    SiteSet(std::initializer_list<Site> sites);
    explicit SiteSet(std::vector<Site> sites);

    bool contains(Site s) const;
    bool empty() const { return sites_.empty(); }
    std::size_t size() const { return sites_.size(); }
    // Position of s in iteration order, or -1.
    std::ptrdiff_t index_of(Site s) const;

    const std::vector<Site>& sites() const { return sites_; }
    auto begin() const { return sites_.begin(); }
    auto end() const { return sites_.end(); }
    const Site& operator[](std::size_t k) const { return sites_[k]; }

    bool is_subset_of(const SiteSet& other) const;
    SiteSet united(const SiteSet& other) const;
    SiteSet minus(const SiteSet& other) const;
    SiteSet intersected(const SiteSet& other) const;

    bool operator==(const SiteSet&) const = default;

private:
    std::vector<Site> sites_;
};

enum class BoundaryCondition { AllPlus, AllMinus, Free };

std::string to_string(BoundaryCondition bc);
BoundaryCondition parse_boundary_condition(const std::string& text);

// Spin the boundary condition places outside a window; 0 encodes "no
// interaction" for the free boundary.
int boundary_spin(BoundaryCondition bc);

// A finite rectangle of Z^2 together with the boundary condition that stands
// in for everything outside it.
class Window {
public:
    Window(Site origin, int width, int height, BoundaryCondition bc);

    // The square [-n, n]^2.
    static Window centered(int n, BoundaryCondition bc);
    // A side x side square with origin (0, 0).
    static Window square(int side, BoundaryCondition bc);

    Site origin() const { return origin_; }
    int width() const { return width_; }
    int height() const { return height_; }
    BoundaryCondition boundary_condition() const { return bc_; }
    std::size_t site_count() const { return static_cast<std::size_t>(width_) * height_; }

    bool contains(Site s) const;
    // True for window sites with at least one L1-neighbor outside the window.
    bool on_edge(Site s) const;
    std::size_t index(Site s) const;
    Site site(std::size_t index) const;
    SiteSet sites() const;
    Window with_boundary(BoundaryCondition bc) const;

    // Same rectangle; the boundary condition is ignored.
    bool same_geometry(const Window& other) const;
    bool operator==(const Window&) const = default;

private:
    Site origin_;
    int width_;
    int height_;
    BoundaryCondition bc_;
};

// Assignment of +-1 to every site of a window. Reads outside the window fall
// back to the window's boundary condition.
class Configuration {
public:
    Configuration(Window window, Spin fill);
    Configuration(Window window, std::vector<Spin> spins);

    // Configuration whose bit k (row-major site k) set means +1.
    static Configuration from_mask(const Window& window, std::uint64_t plus_mask);

    const Window& window() const { return window_; }
    Spin at(Site s) const;
    Spin at_index(std::size_t k) const { return spins_[k]; }
    void set(Site s, Spin v);
    void set_index(std::size_t k, Spin v) { spins_[k] = v; }
    // Spin inside the window, boundary spin (possibly 0) outside.
    int spin_or_boundary(Site s) const;
    int neighbor_sum(Site s) const;

    std::span<const Spin> spins() const { return spins_; }
    std::span<Spin> spins() { return spins_; }
    std::uint64_t plus_mask() const;
    long long magnetization() const;

    bool operator==(const Configuration&) const = default;

private:
    Window window_;
    std::vector<Spin> spins_;
};

std::string render(const Configuration& x);

using Path = std::vector<Site>;

SiteSet neighbors(Site i);
SiteSet boundary(const SiteSet& f);
SiteSet interior(const SiteSet& f);
// Sites outside f at L1-distance 1 from it.
SiteSet outer_boundary(const SiteSet& f);
bool is_l1_connected(const SiteSet& f);
std::vector<SiteSet> connected_components(const SiteSet& sites);

// Consecutive sites are neighbors and no other pair is.
bool is_self_avoiding_path(std::span<const Site> path);

// All self-avoiding paths of exactly `length` sites that start in
// `start_set`, stay inside `window` and never visit a site of `excluded`.
// Throws std::invalid_argument when no such path exists.
std::vector<Path> enumerate_self_avoiding_paths(const SiteSet& start_set, int length,
                                                const Window& window,
                                                const SiteSet& excluded = {});

// Paths starting at the four neighbors of `center`, which they avoid.
std::vector<Path> paths_from_neighbors(Site center, int length, const Window& window);

// Dual-lattice point (i1 + 1/2, i2 + 1/2) stored doubled, as (2 i1 + 1, 2 i2 + 1).
struct DualSite {
    int d1 = 0;
    int d2 = 0;

    auto operator<=>(const DualSite&) const = default;
};

struct Contour {
    std::vector<DualSite> points; // cyclic; the last point links back to the first

    std::size_t length() const { return points.size(); }
};

// Lattice sites strictly inside the closed curve.
bool encloses(const Contour& gamma, Site s);
bool is_closed_dual_cycle(const Contour& gamma);

// Closed dual curves separating +1 from -1. Requires an all-plus boundary.
std::vector<Contour> extract_contours(const Configuration& x);

// Neighbor pairs with opposite spins, including pairs formed with the
// all-plus exterior.
std::size_t disagreeing_bond_count(const Configuration& x);

// Simple closed dual curves of the given length whose interior contains `s`.
std::vector<Contour> enumerate_contours_around(Site s, int length);

} // namespace vnrf
