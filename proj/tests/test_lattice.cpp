#include "vnrf/lattice.hpp"
#include "vnrf/rng.hpp"
#include "vnrf/theory.hpp"

#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <set>

using namespace vnrf;

namespace {

Configuration random_configuration(const Window& w, RngStream& rng, double p_minus) {
    Configuration x(w, Spin{1});
    for (std::size_t k = 0; k < w.site_count(); ++k)
        if (rng.uniform() < p_minus) x.set_index(k, -1);
    return x;
}

// Every walk of n sites from the four neighbors of the origin, kept when no
// two non-consecutive sites are neighbors and none is the origin.
std::size_t naive_path_count(int n) {
    std::size_t count = 0;
    std::vector<Site> walk;
    std::function<void()> extend = [&]() {
        if (static_cast<int>(walk.size()) == n) {
            for (std::size_t a = 0; a < walk.size(); ++a) {
                if (walk[a] == Site{0, 0}) return;
                for (std::size_t b = a + 1; b < walk.size(); ++b) {
                    const int d = l1_distance(walk[a], walk[b]);
                    if (d == 0 || (d == 1 && b != a + 1)) return;
                }
            }
            ++count;
            return;
        }
        for (Site d : kNeighborOffsets) {
            walk.push_back(walk.back() + d);
            extend();
            walk.pop_back();
        }
    };
    for (Site d : kNeighborOffsets) {
        walk = {d};
        extend();
    }
    return count;
}

// Polyominoes containing the origin whose boundary is one simple closed
// curve: connected, with a complement that is connected to infinity.
// Returns a map perimeter -> count over all such sets of at most max_cells.
std::map<int, std::size_t> simple_polyomino_perimeters(int max_cells) {
    std::set<std::vector<Site>> seen;
    std::vector<std::vector<Site>> frontier{{Site{0, 0}}};
    seen.insert(frontier.front());
    for (int size = 1; size < max_cells; ++size) {
        std::vector<std::vector<Site>> next;
        for (const auto& cells : frontier) {
            for (Site c : cells) {
                for (Site d : kNeighborOffsets) {
                    Site s = c + d;
                    if (std::find(cells.begin(), cells.end(), s) != cells.end()) continue;
                    std::vector<Site> grown = cells;
                    grown.push_back(s);
                    std::sort(grown.begin(), grown.end());
                    if (seen.insert(grown).second) next.push_back(grown);
                }
            }
        }
        frontier = std::move(next);
    }

    std::map<int, std::size_t> out;
    for (const auto& cells : seen) {
        const std::set<Site> in(cells.begin(), cells.end());
        int lo1 = 0, hi1 = 0, lo2 = 0, hi2 = 0;
        for (Site c : cells) {
            lo1 = std::min(lo1, c.i1);
            hi1 = std::max(hi1, c.i1);
            lo2 = std::min(lo2, c.i2);
            hi2 = std::max(hi2, c.i2);
        }
        // Flood the complement from outside the bounding box.
        std::set<Site> reached;
        std::queue<Site> q;
        q.push({lo1 - 1, lo2 - 1});
        reached.insert({lo1 - 1, lo2 - 1});
        while (!q.empty()) {
            const Site s = q.front();
            q.pop();
            for (Site d : kNeighborOffsets) {
                const Site t = s + d;
                if (t.i1 < lo1 - 1 || t.i1 > hi1 + 1 || t.i2 < lo2 - 1 || t.i2 > hi2 + 1) continue;
                if (in.count(t) || reached.count(t)) continue;
                reached.insert(t);
                q.push(t);
            }
        }
        const std::size_t box = static_cast<std::size_t>(hi1 - lo1 + 3) * static_cast<std::size_t>(hi2 - lo2 + 3);
        if (reached.size() + cells.size() != box) continue; // a hole or a pinch
        int perimeter = 0;
        for (Site c : cells)
            for (Site d : kNeighborOffsets)
                if (!in.count(c + d)) ++perimeter;
        ++out[perimeter];
    }
    return out;
}

} // namespace

TEST_CASE("site arithmetic and neighbors") {
    CHECK(neighbors({0, 0}) == SiteSet{{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
    CHECK(neighbors({2, 3}) == SiteSet{{3, 3}, {1, 3}, {2, 4}, {2, 2}});
    CHECK(l1_distance({1, 2}, {-1, 5}) == 5);
    CHECK(to_string(Site{-1, 4}) == "(-1,4)");
}

TEST_CASE("site sets are sorted and deduplicated") {
    const SiteSet s{{2, 0}, {0, 1}, {2, 0}, {0, 0}};
    REQUIRE(s.size() == 3);
    CHECK(s[0] == Site{0, 0});
    CHECK(s[2] == Site{2, 0});
    CHECK(s.index_of({0, 1}) == 1);
    CHECK(s.index_of({5, 5}) == -1);
    const SiteSet t{{0, 0}, {9, 9}};
    CHECK(s.united(t).size() == 4);
    CHECK(s.intersected(t) == SiteSet{{0, 0}});
    CHECK(s.minus(t) == SiteSet{{0, 1}, {2, 0}});
    CHECK(SiteSet{{0, 0}}.is_subset_of(s));
    CHECK_FALSE(t.is_subset_of(s));
}

TEST_CASE("boundary and interior") {
    const SiteSet single{{0, 0}};
    CHECK(boundary(single) == single);
    CHECK(interior(single).empty());

    const SiteSet block = Window::centered(1, BoundaryCondition::AllPlus).sites();
    CHECK(interior(block) == SiteSet{{0, 0}});
    CHECK(boundary(block).size() == 8);
    CHECK(outer_boundary(block).size() == 12);

    const SiteSet domino{{0, 0}, {1, 0}};
    CHECK(boundary(domino) == domino);
}

TEST_CASE("connected components") {
    const auto parts = connected_components(SiteSet{{0, 0}, {1, 0}, {5, 5}});
    REQUIRE(parts.size() == 2);
    CHECK(parts[0] == SiteSet{{0, 0}, {1, 0}});
    CHECK(parts[1] == SiteSet{{5, 5}});
    CHECK(connected_components(SiteSet{}).empty());
    CHECK(connected_components(Window::square(3, BoundaryCondition::Free).sites()).size() == 1);
    CHECK(is_l1_connected(SiteSet{{0, 0}, {0, 1}}));
    CHECK_FALSE(is_l1_connected(SiteSet{{0, 0}, {1, 1}}));
}

TEST_CASE("window indexing round-trips") {
    const Window w({-2, 3}, 5, 4, BoundaryCondition::AllMinus);
    CHECK(w.site_count() == 20);
    for (std::size_t k = 0; k < w.site_count(); ++k) CHECK(w.index(w.site(k)) == k);
    CHECK(w.sites().size() == 20);
    CHECK(w.on_edge({-2, 3}));
    CHECK_FALSE(w.on_edge({-1, 4}));
    CHECK_FALSE(w.contains({2, 3}));
    CHECK(Window::centered(2, BoundaryCondition::AllPlus).contains({-2, 2}));
}

TEST_CASE("configurations read the boundary condition outside the window") {
    const Window w = Window::square(3, BoundaryCondition::AllMinus);
    Configuration x(w, Spin{1});
    CHECK(x.spin_or_boundary({-1, 0}) == -1);
    CHECK(x.neighbor_sum({0, 0}) == 0);  // two inside (+1), two outside (-1)
    CHECK(x.neighbor_sum({1, 1}) == 4);

    const Configuration f(w.with_boundary(BoundaryCondition::Free), Spin{1});
    CHECK(f.neighbor_sum({0, 0}) == 2);

    for (std::uint64_t m : {0ULL, 1ULL, 0x155ULL, 0x1FFULL}) CHECK(Configuration::from_mask(w, m).plus_mask() == m);
    CHECK(Configuration::from_mask(w, 0).magnetization() == -9);
}

TEST_CASE("self-avoiding path predicate is strict") {
    const std::vector<Site> straight{{0, 0}, {0, 1}, {0, 2}};
    CHECK(is_self_avoiding_path(straight));
    const std::vector<Site> square{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    CHECK_FALSE(is_self_avoiding_path(square)); // first and last sites touch
    const std::vector<Site> jump{{0, 0}, {0, 2}};
    CHECK_FALSE(is_self_avoiding_path(jump));
}

TEST_CASE("path enumeration matches naive walk filtering") {
    const Window big = Window::centered(10, BoundaryCondition::AllPlus);
    CHECK(paths_from_neighbors({0, 0}, 1, big).size() == 4);
    CHECK(paths_from_neighbors({0, 0}, 2, big).size() == 12);
    for (int n = 1; n <= 6; ++n) {
        const auto paths = paths_from_neighbors({0, 0}, n, big);
        CHECK(paths.size() == naive_path_count(n));
        CHECK(paths.size() <= path_count_bound(n));
        for (const Path& p : paths) {
            CHECK(p.size() == static_cast<std::size_t>(n));
            CHECK(is_self_avoiding_path(p));
            CHECK(std::find(p.begin(), p.end(), Site{0, 0}) == p.end());
        }
    }
    CHECK_THROWS_AS(paths_from_neighbors({0, 0}, 2, Window::centered(0, BoundaryCondition::AllPlus)),
                    std::invalid_argument);
}

TEST_CASE("contours of simple configurations") {
    const Window w = Window::centered(2, BoundaryCondition::AllPlus);
    Configuration x(w, Spin{1});
    CHECK(extract_contours(x).empty());

    x.set({0, 0}, -1);
    auto gammas = extract_contours(x);
    REQUIRE(gammas.size() == 1);
    CHECK(gammas[0].length() == 4);
    CHECK(is_closed_dual_cycle(gammas[0]));
    CHECK(encloses(gammas[0], {0, 0}));
    CHECK_FALSE(encloses(gammas[0], {0, 1}));

    x.set({1, 0}, -1);
    gammas = extract_contours(x);
    REQUIRE(gammas.size() == 1);
    CHECK(gammas[0].length() == 6);

    CHECK_THROWS(extract_contours(Configuration(w.with_boundary(BoundaryCondition::AllMinus), Spin{1})));
}

TEST_CASE("total contour length equals the disagreeing bond count") {
    const Window w3 = Window::square(3, BoundaryCondition::AllPlus);
    for (std::uint64_t m = 0; m < 512; ++m) {
        const Configuration x = Configuration::from_mask(w3, m);
        std::size_t total = 0;
        for (const Contour& c : extract_contours(x)) {
            CHECK(is_closed_dual_cycle(c));
            total += c.length();
        }
        CHECK(total == disagreeing_bond_count(x));
    }
    RngStream rng(77, 1);
    const Window w6 = Window::square(6, BoundaryCondition::AllPlus);
    for (int k = 0; k < 300; ++k) {
        const Configuration x = random_configuration(w6, rng, 0.5);
        std::size_t total = 0;
        for (const Contour& c : extract_contours(x)) total += c.length();
        CHECK(total == disagreeing_bond_count(x));
    }
}

TEST_CASE("contours around a site: counts against a polyomino oracle") {
    // Frozen from the oracle below: 1 square, 4 dominoes, and 22 shapes of
    // perimeter 8 (6 straight trominoes, 4 squares, 12 L-trominoes).
    CHECK(enumerate_contours_around({0, 0}, 4).size() == 1);
    CHECK(enumerate_contours_around({0, 0}, 6).size() == 4);
    CHECK(enumerate_contours_around({0, 0}, 8).size() == 22);

    const auto oracle = simple_polyomino_perimeters(6); // perimeter <= 10 needs at most 6 cells
    for (int l = 4; l <= 10; l += 2) {
        const auto gammas = enumerate_contours_around({3, -2}, l);
        const auto it = oracle.find(l);
        CHECK(gammas.size() == (it == oracle.end() ? 0 : it->second));
        CHECK(gammas.size() <= contour_count_bound(l));
        for (const Contour& g : gammas) {
            CHECK(g.length() == static_cast<std::size_t>(l));
            CHECK(is_closed_dual_cycle(g));
            CHECK(encloses(g, {3, -2}));
        }
    }
}

TEST_CASE("boundary condition names") {
    for (auto bc : {BoundaryCondition::AllPlus, BoundaryCondition::AllMinus, BoundaryCondition::Free})
        CHECK(parse_boundary_condition(to_string(bc)) == bc);
    CHECK_THROWS_AS(parse_boundary_condition("periodic"), std::invalid_argument);
}
