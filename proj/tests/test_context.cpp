#include "vnrf/context.hpp"
#include "vnrf/rng.hpp"

#include <doctest.h>

#include <queue>
#include <set>
#include <stdexcept>

using namespace vnrf;

namespace {

Configuration random_configuration(const Window& w, RngStream& rng, double p_minus) {
    Configuration x(w, Spin{1});
    for (std::size_t k = 0; k < w.site_count(); ++k)
        if (rng.uniform() < p_minus) x.set_index(k, -1);
    return x;
}

// -1 sites reachable from the -1 neighbors of i through -1 sites, never
// stepping on i.
std::set<Site> attached_minus(const Configuration& x, Site i) {
    std::set<Site> seen;
    std::queue<Site> q;
    for (Site d : kNeighborOffsets) {
        const Site j = i + d;
        if (x.window().contains(j) && x.at(j) < 0 && seen.insert(j).second) q.push(j);
    }
    while (!q.empty()) {
        const Site s = q.front();
        q.pop();
        for (Site d : kNeighborOffsets) {
            const Site t = s + d;
            if (t == i || !x.window().contains(t) || x.at(t) > 0) continue;
            if (seen.insert(t).second) q.push(t);
        }
    }
    return seen;
}

// A context fits the window unless i sits on the edge or some attached -1
// site does.
bool truncated_by_oracle(const Configuration& x, Site i) {
    const Window& w = x.window();
    if (w.on_edge(i)) return true;
    for (Site s : attached_minus(x, i))
        if (w.on_edge(s)) return true;
    return false;
}

bool spanning_by_oracle(const Configuration& x) {
    const Window& w = x.window();
    std::set<Site> seen;
    for (Site start : w.sites()) {
        if (x.at(start) > 0 || seen.count(start)) continue;
        bool top = false, bottom = false, left = false, right = false;
        std::queue<Site> q;
        q.push(start);
        seen.insert(start);
        while (!q.empty()) {
            const Site s = q.front();
            q.pop();
            top = top || s.i1 == w.origin().i1;
            bottom = bottom || s.i1 == w.origin().i1 + w.height() - 1;
            left = left || s.i2 == w.origin().i2;
            right = right || s.i2 == w.origin().i2 + w.width() - 1;
            for (Site d : kNeighborOffsets) {
                const Site t = s + d;
                if (w.contains(t) && x.at(t) < 0 && seen.insert(t).second) q.push(t);
            }
        }
        if ((top && bottom) || (left && right)) return true;
    }
    return false;
}

} // namespace

TEST_CASE("contexts of simple configurations") {
    const Window w = Window::centered(3, BoundaryCondition::AllPlus);
    Configuration x(w, Spin{1});
    Context c = compute_context(x, {0, 0});
    CHECK(c.resolved());
    CHECK(c.members == neighbors({0, 0}));
    const Window small = Window::centered(2, BoundaryCondition::AllPlus);
    CHECK(compute_context(Configuration(small, Spin{1}), {0, 0}) == brute_force_context(Configuration(small, Spin{1}), {0, 0}));

    x.set({1, 0}, -1);
    c = compute_context(x, {0, 0});
    CHECK(c.resolved());
    CHECK(c.members == SiteSet{{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {2, 0}, {1, 1}, {1, -1}});
    CHECK(c.closure().size() == 8);
    Configuration y(small, Spin{1});
    y.set({1, 0}, -1);
    CHECK(brute_force_context(y, {0, 0}) == c);

    const Configuration all_minus(w, Spin{-1});
    CHECK_FALSE(compute_context(all_minus, {0, 0}).resolved());
    CHECK(compute_context(all_minus, {0, 0}).members.empty());

    // A -1 arm from a neighbor to the edge truncates.
    Configuration arm(w, Spin{1});
    for (int r = 1; r <= 3; ++r) arm.set({r, 0}, -1);
    CHECK_FALSE(compute_context(arm, {0, 0}).resolved());

    // The center's own spin does not matter.
    x.set({0, 0}, -1);
    CHECK(compute_context(x, {0, 0}).members.size() == 7);
}

TEST_CASE("growth algorithm equals brute-force intersection") {
    const Window w3 = Window::square(3, BoundaryCondition::AllPlus);
    for (std::uint64_t m = 0; m < 512; ++m) {
        const Configuration x = Configuration::from_mask(w3, m);
        for (Site i : w3.sites()) CHECK(compute_context(x, i) == brute_force_context(x, i));
    }

    RngStream rng(101, 0);
    const Window w4 = Window::square(4, BoundaryCondition::AllPlus);
    for (int k = 0; k < 2000; ++k) {
        const Configuration x = Configuration::from_mask(w4, rng.next_u64() & 0xFFFFULL);
        for (Site i : w4.sites()) CHECK(compute_context(x, i) == brute_force_context(x, i));
    }

    // A few 5x5 windows at the center, where contexts have room to grow.
    const Window w5 = Window::square(5, BoundaryCondition::AllPlus);
    for (int k = 0; k < 6; ++k) {
        const Configuration x = random_configuration(w5, rng, 0.25);
        CHECK(compute_context(x, {2, 2}) == brute_force_context(x, {2, 2}));
    }
    CHECK_THROWS_AS(brute_force_context(Configuration(Window::square(7, BoundaryCondition::AllPlus), Spin{1}), {3, 3}),
                    std::length_error);
}

TEST_CASE("context invariants on random windows") {
    RngStream rng(202, 0);
    const Window w = Window::square(10, BoundaryCondition::AllPlus);
    for (int k = 0; k < 300; ++k) {
        const Configuration x = random_configuration(w, rng, 0.1 + 0.5 * rng.uniform());
        for (Site i : w.sites()) {
            const Context c = compute_context(x, i);
            CHECK(c.resolved() == !truncated_by_oracle(x, i));
            if (!c.resolved()) continue;
            const SiteSet f = c.closure();
            CHECK(f.is_subset_of(w.sites()));
            CHECK(is_l1_connected(f));
            CHECK(interior(f).contains(i));
            CHECK_FALSE(c.members.contains(i));
            for (Site s : boundary(f)) CHECK(x.at(s) == 1);
            CHECK(neighbors(i).is_subset_of(c.members));
        }
    }
}

TEST_CASE("raising spins never grows a context") {
    RngStream rng(303, 0);
    const Window w = Window::square(9, BoundaryCondition::AllPlus);
    for (int k = 0; k < 300; ++k) {
        const Configuration x = random_configuration(w, rng, 0.45);
        Configuration y = x;
        for (std::size_t s = 0; s < w.site_count(); ++s)
            if (y.at_index(s) < 0 && rng.bernoulli(0.3)) y.set_index(s, 1);
        for (Site i : w.sites()) {
            const Context cx = compute_context(x, i);
            const Context cy = compute_context(y, i);
            if (cx.resolved()) {
                CHECK(cy.resolved());
                CHECK(cy.closure().is_subset_of(cx.closure()));
            }
        }
    }
}

TEST_CASE("contexts only see their own closure") {
    RngStream rng(404, 0);
    const Window w = Window::square(10, BoundaryCondition::AllPlus);
    for (int k = 0; k < 200; ++k) {
        const Configuration x = random_configuration(w, rng, 0.35);
        const Site i{1 + static_cast<int>(rng.next_u64() % 8), 1 + static_cast<int>(rng.next_u64() % 8)};
        const Context c = compute_context(x, i);
        if (!c.resolved()) continue;
        const SiteSet f = c.closure();
        Configuration y = x;
        for (std::size_t s = 0; s < w.site_count(); ++s)
            if (!f.contains(w.site(s))) y.set_index(s, rng.bernoulli(0.5) ? Spin{1} : Spin{-1});
        CHECK(compute_context(y, i) == c);
    }
}

TEST_CASE("census agrees with per-site contexts") {
    RngStream rng(505, 0);
    const Window w = Window::square(8, BoundaryCondition::AllPlus);
    for (int k = 0; k < 100; ++k) {
        const Configuration x = random_configuration(w, rng, 0.2 + 0.6 * rng.uniform());
        const ContextCensus census = context_census(x);
        REQUIRE(census.sizes.size() == w.site_count());
        std::size_t resolved = 0;
        for (std::size_t s = 0; s < w.site_count(); ++s) {
            const Context c = compute_context(x, w.site(s));
            CHECK(census.sizes[s].has_value() == c.resolved());
            if (c.resolved()) {
                CHECK(*census.sizes[s] == c.members.size());
                ++resolved;
            }
        }
        CHECK(census.resolved_count == resolved);
        CHECK(census.truncated_count == w.site_count() - resolved);
        CHECK(census.spanning == spanning_by_oracle(x));
        CHECK(has_spanning_minus_cluster(x) == census.spanning);

        std::size_t biggest = 0;
        for (const SiteSet& part : connected_components([&] {
                 std::vector<Site> minus;
                 for (Site s : w.sites())
                     if (x.at(s) < 0) minus.push_back(s);
                 return SiteSet(std::move(minus));
             }()))
            biggest = std::max(biggest, part.size());
        CHECK(census.max_minus_cluster == biggest);
    }
}

TEST_CASE("census of uniform and striped windows") {
    const Window w = Window::square(7, BoundaryCondition::AllPlus);
    const ContextCensus plus = context_census(Configuration(w, Spin{1}));
    CHECK_FALSE(plus.spanning);
    for (std::size_t s = 0; s < w.site_count(); ++s) {
        if (w.on_edge(w.site(s)))
            CHECK_FALSE(plus.sizes[s].has_value());
        else
            CHECK(plus.sizes[s] == std::optional<std::size_t>(4));
    }

    Configuration stripe(w, Spin{1});
    for (int c = 0; c < 7; ++c) stripe.set({3, c}, -1);
    CHECK(context_census(stripe).spanning);
    CHECK(context_census(stripe).max_minus_cluster == 7);

    const ClusterLabels labels = label_minus_clusters(stripe);
    const int l = labels.label[w.index({3, 0})];
    REQUIRE(l >= 0);
    CHECK(labels.size[static_cast<std::size_t>(l)] == 7);
    CHECK(labels.edges[static_cast<std::size_t>(l)] == (4U | 8U));
    CHECK(labels.label[w.index({0, 0})] == -1);
}
