#include <doctest.h>

#include <set>

#include "atlas/topology.hpp"
#include "oracles.hpp"

using namespace atlas;

namespace {

std::shared_ptr<const tiling> torus_tiling(int n) {
    static auto surf =
        std::make_shared<const surface_diagram>(surface_diagram::from_word("aba'b'"));
    return get_tiling(surf, tiling_kind::square, n);
}

cell_set from_bitmap(const std::vector<char>& bits, int n, int level = 3) {
    auto t = torus_tiling(n);
    cell_set cs(t, level);
    for (int i = 0; i < n * n; ++i)
        if (bits[i]) cs.insert(static_cast<cell_id>(i));
    return cs;
}

}  // namespace

TEST_CASE("components match brute-force flood fill") {
    // exhaustive over all 4x4 boards (torus wrap in both implementations)
    {
        int n = 4;
        for (unsigned mask = 0; mask < (1u << 16); ++mask) {
            std::vector<char> bits(16, 0);
            for (int i = 0; i < 16; ++i) bits[i] = (mask >> i) & 1;
            cell_set cs = from_bitmap(bits, n);
            int expect = oracle::bitmap_components(bits, n, n, true);
            if (components(cs).count != expect) {
                CAPTURE(mask);
                REQUIRE(components(cs).count == expect);
            }
        }
        CHECK(true);
    }
    // 200 random 16x16 bitmaps
    {
        int n = 16;
        splitmix64 rng(42);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<char> bits(n * n, 0);
            for (auto& b : bits) b = rng.below(100) < 45;
            cell_set cs = from_bitmap(bits, n);
            REQUIRE(components(cs).count == oracle::bitmap_components(bits, n, n, true));
        }
    }
}

TEST_CASE("component examples from the gallery") {
    CHECK(components(approximate(make_gallery("cantor_comb"), 4)).count == 1);
    CHECK(components(approximate(make_gallery("comb"), 4)).count == 1);
    CHECK(components(approximate(make_gallery("three_arcs"), 4)).count == 3);
    cell_set empty(torus_tiling(16), 2);
    CHECK(components(empty).count == 0);
    // vertical lines: component count equals the interval-census oracle
    for (int lv : {2, 3, 4}) {
        cell_set k = approximate(make_gallery("vertical_lines"), lv);
        int n = k.grid().n();
        std::int64_t den = 1;
        for (int i = 0; i < lv; ++i) den *= 3;
        std::vector<char> cols(n, 0);
        for (auto [a, b] : oracle::cantor(lv))
            for (int c : oracle::columns_meeting(a, b, den, n)) cols[c] = 1;
        cols[0] = cols[n - 1] = 1;  // seam wrap
        int expect = oracle::count_runs(cols, true);
        CHECK(components(k).count == expect);
        if (lv <= 3) CHECK(expect == (1 << lv));  // fully resolved at coarse depth
    }
}

TEST_CASE("null sequence profiles") {
    auto circle = make_gallery("circle");
    profile_result pr = null_sequence_profile(circle, 0.1, {2, 3, 4});
    CHECK(pr.pass);
    for (int c : pr.counts) CHECK(c == 1);

    auto vl = make_gallery("vertical_lines");
    profile_result pv = null_sequence_profile(vl, 0.4, {3, 4, 5, 6, 7});
    CHECK_FALSE(pv.pass);  // counts grow past the bound
    CHECK(pv.counts.back() > 32);

    auto arcs = make_gallery("three_arcs");
    profile_result pa = null_sequence_profile(arcs, 0.05, {3, 4, 5});
    CHECK(pa.pass);
    for (int c : pa.counts) CHECK(c == 3);

    CHECK_THROWS_AS(null_sequence_profile(circle, 0.001, {3, 4, 5}), config_error);
}

TEST_CASE("local connectedness defect") {
    auto disk = make_gallery("disk");
    CHECK(local_connectedness_defect(disk, {0.5, 0.5}, 0.1, {3, 4, 5}) == 0.0);

    auto comb = make_gallery("comb");
    double d = local_connectedness_defect(comb, {0.0, 0.75}, 0.1, {5, 6, 7, 8});
    CHECK(d > 0.5);

    // a cell on a gap-rectangle boundary with a window inside the gap
    auto cc = make_gallery("cantor_comb");
    double d2 = local_connectedness_defect(cc, {0.5, 1.0 / 3}, 0.05, {4, 5});
    CHECK(d2 == 0.0);

    CHECK_THROWS_AS(local_connectedness_defect(disk, {0.5, 0.98}, 0.1, {3, 4}), config_error);
}

TEST_CASE("peano at scale verdicts") {
    CHECK(is_peano_at_scale(make_gallery("circle")).pass);
    CHECK(is_peano_at_scale(make_gallery("disk")).pass);
    CHECK(is_peano_at_scale(make_gallery("three_arcs")).pass);
    peano_scale_params deep;
    deep.levels = {5, 6, 7};
    peano_verdict comb = is_peano_at_scale(make_gallery("comb"), deep);
    CHECK_FALSE(comb.pass);
    CHECK(!comb.witnesses.empty());
    CHECK_FALSE(is_peano_at_scale(make_gallery("cantor_comb"), deep).pass);
}

TEST_CASE("peano pass implies null profile pass over the gallery") {
    for (const auto& name : {"circle", "disk", "filled_square", "three_arcs"}) {
        auto gen = make_gallery(name);
        peano_scale_params pp;
        if (is_peano_at_scale(gen, pp).pass)
            for (double eps : pp.eps_grid)
                CHECK(null_sequence_profile(gen, eps, pp.levels, pp.null_bound).pass);
    }
}

TEST_CASE("cut wire splitting") {
    auto t = torus_tiling(16);
    cell_set k(t, 2), a1(t, 2), a2(t, 2);
    for (int r = 2; r < 5; ++r)
        for (int c = 2; c < 5; ++c) k.insert(t->at(r, c));
    for (int r = 9; r < 12; ++r)
        for (int c = 9; c < 12; ++c) k.insert(t->at(r, c));
    a1.insert(t->at(2, 2));
    a2.insert(t->at(9, 9));
    cut_wire_result res = cut_wire_split(k, a1, a2);
    REQUIRE(res.split);
    CHECK(res.x1.size() == 9);
    CHECK(res.x2.size() == 9);
    CHECK(res.x1.contains(t->at(2, 2)));
    CHECK(res.x2.contains(t->at(9, 9)));
    CHECK_FALSE(res.x1.intersects(res.x2));

    cell_set band(t, 2), b1(t, 2), b2(t, 2);
    for (int c = 0; c < 16; ++c)
        for (int r = 6; r < 8; ++r) band.insert(t->at(r, c));
    b1.insert(t->at(6, 0));
    b2.insert(t->at(6, 8));
    cut_wire_result res2 = cut_wire_split(band, b1, b2);
    CHECK_FALSE(res2.split);
    CHECK(res2.witness.size() == band.size());

    cell_set outside(t, 2);
    outside.insert(t->at(0, 0));
    CHECK_THROWS_AS(cut_wire_split(k, outside, a2), config_error);
}

TEST_CASE("cut wire separates the vertical-lines set") {
    cell_set k = approximate(make_gallery("vertical_lines"), 3);
    const tiling& t = k.grid();
    int n = t.n();
    cell_set a1(k.grid_ptr(), 3), a2(k.grid_ptr(), 3);
    for (int r = 0; r < n; ++r) {
        a1.insert(t.at(r, 0));
        a2.insert(t.at(r, 11));
    }
    a1.intersect(k);
    a2.intersect(k);
    REQUIRE(!a2.empty());
    cut_wire_result res = cut_wire_split(k, a1, a2);
    CHECK(res.split);
}

namespace {

void add_segment(cell_set& cs, const tiling& t, double x, int r0, int r1) {
    int n = t.n();
    int c = std::min(static_cast<int>(x * n), n - 1);
    for (int r = r0; r <= r1; ++r) cs.insert(t.at(r, c));
}

}  // namespace

TEST_CASE("separating arcs") {
    auto t = torus_tiling(32);
    marked_quad q{2, 2, 28, 28, true};
    {
        cell_set k(t, 3);
        add_segment(k, *t, 0.25, 2, 29);
        add_segment(k, *t, 0.75, 2, 29);
        auto arcs = separating_arcs(q, k, 2);
        REQUIRE(arcs.size() == 1);
        for (cell_id c : arcs[0]) CHECK_FALSE(k.contains(c));
        CHECK_THROWS_AS(separating_arcs(q, k, 3), config_error);
    }
    {
        cell_set k(t, 3);
        add_segment(k, *t, 0.2, 2, 29);
        add_segment(k, *t, 0.5, 2, 29);
        add_segment(k, *t, 0.85, 2, 29);
        auto arcs = separating_arcs(q, k, 3);
        REQUIRE(arcs.size() == 2);
        cell_set all(t, 3);
        for (int r = 2; r < 30; ++r)
            for (int c = 2; c < 30; ++c) all.insert(t->at(r, c));
        for (auto& arc : arcs)
            for (cell_id c : arc) {
                CHECK_FALSE(k.contains(c));
                all.erase(c);
            }
        component_labeling lab = components(all);
        std::set<int> seg_comps;
        for (double x : {0.2, 0.5, 0.85})
            seg_comps.insert(lab.label_of(t->at(10, static_cast<int>(x * 32))));
        CHECK(seg_comps.size() == 3);
    }
    {
        cell_set k(t, 3);
        add_segment(k, *t, 0.5, 2, 29);
        CHECK_THROWS_WITH_AS(separating_arcs(q, k, 2), doctest::Contains("fewer than m"),
                             config_error);
    }
}

TEST_CASE("brick-wall arc path variant separates as well") {
    auto surf = std::make_shared<const surface_diagram>(surface_diagram::from_word("aba'b'"));
    auto bt = get_tiling(surf, tiling_kind::brick, 32);
    cell_set k(bt, 3);
    for (int r = 2; r < 30; ++r) {
        k.insert(bt->locate({0.25, (r + 0.5) / 32}));
        k.insert(bt->locate({0.75, (r + 0.5) / 32}));
    }
    marked_quad q{2, 2, 28, 28, true};
    auto arcs = separating_arcs(q, k, 2);
    REQUIRE(arcs.size() == 1);
    for (cell_id c : arcs[0]) CHECK_FALSE(k.contains(c));
}
