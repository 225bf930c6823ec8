#include <doctest.h>

#include <set>

#include "atlas/schoenflies.hpp"
#include "oracles.hpp"

using namespace atlas;

TEST_CASE("crossing components of simple quads") {
    auto surf = std::make_shared<const surface_diagram>(surface_diagram::from_word("aba'b'"));
    auto t = get_tiling(surf, tiling_kind::square, 32);
    cell_set k(t, 3);
    for (int r = 4; r < 28; ++r) {
        k.insert(t->at(r, 8));
        k.insert(t->at(r, 24));
    }
    marked_quad q{4, 4, 24, 24, true};
    auto comps = crossing_components(q, k);
    CHECK(comps.size() == 2);
    // a quad whose unmarked side hits K is rejected
    marked_quad bad{8, 4, 24, 24, true};
    CHECK_THROWS_WITH_AS(crossing_components(bad, k), doctest::Contains("not admissible"),
                         config_error);
}

TEST_CASE("crossing components across a Cantor gap resolve the interval census") {
    auto gen = make_gallery("cantor_comb");
    cell_set k = approximate(gen, 7);
    int n = k.grid().n();  // 512
    // window around x = 1/4 between free columns, spanning the big y-gap
    int cx0 = static_cast<int>(0.210 * n), cx1 = static_cast<int>(0.273 * n);
    int ry0 = static_cast<int>(1.0 / 3 * n) + 2, ry1 = static_cast<int>(2.0 / 3 * n) - 2;
    marked_quad q{cx0, ry0, cx1 - cx0 + 1, ry1 - ry0 + 1, true};
    auto comps = crossing_components(q, k);
    CHECK(comps.size() >= 4);
}

TEST_CASE("crossing profile grows for the comb and stays flat for the circle") {
    auto comb = make_gallery("comb");
    int n5 = 128;
    // wrap window around the limit tooth, rows strictly inside (0,1)
    marked_quad q{n5 - 16, 1, 32, 63, true};
    profile_outcome po = crossing_profile(q, comb, 5, detect_params{});
    REQUIRE(po.admissible);
    CHECK(po.counts.front() >= 1);
    CHECK(po.counts.back() > po.counts.front());
    CHECK(!po.pinf.empty());

    auto circle = make_gallery("circle");
    marked_quad qc{48, 8, 32, 48, true};
    profile_outcome pc = crossing_profile(qc, circle, 5, detect_params{});
    if (pc.admissible) {
        CHECK(pc.counts.back() <= 2);
        CHECK(pc.pinf.empty());
    }
}

TEST_CASE("relations are empty for Peano gallery members") {
    for (const auto& name : {"circle", "disk", "filled_square", "three_arcs"}) {
        auto gen = make_gallery(name);
        for (int depth : {4, 5}) {
            relation rel = detect_relation(gen, depth);
            INFO(name << " depth " << depth);
            CHECK(rel.pairs.empty());
        }
    }
}

TEST_CASE("relation symmetry and stability on the comb") {
    auto gen = make_gallery("comb");
    relation r5 = detect_relation(gen, 5);
    REQUIRE(!r5.pairs.empty());
    for (auto [a, b] : r5.pairs) {
        CHECK(r5.contains(a, b));
        CHECK(r5.contains(b, a));
        CHECK(r5.contains(a, a));  // reflexive pairs implied
    }
    // witness stability: depth-5 pairs appear again at depth 6 within one
    // depth-5 cell
    relation r6 = detect_relation(gen, 6);
    REQUIRE(!r6.pairs.empty());
    int n5 = 128;

    auto near5 = [&](cell_id a5, cell_id b6) {
        int ra = static_cast<int>(a5) / n5, ca = static_cast<int>(a5) % n5;
        int rb = static_cast<int>(b6) / 256 / 2, cb = static_cast<int>(b6) % 256 / 2;
        int dr = std::abs(ra - rb), dc = std::abs(ca - cb);
        dr = std::min(dr, n5 - dr);
        dc = std::min(dc, n5 - dc);
        return std::max(dr, dc) <= 1;
    };
    size_t found = 0, checked = 0;
    for (size_t i = 0; i < r5.pairs.size(); i += std::max<size_t>(1, r5.pairs.size() / 24)) {
        auto [a, b] = r5.pairs[i];
        ++checked;
        bool ok = false;
        for (auto [u, v] : r6.pairs)
            if ((near5(a, u) && near5(b, v)) || (near5(a, v) && near5(b, u))) {
                ok = true;
                break;
            }
        if (ok) ++found;
    }
    CHECK(found == checked);
}

TEST_CASE("cantor pairs relate cells across gaps") {
    auto gen = make_gallery("cantor_comb");
    relation rel = detect_relation(gen, 5);
    REQUIRE(!rel.pairs.empty());
    int n = 128;
    // some pair must span the big vertical gap (1/3, 2/3) at matched columns
    bool gap_pair = false;
    for (auto [a, b] : rel.pairs) {
        int ra = static_cast<int>(a) / n, ca = static_cast<int>(a) % n;
        int rb = static_cast<int>(b) / n, cb = static_cast<int>(b) % n;
        if (std::abs(ca - cb) <= 2 && std::abs(ra - rb) > n / 4) gap_pair = true;
    }
    CHECK(gap_pair);
}

TEST_CASE("annulus detection agrees with quad detection on shared structure") {
    auto gen = make_gallery("cantor_comb");
    int n = 128;
    annulus_spec band;
    band.kind = annulus_spec::band;
    band.horizontal = true;
    band.lo = static_cast<int>(n / 3.0) + 2;
    band.hi = static_cast<int>(2.0 * n / 3.0) - 2;
    relation ra = detect_relation_annulus(gen, band, 5);
    REQUIRE(!ra.pairs.empty());
    relation rq = detect_relation(gen, 5);
    // every annulus pair joins cells that the quad-based decomposition also
    // keeps together (checked in the decomposition tests); here: symmetry and
    // gap-spanning shape
    for (auto [a, b] : ra.pairs) {
        int ca = static_cast<int>(a) % n, cb = static_cast<int>(b) % n;
        CHECK(std::abs(ca - cb) <= 3);
    }
    CHECK(!rq.pairs.empty());
}

TEST_CASE("frame annulus around a comb tooth cluster") {
    auto gen = make_gallery("comb");
    annulus_spec frame;
    frame.kind = annulus_spec::frame;
    frame.outer = marked_quad{96, 8, 64, 112, true};   // wraps around x=0
    frame.inner = marked_quad{112, 40, 32, 48, true};
    relation rel = detect_relation_annulus(gen, frame, 5);
    CHECK(!rel.pairs.empty());
    annulus_spec degenerate = frame;
    degenerate.inner = marked_quad{96, 8, 64, 112, true};
    CHECK_THROWS_WITH_AS(detect_relation_annulus(gen, degenerate, 5),
                         doctest::Contains("degenerate"), config_error);
}

TEST_CASE("rtilde detection") {
    auto circle = make_gallery("circle");
    cell_set kc = approximate(circle, 5);
    auto cells = kc.cells();
    rtilde_result rc = detect_rtilde(circle, cells.front(), cells[cells.size() / 2], 5);
    CHECK_FALSE(rc.related);
    for (int c : rc.counts) CHECK(c <= 2);

    auto comb = make_gallery("comb");
    cell_set kk = approximate(comb, 5);
    const tiling& t = kk.grid();
    cell_id x = t.locate({0.0, 0.25}), y = t.locate({0.0, 0.75});
    REQUIRE(kk.contains(x));
    REQUIRE(kk.contains(y));
    rtilde_result rr = detect_rtilde(comb, x, y, 5);
    CHECK(rr.related);

    CHECK_THROWS_AS(detect_rtilde(comb, t.locate({0.4, 0.4}), y, 5), config_error);
}

TEST_CASE("rtilde contains the detected relation on gallery examples") {
    for (const auto& name : {"comb", "cantor_comb"}) {
        auto gen = make_gallery(name);
        relation rel = detect_relation(gen, 5);
        REQUIRE(!rel.pairs.empty());
        size_t stride = std::max<size_t>(1, rel.pairs.size() / 12);
        for (size_t i = 0; i < rel.pairs.size(); i += stride) {
            auto [a, b] = rel.pairs[i];
            rtilde_result rr = detect_rtilde(gen, a, b, 5);
            INFO(name << " pair " << a << "," << b);
            CHECK(rr.related);
        }
    }
}
