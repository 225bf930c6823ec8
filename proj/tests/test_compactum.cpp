#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <set>

#include "atlas/generators.hpp"
#include "oracles.hpp"

using namespace atlas;

TEST_CASE("full square generator fills every cell") {
    auto gen = make_gallery("full_square");
    cell_set a = approximate(gen, 3);
    CHECK(a.size() == static_cast<size_t>(32 * 32));
}

TEST_CASE("level past the configured max is a resource error") {
    auto gen = make_gallery("circle");
    CHECK_THROWS_WITH_AS(approximate(gen, 9), doctest::Contains("max 8"), resource_error);
}

TEST_CASE("ATLAS_MAX_CELLS caps the grid") {
    auto gen = make_gallery("circle");
    setenv("ATLAS_MAX_CELLS", "100", 1);
    CHECK_THROWS_AS(approximate(gen, 4), resource_error);
    unsetenv("ATLAS_MAX_CELLS");
    CHECK_NOTHROW(approximate(gen, 4));
}

TEST_CASE("cantor comb rasterization matches interval arithmetic") {
    auto gen = make_gallery("cantor_comb");
    for (int lv : {2, 3, 4}) {
        cell_set a = approximate(gen, lv);
        const tiling& t = a.grid();
        int n = t.n();
        std::int64_t den = 1;
        for (int i = 0; i < lv; ++i) den *= 3;
        std::vector<char> colk(n, 0);
        for (auto [lo, hi] : oracle::cantor(lv))
            for (int c : oracle::columns_meeting(lo, hi, den, n)) colk[c] = 1;
        colk[0] = colk[n - 1] = 1;  // 0 and 1 are Cantor points; the seam wraps
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c)
                CHECK(a.contains(t.at(r, c)) == (colk[c] || colk[r]));
    }
}

TEST_CASE("comb rasterization matches the segment oracle") {
    auto gen = make_gallery("comb");
    int lv = 4;
    cell_set a = approximate(gen, lv);
    const tiling& t = a.grid();
    int n = t.n();
    // oracle: base row, tooth columns for every n(n+1) <= grid, blob columns
    // where consecutive teeth fall inside one cell, seam columns for x=0
    std::vector<char> cols(n, 0);
    cols[0] = cols[n - 1] = 1;
    for (int k = 1;; ++k) {
        auto cc = oracle::columns_meeting(1, 1, k, n);
        for (int c : cc) cols[c] = 1;
        if (cc.size() == 1 && cc[0] == 0) break;  // teeth from here on stay in column 0
    }
    std::vector<char> rows(n, 0);
    rows[0] = rows[n - 1] = 1;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) CHECK(a.contains(t.at(r, c)) == (cols[c] || rows[r]));
}

TEST_CASE("gallery towers are nested outer approximations with the Cauchy bound") {
    for (const auto& name : gallery_names()) {
        auto gen = make_gallery(name);
        int maxlv = name == "genus2_comb" ? 5 : 6;
        cell_set prev = approximate(gen, 1);
        for (int lv = 2; lv <= maxlv; ++lv) {
            cell_set cur = approximate(gen, lv);
            INFO(name << " level " << lv);
            // nestedness: every level-k cell sits inside a level-(k-1) cell of
            // the previous set
            const tiling& tc = cur.grid();
            const tiling& tp = prev.grid();
            int f = tc.n() / tp.n();
            bool nested = true;
            cur.for_each([&](cell_id c) {
                int r = static_cast<int>(c) / tc.n() / f;
                int cc = static_cast<int>(c) % tc.n() / f;
                if (!prev.contains(tp.at(r, cc))) nested = false;
            });
            CHECK(nested);
            // Hausdorff-Cauchy: d_H(A_k, A_{k+1}) <= c * 2^-k
            if (cur.size() * prev.size() < 40'000'000ull) {
                double d = 0;
                {
                    auto pc = prev.cells();
                    auto cc = cur.cells();
                    std::vector<point> pp, cp;
                    for (cell_id x : pc) pp.push_back(tp.center(x));
                    for (cell_id x : cc) cp.push_back(tc.center(x));
                    d = oracle::hausdorff(pp, cp, [&](point a, point b) {
                        return tp.surface().is_flat_torus() ? torus_distance(a, b)
                                                            : tp.surface().distance(a, b);
                    });
                }
                CHECK(d <= gen.cauchy_c * std::pow(2.0, -(lv - 1)) + 1e-9);
            }
            prev = cur;
        }
    }
}

TEST_CASE("hausdorff distance basics") {
    auto gen = make_gallery("cantor_comb");
    cell_set a = approximate(gen, 3);
    CHECK(hausdorff_distance(a, a) == 0.0);
    // two singleton cells half a torus apart
    auto t = a.grid_ptr();
    cell_set s1(t, 3), s2(t, 3);
    s1.insert(t->locate({0.0, 0.0}));
    s2.insert(t->locate({0.0, 0.5}));
    double d = hausdorff_distance(s1, s2);
    CHECK(d == doctest::Approx(0.5).epsilon(0.1));
    auto gen2 = make_gallery("circle");
    cell_set b = approximate(gen2, 3);
    CHECK_THROWS_AS(hausdorff_distance(a, approximate(gen2, 4)), config_error);
    (void)b;
}

TEST_CASE("hausdorff triangle inequality on gallery sets") {
    auto ga = approximate(make_gallery("circle"), 3);
    auto gb = approximate(make_gallery("disk"), 3);
    auto gc = approximate(make_gallery("three_arcs"), 3);
    double ab = hausdorff_distance(ga, gb);
    double bc = hausdorff_distance(gb, gc);
    double ac = hausdorff_distance(ga, gc);
    CHECK(ac <= ab + bc + 1e-12);
    CHECK(ab <= ac + bc + 1e-12);
    CHECK(bc <= ab + ac + 1e-12);
}

TEST_CASE("bitmap round trip and malformed bitmaps") {
    auto gen = make_gallery("three_arcs");
    cell_set a = approximate(gen, 3);
    std::string path = "test_bitmap.cptm";
    write_bitmap_file(path, a);
    auto back = from_bitmap_file(path);
    cell_set b = approximate(back, 3);
    CHECK(a == b);
    // coarser and finer levels are consistent towers
    cell_set b2 = approximate(back, 2);
    cell_set b4 = approximate(back, 4);
    CHECK(b4.size() == 4 * b.size());
    CHECK(b2.size() <= b.size());
    // truncated file
    {
        FILE* f = fopen(path.c_str(), "rb");
        char buf[64];
        size_t got = fread(buf, 1, sizeof buf, f);
        fclose(f);
        f = fopen("test_trunc.cptm", "wb");
        fwrite(buf, 1, got, f);
        fclose(f);
    }
    CHECK_THROWS_WITH_AS(from_bitmap_file("test_trunc.cptm"), doctest::Contains("malformed"),
                         config_error);
    CHECK_THROWS_AS(from_bitmap_file("no_such_file.cptm"), config_error);
}

TEST_CASE("genus2 comb is a valid cell set on the octagon") {
    auto gen = make_gallery("genus2_comb");
    cell_set a = approximate(gen, 4);
    const tiling& t = a.grid();
    a.for_each([&](cell_id c) { CHECK(t.valid(c)); });
    CHECK(a.size() > 100);
}
