#include <doctest.h>

#include <algorithm>
#include <set>

#include "atlas/generators.hpp"
#include "atlas/tiling.hpp"

using namespace atlas;

namespace {
std::shared_ptr<const surface_diagram> torus() {
    static auto s = std::make_shared<const surface_diagram>(surface_diagram::from_word("aba'b'"));
    return s;
}
}  // namespace

TEST_CASE("cell counts") {
    tiling sq(torus(), tiling_kind::square, 4);
    CHECK(sq.num_cells() == 16);
    tiling br(torus(), tiling_kind::brick, 4);
    CHECK(br.num_cells() == 16);
}

TEST_CASE("odd brick N on the torus is non-periodic") {
    CHECK_THROWS_WITH_AS(tiling(torus(), tiling_kind::brick, 3),
                         doctest::Contains("non-periodic"), config_error);
}

TEST_CASE("square tiling adjacency wraps around the torus") {
    tiling sq(torus(), tiling_kind::square, 8);
    std::vector<cell_id> nb;
    sq.neighbors(sq.at(0, 0), nb);
    CHECK(nb.size() == 4);
    std::set<cell_id> s(nb.begin(), nb.end());
    CHECK(s.count(sq.at(0, 7)));
    CHECK(s.count(sq.at(7, 0)));
    CHECK(s.count(sq.at(0, 1)));
    CHECK(s.count(sq.at(1, 0)));
}

TEST_CASE("interior brick cell has 6 neighbors, 2 above and 2 below") {
    tiling br(torus(), tiling_kind::brick, 8);
    std::vector<cell_id> nb;
    br.neighbors(br.at(3, 3), nb);
    std::set<cell_id> s(nb.begin(), nb.end());
    CHECK(s.size() == 6);
    int above = 0, below = 0, side = 0;
    for (cell_id c : s) {
        if (br.row(c) == 4) ++above;
        if (br.row(c) == 2) ++below;
        if (br.row(c) == 3) ++side;
    }
    CHECK(above == 2);
    CHECK(below == 2);
    CHECK(side == 2);
}

TEST_CASE("adjacency is symmetric and the graph is connected") {
    for (auto kind : {tiling_kind::square, tiling_kind::brick}) {
        tiling t(torus(), kind, 8);
        std::vector<cell_id> nb, nb2;
        for (cell_id c : t.all_cells()) {
            nb.clear();
            t.neighbors(c, nb);
            for (cell_id m : nb) {
                nb2.clear();
                t.neighbors(m, nb2);
                CHECK(std::count(nb2.begin(), nb2.end(), c) >= 1);
            }
        }
        // connectivity by flood fill
        std::set<cell_id> seen{t.at(0, 0)};
        std::vector<cell_id> stack{t.at(0, 0)};
        while (!stack.empty()) {
            cell_id c = stack.back();
            stack.pop_back();
            nb.clear();
            t.neighbors(c, nb);
            for (cell_id m : nb)
                if (seen.insert(m).second) stack.push_back(m);
        }
        CHECK(seen.size() == static_cast<size_t>(t.num_cells()));
    }
}

TEST_CASE("locate puts points into half-open footprints") {
    tiling sq(torus(), tiling_kind::square, 4);
    CHECK(sq.locate({0.0, 0.0}) == sq.at(0, 0));
    tiling sq2(torus(), tiling_kind::square, 2);
    CHECK(sq2.locate({0.49, 0.49}) == sq2.at(0, 0));
    tiling br(torus(), tiling_kind::brick, 4);
    // row 1 is offset by 1/8: x=0.5 falls into the second brick of that row
    CHECK(br.locate({0.5, 0.25}) == br.at(1, 1));
}

TEST_CASE("closed cells tile the unit square exactly") {
    for (auto kind : {tiling_kind::square, tiling_kind::brick}) {
        tiling t(torus(), kind, 8);
        // exact rational area count: every cell footprint has area 1/64
        int n = t.n();
        CHECK(t.num_cells() == n * n);
        for (cell_id c : t.all_cells()) {
            cell_rect f = t.footprint(c);
            CHECK((f.x1 - f.x0) == doctest::Approx(1.0 / n));
            CHECK((f.y1 - f.y0) == doctest::Approx(1.0 / n));
        }
        // each interior sample point locates to exactly one cell, and that
        // cell's footprint contains it
        splitmix64 rng(3);
        for (int i = 0; i < 200; ++i) {
            point p{rng.unit(), rng.unit()};
            cell_id c = t.locate(p);
            cell_rect f = t.footprint(c);
            double x = p.x - f.x0;
            if (x < -0.5) x += 1.0;  // brick footprints may wrap
            CHECK(x >= -1e-12);
            CHECK(x <= (f.x1 - f.x0) + 1e-12);
            CHECK(p.y >= f.y0 - 1e-12);
            CHECK(p.y <= f.y1 + 1e-12);
        }
    }
}

TEST_CASE("brick plus its neighbors is simply connected on the chart") {
    tiling br(torus(), tiling_kind::brick, 8);
    std::vector<cell_id> nb;
    br.neighbors(br.at(3, 3), nb);
    nb.push_back(br.at(3, 3));
    // on a local 5x5 window the union has no hole: complement of the union
    // within the window is a single edge-connected piece touching the rim
    std::set<std::pair<int, int>> occ;
    for (cell_id c : nb) occ.insert({br.row(c), br.col(c)});
    std::set<std::pair<int, int>> comp;
    std::vector<std::pair<int, int>> stack{{1, 1}};
    comp.insert({1, 1});
    while (!stack.empty()) {
        auto [r, c] = stack.back();
        stack.pop_back();
        const int dr[4] = {0, 0, 1, -1}, dc[4] = {1, -1, 0, 0};
        for (int d = 0; d < 4; ++d) {
            int rr = r + dr[d], cc = c + dc[d];
            if (rr < 1 || rr > 5 || cc < 1 || cc > 5) continue;
            if (occ.count({rr, cc})) continue;
            if (comp.insert({rr, cc}).second) stack.push_back({rr, cc});
        }
    }
    int free_cells = 25 - static_cast<int>(occ.size());
    CHECK(static_cast<int>(comp.size()) == free_cells);
}

TEST_CASE("octagon tiling restricts cells and glues sides") {
    auto g2 = std::make_shared<const surface_diagram>(surface_diagram::from_word("aba'b'cdc'd'"));
    tiling t(g2, tiling_kind::square, 16);
    CHECK(t.num_cells() < 256);
    CHECK(t.num_cells() > 150);
    // adjacency symmetric and connected across gluings
    std::vector<cell_id> nb, nb2;
    for (cell_id c : t.all_cells()) {
        nb.clear();
        t.neighbors(c, nb);
        for (cell_id m : nb) {
            CHECK(t.valid(m));
            nb2.clear();
            t.neighbors(m, nb2);
            CHECK(std::count(nb2.begin(), nb2.end(), c) >= 1);
        }
    }
    auto cells = t.all_cells();
    std::set<cell_id> seen{cells[0]};
    std::vector<cell_id> stack{cells[0]};
    while (!stack.empty()) {
        cell_id c = stack.back();
        stack.pop_back();
        nb.clear();
        t.neighbors(c, nb);
        for (cell_id m : nb)
            if (seen.insert(m).second) stack.push_back(m);
    }
    CHECK(seen.size() == cells.size());
}

TEST_CASE("bigon tiling glues the two arcs") {
    auto sp = std::make_shared<const surface_diagram>(surface_diagram::from_word("aa'"));
    tiling t(sp, tiling_kind::square, 8);
    CHECK(t.num_cells() > 30);
    std::vector<cell_id> nb;
    std::set<cell_id> seen;
    auto cells = t.all_cells();
    std::vector<cell_id> stack{cells[0]};
    seen.insert(cells[0]);
    while (!stack.empty()) {
        cell_id c = stack.back();
        stack.pop_back();
        nb.clear();
        t.neighbors(c, nb);
        for (cell_id m : nb)
            if (seen.insert(m).second) stack.push_back(m);
    }
    CHECK(seen.size() == cells.size());
}
