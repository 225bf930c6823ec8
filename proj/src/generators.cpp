#include "atlas/generators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace atlas {

int grid_for_level(int level) {
    if (level < 1 || level > 12) throw config_error("level must be in [1,12]");
    return 1 << (level + 2);
}

std::shared_ptr<const tiling> get_tiling(std::shared_ptr<const surface_diagram> surf,
                                         tiling_kind kind, int n) {
    static std::map<std::tuple<std::string, int, int>, std::shared_ptr<const tiling>> cache;
    auto key = std::make_tuple(surf->word(), static_cast<int>(kind), n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<const tiling>(surf, kind, n);
    cache[key] = t;
    return t;
}

cell_set approximate(const generator& gen, int level) {
    if (level > gen.max_level)
        throw resource_error("level " + std::to_string(level) + " exceeds the configured max " +
                             std::to_string(gen.max_level));
    long long n = grid_for_level(level);
    long long budget = 1LL << 24;
    if (const char* env = std::getenv("ATLAS_MAX_CELLS")) {
        long long v = std::atoll(env);
        if (v > 0) budget = v;
    }
    if (n * n > budget)
        throw resource_error("grid " + std::to_string(n) + "x" + std::to_string(n) +
                             " exceeds ATLAS_MAX_CELLS budget " + std::to_string(budget));
    return gen.build(level);
}

std::vector<std::pair<std::int64_t, std::int64_t>> pre_cantor_intervals(int depth) {
    std::vector<std::int64_t> starts{0};
    for (int d = 0; d < depth; ++d) {
        std::vector<std::int64_t> next;
        next.reserve(starts.size() * 2);
        for (std::int64_t a : starts) {
            next.push_back(3 * a);
            next.push_back(3 * a + 2);
        }
        starts.swap(next);
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    out.reserve(starts.size());
    for (std::int64_t a : starts) out.emplace_back(a, a + 1);
    return out;
}

int comb_teeth(int level) {
    long long n = grid_for_level(level);
    int t = 1;
    while (static_cast<long long>(t + 1) * (t + 2) <= n) ++t;
    return t;
}

namespace {

// cells of an N-grid whose closed footprint meets [a/d, b/d] in [0,1];
// wrap=true additionally touches the opposite seam cell when the interval
// hits 0 or 1 (torus identification)
struct axis_range {
    int lo, hi;       // inclusive cell range
    bool seam_low;    // also cell n-1
    bool seam_high;   // also cell 0
};

axis_range cells_meeting(std::int64_t a, std::int64_t b, std::int64_t d, int n, bool wrap) {
    if (a < 0 || b > d || a > b) throw atlas_error("cells_meeting: bad interval");
    std::int64_t an = a * n, bn = b * n;
    std::int64_t lo = an / d;
    if (an % d == 0 && lo > 0) --lo;
    std::int64_t hi = bn / d;
    if (hi > n - 1) hi = n - 1;
    axis_range r{static_cast<int>(lo), static_cast<int>(hi), false, false};
    if (wrap) {
        r.seam_low = (a == 0);
        r.seam_high = (b == d);
    }
    return r;
}

void insert_band(cell_set& cs, const tiling& t, const axis_range& xs, const axis_range& ys) {
    int n = t.n();
    auto put = [&](int r, int c) {
        cell_id id = t.at(r, c);
        if (t.valid(id)) cs.insert(id);
    };
    auto each_x = [&](auto&& f) {
        for (int c = xs.lo; c <= xs.hi; ++c) f(c);
        if (xs.seam_low) f(n - 1);
        if (xs.seam_high) f(0);
    };
    auto each_y = [&](auto&& f) {
        for (int r = ys.lo; r <= ys.hi; ++r) f(r);
        if (ys.seam_low) f(n - 1);
        if (ys.seam_high) f(0);
    };
    each_y([&](int r) { each_x([&](int c) { put(r, c); }); });
}

std::shared_ptr<const surface_diagram> torus_surface() {
    static auto s = std::make_shared<const surface_diagram>(surface_diagram::from_word("aba'b'"));
    return s;
}

std::shared_ptr<const surface_diagram> genus2_surface() {
    static auto s =
        std::make_shared<const surface_diagram>(surface_diagram::from_word("aba'b'cdc'd'"));
    return s;
}

generator torus_gen(std::string name, std::function<void(cell_set&, const tiling&, int)> fill) {
    generator g;
    g.name = std::move(name);
    g.surf = torus_surface();
    g.build = [surf = g.surf, fill = std::move(fill)](int level) {
        int n = grid_for_level(level);
        auto t = get_tiling(surf, tiling_kind::square, n);
        cell_set cs(t, level);
        fill(cs, *t, level);
        return cs;
    };
    return g;
}

void fill_circle_like(cell_set& cs, const tiling& t, bool filled) {
    int n = t.n();
    double r = 0.25;
    double cx = 0.5, cy = 0.5;
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            cell_rect f = t.footprint(t.at(row, col));
            double dx = std::max({f.x0 - cx, cx - f.x1, 0.0});
            double dy = std::max({f.y0 - cy, cy - f.y1, 0.0});
            double dmin = std::hypot(dx, dy);
            if (dmin > r) continue;
            if (filled) {
                cs.insert(t.at(row, col));
                continue;
            }
            double ex = std::max(std::abs(f.x0 - cx), std::abs(f.x1 - cx));
            double ey = std::max(std::abs(f.y0 - cy), std::abs(f.y1 - cy));
            if (std::hypot(ex, ey) >= r) cs.insert(t.at(row, col));
        }
    }
}

void fill_cantor_comb(cell_set& cs, const tiling& t, int depth) {
    auto iv = pre_cantor_intervals(depth);
    std::int64_t d = 1;
    for (int i = 0; i < depth; ++i) d *= 3;
    int n = t.n();
    axis_range all{0, n - 1, false, false};
    for (auto [a, b] : iv) {
        axis_range r = cells_meeting(a, b, d, n, true);
        insert_band(cs, t, r, all);   // vertical band: t in K
        insert_band(cs, t, all, r);   // horizontal band: s in K
    }
}

void fill_comb(cell_set& cs, const tiling& t, int) {
    // the full comb: teeth at 1/n for every n, so unresolved teeth merge
    // into the solid block of columns next to the limit tooth and the tower
    // stays a nested outer approximation of one fixed continuum
    int n = t.n();
    axis_range ally{0, n - 1, false, false};
    insert_band(cs, t, cells_meeting(0, 0, 1, n, true), ally);  // limit tooth x = 0
    for (int k = 1; k <= 2 * n; ++k)
        insert_band(cs, t, cells_meeting(1, 1, k, n, true), ally);
    // base line y = 0
    insert_band(cs, t, ally, cells_meeting(0, 0, 1, n, true));
}

void fill_genus2_comb(cell_set& cs, const tiling& t, int depth) {
    const surface_diagram& s = t.surface();
    int n = t.n();
    // boundary-crossing cells: valid cells not entirely inside the polygon
    for (int row = 0; row < n; ++row) {
        for (int col = 0; col < n; ++col) {
            cell_id id = t.at(row, col);
            if (!t.valid(id)) continue;
            cell_rect f = t.footprint(id);
            bool all_in = s.in_domain({f.x0, f.y0}) && s.in_domain({f.x1, f.y0}) &&
                          s.in_domain({f.x0, f.y1}) && s.in_domain({f.x1, f.y1});
            if (!all_in) cs.insert(id);
        }
    }
    // comb pattern scaled into the chart square [1/4,3/4]^2
    auto iv = pre_cantor_intervals(depth);
    std::int64_t d3 = 1;
    for (int i = 0; i < depth; ++i) d3 *= 3;
    std::int64_t D = 4 * d3;  // x -> 1/4 + x/2 over denominator 4*3^depth
    axis_range chart = cells_meeting(1, 3, 4, n, false);
    for (auto [a, b] : iv) {
        axis_range r = cells_meeting(d3 + 2 * a, d3 + 2 * b, D, n, false);
        insert_band(cs, t, r, chart);
        insert_band(cs, t, chart, r);
    }
    // four connectors from the chart square out to the boundary cells
    axis_range mid = cells_meeting(1, 1, 2, n, false);
    insert_band(cs, t, cells_meeting(1, 8, 32, n, false), mid);    // left
    insert_band(cs, t, cells_meeting(24, 31, 32, n, false), mid);  // right
    insert_band(cs, t, mid, cells_meeting(1, 8, 32, n, false));    // bottom
    insert_band(cs, t, mid, cells_meeting(24, 31, 32, n, false));  // top
}

}  // namespace

generator make_gallery(const std::string& name) {
    if (name == "full_square")
        return torus_gen(name, [](cell_set& cs, const tiling& t, int) {
            for (cell_id c : t.all_cells()) cs.insert(c);
        });
    if (name == "circle")
        return torus_gen(name,
                         [](cell_set& cs, const tiling& t, int) { fill_circle_like(cs, t, false); });
    if (name == "disk")
        return torus_gen(name,
                         [](cell_set& cs, const tiling& t, int) { fill_circle_like(cs, t, true); });
    if (name == "filled_square")
        return torus_gen(name, [](cell_set& cs, const tiling& t, int) {
            axis_range r = cells_meeting(1, 3, 4, t.n(), false);
            insert_band(cs, t, r, r);
        });
    if (name == "three_arcs")
        return torus_gen(name, [](cell_set& cs, const tiling& t, int) {
            axis_range xs = cells_meeting(1, 7, 8, t.n(), false);
            for (int k = 1; k <= 3; ++k)
                insert_band(cs, t, xs, cells_meeting(k, k, 4, t.n(), false));
        });
    if (name == "point")
        return torus_gen(name, [](cell_set& cs, const tiling& t, int) {
            axis_range r = cells_meeting(0, 0, 1, t.n(), true);
            insert_band(cs, t, r, r);
        });
    if (name == "cantor_comb")
        return torus_gen(name,
                         [](cell_set& cs, const tiling& t, int lv) { fill_cantor_comb(cs, t, lv); });
    if (name == "comb")
        return torus_gen(name, [](cell_set& cs, const tiling& t, int lv) { fill_comb(cs, t, lv); });
    if (name == "vertical_lines")
        return torus_gen(name, [](cell_set& cs, const tiling& t, int lv) {
            auto iv = pre_cantor_intervals(lv);
            std::int64_t d = 1;
            for (int i = 0; i < lv; ++i) d *= 3;
            axis_range all{0, t.n() - 1, false, false};
            for (auto [a, b] : iv) insert_band(cs, t, cells_meeting(a, b, d, t.n(), true), all);
        });
    if (name == "genus2_comb") {
        generator g;
        g.name = name;
        g.surf = genus2_surface();
        g.build = [surf = g.surf](int level) {
            int n = grid_for_level(level);
            auto t = get_tiling(surf, tiling_kind::square, n);
            cell_set cs(t, level);
            fill_genus2_comb(cs, *t, level);
            return cs;
        };
        return g;
    }
    throw config_error("unknown gallery compactum '" + name + "'");
}

std::vector<std::string> gallery_names() {
    return {"circle",      "disk", "filled_square", "three_arcs", "point",
            "full_square", "comb", "cantor_comb",   "vertical_lines", "genus2_comb"};
}

void write_bitmap_file(const std::string& path, const cell_set& cs) {
    const tiling& t = cs.grid();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << "CPTM1 " << t.surface().word() << ' '
        << (t.kind() == tiling_kind::square ? "square" : "brick") << ' ' << cs.level() << ' '
        << t.n() << '\n';
    int n = t.n();
    std::vector<std::uint8_t> bytes((static_cast<size_t>(n) * n + 7) / 8, 0);
    cs.for_each([&](cell_id c) { bytes[c >> 3] |= static_cast<std::uint8_t>(1u << (c & 7)); });
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

generator from_bitmap_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open bitmap '" + path + "'");
    std::string magic, word, kindstr;
    int level = 0, n = 0;
    in >> magic >> word >> kindstr >> level >> n;
    if (!in || magic != "CPTM1") throw config_error("malformed bitmap: bad header in '" + path + "'");
    in.get();  // newline
    if (kindstr != "square" && kindstr != "brick")
        throw config_error("malformed bitmap: unknown tiling kind '" + kindstr + "'");
    if (n != grid_for_level(level))
        throw config_error("malformed bitmap: N must equal 2^(level+2)");
    size_t nbytes = (static_cast<size_t>(n) * n + 7) / 8;
    std::vector<std::uint8_t> bytes(nbytes);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(nbytes));
    if (static_cast<size_t>(in.gcount()) != nbytes)
        throw config_error("malformed bitmap: truncated payload in '" + path + "'");

    auto surf = std::make_shared<const surface_diagram>(surface_diagram::from_word(word));
    tiling_kind tk = kindstr == "square" ? tiling_kind::square : tiling_kind::brick;
    auto base_tiling = get_tiling(surf, tk, n);
    auto base = std::make_shared<cell_set>(base_tiling, level);
    for (size_t i = 0; i < static_cast<size_t>(n) * n; ++i)
        if (bytes[i >> 3] >> (i & 7) & 1) {
            cell_id c = static_cast<cell_id>(i);
            if (!base_tiling->valid(c))
                throw config_error("malformed bitmap: set bit on an invalid cell");
            base->insert(c);
        }

    generator g;
    g.name = "file:" + path;
    g.surf = surf;
    g.tk = tk;
    // the compactum is the union of the stored closed cells; coarser levels
    // take ancestors, deeper levels take all descendants (exact both ways)
    g.build = [surf, tk, base, level, n](int lv) {
        int m = grid_for_level(lv);
        auto t = get_tiling(surf, tk, m);
        cell_set cs(t, lv);
        if (m >= n) {
            int f = m / n;
            base->for_each([&](cell_id c) {
                int r0 = static_cast<int>(c) / n * f, c0 = static_cast<int>(c) % n * f;
                for (int dr = 0; dr < f; ++dr)
                    for (int dc = 0; dc < f; ++dc) {
                        cell_id child = t->at(r0 + dr, c0 + dc);
                        if (t->valid(child)) cs.insert(child);
                    }
            });
        } else {
            int f = n / m;
            base->for_each([&](cell_id c) {
                cs.insert(t->at(static_cast<int>(c) / n / f, static_cast<int>(c) % n / f));
            });
        }
        return cs;
    };
    return g;
}

}  // namespace atlas
