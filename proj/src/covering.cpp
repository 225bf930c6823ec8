#include "atlas/covering.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace atlas {

namespace {

int wrapi(int v, int n) { return ((v % n) + n) % n; }

void block_ranges(torus_cover f, int r, int c, int n, int& r0, int& rh, int& c0, int& cw) {
    // image of cell (r,c): x in [m c, m(c+1)]/n, y in [n r, n(r+1)]/n (mod 1)
    rh = std::abs(f.n);
    cw = std::abs(f.m);
    r0 = wrapi(f.n >= 0 ? f.n * r : f.n * (r + 1), n);
    c0 = wrapi(f.m >= 0 ? f.m * c : f.m * (c + 1), n);
}

}  // namespace

std::vector<cell_id> image_block(const tiling& t, torus_cover f, cell_id c) {
    int n = t.n();
    int r0, rh, c0, cw;
    block_ranges(f, static_cast<int>(c) / n, static_cast<int>(c) % n, n, r0, rh, c0, cw);
    std::vector<cell_id> out;
    for (int j = 0; j < rh; ++j)
        for (int i = 0; i < cw; ++i) out.push_back(t.at(wrapi(r0 + j, n), wrapi(c0 + i, n)));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<cell_id> preimage_cells(const tiling& t, torus_cover f, cell_id c) {
    int n = t.n();
    int tr = static_cast<int>(c) / n, tc = static_cast<int>(c) % n;
    std::vector<cell_id> out;
    for (int r = 0; r < n; ++r) {
        for (int cc = 0; cc < n; ++cc) {
            int r0, rh, c0, cw;
            block_ranges(f, r, cc, n, r0, rh, c0, cw);
            bool rhit = false, chit = false;
            for (int j = 0; j < rh && !rhit; ++j) rhit = wrapi(r0 + j, n) == tr;
            for (int i = 0; i < cw && !chit; ++i) chit = wrapi(c0 + i, n) == tc;
            if (rhit && chit) out.push_back(t.at(r, cc));
        }
    }
    return out;
}

generator preimage_compactum(const generator& gen, torus_cover f) {
    if (f.m == 0 || f.n == 0) throw config_error("cover: m,n must be nonzero");
    if (!gen.surf->is_flat_torus())
        throw config_error("cover: preimage compacta need a torus generator");
    generator out;
    out.name = "preimage_" + std::to_string(f.m) + "_" + std::to_string(f.n) + "(" + gen.name + ")";
    out.surf = gen.surf;
    out.tk = gen.tk;
    out.max_level = gen.max_level;
    out.cauchy_c = gen.cauchy_c;
    auto inner = gen.build;
    out.build = [inner, f, surf = out.surf, tk = out.tk](int level) {
        cell_set down = inner(level);
        const tiling& t = down.grid();
        int n = t.n();
        auto up_tiling = get_tiling(surf, tk, n);
        cell_set up(up_tiling, level);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c < n; ++c) {
                int r0, rh, c0, cw;
                block_ranges(f, r, c, n, r0, rh, c0, cw);
                bool hit = false;
                for (int j = 0; j < rh && !hit; ++j)
                    for (int i = 0; i < cw && !hit; ++i)
                        hit = down.contains(t.at(wrapi(r0 + j, n), wrapi(c0 + i, n)));
                if (hit) up.insert(t.at(r, c));
            }
        }
        return up;
    };
    return out;
}

namespace {

// anisotropic Chebyshev dilation: tolerance tx cells in x, ty in y
cell_set dilate_aniso(const cell_set& s, int tx, int ty) {
    const tiling& t = s.grid();
    int n = t.n();
    cell_set out(s.grid_ptr(), s.level());
    s.for_each([&](cell_id c) {
        int r = static_cast<int>(c) / n, cc = static_cast<int>(c) % n;
        for (int dr = -ty; dr <= ty; ++dr)
            for (int dc = -tx; dc <= tx; ++dc) out.insert(t.at(wrapi(r + dr, n), wrapi(cc + dc, n)));
    });
    return out;
}

}  // namespace

pushforward_report pushforward_atoms(torus_cover f, const decomposition& up,
                                     const decomposition& down) {
    if (up.level() != down.level())
        throw config_error("pushforward_atoms: incompatible levels");
    const tiling& t = down.cells().grid();
    int tx = std::abs(f.m) + 1, ty = std::abs(f.n) + 1;
    pushforward_report rep;
    for (int k = 0; k < up.num_classes(); ++k) {
        cell_set image(down.cells().grid_ptr(), down.level());
        for (cell_id c : up.class_cells(k))
            for (cell_id d : image_block(t, f, c)) image.insert(d);
        // max-overlap downstairs class
        std::map<int, int> votes;
        image.for_each([&](cell_id d) {
            int j = down.class_of(d);
            if (j >= 0) votes[j]++;
        });
        int best = -1, bestv = -1;
        for (auto [j, v] : votes)
            if (v > bestv) {
                best = j;
                bestv = v;
            }
        if (best < 0) {
            rep.verdicts.push_back(push_verdict::violation);
            rep.matched.push_back(-1);
            continue;
        }
        cell_set atom(down.cells().grid_ptr(), down.level());
        for (cell_id c : down.class_cells(best)) atom.insert(c);
        bool img_in_atom = image.subset_of(dilate_aniso(atom, tx, ty));
        bool atom_in_img = atom.subset_of(dilate_aniso(image, tx, ty));
        rep.matched.push_back(best);
        if (img_in_atom && atom_in_img)
            rep.verdicts.push_back(push_verdict::onto_atom);
        else if (img_in_atom)
            rep.verdicts.push_back(push_verdict::into_atom);
        else
            rep.verdicts.push_back(push_verdict::violation);
    }
    return rep;
}

namespace {

std::vector<std::pair<cell_id, cell_id>> sample_pairs(const relation& rel, int max_pairs) {
    std::vector<std::pair<cell_id, cell_id>> out;
    if (rel.pairs.empty()) return out;
    size_t stride = std::max<size_t>(1, rel.pairs.size() / static_cast<size_t>(max_pairs));
    for (size_t i = 0; i < rel.pairs.size() && out.size() < static_cast<size_t>(max_pairs);
         i += stride)
        out.push_back(rel.pairs[i]);
    return out;
}

}  // namespace

cover_check rtilde_fiber_pushforward_check(torus_cover f, const generator& gen, int depth_up,
                                           int depth_down, int max_pairs,
                                           const detect_params& params) {
    generator up_gen = preimage_compactum(gen, f);
    relation rel = detect_relation(up_gen, depth_up, params);
    cover_check res;
    auto pairs = sample_pairs(rel, max_pairs);
    cell_set kd = approximate(gen, depth_down);
    const tiling& td = kd.grid();
    cell_set ku = approximate(up_gen, depth_up);
    const tiling& tu = ku.grid();
    for (auto [u, v] : pairs) {
        point pu = tu.center(u), pv = tu.center(v);
        auto fmap = [&](point p) {
            double x = f.m * p.x, y = f.n * p.y;
            x -= std::floor(x);
            y -= std::floor(y);
            return point{x, y};
        };
        cell_id x = td.locate(fmap(pu)), y = td.locate(fmap(pv));
        ++res.checked;
        if (x == y) continue;  // the pair collapses downstairs
        if (!kd.contains(x) || !kd.contains(y)) {
            // raster slop: snap to the nearest K cell within one block
            auto snap = [&](cell_id c) {
                if (kd.contains(c)) return c;
                int n = td.n();
                int r = static_cast<int>(c) / n, cc = static_cast<int>(c) % n;
                for (int rad = 1; rad <= std::max(std::abs(f.m), std::abs(f.n)); ++rad)
                    for (int dr = -rad; dr <= rad; ++dr)
                        for (int dc = -rad; dc <= rad; ++dc) {
                            cell_id m = td.at(wrapi(r + dr, n), wrapi(cc + dc, n));
                            if (kd.contains(m)) return m;
                        }
                return c;
            };
            x = snap(x);
            y = snap(y);
        }
        if (x == y) continue;
        rtilde_result rr = detect_rtilde(gen, x, y, depth_down, params);
        if (!rr.related) {
            res.pass = false;
            res.notes.push_back("unconfirmed image pair at cells " + std::to_string(x) + "," +
                                std::to_string(y));
        }
    }
    return res;
}

cover_check lift_relation_check(torus_cover f, const generator& gen, int depth_down, int depth_up,
                                int max_pairs, const detect_params& params) {
    relation down_rel = detect_relation(gen, depth_down, params);
    generator up_gen = preimage_compactum(gen, f);
    relation up_rel = detect_relation(up_gen, depth_up, params);
    cover_check res;
    auto pairs = sample_pairs(down_rel, max_pairs);
    cell_set kd = approximate(gen, depth_down);
    const tiling& td = kd.grid();
    cell_set ku = approximate(up_gen, depth_up);
    const tiling& tu = ku.grid();
    int nd = td.n(), nu = tu.n();
    int ratio = nu / nd;
    // tolerance: one downstairs cell on the image side, one cover-stretched
    // cell on the upstairs side
    double tol_down = 1.5 / nd;
    int tol_up = std::max(std::abs(f.m), std::abs(f.n)) * ratio / 2 + 2;
    auto fmap = [&](point p) {
        double x = f.m * p.x, y = f.n * p.y;
        x -= std::floor(x);
        y -= std::floor(y);
        return point{x, y};
    };
    for (auto [x, y] : pairs) {
        point px = td.center(x), py = td.center(y);
        // all upstairs cells sitting over x
        std::vector<cell_id> pre;
        ku.for_each([&](cell_id u) {
            if (torus_distance(fmap(tu.center(u)), px) <= tol_down) pre.push_back(u);
        });
        if (pre.empty()) {
            res.pass = false;
            res.notes.push_back("no upstairs cells over a sampled pair endpoint");
            continue;
        }
        ++res.checked;
        // group the preimage cells into the |mn| sheets and demand a lifted
        // pair near each sheet
        std::vector<std::uint8_t> used(pre.size(), 0);
        for (size_t i = 0; i < pre.size(); ++i) {
            if (used[i]) continue;
            // sheet = preimage cells within one block of pre[i]
            std::vector<cell_id> sheet;
            int ri = static_cast<int>(pre[i]) / nu, ci = static_cast<int>(pre[i]) % nu;
            for (size_t j = i; j < pre.size(); ++j) {
                int rj = static_cast<int>(pre[j]) / nu, cj = static_cast<int>(pre[j]) % nu;
                int dr = std::abs(ri - rj), dc = std::abs(ci - cj);
                dr = std::min(dr, nu - dr);
                dc = std::min(dc, nu - dc);
                if (dr <= tol_up && dc <= tol_up) {
                    sheet.push_back(pre[j]);
                    used[j] = 1;
                }
            }
            bool found = false;
            for (auto [a, b] : up_rel.pairs) {
                for (cell_id u : sheet) {
                    auto near_up = [&](cell_id p, cell_id q) {
                        int rp = static_cast<int>(p) / nu, cp = static_cast<int>(p) % nu;
                        int rq = static_cast<int>(q) / nu, cq = static_cast<int>(q) % nu;
                        int dr = std::abs(rp - rq), dc = std::abs(cp - cq);
                        dr = std::min(dr, nu - dr);
                        dc = std::min(dc, nu - dc);
                        return std::max(dr, dc) <= tol_up;
                    };
                    cell_id other = no_cell;
                    if (near_up(a, u))
                        other = b;
                    else if (near_up(b, u))
                        other = a;
                    if (other == no_cell) continue;
                    if (torus_distance(fmap(tu.center(other)), py) <= tol_down * 2) {
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (!found) {
                res.pass = false;
                res.notes.push_back("pair did not lift over one preimage sheet");
            }
        }
    }
    return res;
}

}  // namespace atlas
