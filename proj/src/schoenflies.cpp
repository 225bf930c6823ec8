#include "atlas/schoenflies.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <cmath>
#include <map>
#include <set>

namespace atlas {

bool relation::contains(cell_id a, cell_id b) const {
    if (a == b) return true;  // reflexive pairs implied
    if (b < a) std::swap(a, b);
    return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(a, b));
}

void relation::add_pair(cell_id a, cell_id b) {
    if (a == b) return;
    if (b < a) std::swap(a, b);
    pairs.emplace_back(a, b);
}

void relation::finish() {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
}

std::vector<int> profile_levels(int depth, const detect_params& params, int gen_max) {
    int maxl = std::min(params.max_level, gen_max);
    if (depth > maxl) throw config_error("depth exceeds the level budget");
    // the window runs deeper from the requested depth; coarser levels cannot
    // resolve the structures the depth grid names. One extra level gives the
    // growth window room to see past rasterization stalls.
    int hi = std::min(depth + params.growth.window - 1 + params.profile_extra, maxl);
    std::vector<int> out;
    for (int l = depth; l <= hi; ++l) out.push_back(l);
    return out;
}

namespace {

// a marked region unrolled to a local grid; generalizes quads to the two
// annulus shapes (wrapping band, rectangle-minus-rectangle)
enum class side_geom { rows, cols, frame };

struct region_grid {
    const tiling* t = nullptr;
    int n = 0, ox = 0, oy = 0, w = 0, h = 0;
    bool wrap_x = false;
    std::vector<std::uint8_t> mask;   // cell belongs to the region
    std::vector<std::uint8_t> k;      // K cell inside the region
    std::vector<int> labels;
    int ncomp = 0;
    bool admissible = true;
    side_geom geom = side_geom::rows;
    int side_thick = 1;  // marked sides scale to f-thick bands at finer levels
    int iy = 0, ix = 0, ih = 0, iw = 0;  // inner rectangle (frame regions)

    int idx(int li, int lj) const { return li * w + lj; }
    cell_id global(int li, int lj) const {
        return t->at(((oy + li) % n + n) % n, ((ox + lj) % n + n) % n);
    }

    // Chebyshev proximity to a marked side (band = 0 means on the side)
    bool near_side(int li, int lj, int which, int band) const {
        int reach = side_thick + band;
        switch (geom) {
            case side_geom::rows:
                return which == 0 ? li < reach : li >= h - reach;
            case side_geom::cols:
                return which == 0 ? lj < reach : lj >= w - reach;
            case side_geom::frame: {
                if (which == 0)
                    return li < reach || li >= h - reach || lj < reach || lj >= w - reach;
                int dx = std::max({0, ix - lj, lj - (ix + iw - 1)});
                int dy = std::max({0, iy - li, li - (iy + ih - 1)});
                return std::max(dx, dy) <= reach;
            }
        }
        return false;
    }

    void fill_k(const cell_set& cells) {
        k.assign(mask.size(), 0);
        bool all_valid = true;
        for (int li = 0; li < h; ++li)
            for (int lj = 0; lj < w; ++lj) {
                if (!mask[idx(li, lj)]) continue;
                cell_id g = global(li, lj);
                if (!t->valid(g)) all_valid = false;
                if (cells.contains(g)) k[idx(li, lj)] = 1;
            }
        if (!all_valid) admissible = false;  // region leaves the tiled domain
    }

    void label_components() {
        labels.assign(mask.size(), -1);
        ncomp = 0;
        std::vector<int> stack;
        for (int s = 0; s < w * h; ++s) {
            if (!k[s] || labels[s] >= 0) continue;
            int id = ncomp++;
            labels[s] = id;
            stack.push_back(s);
            while (!stack.empty()) {
                int cur = stack.back();
                stack.pop_back();
                int li = cur / w, lj = cur % w;
                const int dr[4] = {0, 0, 1, -1};
                const int dc[4] = {1, -1, 0, 0};
                for (int d = 0; d < 4; ++d) {
                    int ni = li + dr[d], nj = lj + dc[d];
                    if (ni < 0 || ni >= h) continue;
                    if (wrap_x)
                        nj = (nj + w) % w;
                    else if (nj < 0 || nj >= w)
                        continue;
                    int ns = idx(ni, nj);
                    if (k[ns] && labels[ns] < 0) {
                        labels[ns] = id;
                        stack.push_back(ns);
                    }
                }
            }
        }
    }

    std::vector<int> crossing() const {
        std::vector<std::uint8_t> m1(ncomp, 0), m2(ncomp, 0);
        for (int li = 0; li < h; ++li)
            for (int lj = 0; lj < w; ++lj) {
                int lab = labels[idx(li, lj)];
                if (lab < 0) continue;
                if (near_side(li, lj, 0, 0)) m1[lab] = 1;
                if (near_side(li, lj, 1, 0)) m2[lab] = 1;
            }
        std::vector<int> out;
        for (int i = 0; i < ncomp; ++i)
            if (m1[i] && m2[i]) out.push_back(i);
        return out;
    }
};

region_grid make_quad_region(const tiling& t, const marked_quad& q, const cell_set& cells,
                             int thick) {
    region_grid r;
    r.t = &t;
    r.n = t.n();
    r.ox = ((q.cx0 % r.n) + r.n) % r.n;
    r.oy = ((q.ry0 % r.n) + r.n) % r.n;
    r.w = q.w;
    r.h = q.h;
    r.side_thick = thick;
    r.mask.assign(static_cast<size_t>(r.w) * r.h, 1);
    r.geom = q.vertical ? side_geom::rows : side_geom::cols;
    r.fill_k(cells);
    // condition (a): K on the boundary only within the marked side bands
    if (q.vertical) {
        for (int li = thick; li + thick < r.h; ++li)
            if (r.k[r.idx(li, 0)] || r.k[r.idx(li, r.w - 1)]) r.admissible = false;
    } else {
        for (int lj = thick; lj + thick < r.w; ++lj)
            if (r.k[r.idx(0, lj)] || r.k[r.idx(r.h - 1, lj)]) r.admissible = false;
    }
    return r;
}

region_grid make_band_region(const tiling& t, bool horizontal, int lo, int hi, int thick,
                             const cell_set& cells) {
    if (!t.surface().is_flat_torus())
        throw config_error("annulus band regions require the flat torus");
    region_grid r;
    r.t = &t;
    r.n = t.n();
    r.wrap_x = true;
    if (horizontal) {
        r.ox = 0;
        r.oy = ((lo % r.n) + r.n) % r.n;
        r.w = r.n;
        r.h = hi - lo + 1;
    } else {
        // vertical band: unroll transposed handling by shifting origin
        r.ox = ((lo % r.n) + r.n) % r.n;
        r.oy = 0;
        r.w = hi - lo + 1;
        r.h = r.n;
    }
    if (r.h >= r.n && horizontal) throw config_error("degenerate annulus: band covers the torus");
    if (r.w >= r.n && !horizontal) throw config_error("degenerate annulus: band covers the torus");
    r.side_thick = thick;
    r.mask.assign(static_cast<size_t>(r.w) * r.h, 1);
    if (horizontal) {
        r.geom = side_geom::rows;
    } else {
        // vertical band wraps in y instead; the label pass joins the seam
        r.wrap_x = false;
        r.geom = side_geom::cols;
    }
    r.fill_k(cells);
    return r;
}

region_grid make_frame_region(const tiling& t, const marked_quad& outer, const marked_quad& inner,
                              int thick, const cell_set& cells) {
    if (inner.ry0 <= outer.ry0 || inner.cx0 <= outer.cx0 ||
        inner.ry0 + inner.h >= outer.ry0 + outer.h || inner.cx0 + inner.w >= outer.cx0 + outer.w)
        throw config_error("degenerate annulus: boundary arcs touch");
    region_grid r;
    r.t = &t;
    r.n = t.n();
    r.ox = ((outer.cx0 % r.n) + r.n) % r.n;
    r.oy = ((outer.ry0 % r.n) + r.n) % r.n;
    r.w = outer.w;
    r.h = outer.h;
    r.side_thick = thick;
    r.mask.assign(static_cast<size_t>(r.w) * r.h, 1);
    int iy = inner.ry0 - outer.ry0, ix = inner.cx0 - outer.cx0;
    for (int li = iy; li < iy + inner.h; ++li)
        for (int lj = ix; lj < ix + inner.w; ++lj) r.mask[r.idx(li, lj)] = 0;
    r.geom = side_geom::frame;
    r.iy = iy;
    r.ix = ix;
    r.ih = inner.h;
    r.iw = inner.w;
    r.fill_k(cells);
    return r;
}

// labeling with masked K cells, optional row wrap (vertical bands)
void label_region(region_grid& r, bool wrap_y) {
    r.label_components();
    if (!wrap_y) return;
    // merge components across the top/bottom seam
    disjoint_sets ds(r.ncomp);
    for (int lj = 0; lj < r.w; ++lj) {
        int a = r.labels[r.idx(0, lj)], b = r.labels[r.idx(r.h - 1, lj)];
        if (a >= 0 && b >= 0) ds.unite(a, b);
    }
    std::vector<int> remap(r.ncomp, -1);
    int next = 0;
    for (int i = 0; i < r.ncomp; ++i)
        if (ds.find(i) == i) remap[i] = next++;
    for (int& l : r.labels)
        if (l >= 0) l = remap[ds.find(l)];
    r.ncomp = next;
}

struct cluster_info {
    std::vector<cell_id> depth_cells;  // global cells at the depth grid
    std::vector<cell_id> deep_cells;   // global cells at the deepest profile grid
    int deep_n = 0;
    std::vector<int> counts;           // crossing comps near the cluster per level
    std::vector<std::pair<cell_id, cell_id>> pairs;
    bool spans = false;
    bool approached = false;  // distinct crossing components close in on the cluster
};

struct region_family {
    // one region per level, all scaled from the depth grid
    std::vector<int> levels;
    std::vector<region_grid> grids;   // labeled
    std::vector<std::vector<int>> crossing;  // per level
    int depth = 0;
    bool admissible = true;
};

// persistent clusters of the family, with per-cluster growth counts
std::vector<cluster_info> persistent_clusters(const region_family& fam,
                                              const detect_params& params) {
    std::vector<cluster_info> out;
    if (!fam.admissible) return out;
    size_t nl = fam.levels.size();
    const region_grid& deep = fam.grids[nl - 1];
    int dw = deep.w, dh = deep.h;
    int fdepth = deep.n / fam.grids[0].n;  // depth grid -> deepest grid factor
    // union of crossing-component cells per level, dilated one level-cell,
    // expressed on the deepest local grid
    std::vector<std::uint8_t> persist(static_cast<size_t>(dw) * dh, 0);
    for (int s = 0; s < dw * dh; ++s) persist[s] = deep.k[s];
    for (size_t li = 0; li + 1 < nl; ++li) {
        const region_grid& g = fam.grids[li];
        int f = deep.n / g.n;
        std::vector<std::uint8_t> is_cross(g.ncomp, 0);
        for (int c : fam.crossing[li]) is_cross[c] = 1;
        std::vector<std::uint8_t> u(static_cast<size_t>(dw) * dh, 0);
        for (int r = 0; r < g.h; ++r)
            for (int c = 0; c < g.w; ++c) {
                int lab = g.labels[g.idx(r, c)];
                if (lab < 0 || !is_cross[lab]) continue;
                int r0 = std::max(0, (r - 1) * f), r1 = std::min(dh, (r + 2) * f);
                int c0 = (c - 1) * f, c1 = (c + 2) * f;
                for (int rr = r0; rr < r1; ++rr)
                    for (int cc = c0; cc < c1; ++cc) {
                        int cw = cc;
                        if (deep.wrap_x)
                            cw = ((cc % dw) + dw) % dw;
                        else if (cc < 0 || cc >= dw)
                            continue;
                        u[rr * dw + cw] = 1;
                    }
            }
        for (int s = 0; s < dw * dh; ++s) persist[s] = persist[s] && u[s];
    }
    // restrict to deepest crossing components (the convergent family itself)
    {
        std::vector<std::uint8_t> is_cross(deep.ncomp, 0);
        for (int c : fam.crossing[nl - 1]) is_cross[c] = 1;
        for (int s = 0; s < dw * dh; ++s)
            if (persist[s] && (deep.labels[s] < 0 || !is_cross[deep.labels[s]])) persist[s] = 0;
    }

    // one-cell-tolerance clustering: cells within Chebyshev distance 2 merge
    std::vector<int> cluster(static_cast<size_t>(dw) * dh, -1);
    int ncl = 0;
    std::vector<int> stack;
    auto near_persist = [&](int r, int c) {
        for (int dr = -2; dr <= 2; ++dr)
            for (int dc = -2; dc <= 2; ++dc) {
                int rr = r + dr, cc = c + dc;
                if (rr < 0 || rr >= dh) continue;
                if (deep.wrap_x)
                    cc = ((cc % dw) + dw) % dw;
                else if (cc < 0 || cc >= dw)
                    continue;
                if (persist[rr * dw + cc] && cluster[rr * dw + cc] == -1) {
                    cluster[rr * dw + cc] = -2;  // pending
                    stack.push_back(rr * dw + cc);
                }
            }
    };
    for (int s = 0; s < dw * dh; ++s) {
        if (!persist[s] || cluster[s] != -1) continue;
        int id = ncl++;
        cluster[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            cluster[cur] = id;
            near_persist(cur / dw, cur % dw);
        }
    }

    int band = fdepth * params.pinf_tol;
    if (std::getenv("ATLAS_DEBUG_CLUSTERS")) {
        int np = 0;
        for (int s = 0; s < dw * dh; ++s)
            if (persist[s]) ++np;
        std::fprintf(stderr, "[clusters] persist=%d ncl=%d fdepth=%d dw=%d dh=%d\n", np, ncl,
                     fdepth, dw, dh);
    }
    for (int id = 0; id < ncl; ++id) {
        cluster_info ci;
        ci.deep_n = deep.n;
        bool near1 = false, near2 = false;
        std::set<cell_id> depth_cells;
        std::vector<std::pair<int, int>> locs;
        std::set<cell_id> deep_cells;
        for (int s = 0; s < dw * dh; ++s) {
            if (cluster[s] != id) continue;
            int r = s / dw, c = s % dw;
            locs.emplace_back(r, c);
            if (deep.near_side(r, c, 0, band)) near1 = true;
            if (deep.near_side(r, c, 1, band)) near2 = true;
            depth_cells.insert(fam.grids[0].global(r / fdepth, c / fdepth));
            deep_cells.insert(deep.global(r, c));
            // quads keep their marked bands inside the K-free corridor, one
            // depth cell short of the limit lines; pad the cluster back out
            // along the crossing axis so touching limit sets meet at corners
            bool torus_pad = deep.t->surface().is_flat_torus();
            for (int k = 1; k < fdepth; ++k) {
                bool row_edge0 = r - k < 0, row_edge1 = r + k >= dh;
                bool col_edge0 = c - k < 0, col_edge1 = c + k >= dw;
                if (deep.geom == side_geom::rows || deep.geom == side_geom::frame) {
                    if (!row_edge0 || torus_pad) deep_cells.insert(deep.global(r - k, c));
                    if (!row_edge1 || torus_pad) deep_cells.insert(deep.global(r + k, c));
                }
                if (deep.geom == side_geom::cols || deep.geom == side_geom::frame) {
                    if (!col_edge0 || torus_pad) deep_cells.insert(deep.global(r, c - k));
                    if (!col_edge1 || torus_pad) deep_cells.insert(deep.global(r, c + k));
                }
            }
        }
        ci.deep_cells.assign(deep_cells.begin(), deep_cells.end());
        if (!near1 || !near2) continue;
        ci.spans = true;
        ci.depth_cells.assign(depth_cells.begin(), depth_cells.end());
        // Convergence surrogate for Def 2.2(c): count crossing components
        // lying entirely inside a fixed depth-grid neighborhood of the
        // cluster. A genuine limit's family keeps splitting there into the
        // deepest levels; a fixed constellation of arcs saturates.
        const region_grid& g0 = fam.grids[0];
        std::vector<std::uint8_t> zone(static_cast<size_t>(g0.w) * g0.h, 0);
        {
            int rad = params.pinf_tol + 1;  // depth cells
            for (auto [r, c] : locs) {
                int gr = r / fdepth, gc = c / fdepth;
                for (int dr = -rad; dr <= rad; ++dr)
                    for (int dc = -rad; dc <= rad; ++dc) {
                        int rr = gr + dr, cc = gc + dc;
                        if (rr < 0 || rr >= g0.h) continue;
                        if (g0.wrap_x)
                            cc = ((cc % g0.w) + g0.w) % g0.w;
                        else if (cc < 0 || cc >= g0.w)
                            continue;
                        zone[g0.idx(rr, cc)] = 1;
                    }
            }
        }
        for (size_t li = 0; li < nl; ++li) {
            const region_grid& g = fam.grids[li];
            int f = g.n / g0.n;
            std::vector<std::uint8_t> is_cross(g.ncomp, 0);
            for (int c : fam.crossing[li]) is_cross[c] = 1;
            std::vector<std::uint8_t> outside(g.ncomp, 0);
            for (int li2 = 0; li2 < g.h; ++li2)
                for (int lj2 = 0; lj2 < g.w; ++lj2) {
                    int lab = g.labels[g.idx(li2, lj2)];
                    if (lab < 0) continue;
                    if (!zone[g0.idx(li2 / f, lj2 / f)]) outside[lab] = 1;
                }
            int cnt = 0;
            for (int comp = 0; comp < g.ncomp; ++comp)
                if (is_cross[comp] && !outside[comp]) ++cnt;
            ci.counts.push_back(cnt);
        }
        {
            int len = static_cast<int>(ci.counts.size());
            int last = ci.counts.back();
            int ref = ci.counts[len >= 3 ? len - 3 : 0];
            ci.approached = last >= 2 && last > ref;
        }
        if (std::getenv("ATLAS_DEBUG_CLUSTERS")) {
            std::fprintf(stderr, "[cluster %d] cells=%zu counts:", id, ci.depth_cells.size());
            for (int c : ci.counts) std::fprintf(stderr, " %d", c);
            std::fprintf(stderr, " approached=%d\n", ci.approached ? 1 : 0);
        }
        out.push_back(std::move(ci));
    }
    return out;
}

// pairs between the cluster's cells nearest to each marked side (depth grid)
void harvest_pairs(cluster_info& ci, const region_family& fam, const detect_params& params) {
    const tiling& t0 = *fam.grids[0].t;
    const region_grid& g0 = fam.grids[0];
    int band = params.pinf_tol + 1;
    std::vector<cell_id> near1, near2;
    for (cell_id c : ci.depth_cells) {
        int r = static_cast<int>(c) / t0.n(), cc = static_cast<int>(c) % t0.n();
        int lr = ((r - g0.oy) % t0.n() + t0.n()) % t0.n();
        int lc = ((cc - g0.ox) % t0.n() + t0.n()) % t0.n();
        if (g0.near_side(lr, lc, 0, band)) near1.push_back(c);
        if (g0.near_side(lr, lc, 1, band)) near2.push_back(c);
    }
    size_t cap = 4;
    for (size_t i = 0; i < near1.size() && i < cap; ++i)
        for (size_t j = 0; j < near2.size() && j < cap; ++j)
            if (near1[i] != near2[j]) ci.pairs.emplace_back(near1[i], near2[j]);
}

region_family build_family(const generator& gen, int depth, const detect_params& params,
                           std::function<region_grid(const tiling&, int, const cell_set&)> make) {
    region_family fam;
    fam.depth = depth;
    std::vector<int> levels = profile_levels(depth, params, gen.max_level);
    for (int lv : levels) {
        cell_set k = approximate(gen, lv);
        const tiling& t = k.grid();
        int f = t.n() / grid_for_level(depth);
        region_grid g = make(t, f, k);
        if (!g.admissible) {
            fam.admissible = false;
            break;
        }
        bool wrap_y = g.wrap_x == false && g.h == t.n();  // vertical band wraps rows
        label_region(g, wrap_y && t.surface().is_flat_torus());
        fam.crossing.push_back(g.crossing());
        fam.grids.push_back(std::move(g));
        fam.levels.push_back(lv);
        // nested towers: no crossing at a coarse level means none deeper
        if (fam.crossing.back().empty()) break;
        // saturated counts cannot start growing at the extra levels
        if (static_cast<int>(fam.levels.size()) >= params.growth.window) {
            bool flat = true;
            for (auto& c : fam.crossing)
                if (c.size() != fam.crossing.front().size()) flat = false;
            if (flat) break;
        }
    }
    return fam;
}

}  // namespace

std::vector<std::vector<cell_id>> crossing_components(const marked_quad& q,
                                                      const cell_set& cells) {
    region_grid g = make_quad_region(cells.grid(), q, cells, 1);
    if (!g.admissible) throw config_error("marked quadrilateral not admissible");
    label_region(g, false);
    auto cross = g.crossing();
    std::vector<std::vector<cell_id>> out;
    for (int comp : cross) {
        std::vector<cell_id> cc;
        for (int s = 0; s < g.w * g.h; ++s)
            if (g.labels[s] == comp) cc.push_back(g.global(s / g.w, s % g.w));
        std::sort(cc.begin(), cc.end());
        out.push_back(std::move(cc));
    }
    return out;
}

profile_outcome crossing_profile(const marked_quad& q, const generator& gen, int depth,
                                 const detect_params& params) {
    region_family fam = build_family(gen, depth, params, [&](const tiling& t, int f, const cell_set& k) {
        return make_quad_region(t, q.scaled(f), k, f);
    });
    profile_outcome out;
    out.levels = fam.levels;
    if (!fam.admissible) {
        out.admissible = false;
        return out;
    }
    for (auto& cr : fam.crossing) out.counts.push_back(static_cast<int>(cr.size()));
    bool family_grows = growth_pass(out.counts, params.growth);
    auto clusters = persistent_clusters(fam, params);
    std::set<cell_id> pinf;
    for (auto& ci : clusters)
        if (family_grows && ci.approached)
            pinf.insert(ci.depth_cells.begin(), ci.depth_cells.end());
    out.pinf.assign(pinf.begin(), pinf.end());
    return out;
}

namespace {

void detect_in_family(relation& rel, region_family& fam, const detect_params& params,
                      const std::string& region_desc) {
    if (!fam.admissible) return;
    std::vector<int> fam_counts;
    for (auto& c : fam.crossing) fam_counts.push_back(static_cast<int>(c.size()));
    if (!growth_pass(fam_counts, params.growth)) return;
    auto clusters = persistent_clusters(fam, params);
    for (auto& ci : clusters) {
        if (!ci.approached) continue;
        harvest_pairs(ci, fam, params);
        if (ci.pairs.empty()) continue;
        size_t before = rel.pairs.size();
        std::set<std::pair<cell_id, cell_id>> seen(rel.pairs.begin(), rel.pairs.end());
        bool fresh = false;
        for (auto [a, b] : ci.pairs) {
            auto p = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
            if (!seen.count(p)) fresh = true;
            rel.add_pair(a, b);
        }
        (void)before;
        if (fresh) {
            witness_record w;
            w.region = region_desc;
            w.levels = fam.levels;
            for (auto& cr : fam.crossing) w.counts.push_back(static_cast<int>(cr.size()));
            w.cluster_counts = ci.counts;
            w.pinf = ci.depth_cells;
            w.pinf_deep = ci.deep_cells;
            w.deep_n = ci.deep_n;
            w.pairs = ci.pairs;
            rel.witnesses.push_back(std::move(w));
        }
    }
}

std::string quad_desc(const marked_quad& q) {
    return "quad cx0=" + std::to_string(q.cx0) + " ry0=" + std::to_string(q.ry0) +
           " w=" + std::to_string(q.w) + " h=" + std::to_string(q.h) +
           (q.vertical ? " vertical" : " horizontal");
}

}  // namespace

namespace {

// A cluster whose convergence window overlaps a far stronger accumulation is
// reporting that accumulation, not a limit of its own (comb teeth next to the
// shrinking block at the limit tooth). Drop its witnesses and pairs.
void suppress_dominated(relation& rel, int n_dec, bool torus, const detect_params& params) {
    size_t nw = rel.witnesses.size();
    if (nw == 0) return;
    auto strength = [&](const witness_record& w) {
        return w.cluster_counts.empty() ? 0 : w.cluster_counts.back();
    };
    int reach = 2 * (params.cluster_radius);  // zone overlap radius, depth cells
    std::vector<size_t> order(nw);
    for (size_t i = 0; i < nw; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](size_t a, size_t b) { return strength(rel.witnesses[a]) > strength(rel.witnesses[b]); });
    std::vector<std::uint8_t> dead(nw, 0);
    auto near = [&](const witness_record& a, const witness_record& b) {
        for (cell_id ca : a.pinf) {
            int ra = static_cast<int>(ca) / n_dec, cca = static_cast<int>(ca) % n_dec;
            for (cell_id cb : b.pinf) {
                int rb = static_cast<int>(cb) / n_dec, ccb = static_cast<int>(cb) % n_dec;
                int dr = std::abs(ra - rb), dc = std::abs(cca - ccb);
                if (torus) {
                    dr = std::min(dr, n_dec - dr);
                    dc = std::min(dc, n_dec - dc);
                }
                if (std::max(dr, dc) <= reach) return true;
            }
        }
        return false;
    };
    for (size_t oi = 0; oi < nw; ++oi) {
        size_t i = order[oi];
        if (dead[i]) continue;
        int si = strength(rel.witnesses[i]);
        if (si < 8) break;  // only clearly dominant accumulations suppress
        for (size_t j = 0; j < nw; ++j) {
            if (j == i || dead[j]) continue;
            int sj = strength(rel.witnesses[j]);
            if (2 * sj <= si && near(rel.witnesses[i], rel.witnesses[j])) dead[j] = 1;
        }
    }
    relation out;
    out.depth = rel.depth;
    for (size_t i = 0; i < nw; ++i)
        if (!dead[i]) {
            for (auto [a, b] : rel.witnesses[i].pairs) out.add_pair(a, b);
            out.witnesses.push_back(std::move(rel.witnesses[i]));
        }
    out.finish();
    rel = std::move(out);
}

}  // namespace

relation detect_relation(const generator& gen, int depth, const detect_params& params) {
    relation rel;
    rel.depth = depth;
    cell_set kd = approximate(gen, depth);
    const tiling& t = kd.grid();
    int n = t.n();
    bool torus = t.surface().is_flat_torus();
    int g = std::min(params.granularity, n / 2);
    int step = n / g;
    std::vector<int> widths;
    for (int wu : {2, 3, 4, 6, 8, 12, 16})
        if (wu <= params.max_width_units && wu * step <= n / 2) widths.push_back(wu);

    std::set<std::tuple<int, int, int, int, bool>> seen;
    auto emit = [&](int cx0, int ry0, int wq, int hq, bool vertical) {
        cx0 = ((cx0 % n) + n) % n;
        ry0 = ((ry0 % n) + n) % n;
        if (wq < 2 || hq < 3) return;
        if (!torus && (cx0 + wq > n || ry0 + hq > n)) return;
        if (!seen.insert({cx0, ry0, wq, hq, vertical}).second) return;
        marked_quad q{cx0, ry0, wq, hq, vertical};
        region_family fam = build_family(
            gen, depth, params,
            [&](const tiling& tl, int f, const cell_set& k) {
                return make_quad_region(tl, q.scaled(f), k, f);
            });
        detect_in_family(rel, fam, params, quad_desc(q));
    };

    // K occupancy per column/row of the depth grid drives the enumeration
    auto kcell = [&](int r, int c) {
        cell_id id = t.at(((r % n) + n) % n, ((c % n) + n) % n);
        return !t.valid(id) || kd.contains(id);
    };

    for (bool vertical : {true, false}) {
        for (int p0 = 0; p0 < g; ++p0) {
            for (int wu : widths) {
                int a = p0 * step;               // first boundary line
                int b = a + wu * step - 1;       // second boundary line (cells)
                if (!torus && b >= n) continue;
                // free(s): both boundary lanes K-free at cross coordinate s
                std::vector<std::uint8_t> free(n, 0);
                for (int s = 0; s < n; ++s) {
                    bool f = vertical ? (!kcell(s, a) && !kcell(s, b % n))
                                      : (!kcell(a, s) && !kcell(b % n, s));
                    free[s] = f;
                }
                // maximal runs (circular on the torus)
                std::vector<std::pair<int, int>> runs;
                bool all_free = std::all_of(free.begin(), free.end(), [](auto v) { return v; });
                if (all_free && torus) {
                    int hh = n / 2;
                    for (int anchor : {0, n / 4, n / 2, 3 * n / 4}) {
                        if (vertical)
                            emit(a, anchor, wu * step, hh, true);
                        else
                            emit(anchor, a, hh, wu * step, false);
                    }
                    continue;
                }
                int start = 0;
                if (torus) {
                    while (start < n && free[start]) ++start;
                    if (start == n) continue;
                }
                int i = start;
                for (int cnt = 0; cnt < n; ++cnt) {
                    int s = (start + cnt) % n;
                    if (!free[s]) continue;
                    int len = 0;
                    while (len < n && free[(s + len) % n]) ++len;
                    runs.emplace_back(s, len);
                    cnt += len - 1;
                }
                (void)i;
                for (auto [rs, len] : runs) {
                    if (len < params.min_run) continue;  // size floor
                    // marked lines stay strictly inside the K-free run; a quad
                    // touching a K line on its marked side would glue all the
                    // crossing components together through that line
                    int lo = rs, hi = rs + len - 1;
                    int hq = hi - lo + 1;
                    auto emit_span = [&](int from, int span) {
                        if (vertical)
                            emit(a, from, wu * step, span, true);
                        else
                            emit(from, a, span, wu * step, false);
                    };
                    if (hq <= n / 2) {
                        emit_span(lo, hq);
                    } else {
                        emit_span(lo, n / 2);
                        emit_span(hi - n / 2 + 1, n / 2);
                    }
                }
            }
        }
    }
    rel.finish();
    suppress_dominated(rel, n, torus, params);
    return rel;
}

relation detect_relation_annulus(const generator& gen, const annulus_spec& spec, int depth,
                                 const detect_params& params) {
    relation rel;
    rel.depth = depth;
    if (spec.kind == annulus_spec::band) {
        if (spec.hi < spec.lo) throw config_error("annulus band: hi < lo");
        region_family fam = build_family(
            gen, depth, params, [&](const tiling& tl, int f, const cell_set& k) {
                return make_band_region(tl, spec.horizontal, spec.lo * f,
                                        (spec.hi + 1) * f - 1, f, k);
            });
        detect_in_family(rel, fam, params,
                         std::string("band ") + (spec.horizontal ? "rows " : "cols ") +
                             std::to_string(spec.lo) + ".." + std::to_string(spec.hi));
    } else {
        region_family fam = build_family(
            gen, depth, params, [&](const tiling& tl, int f, const cell_set& k) {
                return make_frame_region(tl, spec.outer.scaled(f), spec.inner.scaled(f), f, k);
            });
        detect_in_family(rel, fam, params, "frame " + quad_desc(spec.outer) + " minus " +
                                               quad_desc(spec.inner));
    }
    rel.finish();
    return rel;
}

rtilde_result detect_rtilde(const generator& gen, cell_id x, cell_id y, int depth,
                            const detect_params& params) {
    cell_set kd = approximate(gen, depth);
    const tiling& t0 = kd.grid();
    if (!kd.contains(x) || !kd.contains(y))
        throw config_error("detect_rtilde: cells not in K at the given depth");
    point px = t0.center(x), py = t0.center(y);
    double d0 = t0.surface().is_flat_torus() ? torus_distance(px, py)
                                             : t0.surface().distance(px, py);
    rtilde_result res;
    double r0 = d0 / 4;
    if (r0 <= 0) return res;
    std::vector<int> levels = profile_levels(depth, params, gen.max_level);
    auto chstation = [](double a, double b) {
        double d = std::abs(a - b);
        return std::min(d, 1 - d);
    };
    for (size_t si = 0; si < levels.size(); ++si) {
        int lv = levels[si];
        double r = r0 / static_cast<double>(1 << si);
        cell_set k = approximate(gen, lv);
        const tiling& t = k.grid();
        if (r <= 2.0 / t.n()) r = 2.0 / t.n();  // keep the window resolvable
        // square (Chebyshev) windows around x and y
        cell_set ux(k.grid_ptr(), lv), uy(k.grid_ptr(), lv);
        k.for_each([&](cell_id c) {
            point p = t.center(c);
            if (std::max(chstation(p.x, px.x), chstation(p.y, px.y)) <= r) ux.insert(c);
            if (std::max(chstation(p.x, py.x), chstation(p.y, py.y)) <= r) uy.insert(c);
        });
        if (ux.intersects(uy)) {
            res.counts.push_back(0);
            continue;
        }
        cell_set rest = k;
        rest.subtract(ux);
        rest.subtract(uy);
        component_labeling lab = components(rest);
        // components touching both window boundaries
        std::vector<std::uint8_t> m1(lab.count, 0), m2(lab.count, 0);
        std::vector<cell_id> nb;
        for (size_t i = 0; i < lab.cells.size(); ++i) {
            nb.clear();
            t.neighbors(lab.cells[i], nb);
            for (cell_id m : nb) {
                if (ux.contains(m)) m1[lab.label[i]] = 1;
                if (uy.contains(m)) m2[lab.label[i]] = 1;
            }
        }
        int cnt = 0;
        for (int i = 0; i < lab.count; ++i)
            if (m1[i] && m2[i]) ++cnt;
        res.counts.push_back(cnt);
    }
    res.related = growth_pass(res.counts, params.growth);
    return res;
}

}  // namespace atlas
