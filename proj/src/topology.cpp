#include "atlas/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "atlas/quadgrid.hpp"

namespace atlas {

int component_labeling::label_of(cell_id c) const {
    auto it = std::lower_bound(cells.begin(), cells.end(), c);
    if (it == cells.end() || *it != c) return -1;
    return label[static_cast<size_t>(it - cells.begin())];
}

component_labeling components(const cell_set& cs) {
    component_labeling out;
    out.cells = cs.cells();
    out.label.assign(out.cells.size(), -1);
    const tiling& t = cs.grid();
    auto idx_of = [&](cell_id c) -> int {
        auto it = std::lower_bound(out.cells.begin(), out.cells.end(), c);
        return static_cast<int>(it - out.cells.begin());
    };
    std::vector<cell_id> stack, nb;
    for (size_t i = 0; i < out.cells.size(); ++i) {
        if (out.label[i] >= 0) continue;
        int id = out.count++;
        out.least_cell.push_back(out.cells[i]);
        out.comp_size.push_back(0);
        out.label[i] = id;
        stack.push_back(out.cells[i]);
        while (!stack.empty()) {
            cell_id cur = stack.back();
            stack.pop_back();
            out.comp_size[id]++;
            nb.clear();
            t.neighbors(cur, nb);
            for (cell_id m : nb) {
                if (!cs.contains(m)) continue;
                int j = idx_of(m);
                if (out.label[j] < 0) {
                    out.label[j] = id;
                    stack.push_back(m);
                }
            }
        }
    }
    return out;
}

std::vector<cell_id> component_cells(const component_labeling& lab, int comp) {
    std::vector<cell_id> out;
    for (size_t i = 0; i < lab.cells.size(); ++i)
        if (lab.label[i] == comp) out.push_back(lab.cells[i]);
    return out;
}

profile_result null_sequence_profile(const generator& gen, double eps,
                                     const std::vector<int>& levels, int bound) {
    if (levels.empty()) throw config_error("null_sequence_profile: empty level range");
    int deepest = *std::max_element(levels.begin(), levels.end());
    double diag = std::sqrt(2.0) / grid_for_level(deepest);
    if (eps <= diag)
        throw config_error("null_sequence_profile: eps below the deepest resolution");
    profile_result pr;
    for (int lv : levels) {
        cell_set k = approximate(gen, lv);
        component_labeling lab = components(k);
        const tiling& t = k.grid();
        double fat = t.cell_diag();  // cells have extent; measure outer diameter
        int cnt = 0;
        for (int comp = 0; comp < lab.count; ++comp) {
            auto cc = component_cells(lab, comp);
            if (set_diameter(t, cc) + fat > eps) ++cnt;
        }
        pr.levels.push_back(lv);
        pr.counts.push_back(cnt);
    }
    pr.pass = !growth_pass(pr.counts, growth_params{bound, 3});
    return pr;
}

namespace {

std::vector<cell_id> metric_ball(const cell_set& k, point at, double r) {
    const tiling& t = k.grid();
    const surface_diagram& s = t.surface();
    std::vector<cell_id> out;
    k.for_each([&](cell_id c) {
        double d = s.is_flat_torus() ? torus_distance(t.center(c), at)
                                     : s.distance(t.center(c), at);
        if (d <= r) out.push_back(c);
    });
    return out;
}

// connected component of `seed` within the cell list, surface adjacency
std::vector<cell_id> component_within(const tiling& t, const std::vector<cell_id>& cells,
                                      cell_id seed) {
    std::vector<cell_id> sorted = cells;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::uint8_t> seen(sorted.size(), 0);
    auto idx = [&](cell_id c) -> int {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), c);
        if (it == sorted.end() || *it != c) return -1;
        return static_cast<int>(it - sorted.begin());
    };
    std::vector<cell_id> stack{seed}, out, nb;
    int si = idx(seed);
    if (si < 0) return out;
    seen[si] = 1;
    while (!stack.empty()) {
        cell_id cur = stack.back();
        stack.pop_back();
        out.push_back(cur);
        nb.clear();
        t.neighbors(cur, nb);
        for (cell_id m : nb) {
            int j = idx(m);
            if (j >= 0 && !seen[j]) {
                seen[j] = 1;
                stack.push_back(m);
            }
        }
    }
    return out;
}

}  // namespace

double local_connectedness_defect(const generator& gen, point at, double r,
                                  const std::vector<int>& levels) {
    if (levels.empty()) throw config_error("local_connectedness_defect: empty level range");
    int deepest = *std::max_element(levels.begin(), levels.end());
    if (r <= std::sqrt(2.0) / grid_for_level(deepest))
        throw config_error("local_connectedness_defect: r below the deepest resolution");
    double worst = 0.0;
    for (int lv : levels) {
        cell_set k = approximate(gen, lv);
        const tiling& t = k.grid();
        cell_id c0 = t.locate(at);
        if (!k.contains(c0))
            throw config_error("local_connectedness_defect: cell not in K at level " +
                               std::to_string(lv));
        auto ball = metric_ball(k, at, r);
        auto reach = component_within(t, ball, c0);
        std::sort(reach.begin(), reach.end());
        auto half = metric_ball(k, at, r / 2);
        if (half.empty()) continue;
        size_t unreachable = 0;
        for (cell_id c : half)
            if (!std::binary_search(reach.begin(), reach.end(), c)) ++unreachable;
        double frac = static_cast<double>(unreachable) / static_cast<double>(half.size());
        if (lv == deepest)
            worst = frac > 0 ? frac : worst;
        else if (frac > 0 && worst == 0)
            worst = frac;  // flagged at a shallower level; deepest overrides if nonzero
    }
    return worst;
}

peano_verdict is_peano_at_scale(const generator& gen, const peano_scale_params& params) {
    peano_verdict v;
    for (double eps : params.eps_grid) {
        profile_result pr = null_sequence_profile(gen, eps, params.levels, params.null_bound);
        if (!pr.pass) {
            v.pass = false;
            v.witnesses.push_back("null-sequence growth at eps=" + std::to_string(eps));
        }
    }
    // local-connectedness probes at K cells nearest to a coarse lattice
    int deepest = *std::max_element(params.levels.begin(), params.levels.end());
    cell_set k = approximate(gen, deepest);
    if (k.empty()) return v;
    const tiling& t = k.grid();
    const surface_diagram& s = t.surface();
    int lat = 1;
    while (lat * lat < params.sample_cells) ++lat;
    std::vector<cell_id> probes;
    for (int i = 0; i < lat; ++i) {
        for (int j = 0; j < lat; ++j) {
            point p{(2.0 * j + 1) / (2.0 * lat), (2.0 * i + 1) / (2.0 * lat)};
            cell_id best = no_cell;
            double bd = 1e300;
            k.for_each([&](cell_id c) {
                double d = s.is_flat_torus() ? torus_distance(t.center(c), p)
                                             : s.distance(t.center(c), p);
                if (d < bd - 1e-12) {
                    bd = d;
                    best = c;
                }
            });
            if (best != no_cell && std::find(probes.begin(), probes.end(), best) == probes.end())
                probes.push_back(best);
        }
    }
    double worst = 0;
    std::string worst_w;
    for (cell_id c : probes) {
        for (double r : params.radii) {
            double d;
            try {
                d = local_connectedness_defect(gen, t.center(c), r, params.levels);
            } catch (const config_error&) {
                continue;  // probe drifted off K at some level
            }
            if (d > worst) {
                worst = d;
                point p = t.center(c);
                worst_w = "defect " + std::to_string(d) + " at (" + std::to_string(p.x) + "," +
                          std::to_string(p.y) + ") r=" + std::to_string(r);
            }
        }
    }
    if (worst > 0) {
        v.pass = false;
        v.witnesses.push_back(worst_w);
    }
    return v;
}

cut_wire_result cut_wire_split(const cell_set& cells, const cell_set& a1, const cell_set& a2) {
    if (!a1.subset_of(cells) || !a2.subset_of(cells))
        throw config_error("cut_wire_split: A_i must be subsets of the ambient set");
    component_labeling lab = components(cells);
    std::vector<std::uint8_t> m1(lab.count, 0), m2(lab.count, 0);
    for (size_t i = 0; i < lab.cells.size(); ++i) {
        if (a1.contains(lab.cells[i])) m1[lab.label[i]] = 1;
        if (a2.contains(lab.cells[i])) m2[lab.label[i]] = 1;
    }
    cut_wire_result res;
    for (int comp = 0; comp < lab.count; ++comp) {
        if (m1[comp] && m2[comp]) {
            res.split = false;
            res.witness = cell_set(cells.grid_ptr(), cells.level());
            for (cell_id c : component_cells(lab, comp)) res.witness.insert(c);
            return res;
        }
    }
    res.split = true;
    res.x1 = cell_set(cells.grid_ptr(), cells.level());
    res.x2 = cell_set(cells.grid_ptr(), cells.level());
    for (size_t i = 0; i < lab.cells.size(); ++i) {
        int comp = lab.label[i];
        if (m2[comp])
            res.x2.insert(lab.cells[i]);
        else
            res.x1.insert(lab.cells[i]);  // components meeting neither go left
    }
    return res;
}

std::vector<cell_id> marked_quad::side_cells(const tiling& t, int which) const {
    std::vector<cell_id> out;
    int n = t.n();
    if (vertical) {
        int li = which == 0 ? 0 : h - 1;
        for (int lj = 0; lj < w; ++lj) out.push_back(t.at((ry0 + li) % n, (cx0 + lj) % n));
    } else {
        int lj = which == 0 ? 0 : w - 1;
        for (int li = 0; li < h; ++li) out.push_back(t.at((ry0 + li) % n, (cx0 + lj) % n));
    }
    return out;
}

namespace {

// local-grid flood fill over an arbitrary mask, 4-adjacency
int flood_mask(int w, int h, const std::vector<std::uint8_t>& mask, std::vector<int>& labels) {
    labels.assign(mask.size(), -1);
    int ncomp = 0;
    std::vector<int> stack;
    for (int s = 0; s < w * h; ++s) {
        if (!mask[s] || labels[s] >= 0) continue;
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
                if (ni < 0 || ni >= h || nj < 0 || nj >= w) continue;
                int ns = ni * w + nj;
                if (mask[ns] && labels[ns] < 0) {
                    labels[ns] = id;
                    stack.push_back(ns);
                }
            }
        }
    }
    return ncomp;
}

}  // namespace

std::vector<std::vector<cell_id>> separating_arcs(const marked_quad& q, const cell_set& cells,
                                                  int m) {
    if (m < 2) throw config_error("separating_arcs: need m >= 2");
    const tiling& t = cells.grid();
    quad_grid g(t, q, cells);
    g.label_components();
    std::vector<int> crossing = g.crossing_components();
    if (static_cast<int>(crossing.size()) < m)
        throw config_error("separating_arcs: fewer than m crossing components");
    crossing.resize(m);  // first m in label order (least-cell order)

    const int w = g.w, h = g.h;
    auto comp_mask = [&](int comp) {
        std::vector<std::uint8_t> mk(static_cast<size_t>(w) * h, 0);
        for (size_t i = 0; i < mk.size(); ++i)
            if (g.labels[i] == comp) mk[i] = 1;
        return mk;
    };
    auto dilate1 = [&](const std::vector<std::uint8_t>& mk, const std::vector<std::uint8_t>& mask) {
        std::vector<std::uint8_t> out = mk;
        for (int li = 0; li < h; ++li)
            for (int lj = 0; lj < w; ++lj) {
                if (!mk[li * w + lj]) continue;
                const int dr[4] = {0, 0, 1, -1};
                const int dc[4] = {1, -1, 0, 0};
                for (int d = 0; d < 4; ++d) {
                    int ni = li + dr[d], nj = lj + dc[d];
                    if (ni < 0 || ni >= h || nj < 0 || nj >= w) continue;
                    if (mask[ni * w + nj]) out[ni * w + nj] = 1;
                }
            }
        return out;
    };

    // regions are masks of local cells; chosen components assigned per region
    struct region {
        std::vector<std::uint8_t> mask;
        std::vector<int> chosen;
    };
    std::vector<region> regions;
    {
        region r0;
        r0.mask.assign(static_cast<size_t>(w) * h, 1);
        r0.chosen = crossing;
        regions.push_back(std::move(r0));
    }
    std::vector<std::vector<cell_id>> arcs;

    auto coarse = [] { return resource_error("separating_arcs: resolution too coarse"); };

    while (true) {
        size_t ri = regions.size();
        for (size_t i = 0; i < regions.size(); ++i)
            if (regions[i].chosen.size() >= 2) {
                ri = i;
                break;
            }
        if (ri == regions.size()) break;
        region reg = std::move(regions[ri]);
        regions.erase(regions.begin() + static_cast<long>(ri));

        int pick = *std::min_element(reg.chosen.begin(), reg.chosen.end());
        std::vector<std::uint8_t> pmask = comp_mask(pick);
        for (size_t i = 0; i < pmask.size(); ++i) pmask[i] = pmask[i] && reg.mask[i];
        std::vector<std::uint8_t> thick = dilate1(pmask, reg.mask);
        // thickening must not touch the other chosen components
        for (int other : reg.chosen)
            if (other != pick)
                for (size_t i = 0; i < thick.size(); ++i)
                    if (thick[i] && g.labels[i] == other) throw coarse();

        // complement of the thickening within the region
        std::vector<std::uint8_t> rest(reg.mask.size(), 0);
        for (size_t i = 0; i < rest.size(); ++i) rest[i] = reg.mask[i] && !thick[i];
        std::vector<int> rest_lab;
        flood_mask(w, h, rest, rest_lab);
        int target = -1;  // complement piece holding the least other chosen comp
        for (int other : reg.chosen) {
            if (other == pick) continue;
            for (size_t i = 0; i < rest.size(); ++i)
                if (rest[i] && g.labels[i] == other) {
                    target = rest_lab[i];
                    break;
                }
            if (target >= 0) break;
        }
        if (target < 0) throw coarse();

        // arc material: K-free thickening cells facing the target piece
        std::vector<std::uint8_t> curtain(reg.mask.size(), 0);
        for (int li = 0; li < h; ++li)
            for (int lj = 0; lj < w; ++lj) {
                int s = li * w + lj;
                if (!thick[s] || g.k[s]) continue;
                const int dr[4] = {0, 0, 1, -1};
                const int dc[4] = {1, -1, 0, 0};
                for (int d = 0; d < 4; ++d) {
                    int ni = li + dr[d], nj = lj + dc[d];
                    if (ni < 0 || ni >= h || nj < 0 || nj >= w) continue;
                    int ns = ni * w + nj;
                    if (rest[ns] && rest_lab[ns] == target) curtain[s] = 1;
                }
            }
        // shortest 8-connected path through the curtain from I1 side to I2 side
        auto on_side = [&](int li, int lj, int which) {
            if (q.vertical) return which == 0 ? li == 0 : li == h - 1;
            return which == 0 ? lj == 0 : lj == w - 1;
        };
        std::deque<int> bfs;
        std::vector<int> prev(curtain.size(), -2);
        for (int li = 0; li < h; ++li)
            for (int lj = 0; lj < w; ++lj)
                if (curtain[li * w + lj] && on_side(li, lj, 0)) {
                    bfs.push_back(li * w + lj);
                    prev[li * w + lj] = -1;
                }
        int goal = -1;
        while (!bfs.empty() && goal < 0) {
            int cur = bfs.front();
            bfs.pop_front();
            int li = cur / w, lj = cur % w;
            if (on_side(li, lj, 1)) {
                goal = cur;
                break;
            }
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc) {
                    if (!dr && !dc) continue;
                    int ni = li + dr, nj = lj + dc;
                    if (ni < 0 || ni >= h || nj < 0 || nj >= w) continue;
                    int ns = ni * w + nj;
                    if (curtain[ns] && prev[ns] == -2) {
                        prev[ns] = cur;
                        bfs.push_back(ns);
                    }
                }
        }
        if (goal < 0) throw coarse();
        std::vector<int> arc_local;
        for (int cur = goal; cur != -1; cur = prev[cur]) arc_local.push_back(cur);

        // split the region along the arc and validate the separation
        std::vector<std::uint8_t> split_mask = reg.mask;
        for (int s : arc_local) split_mask[s] = 0;
        std::vector<int> split_lab;
        flood_mask(w, h, split_mask, split_lab);
        auto piece_of = [&](int comp) {
            for (size_t i = 0; i < split_mask.size(); ++i)
                if (split_mask[i] && g.labels[i] == comp) return split_lab[i];
            return -1;
        };
        int ppiece = piece_of(pick);
        std::map<int, std::vector<int>> by_piece;
        for (int comp : reg.chosen) {
            int pc = piece_of(comp);
            if (pc < 0) throw coarse();
            by_piece[pc].push_back(comp);
        }
        bool separated = false;
        for (auto& [pc, comps] : by_piece)
            if (pc != ppiece) separated = true;
        if (!separated) throw coarse();

        for (auto& [pc, comps] : by_piece) {
            region nr;
            nr.mask.assign(split_mask.size(), 0);
            for (size_t i = 0; i < split_mask.size(); ++i)
                if (split_mask[i] && split_lab[i] == pc) nr.mask[i] = 1;
            nr.chosen = comps;
            regions.push_back(std::move(nr));
        }
        std::vector<cell_id> arc_cells;
        for (int s : arc_local) arc_cells.push_back(g.global(s / w, s % w));
        std::sort(arc_cells.begin(), arc_cells.end());
        arcs.push_back(std::move(arc_cells));
    }
    return arcs;
}

}  // namespace atlas
