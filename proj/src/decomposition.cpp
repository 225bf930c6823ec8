#include "atlas/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace atlas {

namespace {

int find_sorted(const std::vector<cell_id>& sorted, cell_id c) {
    auto it = std::lower_bound(sorted.begin(), sorted.end(), c);
    if (it == sorted.end() || *it != c) return -1;
    return static_cast<int>(it - sorted.begin());
}

}  // namespace

int decomposition::class_of(cell_id c) const {
    int i = find_sorted(sorted_, c);
    return i < 0 ? -1 : class_idx_[i];
}

std::vector<int> decomposition::nondegenerate() const {
    std::vector<int> out;
    for (int k = 0; k < num_classes_; ++k)
        if (class_cells_[k].size() > 1) out.push_back(k);
    return out;
}

void decomposition::index_classes(std::vector<int>&& raw, provenance prov) {
    prov_ = prov;
    // contiguous class ids ordered by least cell; -1 marks singletons
    std::map<int, int> remap;
    int next = 0;
    std::vector<int> idx(raw.size(), -1);
    for (size_t i = 0; i < sorted_.size(); ++i) {
        int r = raw[i];
        if (r < 0) {
            idx[i] = next++;
        } else {
            auto it = remap.find(r);
            if (it == remap.end()) {
                remap.emplace(r, next);
                idx[i] = next++;
            } else {
                idx[i] = it->second;
            }
        }
    }
    class_idx_ = std::move(idx);
    num_classes_ = next;
    class_cells_.assign(num_classes_, {});
    for (size_t i = 0; i < sorted_.size(); ++i)
        class_cells_[class_idx_[i]].push_back(sorted_[i]);
}

decomposition decomposition::singletons(const cell_set& cells) {
    decomposition d;
    d.cells_ = cells;
    d.sorted_ = cells.cells();
    std::vector<int> raw(d.sorted_.size(), -1);
    d.index_classes(std::move(raw), provenance::trivial);
    return d;
}

decomposition decomposition::from_classes(const cell_set& cells,
                                          const std::vector<std::vector<cell_id>>& classes,
                                          provenance prov, bool repair_connectivity) {
    decomposition d;
    d.cells_ = cells;
    d.sorted_ = cells.cells();
    std::vector<int> raw(d.sorted_.size(), -1);
    disjoint_sets ds(static_cast<int>(classes.size()) + 1);
    std::vector<int> seed(d.sorted_.size(), -1);
    for (size_t k = 0; k < classes.size(); ++k) {
        for (cell_id c : classes[k]) {
            int i = find_sorted(d.sorted_, c);
            if (i < 0) throw config_error("decomposition: class cell outside the ambient set");
            if (seed[i] >= 0)
                ds.unite(seed[i], static_cast<int>(k));  // overlapping classes merge
            else
                seed[i] = static_cast<int>(k);
        }
    }
    const tiling& t = cells.grid();
    if (repair_connectivity && !classes.empty()) {
        bool changed = true;
        int guard = 0;
        while (changed && guard++ < 256) {
            changed = false;
            std::map<int, std::vector<cell_id>> members;
            for (size_t i = 0; i < d.sorted_.size(); ++i)
                if (seed[i] >= 0) members[ds.find(seed[i])].push_back(d.sorted_[i]);
            for (auto& [root, mem] : members) {
                if (mem.size() <= 1) continue;
                std::set<cell_id> memset(mem.begin(), mem.end());
                std::set<cell_id> reached{mem[0]};
                std::vector<cell_id> stack{mem[0]}, nb;
                while (!stack.empty()) {
                    cell_id cur = stack.back();
                    stack.pop_back();
                    nb.clear();
                    t.neighbors(cur, nb);
                    for (cell_id m : nb)
                        if (memset.count(m) && reached.insert(m).second) stack.push_back(m);
                }
                if (reached.size() == memset.size()) continue;
                // bridge through K along a shortest path, then merge whatever
                // the path runs through
                std::map<cell_id, cell_id> prev;
                std::deque<cell_id> bfs(reached.begin(), reached.end());
                for (cell_id c : reached) prev[c] = c;
                cell_id hit = no_cell;
                while (!bfs.empty() && hit == no_cell) {
                    cell_id cur = bfs.front();
                    bfs.pop_front();
                    nb.clear();
                    t.neighbors(cur, nb);
                    for (cell_id m : nb) {
                        if (!cells.contains(m) || prev.count(m)) continue;
                        prev[m] = cur;
                        if (memset.count(m)) {
                            hit = m;
                            break;
                        }
                        bfs.push_back(m);
                    }
                }
                if (hit == no_cell)
                    throw atlas_error("decomposition: class fragments not connectable inside K");
                int added = 0;
                for (cell_id c = hit; prev[c] != c; c = prev[c]) {
                    int i = find_sorted(d.sorted_, c);
                    if (seed[i] < 0) {
                        seed[i] = root;
                        ++added;
                    } else if (ds.find(seed[i]) != ds.find(root)) {
                        ds.unite(seed[i], root);
                    }
                }
                d.repair_log_.push_back("bridged class fragments with " + std::to_string(added) +
                                        " path cells");
                changed = true;
                break;
            }
        }
        if (guard >= 256) throw atlas_error("decomposition: connectivity repair did not settle");
    }
    for (size_t i = 0; i < d.sorted_.size(); ++i)
        if (seed[i] >= 0) raw[i] = ds.find(seed[i]);
    d.index_classes(std::move(raw), prov);
    return d;
}

decomposition close_equivalence(const relation& rel, const cell_set& cells,
                                const close_params& params) {
    for (auto [a, b] : rel.pairs)
        if (!cells.contains(a) || !cells.contains(b))
            throw config_error("close_equivalence: pair references a cell outside the set");
    const tiling& tg = cells.grid();
    int n_dec = tg.n();
    // "within one cell" is judged at the deepest profile grid: two limit sets
    // indistinguishable there merge; structures a resolved sliver apart stay
    // distinct even when the analysis-level cells touch
    int n_deep = n_dec;
    for (const witness_record& w : rel.witnesses) n_deep = std::max(n_deep, w.deep_n);
    struct proto {
        std::vector<std::pair<int, int>> deep;  // (row, col) at the n_deep grid
        std::set<cell_id> dec_cells;
        std::set<cell_id> core;  // dec cells carrying the bulk of the deep mass
    };
    std::vector<proto> protos;
    for (const witness_record& w : rel.witnesses) {
        proto p;
        for (cell_id c : w.pinf)
            if (cells.contains(c)) p.dec_cells.insert(c);
        if (p.dec_cells.empty()) continue;
        if (!w.pinf_deep.empty() && w.deep_n > 0) {
            int f = n_deep / w.deep_n;
            for (cell_id c : w.pinf_deep) {
                int r = static_cast<int>(c) / w.deep_n, cc = static_cast<int>(c) % w.deep_n;
                for (int dr = 0; dr < f; ++dr)
                    for (int dc = 0; dc < f; ++dc) p.deep.emplace_back(r * f + dr, cc * f + dc);
            }
        } else {
            int f = n_deep / n_dec;
            for (cell_id c : p.dec_cells) {
                int r = static_cast<int>(c) / n_dec, cc = static_cast<int>(c) % n_dec;
                for (int dr = 0; dr < f; ++dr)
                    for (int dc = 0; dc < f; ++dc) p.deep.emplace_back(r * f + dr, cc * f + dc);
            }
        }
        std::sort(p.deep.begin(), p.deep.end());
        p.deep.erase(std::unique(p.deep.begin(), p.deep.end()), p.deep.end());
        // core = analysis cells holding at least half the proto's peak
        // per-cell deep coverage; resolved slivers at a cell's edge stay out
        {
            int fd = n_deep / n_dec;
            std::map<cell_id, int> cover;
            for (auto [r, c] : p.deep) {
                cell_id d = tg.at(r / fd, c / fd);
                if (p.dec_cells.count(d)) cover[d]++;
            }
            int peak = 0;
            for (auto& [d, v] : cover) peak = std::max(peak, v);
            for (auto& [d, v] : cover)
                if (2 * v >= peak) p.core.insert(d);
        }
        protos.push_back(std::move(p));
    }
    bool torus = tg.surface().is_flat_torus();
    disjoint_sets ds(static_cast<int>(protos.size()) + 1);
    {
        // shared stamp grid at the deepest resolution: overlaps unite
        // directly, tolerance-neighborhoods unite in a second pass
        std::vector<int> stamp(static_cast<size_t>(n_deep) * n_deep, -1);
        for (size_t i = 0; i < protos.size(); ++i)
            for (auto [r, c] : protos[i].deep) {
                int& s = stamp[static_cast<size_t>(r) * n_deep + c];
                if (s >= 0)
                    ds.unite(s, static_cast<int>(i));
                else
                    s = static_cast<int>(i);
            }
        int tol = params.merge_tol + 1;  // deepest-grid cells
        for (size_t i = 0; i < protos.size(); ++i)
            for (auto [r, c] : protos[i].deep)
                for (int dr = -tol; dr <= tol; ++dr)
                    for (int dc = -tol; dc <= tol; ++dc) {
                        int rr = r + dr, cc = c + dc;
                        if (torus) {
                            rr = (rr + n_deep) % n_deep;
                            cc = (cc + n_deep) % n_deep;
                        } else if (rr < 0 || rr >= n_deep || cc < 0 || cc >= n_deep) {
                            continue;
                        }
                        int s = stamp[static_cast<size_t>(rr) * n_deep + cc];
                        if (s >= 0) ds.unite(s, static_cast<int>(i));
                    }
    }
    std::map<int, std::vector<cell_id>> merged;
    for (size_t i = 0; i < protos.size(); ++i) {
        auto& dst = merged[ds.find(static_cast<int>(i))];
        dst.insert(dst.end(), protos[i].dec_cells.begin(), protos[i].dec_cells.end());
    }
    std::vector<std::vector<cell_id>> classes;
    for (auto& [root, mem] : merged) {
        std::sort(mem.begin(), mem.end());
        mem.erase(std::unique(mem.begin(), mem.end()), mem.end());
        classes.push_back(std::move(mem));
    }
    return decomposition::from_classes(cells, classes, provenance::atoms, true);
}

quotient_graph quotient(const decomposition& dec) {
    quotient_graph qg;
    qg.nodes = dec.num_classes();
    const tiling& t = dec.cells().grid();
    std::set<std::pair<int, int>> edges;
    std::vector<cell_id> nb;
    for (int k = 0; k < qg.nodes; ++k) {
        for (cell_id c : dec.class_cells(k)) {
            nb.clear();
            t.neighbors(c, nb);
            for (cell_id m : nb) {
                int j = dec.class_of(m);
                if (j >= 0 && j != k) edges.insert({std::min(k, j), std::max(k, j)});
            }
        }
    }
    qg.edges.assign(edges.begin(), edges.end());
    qg.centroid.resize(qg.nodes);
    qg.diameter.resize(qg.nodes);
    qg.size.resize(qg.nodes);
    bool torus = t.surface().is_flat_torus();
    for (int k = 0; k < qg.nodes; ++k) {
        const auto& cc = dec.class_cells(k);
        qg.size[k] = cc.size();
        qg.diameter[k] = cc.size() > 1 ? set_diameter(t, cc) : 0.0;
        if (torus) {
            double sx = 0, cx = 0, sy = 0, cy = 0;
            for (cell_id c : cc) {
                point p = t.center(c);
                sx += std::sin(2 * M_PI * p.x);
                cx += std::cos(2 * M_PI * p.x);
                sy += std::sin(2 * M_PI * p.y);
                cy += std::cos(2 * M_PI * p.y);
            }
            double ax = std::atan2(sx, cx) / (2 * M_PI), ay = std::atan2(sy, cy) / (2 * M_PI);
            qg.centroid[k] = {ax - std::floor(ax), ay - std::floor(ay)};
        } else {
            double mx = 0, my = 0;
            for (cell_id c : cc) {
                point p = t.center(c);
                mx += p.x;
                my += p.y;
            }
            qg.centroid[k] = {mx / cc.size(), my / cc.size()};
        }
    }
    disjoint_sets ds(qg.nodes);
    for (auto [a, b] : qg.edges) ds.unite(a, b);
    std::map<int, int> remap;
    qg.component.resize(qg.nodes);
    for (int k = 0; k < qg.nodes; ++k) {
        int r = ds.find(k);
        auto it = remap.find(r);
        if (it == remap.end()) {
            remap.emplace(r, qg.num_components);
            qg.component[k] = qg.num_components++;
        } else {
            qg.component[k] = it->second;
        }
    }
    return qg;
}

bool is_usc_at_scale(const std::vector<decomposition>& family) {
    if (family.size() < 3) throw config_error("is_usc_at_scale: need at least 3 levels");
    for (size_t i = 1; i < family.size(); ++i)
        if (family[i].level() != family[i - 1].level() + 1)
            throw config_error("is_usc_at_scale: levels must be consecutive");
    for (size_t i = 1; i < family.size(); ++i) {
        const decomposition& coarse = family[i - 1];
        const decomposition& fine = family[i];
        const tiling& tc = coarse.cells().grid();
        const tiling& tf = fine.cells().grid();
        int f = tf.n() / tc.n();
        for (int k : fine.nondegenerate()) {
            std::set<cell_id> up;
            for (cell_id c : fine.class_cells(k))
                up.insert(
                    tc.at(static_cast<int>(c) / tf.n() / f, static_cast<int>(c) % tf.n() / f));
            std::map<int, int> votes;
            for (cell_id c : up) {
                int j = coarse.class_of(c);
                if (j >= 0) votes[j]++;
            }
            if (votes.empty()) return false;
            int best = -1, bestv = -1;
            for (auto [j, v] : votes)
                if (v > bestv || (v == bestv && best >= 0 &&
                                  coarse.class_cells(j)[0] < coarse.class_cells(best)[0])) {
                    best = j;
                    bestv = v;
                }
            cell_set match(coarse.cells().grid_ptr(), coarse.level());
            for (cell_id c : coarse.class_cells(best)) match.insert(c);
            cell_set fat = match.dilated(1);
            for (cell_id c : up)
                if (!fat.contains(c)) return false;
            cell_set upset(coarse.cells().grid_ptr(), coarse.level());
            for (cell_id c : up) upset.insert(c);
            if (hausdorff_distance(upset, match) > tc.cell_diag() + 1e-9) return false;
        }
    }
    return true;
}

bool refines(const decomposition& d1, const decomposition& d2) {
    if (!d1.same_cells(d2)) throw config_error("refines: decompositions on different cell sets");
    for (int k = 0; k < d1.num_classes(); ++k) {
        const auto& cc = d1.class_cells(k);
        int target = d2.class_of(cc[0]);
        for (cell_id c : cc)
            if (d2.class_of(c) != target) return false;
    }
    return true;
}

namespace {

// Chebyshev cell distance from the source cells over the whole grid
std::vector<int> chebyshev_field(const tiling& t, const std::vector<cell_id>& sources) {
    int n = t.n();
    std::vector<int> dist(static_cast<size_t>(n) * n, -1);
    std::deque<cell_id> q;
    for (cell_id c : sources) {
        dist[c] = 0;
        q.push_back(c);
    }
    bool torus = t.surface().is_flat_torus();
    while (!q.empty()) {
        cell_id cur = q.front();
        q.pop_front();
        int r = static_cast<int>(cur) / n, c = static_cast<int>(cur) % n;
        for (int dr = -1; dr <= 1; ++dr)
            for (int dc = -1; dc <= 1; ++dc) {
                if (!dr && !dc) continue;
                int rr = r + dr, cc = c + dc;
                if (torus) {
                    rr = (rr + n) % n;
                    cc = (cc + n) % n;
                } else if (rr < 0 || rr >= n || cc < 0 || cc >= n) {
                    continue;
                }
                cell_id m = t.at(rr, cc);
                if (dist[m] < 0) {
                    dist[m] = dist[cur] + 1;
                    q.push_back(m);
                }
            }
    }
    return dist;
}

struct local_view {
    int count = 0;
    double nearest_other = 1e300;
};

// components of K inside the metric ball around `at`, plus the distance of
// the nearest component other than the central one
local_view local_components(const cell_set& k, point at, double radius) {
    const tiling& t = k.grid();
    const surface_diagram& s = t.surface();
    bool torus = s.is_flat_torus();
    std::vector<cell_id> ball;
    k.for_each([&](cell_id c) {
        double d = torus ? torus_distance(t.center(c), at) : s.distance(t.center(c), at);
        if (d <= radius) ball.push_back(c);
    });
    local_view lv;
    if (ball.empty()) return lv;
    std::vector<int> lab(ball.size(), -1);
    std::vector<cell_id> stack, nb;
    int ncomp = 0;
    for (size_t i = 0; i < ball.size(); ++i) {
        if (lab[i] >= 0) continue;
        int id = ncomp++;
        lab[i] = id;
        stack.push_back(ball[i]);
        while (!stack.empty()) {
            cell_id cur = stack.back();
            stack.pop_back();
            nb.clear();
            t.neighbors(cur, nb);
            for (cell_id m : nb) {
                int j = find_sorted(ball, m);
                if (j >= 0 && lab[j] < 0) {
                    lab[j] = id;
                    stack.push_back(m);
                }
            }
        }
    }
    lv.count = ncomp;
    int center_comp = -1;
    double best = 1e300;
    for (size_t i = 0; i < ball.size(); ++i) {
        double d = torus ? torus_distance(t.center(ball[i]), at) : s.distance(t.center(ball[i]), at);
        if (d < best) {
            best = d;
            center_comp = lab[i];
        }
    }
    for (size_t i = 0; i < ball.size(); ++i) {
        if (lab[i] == center_comp) continue;
        double d = torus ? torus_distance(t.center(ball[i]), at) : s.distance(t.center(ball[i]), at);
        lv.nearest_other = std::min(lv.nearest_other, d);
    }
    return lv;
}

}  // namespace

peano_verdict is_peano_quotient(const decomposition& dec, const generator& gen,
                                const peano_quotient_params& params) {
    peano_verdict v;
    quotient_graph qg = quotient(dec);
    const tiling& t = dec.cells().grid();
    bool torus = t.surface().is_flat_torus();

    {
        std::vector<std::vector<cell_id>> comp_cells(qg.num_components);
        for (int k = 0; k < qg.nodes; ++k)
            for (cell_id c : dec.class_cells(k)) comp_cells[qg.component[k]].push_back(c);
        int big = 0;
        for (auto& cc : comp_cells)
            if (cc.size() > 1 && set_diameter(t, cc) > params.eps) ++big;
        if (big > params.null_bound) {
            v.pass = false;
            v.witnesses.push_back("quotient components over bound: " + std::to_string(big));
        }
    }

    // accumulation probes: candidates where local component counts grow and
    // the nearest distinct component approaches the candidate
    std::vector<int> levels = profile_levels(
        dec.level(), detect_params{params.accum_growth, 64, 8, 1, 16}, gen.max_level);
    std::vector<cell_set> ks;
    for (int lv : levels) ks.push_back(approximate(gen, lv));
    std::set<int> probe_classes;
    for (int k : dec.nondegenerate()) probe_classes.insert(k);
    for (int i = 0; i < params.lattice; ++i) {
        for (int j = 0; j < params.lattice; ++j) {
            point p{(2.0 * j + 1) / (2 * params.lattice), (2.0 * i + 1) / (2 * params.lattice)};
            cell_id best = no_cell;
            double bd = 1e300;
            dec.cells().for_each([&](cell_id c) {
                double d = torus ? torus_distance(t.center(c), p) : t.surface().distance(t.center(c), p);
                if (d < bd - 1e-12) {
                    bd = d;
                    best = c;
                }
            });
            if (best == no_cell) continue;
            point at = t.center(best);
            std::vector<int> counts;
            std::vector<double> nearest;
            for (auto& k : ks) {
                local_view lv = local_components(k, at, params.accum_radius);
                counts.push_back(lv.count);
                nearest.push_back(lv.nearest_other);
            }
            double deep_cell = 1.0 / grid_for_level(levels.back());
            double prev_min = 1e300;
            for (size_t qi = 0; qi + 1 < nearest.size(); ++qi)
                prev_min = std::min(prev_min, nearest[qi]);
            // coarse-level merges fake large early distances; compare the
            // deepest approach against the best previously resolved one
            bool approaching = nearest.back() < 1e290 && prev_min < 1e290 &&
                               nearest.back() <= 0.75 * prev_min + deep_cell;
            if (growth_pass(counts, params.accum_growth) && approaching)
                probe_classes.insert(dec.class_of(best));
        }
    }

    for (int pc : probe_classes) {
        if (pc < 0) continue;
        std::vector<int> field = chebyshev_field(t, dec.class_cells(pc));
        double cs = t.cell_size();
        std::vector<double> class_dist(dec.num_classes(), 1e300);
        for (int k = 0; k < dec.num_classes(); ++k)
            for (cell_id c : dec.class_cells(k))
                class_dist[k] = std::min(class_dist[k], field[c] * cs);
        for (double r : params.radii) {
            std::vector<std::uint8_t> in_ball(dec.num_classes(), 0);
            for (int k = 0; k < dec.num_classes(); ++k)
                if (class_dist[k] <= r) in_ball[k] = 1;
            std::vector<std::vector<int>> adj(dec.num_classes());
            for (auto [a, b] : qg.edges)
                if (in_ball[a] && in_ball[b]) {
                    adj[a].push_back(b);
                    adj[b].push_back(a);
                }
            std::vector<std::uint8_t> reach(dec.num_classes(), 0);
            std::vector<int> stack{pc};
            reach[pc] = 1;
            while (!stack.empty()) {
                int cur = stack.back();
                stack.pop_back();
                for (int m : adj[cur])
                    if (!reach[m]) {
                        reach[m] = 1;
                        stack.push_back(m);
                    }
            }
            int unreachable = 0;
            for (int k = 0; k < dec.num_classes(); ++k)
                if (in_ball[k] && class_dist[k] <= r / 2 && !reach[k] &&
                    qg.component[k] == qg.component[pc])
                    ++unreachable;
            if (unreachable > 0) {
                v.pass = false;
                v.witnesses.push_back("class " + std::to_string(pc) + " r=" + std::to_string(r) +
                                      ": " + std::to_string(unreachable) + " unreachable within r/2");
            }
        }
    }
    return v;
}

decomposition f_decomposition(const generator& gen, int depth, const f_params& params) {
    cell_set kd = approximate(gen, depth);
    const tiling& td = kd.grid();
    std::vector<int> levels =
        profile_levels(depth, detect_params{params.growth, 64, 8, 1, 16}, gen.max_level);
    std::vector<cell_id> depth_cells = kd.cells();
    std::vector<std::vector<int>> counts(depth_cells.size());
    for (int lv : levels) {
        cell_set k = approximate(gen, lv);
        const tiling& t = k.grid();
        int n = t.n();
        int rad = std::max(1, static_cast<int>(std::lround(params.radius * n)));
        component_labeling lab = components(k);
        if (lab.count > 4096) throw resource_error("f_decomposition: too many components");
        // count of distinct global components within the fixed radius of each
        // cell, via per-component Chebyshev stamping
        std::vector<std::uint16_t> counter(static_cast<size_t>(n) * n, 0);
        bool torus = t.surface().is_flat_torus();
        std::vector<std::uint8_t> stamp(static_cast<size_t>(n) * n, 0);
        for (int comp = 0; comp < lab.count; ++comp) {
            std::fill(stamp.begin(), stamp.end(), 0);
            for (size_t i = 0; i < lab.cells.size(); ++i) {
                if (lab.label[i] != comp) continue;
                int r = static_cast<int>(lab.cells[i]) / n, c = static_cast<int>(lab.cells[i]) % n;
                for (int dr = -rad; dr <= rad; ++dr) {
                    int rr = r + dr;
                    if (torus)
                        rr = (rr + n) % n;
                    else if (rr < 0 || rr >= n)
                        continue;
                    for (int dc = -rad; dc <= rad; ++dc) {
                        int cc = c + dc;
                        if (torus)
                            cc = (cc + n) % n;
                        else if (cc < 0 || cc >= n)
                            continue;
                        stamp[static_cast<size_t>(rr) * n + cc] = 1;
                    }
                }
            }
            for (size_t s = 0; s < stamp.size(); ++s)
                if (stamp[s]) ++counter[s];
        }
        int f = n / td.n();
        for (size_t i = 0; i < depth_cells.size(); ++i) {
            int r = static_cast<int>(depth_cells[i]) / td.n();
            int c = static_cast<int>(depth_cells[i]) % td.n();
            counts[i].push_back(counter[static_cast<size_t>(r * f + f / 2) * n + (c * f + f / 2)]);
        }
    }
    cell_set flagged(kd.grid_ptr(), depth);
    for (size_t i = 0; i < depth_cells.size(); ++i)
        if (growth_pass(counts[i], params.growth)) flagged.insert(depth_cells[i]);
    component_labeling groups = components(flagged);
    std::vector<std::vector<cell_id>> classes;
    for (int g = 0; g < groups.count; ++g) {
        auto cc = component_cells(groups, g);
        if (cc.size() > 1) classes.push_back(std::move(cc));
    }
    return decomposition::from_classes(kd, classes, provenance::f_decomposition, true);
}

decomposition atoms(const generator& gen, int depth, const atoms_params& params) {
    cell_set kd = approximate(gen, depth);
    relation rel = detect_relation(gen, depth, params.detect);
    decomposition closed = close_equivalence(rel, kd, params.close);
    decomposition fdec = f_decomposition(gen, depth, params.f);
    std::vector<std::vector<cell_id>> classes;
    for (int k : closed.nondegenerate()) classes.push_back(closed.class_cells(k));
    for (int k : fdec.nondegenerate()) classes.push_back(fdec.class_cells(k));
    return decomposition::from_classes(kd, classes, provenance::atoms, true);
}

bool strictly_planar(const tiling& t, const std::vector<cell_id>& class_cells) {
    const surface_diagram& s = t.surface();
    int n = t.n();
    // one-ring thickening
    std::set<cell_id> thick(class_cells.begin(), class_cells.end());
    {
        std::vector<cell_id> nb;
        for (cell_id c : class_cells) {
            nb.clear();
            t.neighbors(c, nb);
            for (cell_id m : nb) thick.insert(m);
        }
    }
    bool chart_only = true;
    for (cell_id c : thick) {
        int r = static_cast<int>(c) / n, cc = static_cast<int>(c) % n;
        if (s.is_flat_torus()) {
            if (r == 0 || r == n - 1 || cc == 0 || cc == n - 1) chart_only = false;
        } else if (s.kind() != domain_kind::square) {
            cell_rect f = t.footprint(c);
            if (!(s.in_domain({f.x0, f.y0}) && s.in_domain({f.x1, f.y0}) &&
                  s.in_domain({f.x0, f.y1}) && s.in_domain({f.x1, f.y1})))
                chart_only = false;
        } else {
            chart_only = false;  // non-torus square words: fall through below
        }
    }
    if (!chart_only && !s.is_flat_torus()) {
        // a set below a quarter side length develops into the plane across
        // the gluings (or sits in a cone neighborhood of the vertex)
        std::vector<cell_id> tv(thick.begin(), thick.end());
        double side = 0.45 * 2 * std::sin(M_PI / s.num_sides());
        if (set_diameter(t, tv) < side / 4) return s.orientable();
        // glued contacts treated as chart edges beyond this point
    }
    bool wrap = s.is_flat_torus() && !chart_only;

    auto corner = [&](int r, int c) {
        if (wrap) {
            r = ((r % n) + n) % n;
            c = ((c % n) + n) % n;
        }
        return r * (n + 1) + c;
    };
    std::set<int> verts;
    std::map<std::pair<int, int>, int> edge_faces;  // (low corner, axis 0=h/1=v)
    size_t faces = thick.size();
    for (cell_id cell : thick) {
        int r = static_cast<int>(cell) / n, c = static_cast<int>(cell) % n;
        verts.insert(corner(r, c));
        verts.insert(corner(r, c + 1));
        verts.insert(corner(r + 1, c));
        verts.insert(corner(r + 1, c + 1));
        edge_faces[{corner(r, c), 0}]++;
        edge_faces[{corner(r + 1, c), 0}]++;
        edge_faces[{corner(r, c), 1}]++;
        edge_faces[{corner(r, c + 1), 1}]++;
    }
    long chi = static_cast<long>(verts.size()) - static_cast<long>(edge_faces.size()) +
               static_cast<long>(faces);

    // boundary curves: directed boundary edges traced with rightmost turns
    auto has = [&](int r, int c) {
        if (wrap) {
            r = ((r % n) + n) % n;
            c = ((c % n) + n) % n;
        } else if (r < 0 || r >= n || c < 0 || c >= n) {
            return false;
        }
        return thick.count(t.at(r, c)) > 0;
    };
    std::set<std::pair<int, int>> boundary;  // (from corner, dir 0=+x 1=+y 2=-x 3=-y)
    for (cell_id cell : thick) {
        int r = static_cast<int>(cell) / n, c = static_cast<int>(cell) % n;
        if (!has(r - 1, c)) boundary.insert({corner(r, c), 0});
        if (!has(r, c + 1)) boundary.insert({corner(r, c + 1), 1});
        if (!has(r + 1, c)) boundary.insert({corner(r + 1, c + 1), 2});
        if (!has(r, c - 1)) boundary.insert({corner(r + 1, c), 3});
    }
    auto step = [&](int corner_id, int dir) {
        int r = corner_id / (n + 1), c = corner_id % (n + 1);
        switch (dir) {
            case 0: ++c; break;
            case 1: ++r; break;
            case 2: --c; break;
            case 3: --r; break;
        }
        return corner(r, c);
    };
    int q = 0;
    std::set<std::pair<int, int>> seen;
    for (const auto& start : boundary) {
        if (seen.count(start)) continue;
        ++q;
        auto cur = start;
        size_t guard = 0;
        do {
            seen.insert(cur);
            int head = step(cur.first, cur.second);
            int found = -1;
            for (int turn : {3, 0, 1, 2}) {  // right, straight, left, back
                int nd = (cur.second + turn) % 4;
                if (boundary.count({head, nd})) {
                    found = nd;
                    break;
                }
            }
            if (found < 0) break;
            cur = {head, found};
        } while (cur != start && guard++ < 4 * boundary.size() + 8);
    }
    return s.orientable() && (chi + q == 2);
}

}  // namespace atlas
