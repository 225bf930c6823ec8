#include "atlas/euclid3.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <set>

namespace atlas {

namespace {

// cells of an n-grid whose closed footprint contains the value v
std::vector<int> cells_at(double v, int n) {
    std::vector<int> out;
    int lo = static_cast<int>(std::floor(v * n));
    for (int i = lo - 1; i <= lo + 1; ++i)
        if (i >= 0 && i < n && v >= static_cast<double>(i) / n - 1e-12 &&
            v <= static_cast<double>(i + 1) / n + 1e-12)
            out.push_back(i);
    return out;
}

std::vector<double> sheet_values(int teeth) {
    std::vector<double> v{0.0};
    for (int k = teeth; k >= 1; --k) v.push_back(1.0 / k);
    return v;
}

}  // namespace

int minimal_sheet_level(int teeth) {
    for (int level = 1; level <= 12; ++level) {
        int n = 1 << level;
        auto vals = sheet_values(teeth);
        std::set<std::vector<int>> seen;
        bool ok = true;
        for (double v : vals)
            if (!seen.insert(cells_at(v, n)).second) ok = false;
        if (ok) return level;
    }
    return 13;
}

static cell_set3 build_common(int teeth, int level, bool with_wall) {
    if (teeth < 1) throw config_error("sheet parameter must be positive");
    int minlv = minimal_sheet_level(teeth);
    if (level < minlv)
        throw config_error("unresolvable sheets at level " + std::to_string(level) +
                           "; minimal valid level is " + std::to_string(minlv));
    grid3 g{level, 1 << level, teeth};
    cell_set3 k(g);
    for (double v : sheet_values(teeth))
        for (int i1 : cells_at(v, g.n))
            for (int i2 = 0; i2 < g.n; ++i2)
                for (int i3 = 0; i3 < g.n; ++i3) k.insert(g.idx(i1, i2, i3));
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2) k.insert(g.idx(i1, i2, 0));  // base x3 = 0
    if (with_wall)
        for (int i1 = 0; i1 < g.n; ++i1)
            for (int i3 = 0; i3 < g.n; ++i3) k.insert(g.idx(i1, 0, i3));  // wall x2 = 0
    return k;
}

cell_set3 build_K0(int teeth, int level) { return build_common(teeth, level, false); }
cell_set3 build_K(int teeth, int level) { return build_common(teeth, level, true); }

labeling3 components3(const cell_set3& k) {
    labeling3 lab;
    lab.label.assign(k.g.size(), -1);
    std::vector<size_t> stack;
    int n = k.g.n;
    for (size_t s = 0; s < k.g.size(); ++s) {
        if (!k.contains(s) || lab.label[s] >= 0) continue;
        int id = lab.count++;
        lab.label[s] = id;
        stack.push_back(s);
        while (!stack.empty()) {
            size_t cur = stack.back();
            stack.pop_back();
            int i1, i2, i3;
            k.g.coords(cur, i1, i2, i3);
            const int d[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
            for (auto& dd : d) {
                int a = i1 + dd[0], b = i2 + dd[1], c = i3 + dd[2];
                if (a < 0 || a >= n || b < 0 || b >= n || c < 0 || c >= n) continue;
                size_t ns = k.g.idx(a, b, c);
                if (k.contains(ns) && lab.label[ns] < 0) {
                    lab.label[ns] = id;
                    stack.push_back(ns);
                }
            }
        }
    }
    return lab;
}

void decomposition3::index_from(const cell_set3& k, const std::vector<int>& raw,
                                const std::string& t) {
    g = k.g;
    tag = t;
    class_of.assign(g.size(), -1);
    std::map<int, int> remap;
    num_classes = 0;
    for (size_t s = 0; s < g.size(); ++s) {
        if (!k.contains(s)) continue;
        int r = raw[s];
        if (r < 0) {
            class_of[s] = num_classes++;
        } else {
            auto it = remap.find(r);
            if (it == remap.end()) {
                remap.emplace(r, num_classes);
                class_of[s] = num_classes++;
            } else {
                class_of[s] = it->second;
            }
        }
    }
    class_cells.assign(num_classes, {});
    for (size_t s = 0; s < g.size(); ++s)
        if (class_of[s] >= 0) class_cells[class_of[s]].push_back(s);
}

decomposition3 trivial3(const cell_set3& k) {
    decomposition3 d;
    std::vector<int> raw(k.g.size(), -1);
    d.index_from(k, raw, "trivial");
    return d;
}

decomposition3 build_D1(const cell_set3& k0) {
    const grid3& g = k0.g;
    std::vector<int> raw(g.size(), -1);
    for (int i2 = 0; i2 < g.n; ++i2)
        for (int i3 = 0; i3 < g.n; ++i3) raw[g.idx(0, i2, i3)] = 1 + i2;  // column per x2
    decomposition3 d;
    d.index_from(k0, raw, "D1");
    return d;
}

namespace {

double h_forward(double x2, double x3, double lambda) {
    return x2 + 4 * x3 * (1 - x3) * (std::pow(x2, lambda) - x2);
}

double h_inverse(double target, double x3, double lambda) {
    double lo = 0, hi = 1;
    for (int it = 0; it < 60; ++it) {
        double mid = (lo + hi) / 2;
        if (h_forward(mid, x3, lambda) < target)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / 2;
}

}  // namespace

decomposition3 apply_h_lambda(const decomposition3& d1, double lambda) {
    if (!(lambda > 0 && lambda < 1)) throw config_error("h_lambda: lambda must be in (0,1)");
    const grid3& g = d1.g;
    cell_set3 k(g);
    for (size_t s = 0; s < g.size(); ++s)
        if (d1.class_of[s] >= 0) k.insert(s);
    std::vector<int> raw(g.size(), -1);
    // forward pass: 4 sample points per source cell claim image cells
    std::vector<int> claim(g.size(), -1);
    for (int i2 = 0; i2 < g.n; ++i2) {
        for (int i3 = 0; i3 < g.n; ++i3) {
            for (double fx : {0.25, 0.75}) {
                for (double fy : {0.25, 0.75}) {
                    double x2 = (i2 + fx) / g.n, x3 = (i3 + fy) / g.n;
                    double y2 = h_forward(x2, x3, lambda);
                    int j2 = std::clamp(static_cast<int>(y2 * g.n), 0, g.n - 1);
                    int j3 = std::clamp(static_cast<int>(x3 * g.n), 0, g.n - 1);
                    size_t id = g.idx(0, j2, j3);
                    if (claim[id] < 0) claim[id] = i2;
                }
            }
        }
    }
    // ownership by the exact preimage of the cell center resolves conflicts
    // and gaps, keeping a genuine partition
    for (int j2 = 0; j2 < g.n; ++j2) {
        for (int j3 = 0; j3 < g.n; ++j3) {
            size_t id = g.idx(0, j2, j3);
            double src = h_inverse(g.center(j2), g.center(j3), lambda);
            int i2 = std::clamp(static_cast<int>(src * g.n), 0, g.n - 1);
            claim[id] = i2;
            raw[id] = 1 + i2;
        }
    }
    decomposition3 d;
    d.index_from(k, raw, "D1_lambda");
    d.lambda = lambda;
    return d;
}

decomposition3 build_D2(const cell_set3& k0) {
    const grid3& g = k0.g;
    std::vector<int> raw(g.size(), -1);
    const int delta0 = 1;
    for (int j2 = 0; j2 < g.n; ++j2) {
        for (int j3 = 0; j3 < g.n; ++j3) {
            size_t id = g.idx(0, j2, j3);
            double lo2 = static_cast<double>(j2) / g.n, hi2 = static_cast<double>(j2 + 1) / g.n;
            double lo3 = static_cast<double>(j3) / g.n, hi3 = static_cast<double>(j3 + 1) / g.n;
            // delta0: the line x2 = 1/2 plus the disk of radius 1/4
            bool on_line = lo2 <= 0.5 && hi2 >= 0.5;
            double dx = std::max({lo2 - 0.5, 0.5 - hi2, 0.0});
            double dy = std::max({lo3 - 0.5, 0.5 - hi3, 0.0});
            bool in_disk = dx * dx + dy * dy <= 1.0 / 16 + 1e-12;
            if (on_line || in_disk) {
                raw[id] = delta0;
                continue;
            }
            // arcs: level sets of the per-height squeeze around the disk
            double a = g.center(j2), b = g.center(j3);
            double rho = std::sqrt(std::max(0.0, 1.0 / 16 - (b - 0.5) * (b - 0.5)));
            double squeeze = 1 - 2 * rho;
            double s = a < 0.5 ? a / squeeze : 1 - (1 - a) / squeeze;
            int cls = std::clamp(static_cast<int>(s * g.n), 0, g.n - 1);
            raw[id] = delta0 + 1 + cls;
        }
    }
    decomposition3 d;
    d.index_from(k0, raw, "D2");
    return d;
}

decomposition3 build_D3(const cell_set3& k0) {
    const grid3& g = k0.g;
    std::vector<int> raw(g.size(), -1);
    for (int j2 = 0; j2 < g.n; ++j2) {
        for (int j3 = 0; j3 < g.n; ++j3) {
            double a = g.center(j2), b = g.center(j3);
            double u = std::min({a, 1 - a, 1 - b});  // nested U level
            int cls = std::clamp(static_cast<int>(u * g.n), 0, g.n / 2);
            raw[g.idx(0, j2, j3)] = 1 + cls;
        }
    }
    decomposition3 d;
    d.index_from(k0, raw, "D3");
    return d;
}

decomposition3 fiber_decomposition(const cell_set3& k, int axis) {
    const grid3& g = k.g;
    std::vector<int> raw(g.size(), -1);
    for (size_t s = 0; s < g.size(); ++s) {
        if (!k.contains(s)) continue;
        int i1, i2, i3;
        g.coords(s, i1, i2, i3);
        if (axis == 1)
            raw[s] = 1 + i1 * g.n + i2;  // p1 fiber: fixed (x1, x2)
        else
            raw[s] = 1 + i1 * g.n + i3;  // p2 fiber: fixed (x1, x3)
    }
    decomposition3 d;
    d.index_from(k, raw, axis == 1 ? "fiber_p1" : "fiber_p2");
    // fibers with a single cell stay classes; index_from made them classes of
    // size one, which is fine
    return d;
}

decomposition3 split_column(const cell_set3& k0, double s, double t) {
    const grid3& g = k0.g;
    int j2 = std::clamp(static_cast<int>(s * g.n), 0, g.n - 1);
    int ks = std::clamp(static_cast<int>((1 - t) * g.n), 0, g.n);
    if (ks <= 0 || ks >= g.n)
        throw config_error("split_column: degenerate split produces one part");
    std::vector<int> raw(g.size(), -1);
    for (int i2 = 0; i2 < g.n; ++i2)
        for (int i3 = 0; i3 < g.n; ++i3) {
            int cls;
            if (i2 != j2)
                cls = 2 + i2;
            else
                cls = i3 < ks ? 0 : 1;
            raw[g.idx(0, i2, i3)] = 10 + cls;
        }
    decomposition3 d;
    d.index_from(k0, raw, "split");
    return d;
}

bool refines3(const decomposition3& a, const decomposition3& b) {
    if (a.g.n != b.g.n) throw config_error("refines3: different grids");
    for (int k = 0; k < a.num_classes; ++k) {
        int target = b.class_of[a.class_cells[k][0]];
        for (size_t c : a.class_cells[k])
            if (b.class_of[c] != target) return false;
    }
    return true;
}

namespace {

// Chebyshev cell distance from the source cells over the full 3D grid
std::vector<int> cheb_field3(const grid3& g, const std::vector<size_t>& sources) {
    std::vector<int> dist(g.size(), -1);
    std::deque<size_t> q;
    for (size_t s : sources) {
        dist[s] = 0;
        q.push_back(s);
    }
    int n = g.n;
    while (!q.empty()) {
        size_t cur = q.front();
        q.pop_front();
        int i1, i2, i3;
        g.coords(cur, i1, i2, i3);
        for (int d1 = -1; d1 <= 1; ++d1)
            for (int d2 = -1; d2 <= 1; ++d2)
                for (int d3 = -1; d3 <= 1; ++d3) {
                    if (!d1 && !d2 && !d3) continue;
                    int a = i1 + d1, b = i2 + d2, c = i3 + d3;
                    if (a < 0 || a >= n || b < 0 || b >= n || c < 0 || c >= n) continue;
                    size_t ns = g.idx(a, b, c);
                    if (dist[ns] < 0) {
                        dist[ns] = dist[cur] + 1;
                        q.push_back(ns);
                    }
                }
    }
    return dist;
}

struct qgraph3 {
    std::vector<std::vector<int>> adj;
    std::vector<int> component;
    int num_components = 0;
};

qgraph3 quotient3(const decomposition3& dec) {
    qgraph3 qg;
    qg.adj.assign(dec.num_classes, {});
    std::set<std::pair<int, int>> edges;
    const grid3& g = dec.g;
    int n = g.n;
    for (size_t s = 0; s < g.size(); ++s) {
        int a = dec.class_of[s];
        if (a < 0) continue;
        int i1, i2, i3;
        g.coords(s, i1, i2, i3);
        const int d[3][3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
        for (auto& dd : d) {
            int x = i1 + dd[0], y = i2 + dd[1], z = i3 + dd[2];
            if (x >= n || y >= n || z >= n) continue;
            int b = dec.class_of[g.idx(x, y, z)];
            if (b >= 0 && b != a) edges.insert({std::min(a, b), std::max(a, b)});
        }
    }
    for (auto [a, b] : edges) {
        qg.adj[a].push_back(b);
        qg.adj[b].push_back(a);
    }
    disjoint_sets ds(dec.num_classes);
    for (auto [a, b] : edges) ds.unite(a, b);
    std::map<int, int> remap;
    qg.component.assign(dec.num_classes, 0);
    for (int k = 0; k < dec.num_classes; ++k) {
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

}  // namespace

verdict3 quotient_checks3(const decomposition3& dec, const cell_set3& k,
                          const peano3_params& params) {
    verdict3 v;
    const grid3& g = dec.g;
    qgraph3 qg = quotient3(dec);

    if (params.require_lambda0_condition &&
        (dec.tag == "D1" || dec.tag == "D1_lambda" || dec.tag == "D2" || dec.tag == "D3" ||
         dec.tag == "split" || dec.tag == "custom")) {
        for (int cls = 0; cls < dec.num_classes; ++cls) {
            bool meets_lambda0 = false, meets_i0 = false;
            for (size_t s : dec.class_cells[cls]) {
                int i1, i2, i3;
                g.coords(s, i1, i2, i3);
                if (i1 == 0) meets_lambda0 = true;
                if (i1 == 0 && i3 == 0) meets_i0 = true;
            }
            if (meets_lambda0 && !meets_i0) {
                v.pass = false;
                v.witnesses.push_back("class " + std::to_string(cls) +
                                      " meets Lambda0 but not I0");
            }
        }
    }

    // probes: nondegenerate classes, plus a lattice of Lambda0 cells
    std::set<int> probes;
    for (int cls = 0; cls < dec.num_classes; ++cls)
        if (dec.class_cells[cls].size() > 1) probes.insert(cls);
    for (int a = 0; a < params.lattice; ++a)
        for (int b = 0; b < params.lattice; ++b) {
            int i2 = (2 * a + 1) * g.n / (2 * params.lattice);
            int i3 = (2 * b + 1) * g.n / (2 * params.lattice);
            int cls = dec.class_of[g.idx(0, i2, i3)];
            if (cls >= 0) probes.insert(cls);
        }

    for (int pc : probes) {
        std::vector<int> field = cheb_field3(g, dec.class_cells[pc]);
        std::vector<double> class_dist(dec.num_classes, 1e300);
        for (int cls = 0; cls < dec.num_classes; ++cls)
            for (size_t s : dec.class_cells[cls])
                class_dist[cls] = std::min(class_dist[cls], static_cast<double>(field[s]) / g.n);
        for (double r : params.radii) {
            std::vector<std::uint8_t> in_ball(dec.num_classes, 0);
            for (int cls = 0; cls < dec.num_classes; ++cls)
                if (class_dist[cls] <= r) in_ball[cls] = 1;
            std::vector<std::uint8_t> reach(dec.num_classes, 0);
            std::vector<int> stack{pc};
            reach[pc] = 1;
            while (!stack.empty()) {
                int cur = stack.back();
                stack.pop_back();
                for (int m : qg.adj[cur])
                    if (in_ball[m] && !reach[m]) {
                        reach[m] = 1;
                        stack.push_back(m);
                    }
            }
            int unreachable = 0;
            for (int cls = 0; cls < dec.num_classes; ++cls)
                if (in_ball[cls] && class_dist[cls] <= r / 2 && !reach[cls] &&
                    qg.component[cls] == qg.component[pc])
                    ++unreachable;
            if (unreachable > 0) {
                v.pass = false;
                v.witnesses.push_back("class " + std::to_string(pc) + " r=" + std::to_string(r) +
                                      ": " + std::to_string(unreachable) + " unreachable");
            }
        }
    }

    // null sequence over quotient components
    {
        std::vector<std::vector<size_t>> comp_cells(qg.num_components);
        for (int cls = 0; cls < dec.num_classes; ++cls)
            for (size_t s : dec.class_cells[cls]) comp_cells[qg.component[cls]].push_back(s);
        int big = 0;
        for (auto& cc : comp_cells) {
            if (cc.size() < 2) continue;
            double lo1 = 1e9, hi1 = -1e9, lo2 = 1e9, hi2 = -1e9, lo3 = 1e9, hi3 = -1e9;
            for (size_t s : cc) {
                int i1, i2, i3;
                g.coords(s, i1, i2, i3);
                lo1 = std::min(lo1, static_cast<double>(i1));
                hi1 = std::max(hi1, static_cast<double>(i1));
                lo2 = std::min(lo2, static_cast<double>(i2));
                hi2 = std::max(hi2, static_cast<double>(i2));
                lo3 = std::min(lo3, static_cast<double>(i3));
                hi3 = std::max(hi3, static_cast<double>(i3));
            }
            double d = std::sqrt((hi1 - lo1) * (hi1 - lo1) + (hi2 - lo2) * (hi2 - lo2) +
                                 (hi3 - lo3) * (hi3 - lo3)) /
                       g.n;
            if (d > params.eps) ++big;
        }
        if (big > params.null_bound) {
            v.pass = false;
            v.witnesses.push_back("quotient components over bound");
        }
    }
    (void)k;
    return v;
}

decomposition3 rebuild3(const std::string& tag, double lambda, int teeth, int level) {
    if (tag == "fiber_p1") return fiber_decomposition(build_K(teeth, level), 1);
    if (tag == "fiber_p2") return fiber_decomposition(build_K(teeth, level), 2);
    cell_set3 k0 = build_K0(teeth, level);
    if (tag == "trivial") return trivial3(k0);
    if (tag == "D1") return build_D1(k0);
    if (tag == "D1_lambda") return apply_h_lambda(build_D1(k0), lambda);
    if (tag == "D2") return build_D2(k0);
    if (tag == "D3") return build_D3(k0);
    throw config_error("rebuild3: unknown decomposition tag '" + tag + "'");
}

namespace {

// class convergence across the 3-level family (3D counterpart of the
// surface-side usc check)
bool usc3(const std::vector<decomposition3>& family) {
    for (size_t i = 1; i < family.size(); ++i) {
        const decomposition3& coarse = family[i - 1];
        const decomposition3& fine = family[i];
        int f = fine.g.n / coarse.g.n;
        for (int cls = 0; cls < fine.num_classes; ++cls) {
            if (fine.class_cells[cls].size() < 2) continue;
            std::set<size_t> up;
            for (size_t s : fine.class_cells[cls]) {
                int i1, i2, i3;
                fine.g.coords(s, i1, i2, i3);
                up.insert(coarse.g.idx(i1 / f, i2 / f, i3 / f));
            }
            std::map<int, int> votes;
            for (size_t s : up)
                if (coarse.class_of[s] >= 0) votes[coarse.class_of[s]]++;
            if (votes.empty()) return false;
            int best = -1, bestv = -1;
            for (auto [j, vv] : votes)
                if (vv > bestv) {
                    best = j;
                    bestv = vv;
                }
            // one-coarse-cell containment both ways (Hausdorff <= one cell)
            std::set<size_t> match(coarse.class_cells[best].begin(),
                                   coarse.class_cells[best].end());
            auto near = [&](size_t s, const std::set<size_t>& other) {
                int i1, i2, i3;
                coarse.g.coords(s, i1, i2, i3);
                for (int d1 = -1; d1 <= 1; ++d1)
                    for (int d2 = -1; d2 <= 1; ++d2)
                        for (int d3 = -1; d3 <= 1; ++d3) {
                            int a = i1 + d1, b = i2 + d2, c = i3 + d3;
                            if (a < 0 || a >= coarse.g.n || b < 0 || b >= coarse.g.n || c < 0 ||
                                c >= coarse.g.n)
                                continue;
                            if (other.count(coarse.g.idx(a, b, c))) return true;
                        }
                return false;
            };
            for (size_t s : up)
                if (!near(s, match)) return false;
            for (size_t s : match)
                if (!near(s, up)) return false;
        }
    }
    return true;
}

}  // namespace

verdict3 peano_membership(const std::string& tag, double lambda, int teeth, int level,
                          const peano3_params& params) {
    verdict3 v;
    std::vector<decomposition3> family;
    for (int lv = level; lv < level + 3; ++lv) family.push_back(rebuild3(tag, lambda, teeth, lv));
    if (!usc3(family)) {
        v.pass = false;
        v.witnesses.push_back("class family not usc at scale");
    }
    bool is_k = tag == "fiber_p1" || tag == "fiber_p2";
    cell_set3 k = is_k ? build_K(teeth, level) : build_K0(teeth, level);
    verdict3 q = quotient_checks3(family[0], k, params);
    if (!q.pass) {
        v.pass = false;
        for (auto& w : q.witnesses) v.witnesses.push_back(w);
    }
    return v;
}

no_core_report no_core_witness(int teeth, int level, const peano3_params& params) {
    no_core_report rep;
    verdict3 v1 = peano_membership("fiber_p1", 0, teeth, level, params);
    verdict3 v2 = peano_membership("fiber_p2", 0, teeth, level, params);
    rep.d1_pass = v1.pass;
    rep.d2_pass = v2.pass;
    for (auto& w : v1.witnesses) rep.notes.push_back("p1: " + w);
    for (auto& w : v2.witnesses) rep.notes.push_back("p2: " + w);

    // common refinement: classwise intersections
    cell_set3 k = build_K(teeth, level);
    decomposition3 f1 = fiber_decomposition(k, 1);
    decomposition3 f2 = fiber_decomposition(k, 2);
    bool all_single = true;
    size_t max_inter = 0;
    {
        std::map<std::pair<int, int>, size_t> inter;
        for (size_t s = 0; s < k.g.size(); ++s)
            if (k.contains(s)) inter[{f1.class_of[s], f2.class_of[s]}]++;
        for (auto& [key, cnt] : inter) max_inter = std::max(max_inter, cnt);
        all_single = max_inter <= 1;
    }
    rep.notes.push_back("max fiber intersection cells: " + std::to_string(max_inter));

    // the common refinement is the trivial decomposition; its quotient is K
    // itself and must fail the Peano checks
    decomposition3 triv = trivial3(k);
    peano3_params p = params;
    p.require_lambda0_condition = false;
    verdict3 vt = quotient_checks3(triv, k, p);
    rep.refinement_fails = all_single && !vt.pass;
    if (vt.pass) rep.notes.push_back("trivial refinement unexpectedly passed");
    return rep;
}

obstruction_report atomicity_obstruction(int teeth, int level, double s, double t,
                                         const peano3_params& params) {
    obstruction_report rep;
    cell_set3 k0 = build_K0(teeth, level);
    decomposition3 split = split_column(k0, s, t);
    peano3_params p = params;
    p.require_lambda0_condition = false;  // the split violates the LC check, not the I0 condition
    verdict3 v = quotient_checks3(split, k0, p);
    rep.non_peano = !v.pass;
    if (!v.witnesses.empty()) rep.witness = v.witnesses.front();
    return rep;
}

}  // namespace atlas
