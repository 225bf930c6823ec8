#ifndef ATLAS_QUADGRID_HPP
#define ATLAS_QUADGRID_HPP

#include <vector>

#include "atlas/cellset.hpp"
#include "atlas/topology.hpp"

namespace atlas {

// A marked quadrilateral unrolled onto its own local rectangle; components
// of K inside the quad are taken in the quad's topology (plain grid
// adjacency, no surface wrap inside).
struct quad_grid {
    const tiling* t;
    marked_quad q;
    int w, h;
    std::vector<std::uint8_t> k;  // local K bitmap, row-major (li * w + lj)
    std::vector<int> labels;      // component label per local cell, -1 outside K
    int ncomp = 0;

    quad_grid(const tiling& til, const marked_quad& mq, const cell_set& cells)
        : t(&til), q(mq), w(mq.w), h(mq.h) {
        k.assign(static_cast<size_t>(w) * h, 0);
        for (int li = 0; li < h; ++li)
            for (int lj = 0; lj < w; ++lj)
                if (cells.contains(global(li, lj))) k[static_cast<size_t>(li) * w + lj] = 1;
    }

    cell_id global(int li, int lj) const {
        int n = t->n();
        return t->at((q.ry0 + li) % n, (q.cx0 + lj) % n);
    }

    int at(int li, int lj) const { return k[static_cast<size_t>(li) * w + lj]; }

    void label_components() {
        labels.assign(static_cast<size_t>(w) * h, -1);
        ncomp = 0;
        std::vector<int> stack;
        for (int s = 0; s < w * h; ++s) {
            if (!k[s] || labels[s] >= 0) continue;
            int id = ncomp++;
            stack.push_back(s);
            labels[s] = id;
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
                    if (k[ns] && labels[ns] < 0) {
                        labels[ns] = id;
                        stack.push_back(ns);
                    }
                }
            }
        }
    }

    // component ids touching both marked sides, ascending
    std::vector<int> crossing_components() const {
        std::vector<std::uint8_t> lo(ncomp, 0), hi(ncomp, 0);
        if (q.vertical) {
            for (int lj = 0; lj < w; ++lj) {
                if (labels[lj] >= 0) lo[labels[lj]] = 1;
                int s = (h - 1) * w + lj;
                if (labels[s] >= 0) hi[labels[s]] = 1;
            }
        } else {
            for (int li = 0; li < h; ++li) {
                if (labels[li * w] >= 0) lo[labels[li * w]] = 1;
                int s = li * w + (w - 1);
                if (labels[s] >= 0) hi[labels[s]] = 1;
            }
        }
        std::vector<int> out;
        for (int i = 0; i < ncomp; ++i)
            if (lo[i] && hi[i]) out.push_back(i);
        return out;
    }

    // condition (a): K on the quad boundary only within the marked sides
    bool admissible() const {
        if (q.vertical) {
            for (int li = 1; li + 1 < h; ++li)
                if (at(li, 0) || at(li, w - 1)) return false;
        } else {
            for (int lj = 1; lj + 1 < w; ++lj)
                if (at(0, lj) || at(h - 1, lj)) return false;
        }
        return true;
    }
};

}  // namespace atlas

#endif
