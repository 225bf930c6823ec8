#ifndef ATLAS_TOPOLOGY_HPP
#define ATLAS_TOPOLOGY_HPP

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "atlas/cellset.hpp"
#include "atlas/generators.hpp"

namespace atlas {

// Connected-component labeling of a cell set. Labels are contiguous from 0,
// ordered by each component's least cell id.
struct component_labeling {
    std::vector<cell_id> cells;     // ascending
    std::vector<int> label;         // parallel to cells
    int count = 0;
    std::vector<cell_id> least_cell;   // per component
    std::vector<size_t> comp_size;     // per component

    int label_of(cell_id c) const;  // -1 if not in the set
};

component_labeling components(const cell_set& cells);

// cells of one labeled component
std::vector<cell_id> component_cells(const component_labeling& lab, int comp);

struct profile_result {
    std::vector<int> levels;
    std::vector<int> counts;
    bool pass = true;  // F-compactum-at-scale verdict: fail iff growing past the bound
};

// per-level count of components with diameter > eps
profile_result null_sequence_profile(const generator& gen, double eps,
                                     const std::vector<int>& levels, int bound = 32);

// 0 when the r-ball component around the cell covers the r/2-ball
// intersection at every tested level; else the unreachable fraction at the
// deepest level
double local_connectedness_defect(const generator& gen, point at, double r,
                                  const std::vector<int>& levels);

struct peano_verdict {
    bool pass = true;
    std::vector<std::string> witnesses;
};

struct peano_scale_params {
    std::vector<int> levels{3, 4, 5};
    std::vector<double> eps_grid{0.4, 0.2, 0.1};
    std::vector<double> radii{0.15, 0.1};
    int sample_cells = 24;  // local-connectedness probes per level (hotspots)
    int null_bound = 32;
};

peano_verdict is_peano_at_scale(const generator& gen, const peano_scale_params& params = {});

struct cut_wire_result {
    bool split = false;
    cell_set x1, x2;          // when split
    cell_set witness;         // a component meeting both A1 and A2 otherwise
};

cut_wire_result cut_wire_split(const cell_set& cells, const cell_set& a1, const cell_set& a2);

// marked quadrilateral in cell coordinates: w x h rectangle of cells with
// bottom-left cell (ry0, cx0), wrapping modulo N on the torus (w, h <= N/2
// keep it embedded). Marked sides I1/I2 are the bottom/top rows when
// vertical, the left/right columns otherwise.
struct marked_quad {
    int cx0 = 0, ry0 = 0, w = 1, h = 1;
    bool vertical = true;

    marked_quad scaled(int f) const { return {cx0 * f, ry0 * f, w * f, h * f, vertical}; }
    std::vector<cell_id> side_cells(const tiling& t, int which) const;  // I1 = 0, I2 = 1
};

// m-1 pairwise disjoint K-free cell paths from the I1 side to the I2 side
// leaving the first m crossing components in distinct regions
std::vector<std::vector<cell_id>> separating_arcs(const marked_quad& q, const cell_set& cells,
                                                  int m);

}  // namespace atlas

#endif
