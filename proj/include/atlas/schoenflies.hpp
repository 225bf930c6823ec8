#ifndef ATLAS_SCHOENFLIES_HPP
#define ATLAS_SCHOENFLIES_HPP

#include <string>
#include <vector>

#include "atlas/generators.hpp"
#include "atlas/topology.hpp"

namespace atlas {

struct detect_params {
    growth_params growth{3, 3};
    int granularity = 64;   // dyadic candidate positions per axis
    int max_level = 8;      // profiles never go deeper than this
    int pinf_tol = 1;       // persistence tolerance, in cells
    int max_width_units = 16;
    int cluster_radius = 4;  // convergence window around a cluster, in depth cells
    int profile_extra = 1;   // extra profile levels past the growth window
    int min_run = 3;         // size floor: crossed corridors span at least this many cells
};

// one detected witness region with its convergent cluster
struct witness_record {
    std::string region;             // "quad cx0=.. ry0=.. w=.. h=.. vertical=.."
    std::vector<int> levels;
    std::vector<int> counts;          // region-wide crossing counts
    std::vector<int> cluster_counts;  // crossing components near this cluster
    std::vector<cell_id> pinf;        // cluster cells at the depth grid
    std::vector<cell_id> pinf_deep;   // cluster cells at the deepest profile grid
    int deep_n = 0;                   // grid size of pinf_deep
    std::vector<std::pair<cell_id, cell_id>> pairs;
};

// symmetric cell-pair relation with witnesses; pairs stored once with a < b
struct relation {
    int depth = 0;
    std::vector<std::pair<cell_id, cell_id>> pairs;
    std::vector<witness_record> witnesses;

    bool contains(cell_id a, cell_id b) const;
    void add_pair(cell_id a, cell_id b);
    void finish();  // sort + dedup
};

// components of K inside the quad (in the quad's own topology) that meet
// both marked sides; throws config_error("not admissible") when K touches
// the unmarked sides
std::vector<std::vector<cell_id>> crossing_components(const marked_quad& q, const cell_set& cells);

struct profile_outcome {
    std::vector<int> levels;
    std::vector<int> counts;
    std::vector<cell_id> pinf;  // persistent cells at the depth grid (all clusters)
    bool admissible = true;
};

// per-level crossing counts plus the persistent limit set
profile_outcome crossing_profile(const marked_quad& q_at_depth, const generator& gen, int depth,
                                 const detect_params& params = {});

relation detect_relation(const generator& gen, int depth, const detect_params& params = {});

struct annulus_spec {
    enum kind_t { band, frame };
    kind_t kind = band;
    bool horizontal = true;  // band: boundary circles are rows lo and hi
    int lo = 0, hi = 0;      // band rows/cols at the depth grid, inclusive
    marked_quad outer, inner;  // frame: outer rectangle minus inner rectangle
};

relation detect_relation_annulus(const generator& gen, const annulus_spec& spec, int depth,
                                 const detect_params& params = {});

struct rtilde_result {
    bool related = false;
    std::vector<int> counts;
};

// neighborhood-shrinking relation probe between two cells of K
rtilde_result detect_rtilde(const generator& gen, cell_id x, cell_id y, int depth,
                            const detect_params& params = {});

std::vector<int> profile_levels(int depth, const detect_params& params, int gen_max);

}  // namespace atlas

#endif
