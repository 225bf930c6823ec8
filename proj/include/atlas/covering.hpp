#ifndef ATLAS_COVERING_HPP
#define ATLAS_COVERING_HPP

#include <string>
#include <vector>

#include "atlas/decomposition.hpp"

namespace atlas {

// self-cover of the torus: (x, y) -> (m x mod 1, n y mod 1)
struct torus_cover {
    int m = 1, n = 1;
    int degree() const { return std::abs(m) * std::abs(n); }
};

// the m*n block of same-grid cells covered by the image of one cell
std::vector<cell_id> image_block(const tiling& t, torus_cover f, cell_id c);

// preimage cells of one cell under the block map (exactly |m n| of them)
std::vector<cell_id> preimage_cells(const tiling& t, torus_cover f, cell_id c);

// generator whose level-k set is the exact cell preimage of gen's level-k set
generator preimage_compactum(const generator& gen, torus_cover f);

enum class push_verdict { onto_atom, into_atom, violation };

struct pushforward_report {
    std::vector<push_verdict> verdicts;  // per upstairs class
    std::vector<int> matched;            // downstairs class id, -1 when none
    bool all_onto() const {
        for (auto v : verdicts)
            if (v != push_verdict::onto_atom) return false;
        return true;
    }
    bool any_violation() const {
        for (auto v : verdicts)
            if (v == push_verdict::violation) return true;
        return false;
    }
};

// Verdict per upstairs atom: image equals / lands inside / misses a
// downstairs atom, within one cover-stretched cell.
pushforward_report pushforward_atoms(torus_cover f, const decomposition& up,
                                     const decomposition& down);

struct cover_check {
    bool pass = true;
    int checked = 0;
    std::vector<std::string> notes;
};

// sampled upstairs neighborhood-relation pairs must map to confirmed pairs
cover_check rtilde_fiber_pushforward_check(torus_cover f, const generator& gen, int depth_up,
                                           int depth_down, int max_pairs,
                                           const detect_params& params = {});

// sampled downstairs relation pairs must lift through every preimage point
cover_check lift_relation_check(torus_cover f, const generator& gen, int depth_down,
                                int depth_up, int max_pairs, const detect_params& params = {});

}  // namespace atlas

#endif
