#ifndef ATLAS_GENERATORS_HPP
#define ATLAS_GENERATORS_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "atlas/cellset.hpp"

namespace atlas {

// A compactum given through its resolution tower: level k -> outer
// approximation on the 2^(k+2) grid. Generators are pure.
struct generator {
    std::string name;
    std::shared_ptr<const surface_diagram> surf;
    tiling_kind tk = tiling_kind::square;
    int max_level = 8;
    double cauchy_c = 2.0;  // declared Hausdorff-Cauchy constant
    std::function<cell_set(int level)> build;
};

int grid_for_level(int level);

// checks the level bound and the ATLAS_MAX_CELLS budget, then builds
cell_set approximate(const generator& gen, int level);

std::shared_ptr<const tiling> get_tiling(std::shared_ptr<const surface_diagram> surf,
                                         tiling_kind kind, int n);

// gallery: circle, disk, filled_square, three_arcs, point, full_square,
// cantor_comb, comb, vertical_lines, genus2_comb
generator make_gallery(const std::string& name);
std::vector<std::string> gallery_names();

generator from_bitmap_file(const std::string& path);
void write_bitmap_file(const std::string& path, const cell_set& cs);

// depth-d pre-Cantor set: 2^d closed intervals, numerators over 3^d
std::vector<std::pair<std::int64_t, std::int64_t>> pre_cantor_intervals(int depth);

// comb teeth resolvable at this level: all n with n(n+1) <= 2^(level+2)
int comb_teeth(int level);

}  // namespace atlas

#endif
