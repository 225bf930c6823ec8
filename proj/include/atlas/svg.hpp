#ifndef ATLAS_SVG_HPP
#define ATLAS_SVG_HPP

#include <string>

#include "atlas/decomposition.hpp"
#include "atlas/euclid3.hpp"

namespace atlas {

// deterministic palette keyed by class id (golden-angle hue)
std::string palette_color(int class_id);

// fundamental polygon with identification arrows, cells colored by class;
// nondegenerate classes outlined
void render_decomposition_svg(const decomposition& dec, const std::string& path);

// p2 projection (x1, x3) of a 3D cell set
void render_p2_projection_svg(const cell_set3& k, const std::string& path);

}  // namespace atlas

#endif
