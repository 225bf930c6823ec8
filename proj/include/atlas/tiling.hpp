#ifndef ATLAS_TILING_HPP
#define ATLAS_TILING_HPP

#include <map>
#include <memory>
#include <vector>

#include "atlas/common.hpp"
#include "atlas/surface.hpp"

namespace atlas {

enum class tiling_kind { square, brick };

struct cell_rect {
    double x0, y0, x1, y1;
};

// A grid of size eps = 1/N over the fundamental domain. Cells are indexed
// (row, col) with id = row*N + col; on polygon domains only cells meeting
// the domain are valid. Immutable; adjacency queries are pure.
class tiling {
  public:
    tiling(std::shared_ptr<const surface_diagram> surf, tiling_kind kind, int n);

    tiling_kind kind() const { return kind_; }
    int n() const { return n_; }
    int grid_cells() const { return n_ * n_; }         // full grid, incl. invalid
    int num_cells() const { return num_valid_; }       // valid cells only
    const surface_diagram& surface() const { return *surf_; }
    std::shared_ptr<const surface_diagram> surface_ptr() const { return surf_; }

    bool valid(cell_id c) const { return valid_.empty() || valid_[c] != 0; }
    std::vector<cell_id> all_cells() const;

    int row(cell_id c) const { return static_cast<int>(c) / n_; }
    int col(cell_id c) const { return static_cast<int>(c) % n_; }
    cell_id at(int r, int c) const { return static_cast<cell_id>(r * n_ + c); }

    double row_offset(int r) const;  // brick rows shift by eps/2
    cell_rect footprint(cell_id c) const;
    point center(cell_id c) const;
    double cell_size() const { return 1.0 / n_; }
    double cell_diag() const;

    cell_id locate(point p) const;

    // edge neighbors, wrapped through the surface identifications; appended to out
    void neighbors(cell_id c, std::vector<cell_id>& out) const;
    bool adjacent(cell_id a, cell_id b) const;

    double distance(cell_id a, cell_id b) const;  // quotient metric between centers

  private:
    void build_polygon_mask();
    void build_polygon_gluing();
    cell_id wrap_square_neighbor(int r, int c, int side) const;

    std::shared_ptr<const surface_diagram> surf_;
    tiling_kind kind_;
    int n_;
    int num_valid_;
    bool flat_ = false;  // square/bigon-free fast path: flat torus, square tiling
    std::vector<uint8_t> valid_;
    std::map<cell_id, std::vector<cell_id>> glued_;
};

}  // namespace atlas

#endif
