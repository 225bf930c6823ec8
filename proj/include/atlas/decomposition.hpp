#ifndef ATLAS_DECOMPOSITION_HPP
#define ATLAS_DECOMPOSITION_HPP

#include <string>
#include <vector>

#include "atlas/schoenflies.hpp"

namespace atlas {

enum class provenance { atoms, user, f_decomposition, trivial, fiber, custom };

// A partition of a cell set into adjacency-connected classes. Classes are
// indexed by ascending least cell; class -1 never appears.
class decomposition {
  public:
    decomposition() = default;
    static decomposition singletons(const cell_set& cells);
    // nondegenerate classes given explicitly; remaining cells become singletons
    static decomposition from_classes(const cell_set& cells,
                                      const std::vector<std::vector<cell_id>>& classes,
                                      provenance prov, bool repair_connectivity = true);

    const cell_set& cells() const { return cells_; }
    int level() const { return cells_.level(); }
    int num_classes() const { return num_classes_; }
    provenance prov() const { return prov_; }

    int class_of(cell_id c) const;
    const std::vector<cell_id>& class_cells(int k) const { return class_cells_[k]; }
    std::vector<int> nondegenerate() const;
    const std::vector<std::string>& repair_log() const { return repair_log_; }

    bool same_cells(const decomposition& other) const { return cells_ == other.cells_; }

  private:
    void index_classes(std::vector<int>&& class_of_cell, provenance prov);

    cell_set cells_;
    std::vector<cell_id> sorted_;           // ascending cells
    std::vector<int> class_idx_;            // parallel to sorted_
    std::vector<std::vector<cell_id>> class_cells_;
    int num_classes_ = 0;
    provenance prov_ = provenance::custom;
    std::vector<std::string> repair_log_;
};

struct close_params {
    int merge_tol = 1;  // classes merge when within this many cells
};

// smallest closed equivalence at scale: witness limit sets seed the classes,
// one-cell-close classes merge, connectivity is repaired along K and logged
decomposition close_equivalence(const relation& rel, const cell_set& cells,
                                const close_params& params = {});

struct quotient_graph {
    int nodes = 0;
    std::vector<std::pair<int, int>> edges;      // sorted, a < b
    std::vector<point> centroid;                 // per node
    std::vector<double> diameter;                // per node
    std::vector<size_t> size;                    // cells per node
    std::vector<int> component;                  // per node, contiguous from 0
    int num_components = 0;
};

quotient_graph quotient(const decomposition& dec);

// class convergence across >= 3 consecutive levels
bool is_usc_at_scale(const std::vector<decomposition>& family);

struct peano_quotient_params {
    std::vector<double> radii{0.25, 0.15};
    double accum_radius = 0.125;
    growth_params accum_growth{3, 3};
    int lattice = 12;       // candidate probe lattice (lattice^2 points)
    double eps = 0.05;      // null-sequence scale for quotient components
    int null_bound = 32;
};

peano_verdict is_peano_quotient(const decomposition& dec, const generator& gen,
                                const peano_quotient_params& params = {});

bool refines(const decomposition& d1, const decomposition& d2);

struct f_params {
    double radius = 0.125;
    growth_params growth{3, 3};
};

// finest usc surrogate collapsing Hausdorff limits of growing families of
// distinct components of K
decomposition f_decomposition(const generator& gen, int depth, const f_params& params = {});

struct atoms_params {
    detect_params detect;
    close_params close;
    f_params f;
};

// the core-decomposition surrogate: relation closure merged with the
// component-limit collapse to a common fixpoint
decomposition atoms(const generator& gen, int depth, const atoms_params& params = {});

// strict planarity of a class: chi and boundary-curve count of the one-ring
// thickened subcomplex (genus 0 test); exact on square-domain diagrams
bool strictly_planar(const tiling& t, const std::vector<cell_id>& class_cells);

}  // namespace atlas

#endif
