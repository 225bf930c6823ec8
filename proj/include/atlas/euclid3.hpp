#ifndef ATLAS_EUCLID3_HPP
#define ATLAS_EUCLID3_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "atlas/common.hpp"

namespace atlas {

// cube grid for [0,1]^3 at side 1/2^level; axis order (x1, x2, x3)
struct grid3 {
    int level = 0;
    int n = 0;
    int teeth = 0;  // sheet parameter N

    size_t size() const { return static_cast<size_t>(n) * n * n; }
    size_t idx(int i1, int i2, int i3) const {
        return (static_cast<size_t>(i1) * n + i2) * n + i3;
    }
    void coords(size_t id, int& i1, int& i2, int& i3) const {
        i3 = static_cast<int>(id % n);
        i2 = static_cast<int>(id / n % n);
        i1 = static_cast<int>(id / n / n);
    }
    double center(int i) const { return (i + 0.5) / n; }
};

struct cell_set3 {
    grid3 g;
    std::vector<std::uint8_t> bits;
    size_t count = 0;

    explicit cell_set3(grid3 gg = {}) : g(gg), bits(gg.size(), 0) {}
    bool contains(size_t id) const { return bits[id] != 0; }
    void insert(size_t id) {
        if (!bits[id]) {
            bits[id] = 1;
            ++count;
        }
    }
};

// sheets {0} u {1/k : k <= N} x [0,1]^2, plus the base square x3 = 0
cell_set3 build_K0(int teeth, int level);
// Example 7.1's K: K0 plus the wall x2 = 0
cell_set3 build_K(int teeth, int level);
// smallest level at which all sheets have pairwise distinct cell sets
int minimal_sheet_level(int teeth);

struct labeling3 {
    std::vector<int> label;  // per grid index, -1 outside
    int count = 0;
};
labeling3 components3(const cell_set3& k);

struct decomposition3 {
    grid3 g;
    std::string tag;  // D1 | D1_lambda | D2 | D3 | trivial | fiber_p1 | fiber_p2 | custom
    double lambda = 0;
    std::vector<int> class_of;  // per grid index, -1 = not in K
    int num_classes = 0;
    std::vector<std::vector<size_t>> class_cells;

    void index_from(const cell_set3& k, const std::vector<int>& raw, const std::string& t);
};

decomposition3 trivial3(const cell_set3& k);
decomposition3 build_D1(const cell_set3& k0);
decomposition3 apply_h_lambda(const decomposition3& d1, double lambda);
decomposition3 build_D2(const cell_set3& k0);
decomposition3 build_D3(const cell_set3& k0);
decomposition3 fiber_decomposition(const cell_set3& k, int axis);  // 1: p1 fibers, 2: p2 fibers
// split D1's column at x2 = s into [0,1-t] and [1-t,1]
decomposition3 split_column(const cell_set3& k0, double s, double t);

bool refines3(const decomposition3& d1, const decomposition3& d2);

struct verdict3 {
    bool pass = true;
    std::vector<std::string> witnesses;
};

struct peano3_params {
    std::vector<double> radii{0.25, 0.375};
    int lattice = 8;      // probe sample on Lambda0
    double eps = 0.05;
    int null_bound = 32;
    bool require_lambda0_condition = true;
};

// usc across three levels + quotient local-connectedness + Lambda0->I0
verdict3 peano_membership(const std::string& tag, double lambda, int teeth, int level,
                          const peano3_params& params = {});
// single-decomposition variant (no level family): quotient checks only
verdict3 quotient_checks3(const decomposition3& dec, const cell_set3& k,
                          const peano3_params& params);

struct no_core_report {
    bool d1_pass = false;
    bool d2_pass = false;
    bool refinement_fails = false;  // the common refinement is trivial and non-Peano
    std::vector<std::string> notes;
};
no_core_report no_core_witness(int teeth, int level, const peano3_params& params = {});

struct obstruction_report {
    bool non_peano = false;
    std::string witness;
};
obstruction_report atomicity_obstruction(int teeth, int level, double s, double t,
                                         const peano3_params& params = {});

// rebuild a tagged decomposition at a given level (provenance closure)
decomposition3 rebuild3(const std::string& tag, double lambda, int teeth, int level);

}  // namespace atlas

#endif
