#ifndef ATLAS_SURFACE_HPP
#define ATLAS_SURFACE_HPP

#include <string>
#include <vector>

#include "atlas/common.hpp"

namespace atlas {

// How the fundamental domain sits in the unit square.
enum class domain_kind {
    square,    // 4-sided words: the unit square itself
    bigon,     // 2-sided words: disk of radius 0.45 centered at (1/2,1/2)
    polygon,   // 2k-gon (k>=3) inscribed in circle of radius 0.45
};

struct side_gluing {
    int partner = -1;           // index of the other occurrence of the label
    bool reversed = false;      // partner parameter runs 1-t instead of t
    bool orientation_reversing = false;  // both occurrences share the exponent sign
};

// A closed surface presented as a polygon with an edge identification word,
// e.g. "aba'b'" for the torus ("'" marks the inverse). Immutable once built.
class surface_diagram {
  public:
    static surface_diagram from_word(const std::string& word);

    const std::string& word() const { return word_; }
    int num_sides() const { return static_cast<int>(letters_.size()); }
    int num_labels() const { return num_labels_; }
    domain_kind kind() const { return kind_; }

    int euler_characteristic() const { return vertex_cycles_ - num_labels_ + 1; }
    bool orientable() const { return orientable_; }
    // Reported as a conjectured bound, never asserted as an invariant.
    int conjectured_xi() const;
    int vertex_cycles() const { return vertex_cycles_; }

    bool is_flat_torus() const { return flat_torus_; }

    // Geometry of the fundamental domain.
    std::vector<point> polygon_vertices() const;    // empty for bigon
    bool in_domain(point p, double tol = 1e-12) const;
    point side_point(int side, double t) const;     // point at parameter t along side
    const side_gluing& gluing(int side) const { return glue_[side]; }
    // all boundary-identified images of p (p itself included)
    std::vector<point> identified_images(point p) const;

    point canonicalize(point p) const;
    double distance(point p, point q) const;  // quotient metric (upper bound off the torus)

    int side_letter(int side) const { return letters_[side]; }
    int side_exponent(int side) const { return exponents_[side]; }

  private:
    surface_diagram() = default;

    std::string word_;
    std::vector<int> letters_;    // per side
    std::vector<int> exponents_;  // +1 / -1
    std::vector<side_gluing> glue_;
    int num_labels_ = 0;
    int vertex_cycles_ = 0;
    bool orientable_ = false;
    bool flat_torus_ = false;
    domain_kind kind_ = domain_kind::square;
};

double torus_distance(point p, point q);

}  // namespace atlas

#endif
