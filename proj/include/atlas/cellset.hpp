#ifndef ATLAS_CELLSET_HPP
#define ATLAS_CELLSET_HPP

#include <memory>
#include <vector>

#include "atlas/common.hpp"
#include "atlas/tiling.hpp"

namespace atlas {

// A finite set of tiling cells, the level-n outer approximation of a
// compactum. Backed by a bitset over the full grid.
class cell_set {
  public:
    cell_set() = default;
    explicit cell_set(std::shared_ptr<const tiling> t, int level = 0);

    const tiling& grid() const { return *t_; }
    std::shared_ptr<const tiling> grid_ptr() const { return t_; }
    int level() const { return level_; }
    size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }

    bool contains(cell_id c) const {
        return c < nbits_ && (bits_[c >> 6] >> (c & 63)) & 1;
    }
    void insert(cell_id c);
    void erase(cell_id c);

    std::vector<cell_id> cells() const;  // ascending

    cell_set& unite(const cell_set& o);
    cell_set& intersect(const cell_set& o);
    cell_set& subtract(const cell_set& o);
    bool intersects(const cell_set& o) const;
    bool subset_of(const cell_set& o) const;
    bool operator==(const cell_set& o) const;

    // all cells adjacent to the set (set included), identification-aware
    cell_set dilated(int rings = 1) const;

    template <typename F>
    void for_each(F&& f) const {
        for (size_t w = 0; w < bits_.size(); ++w) {
            std::uint64_t word = bits_[w];
            while (word) {
                unsigned b = static_cast<unsigned>(__builtin_ctzll(word));
                f(static_cast<cell_id>((w << 6) + b));
                word &= word - 1;
            }
        }
    }

  private:
    std::shared_ptr<const tiling> t_;
    std::vector<std::uint64_t> bits_;
    size_t nbits_ = 0;
    size_t count_ = 0;
    int level_ = 0;
};

// Hausdorff distance between cell-center sets under the quotient metric.
double hausdorff_distance(const cell_set& a, const cell_set& b);

// max quotient distance between cell centers; exact up to 4096 cells,
// 64-point boundary sample above that
double set_diameter(const cell_set& s);
double set_diameter(const tiling& t, const std::vector<cell_id>& cells);

// min center distance between two cell lists (set distance)
double set_distance(const tiling& t, const std::vector<cell_id>& a, const std::vector<cell_id>& b);

}  // namespace atlas

#endif
