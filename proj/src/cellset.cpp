#include "atlas/cellset.hpp"

#include <algorithm>
#include <cmath>

namespace atlas {

cell_set::cell_set(std::shared_ptr<const tiling> t, int level)
    : t_(std::move(t)), level_(level) {
    nbits_ = static_cast<size_t>(t_->grid_cells());
    bits_.assign((nbits_ + 63) / 64, 0);
}

void cell_set::insert(cell_id c) {
    if (c >= nbits_) throw atlas_error("cell_set: cell id out of range");
    std::uint64_t& w = bits_[c >> 6];
    std::uint64_t m = 1ULL << (c & 63);
    if (!(w & m)) {
        w |= m;
        ++count_;
    }
}

void cell_set::erase(cell_id c) {
    if (c >= nbits_) return;
    std::uint64_t& w = bits_[c >> 6];
    std::uint64_t m = 1ULL << (c & 63);
    if (w & m) {
        w &= ~m;
        --count_;
    }
}

std::vector<cell_id> cell_set::cells() const {
    std::vector<cell_id> out;
    out.reserve(count_);
    for_each([&](cell_id c) { out.push_back(c); });
    return out;
}

static void recount(std::vector<std::uint64_t>& bits, size_t& count) {
    count = 0;
    for (std::uint64_t w : bits) count += static_cast<size_t>(__builtin_popcountll(w));
}

cell_set& cell_set::unite(const cell_set& o) {
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] |= o.bits_[i];
    recount(bits_, count_);
    return *this;
}

cell_set& cell_set::intersect(const cell_set& o) {
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= o.bits_[i];
    recount(bits_, count_);
    return *this;
}

cell_set& cell_set::subtract(const cell_set& o) {
    for (size_t i = 0; i < bits_.size(); ++i) bits_[i] &= ~o.bits_[i];
    recount(bits_, count_);
    return *this;
}

bool cell_set::intersects(const cell_set& o) const {
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & o.bits_[i]) return true;
    return false;
}

bool cell_set::subset_of(const cell_set& o) const {
    for (size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i] & ~o.bits_[i]) return false;
    return true;
}

bool cell_set::operator==(const cell_set& o) const { return bits_ == o.bits_; }

cell_set cell_set::dilated(int rings) const {
    cell_set out = *this;
    std::vector<cell_id> nb;
    for (int k = 0; k < rings; ++k) {
        std::vector<cell_id> frontier = out.cells();
        for (cell_id c : frontier) {
            nb.clear();
            t_->neighbors(c, nb);
            for (cell_id m : nb) out.insert(m);
        }
    }
    return out;
}

double hausdorff_distance(const cell_set& a, const cell_set& b) {
    if (a.grid_ptr().get() != b.grid_ptr().get() &&
        (a.grid().n() != b.grid().n() || a.grid().kind() != b.grid().kind()))
        throw config_error("hausdorff_distance: mismatched tilings");
    if (a.empty() || b.empty())
        throw config_error("hausdorff_distance: empty set");
    const tiling& t = a.grid();
    auto va = a.cells();
    auto vb = b.cells();
    auto one_sided = [&](const std::vector<cell_id>& from, const std::vector<cell_id>& to) {
        double worst = 0.0;
        for (cell_id c : from) {
            double best = 1e300;
            for (cell_id d : to) {
                double dd = t.distance(c, d);
                if (dd < best) {
                    best = dd;
                    if (best == 0.0) break;
                }
            }
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(one_sided(va, vb), one_sided(vb, va));
}

double set_diameter(const tiling& t, const std::vector<cell_id>& cells) {
    if (cells.size() <= 1) return 0.0;
    std::vector<cell_id> pts;
    if (cells.size() <= 4096) {
        pts = cells;
    } else {
        // 64 extreme cells by direction around the centroid
        double cx = 0, cy = 0;
        for (cell_id c : cells) {
            point p = t.center(c);
            cx += p.x;
            cy += p.y;
        }
        cx /= cells.size();
        cy /= cells.size();
        std::vector<cell_id> bucket(64, no_cell);
        std::vector<double> best(64, -1);
        for (cell_id c : cells) {
            point p = t.center(c);
            double ang = std::atan2(p.y - cy, p.x - cx);
            int k = std::clamp(static_cast<int>((ang + M_PI) / (2 * M_PI) * 64), 0, 63);
            double r = std::hypot(p.x - cx, p.y - cy);
            if (r > best[k]) {
                best[k] = r;
                bucket[k] = c;
            }
        }
        for (cell_id c : bucket)
            if (c != no_cell) pts.push_back(c);
    }
    double d = 0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, t.distance(pts[i], pts[j]));
    return d;
}

double set_diameter(const cell_set& s) { return set_diameter(s.grid(), s.cells()); }

double set_distance(const tiling& t, const std::vector<cell_id>& a,
                    const std::vector<cell_id>& b) {
    double best = 1e300;
    for (cell_id x : a)
        for (cell_id y : b) {
            double d = t.distance(x, y);
            if (d < best) {
                best = d;
                if (best == 0.0) return 0.0;
            }
        }
    return best;
}

}  // namespace atlas
