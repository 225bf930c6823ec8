#include "atlas/tiling.hpp"

#include <algorithm>
#include <cmath>

namespace atlas {

namespace {

double wrap01(double v) {
    double w = v - std::floor(v);
    if (w >= 1.0) w = 0.0;
    return w;
}

}  // namespace

tiling::tiling(std::shared_ptr<const surface_diagram> surf, tiling_kind kind, int n)
    : surf_(std::move(surf)), kind_(kind), n_(n), num_valid_(n * n) {
    if (n_ < 2) throw config_error("tiling: N must be at least 2");
    if (kind_ == tiling_kind::brick) {
        if (!surf_->is_flat_torus())
            throw config_error("brick-wall tiling is only supported on the flat torus");
        if (n_ % 2 != 0)
            throw config_error("brick-wall tiling with odd N on the torus is non-periodic");
    }
    flat_ = surf_->is_flat_torus() && kind_ == tiling_kind::square;
    if (surf_->kind() != domain_kind::square) {
        build_polygon_mask();
        build_polygon_gluing();
    }
}

void tiling::build_polygon_mask() {
    valid_.assign(n_ * n_, 0);
    num_valid_ = 0;
    double eps = cell_size();
    for (int r = 0; r < n_; ++r) {
        for (int c = 0; c < n_; ++c) {
            // footprint meets the domain iff a corner is inside or the domain
            // boundary crosses the cell; sample corners plus midpoints
            bool inside = false;
            for (int dy = 0; dy <= 2 && !inside; ++dy)
                for (int dx = 0; dx <= 2 && !inside; ++dx)
                    inside = surf_->in_domain({(c + dx * 0.5) * eps, (r + dy * 0.5) * eps});
            if (inside) {
                valid_[r * n_ + c] = 1;
                ++num_valid_;
            }
        }
    }
}

void tiling::build_polygon_gluing() {
    // march each side at sub-cell steps; a sample at parameter t on side s is
    // glued to the matching sample on the partner side
    int sides = surf_->num_sides();
    int samples = 8 * n_;
    double eps = cell_size();
    auto inward_cell = [&](int side, double t) -> cell_id {
        point p = surf_->side_point(side, t);
        double h = 1e-4 * eps;
        point q1 = surf_->side_point(side, std::min(1.0, t + h));
        point q0 = surf_->side_point(side, std::max(0.0, t - h));
        double dx = q1.x - q0.x, dy = q1.y - q0.y;
        double len = std::hypot(dx, dy);
        if (len == 0) return no_cell;
        // ccw boundary: inward normal is the left normal of the direction
        double nx = -dy / len, ny = dx / len;
        point in = {p.x + nx * 0.3 * eps, p.y + ny * 0.3 * eps};
        int cc = static_cast<int>(std::floor(in.x * n_));
        int rr = static_cast<int>(std::floor(in.y * n_));
        if (cc < 0 || cc >= n_ || rr < 0 || rr >= n_) return no_cell;
        cell_id id = at(rr, cc);
        return valid(id) ? id : no_cell;
    };
    for (int s = 0; s < sides; ++s) {
        const side_gluing& g = surf_->gluing(s);
        if (g.partner < s) continue;
        for (int k = 0; k <= samples; ++k) {
            double t = (k + 0.5) / (samples + 1);
            cell_id a = inward_cell(s, t);
            cell_id b = inward_cell(g.partner, g.reversed ? 1 - t : t);
            if (a == no_cell || b == no_cell || a == b) continue;
            auto& la = glued_[a];
            if (std::find(la.begin(), la.end(), b) == la.end()) la.push_back(b);
            auto& lb = glued_[b];
            if (std::find(lb.begin(), lb.end(), a) == lb.end()) lb.push_back(a);
        }
    }
    for (auto& [c, lst] : glued_) std::sort(lst.begin(), lst.end());
}

std::vector<cell_id> tiling::all_cells() const {
    std::vector<cell_id> out;
    out.reserve(num_valid_);
    for (cell_id c = 0; c < static_cast<cell_id>(n_ * n_); ++c)
        if (valid(c)) out.push_back(c);
    return out;
}

double tiling::row_offset(int r) const {
    if (kind_ != tiling_kind::brick) return 0.0;
    return (r % 2) ? 0.5 / n_ : 0.0;
}

cell_rect tiling::footprint(cell_id c) const {
    double eps = cell_size();
    int r = row(c), cc = col(c);
    double x0 = cc * eps + row_offset(r);
    return {x0, r * eps, x0 + eps, (r + 1) * eps};
}

point tiling::center(cell_id c) const {
    cell_rect f = footprint(c);
    return {wrap01((f.x0 + f.x1) / 2), (f.y0 + f.y1) / 2};
}

double tiling::cell_diag() const { return std::sqrt(2.0) / n_; }

cell_id tiling::locate(point p) const {
    point q = surf_->canonicalize(p);
    int r = static_cast<int>(std::floor(q.y * n_));
    if (r >= n_) r = surf_->is_flat_torus() ? 0 : n_ - 1;
    if (r < 0) r = 0;
    double x = q.x - row_offset(r);
    if (surf_->is_flat_torus()) x = wrap01(x);
    int c = static_cast<int>(std::floor(x * n_));
    if (c >= n_) c = surf_->is_flat_torus() ? 0 : n_ - 1;
    if (c < 0) c = 0;
    cell_id id = at(r, c);
    if (!valid(id)) throw config_error("locate: point outside the tiled domain");
    return id;
}

cell_id tiling::wrap_square_neighbor(int r, int c, int side) const {
    // crossing the unit square boundary on a 4-sided diagram: push the edge
    // midpoint through the side gluing and step half a cell inward
    double eps = cell_size();
    double t = 0;
    switch (side) {
        case 0: t = (c + 0.5) * eps; break;          // bottom, param = x
        case 1: t = (r + 0.5) * eps; break;          // right, param = y
        case 2: t = 1 - (c + 0.5) * eps; break;      // top, param = 1-x
        case 3: t = 1 - (r + 0.5) * eps; break;      // left, param = 1-y
    }
    const side_gluing& g = surf_->gluing(side);
    double tp = g.reversed ? 1 - t : t;
    point q = surf_->side_point(g.partner, tp);
    switch (g.partner) {
        case 0: q.y += 0.5 * eps; break;
        case 1: q.x -= 0.5 * eps; break;
        case 2: q.y -= 0.5 * eps; break;
        case 3: q.x += 0.5 * eps; break;
    }
    int rr = std::clamp(static_cast<int>(std::floor(q.y * n_)), 0, n_ - 1);
    int cc = std::clamp(static_cast<int>(std::floor(q.x * n_)), 0, n_ - 1);
    return at(rr, cc);
}

void tiling::neighbors(cell_id cid, std::vector<cell_id>& out) const {
    int r = row(cid), c = col(cid);
    if (kind_ == tiling_kind::brick) {
        // 2 horizontal, 2 above, 2 below (rows shifted by half a brick)
        out.push_back(at(r, (c + 1) % n_));
        out.push_back(at(r, (c + n_ - 1) % n_));
        for (int dr : {-1, 1}) {
            int r2 = (r + dr + n_) % n_;
            int shift = (row_offset(r2) > row_offset(r)) ? 0 : -1;
            // rows differ by half a cell: overlap cols are {c+shift, c+shift+1}
            out.push_back(at(r2, (c + shift + n_) % n_));
            out.push_back(at(r2, (c + shift + 1 + n_) % n_));
        }
        return;
    }
    if (surf_->kind() == domain_kind::square) {
        // sides: 0 bottom, 1 right, 2 top, 3 left
        out.push_back(c + 1 < n_ ? at(r, c + 1) : wrap_square_neighbor(r, c, 1));
        out.push_back(c > 0 ? at(r, c - 1) : wrap_square_neighbor(r, c, 3));
        out.push_back(r + 1 < n_ ? at(r + 1, c) : wrap_square_neighbor(r, c, 2));
        out.push_back(r > 0 ? at(r - 1, c) : wrap_square_neighbor(r, c, 0));
        return;
    }
    if (c + 1 < n_ && valid(at(r, c + 1))) out.push_back(at(r, c + 1));
    if (c > 0 && valid(at(r, c - 1))) out.push_back(at(r, c - 1));
    if (r + 1 < n_ && valid(at(r + 1, c))) out.push_back(at(r + 1, c));
    if (r > 0 && valid(at(r - 1, c))) out.push_back(at(r - 1, c));
    auto it = glued_.find(cid);
    if (it != glued_.end())
        for (cell_id g : it->second) out.push_back(g);
}

bool tiling::adjacent(cell_id a, cell_id b) const {
    std::vector<cell_id> nb;
    neighbors(a, nb);
    return std::find(nb.begin(), nb.end(), b) != nb.end();
}

double tiling::distance(cell_id a, cell_id b) const {
    if (flat_) return torus_distance(center(a), center(b));
    return surf_->distance(center(a), center(b));
}

}  // namespace atlas
