#include "atlas/surface.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace atlas {

namespace {

constexpr double kDomainRadius = 0.45;
constexpr double kBoundaryTol = 1e-9;

struct parsed_word {
    std::vector<int> letters;
    std::vector<int> exponents;
    std::string normalized;
};

parsed_word parse_word(const std::string& word) {
    parsed_word out;
    int next_id = 0;
    int letter_ids[256];
    std::fill(std::begin(letter_ids), std::end(letter_ids), -1);
    for (size_t i = 0; i < word.size(); ++i) {
        char c = word[i];
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (!std::isalpha(static_cast<unsigned char>(c)))
            throw config_error("identification word: unexpected character '" + std::string(1, c) + "'");
        int exp = 1;
        if (i + 1 < word.size() && word[i + 1] == '\'') {
            exp = -1;
            ++i;
        }
        unsigned char uc = static_cast<unsigned char>(c);
        if (letter_ids[uc] < 0) letter_ids[uc] = next_id++;
        out.letters.push_back(letter_ids[uc]);
        out.exponents.push_back(exp);
        out.normalized += c;
        if (exp < 0) out.normalized += '\'';
    }
    if (out.letters.empty()) throw config_error("identification word is empty");
    std::vector<int> occur(next_id, 0);
    for (int l : out.letters) occur[l]++;
    for (int l = 0; l < next_id; ++l)
        if (occur[l] != 2)
            throw config_error("identification word: each label must appear exactly twice (word '" +
                               out.normalized + "')");
    return out;
}

double wrap01(double v) {
    double w = v - std::floor(v);
    if (w >= 1.0) w = 0.0;  // v was a negative epsilon short of an integer
    return w;
}

bool lex_less(point a, point b) {
    if (a.x < b.x - kBoundaryTol) return true;
    if (a.x > b.x + kBoundaryTol) return false;
    return a.y < b.y - kBoundaryTol;
}

}  // namespace

surface_diagram surface_diagram::from_word(const std::string& word) {
    parsed_word pw = parse_word(word);
    surface_diagram s;
    s.word_ = pw.normalized;
    s.letters_ = pw.letters;
    s.exponents_ = pw.exponents;
    int sides = static_cast<int>(pw.letters.size());
    s.num_labels_ = sides / 2;

    s.glue_.resize(sides);
    for (int i = 0; i < sides; ++i) {
        for (int j = 0; j < sides; ++j) {
            if (j != i && s.letters_[j] == s.letters_[i]) {
                s.glue_[i].partner = j;
                s.glue_[i].reversed = (s.exponents_[i] != s.exponents_[j]);
                s.glue_[i].orientation_reversing = (s.exponents_[i] == s.exponents_[j]);
            }
        }
    }

    s.orientable_ = true;
    for (int i = 0; i < sides; ++i)
        if (s.glue_[i].orientation_reversing) s.orientable_ = false;

    // vertex cycles: corner i is the start of side i (polygon traversed ccw)
    disjoint_sets ds(sides);
    auto tail = [&](int i) { return s.exponents_[i] > 0 ? i : (i + 1) % sides; };
    auto head = [&](int i) { return s.exponents_[i] > 0 ? (i + 1) % sides : i; };
    for (int i = 0; i < sides; ++i) {
        int j = s.glue_[i].partner;
        if (j > i) {
            ds.unite(tail(i), tail(j));
            ds.unite(head(i), head(j));
        }
    }
    int cycles = 0;
    for (int i = 0; i < sides; ++i)
        if (ds.find(i) == i) ++cycles;
    s.vertex_cycles_ = cycles;

    if (sides == 2)
        s.kind_ = domain_kind::bigon;
    else if (sides == 4)
        s.kind_ = domain_kind::square;
    else
        s.kind_ = domain_kind::polygon;

    s.flat_torus_ = sides == 4 && s.orientable_ && s.letters_[0] == s.letters_[2] &&
                    s.letters_[1] == s.letters_[3];
    return s;
}

int surface_diagram::conjectured_xi() const {
    int chi = euler_characteristic();
    if (orientable_) {
        if ((2 - chi) % 2 != 0)
            throw atlas_error("internal consistency: orientable diagram with odd 2-chi");
        return (2 - chi) / 2;
    }
    return (2 - chi) / 2 + 1;  // floor division; odd 2-chi happens (projective plane)
}

std::vector<point> surface_diagram::polygon_vertices() const {
    int n = num_sides();
    std::vector<point> v;
    if (kind_ == domain_kind::square) {
        v = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    } else if (kind_ == domain_kind::polygon) {
        for (int i = 0; i < n; ++i) {
            double a = M_PI / 2 + 2.0 * M_PI * i / n;
            v.push_back({0.5 + kDomainRadius * std::cos(a), 0.5 + kDomainRadius * std::sin(a)});
        }
    }
    return v;
}

bool surface_diagram::in_domain(point p, double tol) const {
    switch (kind_) {
        case domain_kind::square:
            return p.x >= -tol && p.x <= 1 + tol && p.y >= -tol && p.y <= 1 + tol;
        case domain_kind::bigon: {
            double dx = p.x - 0.5, dy = p.y - 0.5;
            return dx * dx + dy * dy <= (kDomainRadius + tol) * (kDomainRadius + tol);
        }
        case domain_kind::polygon: {
            auto v = polygon_vertices();
            int n = static_cast<int>(v.size());
            for (int i = 0; i < n; ++i) {
                point a = v[i], b = v[(i + 1) % n];
                double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
                if (cross < -tol) return false;
            }
            return true;
        }
    }
    return false;
}

point surface_diagram::side_point(int side, double t) const {
    if (kind_ == domain_kind::bigon) {
        // side 0: upper arc ccw from angle 0 to pi, side 1: lower arc from pi to 2pi
        double a = (side == 0 ? 0.0 : M_PI) + t * M_PI;
        return {0.5 + kDomainRadius * std::cos(a), 0.5 + kDomainRadius * std::sin(a)};
    }
    auto v = polygon_vertices();
    point a = v[side], b = v[(side + 1) % num_sides()];
    return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

// parameter of p along side, or -1 if p is not on that side
static double side_param_square(int side, point p, double tol) {
    switch (side) {
        case 0: return std::abs(p.y) <= tol ? p.x : -1;
        case 1: return std::abs(p.x - 1) <= tol ? p.y : -1;
        case 2: return std::abs(p.y - 1) <= tol ? 1 - p.x : -1;
        case 3: return std::abs(p.x) <= tol ? 1 - p.y : -1;
    }
    return -1;
}

std::vector<point> surface_diagram::identified_images(point p) const {
    std::vector<point> images{p};
    auto add = [&](point q) {
        for (const point& r : images)
            if (std::abs(r.x - q.x) <= kBoundaryTol && std::abs(r.y - q.y) <= kBoundaryTol) return;
        images.push_back(q);
    };
    auto verts = polygon_vertices();
    int n = num_sides();
    // breadth-first closure over one-side gluing steps; corners converge to
    // the full vertex cycle after at most n steps
    for (size_t k = 0; k < images.size(); ++k) {
        point q = images[k];
        for (int side = 0; side < n; ++side) {
            double t = -1;
            if (kind_ == domain_kind::square) {
                t = side_param_square(side, q, kBoundaryTol);
            } else if (kind_ == domain_kind::bigon) {
                double dx = q.x - 0.5, dy = q.y - 0.5;
                double rr = std::sqrt(dx * dx + dy * dy);
                if (std::abs(rr - kDomainRadius) <= kBoundaryTol) {
                    double ang = std::atan2(dy, dx);
                    if (ang < 0) ang += 2 * M_PI;
                    double lo = side == 0 ? 0.0 : M_PI;
                    double u = (ang - lo) / M_PI;
                    if (u >= -kBoundaryTol && u <= 1 + kBoundaryTol) t = std::clamp(u, 0.0, 1.0);
                }
            } else {
                point a = verts[side], b = verts[(side + 1) % n];
                double len2 = (b.x - a.x) * (b.x - a.x) + (b.y - a.y) * (b.y - a.y);
                double u = ((q.x - a.x) * (b.x - a.x) + (q.y - a.y) * (b.y - a.y)) / len2;
                if (u >= -kBoundaryTol && u <= 1 + kBoundaryTol) {
                    point foot = {a.x + u * (b.x - a.x), a.y + u * (b.y - a.y)};
                    double d = std::hypot(q.x - foot.x, q.y - foot.y);
                    if (d <= kBoundaryTol) t = std::clamp(u, 0.0, 1.0);
                }
            }
            if (t < 0) continue;
            const side_gluing& g = glue_[side];
            double tp = g.reversed ? 1 - t : t;
            add(side_point(g.partner, tp));
        }
        if (images.size() > static_cast<size_t>(4 * n + 4)) break;  // safety
    }
    return images;
}

point surface_diagram::canonicalize(point p) const {
    if (flat_torus_) return {wrap01(p.x), wrap01(p.y)};
    if (!in_domain(p, kBoundaryTol))
        throw config_error("canonicalize: point outside the fundamental domain");
    auto images = identified_images(p);
    point best = images[0];
    for (const point& q : images)
        if (lex_less(q, best)) best = q;
    return best;
}

double torus_distance(point p, point q) {
    double dx = std::abs(wrap01(p.x) - wrap01(q.x));
    double dy = std::abs(wrap01(p.y) - wrap01(q.y));
    dx = std::min(dx, 1 - dx);
    dy = std::min(dy, 1 - dy);
    return std::sqrt(dx * dx + dy * dy);
}

double surface_diagram::distance(point p, point q) const {
    if (flat_torus_) return torus_distance(p, q);
    auto ip = identified_images(p);
    auto iq = identified_images(q);
    double best = 1e300;
    for (const point& a : ip)
        for (const point& b : iq) best = std::min(best, std::hypot(a.x - b.x, a.y - b.y));
    return best;
}

}  // namespace atlas
