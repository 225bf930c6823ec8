#include "atlas/svg.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace atlas {

namespace {

std::string hsl_hex(double h, double sat, double light) {
    auto f = [&](double n) {
        double k = std::fmod(n + h / 30.0, 12.0);
        double a = sat * std::min(light, 1 - light);
        return light - a * std::max(-1.0, std::min({k - 3, 9 - k, 1.0}));
    };
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(f(0) * 255)),
                  static_cast<int>(std::lround(f(8) * 255)),
                  static_cast<int>(std::lround(f(4) * 255)));
    return buf;
}

}  // namespace

std::string palette_color(int class_id) {
    double hue = std::fmod(class_id * 137.508, 360.0);
    return hsl_hex(hue, 0.62, 0.55);
}

void render_decomposition_svg(const decomposition& dec, const std::string& path) {
    const tiling& t = dec.cells().grid();
    const surface_diagram& s = t.surface();
    int n = t.n();
    double px = 640.0;
    double cell = px / n;
    std::ofstream out(path);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << static_cast<int>(px + 80)
        << "\" height=\"" << static_cast<int>(px + 80) << "\" shape-rendering=\"crispEdges\">\n";
    out << "<defs><marker id=\"arr\" markerWidth=\"8\" markerHeight=\"8\" refX=\"4\" refY=\"4\" "
           "orient=\"auto\"><path d=\"M0,0 L8,4 L0,8 Z\" fill=\"#333\"/></marker></defs>\n";
    out << "<g transform=\"translate(40,40)\">\n";
    auto Y = [&](double y) { return px - y * px; };  // chart y grows upward

    std::set<int> nondeg;
    for (int k : dec.nondegenerate()) nondeg.insert(k);
    dec.cells().for_each([&](cell_id c) {
        int cls = dec.class_of(c);
        cell_rect f = t.footprint(c);
        std::string color = nondeg.count(cls) ? palette_color(cls) : "#d8d8d8";
        out << "<rect x=\"" << f.x0 * px << "\" y=\"" << Y(f.y1) << "\" width=\"" << cell
            << "\" height=\"" << cell << "\" fill=\"" << color << "\"/>\n";
    });
    // outline nondegenerate classes along edges to other classes
    std::vector<cell_id> nb;
    out << "<g stroke=\"#222\" stroke-width=\"1.2\">\n";
    for (int k : nondeg) {
        for (cell_id c : dec.class_cells(k)) {
            int r = t.row(c), cc = t.col(c);
            cell_rect f = t.footprint(c);
            auto differs = [&](int rr, int ccc) {
                if (rr < 0 || rr >= n || ccc < 0 || ccc >= n) return true;
                cell_id m = t.at(rr, ccc);
                return !t.valid(m) || dec.class_of(m) != k;
            };
            if (differs(r - 1, cc))
                out << "<line x1=\"" << f.x0 * px << "\" y1=\"" << Y(f.y0) << "\" x2=\""
                    << f.x1 * px << "\" y2=\"" << Y(f.y0) << "\"/>\n";
            if (differs(r + 1, cc))
                out << "<line x1=\"" << f.x0 * px << "\" y1=\"" << Y(f.y1) << "\" x2=\""
                    << f.x1 * px << "\" y2=\"" << Y(f.y1) << "\"/>\n";
            if (differs(r, cc - 1))
                out << "<line x1=\"" << f.x0 * px << "\" y1=\"" << Y(f.y0) << "\" x2=\""
                    << f.x0 * px << "\" y2=\"" << Y(f.y1) << "\"/>\n";
            if (differs(r, cc + 1))
                out << "<line x1=\"" << f.x1 * px << "\" y1=\"" << Y(f.y0) << "\" x2=\""
                    << f.x1 * px << "\" y2=\"" << Y(f.y1) << "\"/>\n";
        }
    }
    out << "</g>\n";

    // fundamental polygon outline with labeled identification arrows
    auto arrow = [&](point a, point b, const std::string& label, bool fwd) {
        point m1{a.x + (b.x - a.x) * 0.42, a.y + (b.y - a.y) * 0.42};
        point m2{a.x + (b.x - a.x) * 0.58, a.y + (b.y - a.y) * 0.58};
        if (!fwd) std::swap(m1, m2);
        out << "<line x1=\"" << m1.x * px << "\" y1=\"" << Y(m1.y) << "\" x2=\"" << m2.x * px
            << "\" y2=\"" << Y(m2.y) << "\" stroke=\"#333\" stroke-width=\"2\" "
               "marker-end=\"url(#arr)\"/>\n";
        point mid{(a.x + b.x) / 2, (a.y + b.y) / 2};
        point c{0.5, 0.5};
        double ox = mid.x - c.x, oy = mid.y - c.y;
        double len = std::hypot(ox, oy);
        if (len < 1e-9) len = 1;
        out << "<text x=\"" << (mid.x + 0.05 * ox / len) * px << "\" y=\""
            << Y(mid.y + 0.05 * oy / len) << "\" font-size=\"18\" text-anchor=\"middle\" "
               "font-family=\"sans-serif\">"
            << label << "</text>\n";
    };
    if (s.kind() == domain_kind::square || s.kind() == domain_kind::polygon) {
        auto verts = s.polygon_vertices();
        int sides = s.num_sides();
        out << "<g fill=\"none\" stroke=\"#333\" stroke-width=\"2\">\n<path d=\"";
        for (int i = 0; i < sides; ++i)
            out << (i ? "L" : "M") << verts[i].x * px << "," << Y(verts[i].y) << " ";
        out << "Z\"/>\n</g>\n";
        for (int i = 0; i < sides; ++i) {
            char letter = static_cast<char>('a' + s.side_letter(i));
            arrow(verts[i], verts[(i + 1) % sides], std::string(1, letter),
                  s.side_exponent(i) > 0);
        }
    } else {
        out << "<circle cx=\"" << 0.5 * px << "\" cy=\"" << Y(0.5) << "\" r=\"" << 0.45 * px
            << "\" fill=\"none\" stroke=\"#333\" stroke-width=\"2\"/>\n";
    }
    out << "</g>\n</svg>\n";
}

void render_p2_projection_svg(const cell_set3& k, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot open '" + path + "' for writing");
    int n = k.g.n;
    double px = 512.0, cell = px / n;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << static_cast<int>(px + 40)
        << "\" height=\"" << static_cast<int>(px + 40) << "\" shape-rendering=\"crispEdges\">\n";
    out << "<g transform=\"translate(20,20)\">\n";
    std::vector<std::uint8_t> shadow(static_cast<size_t>(n) * n, 0);
    for (size_t s = 0; s < k.g.size(); ++s) {
        if (!k.contains(s)) continue;
        int i1, i2, i3;
        k.g.coords(s, i1, i2, i3);
        shadow[static_cast<size_t>(i1) * n + i3] = 1;  // p2(x1, x2, x3) = (x1, x3)
    }
    for (int i1 = 0; i1 < n; ++i1)
        for (int i3 = 0; i3 < n; ++i3)
            if (shadow[static_cast<size_t>(i1) * n + i3])
                out << "<rect x=\"" << i1 * cell << "\" y=\"" << (n - 1 - i3) * cell
                    << "\" width=\"" << cell << "\" height=\"" << cell << "\" fill=\"#4a6fa5\"/>\n";
    out << "<rect x=\"0\" y=\"0\" width=\"" << px << "\" height=\"" << px
        << "\" fill=\"none\" stroke=\"#333\"/>\n";
    out << "</g>\n</svg>\n";
}

}  // namespace atlas
