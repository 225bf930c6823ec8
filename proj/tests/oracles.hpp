// Independent reference computations for the tests. Everything here is
// deliberately written against the raw definitions (interval arithmetic,
// plain flood fill on bitmaps) and stays independent of the library's
// implementation paths.
#ifndef ATLAS_TESTS_ORACLES_HPP
#define ATLAS_TESTS_ORACLES_HPP

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

// ternary pre-Cantor intervals at the given depth, numerators over 3^depth
inline std::vector<std::pair<std::int64_t, std::int64_t>> cantor(int depth) {
    std::vector<std::int64_t> starts{0};
    for (int d = 0; d < depth; ++d) {
        std::vector<std::int64_t> next;
        for (std::int64_t a : starts) {
            next.push_back(3 * a);
            next.push_back(3 * a + 2);
        }
        starts.swap(next);
    }
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    for (std::int64_t a : starts) out.emplace_back(a, a + 1);
    std::sort(out.begin(), out.end());
    return out;
}

// grid columns of an N-grid met by the closed interval [a,b]/den (cross
// multiplication, no floating point)
inline std::vector<int> columns_meeting(std::int64_t a, std::int64_t b, std::int64_t den, int n) {
    std::vector<int> cols;
    for (int c = 0; c < n; ++c) {
        // [c/n,(c+1)/n] meets [a/den, b/den] iff c*den <= b*n and (c+1)*den >= a*n
        if (static_cast<std::int64_t>(c) * den <= b * n &&
            static_cast<std::int64_t>(c + 1) * den >= a * n)
            cols.push_back(c);
    }
    return cols;
}

// number of maximal runs of marked columns, circular when wrap is set
inline int count_runs(const std::vector<char>& marked, bool wrap) {
    int n = static_cast<int>(marked.size());
    int runs = 0;
    for (int i = 0; i < n; ++i) {
        bool prev = marked[(i + n - 1) % n];
        if (marked[i] && (!prev || (!wrap && i == 0))) ++runs;
    }
    if (wrap && runs == 0 && n > 0 && marked[0]) runs = 1;  // everything marked
    return runs;
}

// component count of a bitmap via plain 4-neighbor flood fill; torus wrap optional
inline int bitmap_components(const std::vector<char>& bits, int w, int h, bool wrap) {
    std::vector<int> lab(bits.size(), -1);
    int count = 0;
    std::vector<int> stack;
    for (int s = 0; s < w * h; ++s) {
        if (!bits[s] || lab[s] >= 0) continue;
        ++count;
        lab[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            int cur = stack.back();
            stack.pop_back();
            int r = cur / w, c = cur % w;
            const int dr[4] = {0, 0, 1, -1}, dc[4] = {1, -1, 0, 0};
            for (int d = 0; d < 4; ++d) {
                int rr = r + dr[d], cc = c + dc[d];
                if (wrap) {
                    rr = (rr + h) % h;
                    cc = (cc + w) % w;
                } else if (rr < 0 || rr >= h || cc < 0 || cc >= w) {
                    continue;
                }
                int ns = rr * w + cc;
                if (bits[ns] && lab[ns] < 0) {
                    lab[ns] = count;
                    stack.push_back(ns);
                }
            }
        }
    }
    return count;
}

// brute-force Hausdorff distance between point lists under a metric functor
template <typename Pt, typename Metric>
double hausdorff(const std::vector<Pt>& a, const std::vector<Pt>& b, Metric m) {
    double worst = 0;
    for (const Pt& x : a) {
        double best = 1e300;
        for (const Pt& y : b) best = std::min(best, m(x, y));
        worst = std::max(worst, best);
    }
    for (const Pt& y : b) {
        double best = 1e300;
        for (const Pt& x : a) best = std::min(best, m(x, y));
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace oracle

#endif
