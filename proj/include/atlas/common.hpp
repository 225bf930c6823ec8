#ifndef ATLAS_COMMON_HPP
#define ATLAS_COMMON_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace atlas {

using cell_id = std::uint32_t;
constexpr cell_id no_cell = static_cast<cell_id>(-1);

struct atlas_error : std::runtime_error {
    explicit atlas_error(const std::string& msg) : std::runtime_error(msg) {}
};

// bad flags, malformed words, malformed bitmaps
struct config_error : atlas_error {
    explicit config_error(const std::string& msg) : atlas_error(msg) {}
};

// level too deep, cell budget exceeded
struct resource_error : atlas_error {
    explicit resource_error(const std::string& msg) : atlas_error(msg) {}
};

struct point {
    double x = 0.0;
    double y = 0.0;
};

// Finite surrogate for "infinitely many components": counts over a level
// window must be non-decreasing, end above where they started, and reach
// the threshold at the deepest level.
struct growth_params {
    int threshold = 3;
    int window = 3;
};

inline bool growth_pass(const std::vector<int>& counts, const growth_params& gp) {
    int w = gp.window;
    if (static_cast<int>(counts.size()) < 2) return false;
    if (w > static_cast<int>(counts.size())) w = static_cast<int>(counts.size());
    size_t first = counts.size() - static_cast<size_t>(w);
    int prev = counts[first];
    for (size_t i = first + 1; i < counts.size(); ++i) {
        if (counts[i] < prev) return false;
        prev = counts[i];
    }
    return counts.back() > counts[first] && counts.back() >= gp.threshold;
}

// deterministic rng for sampled checks
struct splitmix64 {
    std::uint64_t state;
    explicit splitmix64(std::uint64_t seed = 0x5eed5eed5eed5eedULL) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    // uniform in [0, n)
    std::uint64_t below(std::uint64_t n) { return n ? next() % n : 0; }
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

struct disjoint_sets {
    std::vector<int> parent;
    explicit disjoint_sets(int n) : parent(n) {
        for (int i = 0; i < n; ++i) parent[i] = i;
    }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        if (b < a) std::swap(a, b);
        parent[b] = a;  // smaller root wins, keeps labels deterministic
        return true;
    }
};

}  // namespace atlas

#endif
