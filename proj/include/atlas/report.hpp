#ifndef ATLAS_REPORT_HPP
#define ATLAS_REPORT_HPP

#include <json.hpp>
#include <string>
#include <vector>

#include "atlas/covering.hpp"
#include "atlas/decomposition.hpp"
#include "atlas/euclid3.hpp"

namespace atlas {

inline const char* version_string() { return "0.1.0"; }

struct run_config {
    std::string surface_word;  // empty = generator's own surface
    std::string tiling = "square";
    int level = 5;
    std::string compactum = "cantor_comb";
    int growth_threshold = 3;
    int growth_window = 3;
    int null_bound = 32;
    int max_level = 8;
    int cover_m = 0, cover_n = 0;
    std::string expect;         // "", "pass" or "fail"
    std::string check_against;  // decomposition JSON for refinement checks
    bool no_timings = false;

    detect_params detect() const {
        detect_params p;
        p.growth = {growth_threshold, growth_window};
        p.max_level = max_level;
        return p;
    }
};

nlohmann::json config_json(const run_config& cfg);

generator resolve_compactum(const run_config& cfg);

// full analysis: profiles, Peano verdict, relation witnesses, atoms, quotient
nlohmann::json cmd_analyze(const run_config& cfg);

nlohmann::json cmd_pushforward(const run_config& cfg);

struct r3_config {
    int teeth = 8;
    int level = 5;
    std::vector<double> lambdas{0.25, 0.5, 0.75};
    bool no_timings = false;
    std::string svg_path;  // optional p2 projection rendering
};

nlohmann::json cmd_r3demo(const r3_config& cfg);

// decomposition file format used by --check-against
nlohmann::json decomposition_json(const decomposition& dec);
decomposition decomposition_from_json(const nlohmann::json& j, const cell_set& cells);

// 0 = ok, 2 = an --expect requirement failed
int exit_code_for(const nlohmann::json& report, const std::string& expect);

}  // namespace atlas

#endif
