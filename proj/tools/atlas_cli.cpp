#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "atlas/report.hpp"
#include "atlas/svg.hpp"

using namespace atlas;

namespace {

void write_or_print(const nlohmann::json& rep, const std::string& out) {
    if (out.empty()) {
        std::cout << rep.dump(2) << "\n";
    } else {
        std::ofstream f(out);
        if (!f) throw config_error("cannot open '" + out + "' for writing");
        f << rep.dump(2) << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"atlas: multi-resolution analysis of compacta on closed surfaces"};
    app.require_subcommand(1);

    run_config cfg;
    std::string out;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--surface", cfg.surface_word, "identification word, e.g. aba'b'");
        cmd->add_option("--tiling", cfg.tiling, "square|brick")->default_str("square");
        cmd->add_option("--level", cfg.level, "resolution level (grid 2^(level+2))")
            ->default_val(5);
        cmd->add_option("--compactum", cfg.compactum,
                        "gallery name or file:<path> (see gallery-list)")
            ->default_str("cantor_comb");
        cmd->add_option("--growth-threshold", cfg.growth_threshold,
                        "component-count threshold of the growth criterion")
            ->default_val(3);
        cmd->add_option("--growth-window", cfg.growth_window, "levels in the growth window")
            ->default_val(3);
        cmd->add_option("--null-bound", cfg.null_bound, "null-sequence component bound")
            ->default_val(32);
        cmd->add_option("--max-level", cfg.max_level, "deepest level the profiles may use")
            ->default_val(8);
        cmd->add_option("--expect", cfg.expect, "pass|fail: exit 2 when the verdict disagrees");
        cmd->add_flag("--no-timings", cfg.no_timings, "omit wall times for byte-stable reports");
        cmd->add_option("-o,--out", out, "write the JSON report here instead of stdout");
    };

    auto* analyze = app.add_subcommand("analyze", "profiles, Peano verdict, relation, atoms");
    add_common(analyze);
    analyze->add_option("--check-against", cfg.check_against,
                        "decomposition JSON; check that the atoms refine it");

    auto* push = app.add_subcommand("pushforward", "atom invariance under a torus self-cover");
    add_common(push);
    std::string cover_str;
    push->add_option("--cover", cover_str, "m,n with nonzero integers")->required();

    r3_config r3;
    auto* r3demo = app.add_subcommand("r3demo", "the [0,1]^3 decomposition suite");
    r3demo->add_option("--N", r3.teeth, "sheet parameter")->default_val(8);
    r3demo->add_option("--level", r3.level, "cube grid 2^level")->default_val(5);
    std::string lambda_str = "0.25,0.5,0.75";
    r3demo->add_option("--lambdas", lambda_str, "comma-separated values in (0,1)");
    r3demo->add_option("--svg", r3.svg_path, "write the p2 projection SVG here");
    r3demo->add_flag("--no-timings", r3.no_timings);
    r3demo->add_option("-o,--out", out);

    auto* render = app.add_subcommand("render", "SVG of the fundamental polygon with atoms");
    add_common(render);
    std::string svg_out = "atoms.svg";
    render->add_option("--svg", svg_out, "output SVG path");

    auto* list = app.add_subcommand("gallery-list", "list built-in compacta");

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& name : gallery_names()) std::cout << name << "\n";
            return 0;
        }
        if (analyze->parsed()) {
            nlohmann::json rep = cmd_analyze(cfg);
            write_or_print(rep, out);
            return exit_code_for(rep, cfg.expect);
        }
        if (push->parsed()) {
            size_t comma = cover_str.find(',');
            if (comma == std::string::npos) throw config_error("--cover expects m,n");
            cfg.cover_m = std::stoi(cover_str.substr(0, comma));
            cfg.cover_n = std::stoi(cover_str.substr(comma + 1));
            if (cfg.cover_m == 0 || cfg.cover_n == 0)
                throw config_error("cover: m,n must be nonzero");
            nlohmann::json rep = cmd_pushforward(cfg);
            write_or_print(rep, out);
            if (rep["pushforward"]["violations"].get<int>() > 0) return 2;
            return exit_code_for(rep, cfg.expect);
        }
        if (r3demo->parsed()) {
            r3.lambdas.clear();
            std::stringstream ss(lambda_str);
            std::string tok;
            while (std::getline(ss, tok, ',')) r3.lambdas.push_back(std::stod(tok));
            nlohmann::json rep = cmd_r3demo(r3);
            if (!r3.svg_path.empty())
                render_p2_projection_svg(build_K0(r3.teeth, r3.level), r3.svg_path);
            write_or_print(rep, out);
            return 0;
        }
        if (render->parsed()) {
            generator gen = resolve_compactum(cfg);
            decomposition dec =
                atoms(gen, cfg.level, atoms_params{cfg.detect(), close_params{}, f_params{}});
            render_decomposition_svg(dec, svg_out);
            std::cout << "wrote " << svg_out << "\n";
            return 0;
        }
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const resource_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
