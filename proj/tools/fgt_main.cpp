#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "fgt/harness.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string format;
    int depth = 0;
    double tol = 0.0;
    long long seed = -1;
    int workers = 0;
};

fgt::RunConfig make_config(const CliOptions& opt) {
    fgt::json j = fgt::json::object();
    if (!opt.config_path.empty()) {
        std::ifstream in(opt.config_path);
        if (!in) throw fgt::config_error("cannot open config file: " + opt.config_path);
        in >> j;
    }
    // flag overrides
    if (opt.depth > 0) j["depth"]["max_word_length"] = opt.depth;
    if (opt.tol > 0.0) j["tolerances"]["quadrature"] = opt.tol;
    if (opt.seed >= 0) j["seed"] = static_cast<std::uint64_t>(opt.seed);
    if (opt.workers > 0) j["workers"] = opt.workers;
    if (!opt.out_dir.empty()) j["output"]["dir"] = opt.out_dir;
    if (!opt.format.empty()) j["output"]["format"] = opt.format;
    return fgt::parse_config(j);
}

int emit(const fgt::CommandOutcome& outcome, const fgt::RunConfig& cfg,
         const std::string& command) {
    if (cfg.format == "text") {
        std::cout << fgt::render_text_report(outcome);
    } else {
        std::cout << outcome.report.dump(2) << "\n";
    }
    if (cfg.out_dir != "." && !cfg.out_dir.empty()) {
        std::filesystem::create_directories(cfg.out_dir);
        std::ofstream out(cfg.out_dir + "/" + command + ".json");
        out << outcome.report.dump(2) << "\n";
    }
    return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuchsian group / Carleson measure toolkit"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "configuration file (JSON)");
    app.add_option("--depth", opt.depth, "override enumeration word length");
    app.add_option("--tol", opt.tol, "override quadrature tolerance");
    app.add_option("--seed", opt.seed, "override sampling seed");
    app.add_option("--workers", opt.workers, "parallel workers for query grids");
    app.add_option("--out", opt.out_dir, "output directory for reports and figures");
    app.add_option("--format", opt.format, "report format: json or text");

    auto* c_group = app.add_subcommand("group-build", "enumerate the group and summarize it");
    auto* c_carleson = app.add_subcommand("carleson", "evaluate cap integrals over a query grid");
    auto* c_thm13 = app.add_subcommand("verify-thm13",
                                       "free-edge cap bound, orbit decomposition identity, "
                                       "tile length sums");
    auto* c_sec4 = app.add_subcommand("verify-sec4",
                                      "dyadic-disk construction: cusps, areas, cap bounds, "
                                      "disk transport");
    auto* c_render = app.add_subcommand("render", "emit SVG figures");
    auto* c_denjoy = app.add_subcommand("denjoy-homogeneity", "homogeneity of a real set");

    CLI11_PARSE(app, argc, argv);

    try {
        fgt::RunConfig cfg = make_config(opt);
        fgt::CommandOutcome outcome;
        std::string name;
        if (c_group->parsed()) {
            outcome = fgt::cmd_group_build(cfg);
            name = "group-build";
        } else if (c_carleson->parsed()) {
            outcome = fgt::cmd_carleson(cfg);
            name = "carleson";
        } else if (c_thm13->parsed()) {
            outcome = fgt::cmd_verify_thm13(cfg);
            name = "verify-thm13";
        } else if (c_sec4->parsed()) {
            outcome = fgt::cmd_verify_sec4(cfg);
            name = "verify-sec4";
        } else if (c_render->parsed()) {
            outcome = fgt::cmd_render(cfg);
            name = "render";
        } else if (c_denjoy->parsed()) {
            outcome = fgt::cmd_denjoy_homogeneity(cfg);
            name = "denjoy-homogeneity";
        }
        return emit(outcome, cfg, name);
    } catch (const fgt::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
