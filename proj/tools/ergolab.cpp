// ergolab: run an experiment from a JSON config and write report.json plus
// CSV tables.
//
//   ergolab list
//   ergolab run --config cfg.json [--set key=value]... [--out dir]
//
// Exit codes: 0 all certificates pass, 1 some certificate failed (report
// still written), 2 invalid configuration, 3 resource or runtime error.

#include <fstream>
#include <iostream>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ergolab/experiments.hpp"

namespace ex = ergolab::experiments;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_certificate = 1;
constexpr int exit_config = 2;
constexpr int exit_resource = 3;

int run(const std::string& config_path, const std::vector<std::string>& sets, std::string out_dir) {
    ex::experiment_config cfg;
    try {
        std::ifstream in(config_path);
        ergolab::require(static_cast<bool>(in), ergolab::errc::config_invalid, "cannot read " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        cfg = ex::experiment_config::parse(ss.str());
        for (const auto& s : sets) cfg.set(s);
    } catch (const ergolab::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_config;
    }
    if (out_dir.empty()) out_dir = cfg.output.empty() ? "ergolab_out/" + cfg.experiment : cfg.output;

    ex::experiment_report rep;
    try {
        rep = ex::run_experiment(cfg);
    } catch (const ergolab::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == ergolab::errc::config_invalid ? exit_config : exit_resource;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return exit_resource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_resource;
    }
    try {
        ex::write_report(rep, out_dir);
    } catch (const ergolab::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_resource;
    }
    std::cout << rep.id << ": " << rep.output.certificates.size() << " certificate(s), report in " << out_dir << "\n";
    for (const auto& c : rep.output.certificates) std::cout << "  " << ex::summary_line(c) << "\n";
    return rep.all_pass() ? exit_ok : exit_certificate;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ergolab experiment runner"};
    app.set_version_flag("--version", std::string(ex::tool_version));
    app.require_subcommand(1);

    auto* list = app.add_subcommand("list", "list experiment ids");
    auto* run_cmd = app.add_subcommand("run", "run an experiment");
    std::string config_path, out_dir;
    std::vector<std::string> sets;
    run_cmd->add_option("--config", config_path, "JSON config file")->required();
    run_cmd->add_option("--set", sets, "override a parameter, key=value (repeatable)");
    run_cmd->add_option("--out", out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : exit_config;
    }
    if (list->parsed()) {
        for (const auto& d : ex::registry()) std::cout << d.id << "\t" << d.summary << "\n";
        return exit_ok;
    }
    return run(config_path, sets, out_dir);
}
