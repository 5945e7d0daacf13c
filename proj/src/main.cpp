#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "magtrace/report.hpp"

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    long threads = -1;
    long seed = -1;
    bool has_seed = false;
};

mag::RunConfig load_config(const Options& opt) {
    mag::RunConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = mag::parse_config(opt.config_path);
    } else {
        cfg = mag::config_from_json(mag::json{{"problem", mag::json::object()}});
    }
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.threads > 0) cfg.threads = static_cast<int>(opt.threads);
    if (opt.has_seed) cfg.seed = static_cast<std::uint64_t>(opt.seed);
    return cfg;
}

void write_file(const fs::path& path, const std::string& content) {
    fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

int persist(const mag::RunConfig& cfg, const mag::RunReport& rep,
            const std::string& command) {
    fs::path out(cfg.out_dir);
    write_file(out / "config.snapshot.json", mag::config_snapshot(cfg));
    write_file(out / "report.json", rep.doc.dump(2) + "\n");
    for (const auto& [rel, content] : rep.files) write_file(out / rel, content);

    std::ostringstream log;
    log << "command: " << command << "\n";
    log << "snapshot_hash: " << rep.doc.at("snapshot_hash").get<std::string>() << "\n";
    for (const auto& row : rep.doc.at("rows")) {
        mag::ReportRow r;
        r.name = row.at("name").get<std::string>();
        r.pass = row.at("pass").get<bool>();
        r.measured = row.at("measured").get<double>();
        r.tol = row.at("tol").get<double>();
        r.cmp = row.at("cmp").get<std::string>();
        r.note = row.at("note").get<std::string>();
        std::string line = mag::format_row(r);
        std::cout << line << "\n";
        log << line << "\n";
    }
    log << (rep.all_pass ? "result: PASS" : "result: FAIL") << "\n";
    write_file(out / "logs" / "run.log", log.str());
    std::cout << (rep.all_pass ? "result: PASS" : "result: FAIL") << "\n";
    std::cout << "archive: " << out.string() << "\n";
    return rep.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiclassical trace verification toolkit for magnetic Schrodinger "
                 "operators on flat tori"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    Options opt;
    app.add_option("--config", opt.config_path, "JSON configuration file")
        ->envname("MAGTRACE_CONFIG");
    app.add_option("--out", opt.out_dir, "output directory (overrides config)")
        ->envname("MAGTRACE_OUT");
    app.add_option("--threads", opt.threads, "worker threads (overrides config)")
        ->envname("MAGTRACE_THREADS");
    auto* seed_opt = app.add_option("--seed", opt.seed, "deterministic seed (overrides config)")
                         ->envname("MAGTRACE_SEED");

    app.add_subcommand("gauge-check", "transverse-gauge invariants")->fallthrough();
    app.add_subcommand("expand-check", "rescaled-operator expansion orders")->fallthrough();
    app.add_subcommand("coeffs", "analytic expansion coefficients on the grid")->fallthrough();
    app.add_subcommand("hs-check", "functional-calculus accuracy sweep")->fallthrough();
    app.add_subcommand("trace", "trace ladder without the fit")->fallthrough();
    app.add_subcommand("verify", "trace ladder, fit, and coefficient comparison")
        ->fallthrough();
    app.add_subcommand("full-report", "all checks aggregated into one report")
        ->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    opt.has_seed = seed_opt->count() > 0 || std::getenv("MAGTRACE_SEED") != nullptr;

    std::string command = app.get_subcommands().front()->get_name();
    try {
        mag::RunConfig cfg = load_config(opt);
        mag::RunReport rep;
        if (command == "gauge-check")
            rep = mag::run_gauge(cfg);
        else if (command == "expand-check")
            rep = mag::run_expand(cfg);
        else if (command == "coeffs")
            rep = mag::run_coeffs(cfg);
        else if (command == "hs-check")
            rep = mag::run_hscheck(cfg);
        else if (command == "trace")
            rep = mag::run_trace(cfg);
        else if (command == "verify")
            rep = mag::run_verify(cfg);
        else
            rep = mag::run_full(cfg);
        return persist(cfg, rep, command);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error (" << command << "): " << e.what() << "\n";
        return 3;
    }
}
