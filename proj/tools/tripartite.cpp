// Command-line entry point: figure pipelines, parameter sweeps, parameter
// derivation and the self-test.
//
// Exit codes: 0 success, 1 usage error, 2 configuration error,
// 3 too many failed points (or a failed self-test check).

#include "tripartite/sweep/config.hpp"
#include "tripartite/sweep/figures.hpp"
#include "tripartite/sweep/selftest.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace tripartite;
using namespace tripartite::sweep;

namespace {

enum Exit : int { ok = 0, usage = 1, config = 2, failures = 3 };

struct Options {
    std::string config_path;
    std::string out;
    std::optional<std::size_t> workers;
    std::optional<std::uint64_t> seed;
    bool force = false;
    bool json = false;
};

void write_file(const fs::path& path, const std::string& text) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw config_error("cannot write '" + tmp.string() + "'");
        f << text;
        if (!f)
            throw config_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

fs::path output_dir(const Options& opt, const RunConfig& cfg) {
    if (!opt.out.empty())
        return opt.out;
    if (cfg.out)
        return *cfg.out;
    return "results";
}

/// Writes every table (and the sidecar) or nothing if a target exists and
/// --force is absent.
void emit(const std::string& command, const FigureOutput& res, const fs::path& dir, const Options& opt) {
    std::vector<std::pair<fs::path, std::string>> files;
    for (const auto& t : res.tables) {
        files.emplace_back(dir / (t.name() + ".csv"), t.to_csv());
        if (opt.json)
            files.emplace_back(dir / (t.name() + ".json"), t.to_json().dump(1) + "\n");
    }
    files.emplace_back(dir / (command + ".errors.json"), failures_json(command, res.failures).dump(1) + "\n");
    if (!opt.force)
        for (const auto& [path, text] : files)
            if (fs::exists(path))
                throw config_error("refusing to overwrite '" + path.string() + "' (use --force)");
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw config_error("cannot create output directory '" + dir.string() + "': " + ec.message());
    for (const auto& [path, text] : files)
        write_file(path, text);
}

int report(const std::string& command, const FigureOutput& res, const fs::path& dir) {
    std::size_t rows = 0;
    for (const auto& t : res.tables)
        rows += t.rows().size();
    std::cout << command << ": " << res.tables.size() << " tables, " << rows << " rows, " << res.errors()
              << " failed of " << res.points << " points, " << res.failures.size() - res.errors()
              << " flags -> " << dir.string() << "\n";
    if (res.excessive()) {
        std::cerr << command << ": more than " << kMaxFailureFraction * 100 << "% of points failed; see "
                  << (dir / (command + ".errors.json")).string() << "\n";
        return Exit::failures;
    }
    return Exit::ok;
}

RunConfig load_config(const Options& opt) {
    RunConfig cfg = opt.config_path.empty() ? RunConfig{} : load_run_config(opt.config_path);
    if (opt.seed)
        cfg.seed = opt.seed;
    return cfg;
}

int run_figure(const std::string& command, const Options& opt) {
    const RunConfig cfg = load_config(opt);
    const RunContext ctx = RunContext::from(cfg, opt.workers);
    const fs::path dir = output_dir(opt, cfg);
    if (!opt.force)
        // Fail before any computation if the sidecar from an earlier run is there.
        if (fs::exists(dir / (command + ".errors.json")))
            throw config_error("refusing to overwrite results in '" + dir.string() + "' (use --force)");
    FigureOutput res;
    if (command == "fig2")
        res = run_fig2(ctx);
    else if (command == "fig3")
        res = run_fig3(ctx);
    else if (command == "fig4")
        res = run_fig4(ctx);
    else
        res = run_sweep(ctx);
    emit(command, res, dir, opt);
    return report(command, res, dir);
}

int run_derive(const Options& opt) {
    const RunConfig cfg = load_config(opt);
    const Json j = derive_report(RunContext::from(cfg, 1));
    if (opt.json) {
        std::cout << j.dump(1) << "\n";
        return Exit::ok;
    }
    std::cout << "preset " << cfg.preset << ", constants sha256 " << j["constants_sha256"].get<std::string>()
              << "\n";
    for (const auto& e : j["derived"]) {
        std::cout << "  " << e["name"].get<std::string>() << " = " << format_double(e["value"].get<double>())
                  << " " << e["unit"].get<std::string>();
        if (e.contains("over_2pi_hz"))
            std::cout << "  (2pi x " << format_double(e["over_2pi_hz"].get<double>()) << " Hz)";
        std::cout << "\n";
    }
    std::cout << "  g0/lambda = " << format_double(j["g0_over_lambda"].get<double>()) << "\n";
    return Exit::ok;
}

int run_selftest_cmd(const Options& opt) {
    const RunConfig cfg = load_config(opt);
    const std::uint64_t seed = cfg.seed.value_or(2024);
    bool all = true;
    for (const auto& c : run_selftest(seed)) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
        all = all && c.passed;
    }
    return all ? Exit::ok : Exit::failures;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spin-magnon-phonon hybrid system simulator"};
    app.require_subcommand(1);
    app.fallthrough();
    Options opt;
    std::size_t workers = 0;
    std::uint64_t seed = 0;
    app.add_option("--config", opt.config_path, "Run configuration (key = value file)")->check(CLI::ExistingFile);
    app.add_option("--out", opt.out, "Output directory");
    auto* w = app.add_option("--workers", workers, "Worker threads (default: TRIPARTITE_WORKERS or all cores)")
                  ->check(CLI::PositiveNumber);
    auto* s = app.add_option("--seed", seed, "Seed for randomized self-test inputs");
    app.add_flag("--force", opt.force, "Overwrite existing outputs");
    app.add_flag("--json", opt.json, "Also write JSON mirrors (derive: print JSON)");

    std::string command;
    for (const char* name : {"fig2", "fig3", "fig4", "sweep", "derive", "selftest"}) {
        static const std::map<std::string, std::string> help = {
            {"fig2", "Coupling enhancement and cooperativity maps"},
            {"fig3", "Population dynamics for the four decay/squeezing panels"},
            {"fig4", "Entanglement dynamics for several squeezing parameters"},
            {"sweep", "Derived parameters over the configured grid"},
            {"derive", "Report derived parameters for one configuration"},
            {"selftest", "Run the oracle and invariant checks"}};
        app.add_subcommand(name, help.at(name))->callback([&command, name] { command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Exit::ok : Exit::usage;
    }
    if (w->count())
        opt.workers = workers;
    if (s->count())
        opt.seed = seed;

    try {
        if (command == "derive")
            return run_derive(opt);
        if (command == "selftest")
            return run_selftest_cmd(opt);
        return run_figure(command, opt);
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return Exit::config;
    } catch (const model::parameter_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return Exit::config;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Exit::failures;
    }
}
