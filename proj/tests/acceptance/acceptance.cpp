// Acceptance checks, one per criterion. Each invocation prints a single
// "criterion N: PASS|FAIL ..." line and exits non-zero on failure.

#include "tripartite/core/stats.hpp"
#include "tripartite/model/params.hpp"
#include "tripartite/sweep/figures.hpp"
#include "tripartite/sweep/selftest.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

namespace fs = std::filesystem;
using namespace tripartite;
using namespace tripartite::sweep;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool passed = false;
    std::string detail;
};

class Timer {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string sci(double v) { return format_double(v); }

double max_of(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

const ResultTable& table_named(const FigureOutput& fig, const std::string& name) {
    for (const auto& t : fig.tables)
        if (t.name() == name)
            return t;
    throw std::runtime_error("missing table " + name);
}

std::string runtime_note(double seconds, double limit) {
    std::ostringstream os;
    os.precision(3);
    os << "runtime " << seconds << " s (limit " << limit << " s)";
    return os.str();
}

Outcome enhancement_law() {
    const Timer timer;
    double worst = 0.0;
    for (double r : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0}) {
        model::PhysicalParams p = model::trapped_diamond_preset();
        p.set("r", r);
        const auto dp = model::derive_params(p);
        worst = std::max(worst, std::abs(dp.lambda_eff / dp.lambda - std::exp(r)) / std::exp(r));
    }
    const FigureOutput fig = run_fig2(RunContext::from(RunConfig{}, 1));
    const auto& a = table_named(fig, "fig2a");
    const auto rs = a.column("r");
    const auto ratio = a.column("lambda_eff_over_lambda");
    std::size_t matched = 0;
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (double r : {0.0, 1.0, 2.0, 3.0, 4.0, 5.0})
            if (std::abs(rs[i] - r) < 1e-9) {
                worst = std::max(worst, std::abs(ratio[i] - std::exp(rs[i])) / std::exp(rs[i]));
                ++matched;
            }
    const double secs = timer.seconds();
    return {worst <= 1e-12 && matched == 6 && secs < 1.0,
            "max rel err " + sci(worst) + " over derive and " + std::to_string(matched) + " table rows, " +
                runtime_note(secs, 1.0)};
}

Outcome experimental_point() {
    const Timer timer;
    model::PhysicalParams p = model::trapped_diamond_preset();
    p.R_s = 10e-9;
    p.R = 50e-9;
    p.d = 5e-9;
    p.omega_m = 2 * pi * 1e3;
    p.Q = 1e8;
    p.T = 10e-3;
    p.set("r", 4.5);
    const auto dp = model::derive_params(p);
    const double lambda_eff_hz = dp.lambda_eff / (2 * pi);
    const double ratio = dp.g0 / dp.lambda;
    const double gamma_th_hz = dp.gamma_th / (2 * pi);
    const double Gamma_m_hz = dp.Gamma_m / (2 * pi);
    std::vector<std::pair<std::string, bool>> parts = {
        {"lambda_eff/2pi=" + sci(lambda_eff_hz) + " Hz", std::abs(lambda_eff_hz - 1.7e6) <= 0.3 * 1.7e6},
        {"g0/lambda=" + sci(ratio), std::abs(ratio - 30.0) <= 3.0},
        {"gamma_th/2pi=" + sci(gamma_th_hz) + " Hz", std::abs(gamma_th_hz - 2.0) <= 0.2},
        {"Gamma_m/2pi=" + sci(Gamma_m_hz) + " Hz", Gamma_m_hz >= 21e3 / 2 && Gamma_m_hz <= 21e3 * 2},
        {"C=" + sci(dp.C), dp.C >= 1e5 / 3 && dp.C <= 3e5},
    };
    const double secs = timer.seconds();
    bool ok = secs < 1.0;
    std::string detail;
    for (const auto& [text, pass] : parts) {
        detail += text + (pass ? " ok; " : " OUT OF RANGE; ");
        ok = ok && pass;
    }
    return {ok, detail + runtime_note(secs, 1.0)};
}

dynamics::Trajectory population_run(double r, double gamma_K, const std::vector<double>& grid) {
    const auto in = model::population_inputs(r, gamma_K);
    return dynamics::converged_evolve([&](const SpaceLayout& l) { return scenario_spec(in, l, grid, false); },
                                      dynamics::CutoffPolicy{});
}

Outcome no_squeezing_regime() {
    const Timer timer;
    const auto window = population_run(0.0, 5.0, model::uniform_grid(kPopulationWindow, kPopulationSamples));
    const double phonon_max = max_of(window.phonon);

    // Period from spin maxima on a fine grid over the first few oscillations.
    const auto in = model::population_inputs(0.0, 5.0);
    const auto layout = SpaceLayout::tripartite(window.phonon_cutoff, window.magnon_cutoff);
    const auto fine = dynamics::evolve(scenario_spec(in, layout, model::uniform_grid(1.5, 6001), false));
    std::vector<double> peaks;
    for (std::size_t i = 1; i + 1 < fine.times.size(); ++i)
        if (fine.spin[i] > fine.spin[i - 1] && fine.spin[i] >= fine.spin[i + 1])
            peaks.push_back(fine.times[i]);
    const double g0 = in.g0;
    const double target = pi / g0;
    const auto sc = model::make_scenario(in);
    const double delta = sc.detunings.delta_NV - sc.detunings.delta_K;
    const double jc = 2 * pi / std::sqrt(4 * g0 * g0 + delta * delta);
    const double period =
        peaks.size() >= 2 ? (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1) : 0.0;
    const double secs = timer.seconds();
    const bool ok = phonon_max < 0.02 && peaks.size() >= 5 && std::abs(period - target) <= 0.05 * target &&
                    secs < 60.0;
    return {ok, "max phonon " + sci(phonon_max) + " (cutoff " + std::to_string(window.phonon_cutoff) +
                    "), period " + sci(period) + " vs pi/g0 " + sci(target) + " (JC oracle " + sci(jc) + ", " +
                    std::to_string(peaks.size()) + " peaks), " + runtime_note(secs, 60.0)};
}

Outcome tripartite_dominance() {
    const Timer timer;
    const auto grid = model::uniform_grid(kPopulationWindow, kPopulationSamples);
    const auto squeezed = population_run(4.5, 50.0, grid);
    const auto plain = population_run(0.0, 50.0, grid);
    const double secs = timer.seconds();
    const double hi = max_of(squeezed.phonon), lo = max_of(plain.phonon);
    const bool ok = hi > 0.1 && lo < 0.02 && squeezed.converged && plain.converged && secs < 300.0;
    return {ok, "max phonon r=4.5: " + sci(hi) + " (cutoff " + std::to_string(squeezed.phonon_cutoff) +
                    (squeezed.converged ? ", converged" : ", NOT converged") + "), r=0: " + sci(lo) + " (cutoff " +
                    std::to_string(plain.phonon_cutoff) + (plain.converged ? ", converged" : ", NOT converged") +
                    "), " + runtime_note(secs, 300.0)};
}

Outcome entanglement_ordering() {
    const Timer timer;
    const FigureOutput fig = run_fig4(RunContext::from(RunConfig{}, 1));
    const auto& a = table_named(fig, "fig4a");
    const auto& b = table_named(fig, "fig4b");
    std::vector<double> peaks;
    std::string detail = "peaks";
    for (double r : model::entanglement_squeezings()) {
        peaks.push_back(max_of(a.column(contangle_column(r))));
        detail += " r=" + format_double(r) + ":" + sci(peaks.back());
    }
    const double r0_max = peaks.front();
    bool ordered = true;
    for (std::size_t i = 1; i < peaks.size(); ++i)
        ordered = ordered && peaks[i] > peaks[i - 1];
    const double rho = pearson(b.column("contangle"), b.column("three_tangle"));
    const double secs = timer.seconds();
    const bool ok = r0_max < 0.02 && ordered && rho > 0.8 && secs < 600.0;
    return {ok, detail + (ordered ? " (strictly increasing)" : " (NOT ordered)") + ", r=0 max " + sci(r0_max) +
                    ", Pearson at r=4.5 " + sci(rho) + ", " + runtime_note(secs, 600.0)};
}

Outcome oracle_suite() {
    const Timer timer;
    bool ok = true;
    std::string detail;
    for (const auto& c : run_selftest(2024)) {
        ok = ok && c.passed;
        detail += (c.passed ? "[ok] " : "[FAIL] ") + c.name + ": " + c.detail + "; ";
    }
    const double secs = timer.seconds();
    return {ok && secs < 120.0, detail + runtime_note(secs, 120.0)};
}

std::string read_body(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::string line, body;
    while (std::getline(f, line))
        if (line.empty() || line.front() != '#')
            body += line + "\n";
    return body;
}

std::map<std::string, std::string> csv_bodies(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".csv")
            out[e.path().filename().string()] = read_body(e.path());
    return out;
}

Outcome determinism(const std::string& cli) {
    if (cli.empty() || !fs::exists(cli))
        return {false, "command-line tool not found at '" + cli + "'"};
    const fs::path root = fs::temp_directory_path() / ("tripartite-acceptance-" + std::to_string(::getpid()));
    fs::remove_all(root);
    bool ok = true;
    std::string detail;
    for (const std::string cmd : {"fig2", "fig3", "fig4"}) {
        std::vector<std::map<std::string, std::string>> runs;
        for (const auto& [tag, workers] : std::vector<std::pair<std::string, int>>{{"w1", 1}, {"w1b", 1}, {"w3", 3}}) {
            const fs::path dir = root / cmd / tag;
            const std::string line = "\"" + cli + "\" " + cmd + " --out \"" + dir.string() + "\" --workers " +
                                     std::to_string(workers) + " > /dev/null";
            if (std::system(line.c_str()) != 0) {
                ok = false;
                detail += cmd + " run " + tag + " failed; ";
                continue;
            }
            runs.push_back(csv_bodies(dir));
        }
        const bool same = runs.size() == 3 && !runs[0].empty() && runs[0] == runs[1] && runs[0] == runs[2];
        ok = ok && same;
        detail += cmd + " " + std::to_string(runs.empty() ? 0 : runs[0].size()) + " tables " +
                  (same ? "identical" : "DIFFER") + "; ";
    }
    fs::remove_all(root);
    return {ok, detail + "runs: workers 1, workers 1 again, workers 3"};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int criterion = 0;
    std::string cli;
    app.add_option("--criterion", criterion, "Criterion number")->required()->check(CLI::Range(1, 7));
    app.add_option("--cli", cli, "Path to the command-line tool (criterion 7)");
    CLI11_PARSE(app, argc, argv);

    const std::map<int, std::pair<std::string, std::function<Outcome()>>> table = {
        {1, {"enhancement law", enhancement_law}},
        {2, {"experimental-point chain", experimental_point}},
        {3, {"no-squeezing population regime", no_squeezing_regime}},
        {4, {"tripartite channel dominance", tripartite_dominance}},
        {5, {"entanglement ordering and correlation", entanglement_ordering}},
        {6, {"oracle suite", oracle_suite}},
        {7, {"determinism", [&] { return determinism(cli); }}},
    };
    const auto& [name, check] = table.at(criterion);
    Outcome o;
    try {
        o = check();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    std::cout << "criterion " << criterion << ": " << (o.passed ? "PASS" : "FAIL") << " " << name << " | "
              << o.detail << std::endl;
    return o.passed ? 0 : 1;
}
