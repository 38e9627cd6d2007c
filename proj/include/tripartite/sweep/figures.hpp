#pragma once

// Figure pipelines: coupling and cooperativity maps, population dynamics
// and entanglement dynamics, plus the generic parameter sweep. Each returns
// its tables together with the failures destined for the sidecar report.

#include "tripartite/dynamics/lindblad.hpp"
#include "tripartite/entanglement/measures.hpp"
#include "tripartite/model/figure_presets.hpp"
#include "tripartite/model/hamiltonian.hpp"
#include "tripartite/sweep/config.hpp"
#include "tripartite/sweep/grid.hpp"
#include "tripartite/sweep/table.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace tripartite::sweep {

struct RunContext {
    RunConfig config;
    model::Constants constants;
    std::size_t workers = 1;

    static RunContext from(const RunConfig& cfg, std::optional<std::size_t> workers = std::nullopt) {
        RunContext ctx;
        ctx.config = cfg;
        ctx.constants = cfg.constants();
        ctx.workers = resolve_workers(workers ? workers : cfg.workers);
        return ctx;
    }
};

struct FigureOutput {
    std::vector<ResultTable> tables;
    std::vector<Failure> failures;
    std::size_t points = 0;  // evaluated points, the denominator for the failure fraction

    std::size_t errors() const {
        std::size_t n = 0;
        for (const auto& f : failures)
            n += f.flag ? 0 : 1;
        return n;
    }
    bool excessive() const { return excessive_failures(errors(), points); }
};

namespace detail {

inline Json snapshot_json(const model::PhysicalParams& p) {
    Json j = Json::object();
    for (const auto& [k, v] : p.snapshot())
        j[k] = v;
    return j;
}

inline Json constants_json(const model::Constants& c) {
    Json j = Json::object();
    for (const auto& [k, m] : model::Constants::fields())
        j[k] = c.*m;
    return j;
}

inline Json base_metadata(const RunContext& ctx, const std::string& command) {
    Json m;
    m["command"] = command;
    m["constants_sha256"] = ctx.constants.hash();
    m["constants"] = constants_json(ctx.constants);
    return m;
}

inline Json axis_json(const GridAxis& a) {
    return {{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}, {"scale", a.log ? "log" : "lin"}};
}

inline GridAxis axis_or(const RunConfig& cfg, const std::string& name, GridAxis fallback) {
    if (const GridAxis* a = cfg.axis(name))
        return *a;
    return fallback;
}

inline Json scenario_json(const model::ScenarioInputs& in) {
    return {{"r", in.r},           {"g0", in.g0},         {"gamma_K", in.gamma_K}, {"gamma_s", in.gamma_s},
            {"Gamma_m", in.Gamma_m}, {"kappa", in.kappa}, {"delta_NV", in.delta_NV}, {"units", "lambda = 1"}};
}

inline Json stats_json(const dynamics::Trajectory& tr) {
    return {{"accepted_steps", tr.stats.accepted},
            {"rejected_steps", tr.stats.rejected},
            {"max_trace_drift", tr.max_trace_drift}};
}

/// Linear interpolation of the first sign change of f − level along x.
inline std::optional<double> first_crossing(const std::vector<double>& x, const std::vector<double>& f,
                                            double level) {
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double a = f[i - 1] - level, b = f[i] - level;
        if (a == 0.0)
            return x[i - 1];
        if ((a < 0.0) != (b < 0.0))
            return x[i - 1] + (x[i] - x[i - 1]) * a / (a - b);
    }
    return std::nullopt;
}

} // namespace detail

/// Default grids for the coupling maps.
inline GridAxis default_r_axis() { return GridAxis{"r", 0.0, 5.0, 51, false}; }
inline GridAxis default_R_axis() { return GridAxis{"R", 20e-9, 200e-9, 61, true}; }

inline constexpr double kCouplingContourHz = 1e6;
inline constexpr double kCooperativityContour = 1.0;

inline FigureOutput run_fig2(const RunContext& ctx) {
    const model::PhysicalParams base = ctx.config.physical(ctx.constants);
    const GridAxis r_axis = detail::axis_or(ctx.config, "r", default_r_axis());
    const GridAxis R_axis = detail::axis_or(ctx.config, "R", default_R_axis());
    const auto rs = r_axis.values();
    const auto Rs = R_axis.values();
    FigureOutput out;

    Json meta = detail::base_metadata(ctx, "fig2");
    meta["preset"] = ctx.config.preset;
    meta["params"] = detail::snapshot_json(base);
    meta["axes"] = Json::array({detail::axis_json(R_axis), detail::axis_json(r_axis)});

    // Every table is a list of (R, r) points; evaluate each list in parallel.
    auto evaluate = [&](const std::string& table, const std::vector<std::pair<double, double>>& pts) {
        const auto res = run_points<model::DerivedParams>(pts.size(), ctx.workers, [&](std::size_t i) {
            model::PhysicalParams p = base;
            p.R = pts[i].first;
            p.set("r", pts[i].second);
            return model::derive_params(p, ctx.constants);
        });
        out.points += pts.size();
        for (std::size_t i = 0; i < res.size(); ++i)
            if (!res[i].ok())
                out.failures.push_back(
                    Failure{table, i, {{"R", pts[i].first}, {"r", pts[i].second}}, res[i].error});
        return res;
    };

    {
        std::vector<std::pair<double, double>> pts;
        for (double r : rs)
            pts.emplace_back(base.R, r);
        const auto res = evaluate("fig2a", pts);
        ResultTable t("fig2a", {{"r", "1"}, {"lambda_eff_over_lambda", "1"}});
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (res[i].ok())
                t.add_row({pts[i].second, res[i].value->lambda_eff / res[i].value->lambda});
        t.metadata() = meta;
        out.tables.push_back(std::move(t));
    }
    {
        std::vector<std::pair<double, double>> pts;
        for (double R : {50e-9, 100e-9, 200e-9})
            for (double r : rs)
                pts.emplace_back(R, r);
        const auto res = evaluate("fig2b", pts);
        ResultTable t("fig2b", {{"R", "m"}, {"r", "1"}, {"lambda_eff_over_g0", "1"}});
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (res[i].ok())
                t.add_row({pts[i].first, pts[i].second, res[i].value->lambda_eff / res[i].value->g0});
        t.metadata() = meta;
        out.tables.push_back(std::move(t));
    }
    {
        std::vector<std::pair<double, double>> pts;
        for (double r : {2.0, 3.0, 4.0})
            for (double R : Rs)
                pts.emplace_back(R, r);
        const auto res = evaluate("fig2c", pts);
        ResultTable t("fig2c", {{"r", "1"}, {"R", "m"}, {"lambda_eff_over_g0", "1"}});
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (res[i].ok())
                t.add_row({pts[i].second, pts[i].first, res[i].value->lambda_eff / res[i].value->g0});
        t.metadata() = meta;
        out.tables.push_back(std::move(t));
    }
    {
        std::vector<std::pair<double, double>> pts;
        for (double R : Rs)
            for (double r : rs)
                pts.emplace_back(R, r);
        const auto res = evaluate("fig2d", pts);
        for (std::size_t i = 0; i < res.size(); ++i)
            if (!res[i].ok())
                out.failures.push_back(Failure{"fig2e", i, {{"R", pts[i].first}, {"r", pts[i].second}}, res[i].error});
        out.points += pts.size();

        ResultTable d("fig2d", {{"R", "m"}, {"r", "1"}, {"lambda_eff_over_2pi", "Hz"}});
        ResultTable e("fig2e", {{"R", "m"}, {"r", "1"}, {"C", "1"}});
        ResultTable dc("fig2d_contour", {{"R", "m"}, {"r", "1"}});
        ResultTable ec("fig2e_contour", {{"R", "m"}, {"r", "1"}});
        for (std::size_t a = 0; a < Rs.size(); ++a) {
            std::vector<double> x, lam, coop;
            bool complete = true;
            for (std::size_t b = 0; b < rs.size(); ++b) {
                const auto& o = res[a * rs.size() + b];
                if (!o.ok()) {
                    complete = false;
                    continue;
                }
                const double l = o.value->lambda_eff / model::two_pi;
                d.add_row({Rs[a], rs[b], l});
                e.add_row({Rs[a], rs[b], o.value->C});
                x.push_back(rs[b]);
                lam.push_back(l);
                coop.push_back(o.value->C);
            }
            if (!complete)
                continue;
            if (auto c = detail::first_crossing(x, lam, kCouplingContourHz))
                dc.add_row({Rs[a], *c});
            if (auto c = detail::first_crossing(x, coop, kCooperativityContour))
                ec.add_row({Rs[a], *c});
        }
        for (auto* t : {&d, &e, &dc, &ec})
            t->metadata() = meta;
        dc.metadata()["level"] = kCouplingContourHz;
        ec.metadata()["level"] = kCooperativityContour;
        for (auto* t : {&d, &e, &dc, &ec})
            out.tables.push_back(std::move(*t));
    }
    return out;
}

/// Evolution problem for a λ-unit scenario in the squeezed frame, starting
/// from |e, 0, 0⟩.
inline dynamics::EvolutionSpec scenario_spec(const model::ScenarioInputs& in, const SpaceLayout& layout,
                                             std::vector<double> grid, bool pure,
                                             const dynamics::Tolerances& tol = {}) {
    const auto sc = model::make_scenario(in);
    dynamics::EvolutionSpec spec;
    spec.layout = layout;
    spec.hamiltonian = model::build_hamiltonian_squeezed(sc.rates, sc.detunings, layout);
    spec.collapse_ops = model::collapse_operators(sc.rates, model::Frame::squeezed, layout);
    const ComplexVector psi = model::fock_state(layout, true, 0, 0);
    if (pure)
        spec.initial_state = psi;
    else
        spec.initial_state = ComplexMatrix(projector(psi));
    spec.time_grid = std::move(grid);
    spec.tolerances = tol;
    return spec;
}

namespace detail {

inline dynamics::Tolerances tolerances_of(const RunConfig& cfg) {
    dynamics::Tolerances t;
    if (cfg.dynamics.rel)
        t.rel = *cfg.dynamics.rel;
    if (cfg.dynamics.abs)
        t.abs = *cfg.dynamics.abs;
    return t;
}

inline std::vector<double> time_grid_of(const RunConfig& cfg, double t_max, std::size_t samples) {
    return model::uniform_grid(cfg.dynamics.t_max.value_or(t_max), cfg.dynamics.samples.value_or(samples));
}

inline Json trajectory_metadata(const dynamics::Trajectory& tr, const dynamics::CutoffPolicy& policy) {
    return {{"cutoffs", {{"phonon", tr.phonon_cutoff}, {"magnon", tr.magnon_cutoff}}},
            {"converged", tr.converged},
            {"cutoff_difference", tr.cutoff_difference},
            {"cutoff_policy",
             {{"initial_phonon", policy.phonon},
              {"magnon", policy.magnon},
              {"growth", policy.growth},
              {"max_doublings", policy.max_doublings},
              {"tolerance", policy.tolerance}}},
            {"integration", stats_json(tr)}};
}

} // namespace detail

inline constexpr double kPopulationWindow = 20.0;
inline constexpr std::size_t kPopulationSamples = 401;
inline constexpr double kEntanglementWindow = 4.0;
inline constexpr std::size_t kEntanglementSamples = 801;

inline FigureOutput run_fig3(const RunContext& ctx, const dynamics::CutoffPolicy& policy = {}) {
    const auto grid = detail::time_grid_of(ctx.config, kPopulationWindow, kPopulationSamples);
    const auto tol = detail::tolerances_of(ctx.config);
    const auto& panels = model::population_panels();
    const auto runs = run_points<dynamics::Trajectory>(panels.size(), ctx.workers, [&](std::size_t i) {
        const auto in = model::population_inputs(panels[i].r, panels[i].gamma_K);
        return dynamics::converged_evolve(
            [&](const SpaceLayout& l) { return scenario_spec(in, l, grid, false, tol); }, policy);
    });

    FigureOutput out;
    out.points = panels.size();
    for (std::size_t i = 0; i < panels.size(); ++i) {
        const std::string name = std::string("fig3") + panels[i].id;
        const auto in = model::population_inputs(panels[i].r, panels[i].gamma_K);
        if (!runs[i].ok()) {
            out.failures.push_back(Failure{name, i, detail::scenario_json(in), runs[i].error});
            continue;
        }
        const auto& tr = *runs[i].value;
        if (!tr.converged) {
            Failure f{name, i, detail::scenario_json(in),
                      "phonon cutoff not converged: difference " + format_double(tr.cutoff_difference)};
            f.flag = true;
            out.failures.push_back(f);
        }
        ResultTable t(name, {{"t", "1/lambda"}, {"spin", "1"}, {"magnon", "1"}, {"phonon", "1"}});
        for (std::size_t k = 0; k < tr.times.size(); ++k)
            t.add_row({tr.times[k], tr.spin[k], tr.magnon[k], tr.phonon[k]});
        t.metadata() = detail::base_metadata(ctx, "fig3");
        t.metadata()["scenario"] = detail::scenario_json(in);
        t.metadata()["tolerances"] = {{"rel", tol.rel}, {"abs", tol.abs}};
        t.metadata().update(detail::trajectory_metadata(tr, policy));
        out.tables.push_back(std::move(t));
    }
    return out;
}

/// Entanglement along one decay-free trajectory.
struct EntanglementSeries {
    dynamics::Trajectory trajectory;
    std::vector<double> contangle;
    std::vector<double> three_tangle;
    std::vector<double> leaked_weight;
};

inline dynamics::Trajectory entanglement_trajectory(double r, const std::vector<double>& grid,
                                                    const dynamics::Tolerances& tol,
                                                    const dynamics::CutoffPolicy& policy) {
    const auto in = model::entanglement_inputs(r);
    return dynamics::converged_evolve(
        [&](const SpaceLayout& l) {
            auto spec = scenario_spec(in, l, grid, true, tol);
            spec.store_states = true;
            return spec;
        },
        policy);
}

inline EntanglementSeries entanglement_measures(dynamics::Trajectory tr, std::size_t workers,
                                                bool with_three_tangle) {
    EntanglementSeries s;
    s.trajectory = std::move(tr);
    const auto& t = s.trajectory;
    const SpaceLayout layout = SpaceLayout::tripartite(t.phonon_cutoff, t.magnon_cutoff);
    const auto values = run_points<double>(t.stored(), workers, [&](std::size_t k) {
        return entanglement::min_residual_contangle(t.density(k), layout);
    });
    for (const auto& v : values) {
        if (!v.ok())
            throw std::runtime_error("contangle evaluation failed: " + v.error);
        s.contangle.push_back(*v.value);
    }
    if (with_three_tangle)
        for (std::size_t k = 0; k < t.stored(); ++k) {
            const auto proj = entanglement::project_to_three_qubits(t.pure_states.at(k), layout);
            s.leaked_weight.push_back(proj.leaked_weight);
            s.three_tangle.push_back(proj.leaked_weight < 1.0 ? entanglement::three_tangle_pure(proj.amplitudes)
                                                              : 0.0);
        }
    return s;
}

inline EntanglementSeries entanglement_series(double r, const std::vector<double>& grid,
                                              const dynamics::Tolerances& tol, const dynamics::CutoffPolicy& policy,
                                              std::size_t workers, bool with_three_tangle) {
    return entanglement_measures(entanglement_trajectory(r, grid, tol, policy), workers, with_three_tangle);
}

inline constexpr double kThreeTangleSqueezing = 4.5;

inline std::string contangle_column(double r) { return "contangle_r" + format_double(r); }

inline FigureOutput run_fig4(const RunContext& ctx, const dynamics::CutoffPolicy& policy = {}) {
    const auto grid = detail::time_grid_of(ctx.config, kEntanglementWindow, kEntanglementSamples);
    const auto tol = detail::tolerances_of(ctx.config);
    const auto& rs = model::entanglement_squeezings();
    // Trajectories run concurrently; the per-time measures then use every worker.
    const auto trajectories = run_points<dynamics::Trajectory>(
        rs.size(), ctx.workers, [&](std::size_t i) { return entanglement_trajectory(rs[i], grid, tol, policy); });
    std::vector<PointOutcome<EntanglementSeries>> runs(rs.size());
    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (!trajectories[i].ok()) {
            runs[i].error = trajectories[i].error;
            continue;
        }
        try {
            runs[i].value = entanglement_measures(*trajectories[i].value, ctx.workers, rs[i] == kThreeTangleSqueezing);
        } catch (const std::exception& e) {
            runs[i].error = e.what();
        }
    }

    FigureOutput out;
    out.points = rs.size();
    Json meta = detail::base_metadata(ctx, "fig4");
    meta["tolerances"] = {{"rel", tol.rel}, {"abs", tol.abs}};
    Json per_run = Json::array();
    std::vector<Column> cols{{"t", "1/lambda"}};
    std::vector<std::size_t> good;
    for (std::size_t i = 0; i < rs.size(); ++i) {
        const auto in = model::entanglement_inputs(rs[i]);
        if (!runs[i].ok()) {
            out.failures.push_back(Failure{"fig4a", i, detail::scenario_json(in), runs[i].error});
            continue;
        }
        const auto& tr = runs[i].value->trajectory;
        if (!tr.converged) {
            Failure f{"fig4a", i, detail::scenario_json(in),
                      "phonon cutoff not converged: difference " + format_double(tr.cutoff_difference)};
            f.flag = true;
            out.failures.push_back(f);
        }
        Json run = detail::trajectory_metadata(tr, policy);
        run["scenario"] = detail::scenario_json(in);
        per_run.push_back(run);
        cols.push_back({contangle_column(rs[i]), "1"});
        good.push_back(i);
    }
    if (!good.empty()) {
        ResultTable a("fig4a", cols);
        for (std::size_t k = 0; k < grid.size(); ++k) {
            std::vector<double> row{grid[k]};
            for (std::size_t i : good)
                row.push_back(runs[i].value->contangle[k]);
            a.add_row(std::move(row));
        }
        a.metadata() = meta;
        a.metadata()["runs"] = per_run;
        out.tables.push_back(std::move(a));
    }

    for (std::size_t i = 0; i < rs.size(); ++i) {
        if (rs[i] != kThreeTangleSqueezing || !runs[i].ok())
            continue;
        const auto& s = *runs[i].value;
        ResultTable b("fig4b", {{"t", "1/lambda"},
                                {"contangle", "1"},
                                {"three_tangle", "1"},
                                {"leaked_weight", "1"},
                                {"reliable", "bool"}});
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const bool reliable = s.leaked_weight[k] <= entanglement::kLeakedWeightLimit;
            if (!reliable) {
                Failure f{"fig4b", k, {{"t", grid[k]}},
                          "three-tangle unreliable: leaked weight " + format_double(s.leaked_weight[k])};
                f.flag = true;
                out.failures.push_back(f);
            }
            b.add_row({grid[k], s.contangle[k], s.three_tangle[k], s.leaked_weight[k], reliable ? 1.0 : 0.0});
        }
        b.metadata() = meta;
        b.metadata()["scenario"] = detail::scenario_json(model::entanglement_inputs(rs[i]));
        b.metadata().update(detail::trajectory_metadata(s.trajectory, policy));
        b.metadata()["leaked_weight_limit"] = entanglement::kLeakedWeightLimit;
        out.tables.push_back(std::move(b));
    }
    return out;
}

/// Derived quantities over the configured Cartesian grid.
inline FigureOutput run_sweep(const RunContext& ctx) {
    const auto& cfg = ctx.config;
    if (cfg.axes.empty())
        throw config_error("sweep needs at least one [grid] axis");
    const std::vector<std::string> outputs =
        cfg.outputs.empty() ? std::vector<std::string>{"lambda_eff", "C"} : cfg.outputs;
    const model::PhysicalParams base = cfg.physical(ctx.constants);
    const auto points = cartesian(cfg.axes);

    const auto res = run_points<model::DerivedParams>(points.size(), ctx.workers, [&](std::size_t i) {
        model::PhysicalParams p = base;
        for (std::size_t a = 0; a < cfg.axes.size(); ++a)
            p.set(cfg.axes[a].name, points[i][a]);
        return model::derive_params(p, ctx.constants);
    });

    std::vector<Column> cols;
    for (const auto& a : cfg.axes)
        cols.push_back({a.name, model::PhysicalParams::unit_of(a.name)});
    for (const auto& o : outputs)
        cols.push_back({o, model::DerivedParams::unit_of(o)});
    ResultTable t("sweep", cols);

    FigureOutput out;
    out.points = points.size();
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!res[i].ok()) {
            Json where = Json::object();
            for (std::size_t a = 0; a < cfg.axes.size(); ++a)
                where[cfg.axes[a].name] = points[i][a];
            out.failures.push_back(Failure{"sweep", i, where, res[i].error});
            continue;
        }
        std::vector<double> row = points[i];
        for (const auto& o : outputs)
            for (const auto& [name, member] : model::DerivedParams::fields())
                if (o == name)
                    row.push_back((*res[i].value).*member);
        t.add_row(std::move(row));
    }
    Json meta = detail::base_metadata(ctx, "sweep");
    meta["preset"] = cfg.preset;
    meta["params"] = detail::snapshot_json(base);
    Json axes = Json::array();
    for (const auto& a : cfg.axes)
        axes.push_back(detail::axis_json(a));
    meta["axes"] = axes;
    t.metadata() = meta;
    out.tables.push_back(std::move(t));
    return out;
}

/// Derived parameters for the configured point, with angular rates also
/// given as ordinary frequencies.
inline Json derive_report(const RunContext& ctx) {
    const model::PhysicalParams p = ctx.config.physical(ctx.constants);
    const model::DerivedParams dp = model::derive_params(p, ctx.constants);
    Json j = detail::base_metadata(ctx, "derive");
    j["preset"] = ctx.config.preset;
    j["params"] = detail::snapshot_json(p);
    Json derived = Json::array();
    for (const auto& [name, member] : model::DerivedParams::fields()) {
        Json e = {{"name", name}, {"value", dp.*member}, {"unit", model::DerivedParams::unit_of(name)}};
        if (std::string(model::DerivedParams::unit_of(name)) == "rad/s")
            e["over_2pi_hz"] = dp.*member / model::two_pi;
        derived.push_back(e);
    }
    j["derived"] = derived;
    j["g0_over_lambda"] = dp.g0 / dp.lambda;
    return j;
}

} // namespace tripartite::sweep
