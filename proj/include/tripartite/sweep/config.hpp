#pragma once

// Run configuration read from a flat key = value file:
//
//   preset = trapped_diamond
//   constants = path/to/constants.txt
//   outputs = lambda_eff, C
//   [params]   R = 50e-9
//   [grid]     r = 0, 5, 51, lin
//   [dynamics] t_max = 20, samples = 401, rel = 1e-8, abs = 1e-10
//   [run]      out = results, workers = 4, seed = 7
//
// Grid axes are applied in alphabetical order of their names, the last one
// varying fastest.

#include "tripartite/core/keyvalue.hpp"
#include "tripartite/model/constants.hpp"
#include "tripartite/model/params.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tripartite::sweep {

struct GridAxis {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;
    bool log = false;

    std::vector<double> values() const {
        std::vector<double> v(count);
        if (count == 1) {
            v[0] = min;
            return v;
        }
        for (std::size_t i = 0; i < count; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(count - 1);
            v[i] = log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min))) : min + f * (max - min);
        }
        v.back() = max;
        return v;
    }

    /// "min, max, count, lin|log"
    static GridAxis parse(const std::string& name, const std::string& text) {
        const auto parts = kv::split(text, ',');
        if (parts.size() != 4)
            throw config_error("grid axis '" + name + "': expected 'min, max, count, lin|log'");
        GridAxis a;
        a.name = name;
        a.min = kv::parse_double(parts[0], name + ".min");
        a.max = kv::parse_double(parts[1], name + ".max");
        const double c = kv::parse_double(parts[2], name + ".count");
        if (!(c >= 1.0) || c != std::floor(c) || c > 1e6)
            throw config_error("grid axis '" + name + "': count must be a positive integer");
        a.count = static_cast<std::size_t>(c);
        if (parts[3] == "log")
            a.log = true;
        else if (parts[3] != "lin")
            throw config_error("grid axis '" + name + "': scale must be 'lin' or 'log'");
        a.validate();
        return a;
    }

    void validate() const {
        if (!model::PhysicalParams::is_field(name))
            throw config_error("grid axis '" + name + "' is not a parameter name");
        if (!std::isfinite(min) || !std::isfinite(max))
            throw config_error("grid axis '" + name + "': bounds must be finite");
        if (count >= 2 && !(max > min))
            throw config_error("grid axis '" + name + "': max must exceed min");
        if (log && !(min > 0.0))
            throw config_error("grid axis '" + name + "': log scale needs min > 0");
    }
};

struct DynamicsSettings {
    std::optional<double> t_max;
    std::optional<std::size_t> samples;
    std::optional<double> rel;
    std::optional<double> abs;
};

struct RunConfig {
    std::string preset = "trapped_diamond";
    std::map<std::string, std::string> params;
    std::vector<GridAxis> axes;
    std::vector<std::string> outputs;
    DynamicsSettings dynamics;
    std::optional<std::string> constants_file;
    std::optional<std::string> out;
    std::optional<std::size_t> workers;
    std::optional<std::uint64_t> seed;

    model::Constants constants() const {
        return constants_file ? model::Constants::load_overrides(*constants_file) : model::Constants{};
    }

    model::PhysicalParams physical(const model::Constants& c) const {
        model::PhysicalParams p = model::preset_by_name(preset, c);
        p.apply(params);
        return p;
    }

    const GridAxis* axis(const std::string& name) const {
        for (const auto& a : axes)
            if (a.name == name)
                return &a;
        return nullptr;
    }
};

namespace detail {

inline std::size_t parse_count(const std::string& text, const std::string& key) {
    const double v = kv::parse_double(text, key);
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e9)
        throw config_error("'" + key + "' must be a positive integer");
    return static_cast<std::size_t>(v);
}

} // namespace detail

inline RunConfig parse_run_config(const kv::Document& doc) {
    RunConfig cfg;
    static const std::vector<std::string> sections = {"params.", "grid.", "dynamics.", "run."};
    static const std::vector<std::string> top = {"preset", "constants", "outputs"};
    for (const auto& [key, value] : doc.all()) {
        bool known = std::find(top.begin(), top.end(), key) != top.end();
        for (const auto& s : sections)
            known = known || key.rfind(s, 0) == 0;
        if (!known)
            throw config_error("unknown configuration key '" + key + "'");
    }
    if (auto v = doc.get("preset"))
        cfg.preset = *v;
    model::preset_by_name(cfg.preset);
    if (auto v = doc.get("constants"))
        cfg.constants_file = *v;
    if (auto v = doc.get("outputs")) {
        for (const auto& name : kv::split(*v, ',')) {
            bool ok = false;
            for (const auto& [field, member] : model::DerivedParams::fields())
                ok = ok || name == field;
            if (!ok)
                throw config_error("unknown output '" + name + "'");
            cfg.outputs.push_back(name);
        }
    }
    cfg.params = doc.section("params");
    model::PhysicalParams probe;
    probe.apply(cfg.params);
    for (const auto& [name, text] : doc.section("grid"))
        cfg.axes.push_back(GridAxis::parse(name, text));

    const auto dyn = doc.section("dynamics");
    for (const auto& [k, v] : dyn) {
        if (k == "t_max")
            cfg.dynamics.t_max = kv::parse_double(v, "dynamics.t_max");
        else if (k == "samples")
            cfg.dynamics.samples = detail::parse_count(v, "dynamics.samples");
        else if (k == "rel")
            cfg.dynamics.rel = kv::parse_double(v, "dynamics.rel");
        else if (k == "abs")
            cfg.dynamics.abs = kv::parse_double(v, "dynamics.abs");
        else
            throw config_error("unknown dynamics setting '" + k + "'");
    }
    if (cfg.dynamics.t_max && !(*cfg.dynamics.t_max > 0.0))
        throw config_error("dynamics.t_max must be positive");
    if (cfg.dynamics.samples && *cfg.dynamics.samples < 2)
        throw config_error("dynamics.samples must be at least 2");
    if ((cfg.dynamics.rel && !(*cfg.dynamics.rel > 0.0)) || (cfg.dynamics.abs && !(*cfg.dynamics.abs > 0.0)))
        throw config_error("dynamics tolerances must be positive");

    for (const auto& [k, v] : doc.section("run")) {
        if (k == "out")
            cfg.out = v;
        else if (k == "workers")
            cfg.workers = detail::parse_count(v, "run.workers");
        else if (k == "seed") {
            const double s = kv::parse_double(v, "run.seed");
            if (!(s >= 0.0) || s != std::floor(s) || s > 9.0e15)
                throw config_error("run.seed must be a nonnegative integer");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else
            throw config_error("unknown run setting '" + k + "'");
    }
    return cfg;
}

inline RunConfig load_run_config(const std::string& path) { return parse_run_config(kv::Document::load(path)); }

} // namespace tripartite::sweep
