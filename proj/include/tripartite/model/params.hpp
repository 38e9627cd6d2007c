#pragma once

// Physical inputs of the spin–magnon–phonon setup and the model parameters
// derived from them. All quantities are SI; frequencies and rates are
// angular (rad/s).

#include "tripartite/core/keyvalue.hpp"
#include "tripartite/model/constants.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tripartite::model {

class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr double two_pi = 2.0 * std::numbers::pi;

struct PhysicalParams {
    double R = 50e-9;             // YIG sphere radius
    double R_s = 10e-9;           // diamond particle radius
    double d = 5e-9;              // surface spacing
    double rho_diamond = Constants{}.rho_diamond;
    double rho_yig = Constants{}.rho_yig;
    double M_s = Constants{}.M_s_yig;
    double gamma_gyro = Constants{}.gamma_gyro();
    double g_e = Constants{}.g_e;
    double omega_m = two_pi * 1e3;
    double omega_p = two_pi * 200e6;
    double d_T = 100e-6;
    double Q = 1e8;
    double T = 10e-3;
    double gamma_K = two_pi * 1e6;
    double gamma_s = two_pi * 1e3;
    double delta_NV = 0.0;
    double delta_K = 0.0;
    double delta_m = two_pi * 200e6;

    // Squeezing is set either by the trap drive voltage or by a requested r.
    std::optional<double> U_T;
    std::optional<double> r_requested = 4.5;
    // Particle charge: explicit, or from a charge-to-mass ratio.
    std::optional<double> charge;
    std::optional<double> q_over_M = 1e-3;
    // Alternative platforms replace the trapped-particle mass.
    std::optional<double> mass_override;

    double r0() const { return d + R + R_s; }

    /// Numeric fields addressable by name (config files, sweep axes).
    static const std::map<std::string, double PhysicalParams::*>& numeric_fields() {
        static const std::map<std::string, double PhysicalParams::*> f = {
            {"R", &PhysicalParams::R},
            {"R_s", &PhysicalParams::R_s},
            {"d", &PhysicalParams::d},
            {"rho_diamond", &PhysicalParams::rho_diamond},
            {"rho_yig", &PhysicalParams::rho_yig},
            {"M_s", &PhysicalParams::M_s},
            {"gamma_gyro", &PhysicalParams::gamma_gyro},
            {"g_e", &PhysicalParams::g_e},
            {"omega_m", &PhysicalParams::omega_m},
            {"omega_p", &PhysicalParams::omega_p},
            {"d_T", &PhysicalParams::d_T},
            {"Q", &PhysicalParams::Q},
            {"T", &PhysicalParams::T},
            {"gamma_K", &PhysicalParams::gamma_K},
            {"gamma_s", &PhysicalParams::gamma_s},
            {"delta_NV", &PhysicalParams::delta_NV},
            {"delta_K", &PhysicalParams::delta_K},
            {"delta_m", &PhysicalParams::delta_m},
        };
        return f;
    }

    static const std::map<std::string, std::optional<double> PhysicalParams::*>& optional_fields() {
        static const std::map<std::string, std::optional<double> PhysicalParams::*> f = {
            {"U_T", &PhysicalParams::U_T},
            {"r", &PhysicalParams::r_requested},
            {"charge", &PhysicalParams::charge},
            {"q_over_M", &PhysicalParams::q_over_M},
            {"mass", &PhysicalParams::mass_override},
        };
        return f;
    }

    static const char* unit_of(const std::string& name) {
        static const std::map<std::string, const char*> u = {
            {"R", "m"},           {"R_s", "m"},           {"d", "m"},           {"rho_diamond", "kg/m^3"},
            {"rho_yig", "kg/m^3"}, {"M_s", "A/m"},         {"gamma_gyro", "rad/(s T)"}, {"g_e", "1"},
            {"omega_m", "rad/s"}, {"omega_p", "rad/s"},   {"d_T", "m"},         {"Q", "1"},
            {"T", "K"},           {"gamma_K", "rad/s"},   {"gamma_s", "rad/s"}, {"delta_NV", "rad/s"},
            {"delta_K", "rad/s"}, {"delta_m", "rad/s"},   {"U_T", "V"},         {"r", "1"},
            {"charge", "C"},      {"q_over_M", "C/kg"},   {"mass", "kg"}};
        auto it = u.find(name);
        return it == u.end() ? "" : it->second;
    }

    static bool is_field(const std::string& name) {
        return numeric_fields().count(name) || optional_fields().count(name);
    }

    /// Set a field by name. Setting U_T clears r and vice versa.
    void set(const std::string& name, double value) {
        if (auto it = numeric_fields().find(name); it != numeric_fields().end()) {
            this->*(it->second) = value;
            return;
        }
        if (auto it = optional_fields().find(name); it != optional_fields().end()) {
            this->*(it->second) = value;
            if (name == "U_T")
                r_requested.reset();
            else if (name == "r")
                U_T.reset();
            else if (name == "charge")
                q_over_M.reset();
            else if (name == "q_over_M")
                charge.reset();
            return;
        }
        throw config_error("unknown parameter '" + name + "'");
    }

    void apply(const std::map<std::string, std::string>& overrides) {
        for (const auto& [k, v] : overrides)
            set(k, kv::parse_double(v, k));
    }

    /// Ordered (name, value) snapshot of every set field.
    std::vector<std::pair<std::string, double>> snapshot() const {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& [k, m] : numeric_fields())
            out.emplace_back(k, this->*m);
        for (const auto& [k, m] : optional_fields())
            if ((this->*m).has_value())
                out.emplace_back(k, *(this->*m));
        return out;
    }
};

struct DerivedParams {
    double M = 0;           // effective mass, kg
    double V = 0;           // YIG volume, m^3
    double z_zpf = 0;       // m
    double r0 = 0;          // m
    double lambda = 0;      // tripartite coupling
    double g0 = 0;          // spin–magnon coupling
    double Omega_p = 0;     // parametric drive amplitude
    double r = 0;           // squeezing parameter
    double delta_m = 0;     // lab-frame mechanical detuning
    double Delta_m = 0;     // squeezed-frame mechanical detuning
    double lambda_eff = 0;  // lambda * e^r
    double gamma_th = 0;    // thermal mechanical decay
    double Gamma_m = 0;     // e^{2r} gamma_th
    double gamma_K = 0;
    double gamma_s = 0;
    double C = 0;           // lambda_eff^3 / (Gamma_m gamma_K gamma_s)

    static const std::vector<std::pair<const char*, double DerivedParams::*>>& fields() {
        static const std::vector<std::pair<const char*, double DerivedParams::*>> f = {
            {"M", &DerivedParams::M},
            {"V", &DerivedParams::V},
            {"z_zpf", &DerivedParams::z_zpf},
            {"r0", &DerivedParams::r0},
            {"lambda", &DerivedParams::lambda},
            {"g0", &DerivedParams::g0},
            {"Omega_p", &DerivedParams::Omega_p},
            {"r", &DerivedParams::r},
            {"delta_m", &DerivedParams::delta_m},
            {"Delta_m", &DerivedParams::Delta_m},
            {"lambda_eff", &DerivedParams::lambda_eff},
            {"gamma_th", &DerivedParams::gamma_th},
            {"Gamma_m", &DerivedParams::Gamma_m},
            {"gamma_K", &DerivedParams::gamma_K},
            {"gamma_s", &DerivedParams::gamma_s},
            {"C", &DerivedParams::C},
        };
        return f;
    }

    static const char* unit_of(const std::string& field) {
        static const std::map<std::string, const char*> u = {
            {"M", "kg"},          {"V", "m^3"},         {"z_zpf", "m"},       {"r0", "m"},
            {"lambda", "rad/s"},  {"g0", "rad/s"},      {"Omega_p", "rad/s"}, {"r", "1"},
            {"delta_m", "rad/s"}, {"Delta_m", "rad/s"}, {"lambda_eff", "rad/s"},
            {"gamma_th", "rad/s"}, {"Gamma_m", "rad/s"}, {"gamma_K", "rad/s"},
            {"gamma_s", "rad/s"}, {"C", "1"}};
        auto it = u.find(field);
        return it == u.end() ? "" : it->second;
    }
};

namespace detail {
inline void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw parameter_error(std::string("parameter '") + name + "' must be positive and finite");
}
} // namespace detail

/// Tripartite coupling rate λ for a spin at distance r0 from the centre of
/// a YIG sphere of volume V whose relative motion has mass M and frequency
/// omega_m.
inline double tripartite_coupling(const Constants& c, double g_e, double gamma_gyro, double M_s,
                                  double V, double M, double omega_m, double r0) {
    const double prefactor = 3.0 * g_e * c.mu0 * c.mu_B / (8.0 * std::numbers::pi * std::pow(r0, 4));
    return prefactor * std::sqrt(gamma_gyro * M_s * V / (M * omega_m));
}

inline DerivedParams derive_params(const PhysicalParams& p, const Constants& c = {}) {
    using detail::require_positive;
    require_positive(p.R, "R");
    require_positive(p.R_s, "R_s");
    require_positive(p.d, "d");
    require_positive(p.rho_diamond, "rho_diamond");
    require_positive(p.rho_yig, "rho_yig");
    require_positive(p.M_s, "M_s");
    require_positive(p.gamma_gyro, "gamma_gyro");
    require_positive(p.g_e, "g_e");
    require_positive(p.omega_m, "omega_m");
    require_positive(p.omega_p, "omega_p");
    require_positive(p.Q, "Q");
    require_positive(p.T, "T");
    if (p.gamma_K < 0.0 || p.gamma_s < 0.0)
        throw parameter_error("decay rates must be nonnegative");
    if (p.U_T.has_value() == p.r_requested.has_value())
        throw parameter_error("exactly one of U_T and r must set the squeezing");

    DerivedParams dp;
    dp.M = p.mass_override ? *p.mass_override
                           : 4.0 / 3.0 * std::numbers::pi * std::pow(p.R_s, 3) * p.rho_diamond;
    require_positive(dp.M, "mass");
    dp.V = 4.0 / 3.0 * std::numbers::pi * std::pow(p.R, 3);
    dp.z_zpf = std::sqrt(c.hbar / (2.0 * dp.M * p.omega_m));
    dp.r0 = p.r0();
    dp.lambda = tripartite_coupling(c, p.g_e, p.gamma_gyro, p.M_s, dp.V, dp.M, p.omega_m, dp.r0);
    dp.g0 = dp.r0 * dp.lambda / (3.0 * dp.z_zpf);

    dp.delta_m = p.delta_m;
    require_positive(p.delta_m, "delta_m");
    if (p.r_requested) {
        const double r = *p.r_requested;
        if (!(r >= 0.0 && r <= 6.0))
            throw parameter_error("squeezing parameter r must lie in [0, 6]");
        dp.r = r;
        dp.Omega_p = p.delta_m * std::tanh(2.0 * r);
    } else {
        require_positive(*p.U_T, "U_T");
        require_positive(p.d_T, "d_T");
        double q = 0.0;
        if (p.charge)
            q = *p.charge;
        else if (p.q_over_M)
            q = *p.q_over_M * dp.M;
        require_positive(q, "charge");
        dp.Omega_p = 2.0 * q * *p.U_T * dp.z_zpf * dp.z_zpf / (c.hbar * p.d_T * p.d_T);
        if (dp.Omega_p >= p.delta_m)
            throw parameter_error("drive amplitude Omega_p >= delta_m: no squeezing solution");
        dp.r = 0.5 * std::atanh(dp.Omega_p / p.delta_m);
    }
    dp.Delta_m = p.delta_m / std::cosh(2.0 * dp.r);
    dp.lambda_eff = dp.lambda * std::exp(dp.r);
    dp.gamma_th = c.k_B * p.T / (c.hbar * p.Q);
    dp.Gamma_m = std::exp(2.0 * dp.r) * dp.gamma_th;
    dp.gamma_K = p.gamma_K;
    dp.gamma_s = p.gamma_s;
    dp.C = std::pow(dp.lambda_eff, 3) / (dp.Gamma_m * dp.gamma_K * dp.gamma_s);
    return dp;
}

/// Trapped diamond nanoparticle next to a YIG sphere; material values
/// taken from the constants table.
inline PhysicalParams trapped_diamond_preset(const Constants& c = {}) {
    PhysicalParams p;
    p.rho_diamond = c.rho_diamond;
    p.rho_yig = c.rho_yig;
    p.M_s = c.M_s_yig;
    p.gamma_gyro = c.gamma_gyro();
    p.g_e = c.g_e;
    return p;
}

/// NV centre embedded in a diamond cantilever: only M and omega_m change.
inline PhysicalParams cantilever_preset(const Constants& c = {}) {
    PhysicalParams p = trapped_diamond_preset(c);
    p.mass_override = 1e-15;
    p.omega_m = two_pi * 1e6;
    return p;
}

/// YIG microsphere levitated in a magnetic trap: the moving mass is the
/// sphere itself.
inline PhysicalParams levitated_yig_preset(const Constants& c = {}) {
    PhysicalParams p = trapped_diamond_preset(c);
    p.mass_override = 4.0 / 3.0 * std::numbers::pi * std::pow(p.R, 3) * c.rho_yig;
    p.omega_m = two_pi * 1e3;
    return p;
}

inline PhysicalParams preset_by_name(const std::string& name, const Constants& c = {}) {
    if (name == "trapped_diamond")
        return trapped_diamond_preset(c);
    if (name == "cantilever")
        return cantilever_preset(c);
    if (name == "levitated_yig")
        return levitated_yig_preset(c);
    throw config_error("unknown preset '" + name + "'");
}

/// Rates of the model Hamiltonians in one consistent frequency unit.
struct ModelRates {
    double lambda = 1.0;
    double lambda_eff = 1.0;
    double g0 = 0.0;
    double r = 0.0;
    double Omega_p = 0.0;
    double gamma_K = 0.0;
    double gamma_s = 0.0;
    double gamma_th = 0.0;
    double Gamma_m = 0.0;
};

struct Detunings {
    double delta_NV = 0.0;
    double delta_K = 0.0;
    double delta_m = 0.0;  // lab frame
    double Delta_m = 0.0;  // squeezed frame
};

/// Everything divided by λ, so λ = 1 and time is measured in 1/λ.
inline ModelRates in_lambda_units(const DerivedParams& dp) {
    const double l = dp.lambda;
    return ModelRates{1.0,           dp.lambda_eff / l, dp.g0 / l,          dp.r,
                      dp.Omega_p / l, dp.gamma_K / l,   dp.gamma_s / l,     dp.gamma_th / l,
                      dp.Gamma_m / l};
}

inline Detunings detunings_in_lambda_units(const PhysicalParams& p, const DerivedParams& dp) {
    const double l = dp.lambda;
    return Detunings{p.delta_NV / l, p.delta_K / l, dp.delta_m / l, dp.Delta_m / l};
}

/// Red sideband: delta_K = delta_NV - Delta_m, selecting a b sigma^+ + h.c.
/// The lab-frame detuning follows from Delta_m = delta_m / cosh 2r.
inline Detunings red_detuning(double Delta_m, double r, double delta_NV = 0.0) {
    return Detunings{delta_NV, delta_NV - Delta_m, Delta_m * std::cosh(2.0 * r), Delta_m};
}

/// Blue sideband: delta_K = delta_NV + Delta_m, selecting a† b sigma^- + h.c.
inline Detunings blue_detuning(double Delta_m, double r, double delta_NV = 0.0) {
    return Detunings{delta_NV, delta_NV + Delta_m, Delta_m * std::cosh(2.0 * r), Delta_m};
}

} // namespace tripartite::model
