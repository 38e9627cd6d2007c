#pragma once

// Physical constants and material defaults. Every number used by the
// parameter derivation comes from this table, which can be overridden from a
// flat key = value file so runs can pin constants bit-exactly.

#include "tripartite/core/digest.hpp"
#include "tripartite/core/format.hpp"
#include "tripartite/core/keyvalue.hpp"

#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace tripartite::model {

struct Constants {
    double hbar = 1.054571817e-34;          // J s
    double k_B = 1.380649e-23;              // J/K
    double mu0 = 4.0e-7 * std::numbers::pi; // T m/A
    double mu_B = 9.274e-24;                // J/T
    double g_e = 2.0028;
    double gyro_over_2pi = 28.0e9;          // |gamma|/2pi, Hz/T
    double M_s_yig = 1.96e5;                // A/m
    double rho_diamond = 3500.0;            // kg/m^3
    double rho_yig = 5170.0;                // kg/m^3

    double gamma_gyro() const { return 2.0 * std::numbers::pi * gyro_over_2pi; }

    /// (key, pointer-to-member) table, in canonical serialization order.
    static const std::vector<std::pair<const char*, double Constants::*>>& fields() {
        static const std::vector<std::pair<const char*, double Constants::*>> f = {
            {"hbar", &Constants::hbar},
            {"k_B", &Constants::k_B},
            {"mu0", &Constants::mu0},
            {"mu_B", &Constants::mu_B},
            {"g_e", &Constants::g_e},
            {"gyro_over_2pi", &Constants::gyro_over_2pi},
            {"M_s_yig", &Constants::M_s_yig},
            {"rho_diamond", &Constants::rho_diamond},
            {"rho_yig", &Constants::rho_yig},
        };
        return f;
    }

    std::string canonical_text() const {
        std::string out;
        for (const auto& [key, member] : fields())
            out += std::string(key) + "=" + format_double(this->*member) + "\n";
        return out;
    }

    std::string hash() const { return sha256_hex(canonical_text()); }

    /// Apply overrides; unknown keys and nonpositive values are rejected.
    Constants with_overrides(const kv::Document& doc) const {
        Constants c = *this;
        for (const auto& [key, value] : doc.all()) {
            bool found = false;
            for (const auto& [name, member] : fields()) {
                if (key == name) {
                    const double v = kv::parse_double(value, key);
                    if (!(v > 0.0))
                        throw config_error("constant '" + key + "' must be positive");
                    c.*member = v;
                    found = true;
                    break;
                }
            }
            if (!found)
                throw config_error("unknown constant '" + key + "'");
        }
        return c;
    }

    static Constants load_overrides(const std::string& path) {
        return Constants{}.with_overrides(kv::Document::load(path));
    }
};

} // namespace tripartite::model
