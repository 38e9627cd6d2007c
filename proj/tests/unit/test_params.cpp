#include "support/generators.hpp"
#include "tripartite/model/params.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tripartite;
using namespace tripartite::model;

namespace {

constexpr double pi = 3.14159265358979323846;

PhysicalParams experimental_point() {
    PhysicalParams p;
    p.R_s = 10e-9;
    p.R = 50e-9;
    p.d = 5e-9;
    p.omega_m = 2 * pi * 1e3;
    p.Q = 1e8;
    p.T = 10e-3;
    p.gamma_K = 2 * pi * 1e6;
    p.gamma_s = 2 * pi * 1e3;
    p.set("r", 4.5);
    return p;
}

// Long-hand evaluation of the coupling rate from raw SI numbers.
double oracle_lambda(double R, double R_s, double d, double omega_m) {
    const double mu0 = 4e-7 * pi, muB = 9.274e-24, ge = 2.0028;
    const double gamma = 2 * pi * 28e9, Ms = 1.96e5;
    const double V = 4.0 / 3.0 * pi * R * R * R;
    const double M = 4.0 / 3.0 * pi * R_s * R_s * R_s * 3500.0;
    const double r0 = d + R + R_s;
    return 3 * ge * mu0 * muB / (8 * pi * r0 * r0 * r0 * r0) * std::sqrt(gamma * Ms * V / (M * omega_m));
}

double fitted_slope(const std::vector<double>& radii, double r) {
    std::vector<double> x, y;
    for (double R : radii) {
        PhysicalParams p = experimental_point();
        p.R = R;
        p.set("r", r);
        x.push_back(std::log(R));
        y.push_back(std::log(derive_params(p).lambda_eff));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / static_cast<double>(x.size());
        my += y[i] / static_cast<double>(x.size());
    }
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / sxx;
}

} // namespace

TEST(DeriveParams, CouplingMatchesLongHandOracle) {
    const auto dp = derive_params(experimental_point());
    const double oracle = oracle_lambda(50e-9, 10e-9, 5e-9, 2 * pi * 1e3);
    EXPECT_NEAR(dp.lambda / oracle, 1.0, 1e-12);
    EXPECT_NEAR(dp.M, 4.0 / 3.0 * pi * 1e-24 * 3500.0, 1e-36);
    EXPECT_NEAR(dp.z_zpf, std::sqrt(1.054571817e-34 / (2 * dp.M * 2 * pi * 1e3)), 1e-22);
}

TEST(DeriveParams, EnhancedCouplingNearQuotedValue) {
    const auto dp = derive_params(experimental_point());
    const double f = dp.lambda_eff / (2 * pi);
    EXPECT_NEAR(f, 1.7e6, 0.3 * 1.7e6) << "lambda_eff/2pi = " << f << " Hz";
}

TEST(DeriveParams, SpinMagnonRatioNearThirty) {
    const auto dp = derive_params(experimental_point());
    EXPECT_NEAR(dp.g0 / dp.lambda, 30.0, 3.0);
    EXPECT_NEAR(dp.g0 / dp.lambda, dp.r0 / (3.0 * dp.z_zpf), 1e-12 * dp.g0 / dp.lambda);
}

TEST(DeriveParams, CooperativityWithinFactorThree) {
    const auto dp = derive_params(experimental_point());
    EXPECT_GT(dp.C, 1e5 / 3.0);
    EXPECT_LT(dp.C, 3e5);
}

TEST(DeriveParams, ThermalDecay) {
    const auto dp = derive_params(experimental_point());
    EXPECT_NEAR(dp.gamma_th / (2 * pi), 1.380649e-23 * 10e-3 / (2 * pi * 1.054571817e-34 * 1e8), 1e-12);
    EXPECT_NEAR(dp.gamma_th / (2 * pi), 2.0, 0.2);
    EXPECT_GT(dp.Gamma_m / (2 * pi), 21e3 / 2);
    EXPECT_LT(dp.Gamma_m / (2 * pi), 21e3 * 2);
}

TEST(DeriveParams, NoSqueezing) {
    PhysicalParams p = experimental_point();
    p.set("r", 0.0);
    const auto dp = derive_params(p);
    EXPECT_EQ(dp.lambda_eff, dp.lambda);
    EXPECT_EQ(dp.Gamma_m, dp.gamma_th);
    EXPECT_EQ(dp.Delta_m, p.delta_m);
    EXPECT_EQ(dp.Omega_p, 0.0);
}

TEST(DeriveParams, RatioIdentity) {
    for (double r : {0.0, 1.0, 2.5, 4.5, 6.0}) {
        PhysicalParams p = experimental_point();
        p.set("r", r);
        const auto dp = derive_params(p);
        const double expected = 3.0 * std::exp(r) * dp.z_zpf / (p.d + p.R + p.R_s);
        EXPECT_NEAR(dp.lambda_eff / dp.g0, expected, 1e-13 * expected);
    }
}

TEST(DeriveParams, DriveVoltagePath) {
    PhysicalParams p = experimental_point();
    p.set("U_T", 100.0);
    p.set("charge", 1e-20);
    p.delta_m = 2e6;
    const auto dp = derive_params(p);
    const double expected = 2.0 * 1e-20 * 100.0 * dp.z_zpf * dp.z_zpf / (1.054571817e-34 * p.d_T * p.d_T);
    EXPECT_NEAR(dp.Omega_p / expected, 1.0, 1e-14);
    ASSERT_LT(dp.Omega_p, p.delta_m);
    EXPECT_NEAR(std::tanh(2.0 * dp.r), dp.Omega_p / p.delta_m, 1e-12);
    EXPECT_NEAR(dp.Delta_m, p.delta_m / std::cosh(2.0 * dp.r), 1e-15);
}

TEST(DeriveParams, ChargeFromRatio) {
    PhysicalParams p = experimental_point();
    p.set("U_T", 100.0);
    p.set("q_over_M", 1e-3);
    p.delta_m = 1e4;
    const auto dp = derive_params(p);
    const double q = 1e-3 * dp.M;
    EXPECT_NEAR(dp.Omega_p, 2.0 * q * 100.0 * dp.z_zpf * dp.z_zpf / (1.054571817e-34 * p.d_T * p.d_T),
                1e-12 * dp.Omega_p);
}

TEST(DeriveParams, OverdrivenTrapHasNoSqueezingSolution) {
    PhysicalParams p = experimental_point();
    p.set("U_T", 100.0);
    p.set("charge", 1e-20);
    p.delta_m = 1e3;
    EXPECT_THROW(derive_params(p), parameter_error);
}

TEST(DeriveParams, RejectsInvalidInputs) {
    for (const char* key : {"R", "R_s", "d", "omega_m", "Q", "T", "M_s", "delta_m"}) {
        PhysicalParams p = experimental_point();
        p.set(key, 0.0);
        EXPECT_THROW(derive_params(p), parameter_error) << key;
        p.set(key, -1.0);
        EXPECT_THROW(derive_params(p), parameter_error) << key;
    }
    PhysicalParams p = experimental_point();
    p.gamma_K = -1.0;
    EXPECT_THROW(derive_params(p), parameter_error);

    p = experimental_point();
    p.set("r", 6.5);
    EXPECT_THROW(derive_params(p), parameter_error);
    p.set("r", -0.1);
    EXPECT_THROW(derive_params(p), parameter_error);

    p = experimental_point();
    p.U_T = 1.0;  // bypassing set(): both squeezing sources present
    EXPECT_THROW(derive_params(p), parameter_error);
    p.U_T.reset();
    p.r_requested.reset();
    EXPECT_THROW(derive_params(p), parameter_error);
}

TEST(DeriveParams, InvariantsOnRandomInputs) {
    testgen::Gen g(41);
    for (int trial = 0; trial < 200; ++trial) {
        PhysicalParams p;
        p.R = g.uniform(20e-9, 500e-9);
        p.R_s = g.uniform(5e-9, 50e-9);
        p.d = g.uniform(1e-9, 50e-9);
        p.omega_m = 2 * pi * g.uniform(1e2, 1e6);
        p.Q = g.uniform(1e4, 1e9);
        p.T = g.uniform(1e-3, 1.0);
        p.gamma_K = 2 * pi * g.uniform(1e3, 1e7);
        p.gamma_s = 2 * pi * g.uniform(1e2, 1e5);
        p.delta_m = 2 * pi * g.uniform(1e6, 1e9);
        p.set("r", g.uniform(0.0, 6.0));
        const auto dp = derive_params(p);
        EXPECT_EQ(dp.lambda_eff, dp.lambda * std::exp(dp.r));
        EXPECT_EQ(dp.Delta_m, p.delta_m / std::cosh(2.0 * dp.r));
        EXPECT_EQ(dp.Gamma_m, std::exp(2.0 * dp.r) * dp.gamma_th);
        EXPECT_EQ(dp.C, std::pow(dp.lambda_eff, 3) / (dp.Gamma_m * dp.gamma_K * dp.gamma_s));
        EXPECT_NEAR(std::tanh(2.0 * dp.r), dp.Omega_p / p.delta_m, 1e-12);
        EXPECT_GT(dp.r0, p.R);
    }
}

// Stated property: fitted log-log slope of λ_eff against R over {50, 100, 200} nm
// lies in [−2.6, −2.3].
TEST(ScalingLaw, StatedSlopeOverNanometreRadii) {
    const double s = fitted_slope({50e-9, 100e-9, 200e-9}, 4.5);
    EXPECT_GE(s, -2.6) << "slope " << s;
    EXPECT_LE(s, -2.3) << "slope " << s;
}

TEST(ScalingLaw, LocalSlopeMatchesAnalyticForm) {
    // d ln λ / d ln R = 3/2 − 4R/r0 at fixed d and R_s.
    for (double R : {20e-9, 50e-9, 100e-9, 200e-9, 1e-6}) {
        const double h = 1e-4;
        const double s = fitted_slope({R * std::exp(-h), R * std::exp(h)}, 2.0);
        const double r0 = 5e-9 + R + 10e-9;
        EXPECT_NEAR(s, 1.5 - 4.0 * R / r0, 1e-6) << "R=" << R;
    }
}

TEST(ScalingLaw, AsymptoticFiveHalvesRegime) {
    const double s = fitted_slope({1e-6, 2e-6, 4e-6}, 4.5);
    EXPECT_GE(s, -2.6);
    EXPECT_LE(s, -2.3);
}

TEST(ScalingLaw, MonotoneInRadiusAboveTurnover) {
    // λ rises for R < 3·(d+R_s)/5 and falls beyond it.
    double prev = 0.0;
    for (double R = 20e-9; R <= 200e-9; R *= 1.1) {
        PhysicalParams p = experimental_point();
        p.R = R;
        const double l = derive_params(p).lambda_eff;
        if (prev > 0.0) {
            EXPECT_LT(l, prev) << "R=" << R;
        }
        prev = l;
    }
}

TEST(Presets, AlternativePlatformsChangeOnlyMassAndFrequency) {
    const auto base = trapped_diamond_preset();
    const auto cant = cantilever_preset();
    const auto lev = levitated_yig_preset();
    EXPECT_EQ(*cant.mass_override, 1e-15);
    EXPECT_EQ(cant.omega_m, 2 * pi * 1e6);
    EXPECT_NEAR(*lev.mass_override, 4.0 / 3.0 * pi * std::pow(base.R, 3) * 5170.0, 1e-30);
    EXPECT_EQ(cant.R, base.R);
    EXPECT_EQ(lev.d, base.d);
    EXPECT_EQ(derive_params(cant).M, 1e-15);
    EXPECT_THROW(preset_by_name("unknown"), config_error);
    EXPECT_EQ(preset_by_name("cantilever").mass_override, cant.mass_override);
}

TEST(Params, SetByNameAndSnapshot) {
    PhysicalParams p;
    p.set("U_T", 10.0);
    EXPECT_FALSE(p.r_requested.has_value());
    p.set("r", 1.0);
    EXPECT_FALSE(p.U_T.has_value());
    p.set("charge", 1e-15);
    EXPECT_FALSE(p.q_over_M.has_value());
    EXPECT_THROW(p.set("nope", 1.0), config_error);
    p.apply({{"R", "1e-7"}, {"T", "0.02"}});
    EXPECT_EQ(p.R, 1e-7);
    const auto snap = p.snapshot();
    bool found_charge = false, found_ut = false;
    for (const auto& [k, v] : snap) {
        found_charge |= (k == "charge" && v == 1e-15);
        found_ut |= (k == "U_T");
    }
    EXPECT_TRUE(found_charge);
    EXPECT_FALSE(found_ut);
}

TEST(Constants, OverridesAndHash) {
    const Constants c;
    const auto h0 = c.hash();
    EXPECT_EQ(h0.size(), 64u);
    EXPECT_EQ(Constants{}.hash(), h0);
    const auto c2 = c.with_overrides(kv::Document::parse_string("M_s_yig = 1.4e5\n"));
    EXPECT_EQ(c2.M_s_yig, 1.4e5);
    EXPECT_NE(c2.hash(), h0);
    EXPECT_THROW(c.with_overrides(kv::Document::parse_string("bogus = 1\n")), config_error);
    EXPECT_THROW(c.with_overrides(kv::Document::parse_string("hbar = -1\n")), config_error);

    PhysicalParams p = trapped_diamond_preset(c2);
    EXPECT_EQ(p.M_s, 1.4e5);
    EXPECT_LT(derive_params(p, c2).lambda, derive_params(trapped_diamond_preset(), c).lambda);
}

TEST(Units, LambdaNormalisation) {
    const PhysicalParams p = experimental_point();
    const auto dp = derive_params(p);
    const auto mr = in_lambda_units(dp);
    EXPECT_EQ(mr.lambda, 1.0);
    EXPECT_NEAR(mr.lambda_eff, std::exp(4.5), 1e-12 * std::exp(4.5));
    EXPECT_NEAR(mr.g0, dp.g0 / dp.lambda, 0.0);
    EXPECT_EQ(mr.r, 4.5);
    const auto det = detunings_in_lambda_units(p, dp);
    EXPECT_NEAR(det.Delta_m * dp.lambda, dp.Delta_m, 1e-9 * dp.Delta_m);
}

TEST(Detunings, RedAndBlueConditions) {
    const auto red = red_detuning(15.0, 1.2, 0.3);
    EXPECT_EQ(red.delta_K, 0.3 - 15.0);
    EXPECT_NEAR(red.delta_m / std::cosh(2.4), 15.0, 1e-12);
    const auto blue = blue_detuning(15.0, 1.2, 0.3);
    EXPECT_EQ(blue.delta_K, 0.3 + 15.0);
}
