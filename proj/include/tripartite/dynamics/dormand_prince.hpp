#pragma once

// Adaptive Dormand–Prince 5(4) integrator with the fourth-order continuous
// extension (Hairer, Nørsett & Wanner). Works on any Eigen dense object:
// the state is advanced with the fifth-order solution (local extrapolation)
// and output times are served by dense output, so the grid never limits the
// step size.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tripartite::dynamics {

struct Tolerances {
    double rel = 1e-8;
    double abs = 1e-10;
};

class step_underflow_error : public std::runtime_error {
public:
    step_underflow_error(double t, double h)
        : std::runtime_error(message(t, h)), time(t), step(h) {}
    double time;
    double step;

private:
    static std::string message(double t, double h) {
        std::ostringstream os;
        os << "step size underflow at t = " << t << " (h = " << h << ")";
        return os.str();
    }
};

struct IntegrationStats {
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t rhs_evaluations = 0;
    /// Sum over accepted steps of the Frobenius norm of the local error estimate.
    double local_error_sum = 0.0;
};

namespace dopri {
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
inline constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                        d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                        d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;
} // namespace dopri

/// Weighted max norm used for step control.
template <class State>
double error_norm(const State& err, const State& y0, const State& y1, const Tolerances& tol) {
    const auto scale = tol.abs + tol.rel * y0.array().abs().max(y1.array().abs());
    return (err.array().abs() / scale).maxCoeff();
}

/// Integrate y' = f(t, y) from grid.front() and call observe(i, t_i, y(t_i))
/// for every grid time. The grid must be strictly increasing.
template <class State, class Rhs, class Observer>
IntegrationStats integrate(Rhs&& f, const State& y_start, const std::vector<double>& grid,
                           const Tolerances& tol, Observer&& observe) {
    if (grid.empty())
        throw std::invalid_argument("integrate: empty time grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("integrate: time grid must be strictly increasing");
    if (!(tol.rel > 0.0) || !(tol.abs > 0.0))
        throw std::invalid_argument("integrate: tolerances must be positive");

    using namespace dopri;
    IntegrationStats stats;
    double t = grid.front();
    const double t_end = grid.back();
    State y = y_start;
    observe(std::size_t{0}, t, y);
    if (grid.size() == 1)
        return stats;

    State k1 = f(t, y);
    ++stats.rhs_evaluations;

    // Initial step from the scaled derivative magnitudes.
    double h;
    {
        const State zero = State::Zero(y.rows(), y.cols());
        const double d0 = error_norm(y, zero, y, tol);
        const double d1n = error_norm(k1, zero, y, tol);
        double h0 = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
        h0 = std::min(h0, t_end - t);
        const State y1 = y + h0 * k1;
        const State k2 = f(t + h0, y1);
        ++stats.rhs_evaluations;
        const double d2 = error_norm(State(k2 - k1), zero, y, tol) / h0;
        const double dmax = std::max(d1n, d2);
        const double h1 = dmax <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dmax, 0.2);
        h = std::min({100.0 * h0, h1, t_end - t});
    }

    constexpr double safety = 0.9, fac_min = 0.2, fac_max = 5.0;
    std::size_t next = 1;
    bool last_rejected = false;

    State k2, k3, k4, k5, k6, k7, y_new, err;
    while (next < grid.size()) {
        const double h_min = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
        if (h < h_min)
            throw step_underflow_error(t, h);
        if (t + h > t_end)
            h = t_end - t;

        k2 = f(t + c2 * h, State(y + h * (a21 * k1)));
        k3 = f(t + c3 * h, State(y + h * (a31 * k1 + a32 * k2)));
        k4 = f(t + c4 * h, State(y + h * (a41 * k1 + a42 * k2 + a43 * k3)));
        k5 = f(t + c5 * h, State(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
        k6 = f(t + h, State(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)));
        y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
        k7 = f(t + h, y_new);
        stats.rhs_evaluations += 6;

        err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = error_norm(err, y, y_new, tol);
        if (!std::isfinite(en))
            throw std::runtime_error("integrate: non-finite error estimate");

        if (en <= 1.0) {
            const double t_new = t + h;
            // Dense output coefficients for grid points inside (t, t_new].
            if (next < grid.size() && grid[next] <= t_new) {
                const State ydiff = y_new - y;
                const State bspl = h * k1 - ydiff;
                const State r4 = ydiff - h * k7 - bspl;
                const State r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
                while (next < grid.size() && grid[next] <= t_new) {
                    const double tg = grid[next];
                    if (tg == t_new) {
                        observe(next, tg, y_new);
                    } else {
                        const double th = (tg - t) / h;
                        const double th1 = 1.0 - th;
                        const State yi = y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5)));
                        observe(next, tg, yi);
                    }
                    ++next;
                }
            }
            stats.local_error_sum += err.norm();
            ++stats.accepted;
            t = t_new;
            y = y_new;
            k1 = k7;  // FSAL
            double fac = en == 0.0 ? fac_max : safety * std::pow(en, -0.2);
            fac = std::clamp(fac, fac_min, last_rejected ? 1.0 : fac_max);
            h *= fac;
            last_rejected = false;
        } else {
            ++stats.rejected;
            h *= std::max(fac_min, safety * std::pow(en, -0.2));
            last_rejected = true;
        }
    }
    return stats;
}

} // namespace tripartite::dynamics
