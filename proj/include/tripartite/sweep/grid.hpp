#pragma once

// Parallel evaluation of independent points with results kept in point
// order, plus Cartesian expansion of grid axes.

#include "tripartite/sweep/config.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace tripartite::sweep {

template <class T>
struct PointOutcome {
    std::optional<T> value;
    std::string error;
    bool ok() const noexcept { return value.has_value(); }
};

/// Evaluate fn(0..n-1) on up to `workers` threads. Exceptions are caught per
/// point; the output vector is indexed by point regardless of finish order.
template <class T>
std::vector<PointOutcome<T>> run_points(std::size_t n, std::size_t workers,
                                        const std::function<T(std::size_t)>& fn) {
    std::vector<PointOutcome<T>> out(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
            try {
                out[i].value = fn(i);
            } catch (const std::exception& e) {
                out[i].error = e.what();
            } catch (...) {
                out[i].error = "unknown error";
            }
        }
    };
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
    if (workers == 1) {
        work();
        return out;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(work);
    for (auto& t : pool)
        t.join();
    return out;
}

/// Fraction of failed points above which a command reports failure.
inline constexpr double kMaxFailureFraction = 0.10;

template <class T>
std::size_t failure_count(const std::vector<PointOutcome<T>>& outcomes) {
    return static_cast<std::size_t>(
        std::count_if(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.ok(); }));
}

inline bool excessive_failures(std::size_t failed, std::size_t total) {
    return total > 0 && static_cast<double>(failed) > kMaxFailureFraction * static_cast<double>(total);
}

/// Cartesian product of the axes, last axis fastest.
inline std::vector<std::vector<double>> cartesian(const std::vector<GridAxis>& axes) {
    std::vector<std::vector<double>> points{{}};
    for (const auto& a : axes) {
        const auto vals = a.values();
        std::vector<std::vector<double>> next;
        next.reserve(points.size() * vals.size());
        for (const auto& p : points)
            for (double v : vals) {
                auto q = p;
                q.push_back(v);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    return points;
}

/// Explicit count, else TRIPARTITE_WORKERS, else the hardware thread count.
inline std::size_t resolve_workers(std::optional<std::size_t> requested) {
    if (requested)
        return std::max<std::size_t>(*requested, 1);
    if (const char* env = std::getenv("TRIPARTITE_WORKERS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<std::size_t>(v);
        throw config_error(std::string("TRIPARTITE_WORKERS must be a positive integer, got '") + env + "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

} // namespace tripartite::sweep
