#pragma once

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tripartite {

/// Shortest round-trip decimal form; locale independent and deterministic.
inline std::string format_double(double v) {
    if (!std::isfinite(v))
        throw std::domain_error("format_double: non-finite value");
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc{})
        throw std::runtime_error("format_double: conversion failed");
    return std::string(buf, ptr);
}

} // namespace tripartite
