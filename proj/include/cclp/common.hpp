#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace cclp {

// Input or argument violates a documented precondition.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Problem size exceeds what the exact desk-scale methods can handle.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Canonical key for an unordered vertex pair, u != v.
inline std::uint64_t pair_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

inline int pair_key_lo(std::uint64_t key) { return static_cast<int>(key >> 32); }
inline int pair_key_hi(std::uint64_t key) { return static_cast<int>(key & 0xffffffffu); }

// Bell number as double (exact for small n, used for capacity messages).
inline double bell_number(int n) {
    // Bell triangle.
    if (n <= 0) return 1.0;
    std::vector<double> row{1.0};
    for (int i = 1; i <= n; ++i) {
        std::vector<double> next;
        next.reserve(static_cast<std::size_t>(i) + 1);
        next.push_back(row.back());
        for (double v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

}  // namespace cclp
