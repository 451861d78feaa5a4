#pragma once

#include <cstddef>
#include <functional>

namespace bkm {

/// 4th-order central stencils on a uniform axis. `f(k)` samples at offset k
/// from the evaluation node; callers guarantee the needed margin.
namespace fd {

inline double d1(const std::function<double(int)>& f, double h) {
    return (-f(2) + 8.0 * f(1) - 8.0 * f(-1) + f(-2)) / (12.0 * h);
}

inline double d2(const std::function<double(int)>& f, double h) {
    return (-f(2) + 16.0 * f(1) - 30.0 * f(0) + 16.0 * f(-1) - f(-2)) / (12.0 * h * h);
}

inline double d3(const std::function<double(int)>& f, double h) {
    return (-f(3) + 8.0 * f(2) - 13.0 * f(1) + 13.0 * f(-1) - 8.0 * f(-2) + f(-3)) /
           (8.0 * h * h * h);
}

constexpr int margin1 = 2;
constexpr int margin3 = 3;

} // namespace fd
} // namespace bkm
