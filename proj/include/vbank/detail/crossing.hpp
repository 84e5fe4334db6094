#pragma once

#include "vbank/config.hpp"
#include "vbank/errors.hpp"

#include <optional>
#include <string>

namespace vbank {

template <typename Predicate>
std::optional<double> single_crossing(Predicate&& holds, double lo, double hi, double tolerance) {
    constexpr int kScan = 64;
    int crossings = 0;
    double a = lo, b = hi;
    bool prev = holds(lo);
    for (int i = 1; i <= kScan; ++i) {
        const double x = i == kScan ? hi : lo + (hi - lo) * i / kScan;
        const bool cur = holds(x);
        if (cur != prev) {
            ++crossings;
            a = lo + (hi - lo) * (i - 1) / kScan;
            b = x;
        }
        prev = cur;
    }
    if (crossings == 0) return std::nullopt;
    if (crossings > 1)
        throw BracketError("bracket [" + format_double(lo) + ", " + format_double(hi) + "] holds " +
                           std::to_string(crossings) + " crossings");

    const bool at_a = holds(a);
    while (b - a > tolerance / 4) {
        const double mid = 0.5 * (a + b);
        (holds(mid) == at_a ? a : b) = mid;
    }
    return 0.5 * (a + b);
}

}  // namespace vbank
