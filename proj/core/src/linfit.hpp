#pragma once

#include <span>

namespace powerscope::detail {

struct Line {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least-squares line through (x, y). Needs >= 2 points with at least two
/// distinct x values; throws NumericError otherwise.
Line linfit(std::span<const double> x, std::span<const double> y);

} // namespace powerscope::detail
