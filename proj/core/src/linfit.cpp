#include "linfit.hpp"

#include "powerscope/errors.hpp"

namespace powerscope::detail {

Line linfit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw NumericError("linfit: mismatched input lengths");
    const std::size_t n = x.size();
    if (n < 2) throw NumericError("linfit: need at least 2 points");

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (y[i] - mean_y);
    }
    if (sxx == 0.0) throw NumericError("linfit: all x values are identical");

    Line line;
    line.slope = sxy / sxx;
    line.intercept = mean_y - line.slope * mean_x;
    return line;
}

} // namespace powerscope::detail
