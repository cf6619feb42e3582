#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "powerscope/types.hpp"

namespace powerscope {

/// Affine model over cycle-normalized event rates: power = intercept +
/// dot(slopes, rates). Slopes may legitimately come out negative when
/// counters correlate with each other.
struct Coefficients {
    double intercept_w = 0.0;
    std::vector<double> slopes_w;

    friend bool operator==(const Coefficients&, const Coefficients&) = default;
};

struct PointStats {
    double mape_pct = 0.0;
    std::size_t count = 0;    // samples included in the error
    std::size_t excluded = 0; // measured power at/below the floor
};

/// Per-operating-point and overall error of one model on one sample set.
/// overall_pct is the count-weighted mean of the per-point errors.
struct FitReport {
    std::map<OperatingPoint, PointStats> per_point;
    double overall_pct = 0.0;
    std::size_t total_count = 0;
    std::size_t total_excluded = 0;
    std::size_t skipped_unknown_point = 0;
};

struct RateRow {
    std::vector<double> rates;
    double power_w = 0.0;
};

/// Measured powers at or below this floor are excluded from percentage
/// errors (the ratio is undefined at zero).
inline constexpr double kMapeMeasuredFloorW = 1e-6;

/// Relative pivot threshold for declaring a design column collinear.
inline constexpr double kRankPivotThreshold = 1e-10;

/// Ordinary least squares over a design of [1 | rates]. Solved through a
/// rank-revealing orthogonal decomposition rather than normal equations:
/// busy/occupancy style counters are strongly correlated and the squared
/// condition number of the normal equations loses digits we care about.
/// `column_names`, when given, names the rate columns in diagnostics.
Coefficients ols_fit(const std::vector<RateRow>& rows,
                     std::span<const std::string> column_names = {});

double predict(const Coefficients& c, std::span<const double> rates);

struct MapeStats {
    double pct = 0.0;
    std::size_t count = 0;
    std::size_t excluded = 0;
};

/// Mean absolute percentage error. Pairs whose measured value is at or
/// below kMapeMeasuredFloorW are dropped; dropping everything is an error.
double mape(std::span<const double> predicted, std::span<const double> measured);
MapeStats mape_stats(std::span<const double> predicted, std::span<const double> measured);

/// Count-weighted mean of per-point errors.
double weighted_overall(const std::map<OperatingPoint, PointStats>& per_point);

} // namespace powerscope
