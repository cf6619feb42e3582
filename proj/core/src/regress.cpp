#include "powerscope/regress.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "powerscope/errors.hpp"
#include "textio.hpp"

namespace powerscope {

namespace {

std::string column_label(std::size_t design_index, std::span<const std::string> names) {
    if (design_index == 0) return "intercept";
    const std::size_t rate_index = design_index - 1;
    if (rate_index < names.size()) return names[rate_index];
    return "counter" + std::to_string(design_index);
}

} // namespace

Coefficients ols_fit(const std::vector<RateRow>& rows,
                     std::span<const std::string> column_names) {
    const std::size_t k = rows.empty() ? 0 : rows.front().rates.size();
    const std::size_t n = rows.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (rows[i].rates.size() != k) {
            throw DataError("ols_fit: row " + std::to_string(i + 1) + " has " +
                            std::to_string(rows[i].rates.size()) + " rates, expected " +
                            std::to_string(k));
        }
    }
    if (n < k + 1) {
        throw NumericError("ols_fit: " + std::to_string(n) + " rows is not enough for " +
                           std::to_string(k) + " counters (need at least " +
                           std::to_string(k + 1) + ")");
    }

    Eigen::MatrixXd design(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k + 1));
    Eigen::VectorXd power(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        design(static_cast<Eigen::Index>(i), 0) = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            design(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j + 1)) =
                rows[i].rates[j];
        }
        power(static_cast<Eigen::Index>(i)) = rows[i].power_w;
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    qr.setThreshold(kRankPivotThreshold);
    const auto rank = qr.rank();
    if (rank < static_cast<Eigen::Index>(k + 1)) {
        // Pivoting pushes dependent columns to the back of the permutation;
        // name them so the caller can see what collided.
        const auto& perm = qr.colsPermutation().indices();
        std::ostringstream msg;
        msg << "ols_fit: rank-deficient design (rank " << rank << " of " << (k + 1)
            << "); collinear columns:";
        for (Eigen::Index r = rank; r < perm.size(); ++r) {
            msg << ' ' << column_label(static_cast<std::size_t>(perm(r)), column_names);
        }
        throw NumericError(msg.str());
    }

    const Eigen::VectorXd beta = qr.solve(power);
    Coefficients c;
    c.intercept_w = beta(0);
    c.slopes_w.assign(beta.data() + 1, beta.data() + 1 + k);
    return c;
}

double predict(const Coefficients& c, std::span<const double> rates) {
    if (rates.size() != c.slopes_w.size()) {
        throw DataError("predict: rate vector length " + std::to_string(rates.size()) +
                        " does not match " + std::to_string(c.slopes_w.size()) + " slopes");
    }
    double p = c.intercept_w;
    for (std::size_t i = 0; i < rates.size(); ++i) p += c.slopes_w[i] * rates[i];
    return p;
}

MapeStats mape_stats(std::span<const double> predicted, std::span<const double> measured) {
    if (predicted.size() != measured.size()) {
        throw DataError("mape: " + std::to_string(predicted.size()) + " predictions vs " +
                        std::to_string(measured.size()) + " measurements");
    }
    MapeStats stats;
    double acc = 0.0;
    for (std::size_t i = 0; i < measured.size(); ++i) {
        if (measured[i] <= kMapeMeasuredFloorW) {
            ++stats.excluded;
            continue;
        }
        acc += std::abs(predicted[i] - measured[i]) / measured[i];
        ++stats.count;
    }
    if (stats.count == 0) {
        throw NumericError("mape: no measured samples above the " +
                           detail::format_full(kMapeMeasuredFloorW) + " W floor");
    }
    stats.pct = acc / static_cast<double>(stats.count) * 100.0;
    return stats;
}

double mape(std::span<const double> predicted, std::span<const double> measured) {
    return mape_stats(predicted, measured).pct;
}

double weighted_overall(const std::map<OperatingPoint, PointStats>& per_point) {
    double acc = 0.0;
    std::size_t total = 0;
    for (const auto& [point, stats] : per_point) {
        acc += stats.mape_pct * static_cast<double>(stats.count);
        total += stats.count;
    }
    if (total == 0) throw NumericError("weighted_overall: empty report");
    return acc / static_cast<double>(total);
}

} // namespace powerscope
