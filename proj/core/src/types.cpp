#include "powerscope/types.hpp"

#include <algorithm>

#include "powerscope/errors.hpp"
#include "textio.hpp"

namespace powerscope {

std::string to_string(const OperatingPoint& p) {
    return std::to_string(p.frequency_hz) + "Hz/" + detail::format_full(p.voltage_v) + "V";
}

DvfsTable::DvfsTable(std::vector<OperatingPoint> points) : points_(std::move(points)) {
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        if (p.frequency_hz <= 0 || p.voltage_v <= 0.0) {
            throw DataError("dvfs table entry " + std::to_string(i + 1) +
                            ": frequency and voltage must be positive");
        }
        if (i > 0) {
            if (p.frequency_hz <= points_[i - 1].frequency_hz) {
                throw DataError("dvfs table entry " + std::to_string(i + 1) +
                                ": frequencies must be strictly increasing");
            }
            if (p.voltage_v < points_[i - 1].voltage_v) {
                throw DataError("dvfs table entry " + std::to_string(i + 1) +
                                ": voltages must be non-decreasing");
            }
        }
    }
}

bool DvfsTable::contains(const OperatingPoint& p) const {
    return std::find(points_.begin(), points_.end(), p) != points_.end();
}

const OperatingPoint& DvfsTable::lowest() const {
    if (points_.empty()) throw DataError("dvfs table is empty");
    return points_.front();
}

const OperatingPoint& DvfsTable::highest() const {
    if (points_.empty()) throw DataError("dvfs table is empty");
    return points_.back();
}

double DvfsTable::base_voltage() const {
    return lowest().voltage_v;
}

std::vector<OperatingPoint> DvfsTable::constant_voltage_prefix() const {
    std::vector<OperatingPoint> prefix;
    const double base = base_voltage();
    for (const auto& p : points_) {
        if (p.voltage_v != base) break;
        prefix.push_back(p);
    }
    return prefix;
}

const OperatingPoint& DvfsTable::mid_anchor() const {
    const double base = base_voltage();
    std::size_t last = 0;
    for (std::size_t i = 0; i < points_.size() && points_[i].voltage_v == base; ++i) {
        last = i;
    }
    return points_[last];
}

} // namespace powerscope
