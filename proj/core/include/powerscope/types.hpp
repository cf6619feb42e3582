#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace powerscope {

/// One DVFS table entry. Equality is exact on both fields; an operating
/// point is the key under which per-frequency models are selected.
struct OperatingPoint {
    std::int64_t frequency_hz = 0;
    double voltage_v = 0.0;

    friend auto operator<=>(const OperatingPoint&, const OperatingPoint&) = default;
};

std::string to_string(const OperatingPoint& p);

/// Ordered ladder of legal operating points: frequencies strictly
/// increasing, voltages non-decreasing. Several low frequencies may share
/// one supply voltage; that constant-voltage prefix is what static-power
/// extraction runs on.
class DvfsTable {
public:
    DvfsTable() = default;
    explicit DvfsTable(std::vector<OperatingPoint> points);

    const std::vector<OperatingPoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    bool contains(const OperatingPoint& p) const;

    const OperatingPoint& lowest() const;
    const OperatingPoint& highest() const;

    /// Supply voltage of the lowest-frequency point.
    double base_voltage() const;

    /// All leading points that still run at the base voltage.
    std::vector<OperatingPoint> constant_voltage_prefix() const;

    /// Highest-frequency point still at the base voltage (the middle
    /// anchor of a unified model).
    const OperatingPoint& mid_anchor() const;

private:
    std::vector<OperatingPoint> points_;
};

/// One measurement window: counter deltas plus the power, temperature and
/// cycle count observed while they accumulated.
struct Sample {
    std::string benchmark;
    OperatingPoint point;
    double temperature_c = 0.0;
    double power_w = 0.0;
    double cycles = 0.0;
    std::vector<double> events; // aligned with the owning table's catalog

    friend bool operator==(const Sample&, const Sample&) = default;
};

struct MeasurementTable {
    std::vector<std::string> counter_names;
    std::vector<Sample> samples;

    friend bool operator==(const MeasurementTable&, const MeasurementTable&) = default;
};

/// Disjoint train/test benchmark label sets.
struct BenchmarkSplit {
    std::set<std::string> train;
    std::set<std::string> test;
};

} // namespace powerscope
