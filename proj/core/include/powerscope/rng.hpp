#pragma once

#include <cstdint>
#include <random>

namespace powerscope {

/// Seedable generator with fully specified output: mt19937_64 for the bit
/// stream, explicit scaling for uniforms and Box-Muller for gaussians, so a
/// fixture regenerated from the same seed is identical everywhere (the
/// standard pins the engine's output but not the distribution adapters).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    double gaussian(double mean, double sd);

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace powerscope
