#include "powerscope/rng.hpp"

#include <cmath>
#include <numbers>

namespace powerscope {

double Rng::gaussian(double mean, double sd) {
    if (have_spare_) {
        have_spare_ = false;
        return mean + sd * spare_;
    }
    // Box-Muller; u1 is nudged away from 0 so the log stays finite.
    double u1 = unit();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double u2 = unit();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = mag * std::sin(angle);
    have_spare_ = true;
    return mean + sd * mag * std::cos(angle);
}

} // namespace powerscope
