#pragma once
//
// Seeded generator whose output sequence is identical on every platform.
// std::mt19937_64 is fully specified by the standard; the std distributions
// are not, so the conversions below are written out by hand.
//

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace mmf {

class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// uniform in [0, 1) with 53 random bits
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// uniform integer in [0, bound); bound must be positive
    std::uint64_t uniform_index(std::uint64_t bound)
    {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t       x;
        do
            x = engine_();
        while (x >= limit);
        return x % bound;
    }

    /// standard normal via Box-Muller
    double normal()
    {
        if (has_spare_)
        {
            has_spare_ = false;
            return spare_;
        }
        double u1;
        do
            u1 = uniform();
        while (u1 == 0.0);
        const double u2 = uniform();
        const double r  = std::sqrt(-2.0 * std::log(u1));
        spare_          = r * std::sin(2.0 * std::numbers::pi * u2);
        has_spare_      = true;
        return r * std::cos(2.0 * std::numbers::pi * u2);
    }

private:
    std::mt19937_64 engine_;
    double          spare_     = 0.0;
    bool            has_spare_ = false;
};

}// namespace mmf
