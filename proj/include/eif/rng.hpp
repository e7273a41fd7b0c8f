#pragma once

#include <cstdint>

namespace eif {

// xorshift64* (Vigna 2014): shifts 12, 25, 27 and multiplier
// 0x2545F4914F6CDD1D. The seed is passed once through splitmix64 so that
// small seeds give well-mixed states. Uniform doubles take the top 53 bits.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed);

    std::uint64_t next();
    double uniform();  // [0, 1)
    double uniform_open();  // (0, 1)
    double normal();   // Box-Muller, one variate per call
    double gamma(double shape);  // Marsaglia-Tsang
    double beta(double a, double b);

private:
    std::uint64_t state_;
};

}  // namespace eif
