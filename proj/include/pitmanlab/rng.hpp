#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pitmanlab {

// Counter-based random stream. A draw is a pure function of (key, counter),
// so replicate r of a Monte Carlo run can be handed substream(r) and the
// result does not depend on which worker executes it or in which order.
class SeededStream {
  public:
    explicit SeededStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : key_(mix(seed + 0x9E3779B97F4A7C15ull * (stream_id + 1))), counter_(0) {}

    // Independent child stream; stable under the parent's own consumption.
    SeededStream substream(std::uint64_t id) const {
        return SeededStream(mix(key_ ^ mix(id + 0xD1B54A32D192ED03ull)), 0, tag{});
    }

    std::uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9E3779B97F4A7C15ull); }

    // Uniform on (0,1]; never returns 0 so log(u) is safe.
    double uniform01() {
        return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // Box-Muller; consumes two words per call.
    double gaussian(double mean = 0.0, double sigma = 1.0) {
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * std::numbers::pi * u2);
    }

    double exponential(double scale) { return -scale * std::log(uniform01()); }

    double laplace(double scale) {
        const double u = uniform01() - 0.5;
        return u < 0 ? scale * std::log1p(2.0 * u) : -scale * std::log1p(-2.0 * u);
    }

    double cauchy(double gamma) {
        return gamma * std::tan(std::numbers::pi * (uniform01() - 0.5));
    }

    std::uint64_t key() const { return key_; }

  private:
    struct tag {};
    SeededStream(std::uint64_t key, std::uint64_t counter, tag) : key_(key), counter_(counter) {}

    // splitmix64 finalizer
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    std::uint64_t key_;
    std::uint64_t counter_;
};

// Documented default seed for every CLI entry point.
inline constexpr std::uint64_t kDefaultSeed = 0xC0FFEE;

} // namespace pitmanlab
