#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace bosuq {

// splitmix64 step; used both as a seed scrambler and for deriving
// independent per-trial streams from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based stream split: the derived seed depends only on
// (master, stream), never on how many streams were drawn before it,
// so parallel schedules cannot change the result.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return splitmix64(splitmix64(master ^ 0x8f462907f67ae317ULL) + stream);
}

// Deterministic random source. The distribution transforms are spelled
// out here instead of using <random> distributions, whose output is
// implementation-defined; mt19937_64 itself is fully specified.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return engine_(); }

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // uniform in (0, 1]
    double uniform_pos() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // uniform integer in [0, bound) by rejection; exact, no modulo bias
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const std::uint64_t r = engine_();
            if (r >= threshold) return r % bound;
        }
    }

    // standard normal via Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform_pos();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.141592653589793238462643383279502884 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // z ~ CN(0, sigma^2): Re and Im i.i.d. N(0, sigma^2 / 2)
    std::complex<double> complex_normal(double sigma) {
        const double s = sigma / std::sqrt(2.0);
        return {s * normal(), s * normal()};
    }

    std::vector<std::complex<double>> complex_normal_vector(std::size_t n, double sigma) {
        std::vector<std::complex<double>> v(n);
        for (auto& z : v) z = complex_normal(sigma);
        return v;
    }

  private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace bosuq
