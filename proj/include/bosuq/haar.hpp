#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bosuq/linalg.hpp"

namespace bosuq {

inline bool is_power_of_two(std::size_t p) { return p != 0 && (p & (p - 1)) == 0; }

// Orthonormal 1-D Haar analysis transform, O(p) by recursive
// averaging/differencing with 1/sqrt(2) normalization.
//
// Output ordering: [scaling coefficient | details coarse-to-fine], each
// level contiguous. For x = [1,1,1,1] this yields [2,0,0,0].
inline cvec haar_forward(const cvec& x) {
    const std::size_t p = x.size();
    if (!is_power_of_two(p)) throw std::invalid_argument("haar_forward: length must be a power of two");
    cvec z = x;
    cvec tmp(p);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t len = p; len >= 2; len /= 2) {
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < half; ++i) {
            tmp[i] = (z[2 * i] + z[2 * i + 1]) * inv_sqrt2;
            tmp[half + i] = (z[2 * i] - z[2 * i + 1]) * inv_sqrt2;
        }
        std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(len), z.begin());
    }
    return z;
}

// Inverse (synthesis) transform; exact inverse of haar_forward.
inline cvec haar_inverse(const cvec& z) {
    const std::size_t p = z.size();
    if (!is_power_of_two(p)) throw std::invalid_argument("haar_inverse: length must be a power of two");
    cvec x = z;
    cvec tmp(p);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t len = 2; len <= p; len *= 2) {
        const std::size_t half = len / 2;
        for (std::size_t i = 0; i < half; ++i) {
            tmp[2 * i] = (x[i] + x[half + i]) * inv_sqrt2;
            tmp[2 * i + 1] = (x[i] - x[half + i]) * inv_sqrt2;
        }
        std::copy(tmp.begin(), tmp.begin() + static_cast<std::ptrdiff_t>(len), x.begin());
    }
    return x;
}

enum class KappaVariant { Theorem, Clipped };

// Incoherence weights for the Fourier-Haar pair. Theorem variant:
// kappa_j = 3 sqrt(2 pi) / sqrt(j) (1-based j); Clipped caps each
// weight at 1.
struct KappaWeights {
    std::vector<double> kappa;  // kappa[i] is the weight of 1-based index i+1
    KappaVariant variant = KappaVariant::Theorem;
    double norm_sq = 0.0;  // ||kappa||_2^2

    double norm() const { return std::sqrt(norm_sq); }
};

inline KappaWeights kappa_weights(std::size_t p, KappaVariant variant) {
    if (p < 1) throw std::invalid_argument("kappa_weights: p must be >= 1");
    KappaWeights w;
    w.variant = variant;
    w.kappa.resize(p);
    const double c = 3.0 * std::sqrt(2.0 * 3.141592653589793238462643383279502884);
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        double k = c / std::sqrt(static_cast<double>(i + 1));
        if (variant == KappaVariant::Clipped) k = std::min(k, 1.0);
        w.kappa[i] = k;
        sum_sq += k * k;
    }
    w.norm_sq = sum_sq;
    return w;
}

}  // namespace bosuq
