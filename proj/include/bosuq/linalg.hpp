#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace bosuq {

using cvec = std::vector<std::complex<double>>;
using rvec = std::vector<double>;

// <v, w> = sum conj(v_i) w_i
inline std::complex<double> dot(std::span<const std::complex<double>> v,
                                std::span<const std::complex<double>> w) {
    if (v.size() != w.size()) throw std::invalid_argument("dot: size mismatch");
    std::complex<double> s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += std::conj(v[i]) * w[i];
    return s;
}

inline double norm2_sq(std::span<const std::complex<double>> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return s;
}

inline double norm2(std::span<const std::complex<double>> v) {
    return std::sqrt(norm2_sq(v));
}

inline double norm1(std::span<const std::complex<double>> v) {
    double s = 0.0;
    for (const auto& z : v) s += std::abs(z);
    return s;
}

inline double norm_inf(std::span<const std::complex<double>> v) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

inline bool all_finite(std::span<const std::complex<double>> v) {
    for (const auto& z : v)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

inline cvec subtract(const cvec& a, const cvec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("subtract: size mismatch");
    cvec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline cvec add(const cvec& a, const cvec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("add: size mismatch");
    cvec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline cvec scale(const cvec& a, std::complex<double> c) {
    cvec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

}  // namespace bosuq
