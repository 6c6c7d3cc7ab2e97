#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "bosuq/design.hpp"
#include "bosuq/haar.hpp"
#include "bosuq/linalg.hpp"

namespace bosuq {

enum class DesparsifyVariant { Canonical, Haar };

struct DesparsifiedEstimate {
    cvec beta_u;
    rvec sigma_hat_diag;  // Sigma_hat_ii used by the confidence radii
    DesparsifyVariant variant = DesparsifyVariant::Canonical;
};

// beta_u = beta_hat + X^*(y - X beta_hat) / n, with M fixed to the identity.
inline DesparsifiedEstimate desparsify(const DesignOperator& op, const cvec& y,
                                       const cvec& beta_hat) {
    if (std::holds_alternative<PreconditionedHaarFourier>(op.kind()))
        throw std::invalid_argument("desparsify: preconditioned design needs desparsify_haar");
    if (y.size() != op.rows() || beta_hat.size() != op.cols())
        throw std::invalid_argument("desparsify: dimension mismatch");

    const double n = static_cast<double>(op.rows());
    const cvec fit = apply_forward(op, beta_hat);
    cvec resid(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) resid[i] = y[i] - fit[i];
    const cvec corr = apply_adjoint(op, resid);

    DesparsifiedEstimate est;
    est.variant = DesparsifyVariant::Canonical;
    est.beta_u.resize(op.cols());
    for (std::size_t j = 0; j < op.cols(); ++j) est.beta_u[j] = beta_hat[j] + corr[j] / n;
    est.sigma_hat_diag = sigma_hat_diag(op);
    return est;
}

// Haar-domain variant: beta_u = H^* z_hat + F_Omega^* D^2 (y - F_Omega H^* z_hat) / n.
// The residual uses the LASSO solution z_hat; sigma_hat_diag is the constant
// (1/n) ||D^2||_F^2.
inline DesparsifiedEstimate desparsify_haar(const SamplingPattern& pattern,
                                            const Preconditioner& D, const cvec& y,
                                            const cvec& z_hat) {
    pattern.validate();
    D.validate();
    if (!is_power_of_two(pattern.p))
        throw std::invalid_argument("desparsify_haar: p must be a power of two");
    if (y.size() != pattern.n || z_hat.size() != pattern.p || D.diag.size() != pattern.n)
        throw std::invalid_argument("desparsify_haar: dimension mismatch");

    const double n = static_cast<double>(pattern.n);
    const cvec beta_hat = haar_inverse(z_hat);
    const cvec fit = detail::fourier_rows_forward(pattern, beta_hat);
    cvec resid(pattern.n);
    for (std::size_t l = 0; l < pattern.n; ++l)
        resid[l] = D.diag[l] * D.diag[l] * (y[l] - fit[l]);
    const cvec corr = detail::fourier_rows_adjoint(pattern, resid);

    DesparsifiedEstimate est;
    est.variant = DesparsifyVariant::Haar;
    est.beta_u.resize(pattern.p);
    for (std::size_t j = 0; j < pattern.p; ++j) est.beta_u[j] = beta_hat[j] + corr[j] / n;
    double frob_sq = 0.0;
    for (double d : D.diag) frob_sq += d * d * d * d;
    est.sigma_hat_diag.assign(pattern.p, frob_sq / n);
    return est;
}

struct WRDecomposition {
    cvec W;
    cvec R;
};

// Diagnostic split sqrt(n)(beta_u - beta_0) = W + R against known truth:
// W = X^* eps / sqrt(n) (canonical) or (D^2 F_Omega)^* eps / sqrt(n) (Haar),
// R is the remainder.
inline WRDecomposition decompose_WR(const DesignOperator& op, const cvec& beta_true,
                                    const cvec& beta_u, const cvec& noise) {
    const std::size_t p = op.cols();
    if (beta_true.size() != p || beta_u.size() != p || noise.size() != op.rows())
        throw std::invalid_argument("decompose_WR: dimension mismatch");
    const double sqrt_n = std::sqrt(static_cast<double>(op.rows()));

    WRDecomposition d;
    if (const auto* phf = std::get_if<PreconditionedHaarFourier>(&op.kind())) {
        cvec scaled(noise.size());
        for (std::size_t l = 0; l < noise.size(); ++l)
            scaled[l] = phf->precond.diag[l] * phf->precond.diag[l] * noise[l];
        d.W = detail::fourier_rows_adjoint(phf->pattern, scaled);
    } else {
        d.W = apply_adjoint(op, noise);
    }
    d.R.resize(p);
    for (std::size_t j = 0; j < p; ++j) {
        d.W[j] /= sqrt_n;
        d.R[j] = sqrt_n * (beta_u[j] - beta_true[j]) - d.W[j];
    }
    return d;
}

struct RemainderBoundParams {
    double K = 1.0;
    std::size_t s0 = 0;
    std::size_t p = 2;
    std::size_t n = 1;
    double eta = 0.05;      // in (0,1)
    double delta_t = 0.5;   // RIP constant, in (0,1)
    double sigma = 1.0;

    double C_t_sigma() const { return 16.0 * std::sqrt(10.0) * sigma / (1.0 - delta_t); }
    double C_delta_sigma() const { return std::sqrt(640.0) * sigma / (1.0 - delta_t); }

    void validate() const {
        if (K < 1.0 || p < 2 || n < 1 || sigma < 0.0)
            throw std::invalid_argument("RemainderBoundParams: invalid dimensions");
        if (!(eta > 0.0 && eta < 1.0) || !(delta_t > 0.0 && delta_t < 1.0))
            throw std::invalid_argument("RemainderBoundParams: eta, delta_t must lie in (0,1)");
    }
};

// High-probability bound on ||R||_inf:
//   8 K^{5/2} C_t^sigma s0 sqrt(log(p)/18) log(4p/eta) / n
//     + 4 sqrt(K^3 (C_delta^sigma)^2 s0 log(4p/eta) log(p) / n).
inline double remainder_bound(const RemainderBoundParams& params) {
    params.validate();
    if (params.s0 == 0) return 0.0;
    const double logp = std::log(static_cast<double>(params.p));
    const double log_term = std::log(4.0 * static_cast<double>(params.p) / params.eta);
    const double s0 = static_cast<double>(params.s0);
    const double n = static_cast<double>(params.n);
    const double first =
        8.0 * std::pow(params.K, 2.5) * params.C_t_sigma() * s0 * std::sqrt(logp / 18.0) *
        log_term / n;
    const double second = 4.0 * std::sqrt(std::pow(params.K, 3.0) *
                                          params.C_delta_sigma() * params.C_delta_sigma() * s0 *
                                          log_term * logp / n);
    return first + second;
}

}  // namespace bosuq
