#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bosuq/design.hpp"
#include "bosuq/linalg.hpp"
#include "bosuq/rng.hpp"

namespace bosuq {

// Universal regularization floor (sigma sqrt(K) / sqrt(n)) (2 + sqrt(10 log p)).
inline double lambda0(double sigma, double K, std::size_t n, std::size_t p) {
    if (p < 2) throw std::invalid_argument("lambda0: p must be >= 2");
    if (sigma < 0.0 || K < 1.0 || n < 1)
        throw std::invalid_argument("lambda0: need sigma >= 0, K >= 1, n >= 1");
    return sigma * std::sqrt(K) * (2.0 + std::sqrt(10.0 * std::log(static_cast<double>(p)))) /
           std::sqrt(static_cast<double>(n));
}

// Variant for the preconditioned Fourier-Haar design:
// sigma ||kappa||^{3/2} (sqrt(2) + sqrt(10 log p)) / (3 sqrt(pi) sqrt(n)).
inline double lambda0_preconditioned(double sigma, double kappa_norm, std::size_t n,
                                     std::size_t p) {
    if (p < 2) throw std::invalid_argument("lambda0_preconditioned: p must be >= 2");
    if (sigma < 0.0 || kappa_norm <= 0.0 || n < 1)
        throw std::invalid_argument("lambda0_preconditioned: invalid arguments");
    const double pi = 3.141592653589793238462643383279502884;
    return sigma * std::pow(kappa_norm, 1.5) *
           (std::sqrt(2.0) + std::sqrt(10.0 * std::log(static_cast<double>(p)))) /
           (3.0 * std::sqrt(pi) * std::sqrt(static_cast<double>(n)));
}

// Magnitude soft-thresholding: the prox of the complex l1 penalty
// (groups of size 2 in the real splitting). Preserves phase.
inline cvec prox_complex_l1(const cvec& z, double threshold) {
    if (threshold < 0.0) throw std::invalid_argument("prox_complex_l1: negative threshold");
    cvec out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) {
        const double mag = std::abs(z[j]);
        out[j] = (mag <= threshold) ? std::complex<double>(0.0, 0.0)
                                    : z[j] * (1.0 - threshold / mag);
    }
    return out;
}

enum class StepRule { FixedLipschitz, Backtracking };

struct LassoConfig {
    double lambda = 0.0;
    std::size_t max_iters = 50000;
    double rel_tol = 1e-10;
    std::optional<double> dual_gap_tol;
    StepRule step_rule = StepRule::Backtracking;

    void validate() const {
        if (lambda < 0.0) throw std::invalid_argument("LassoConfig: lambda must be >= 0");
        if (rel_tol <= 0.0) throw std::invalid_argument("LassoConfig: rel_tol must be > 0");
        if (dual_gap_tol && *dual_gap_tol <= 0.0)
            throw std::invalid_argument("LassoConfig: dual_gap_tol must be > 0");
    }
};

struct LassoSolution {
    cvec beta_hat;
    cvec residual;  // y - X beta_hat
    double lambda = 0.0;
    std::size_t iterations = 0;
    std::optional<double> final_gap;
    bool converged = false;
    std::vector<double> objective_trace;  // one value per outer iteration
};

struct NoiseEstimate {
    double sigma_hat = 0.0;
    std::size_t iterations = 0;
    bool degenerate = false;  // zero data / perfect fit
};

namespace detail {

inline double lasso_objective(double residual_sq, double l1, double lambda, std::size_t n) {
    return residual_sq / (2.0 * static_cast<double>(n)) + lambda * l1;
}

// Fenchel duality gap of (1/2n)||X b - y||^2 + lambda ||b||_1 at beta,
// certified through the scaled-to-feasibility dual point u = s (X b - y)/n.
inline double lasso_dual_gap(const DesignOperator& op, const cvec& y, const cvec& beta,
                             double lambda) {
    const std::size_t n = op.rows();
    const cvec xb = apply_forward(op, beta);
    cvec r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = xb[i] - y[i];
    const double primal = lasso_objective(norm2_sq(r), norm1(beta), lambda, n);

    cvec u(n);
    for (std::size_t i = 0; i < n; ++i) u[i] = r[i] / static_cast<double>(n);
    const double xtu_inf = norm_inf(apply_adjoint(op, u));
    const double s = (xtu_inf > lambda && xtu_inf > 0.0) ? lambda / xtu_inf : 1.0;
    double dual = 0.0;
    {
        std::complex<double> uy = 0.0;
        for (std::size_t i = 0; i < n; ++i) uy += std::conj(u[i]) * y[i];
        dual = -s * uy.real() - 0.5 * static_cast<double>(n) * s * s * norm2_sq(u);
    }
    return primal - dual;
}

// Power-iteration estimate of sigma_max(X)^2; deterministic start vector.
inline double op_norm_sq_estimate(const DesignOperator& op, std::size_t iters) {
    Rng rng(0x9d2c5680u);
    cvec v(op.cols());
    for (auto& z : v) z = rng.complex_normal(1.0);
    double est = 0.0;
    for (std::size_t k = 0; k < iters; ++k) {
        const double nv = norm2(v);
        if (nv == 0.0) break;
        for (auto& z : v) z /= nv;
        v = apply_adjoint(op, apply_forward(op, v));
        est = norm2(v);  // Rayleigh quotient of the normalized iterate
    }
    return est;
}

}  // namespace detail

// Accelerated proximal gradient (FISTA) with backtracking line search and
// an adaptive restart safeguard: when the candidate objective exceeds the
// previous one, momentum is reset and a plain proximal step from the
// current iterate is taken instead, so the recorded objective trace is
// non-increasing.
inline LassoSolution solve_classo(const DesignOperator& op, const cvec& y,
                                  const LassoConfig& cfg) {
    cfg.validate();
    if (y.size() != op.rows()) throw std::invalid_argument("solve_classo: dimension mismatch");
    if (!all_finite(y)) throw std::invalid_argument("solve_classo: non-finite data");

    const std::size_t n = op.rows();
    const std::size_t p = op.cols();
    const double lambda = cfg.lambda;

    double L = detail::op_norm_sq_estimate(op, cfg.step_rule == StepRule::FixedLipschitz ? 100 : 20) /
               static_cast<double>(n);
    if (!(L > 0.0)) L = 1.0;
    if (cfg.step_rule == StepRule::FixedLipschitz) L *= 1.01;

    cvec x(p, std::complex<double>(0.0, 0.0));
    cvec yv = x;
    double t = 1.0;

    auto smooth_value = [&](const cvec& b, cvec& out_residual) {
        const cvec xb = apply_forward(op, b);
        out_residual.resize(n);
        for (std::size_t i = 0; i < n; ++i) out_residual[i] = y[i] - xb[i];
        return norm2_sq(out_residual) / (2.0 * static_cast<double>(n));
    };

    cvec res_x;
    double f_x = smooth_value(x, res_x);
    double obj_x = f_x + lambda * norm1(x);

    LassoSolution sol;
    sol.lambda = lambda;
    sol.objective_trace.reserve(std::min<std::size_t>(cfg.max_iters, 4096));

    // one prox step from `base` with backtracking on L; returns the accepted
    // candidate along with its smooth value and residual
    auto prox_step = [&](const cvec& base, double f_base, const cvec& res_base, cvec& cand,
                         double& f_cand, cvec& res_cand) {
        cvec grad = apply_adjoint(op, res_base);  // = X^*(y - X base)
        for (auto& g : grad) g = -g / static_cast<double>(n);
        for (;;) {
            cand.resize(p);
            for (std::size_t j = 0; j < p; ++j) cand[j] = base[j] - grad[j] / L;
            cand = prox_complex_l1(cand, lambda / L);
            f_cand = smooth_value(cand, res_cand);
            if (cfg.step_rule == StepRule::FixedLipschitz) break;
            double lin = 0.0, dist_sq = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                const std::complex<double> d = cand[j] - base[j];
                lin += (std::conj(d) * grad[j]).real();
                dist_sq += std::norm(d);
            }
            if (f_cand <= f_base + lin + 0.5 * L * dist_sq + 1e-15 * std::abs(f_base)) break;
            L *= 2.0;
        }
    };

    std::size_t k = 0;
    for (; k < cfg.max_iters; ++k) {
        cvec res_y;
        const double f_y = smooth_value(yv, res_y);

        cvec cand, res_cand;
        double f_cand = 0.0;
        prox_step(yv, f_y, res_y, cand, f_cand, res_cand);
        double obj_cand = f_cand + lambda * norm1(cand);

        if (obj_cand > obj_x) {
            // restart: momentum off, plain step from x (non-increasing by the
            // backtracking majorization)
            t = 1.0;
            prox_step(x, f_x, res_x, cand, f_cand, res_cand);
            obj_cand = f_cand + lambda * norm1(cand);
        }

        double dist = 0.0;
        for (std::size_t j = 0; j < p; ++j) dist += std::norm(cand[j] - x[j]);
        dist = std::sqrt(dist);

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        yv.resize(p);
        for (std::size_t j = 0; j < p; ++j)
            yv[j] = cand[j] + ((t - 1.0) / t_next) * (cand[j] - x[j]);
        t = t_next;

        x = cand;
        res_x = res_cand;
        f_x = f_cand;
        obj_x = obj_cand;
        sol.objective_trace.push_back(obj_x);

        const double x_norm = norm2(x);
        if (dist <= cfg.rel_tol * std::max(x_norm, 1e-30)) {
            sol.converged = true;
            ++k;
            break;
        }
        if (cfg.dual_gap_tol && (k % 16 == 15)) {
            const double gap = detail::lasso_dual_gap(op, y, x, lambda);
            if (gap <= *cfg.dual_gap_tol) {
                sol.converged = true;
                ++k;
                break;
            }
        }
    }

    sol.beta_hat = std::move(x);
    sol.residual = std::move(res_x);
    sol.iterations = k;
    sol.final_gap = detail::lasso_dual_gap(op, y, sol.beta_hat, lambda);
    return sol;
}

// Independent brute-force oracle: plain (un-accelerated) proximal gradient
// with the exact Lipschitz step on a dense matrix, iterated until the
// Fenchel duality gap falls below gap_tol (or the numerical noise floor).
// Intended for small instances only.
inline LassoSolution solve_classo_reference(const Eigen::MatrixXcd& X_dense, const cvec& y,
                                            double lambda, double gap_tol = 1e-10,
                                            std::size_t max_iters = 10000000) {
    const std::size_t n = static_cast<std::size_t>(X_dense.rows());
    const std::size_t p = static_cast<std::size_t>(X_dense.cols());
    if (y.size() != n) throw std::invalid_argument("solve_classo_reference: dimension mismatch");
    if (lambda < 0.0) throw std::invalid_argument("solve_classo_reference: negative lambda");

    Eigen::Map<const Eigen::VectorXcd> ym(y.data(), static_cast<Eigen::Index>(n));
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(X_dense);
    const double smax = svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
    const double L = std::max(smax * smax / static_cast<double>(n), 1e-300);

    Eigen::VectorXcd beta = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(p));

    auto gap_at = [&](const Eigen::VectorXcd& b) {
        const Eigen::VectorXcd r = X_dense * b - ym;
        const double primal = r.squaredNorm() / (2.0 * static_cast<double>(n)) +
                              lambda * b.cwiseAbs().sum();
        const Eigen::VectorXcd u = r / static_cast<double>(n);
        const double xtu_inf = (X_dense.adjoint() * u).cwiseAbs().maxCoeff();
        const double s = (xtu_inf > lambda && xtu_inf > 0.0) ? lambda / xtu_inf : 1.0;
        const double dual = -s * (u.dot(ym)).real() -
                            0.5 * static_cast<double>(n) * s * s * u.squaredNorm();
        return std::pair<double, double>(primal - dual, primal);
    };

    double gap = 0.0, primal = 0.0;
    bool reached = false;
    std::size_t iters = 0;
    for (; iters < max_iters; ++iters) {
        if (iters % 8 == 0) {
            std::tie(gap, primal) = gap_at(beta);
            // stop at the requested gap, or once the gap is indistinguishable
            // from floating-point noise on this objective
            if (gap <= gap_tol || gap <= 64.0 * 2.220446049250313e-16 * (1.0 + std::abs(primal))) {
                reached = true;
                break;
            }
        }
        const Eigen::VectorXcd grad = X_dense.adjoint() * (X_dense * beta - ym) /
                                      static_cast<double>(n);
        Eigen::VectorXcd z = beta - grad / L;
        const double thr = lambda / L;
        for (Eigen::Index j = 0; j < z.size(); ++j) {
            const double mag = std::abs(z(j));
            z(j) = (mag <= thr) ? std::complex<double>(0.0, 0.0) : z(j) * (1.0 - thr / mag);
        }
        beta = z;
    }
    if (!reached) throw std::runtime_error("solve_classo_reference: gap tolerance not reached");

    LassoSolution sol;
    sol.lambda = lambda;
    sol.iterations = iters;
    sol.converged = true;
    sol.final_gap = gap;
    sol.beta_hat.assign(beta.data(), beta.data() + beta.size());
    const Eigen::VectorXcd r = ym - X_dense * beta;
    sol.residual.assign(r.data(), r.data() + r.size());
    return sol;
}

namespace detail {

// Row-subset view of an operator, materialized as a new operator.
inline DesignOperator subset_rows(const DesignOperator& op,
                                  const std::vector<std::size_t>& rows) {
    if (const auto* f = std::get_if<SubsampledFourier>(&op.kind())) {
        SamplingPattern sub;
        sub.p = f->pattern.p;
        sub.n = rows.size();
        sub.with_replacement = f->pattern.with_replacement;
        sub.measure = f->pattern.measure;
        sub.row_indices.reserve(rows.size());
        for (auto r : rows) sub.row_indices.push_back(f->pattern.row_indices.at(r));
        return DesignOperator(SubsampledFourier{std::move(sub)});
    }
    if (const auto* e = std::get_if<ExplicitBos>(&op.kind())) {
        Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows.size()), e->matrix.cols());
        for (std::size_t i = 0; i < rows.size(); ++i)
            m.row(static_cast<Eigen::Index>(i)) = e->matrix.row(static_cast<Eigen::Index>(rows[i]));
        return DesignOperator(ExplicitBos{std::move(m), e->bound_K});
    }
    const auto& phf = std::get<PreconditionedHaarFourier>(op.kind());
    SamplingPattern sub;
    sub.p = phf.pattern.p;
    sub.n = rows.size();
    sub.with_replacement = phf.pattern.with_replacement;
    sub.measure = phf.pattern.measure;
    Preconditioner pc;
    for (auto r : rows) {
        sub.row_indices.push_back(phf.pattern.row_indices.at(r));
        pc.diag.push_back(phf.precond.diag.at(r));
    }
    return DesignOperator(PreconditionedHaarFourier{std::move(sub), std::move(pc)},
                          op.bos_constant());
}

}  // namespace detail

struct CrossValidationResult {
    double lambda_hat = 0.0;
    std::vector<double> cv_errors;  // one per grid entry, same order
};

// K-fold cross-validation over a lambda grid. Each held-in fit minimizes
// (1/(n - |I_k|)) ||y - X b||^2 + lambda ||b||_1, i.e. the standard solver
// at lambda/2; the score is the summed held-out squared prediction error.
// Ties resolve to the smallest lambda.
inline CrossValidationResult cross_validate_lambda(const DesignOperator& op, const cvec& y,
                                                   const std::vector<double>& grid,
                                                   std::size_t folds, std::uint64_t seed,
                                                   const LassoConfig& solve_cfg = {}) {
    if (grid.empty()) throw std::invalid_argument("cross_validate_lambda: empty grid");
    for (double l : grid)
        if (l < 0.0) throw std::invalid_argument("cross_validate_lambda: negative lambda");
    const std::size_t n = op.rows();
    if (folds < 2 || n < folds)
        throw std::invalid_argument("cross_validate_lambda: need 2 <= K <= n");
    if (y.size() != n) throw std::invalid_argument("cross_validate_lambda: dimension mismatch");

    // deterministic near-equal fold assignment
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(derive_seed(seed, 0xf01d5u));
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(n - i));
        std::swap(perm[i], perm[j]);
    }
    std::vector<std::vector<std::size_t>> fold_rows(folds);
    for (std::size_t i = 0; i < n; ++i) fold_rows[i % folds].push_back(perm[i]);

    CrossValidationResult result;
    result.cv_errors.assign(grid.size(), 0.0);

    for (std::size_t k = 0; k < folds; ++k) {
        std::vector<std::size_t> train;
        train.reserve(n - fold_rows[k].size());
        std::vector<bool> held(n, false);
        for (auto r : fold_rows[k]) held[r] = true;
        for (std::size_t i = 0; i < n; ++i)
            if (!held[i]) train.push_back(i);

        const DesignOperator sub = detail::subset_rows(op, train);
        cvec y_train(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) y_train[i] = y[train[i]];

        for (std::size_t g = 0; g < grid.size(); ++g) {
            LassoConfig cfg = solve_cfg;
            cfg.lambda = grid[g] / 2.0;  // data-term weight 1/(n-|I_k|), no half
            const LassoSolution fit = solve_classo(sub, y_train, cfg);
            const cvec pred = apply_forward(op, fit.beta_hat);
            double err = 0.0;
            for (auto r : fold_rows[k]) err += std::norm(y[r] - pred[r]);
            result.cv_errors[g] += err;
        }
    }

    std::size_t best = 0;
    for (std::size_t g = 1; g < grid.size(); ++g) {
        const bool better = result.cv_errors[g] < result.cv_errors[best] ||
                            (result.cv_errors[g] == result.cv_errors[best] && grid[g] < grid[best]);
        if (better) best = g;
    }
    result.lambda_hat = grid[best];
    return result;
}

// Default inner weight for the scaled-LASSO alternation, sqrt(2 log p / n).
inline double scaled_lasso_lambda_bar(std::size_t p, std::size_t n) {
    return std::sqrt(2.0 * std::log(static_cast<double>(p)) / static_cast<double>(n));
}

// Scaled-LASSO noise estimator: alternate beta <- lasso(lambda = sigma_hat *
// lambda_bar) and sigma_hat <- ||y - X beta||_2 / sqrt(n) from sigma_hat_0 =
// ||y||_2 / sqrt(n) until the relative change drops below tol.
inline NoiseEstimate estimate_noise_scaled_lasso(const DesignOperator& op, const cvec& y,
                                                 double lambda_bar, double tol = 1e-4,
                                                 const LassoConfig& solve_cfg = {}) {
    if (lambda_bar <= 0.0)
        throw std::invalid_argument("estimate_noise_scaled_lasso: lambda_bar must be > 0");
    const std::size_t n = op.rows();
    if (y.size() != n)
        throw std::invalid_argument("estimate_noise_scaled_lasso: dimension mismatch");

    NoiseEstimate est;
    double sigma = norm2(y) / std::sqrt(static_cast<double>(n));
    if (sigma == 0.0) {
        est.degenerate = true;
        return est;
    }
    for (std::size_t outer = 0; outer < 100; ++outer) {
        LassoConfig cfg = solve_cfg;
        cfg.lambda = sigma * lambda_bar;
        const LassoSolution fit = solve_classo(op, y, cfg);
        const double next = norm2(fit.residual) / std::sqrt(static_cast<double>(n));
        est.iterations = outer + 1;
        if (next == 0.0) {
            est.sigma_hat = 0.0;
            est.degenerate = true;
            return est;
        }
        if (std::abs(next / sigma - 1.0) < tol) {
            est.sigma_hat = next;
            return est;
        }
        sigma = next;
    }
    throw std::runtime_error("estimate_noise_scaled_lasso: no fixpoint within 100 outer iterations");
}

}  // namespace bosuq
