#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <variant>
#include <vector>

#include "bosuq/fft.hpp"
#include "bosuq/haar.hpp"
#include "bosuq/linalg.hpp"
#include "bosuq/sampling.hpp"

namespace bosuq {

// Diagonal row reweighting d_l > 0, one entry per sampled row.
struct Preconditioner {
    std::vector<double> diag;

    void validate() const {
        for (double d : diag)
            if (!(d > 0.0) || !std::isfinite(d))
                throw std::invalid_argument("Preconditioner: entries must be positive and finite");
    }
};

// d_l = ||kappa||_2 / (sqrt(p) * kappa_{t_l}) for each sampled row index t_l.
inline Preconditioner build_preconditioner(const std::vector<double>& kappa,
                                           const SamplingPattern& pattern) {
    if (kappa.size() != pattern.p)
        throw std::invalid_argument("build_preconditioner: kappa length != p");
    double norm_sq = 0.0;
    for (double k : kappa) {
        if (!(k > 0.0) || !std::isfinite(k))
            throw std::invalid_argument("build_preconditioner: kappa entries must be positive");
        norm_sq += k * k;
    }
    const double norm = std::sqrt(norm_sq);
    const double sqrt_p = std::sqrt(static_cast<double>(pattern.p));
    Preconditioner pc;
    pc.diag.resize(pattern.n);
    for (std::size_t l = 0; l < pattern.n; ++l)
        pc.diag[l] = norm / (sqrt_p * kappa[pattern.row_indices[l]]);
    return pc;
}

struct SubsampledFourier {
    SamplingPattern pattern;
};

struct ExplicitBos {
    Eigen::MatrixXcd matrix;  // n x p, dense; intended for small p
    double bound_K = 1.0;
};

// A = D F_Omega H^*: preconditioned Fourier rows composed with the inverse
// Haar transform; the solver sees this operator with data D y.
struct PreconditionedHaarFourier {
    SamplingPattern pattern;
    Preconditioner precond;
};

// A measurement operator with fast forward/adjoint application. Immutable
// after construction; safe to share across threads.
class DesignOperator {
  public:
    explicit DesignOperator(SubsampledFourier kind) : kind_(std::move(kind)) {
        std::get<SubsampledFourier>(kind_).pattern.validate();
        K_ = 1.0;
    }

    explicit DesignOperator(ExplicitBos kind) : kind_(std::move(kind)) {
        const auto& eb = std::get<ExplicitBos>(kind_);
        if (eb.bound_K < 1.0)
            throw std::invalid_argument("DesignOperator: BOS constant must be >= 1");
        const double tol = eb.bound_K * (1.0 + 1e-12);
        for (Eigen::Index i = 0; i < eb.matrix.rows(); ++i)
            for (Eigen::Index j = 0; j < eb.matrix.cols(); ++j)
                if (std::abs(eb.matrix(i, j)) > tol)
                    throw std::invalid_argument("DesignOperator: entry exceeds BOS bound K");
        K_ = eb.bound_K;
    }

    DesignOperator(PreconditionedHaarFourier kind, double bos_constant)
        : kind_(std::move(kind)), K_(bos_constant) {
        auto& phf = std::get<PreconditionedHaarFourier>(kind_);
        phf.pattern.validate();
        phf.precond.validate();
        if (!is_power_of_two(phf.pattern.p))
            throw std::invalid_argument("DesignOperator: Haar variant needs power-of-two p");
        if (phf.precond.diag.size() != phf.pattern.n)
            throw std::invalid_argument("DesignOperator: preconditioner length != n");
    }

    std::size_t rows() const {
        if (const auto* f = std::get_if<SubsampledFourier>(&kind_)) return f->pattern.n;
        if (const auto* e = std::get_if<ExplicitBos>(&kind_))
            return static_cast<std::size_t>(e->matrix.rows());
        return std::get<PreconditionedHaarFourier>(kind_).pattern.n;
    }

    std::size_t cols() const {
        if (const auto* f = std::get_if<SubsampledFourier>(&kind_)) return f->pattern.p;
        if (const auto* e = std::get_if<ExplicitBos>(&kind_))
            return static_cast<std::size_t>(e->matrix.cols());
        return std::get<PreconditionedHaarFourier>(kind_).pattern.p;
    }

    double bos_constant() const { return K_; }

    const std::variant<SubsampledFourier, ExplicitBos, PreconditionedHaarFourier>& kind() const {
        return kind_;
    }

  private:
    std::variant<SubsampledFourier, ExplicitBos, PreconditionedHaarFourier> kind_;
    double K_ = 1.0;
};

namespace detail {

// Full positive-kernel DFT then row selection: O(p log p).
inline cvec fourier_rows_forward(const SamplingPattern& pat, const cvec& beta) {
    const cvec full = dft_unnormalized_pos(beta);
    cvec out(pat.n);
    for (std::size_t l = 0; l < pat.n; ++l) out[l] = full[pat.row_indices[l]];
    return out;
}

// Adjoint: scatter-add (duplicated rows accumulate) then negative-kernel DFT.
inline cvec fourier_rows_adjoint(const SamplingPattern& pat, const cvec& v) {
    cvec padded(pat.p, std::complex<double>(0.0, 0.0));
    for (std::size_t l = 0; l < pat.n; ++l) padded[pat.row_indices[l]] += v[l];
    return dft_unnormalized_neg(padded);
}

}  // namespace detail

inline cvec apply_forward(const DesignOperator& op, const cvec& beta) {
    if (beta.size() != op.cols())
        throw std::invalid_argument("apply_forward: dimension mismatch");
    if (const auto* f = std::get_if<SubsampledFourier>(&op.kind()))
        return detail::fourier_rows_forward(f->pattern, beta);
    if (const auto* e = std::get_if<ExplicitBos>(&op.kind())) {
        Eigen::Map<const Eigen::VectorXcd> b(beta.data(), static_cast<Eigen::Index>(beta.size()));
        Eigen::VectorXcd y = e->matrix * b;
        return cvec(y.data(), y.data() + y.size());
    }
    const auto& phf = std::get<PreconditionedHaarFourier>(op.kind());
    cvec out = detail::fourier_rows_forward(phf.pattern, haar_inverse(beta));
    for (std::size_t l = 0; l < out.size(); ++l) out[l] *= phf.precond.diag[l];
    return out;
}

inline cvec apply_adjoint(const DesignOperator& op, const cvec& v) {
    if (v.size() != op.rows())
        throw std::invalid_argument("apply_adjoint: dimension mismatch");
    if (const auto* f = std::get_if<SubsampledFourier>(&op.kind()))
        return detail::fourier_rows_adjoint(f->pattern, v);
    if (const auto* e = std::get_if<ExplicitBos>(&op.kind())) {
        Eigen::Map<const Eigen::VectorXcd> w(v.data(), static_cast<Eigen::Index>(v.size()));
        Eigen::VectorXcd y = e->matrix.adjoint() * w;
        return cvec(y.data(), y.data() + y.size());
    }
    const auto& phf = std::get<PreconditionedHaarFourier>(op.kind());
    cvec scaled(v.size());
    for (std::size_t l = 0; l < v.size(); ++l) scaled[l] = phf.precond.diag[l] * v[l];
    return haar_forward(detail::fourier_rows_adjoint(phf.pattern, scaled));
}

// The per-coordinate variance proxy used by the confidence radii.
// Plain designs: diag(X^*X / n). Preconditioned Haar-Fourier: the constant
// (1/n) ||D^2||_F^2, the diagonal of (1/n) F_Omega^* D^4 F_Omega.
inline rvec sigma_hat_diag(const DesignOperator& op) {
    const std::size_t p = op.cols();
    if (std::holds_alternative<SubsampledFourier>(op.kind()))
        return rvec(p, 1.0);  // unit-modulus entries
    if (const auto* e = std::get_if<ExplicitBos>(&op.kind())) {
        rvec d(p, 0.0);
        const double n = static_cast<double>(op.rows());
        for (std::size_t k = 0; k < p; ++k)
            d[k] = e->matrix.col(static_cast<Eigen::Index>(k)).squaredNorm() / n;
        return d;
    }
    const auto& phf = std::get<PreconditionedHaarFourier>(op.kind());
    double frob_sq = 0.0;
    for (double d : phf.precond.diag) frob_sq += d * d * d * d;
    return rvec(p, frob_sq / static_cast<double>(op.rows()));
}

// Dense matrix of the operator, built column-by-column through the fast
// paths. Convenience for diagnostics; the test oracles construct their
// matrices independently from the defining formulas.
inline Eigen::MatrixXcd dense_matrix(const DesignOperator& op) {
    const std::size_t n = op.rows(), p = op.cols();
    Eigen::MatrixXcd X(n, p);
    cvec e(p, std::complex<double>(0.0, 0.0));
    for (std::size_t k = 0; k < p; ++k) {
        e[k] = 1.0;
        const cvec col = apply_forward(op, e);
        for (std::size_t l = 0; l < n; ++l) X(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k)) = col[l];
        e[k] = 0.0;
    }
    return X;
}

}  // namespace bosuq
