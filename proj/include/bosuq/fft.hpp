#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace bosuq::detail {

// Thread-safe cache of FFTW plans. FFTW's planner is not reentrant, so
// plan creation is serialized; fftw_execute_dft on a cached plan is safe
// to call concurrently. Plans are created with FFTW_UNALIGNED so they can
// be executed on any caller-provided buffer.
class FftPlans {
  public:
    static void run(const std::complex<double>* in, std::complex<double>* out,
                    std::size_t n, int sign) {
        if (n == 0) throw std::invalid_argument("fft: empty input");
        fftw_plan plan = instance().get(n, sign);
        fftw_execute_dft(plan,
                         reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                         reinterpret_cast<fftw_complex*>(out));
    }

  private:
    static FftPlans& instance() {
        static FftPlans cache;
        return cache;
    }

    fftw_plan get(std::size_t n, int sign) {
        std::lock_guard<std::mutex> lock(mutex_);
        auto key = std::pair<std::size_t, int>(n, sign);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;
        std::vector<std::complex<double>> a(n), b(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n),
                                          reinterpret_cast<fftw_complex*>(a.data()),
                                          reinterpret_cast<fftw_complex*>(b.data()),
                                          sign, FFTW_ESTIMATE | FFTW_UNALIGNED);
        plans_.emplace(key, plan);
        return plan;
    }

    std::mutex mutex_;
    std::map<std::pair<std::size_t, int>, fftw_plan> plans_;
};

// y_j = sum_k x_k e^{+2 pi i j k / n}, unnormalized
inline std::vector<std::complex<double>> dft_unnormalized_pos(
    const std::vector<std::complex<double>>& x) {
    std::vector<std::complex<double>> y(x.size());
    FftPlans::run(x.data(), y.data(), x.size(), FFTW_BACKWARD);
    return y;
}

// y_j = sum_k x_k e^{-2 pi i j k / n}, unnormalized (adjoint kernel)
inline std::vector<std::complex<double>> dft_unnormalized_neg(
    const std::vector<std::complex<double>>& x) {
    std::vector<std::complex<double>> y(x.size());
    FftPlans::run(x.data(), y.data(), x.size(), FFTW_FORWARD);
    return y;
}

}  // namespace bosuq::detail
