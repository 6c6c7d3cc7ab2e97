#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bosuq/rng.hpp"

namespace bosuq {

struct UniformMeasure {};

struct DensityMeasure {
    std::vector<double> nu;  // probability weights over [0, p)
};

using RowMeasure = std::variant<UniformMeasure, DensityMeasure>;

// Row-sampling pattern of a subsampled design: which rows of the full
// p x p system were drawn, and under which measure.
struct SamplingPattern {
    std::size_t p = 0;
    std::size_t n = 0;
    bool with_replacement = true;
    std::vector<std::size_t> row_indices;  // length n, each in [0, p)
    RowMeasure measure = UniformMeasure{};

    void validate() const {
        if (p == 0) throw std::invalid_argument("SamplingPattern: p must be >= 1");
        if (row_indices.size() != n)
            throw std::invalid_argument("SamplingPattern: index count != n");
        for (auto idx : row_indices)
            if (idx >= p) throw std::invalid_argument("SamplingPattern: index out of range");
        if (!with_replacement) {
            auto sorted = row_indices;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw std::invalid_argument("SamplingPattern: duplicate index without replacement");
        }
        if (const auto* d = std::get_if<DensityMeasure>(&measure)) {
            if (d->nu.size() != p)
                throw std::invalid_argument("SamplingPattern: density length != p");
            double sum = 0.0;
            for (double w : d->nu) {
                if (w < 0.0 || !std::isfinite(w))
                    throw std::invalid_argument("SamplingPattern: negative density weight");
                sum += w;
            }
            if (std::abs(sum - 1.0) > 1e-12)
                throw std::invalid_argument("SamplingPattern: density does not sum to 1");
        }
    }
};

// Draw n row indices uniformly from [0, p). Without replacement this is a
// partial Fisher-Yates shuffle: O(n) time, exactly uniform over subsets.
inline SamplingPattern sample_uniform_rows(std::size_t p, std::size_t n,
                                           bool with_replacement, std::uint64_t seed) {
    if (p < 1 || n < 1) throw std::invalid_argument("sample_uniform_rows: p, n must be >= 1");
    if (!with_replacement && n > p)
        throw std::invalid_argument("sample_uniform_rows: n > p without replacement");

    SamplingPattern pat;
    pat.p = p;
    pat.n = n;
    pat.with_replacement = with_replacement;
    pat.measure = UniformMeasure{};
    pat.row_indices.resize(n);

    Rng rng(seed);
    if (with_replacement) {
        for (std::size_t i = 0; i < n; ++i)
            pat.row_indices[i] = static_cast<std::size_t>(rng.uniform_below(p));
    } else {
        std::vector<std::size_t> pool(p);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = i + static_cast<std::size_t>(rng.uniform_below(p - i));
            std::swap(pool[i], pool[j]);
            pat.row_indices[i] = pool[i];
        }
    }
    return pat;
}

// Draw n row indices i.i.d. from the probability vector nu (always with
// replacement), by inverse-CDF with binary search over the cumulative sums.
inline SamplingPattern sample_density_rows(const std::vector<double>& nu, std::size_t n,
                                           std::uint64_t seed) {
    if (nu.empty() || n < 1)
        throw std::invalid_argument("sample_density_rows: empty density or n < 1");
    double sum = 0.0;
    for (double w : nu) {
        if (w < 0.0 || !std::isfinite(w))
            throw std::invalid_argument("sample_density_rows: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw std::invalid_argument("sample_density_rows: weights must sum to 1");

    const std::size_t p = nu.size();
    std::vector<double> cdf(p);
    double acc = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
        acc += nu[j];
        cdf[j] = acc;
    }
    cdf.back() = 1.0;  // guard against rounding in the last bin

    SamplingPattern pat;
    pat.p = p;
    pat.n = n;
    pat.with_replacement = true;
    pat.measure = DensityMeasure{nu};
    pat.row_indices.resize(n);

    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        pat.row_indices[i] =
            static_cast<std::size_t>(std::distance(cdf.begin(), it) == static_cast<std::ptrdiff_t>(p)
                                         ? p - 1
                                         : std::distance(cdf.begin(), it));
    }
    return pat;
}

inline nlohmann::json to_json(const SamplingPattern& pat) {
    nlohmann::json j;
    j["p"] = pat.p;
    j["n"] = pat.n;
    j["with_replacement"] = pat.with_replacement;
    j["indices"] = pat.row_indices;
    if (std::holds_alternative<UniformMeasure>(pat.measure))
        j["measure"] = "uniform";
    else
        j["measure"] = nlohmann::json{{"density", std::get<DensityMeasure>(pat.measure).nu}};
    return j;
}

inline SamplingPattern pattern_from_json(const nlohmann::json& j) {
    SamplingPattern pat;
    pat.p = j.at("p").get<std::size_t>();
    pat.n = j.at("n").get<std::size_t>();
    pat.with_replacement = j.at("with_replacement").get<bool>();
    pat.row_indices = j.at("indices").get<std::vector<std::size_t>>();
    const auto& m = j.at("measure");
    if (m.is_string() && m.get<std::string>() == "uniform")
        pat.measure = UniformMeasure{};
    else
        pat.measure = DensityMeasure{m.at("density").get<std::vector<double>>()};
    pat.validate();
    return pat;
}

}  // namespace bosuq
