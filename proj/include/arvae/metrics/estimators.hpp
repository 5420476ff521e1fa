#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace arvae::metrics {

struct Correlation {
    double value = 0.0;
    // False when either input has zero rank variance; value is then 0.
    bool defined = true;
};

/// Fractional (average) ranks, 1-based.
std::vector<double> average_ranks(std::span<const double> x);

/// Pearson correlation of the average ranks. Needs at least three values.
Correlation spearman(std::span<const double> x, std::span<const double> y);

/// Quantile bin labels: bin(v) = min(bins - 1, floor(bins * #{u < v} / N)).
/// Equal values always share a bin.
std::vector<std::uint32_t> quantile_bins(std::span<const double> x, std::size_t bins);

/// Plug-in entropy (nats) of discrete labels.
double entropy(std::span<const std::uint32_t> labels, std::size_t bins);
double binned_entropy(std::span<const double> x, std::size_t bins);

/// Plug-in mutual information (nats) of two label sequences.
double mutual_information(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y, std::size_t bins);
/// Both inputs quantile-binned with `bins` bins first.
double mutual_information(std::span<const double> x, std::span<const double> y, std::size_t bins);

/// Deterministic 50/50 split of [0, n): first half for fitting, second for
/// scoring.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};
Split half_split(std::size_t n, std::uint64_t seed);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
};

/// Least squares a ~ slope * z + intercept over `rows`.
LinearFit fit_line(std::span<const double> z, std::span<const double> a, std::span<const std::size_t> rows);

/// Coefficient of determination of `fit` on `rows` (can be negative; 0 when
/// the target is constant on those rows).
double r_squared(const LinearFit& fit, std::span<const double> z, std::span<const double> a,
                 std::span<const std::size_t> rows);

} // namespace arvae::metrics
