#include "arvae/metrics/estimators.hpp"

#include "arvae/numgrad/errors.hpp"
#include "arvae/numgrad/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace arvae::metrics {

std::vector<double> average_ranks(std::span<const double> x)
{
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        // positions i..j (0-based) share the average of ranks i+1..j+1
        const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
        i = j + 1;
    }
    return ranks;
}

Correlation spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size()) throw DimensionError("spearman: inputs differ in length");
    if (x.size() < 3) throw ContractError("spearman needs at least three values");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) return {0.0, false};
    return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), true};
}

std::vector<std::uint32_t> quantile_bins(std::span<const double> x, std::size_t bins)
{
    if (bins == 0) throw ContractError("bin count must be positive");
    if (x.empty()) return {};
    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = x.size();
    std::vector<std::uint32_t> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto less = static_cast<std::size_t>(std::lower_bound(sorted.begin(), sorted.end(), x[i]) - sorted.begin());
        out[i] = static_cast<std::uint32_t>(std::min(bins - 1, bins * less / n));
    }
    return out;
}

double entropy(std::span<const std::uint32_t> labels, std::size_t bins)
{
    if (labels.empty()) return 0.0;
    std::vector<std::size_t> counts(bins, 0);
    for (auto l : labels) ++counts.at(l);
    const double n = static_cast<double>(labels.size());
    double h = 0.0;
    for (auto c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log(p);
    }
    return h;
}

double binned_entropy(std::span<const double> x, std::size_t bins)
{
    const auto labels = quantile_bins(x, bins);
    return entropy(labels, bins);
}

double mutual_information(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y, std::size_t bins)
{
    if (x.size() != y.size()) throw DimensionError("mutual_information: inputs differ in length");
    if (x.empty()) return 0.0;
    std::vector<std::size_t> joint(bins * bins, 0), cx(bins, 0), cy(bins, 0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        ++joint.at(x[i] * bins + y[i]);
        ++cx[x[i]];
        ++cy[y[i]];
    }
    const double n = static_cast<double>(x.size());
    double mi = 0.0;
    for (std::size_t i = 0; i < bins; ++i) {
        for (std::size_t j = 0; j < bins; ++j) {
            const auto c = joint[i * bins + j];
            if (c == 0) continue;
            const double pxy = static_cast<double>(c) / n;
            mi += pxy * std::log(pxy * n * n / (static_cast<double>(cx[i]) * static_cast<double>(cy[j])));
        }
    }
    return std::max(mi, 0.0);
}

double mutual_information(std::span<const double> x, std::span<const double> y, std::size_t bins)
{
    const auto bx = quantile_bins(x, bins);
    const auto by = quantile_bins(y, bins);
    return mutual_information(bx, by, bins);
}

Split half_split(std::size_t n, std::uint64_t seed)
{
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    numgrad::SeededRng rng(seed);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
    Split s;
    s.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n / 2));
    s.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n / 2), order.end());
    return s;
}

LinearFit fit_line(std::span<const double> z, std::span<const double> a, std::span<const std::size_t> rows)
{
    if (rows.empty()) return {};
    const double n = static_cast<double>(rows.size());
    double mz = 0.0, ma = 0.0;
    for (auto r : rows) {
        mz += z[r];
        ma += a[r];
    }
    mz /= n;
    ma /= n;
    double szz = 0.0, sza = 0.0;
    for (auto r : rows) {
        szz += (z[r] - mz) * (z[r] - mz);
        sza += (z[r] - mz) * (a[r] - ma);
    }
    LinearFit fit;
    fit.slope = szz > 0.0 ? sza / szz : 0.0;
    fit.intercept = ma - fit.slope * mz;
    return fit;
}

double r_squared(const LinearFit& fit, std::span<const double> z, std::span<const double> a,
                 std::span<const std::size_t> rows)
{
    if (rows.empty()) return 0.0;
    double ma = 0.0;
    for (auto r : rows) ma += a[r];
    ma /= static_cast<double>(rows.size());
    double sse = 0.0, sst = 0.0;
    for (auto r : rows) {
        const double e = a[r] - (fit.slope * z[r] + fit.intercept);
        sse += e * e;
        sst += (a[r] - ma) * (a[r] - ma);
    }
    if (sst == 0.0) return 0.0;
    return 1.0 - sse / sst;
}

} // namespace arvae::metrics
