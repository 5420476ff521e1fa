#include "arvae/metrics/suite.hpp"

#include "arvae/numgrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace arvae::metrics {

namespace {

double mean_of(const std::vector<double>& v)
{
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

MetricScores finish(std::vector<double> scores, std::vector<bool> undefined)
{
    MetricScores out;
    out.mean = mean_of(scores);
    out.per_attribute = std::move(scores);
    out.undefined = std::move(undefined);
    return out;
}

std::vector<std::vector<std::uint32_t>> bin_rows(const std::vector<std::vector<double>>& rows, std::size_t bins)
{
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(quantile_bins(r, bins));
    return out;
}

// mi[d][l] = MI(z_d, a_l)
std::vector<std::vector<double>> mi_matrix(const LatentAttributeTable& t, std::size_t bins)
{
    const auto bz = bin_rows(t.latents, bins);
    const auto ba = bin_rows(t.attributes, bins);
    std::vector<std::vector<double>> mi(t.dims(), std::vector<double>(t.attribute_count()));
    for (std::size_t d = 0; d < t.dims(); ++d) {
        for (std::size_t l = 0; l < t.attribute_count(); ++l) mi[d][l] = mutual_information(bz[d], ba[l], bins);
    }
    return mi;
}

// s[d][l] = held-out R^2 of z_d -> a_l (unclipped), and the train-half value.
struct R2Tables {
    std::vector<std::vector<double>> train;
    std::vector<std::vector<double>> test;
};

R2Tables r2_tables(const LatentAttributeTable& t, const MetricSettings& settings)
{
    const Split split = half_split(t.examples(), settings.split_seed);
    R2Tables out;
    out.train.assign(t.dims(), std::vector<double>(t.attribute_count()));
    out.test = out.train;
    for (std::size_t d = 0; d < t.dims(); ++d) {
        for (std::size_t l = 0; l < t.attribute_count(); ++l) {
            const LinearFit fit = fit_line(t.latents[d], t.attributes[l], split.train);
            out.train[d][l] = r_squared(fit, t.latents[d], t.attributes[l], split.train);
            out.test[d][l] = r_squared(fit, t.latents[d], t.attributes[l], split.test);
        }
    }
    return out;
}

std::string fmt(double v)
{
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

} // namespace

void LatentAttributeTable::validate() const
{
    if (latents.empty()) throw ContractError("metric table has no latent dimensions");
    if (attribute_names.size() != attributes.size()) {
        throw DimensionError("metric table: " + std::to_string(attributes.size()) + " attribute rows but " +
                             std::to_string(attribute_names.size()) + " names");
    }
    const std::size_t n = latents.front().size();
    for (const auto& r : latents) {
        if (r.size() != n) throw DimensionError("metric table: ragged latent rows");
    }
    for (const auto& r : attributes) {
        if (r.size() != n) throw DimensionError("metric table: attribute and latent column counts differ");
    }
    if (n < kMinExamples) {
        throw ContractError("metric table needs at least " + std::to_string(kMinExamples) + " examples, got " +
                            std::to_string(n));
    }
}

MetricScores interpretability(const LatentAttributeTable& table, const MetricSettings& settings)
{
    table.validate();
    const R2Tables r2 = r2_tables(table, settings);
    std::vector<double> scores;
    for (std::size_t l = 0; l < table.attribute_count(); ++l) {
        std::size_t best = 0;
        for (std::size_t d = 1; d < table.dims(); ++d) {
            if (r2.train[d][l] > r2.train[best][l]) best = d;
        }
        scores.push_back(std::clamp(r2.test[best][l], 0.0, 1.0));
    }
    return finish(std::move(scores), std::vector<bool>(table.attribute_count(), false));
}

ModularityScores modularity(const LatentAttributeTable& table, const MetricSettings& settings)
{
    table.validate();
    const auto mi = mi_matrix(table, settings.bins);
    const std::size_t L = table.attribute_count();
    ModularityScores out;
    for (std::size_t d = 0; d < table.dims(); ++d) {
        if (L <= 1) {
            out.per_dimension.push_back(1.0);
            continue;
        }
        const auto top = std::max_element(mi[d].begin(), mi[d].end());
        const double theta = *top;
        if (theta < 1e-6) {
            out.per_dimension.push_back(1.0);
            continue;
        }
        double off = 0.0;
        for (std::size_t l = 0; l < L; ++l) {
            if (static_cast<std::ptrdiff_t>(l) == top - mi[d].begin()) continue;
            off += mi[d][l] * mi[d][l];
        }
        const double score = 1.0 - off / (theta * theta * static_cast<double>(L - 1));
        out.per_dimension.push_back(std::clamp(score, 0.0, 1.0));
    }
    out.mean = mean_of(out.per_dimension);
    return out;
}

MetricScores mig(const LatentAttributeTable& table, const MetricSettings& settings)
{
    table.validate();
    const auto mi = mi_matrix(table, settings.bins);
    std::vector<double> scores;
    std::vector<bool> undefined;
    for (std::size_t l = 0; l < table.attribute_count(); ++l) {
        const double h = binned_entropy(table.attributes[l], settings.bins);
        if (h <= 0.0) {
            scores.push_back(0.0);
            undefined.push_back(true);
            continue;
        }
        std::vector<double> col;
        for (std::size_t d = 0; d < table.dims(); ++d) col.push_back(mi[d][l]);
        std::sort(col.begin(), col.end(), std::greater<>());
        const double gap = col.size() > 1 ? col[0] - col[1] : col[0];
        scores.push_back(std::clamp(gap / h, 0.0, 1.0));
        undefined.push_back(false);
    }
    return finish(std::move(scores), std::move(undefined));
}

MetricScores sap(const LatentAttributeTable& table, const MetricSettings& settings)
{
    table.validate();
    const R2Tables r2 = r2_tables(table, settings);
    std::vector<double> scores;
    for (std::size_t l = 0; l < table.attribute_count(); ++l) {
        std::vector<double> col;
        for (std::size_t d = 0; d < table.dims(); ++d) col.push_back(std::clamp(r2.test[d][l], 0.0, 1.0));
        std::sort(col.begin(), col.end(), std::greater<>());
        scores.push_back(col.size() > 1 ? col[0] - col[1] : col[0]);
    }
    return finish(std::move(scores), std::vector<bool>(table.attribute_count(), false));
}

MetricScores scc(const LatentAttributeTable& table, const MetricSettings& settings)
{
    table.validate();
    std::vector<double> scores;
    std::vector<bool> undefined;
    for (std::size_t l = 0; l < table.attribute_count(); ++l) {
        double best = -std::numeric_limits<double>::infinity();
        bool any = false;
        for (std::size_t d = 0; d < table.dims(); ++d) {
            const Correlation c = spearman(table.latents[d], table.attributes[l]);
            if (!c.defined) continue;
            any = true;
            best = std::max(best, settings.absolute_scc ? std::fabs(c.value) : c.value);
        }
        scores.push_back(any ? best : 0.0);
        undefined.push_back(!any);
    }
    return finish(std::move(scores), std::move(undefined));
}

std::size_t most_informative_dimension(const LatentAttributeTable& table, std::size_t l, std::size_t bins)
{
    if (l >= table.attribute_count()) throw ContractError("attribute index out of range");
    const auto ba = quantile_bins(table.attributes[l], bins);
    std::size_t best = 0;
    double best_mi = -1.0;
    for (std::size_t d = 0; d < table.dims(); ++d) {
        const double mi = mutual_information(quantile_bins(table.latents[d], bins), ba, bins);
        if (mi > best_mi) {
            best_mi = mi;
            best = d;
        }
    }
    return best;
}

MetricReport evaluate(const LatentAttributeTable& table, const MetricSettings& settings)
{
    MetricReport r;
    r.settings = settings;
    r.attribute_names = table.attribute_names;
    r.interpretability = interpretability(table, settings);
    r.modularity_dims = modularity(table, settings);
    r.mig = mig(table, settings);
    r.sap = sap(table, settings);
    r.scc = scc(table, settings);

    std::vector<double> per_attr;
    for (std::size_t l = 0; l < table.attribute_count(); ++l) {
        per_attr.push_back(r.modularity_dims.per_dimension[most_informative_dimension(table, l, settings.bins)]);
    }
    r.modularity.per_attribute = std::move(per_attr);
    r.modularity.mean = r.modularity_dims.mean;
    r.modularity.undefined.assign(table.attribute_count(), false);
    return r;
}

void write_report(std::ostream& out, const MetricReport& report)
{
    out << "# bins=" << report.settings.bins << ",split_seed=" << report.settings.split_seed
        << ",scc=" << (report.settings.absolute_scc ? "absolute" : "signed") << "\r\n";
    out << "metric,attribute,score\r\n";
    const std::pair<const char*, const MetricScores*> metrics[] = {
        {"interpretability", &report.interpretability},
        {"modularity", &report.modularity},
        {"mig", &report.mig},
        {"sap", &report.sap},
        {"scc", &report.scc},
    };
    for (const auto& [name, scores] : metrics) {
        for (std::size_t l = 0; l < report.attribute_names.size(); ++l) {
            out << name << ',' << report.attribute_names[l] << ',' << fmt(scores->per_attribute[l]) << "\r\n";
        }
    }
    for (const auto& [name, scores] : metrics) out << name << ",mean," << fmt(scores->mean) << "\r\n";
    if (report.recon_accuracy) out << "recon_accuracy,all," << fmt(*report.recon_accuracy) << "\r\n";
}

} // namespace arvae::metrics
