#pragma once

#include "arvae/metrics/estimators.hpp"

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace arvae::metrics {

/// Latent codes (D rows of N) next to attributes (L rows of N).
struct LatentAttributeTable {
    std::vector<std::vector<double>> latents;
    std::vector<std::vector<double>> attributes;
    std::vector<std::string> attribute_names;

    static constexpr std::size_t kMinExamples = 100;

    std::size_t dims() const { return latents.size(); }
    std::size_t attribute_count() const { return attributes.size(); }
    std::size_t examples() const { return latents.empty() ? 0 : latents.front().size(); }

    /// Throws on ragged rows, a name count that differs from L, or fewer than
    /// kMinExamples columns.
    void validate() const;
};

struct MetricSettings {
    std::size_t bins = 20;
    std::uint64_t split_seed = 0;
    bool absolute_scc = false;
};

struct MetricScores {
    std::vector<double> per_attribute;
    double mean = 0.0;
    // Set for attributes whose score is undefined and reported as 0.
    std::vector<bool> undefined;
};

struct ModularityScores {
    std::vector<double> per_dimension;
    double mean = 0.0;
};

MetricScores interpretability(const LatentAttributeTable& table, const MetricSettings& settings = {});
ModularityScores modularity(const LatentAttributeTable& table, const MetricSettings& settings = {});
MetricScores mig(const LatentAttributeTable& table, const MetricSettings& settings = {});
MetricScores sap(const LatentAttributeTable& table, const MetricSettings& settings = {});
MetricScores scc(const LatentAttributeTable& table, const MetricSettings& settings = {});

/// Latent dimension with the highest binned MI with attribute `l`.
std::size_t most_informative_dimension(const LatentAttributeTable& table, std::size_t l, std::size_t bins = 20);

struct MetricReport {
    MetricSettings settings;
    std::vector<std::string> attribute_names;
    MetricScores interpretability;
    MetricScores modularity; // per attribute: score of its most informative dim
    ModularityScores modularity_dims;
    MetricScores mig;
    MetricScores sap;
    MetricScores scc;
    std::optional<double> recon_accuracy;
};

MetricReport evaluate(const LatentAttributeTable& table, const MetricSettings& settings = {});

/// CSV: a `# bins=..,split_seed=..,scc=..` comment, a `metric,attribute,score`
/// header, one row per metric and attribute, one `mean` row per metric, and a
/// final recon_accuracy row when available.
void write_report(std::ostream& out, const MetricReport& report);

} // namespace arvae::metrics
