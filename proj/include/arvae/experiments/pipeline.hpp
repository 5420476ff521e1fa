#pragma once

#include "arvae/attributes/music.hpp"
#include "arvae/attrreg/trainer.hpp"
#include "arvae/datagen/dataset.hpp"
#include "arvae/metrics/suite.hpp"
#include "arvae/vae/mlp_vae.hpp"

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace arvae::experiments {

using datagen::Dataset;
using numgrad::Tensor;

/// What is needed to interpret model outputs without the dataset itself.
struct DomainInfo {
    datagen::Domain domain = datagen::Domain::Shapes;
    std::size_t side = 0;
    attributes::TokenVocabulary vocabulary{};

    static DomainInfo of(const Dataset& data);
    bool operator==(const DomainInfo&) const = default;
};

vae::MlpVaeConfig model_config_for(const Dataset& data, std::size_t latent_dim,
                                   std::vector<std::size_t> hidden = {128, 64},
                                   vae::Activation activation = vae::Activation::Relu);

/// Encoder means of every example, next to the dataset attributes named in
/// `names` (all of them when empty).
metrics::LatentAttributeTable encode_table(const vae::MlpVae& model, const Dataset& data,
                                           const std::vector<std::string>& names = {});

/// All five metrics on `names` plus reconstruction accuracy on `data`.
metrics::MetricReport evaluate_model(const vae::MlpVae& model, const Dataset& data,
                                     const std::vector<std::string>& names, const metrics::MetricSettings& settings);

/// Argmax token per position, with orphan continuations turned into rests.
attributes::Measure decode_measure(std::span<const double> logits, const attributes::TokenVocabulary& vocabulary);

/// Attribute value measured on one decoded output row (pixels after the
/// sigmoid, or logits for measures). Image scale is reported on the same
/// normalised scale as the dataset.
double decoded_attribute(const DomainInfo& info, std::span<const double> output, const std::string& name);
bool can_measure(const DomainInfo& info, const std::string& name);

/// `steps` evenly spaced values from lo to hi (all equal to lo when lo == hi).
std::vector<double> sweep_values(double lo, double hi, std::size_t steps);

/// Encodes `input` (one row, model input width) to its mean, overwrites
/// latent `dim` with each value in turn and decodes. Row k of the result is
/// the decoded output for values[k].
Tensor traverse(const vae::MlpVae& model, std::span<const double> input, std::size_t dim,
                const std::vector<double>& values);

struct SurfacePoint {
    double x = 0.0;
    double y = 0.0;
    double value = 0.0;
};

/// Attribute values on a grid over latent dims (dim_x, dim_y); the other
/// codes are drawn once from N(0, 1) with `seed` and held fixed. Rows are in
/// y-major order.
std::vector<SurfacePoint> surface(const vae::MlpVae& model, const DomainInfo& info, const std::string& attribute,
                                  std::size_t dim_x, std::size_t dim_y, std::size_t grid, double lo, double hi,
                                  std::uint64_t seed);

/// Number of adjacent pairs (v[k], v[k+1]) with v[k+1] >= v[k].
std::size_t non_decreasing_steps(std::span<const double> values);

struct Checkpoint {
    vae::MlpVaeConfig model_config;
    numgrad::ParameterSet parameters;
    attrreg::RegularizationSpec spec;
    attrreg::ArVaeConfig train_config;
    bool beta_vae = false;
    DomainInfo domain;
    std::string data_digest;

    vae::MlpVae model() const { return vae::MlpVae(model_config, parameters); }
    /// FNV-1a of the canonical JSON of everything except the parameters.
    std::string config_digest() const;
};

/// Writes `path` (parameter file) and `path` + ".meta.json" (sidecar).
void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
Checkpoint load_checkpoint(const std::filesystem::path& path);

struct SweepRow {
    double gamma = 0.0;
    double delta = 0.0;
    double recon_accuracy = 0.0;
    double interpretability = 0.0;
};

/// One AR-VAE training and evaluation per (gamma, delta) pair, in row-major
/// grid order, every run sharing `base` (seed included).
std::vector<SweepRow> run_sweep(const Dataset& train, const Dataset& eval, const vae::MlpVaeConfig& model_config,
                                const attrreg::RegularizationSpec& spec, const attrreg::ArVaeConfig& base,
                                const std::vector<double>& gammas, const std::vector<double>& deltas,
                                const metrics::MetricSettings& settings);

/// Binary PGM (P5, maxval 255); values clamped to [0, 1].
void write_pgm(std::ostream& out, std::size_t width, std::size_t height, std::span<const double> values);

/// Tiles square images of side `side` into a grid of `rows` x `cols`.
std::vector<double> tile_images(const std::vector<std::span<const double>>& images, std::size_t side,
                                std::size_t rows, std::size_t cols);

/// Text piano roll: one line per pitch from the highest to the lowest note
/// present, 'o' for an onset, '=' while held, '.' otherwise.
std::string piano_roll(const attributes::Measure& measure);

} // namespace arvae::experiments
