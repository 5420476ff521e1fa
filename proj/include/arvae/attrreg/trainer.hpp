#pragma once

#include "arvae/attrreg/regularizer.hpp"
#include "arvae/datagen/dataset.hpp"
#include "arvae/vae/mlp_vae.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace arvae::attrreg {

struct TrainLogRow {
    std::size_t epoch = 0;
    double recon = 0.0;
    double kld = 0.0;
    std::vector<double> regularization;
    double recon_accuracy = 0.0;

    bool operator==(const TrainLogRow&) const = default;
};

struct TrainLog {
    std::vector<std::string> attribute_names;
    std::vector<TrainLogRow> rows;

    bool operator==(const TrainLog&) const = default;
};

/// CSV columns: epoch, recon, kld, reg_<attribute>..., recon_accuracy.
void write_train_log(std::ostream& out, const TrainLog& log);

/// Builds a spec binding each named attribute to dimension l (or the given
/// dimensions, when non-empty). Throws with the list of available names when
/// an attribute is missing from the dataset.
RegularizationSpec make_spec(const datagen::Dataset& data, const std::vector<std::string>& names,
                             const std::vector<std::size_t>& dimensions = {});

/// AR-VAE training with a fixed epoch budget. Each epoch draws a seeded
/// permutation and walks it in batches of `batch_size`; a trailing batch is
/// kept when it holds at least two examples. Regularization losses are
/// logged as batch averages. `validation` (optional) is used for the
/// accuracy column, otherwise the training set is.
TrainLog train(vae::MlpVae& model, const datagen::Dataset& data, const RegularizationSpec& spec,
               const ArVaeConfig& config, const datagen::Dataset* validation = nullptr);

/// Plain beta-VAE training (the regularization terms are only monitored,
/// never added to the objective). Same batching and randomness as train().
TrainLog train_beta_vae(vae::MlpVae& model, const datagen::Dataset& data, const RegularizationSpec& spec,
                        const ArVaeConfig& config, const datagen::Dataset* validation = nullptr);

/// Reconstruction accuracy of `model` on `data` using encoder means.
double evaluate_accuracy(const vae::MlpVae& model, const datagen::Dataset& data);

} // namespace arvae::attrreg
