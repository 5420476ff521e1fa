#pragma once

#include "arvae/numgrad/params.hpp"
#include "arvae/numgrad/rng.hpp"
#include "arvae/numgrad/tape.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace arvae::vae {

using numgrad::ParameterSet;
using numgrad::SeededRng;
using numgrad::Tape;
using numgrad::Tensor;
using numgrad::Var;

enum class Activation { Relu, Selu, Tanh };

// Real: decoder output passes through a sigmoid (pixel intensities in [0, 1]).
// Categorical: decoder emits sequence_length groups of vocabulary_size logits.
enum class HeadKind { Real, Categorical };

std::string to_string(Activation a);
std::string to_string(HeadKind h);
Activation parse_activation(const std::string& s);
HeadKind parse_head(const std::string& s);

struct MlpVaeConfig {
    std::size_t input_width = 0;
    std::size_t latent_dim = 8;
    std::vector<std::size_t> hidden{128, 64};
    Activation activation = Activation::Relu;
    HeadKind head = HeadKind::Real;
    std::size_t sequence_length = 0;
    std::size_t vocabulary_size = 0;

    std::size_t output_width() const;
    void validate() const;

    bool operator==(const MlpVaeConfig&) const = default;
};

/// Dense VAE. The encoder maps input -> hidden... -> 2*D (mu | logvar);
/// the decoder mirrors it D -> reversed hidden... -> output.
///
/// Layer weights are [fan_in x fan_out] and act on row-major batches, so a
/// layer is `x * W + b`.
class MlpVae {
public:
    MlpVae(MlpVaeConfig config, std::uint64_t seed);
    MlpVae(MlpVaeConfig config, ParameterSet params);

    const MlpVaeConfig& config() const { return config_; }
    std::size_t latent_dim() const { return config_.latent_dim; }
    std::size_t input_width() const { return config_.input_width; }
    std::size_t output_width() const { return config_.output_width(); }

    ParameterSet& parameters() { return params_; }
    const ParameterSet& parameters() const { return params_; }

    std::size_t encoder_layers() const { return config_.hidden.size() + 1; }
    std::size_t decoder_layers() const { return config_.hidden.size() + 1; }

private:
    MlpVaeConfig config_;
    ParameterSet params_;
};

/// Model parameters recorded as leaves on one tape.
struct BoundVae {
    const MlpVae* model = nullptr;
    std::vector<Var> params;

    const MlpVaeConfig& config() const { return model->config(); }
};

BoundVae bind(Tape& tape, const MlpVae& model);

struct Encoded {
    Var mu;
    Var logvar;
};

struct VaeForward {
    Var mu;
    Var logvar;
    Var z;
    Var reconstruction;
};

Encoded encode(const BoundVae& vae, Var x);
Var decode(const BoundVae& vae, Var z);

/// Real head: batch mean of per-example squared L2 error. Categorical head:
/// batch mean of per-example summed cross-entropy; `x` is then the one-hot
/// target and `x_hat` the logits.
Var recon_loss(Var x_hat, Var x, HeadKind head, std::size_t vocabulary_size = 0);

/// Closed-form KL(N(mu, exp(logvar)) || N(0, I)) summed over latent dims,
/// averaged over the batch.
Var kld_loss(Var mu, Var logvar);

struct VaeLoss {
    Var loss;
    Var recon;
    Var kld;
    VaeForward forward;
};

VaeForward forward(const BoundVae& vae, Var x, SeededRng& rng);
VaeLoss beta_vae_loss(const BoundVae& vae, const Tensor& x, double beta, SeededRng& rng);

/// Real head: share of values with |x_hat - x| < 0.5 (`x_hat` post-sigmoid).
/// Categorical head: share of positions whose argmax logit is the target.
double reconstruction_accuracy(const Tensor& x_hat, const Tensor& x, HeadKind head,
                               std::size_t vocabulary_size = 0);

/// Encoder means for a batch, without sampling.
Tensor encode_means(const MlpVae& model, const Tensor& x);
/// Decoder output (post-sigmoid for the real head, logits otherwise).
Tensor decode_values(const MlpVae& model, const Tensor& z);

} // namespace arvae::vae
