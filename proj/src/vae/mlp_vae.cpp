#include "arvae/vae/mlp_vae.hpp"

#include "arvae/numgrad/errors.hpp"

#include <cmath>

namespace arvae::vae {

namespace {

std::string weight_name(const char* stack, std::size_t layer) { return std::string(stack) + "." + std::to_string(layer) + ".weight"; }
std::string bias_name(const char* stack, std::size_t layer) { return std::string(stack) + "." + std::to_string(layer) + ".bias"; }

std::vector<std::size_t> encoder_widths(const MlpVaeConfig& c)
{
    std::vector<std::size_t> w{c.input_width};
    w.insert(w.end(), c.hidden.begin(), c.hidden.end());
    w.push_back(2 * c.latent_dim);
    return w;
}

std::vector<std::size_t> decoder_widths(const MlpVaeConfig& c)
{
    std::vector<std::size_t> w{c.latent_dim};
    w.insert(w.end(), c.hidden.rbegin(), c.hidden.rend());
    w.push_back(c.output_width());
    return w;
}

Var activate(Var x, Activation a)
{
    switch (a) {
    case Activation::Relu: return relu(x);
    case Activation::Selu: return selu(x);
    case Activation::Tanh: return tanh(x);
    }
    return x;
}

// Runs a stack of dense layers whose parameters start at `first` in `params`.
Var run_stack(const BoundVae& vae, std::size_t first, std::size_t layers, Var x)
{
    Tape& tape = x.tape();
    for (std::size_t l = 0; l < layers; ++l) {
        x = tape.add_row_broadcast(matmul(x, vae.params[first + 2 * l]), vae.params[first + 2 * l + 1]);
        if (l + 1 < layers) x = activate(x, vae.config().activation);
    }
    return x;
}

void check_width(const Var& x, std::size_t expected, const char* what)
{
    const auto& s = x.shape();
    if (s.size() != 2 || s[1] != expected) {
        throw DimensionError(std::string(what) + ": expected batch x " + std::to_string(expected) + ", got " +
                             numgrad::to_string(s));
    }
}

} // namespace

std::string to_string(Activation a)
{
    switch (a) {
    case Activation::Relu: return "relu";
    case Activation::Selu: return "selu";
    case Activation::Tanh: return "tanh";
    }
    return "relu";
}

std::string to_string(HeadKind h) { return h == HeadKind::Real ? "real" : "categorical"; }

Activation parse_activation(const std::string& s)
{
    if (s == "relu") return Activation::Relu;
    if (s == "selu") return Activation::Selu;
    if (s == "tanh") return Activation::Tanh;
    throw ContractError("unknown activation '" + s + "'");
}

HeadKind parse_head(const std::string& s)
{
    if (s == "real") return HeadKind::Real;
    if (s == "categorical") return HeadKind::Categorical;
    throw ContractError("unknown head kind '" + s + "'");
}

std::size_t MlpVaeConfig::output_width() const
{
    return head == HeadKind::Categorical ? sequence_length * vocabulary_size : input_width;
}

void MlpVaeConfig::validate() const
{
    if (input_width == 0) throw ContractError("input width must be positive");
    if (latent_dim == 0) throw ContractError("latent dimension must be positive");
    for (std::size_t h : hidden) {
        if (h == 0) throw ContractError("hidden layer widths must be positive");
    }
    if (head == HeadKind::Categorical) {
        if (sequence_length == 0 || vocabulary_size == 0) {
            throw ContractError("categorical head needs sequence length and vocabulary size");
        }
        if (sequence_length * vocabulary_size != input_width) {
            throw DimensionError("categorical head width " + std::to_string(sequence_length * vocabulary_size) +
                                 " does not match one-hot input width " + std::to_string(input_width));
        }
    }
}

MlpVae::MlpVae(MlpVaeConfig config, std::uint64_t seed) : config_(std::move(config))
{
    config_.validate();
    SeededRng rng(seed);
    auto add_stack = [&](const char* stack, const std::vector<std::size_t>& widths) {
        for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
            const std::size_t fan_in = widths[l];
            const std::size_t fan_out = widths[l + 1];
            const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
            Tensor w({fan_in, fan_out});
            for (double& v : w.values()) v = rng.uniform(-bound, bound);
            Tensor b({fan_out});
            for (double& v : b.values()) v = rng.uniform(-bound, bound);
            params_.add(weight_name(stack, l), std::move(w));
            params_.add(bias_name(stack, l), std::move(b));
        }
    };
    add_stack("enc", encoder_widths(config_));
    add_stack("dec", decoder_widths(config_));
}

MlpVae::MlpVae(MlpVaeConfig config, ParameterSet params) : config_(std::move(config)), params_(std::move(params))
{
    config_.validate();
    std::size_t index = 0;
    auto check_stack = [&](const char* stack, const std::vector<std::size_t>& widths) {
        for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
            const numgrad::Shape w_shape{widths[l], widths[l + 1]};
            const numgrad::Shape b_shape{widths[l + 1]};
            if (index + 1 >= params_.size() || params_.entry(index).name != weight_name(stack, l) ||
                params_.entry(index + 1).name != bias_name(stack, l) ||
                params_.value(index).shape() != w_shape || params_.value(index + 1).shape() != b_shape) {
                throw DimensionError("parameters do not match layer " + weight_name(stack, l) + " " +
                                     numgrad::to_string(w_shape));
            }
            index += 2;
        }
    };
    check_stack("enc", encoder_widths(config_));
    check_stack("dec", decoder_widths(config_));
    if (index != params_.size()) throw DimensionError("unexpected extra parameters in model");
}

BoundVae bind(Tape& tape, const MlpVae& model) { return BoundVae{&model, model.parameters().bind(tape)}; }

Encoded encode(const BoundVae& vae, Var x)
{
    check_width(x, vae.config().input_width, "encode");
    const std::size_t d = vae.config().latent_dim;
    Var heads = run_stack(vae, 0, vae.model->encoder_layers(), x);
    Tape& tape = x.tape();
    return Encoded{tape.columns(heads, 0, d), tape.columns(heads, d, d)};
}

Var decode(const BoundVae& vae, Var z)
{
    check_width(z, vae.config().latent_dim, "decode");
    Var out = run_stack(vae, 2 * vae.model->encoder_layers(), vae.model->decoder_layers(), z);
    if (vae.config().head == HeadKind::Real) out = sigmoid(out);
    return out;
}

Var recon_loss(Var x_hat, Var x, HeadKind head, std::size_t vocabulary_size)
{
    if (x_hat.shape() != x.shape() || x.shape().size() != 2) {
        throw ContractError("recon_loss: reconstruction " + numgrad::to_string(x_hat.shape()) + " vs input " +
                            numgrad::to_string(x.shape()));
    }
    Tape& tape = x.tape();
    const double batch = static_cast<double>(x.shape()[0]);
    if (head == HeadKind::Real) {
        Var diff = x_hat - x;
        return tape.scale(sum(diff * diff), 1.0 / batch);
    }
    if (vocabulary_size == 0 || x.shape()[1] % vocabulary_size != 0) {
        throw ContractError("recon_loss: categorical head needs a vocabulary size dividing the width");
    }
    Var log_probs = tape.log_softmax(x_hat, vocabulary_size);
    return tape.scale(sum(x * log_probs), -1.0 / batch);
}

Var kld_loss(Var mu, Var logvar)
{
    if (mu.shape() != logvar.shape()) {
        throw DimensionError("kld_loss: mu " + numgrad::to_string(mu.shape()) + " vs logvar " +
                             numgrad::to_string(logvar.shape()));
    }
    Tape& tape = mu.tape();
    const double batch = static_cast<double>(mu.shape().empty() ? 1 : mu.shape()[0]);
    Var inner = tape.add_scalar(logvar - mu * mu - exp(logvar), 1.0);
    return tape.scale(sum(inner), -0.5 / batch);
}

VaeForward forward(const BoundVae& vae, Var x, SeededRng& rng)
{
    const Encoded enc = encode(vae, x);
    Var z = x.tape().gaussian_sample(enc.mu, enc.logvar, rng);
    return VaeForward{enc.mu, enc.logvar, z, decode(vae, z)};
}

VaeLoss beta_vae_loss(const BoundVae& vae, const Tensor& x, double beta, SeededRng& rng)
{
    if (!(beta >= 0.0)) throw ContractError("beta must be non-negative");
    Tape& tape = vae.params.front().tape();
    Var input = tape.constant(x);
    VaeForward fwd = forward(vae, input, rng);
    Var recon = recon_loss(fwd.reconstruction, input, vae.config().head, vae.config().vocabulary_size);
    Var kld = kld_loss(fwd.mu, fwd.logvar);
    Var loss = recon + tape.scale(kld, beta);
    return VaeLoss{loss, recon, kld, fwd};
}

double reconstruction_accuracy(const Tensor& x_hat, const Tensor& x, HeadKind head, std::size_t vocabulary_size)
{
    if (x_hat.shape() != x.shape()) {
        throw ContractError("reconstruction_accuracy: shapes " + numgrad::to_string(x_hat.shape()) + " and " +
                            numgrad::to_string(x.shape()) + " differ");
    }
    if (x.size() == 0) return 1.0;
    if (head == HeadKind::Real) {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (std::fabs(x_hat[i] - x[i]) < 0.5) ++hits;
        }
        return static_cast<double>(hits) / static_cast<double>(x.size());
    }
    if (vocabulary_size == 0 || x.size() % vocabulary_size != 0) {
        throw ContractError("reconstruction_accuracy: vocabulary size must divide the width");
    }
    std::size_t hits = 0;
    const std::size_t positions = x.size() / vocabulary_size;
    for (std::size_t p = 0; p < positions; ++p) {
        const double* logits = x_hat.data() + p * vocabulary_size;
        const double* target = x.data() + p * vocabulary_size;
        std::size_t best = 0;
        std::size_t truth = 0;
        for (std::size_t k = 1; k < vocabulary_size; ++k) {
            if (logits[k] > logits[best]) best = k;
            if (target[k] > target[truth]) truth = k;
        }
        if (best == truth) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(positions);
}

Tensor encode_means(const MlpVae& model, const Tensor& x)
{
    Tape tape;
    const BoundVae vae = bind(tape, model);
    return encode(vae, tape.constant(x)).mu.value();
}

Tensor decode_values(const MlpVae& model, const Tensor& z)
{
    Tape tape;
    const BoundVae vae = bind(tape, model);
    return decode(vae, tape.constant(z)).value();
}

} // namespace arvae::vae
