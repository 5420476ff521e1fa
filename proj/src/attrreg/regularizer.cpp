#include "arvae/attrreg/regularizer.hpp"

#include "arvae/numgrad/errors.hpp"

#include <set>

namespace arvae::attrreg {

RegularizationSpec::RegularizationSpec(std::vector<RegularizedAttribute> entries) : entries_(std::move(entries)) {}

void RegularizationSpec::validate(std::size_t latent_dim) const
{
    if (entries_.size() > latent_dim) {
        throw ContractError("cannot regularize " + std::to_string(entries_.size()) + " attributes in " +
                            std::to_string(latent_dim) + " latent dimensions");
    }
    std::set<std::size_t> dims;
    std::set<std::string> names;
    for (const auto& e : entries_) {
        if (e.dimension >= latent_dim) {
            throw ContractError("regularized dimension " + std::to_string(e.dimension) + " for '" + e.name +
                                "' is outside the latent space");
        }
        if (!dims.insert(e.dimension).second) {
            throw ContractError("latent dimension " + std::to_string(e.dimension) + " regularized twice");
        }
        if (!names.insert(e.name).second) throw ContractError("attribute '" + e.name + "' regularized twice");
    }
}

const RegularizedAttribute* RegularizationSpec::find(const std::string& name) const
{
    for (const auto& e : entries_) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

ArVaeConfig ArVaeConfig::images()
{
    ArVaeConfig c;
    c.beta = 1.0;
    c.gamma = 10.0;
    c.delta = 1.0;
    return c;
}

ArVaeConfig ArVaeConfig::music()
{
    ArVaeConfig c;
    c.beta = 0.001;
    c.gamma = 1.0;
    c.delta = 10.0;
    return c;
}

void ArVaeConfig::validate() const
{
    if (!(beta >= 0.0)) throw ContractError("beta must be non-negative");
    if (!(gamma >= 0.0)) throw ContractError("gamma must be non-negative");
    if (!(delta > 0.0)) throw ContractError("delta must be positive");
    if (batch_size < 2) throw ContractError("batch size must be at least 2");
    if (!(learning_rate > 0.0)) throw ContractError("learning rate must be positive");
}

Tensor attribute_distance_matrix(std::span<const double> a)
{
    const std::size_t m = a.size();
    Tensor out({m, m});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) out.at(i, j) = a[i] - a[j];
    }
    return out;
}

Var latent_distance_matrix(Var z_r) { return z_r.tape().pairwise_diff(z_r); }

Var attr_reg_loss(Var z_r, std::span<const double> a, double delta)
{
    const Tensor& z = z_r.value();
    if (z.size() != a.size()) {
        throw DimensionError("attr_reg_loss: " + std::to_string(z.size()) + " latent codes for " +
                             std::to_string(a.size()) + " attribute values");
    }
    if (a.size() < 2) throw ContractError("attr_reg_loss needs at least two examples");
    if (!(delta > 0.0)) throw ContractError("delta must be positive");

    Tensor target = attribute_distance_matrix(a);
    for (double& v : target.values()) v = v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);

    Tape& tape = z_r.tape();
    Var spread = tape.tanh(tape.scale(latent_distance_matrix(z_r), delta));
    return mean(abs(spread - tape.constant(std::move(target))));
}

ArVaeLoss ar_vae_loss(const vae::BoundVae& model, const Tensor& x, const Tensor& attributes,
                      const RegularizationSpec& spec, const ArVaeConfig& config, SeededRng& rng)
{
    if (attributes.rank() != 2 || attributes.shape()[0] != spec.size()) {
        throw DimensionError("ar_vae_loss: attribute matrix " + numgrad::to_string(attributes.shape()) +
                             " does not have one row per regularized attribute (" + std::to_string(spec.size()) + ")");
    }
    if (x.rank() != 2 || (spec.size() > 0 && attributes.shape()[1] != x.shape()[0])) {
        throw DimensionError("ar_vae_loss: attribute columns must match the batch size");
    }
    spec.validate(model.config().latent_dim);

    vae::VaeLoss base = vae::beta_vae_loss(model, x, config.beta, rng);
    Tape& tape = base.loss.tape();
    ArVaeLoss out{base.loss, base.recon, base.kld, {}, base.forward};

    const std::size_t m = x.shape()[0];
    Var codes = config.regularize_mean ? base.forward.mu : base.forward.z;
    std::vector<Var> weighted;
    for (std::size_t l = 0; l < spec.size(); ++l) {
        Var z_r = tape.columns(codes, spec[l].dimension, 1);
        std::span<const double> a(attributes.data() + l * m, m);
        out.regularization.push_back(attr_reg_loss(z_r, a, config.delta));
    }
    // With gamma = 0 the total is left untouched so the objective (and its
    // gradient) is bit-identical to the beta-VAE loss.
    if (config.gamma != 0.0 && !out.regularization.empty()) {
        Var reg_sum = out.regularization.front();
        for (std::size_t l = 1; l < out.regularization.size(); ++l) reg_sum = reg_sum + out.regularization[l];
        out.total = base.loss + tape.scale(reg_sum, config.gamma);
    }
    return out;
}

} // namespace arvae::attrreg
