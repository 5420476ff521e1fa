#include "arvae/attrreg/trainer.hpp"

#include "arvae/numgrad/adam.hpp"
#include "arvae/numgrad/errors.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace arvae::attrreg {

namespace {

struct BatchLoss {
    Var total;
    Var recon;
    Var kld;
    std::vector<Var> regularization;
};

using LossFn = std::function<BatchLoss(const vae::BoundVae&, const Tensor&, const Tensor&, SeededRng&)>;

std::string fmt(double v)
{
    std::ostringstream out;
    out << std::setprecision(17) << v;
    return out.str();
}

Tensor batch_attributes(const datagen::Dataset& data, const RegularizationSpec& spec,
                        std::span<const std::size_t> idx)
{
    Tensor out({spec.size(), idx.size()});
    for (std::size_t l = 0; l < spec.size(); ++l) {
        for (std::size_t i = 0; i < idx.size(); ++i) out.at(l, i) = data.attribute(spec[l].attribute_index, idx[i]);
    }
    return out;
}

void check_inputs(const vae::MlpVae& model, const datagen::Dataset& data, const RegularizationSpec& spec,
                  const ArVaeConfig& config)
{
    if (data.empty()) throw ContractError("cannot train on an empty dataset");
    config.validate();
    spec.validate(model.latent_dim());
    if (data.input_width() != model.input_width()) {
        throw DimensionError("dataset input width " + std::to_string(data.input_width()) +
                             " does not match model input width " + std::to_string(model.input_width()));
    }
    for (const auto& e : spec.entries()) {
        if (e.attribute_index >= data.attribute_count() || data.attribute_names()[e.attribute_index] != e.name) {
            throw ContractError("regularized attribute '" + e.name + "' does not match the dataset");
        }
    }
}

TrainLog run(vae::MlpVae& model, const datagen::Dataset& data, const RegularizationSpec& spec,
             const ArVaeConfig& config, const datagen::Dataset* validation, const LossFn& loss_fn)
{
    check_inputs(model, data, spec, config);
    TrainLog log;
    for (const auto& e : spec.entries()) log.attribute_names.push_back(e.name);

    numgrad::Adam adam(model.parameters(), numgrad::AdamConfig{config.learning_rate});
    SeededRng shuffle_rng = SeededRng::substream(config.seed, 0);
    SeededRng sample_rng = SeededRng::substream(config.seed, 1);

    const std::size_t n = data.size();
    std::vector<std::size_t> order(n);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i) {
            const std::size_t j = shuffle_rng.uniform_index(i);
            std::swap(order[i - 1], order[j]);
        }

        TrainLogRow row;
        row.epoch = epoch + 1;
        row.regularization.assign(spec.size(), 0.0);
        std::size_t batches = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t count = std::min(config.batch_size, n - start);
            if (count < 2) break;
            std::span<const std::size_t> idx(order.data() + start, count);
            const Tensor x = data.model_inputs(idx);
            const Tensor a = batch_attributes(data, spec, idx);

            Tape tape;
            const vae::BoundVae bound = vae::bind(tape, model);
            BatchLoss loss = loss_fn(bound, x, a, sample_rng);
            const double total = loss.total.value().item();
            if (!std::isfinite(total)) {
                throw std::runtime_error("non-finite loss at epoch " + std::to_string(epoch + 1) + ", batch " +
                                         std::to_string(batches + 1) + " (recon " + fmt(loss.recon.value().item()) +
                                         ", kld " + fmt(loss.kld.value().item()) + ")");
            }
            tape.backward(loss.total);
            const std::vector<Tensor> grads = tape.grads(bound.params);
            adam.step(model.parameters(), grads);

            row.recon += loss.recon.value().item();
            row.kld += loss.kld.value().item();
            for (std::size_t l = 0; l < spec.size(); ++l) row.regularization[l] += loss.regularization[l].value().item();
            ++batches;
        }
        if (batches > 0) {
            const double b = static_cast<double>(batches);
            row.recon /= b;
            row.kld /= b;
            for (double& r : row.regularization) r /= b;
        }
        row.recon_accuracy = evaluate_accuracy(model, validation ? *validation : data);
        log.rows.push_back(std::move(row));
    }
    return log;
}

} // namespace

void write_train_log(std::ostream& out, const TrainLog& log)
{
    out << "epoch,recon,kld";
    for (const auto& name : log.attribute_names) out << ",reg_" << name;
    out << ",recon_accuracy\r\n";
    for (const auto& row : log.rows) {
        out << row.epoch << ',' << fmt(row.recon) << ',' << fmt(row.kld);
        for (double r : row.regularization) out << ',' << fmt(r);
        out << ',' << fmt(row.recon_accuracy) << "\r\n";
    }
}

RegularizationSpec make_spec(const datagen::Dataset& data, const std::vector<std::string>& names,
                             const std::vector<std::size_t>& dimensions)
{
    if (!dimensions.empty() && dimensions.size() != names.size()) {
        throw ContractError("need one latent dimension per regularized attribute");
    }
    std::vector<RegularizedAttribute> entries;
    for (std::size_t l = 0; l < names.size(); ++l) {
        entries.push_back({names[l], data.attribute_index(names[l]), dimensions.empty() ? l : dimensions[l]});
    }
    return RegularizationSpec(std::move(entries));
}

TrainLog train(vae::MlpVae& model, const datagen::Dataset& data, const RegularizationSpec& spec,
               const ArVaeConfig& config, const datagen::Dataset* validation)
{
    auto loss_fn = [&](const vae::BoundVae& bound, const Tensor& x, const Tensor& a, SeededRng& rng) {
        ArVaeLoss l = ar_vae_loss(bound, x, a, spec, config, rng);
        return BatchLoss{l.total, l.recon, l.kld, std::move(l.regularization)};
    };
    return run(model, data, spec, config, validation, loss_fn);
}

TrainLog train_beta_vae(vae::MlpVae& model, const datagen::Dataset& data, const RegularizationSpec& spec,
                        const ArVaeConfig& config, const datagen::Dataset* validation)
{
    auto loss_fn = [&](const vae::BoundVae& bound, const Tensor& x, const Tensor& a, SeededRng& rng) {
        vae::VaeLoss l = vae::beta_vae_loss(bound, x, config.beta, rng);
        BatchLoss out{l.loss, l.recon, l.kld, {}};
        const Var codes = config.regularize_mean ? l.forward.mu : l.forward.z;
        const std::size_t m = x.shape()[0];
        for (std::size_t k = 0; k < spec.size(); ++k) {
            Var z_r = codes.tape().columns(codes, spec[k].dimension, 1);
            out.regularization.push_back(
                attr_reg_loss(z_r, std::span<const double>(a.data() + k * m, m), config.delta));
        }
        return out;
    };
    return run(model, data, spec, config, validation, loss_fn);
}

double evaluate_accuracy(const vae::MlpVae& model, const datagen::Dataset& data)
{
    const Tensor x = data.model_inputs();
    const Tensor mu = vae::encode_means(model, x);
    const Tensor out = vae::decode_values(model, mu);
    return vae::reconstruction_accuracy(out, x, model.config().head, model.config().vocabulary_size);
}

} // namespace arvae::attrreg
