#include "arvae/numgrad/adam.hpp"

#include "arvae/numgrad/errors.hpp"

#include <cmath>

namespace arvae::numgrad {

Adam::Adam(const ParameterSet& params, AdamConfig config) : config_(config)
{
    first_.reserve(params.size());
    second_.reserve(params.size());
    for (const auto& e : params) {
        first_.emplace_back(e.value.shape());
        second_.emplace_back(e.value.shape());
    }
}

void Adam::step(ParameterSet& params, std::span<const Tensor> grads)
{
    if (params.size() != first_.size() || grads.size() != first_.size()) {
        throw DimensionError("adam: expected " + std::to_string(first_.size()) + " parameters and gradients");
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (grads[i].shape() != params.value(i).shape() || grads[i].shape() != first_[i].shape()) {
            throw DimensionError("adam: gradient for '" + params.entry(i).name + "' has shape " +
                                 to_string(grads[i].shape()) + ", parameter has " +
                                 to_string(params.value(i).shape()));
        }
    }

    ++steps_;
    const double t = static_cast<double>(steps_);
    const double b1 = config_.beta1;
    const double b2 = config_.beta2;
    const double correction1 = 1.0 - std::pow(b1, t);
    const double correction2 = 1.0 - std::pow(b2, t);

    for (std::size_t i = 0; i < grads.size(); ++i) {
        Tensor& p = params.value(i);
        Tensor& m = first_[i];
        Tensor& v = second_[i];
        const Tensor& g = grads[i];
        for (std::size_t k = 0; k < p.size(); ++k) {
            m[k] = b1 * m[k] + (1.0 - b1) * g[k];
            v[k] = b2 * v[k] + (1.0 - b2) * g[k] * g[k];
            const double m_hat = m[k] / correction1;
            const double v_hat = v[k] / correction2;
            p[k] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
    }
}

} // namespace arvae::numgrad
