#pragma once

#include "arvae/numgrad/params.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace arvae::numgrad {

struct AdamConfig {
    double learning_rate = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias-corrected moments.
class Adam {
public:
    Adam(const ParameterSet& params, AdamConfig config = {});

    void step(ParameterSet& params, std::span<const Tensor> grads);

    const AdamConfig& config() const { return config_; }
    std::uint64_t steps() const { return steps_; }
    const Tensor& first_moment(std::size_t i) const { return first_.at(i); }
    const Tensor& second_moment(std::size_t i) const { return second_.at(i); }

private:
    AdamConfig config_;
    std::uint64_t steps_ = 0;
    std::vector<Tensor> first_;
    std::vector<Tensor> second_;
};

} // namespace arvae::numgrad
