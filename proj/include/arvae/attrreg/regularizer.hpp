#pragma once

#include "arvae/numgrad/tape.hpp"
#include "arvae/vae/mlp_vae.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace arvae::attrreg {

using numgrad::SeededRng;
using numgrad::Tape;
using numgrad::Tensor;
using numgrad::Var;

/// Binding of one attribute to one latent dimension.
struct RegularizedAttribute {
    std::string name;
    std::size_t attribute_index = 0; // row in the dataset attribute matrix
    std::size_t dimension = 0;       // latent dimension r_l

    bool operator==(const RegularizedAttribute&) const = default;
};

class RegularizationSpec {
public:
    RegularizationSpec() = default;
    explicit RegularizationSpec(std::vector<RegularizedAttribute> entries);

    /// Throws unless dimensions are distinct, below `latent_dim`, and there
    /// are no more attributes than dimensions.
    void validate(std::size_t latent_dim) const;

    const std::vector<RegularizedAttribute>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const RegularizedAttribute& operator[](std::size_t l) const { return entries_[l]; }
    const RegularizedAttribute* find(const std::string& name) const;

    bool operator==(const RegularizationSpec&) const = default;

private:
    std::vector<RegularizedAttribute> entries_;
};

struct ArVaeConfig {
    double beta = 1.0;
    double gamma = 10.0;
    double delta = 1.0;
    std::size_t batch_size = 64;
    std::size_t epochs = 30;
    double learning_rate = 1e-4;
    std::uint64_t seed = 0;
    // Regularize encoder means instead of the sampled latent codes.
    bool regularize_mean = false;

    /// gamma 10, delta 1, beta 1.
    static ArVaeConfig images();
    /// gamma 1, delta 10, beta 0.001.
    static ArVaeConfig music();

    void validate() const;
};

/// D_a(i, j) = a_i - a_j.
Tensor attribute_distance_matrix(std::span<const double> a);
/// D_r(i, j) = z_i - z_j, differentiable in z (a length-m vector or m x 1).
Var latent_distance_matrix(Var z_r);
/// Mean over all m^2 entries of |tanh(delta * D_r) - sgn(D_a)|, sgn(0) = 0.
Var attr_reg_loss(Var z_r, std::span<const double> a, double delta);

struct ArVaeLoss {
    Var total;
    Var recon;
    Var kld;
    std::vector<Var> regularization; // one per spec entry, unweighted
    vae::VaeForward forward;
};

/// recon + beta * KL + gamma * sum_l attr_reg_loss(z[:, r_l], a_l, delta).
/// `attributes` is L x m with rows in spec order.
ArVaeLoss ar_vae_loss(const vae::BoundVae& model, const Tensor& x, const Tensor& attributes,
                      const RegularizationSpec& spec, const ArVaeConfig& config, SeededRng& rng);

} // namespace arvae::attrreg
