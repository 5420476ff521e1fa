#pragma once

#include "arvae/numgrad/rng.hpp"
#include "arvae/numgrad/tensor.hpp"

#include <array>
#include <cstddef>
#include <deque>
#include <span>
#include <vector>

namespace arvae::numgrad {

enum class OpKind {
    Leaf,
    Constant,
    MatMul,
    Add,
    Sub,
    Mul,
    AddRowBroadcast,
    Scale,
    AddScalar,
    Neg,
    Tanh,
    Relu,
    Selu,
    Sigmoid,
    Exp,
    Log,
    Abs,
    Sum,
    Mean,
    SumAxis,
    MeanAxis,
    Columns,
    PairwiseDiff,
    GaussianSample,
    LogSoftmax,
};

const char* to_string(OpKind kind);

class Tape;

using NodeId = std::size_t;

/// Handle to a tensor recorded on a Tape.
class Var {
public:
    Var() = default;

    Tape& tape() const { return *tape_; }
    NodeId id() const { return id_; }
    const Tensor& value() const;
    const Shape& shape() const { return value().shape(); }
    bool valid() const { return tape_ != nullptr; }

private:
    friend class Tape;
    Var(Tape* tape, NodeId id) : tape_(tape), id_(id) {}

    Tape* tape_ = nullptr;
    NodeId id_ = 0;
};

/// Computation record for reverse-mode differentiation.
///
/// Nodes are appended in evaluation order, so the record is topologically
/// sorted by construction and backward() is a single reverse sweep. A Tape is
/// single-threaded and is meant to live for one forward/backward pass.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    Var leaf(Tensor value);
    Var constant(Tensor value);
    std::vector<Var> leaves(std::span<const Tensor> values);

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var mul(Var a, Var b);
    // x[m x n] + b[n] (or b[1 x n]) added to every row.
    Var add_row_broadcast(Var x, Var b);
    Var scale(Var x, double factor);
    Var add_scalar(Var x, double offset);
    Var neg(Var x);
    Var tanh(Var x);
    Var relu(Var x);
    Var selu(Var x);
    Var sigmoid(Var x);
    Var exp(Var x);
    Var log(Var x);
    Var abs(Var x);

    Var sum(Var x);
    Var mean(Var x);
    Var sum(Var x, std::size_t axis);
    Var mean(Var x, std::size_t axis);

    // Columns [begin, begin + count) of a rank-2 tensor.
    Var columns(Var x, std::size_t begin, std::size_t count);
    // out(i, j) = z_i - z_j for a length-m vector (or m x 1 column).
    Var pairwise_diff(Var z);
    // z = mu + exp(logvar / 2) * eps, eps ~ N(0, 1) held constant.
    Var gaussian_sample(Var mu, Var logvar, SeededRng& rng);
    // Log-softmax over consecutive groups of `group` values in row-major order.
    Var log_softmax(Var x, std::size_t group);

    /// Reverse sweep from a scalar loss. Clears gradients of any earlier sweep.
    void backward(Var loss);

    /// Gradient of the last backward() target with respect to `v`; zeros when
    /// `v` was not reachable from it.
    Tensor grad(Var v) const;
    std::vector<Tensor> grads(std::span<const Var> vars) const;

    std::size_t size() const { return nodes_.size(); }
    OpKind kind(NodeId id) const { return nodes_.at(id).op; }
    std::span<const NodeId> inputs(NodeId id) const;
    const Tensor& value(NodeId id) const { return nodes_.at(id).value; }

private:
    struct Node {
        OpKind op = OpKind::Constant;
        std::array<NodeId, 2> inputs{};
        std::size_t arity = 0;
        bool requires_grad = false;
        Tensor value;
        Tensor grad;
        bool has_grad = false;
        Tensor aux;              // eps for GaussianSample
        double scalar = 0.0;     // Scale factor / AddScalar offset
        std::size_t index_a = 0; // axis, column begin, softmax group
        std::size_t index_b = 0; // column count
    };

    Var push(Node node);
    Var unary(OpKind op, Var x, Tensor value);
    void check_owner(Var v) const;
    Tensor& grad_slot(NodeId id);
    void propagate(const Node& node, const Tensor& g);

    std::deque<Node> nodes_;
};

// Free-function spellings used when composing losses.
Var matmul(Var a, Var b);
Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator*(double factor, Var x);
Var operator-(Var x);
Var tanh(Var x);
Var relu(Var x);
Var selu(Var x);
Var sigmoid(Var x);
Var exp(Var x);
Var log(Var x);
Var abs(Var x);
Var sum(Var x);
Var mean(Var x);

} // namespace arvae::numgrad
