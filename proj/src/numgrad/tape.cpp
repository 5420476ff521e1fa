#include "arvae/numgrad/tape.hpp"

#include "arvae/numgrad/errors.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>

namespace arvae::numgrad {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMatrixMap = Eigen::Map<const RowMajor>;
using MatrixMap = Eigen::Map<RowMajor>;

constexpr double kSeluLambda = 1.0507009873554804934193349852946;
constexpr double kSeluAlpha = 1.6732632423543772848170429916717;

bool is_scalar(const Tensor& t) { return t.size() == 1; }

// Result shape of a binary elementwise op; equal shapes or one scalar operand.
Shape broadcast_shape(const Tensor& a, const Tensor& b, const char* op)
{
    if (a.shape() == b.shape()) return a.shape();
    if (is_scalar(b)) return a.shape();
    if (is_scalar(a)) return b.shape();
    throw DimensionError(std::string(op) + ": shapes " + to_string(a.shape()) + " and " + to_string(b.shape()) +
                         " are not compatible");
}

template <typename F>
Tensor binary_map(const Tensor& a, const Tensor& b, const char* op, F f)
{
    Tensor out(broadcast_shape(a, b, op));
    const bool a_scalar = is_scalar(a) && out.size() != 1;
    const bool b_scalar = is_scalar(b) && out.size() != 1;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = f(a_scalar ? a[0] : a[i], b_scalar ? b[0] : b[i]);
    }
    return out;
}

template <typename F>
Tensor unary_map(const Tensor& x, F f)
{
    Tensor out(x.shape());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = f(x[i]);
    return out;
}

struct AxisLayout {
    std::size_t outer = 1;
    std::size_t extent = 1;
    std::size_t inner = 1;
    Shape reduced;
};

AxisLayout axis_layout(const Shape& shape, std::size_t axis)
{
    if (axis >= shape.size()) {
        throw DimensionError("reduction axis " + std::to_string(axis) + " out of range for shape " +
                             to_string(shape));
    }
    AxisLayout layout;
    for (std::size_t i = 0; i < axis; ++i) layout.outer *= shape[i];
    layout.extent = shape[axis];
    for (std::size_t i = axis + 1; i < shape.size(); ++i) layout.inner *= shape[i];
    layout.reduced = shape;
    layout.reduced.erase(layout.reduced.begin() + static_cast<std::ptrdiff_t>(axis));
    return layout;
}

std::size_t vector_length(const Tensor& z)
{
    if (z.rank() == 1) return z.size();
    if (z.rank() == 2 && z.shape()[1] == 1) return z.shape()[0];
    throw DimensionError("expected a vector or a column, got " + to_string(z.shape()));
}

} // namespace

const char* to_string(OpKind kind)
{
    switch (kind) {
    case OpKind::Leaf: return "leaf";
    case OpKind::Constant: return "constant";
    case OpKind::MatMul: return "matmul";
    case OpKind::Add: return "add";
    case OpKind::Sub: return "sub";
    case OpKind::Mul: return "mul";
    case OpKind::AddRowBroadcast: return "add_row_broadcast";
    case OpKind::Scale: return "scale";
    case OpKind::AddScalar: return "add_scalar";
    case OpKind::Neg: return "neg";
    case OpKind::Tanh: return "tanh";
    case OpKind::Relu: return "relu";
    case OpKind::Selu: return "selu";
    case OpKind::Sigmoid: return "sigmoid";
    case OpKind::Exp: return "exp";
    case OpKind::Log: return "log";
    case OpKind::Abs: return "abs";
    case OpKind::Sum: return "sum";
    case OpKind::Mean: return "mean";
    case OpKind::SumAxis: return "sum_axis";
    case OpKind::MeanAxis: return "mean_axis";
    case OpKind::Columns: return "columns";
    case OpKind::PairwiseDiff: return "pairwise_diff";
    case OpKind::GaussianSample: return "gaussian_sample";
    case OpKind::LogSoftmax: return "log_softmax";
    }
    return "unknown";
}

const Tensor& Var::value() const { return tape_->value(id_); }

void Tape::check_owner(Var v) const
{
    if (!v.valid() || &v.tape() != this || v.id() >= nodes_.size()) {
        throw ContractError("variable does not belong to this tape");
    }
}

Var Tape::push(Node node)
{
    for (std::size_t i = 0; i < node.arity; ++i) {
        node.requires_grad = node.requires_grad || nodes_[node.inputs[i]].requires_grad;
    }
    nodes_.push_back(std::move(node));
    return Var(this, nodes_.size() - 1);
}

Var Tape::unary(OpKind op, Var x, Tensor value)
{
    Node node;
    node.op = op;
    node.inputs = {x.id(), 0};
    node.arity = 1;
    node.value = std::move(value);
    return push(std::move(node));
}

Var Tape::leaf(Tensor value)
{
    Node node;
    node.op = OpKind::Leaf;
    node.requires_grad = true;
    node.value = std::move(value);
    return push(std::move(node));
}

Var Tape::constant(Tensor value)
{
    Node node;
    node.op = OpKind::Constant;
    node.value = std::move(value);
    return push(std::move(node));
}

std::vector<Var> Tape::leaves(std::span<const Tensor> values)
{
    std::vector<Var> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(leaf(v));
    return out;
}

Var Tape::matmul(Var a, Var b)
{
    check_owner(a);
    check_owner(b);
    const Tensor& av = a.value();
    const Tensor& bv = b.value();
    if (av.rank() != 2 || bv.rank() != 2 || av.shape()[1] != bv.shape()[0]) {
        throw DimensionError("matmul: cannot multiply " + to_string(av.shape()) + " by " + to_string(bv.shape()));
    }
    const auto m = static_cast<Eigen::Index>(av.shape()[0]);
    const auto k = static_cast<Eigen::Index>(av.shape()[1]);
    const auto n = static_cast<Eigen::Index>(bv.shape()[1]);
    Tensor out(Shape{av.shape()[0], bv.shape()[1]});
    MatrixMap(out.data(), m, n).noalias() = ConstMatrixMap(av.data(), m, k) * ConstMatrixMap(bv.data(), k, n);

    Node node;
    node.op = OpKind::MatMul;
    node.inputs = {a.id(), b.id()};
    node.arity = 2;
    node.value = std::move(out);
    return push(std::move(node));
}

Var Tape::add(Var a, Var b)
{
    check_owner(a);
    check_owner(b);
    Node node;
    node.op = OpKind::Add;
    node.inputs = {a.id(), b.id()};
    node.arity = 2;
    node.value = binary_map(a.value(), b.value(), "add", [](double x, double y) { return x + y; });
    return push(std::move(node));
}

Var Tape::sub(Var a, Var b)
{
    check_owner(a);
    check_owner(b);
    Node node;
    node.op = OpKind::Sub;
    node.inputs = {a.id(), b.id()};
    node.arity = 2;
    node.value = binary_map(a.value(), b.value(), "sub", [](double x, double y) { return x - y; });
    return push(std::move(node));
}

Var Tape::mul(Var a, Var b)
{
    check_owner(a);
    check_owner(b);
    Node node;
    node.op = OpKind::Mul;
    node.inputs = {a.id(), b.id()};
    node.arity = 2;
    node.value = binary_map(a.value(), b.value(), "mul", [](double x, double y) { return x * y; });
    return push(std::move(node));
}

Var Tape::add_row_broadcast(Var x, Var b)
{
    check_owner(x);
    check_owner(b);
    const Tensor& xv = x.value();
    const Tensor& bv = b.value();
    if (xv.rank() != 2 || bv.size() != xv.shape()[1] || bv.rank() > 2 || (bv.rank() == 2 && bv.shape()[0] != 1)) {
        throw DimensionError("add_row_broadcast: cannot add " + to_string(bv.shape()) + " to rows of " +
                             to_string(xv.shape()));
    }
    Tensor out = xv;
    const std::size_t rows = xv.shape()[0];
    const std::size_t cols = xv.shape()[1];
    for (std::size_t r = 0; r < rows; ++r) {
        double* row = out.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) row[c] += bv[c];
    }
    Node node;
    node.op = OpKind::AddRowBroadcast;
    node.inputs = {x.id(), b.id()};
    node.arity = 2;
    node.value = std::move(out);
    return push(std::move(node));
}

Var Tape::scale(Var x, double factor)
{
    check_owner(x);
    Var out = unary(OpKind::Scale, x, unary_map(x.value(), [factor](double v) { return factor * v; }));
    nodes_.back().scalar = factor;
    return out;
}

Var Tape::add_scalar(Var x, double offset)
{
    check_owner(x);
    Var out = unary(OpKind::AddScalar, x, unary_map(x.value(), [offset](double v) { return v + offset; }));
    nodes_.back().scalar = offset;
    return out;
}

Var Tape::neg(Var x)
{
    check_owner(x);
    return unary(OpKind::Neg, x, unary_map(x.value(), [](double v) { return -v; }));
}

Var Tape::tanh(Var x)
{
    check_owner(x);
    return unary(OpKind::Tanh, x, unary_map(x.value(), [](double v) { return std::tanh(v); }));
}

Var Tape::relu(Var x)
{
    check_owner(x);
    return unary(OpKind::Relu, x, unary_map(x.value(), [](double v) { return v > 0.0 ? v : 0.0; }));
}

Var Tape::selu(Var x)
{
    check_owner(x);
    return unary(OpKind::Selu, x, unary_map(x.value(), [](double v) {
                     return v > 0.0 ? kSeluLambda * v : kSeluLambda * kSeluAlpha * std::expm1(v);
                 }));
}

Var Tape::sigmoid(Var x)
{
    check_owner(x);
    return unary(OpKind::Sigmoid, x, unary_map(x.value(), [](double v) {
                     if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
                     const double e = std::exp(v);
                     return e / (1.0 + e);
                 }));
}

Var Tape::exp(Var x)
{
    check_owner(x);
    return unary(OpKind::Exp, x, unary_map(x.value(), [](double v) { return std::exp(v); }));
}

Var Tape::log(Var x)
{
    check_owner(x);
    for (double v : x.value().values()) {
        if (!(v > 0.0)) throw DomainError("log of non-positive value " + std::to_string(v));
    }
    return unary(OpKind::Log, x, unary_map(x.value(), [](double v) { return std::log(v); }));
}

Var Tape::abs(Var x)
{
    check_owner(x);
    return unary(OpKind::Abs, x, unary_map(x.value(), [](double v) { return std::fabs(v); }));
}

Var Tape::sum(Var x)
{
    check_owner(x);
    double total = 0.0;
    for (double v : x.value().values()) total += v;
    return unary(OpKind::Sum, x, Tensor::scalar(total));
}

Var Tape::mean(Var x)
{
    check_owner(x);
    double total = 0.0;
    for (double v : x.value().values()) total += v;
    return unary(OpKind::Mean, x, Tensor::scalar(total / static_cast<double>(x.value().size())));
}

Var Tape::sum(Var x, std::size_t axis)
{
    check_owner(x);
    const Tensor& xv = x.value();
    const AxisLayout layout = axis_layout(xv.shape(), axis);
    Tensor out(layout.reduced);
    for (std::size_t o = 0; o < layout.outer; ++o) {
        for (std::size_t k = 0; k < layout.extent; ++k) {
            const double* src = xv.data() + (o * layout.extent + k) * layout.inner;
            double* dst = out.data() + o * layout.inner;
            for (std::size_t i = 0; i < layout.inner; ++i) dst[i] += src[i];
        }
    }
    Var result = unary(OpKind::SumAxis, x, std::move(out));
    nodes_.back().index_a = axis;
    return result;
}

Var Tape::mean(Var x, std::size_t axis)
{
    check_owner(x);
    const Tensor& xv = x.value();
    const AxisLayout layout = axis_layout(xv.shape(), axis);
    Tensor out(layout.reduced);
    for (std::size_t o = 0; o < layout.outer; ++o) {
        for (std::size_t k = 0; k < layout.extent; ++k) {
            const double* src = xv.data() + (o * layout.extent + k) * layout.inner;
            double* dst = out.data() + o * layout.inner;
            for (std::size_t i = 0; i < layout.inner; ++i) dst[i] += src[i];
        }
    }
    const double scale = 1.0 / static_cast<double>(layout.extent);
    for (double& v : out.values()) v *= scale;
    Var result = unary(OpKind::MeanAxis, x, std::move(out));
    nodes_.back().index_a = axis;
    return result;
}

Var Tape::columns(Var x, std::size_t begin, std::size_t count)
{
    check_owner(x);
    const Tensor& xv = x.value();
    if (xv.rank() != 2 || begin + count > xv.shape()[1]) {
        throw DimensionError("columns: range [" + std::to_string(begin) + ", " + std::to_string(begin + count) +
                             ") out of bounds for " + to_string(xv.shape()));
    }
    const std::size_t rows = xv.shape()[0];
    const std::size_t cols = xv.shape()[1];
    Tensor out(Shape{rows, count});
    for (std::size_t r = 0; r < rows; ++r) {
        std::copy_n(xv.data() + r * cols + begin, count, out.data() + r * count);
    }
    Var result = unary(OpKind::Columns, x, std::move(out));
    nodes_.back().index_a = begin;
    nodes_.back().index_b = count;
    return result;
}

Var Tape::pairwise_diff(Var z)
{
    check_owner(z);
    const Tensor& zv = z.value();
    const std::size_t m = vector_length(zv);
    Tensor out(Shape{m, m});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) out.at(i, j) = zv[i] - zv[j];
    }
    return unary(OpKind::PairwiseDiff, z, std::move(out));
}

Var Tape::gaussian_sample(Var mu, Var logvar, SeededRng& rng)
{
    check_owner(mu);
    check_owner(logvar);
    const Tensor& m = mu.value();
    const Tensor& lv = logvar.value();
    if (m.shape() != lv.shape()) {
        throw DimensionError("gaussian_sample: mu " + to_string(m.shape()) + " vs logvar " + to_string(lv.shape()));
    }
    Tensor eps(m.shape());
    for (double& e : eps.values()) e = rng.normal();
    Tensor out(m.shape());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = m[i] + std::exp(0.5 * lv[i]) * eps[i];

    Node node;
    node.op = OpKind::GaussianSample;
    node.inputs = {mu.id(), logvar.id()};
    node.arity = 2;
    node.value = std::move(out);
    node.aux = std::move(eps);
    return push(std::move(node));
}

Var Tape::log_softmax(Var x, std::size_t group)
{
    check_owner(x);
    const Tensor& xv = x.value();
    if (group == 0 || xv.size() % group != 0) {
        throw DimensionError("log_softmax: group " + std::to_string(group) + " does not divide " +
                             std::to_string(xv.size()) + " values");
    }
    Tensor out(xv.shape());
    for (std::size_t start = 0; start < xv.size(); start += group) {
        const double* in = xv.data() + start;
        double peak = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < group; ++k) peak = std::max(peak, in[k]);
        double total = 0.0;
        for (std::size_t k = 0; k < group; ++k) total += std::exp(in[k] - peak);
        const double lse = peak + std::log(total);
        for (std::size_t k = 0; k < group; ++k) out[start + k] = in[k] - lse;
    }
    Var result = unary(OpKind::LogSoftmax, x, std::move(out));
    nodes_.back().index_a = group;
    return result;
}

Tensor& Tape::grad_slot(NodeId id)
{
    Node& node = nodes_[id];
    if (!node.has_grad) {
        node.grad = Tensor(node.value.shape());
        node.has_grad = true;
    }
    return node.grad;
}

void Tape::backward(Var loss)
{
    check_owner(loss);
    if (loss.value().size() != 1) {
        throw ContractError("backward: loss must be a scalar, got shape " + to_string(loss.value().shape()));
    }
    for (auto& node : nodes_) {
        node.has_grad = false;
        node.grad = Tensor();
    }
    grad_slot(loss.id())[0] = 1.0;

    for (NodeId id = loss.id() + 1; id-- > 0;) {
        const Node& node = nodes_[id];
        if (!node.has_grad || !node.requires_grad) continue;
        propagate(node, node.grad);
    }
}

void Tape::propagate(const Node& node, const Tensor& g)
{
    auto wants = [this](NodeId id) { return nodes_[id].requires_grad; };
    const NodeId a = node.inputs[0];
    const NodeId b = node.inputs[1];

    // Accumulates g * df into an operand, summing when the operand was a
    // broadcast scalar.
    auto accumulate = [this](NodeId target, const Tensor& g, auto df) {
        Tensor& slot = grad_slot(target);
        if (slot.size() == g.size()) {
            for (std::size_t i = 0; i < g.size(); ++i) slot[i] += g[i] * df(i);
        } else {
            double total = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) total += g[i] * df(i);
            slot[0] += total;
        }
    };

    switch (node.op) {
    case OpKind::Leaf:
    case OpKind::Constant:
        return;

    case OpKind::MatMul: {
        const Tensor& av = nodes_[a].value;
        const Tensor& bv = nodes_[b].value;
        const auto m = static_cast<Eigen::Index>(av.shape()[0]);
        const auto k = static_cast<Eigen::Index>(av.shape()[1]);
        const auto n = static_cast<Eigen::Index>(bv.shape()[1]);
        const ConstMatrixMap dc(g.data(), m, n);
        if (wants(a)) {
            MatrixMap(grad_slot(a).data(), m, k).noalias() += dc * ConstMatrixMap(bv.data(), k, n).transpose();
        }
        if (wants(b)) {
            MatrixMap(grad_slot(b).data(), k, n).noalias() += ConstMatrixMap(av.data(), m, k).transpose() * dc;
        }
        return;
    }

    case OpKind::Add:
        if (wants(a)) accumulate(a, g, [](std::size_t) { return 1.0; });
        if (wants(b)) accumulate(b, g, [](std::size_t) { return 1.0; });
        return;

    case OpKind::Sub:
        if (wants(a)) accumulate(a, g, [](std::size_t) { return 1.0; });
        if (wants(b)) accumulate(b, g, [](std::size_t) { return -1.0; });
        return;

    case OpKind::Mul: {
        const Tensor& av = nodes_[a].value;
        const Tensor& bv = nodes_[b].value;
        const bool a_bcast = is_scalar(av) && g.size() != 1;
        const bool b_bcast = is_scalar(bv) && g.size() != 1;
        if (wants(a)) accumulate(a, g, [&](std::size_t i) { return b_bcast ? bv[0] : bv[i]; });
        if (wants(b)) accumulate(b, g, [&](std::size_t i) { return a_bcast ? av[0] : av[i]; });
        return;
    }

    case OpKind::AddRowBroadcast: {
        if (wants(a)) accumulate(a, g, [](std::size_t) { return 1.0; });
        if (wants(b)) {
            Tensor& slot = grad_slot(b);
            const std::size_t cols = slot.size();
            const std::size_t rows = g.size() / cols;
            for (std::size_t r = 0; r < rows; ++r) {
                for (std::size_t c = 0; c < cols; ++c) slot[c] += g[r * cols + c];
            }
        }
        return;
    }

    case OpKind::Scale:
        accumulate(a, g, [s = node.scalar](std::size_t) { return s; });
        return;

    case OpKind::AddScalar:
        accumulate(a, g, [](std::size_t) { return 1.0; });
        return;

    case OpKind::Neg:
        accumulate(a, g, [](std::size_t) { return -1.0; });
        return;

    case OpKind::Tanh: {
        const Tensor& y = node.value;
        accumulate(a, g, [&](std::size_t i) { return 1.0 - y[i] * y[i]; });
        return;
    }

    case OpKind::Relu: {
        const Tensor& x = nodes_[a].value;
        accumulate(a, g, [&](std::size_t i) { return x[i] > 0.0 ? 1.0 : 0.0; });
        return;
    }

    case OpKind::Selu: {
        const Tensor& x = nodes_[a].value;
        const Tensor& y = node.value;
        accumulate(a, g, [&](std::size_t i) { return x[i] > 0.0 ? kSeluLambda : y[i] + kSeluLambda * kSeluAlpha; });
        return;
    }

    case OpKind::Sigmoid: {
        const Tensor& y = node.value;
        accumulate(a, g, [&](std::size_t i) { return y[i] * (1.0 - y[i]); });
        return;
    }

    case OpKind::Exp: {
        const Tensor& y = node.value;
        accumulate(a, g, [&](std::size_t i) { return y[i]; });
        return;
    }

    case OpKind::Log: {
        const Tensor& x = nodes_[a].value;
        accumulate(a, g, [&](std::size_t i) { return 1.0 / x[i]; });
        return;
    }

    case OpKind::Abs: {
        const Tensor& x = nodes_[a].value;
        accumulate(a, g, [&](std::size_t i) { return x[i] > 0.0 ? 1.0 : (x[i] < 0.0 ? -1.0 : 0.0); });
        return;
    }

    case OpKind::Sum: {
        Tensor& slot = grad_slot(a);
        for (double& v : slot.values()) v += g[0];
        return;
    }

    case OpKind::Mean: {
        Tensor& slot = grad_slot(a);
        const double share = g[0] / static_cast<double>(slot.size());
        for (double& v : slot.values()) v += share;
        return;
    }

    case OpKind::SumAxis:
    case OpKind::MeanAxis: {
        Tensor& slot = grad_slot(a);
        const AxisLayout layout = axis_layout(slot.shape(), node.index_a);
        const double factor = node.op == OpKind::MeanAxis ? 1.0 / static_cast<double>(layout.extent) : 1.0;
        for (std::size_t o = 0; o < layout.outer; ++o) {
            for (std::size_t k = 0; k < layout.extent; ++k) {
                double* dst = slot.data() + (o * layout.extent + k) * layout.inner;
                const double* src = g.data() + o * layout.inner;
                for (std::size_t i = 0; i < layout.inner; ++i) dst[i] += factor * src[i];
            }
        }
        return;
    }

    case OpKind::Columns: {
        Tensor& slot = grad_slot(a);
        const std::size_t rows = slot.shape()[0];
        const std::size_t cols = slot.shape()[1];
        const std::size_t begin = node.index_a;
        const std::size_t count = node.index_b;
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < count; ++c) slot[r * cols + begin + c] += g[r * count + c];
        }
        return;
    }

    case OpKind::PairwiseDiff: {
        Tensor& slot = grad_slot(a);
        const std::size_t m = slot.size();
        for (std::size_t i = 0; i < m; ++i) {
            double total = 0.0;
            for (std::size_t j = 0; j < m; ++j) total += g[i * m + j] - g[j * m + i];
            slot[i] += total;
        }
        return;
    }

    case OpKind::GaussianSample: {
        const Tensor& lv = nodes_[b].value;
        const Tensor& eps = node.aux;
        if (wants(a)) accumulate(a, g, [](std::size_t) { return 1.0; });
        if (wants(b)) accumulate(b, g, [&](std::size_t i) { return 0.5 * std::exp(0.5 * lv[i]) * eps[i]; });
        return;
    }

    case OpKind::LogSoftmax: {
        Tensor& slot = grad_slot(a);
        const Tensor& y = node.value;
        const std::size_t group = node.index_a;
        for (std::size_t start = 0; start < y.size(); start += group) {
            double total = 0.0;
            for (std::size_t k = 0; k < group; ++k) total += g[start + k];
            for (std::size_t k = 0; k < group; ++k) {
                slot[start + k] += g[start + k] - std::exp(y[start + k]) * total;
            }
        }
        return;
    }
    }
}

Tensor Tape::grad(Var v) const
{
    check_owner(v);
    const Node& node = nodes_[v.id()];
    if (!node.has_grad) return Tensor(node.value.shape());
    return node.grad;
}

std::vector<Tensor> Tape::grads(std::span<const Var> vars) const
{
    std::vector<Tensor> out;
    out.reserve(vars.size());
    for (const Var& v : vars) out.push_back(grad(v));
    return out;
}

std::span<const NodeId> Tape::inputs(NodeId id) const
{
    const Node& node = nodes_.at(id);
    return {node.inputs.data(), node.arity};
}

Var matmul(Var a, Var b) { return a.tape().matmul(a, b); }
Var operator+(Var a, Var b) { return a.tape().add(a, b); }
Var operator-(Var a, Var b) { return a.tape().sub(a, b); }
Var operator*(Var a, Var b) { return a.tape().mul(a, b); }
Var operator*(double factor, Var x) { return x.tape().scale(x, factor); }
Var operator-(Var x) { return x.tape().neg(x); }
Var tanh(Var x) { return x.tape().tanh(x); }
Var relu(Var x) { return x.tape().relu(x); }
Var selu(Var x) { return x.tape().selu(x); }
Var sigmoid(Var x) { return x.tape().sigmoid(x); }
Var exp(Var x) { return x.tape().exp(x); }
Var log(Var x) { return x.tape().log(x); }
Var abs(Var x) { return x.tape().abs(x); }
Var sum(Var x) { return x.tape().sum(x); }
Var mean(Var x) { return x.tape().mean(x); }

} // namespace arvae::numgrad
