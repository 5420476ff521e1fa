#include "arvae/numgrad/tensor.hpp"

#include "arvae/numgrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

namespace arvae::numgrad {

std::size_t element_count(const Shape& shape)
{
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

std::string to_string(const Shape& shape)
{
    std::string out = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i > 0) out += "x";
        out += std::to_string(shape[i]);
    }
    return out + "]";
}

Tensor::Tensor(Shape shape, double fill) : shape_(std::move(shape)), values_(element_count(shape_), fill) {}

Tensor::Tensor(Shape shape, std::vector<double> values) : shape_(std::move(shape)), values_(std::move(values))
{
    if (element_count(shape_) != values_.size()) {
        throw DimensionError("tensor shape " + to_string(shape_) + " does not hold " +
                             std::to_string(values_.size()) + " values");
    }
}

Tensor Tensor::scalar(double value) { return Tensor(Shape{}, std::vector<double>{value}); }

Tensor Tensor::vector(std::vector<double> values)
{
    const std::size_t n = values.size();
    return Tensor(Shape{n}, std::move(values));
}

Tensor Tensor::matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
{
    return Tensor(Shape{rows, cols}, std::move(values));
}

Tensor Tensor::matrix(std::initializer_list<std::initializer_list<double>> rows)
{
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> values;
    values.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw DimensionError("ragged matrix literal");
        values.insert(values.end(), row.begin(), row.end());
    }
    return Tensor(Shape{r, c}, std::move(values));
}

std::size_t Tensor::rows() const
{
    if (shape_.empty()) return 1;
    return shape_[0];
}

std::size_t Tensor::cols() const
{
    if (shape_.size() < 2) return 1;
    return values_.size() / shape_[0];
}

double Tensor::item() const
{
    if (values_.size() != 1) {
        throw DimensionError("item() on tensor of shape " + to_string(shape_));
    }
    return values_[0];
}

bool Tensor::all_finite() const
{
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

Tensor Tensor::reshaped(Shape shape) const { return Tensor(std::move(shape), values_); }

} // namespace arvae::numgrad
