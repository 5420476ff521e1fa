#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace arvae::numgrad {

using Shape = std::vector<std::size_t>;

std::size_t element_count(const Shape& shape);
std::string to_string(const Shape& shape);

/// Dense row-major f64 array. A Tensor is plain data; once it enters a Tape it
/// is referred to through a Var that carries its node id.
class Tensor {
public:
    Tensor() : shape_{}, values_(1, 0.0) {}
    explicit Tensor(Shape shape, double fill = 0.0);
    Tensor(Shape shape, std::vector<double> values);

    static Tensor scalar(double value);
    static Tensor vector(std::vector<double> values);
    static Tensor matrix(std::size_t rows, std::size_t cols, std::vector<double> values);
    static Tensor matrix(std::initializer_list<std::initializer_list<double>> rows);

    const Shape& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return values_.size(); }

    // Rank-2 accessors. rows() of a rank-1 tensor is its length.
    std::size_t rows() const;
    std::size_t cols() const;

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    const double* data() const { return values_.data(); }
    double* data() { return values_.data(); }

    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }
    double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
    double& at(std::size_t r, std::size_t c) { return values_[r * cols() + c]; }

    double item() const;
    bool all_finite() const;

    Tensor reshaped(Shape shape) const;

    bool operator==(const Tensor& other) const = default;

private:
    Shape shape_;
    std::vector<double> values_;
};

} // namespace arvae::numgrad
