#pragma once

#include "arvae/numgrad/tape.hpp"
#include "arvae/numgrad/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace arvae::numgrad {

/// Named parameter tensors kept in insertion order.
class ParameterSet {
public:
    struct Entry {
        std::string name;
        Tensor value;

        bool operator==(const Entry&) const = default;
    };

    void add(std::string name, Tensor value);

    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    bool contains(const std::string& name) const;

    const Entry& entry(std::size_t i) const { return entries_.at(i); }
    Tensor& value(std::size_t i) { return entries_.at(i).value; }
    const Tensor& value(std::size_t i) const { return entries_.at(i).value; }
    const Tensor& operator[](const std::string& name) const;
    Tensor& operator[](const std::string& name);

    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    std::vector<Tensor> values() const;

    /// Records every parameter as a differentiable leaf, in order.
    std::vector<Var> bind(Tape& tape) const;

    bool operator==(const ParameterSet&) const = default;

private:
    std::vector<Entry> entries_;
};

// Parameter file layout (little-endian hosts only):
//
//   NUMGRAD-PARAMS 1\n
//   <count>\n
//   <name> <rank> <extent_0> ... <extent_rank-1>\n     (one line per tensor)
//   END\n
//   raw IEEE-754 binary64 values, tensors back to back, row-major
//
// Names may not contain whitespace. Round trips are bit-exact.
void write_parameters(std::ostream& out, const ParameterSet& params);
ParameterSet read_parameters(std::istream& in);
void save_parameters(const std::filesystem::path& path, const ParameterSet& params);
ParameterSet load_parameters(const std::filesystem::path& path);

} // namespace arvae::numgrad
