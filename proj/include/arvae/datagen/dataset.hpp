#pragma once

#include "arvae/attributes/music.hpp"
#include "arvae/numgrad/tensor.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace arvae::datagen {

enum class Domain { Shapes, Measures };

std::string to_string(Domain d);
Domain parse_domain(const std::string& s);

/// N examples with an L x N attribute matrix.
///
/// Shapes: each example is a flattened side x side image with values in [0, 1].
/// Measures: each example holds 24 token ids of `vocabulary()`.
class Dataset {
public:
    Dataset() = default;
    Dataset(Domain domain, std::size_t count, std::size_t width, std::vector<double> examples,
            std::vector<std::string> attribute_names, std::vector<double> attributes);

    Domain domain() const { return domain_; }
    std::size_t size() const { return count_; }
    bool empty() const { return count_ == 0; }
    std::size_t example_width() const { return width_; }
    std::span<const double> example(std::size_t i) const;
    std::span<const double> examples() const { return examples_; }

    std::size_t attribute_count() const { return attribute_names_.size(); }
    const std::vector<std::string>& attribute_names() const { return attribute_names_; }
    /// Index of a named attribute; the error lists the available names.
    std::size_t attribute_index(const std::string& name) const;
    bool has_attribute(const std::string& name) const;
    std::span<const double> attribute_row(std::size_t l) const;
    double attribute(std::size_t l, std::size_t i) const { return attributes_[l * count_ + i]; }
    std::span<const double> attributes() const { return attributes_; }

    // Shapes only.
    std::size_t side() const { return side_; }
    void set_side(std::size_t side) { side_ = side; }

    // Measures only.
    const attributes::TokenVocabulary& vocabulary() const { return vocabulary_; }
    void set_vocabulary(attributes::TokenVocabulary v) { vocabulary_ = v; }
    attributes::Measure measure(std::size_t i) const;

    /// Free-form generation settings (seed, sampler config), echoed in files.
    const std::map<std::string, std::string>& manifest() const { return manifest_; }
    void set_manifest(std::string key, std::string value);

    /// Width of the model input: pixels for shapes, 24 x vocabulary one-hot
    /// for measures.
    std::size_t input_width() const;
    numgrad::Tensor model_inputs(std::span<const std::size_t> indices) const;
    numgrad::Tensor model_inputs() const;

    /// 64-bit FNV-1a over the binary payload (examples then attributes).
    std::uint64_t digest() const;

    Dataset subset(std::span<const std::size_t> indices) const;

    bool operator==(const Dataset&) const = default;

private:
    Domain domain_ = Domain::Shapes;
    std::size_t count_ = 0;
    std::size_t width_ = 0;
    std::vector<double> examples_;
    std::vector<std::string> attribute_names_;
    std::vector<double> attributes_;
    std::size_t side_ = 0;
    attributes::TokenVocabulary vocabulary_{};
    std::map<std::string, std::string> manifest_;
};

std::uint64_t fnv1a64(std::span<const unsigned char> bytes, std::uint64_t hash = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

// Dataset file layout (little-endian hosts only):
//
//   ARVAE-DATASET version=1 domain=<shapes|measures> n=<N> width=<W>
//     attributes=<a,b,...> [side=<S>] [vocab=<low>:<high>] [<manifest key>=<value> ...]
//     digest=<16 hex digits>\n                       (all on one line)
//   N*W binary64 example values, row-major
//   L*N binary64 attribute values, row-major (attribute-major)
//
// Keys and values contain no whitespace. The digest is FNV-1a 64 over the
// payload bytes exactly as stored.
void write_dataset(std::ostream& out, const Dataset& data);
Dataset read_dataset(std::istream& in);
void save_dataset(const std::filesystem::path& path, const Dataset& data);
Dataset load_dataset(const std::filesystem::path& path);

} // namespace arvae::datagen
