#include "arvae/datagen/dataset.hpp"

#include "arvae/numgrad/errors.hpp"

#include <bit>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace arvae::datagen {

static_assert(std::endian::native == std::endian::little, "dataset files assume a little-endian host");

namespace {

constexpr const char* kMagic = "ARVAE-DATASET";
constexpr int kVersion = 1;

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}

bool has_space(const std::string& s) { return s.find_first_of(" \t\r\n") != std::string::npos; }

std::uint64_t payload_digest(std::span<const double> a, std::span<const double> b)
{
    auto bytes = [](std::span<const double> v) {
        return std::span<const unsigned char>(reinterpret_cast<const unsigned char*>(v.data()), v.size_bytes());
    };
    return fnv1a64(bytes(b), fnv1a64(bytes(a)));
}

} // namespace

std::string to_string(Domain d) { return d == Domain::Shapes ? "shapes" : "measures"; }

Domain parse_domain(const std::string& s)
{
    if (s == "shapes") return Domain::Shapes;
    if (s == "measures") return Domain::Measures;
    throw ContractError("unknown domain '" + s + "' (expected shapes or measures)");
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes, std::uint64_t hash)
{
    for (unsigned char b : bytes) {
        hash ^= b;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hex64(std::uint64_t value)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
    return buf;
}

Dataset::Dataset(Domain domain, std::size_t count, std::size_t width, std::vector<double> examples,
                 std::vector<std::string> attribute_names, std::vector<double> attributes)
    : domain_(domain),
      count_(count),
      width_(width),
      examples_(std::move(examples)),
      attribute_names_(std::move(attribute_names)),
      attributes_(std::move(attributes))
{
    if (examples_.size() != count_ * width_) throw DimensionError("example matrix does not match N x width");
    if (attributes_.size() != attribute_names_.size() * count_) {
        throw DimensionError("attribute matrix column count must equal the example count");
    }
    std::set<std::string> unique;
    for (const auto& name : attribute_names_) {
        if (name.empty() || has_space(name) || name.find(',') != std::string::npos) {
            throw ContractError("invalid attribute name '" + name + "'");
        }
        if (!unique.insert(name).second) throw ContractError("duplicate attribute name '" + name + "'");
    }
}

std::span<const double> Dataset::example(std::size_t i) const
{
    if (i >= count_) throw ContractError("example index " + std::to_string(i) + " out of range");
    return std::span<const double>(examples_).subspan(i * width_, width_);
}

std::size_t Dataset::attribute_index(const std::string& name) const
{
    for (std::size_t l = 0; l < attribute_names_.size(); ++l) {
        if (attribute_names_[l] == name) return l;
    }
    std::string available;
    for (const auto& n : attribute_names_) available += (available.empty() ? "" : ", ") + n;
    throw ContractError("attribute '" + name + "' not in dataset; available: " + available);
}

bool Dataset::has_attribute(const std::string& name) const
{
    for (const auto& n : attribute_names_) {
        if (n == name) return true;
    }
    return false;
}

std::span<const double> Dataset::attribute_row(std::size_t l) const
{
    return std::span<const double>(attributes_).subspan(l * count_, count_);
}

attributes::Measure Dataset::measure(std::size_t i) const
{
    if (domain_ != Domain::Measures) throw ContractError("measure() on a non-music dataset");
    const auto ids = example(i);
    std::array<attributes::Token, attributes::kMeasureLength> tokens;
    for (std::size_t t = 0; t < attributes::kMeasureLength; ++t) {
        tokens[t] = vocabulary_.token(static_cast<std::size_t>(ids[t]));
    }
    return attributes::Measure(tokens);
}

void Dataset::set_manifest(std::string key, std::string value)
{
    if (key.empty() || has_space(key) || has_space(value) || key.find('=') != std::string::npos) {
        throw ContractError("manifest entries must be whitespace-free key=value pairs");
    }
    manifest_[std::move(key)] = std::move(value);
}

std::size_t Dataset::input_width() const
{
    return domain_ == Domain::Shapes ? width_ : width_ * vocabulary_.size();
}

numgrad::Tensor Dataset::model_inputs(std::span<const std::size_t> indices) const
{
    numgrad::Tensor out({indices.size(), input_width()});
    const std::size_t in_width = input_width();
    for (std::size_t r = 0; r < indices.size(); ++r) {
        const auto src = example(indices[r]);
        double* dst = out.data() + r * in_width;
        if (domain_ == Domain::Shapes) {
            std::copy(src.begin(), src.end(), dst);
        } else {
            const std::size_t v = vocabulary_.size();
            for (std::size_t t = 0; t < width_; ++t) dst[t * v + static_cast<std::size_t>(src[t])] = 1.0;
        }
    }
    return out;
}

numgrad::Tensor Dataset::model_inputs() const
{
    std::vector<std::size_t> all(count_);
    for (std::size_t i = 0; i < count_; ++i) all[i] = i;
    return model_inputs(all);
}

std::uint64_t Dataset::digest() const { return payload_digest(examples_, attributes_); }

Dataset Dataset::subset(std::span<const std::size_t> indices) const
{
    std::vector<double> ex;
    ex.reserve(indices.size() * width_);
    for (std::size_t i : indices) {
        const auto row = example(i);
        ex.insert(ex.end(), row.begin(), row.end());
    }
    std::vector<double> attrs;
    attrs.reserve(attribute_count() * indices.size());
    for (std::size_t l = 0; l < attribute_count(); ++l) {
        for (std::size_t i : indices) attrs.push_back(attribute(l, i));
    }
    Dataset out(domain_, indices.size(), width_, std::move(ex), attribute_names_, std::move(attrs));
    out.side_ = side_;
    out.vocabulary_ = vocabulary_;
    out.manifest_ = manifest_;
    return out;
}

void write_dataset(std::ostream& out, const Dataset& data)
{
    out << kMagic << " version=" << kVersion << " domain=" << to_string(data.domain()) << " n=" << data.size()
        << " width=" << data.example_width() << " attributes=";
    for (std::size_t l = 0; l < data.attribute_count(); ++l) out << (l ? "," : "") << data.attribute_names()[l];
    if (data.domain() == Domain::Shapes) out << " side=" << data.side();
    else out << " vocab=" << data.vocabulary().low() << ':' << data.vocabulary().high();
    for (const auto& [key, value] : data.manifest()) out << ' ' << key << '=' << value;
    out << " digest=" << hex64(data.digest()) << '\n';
    out.write(reinterpret_cast<const char*>(data.examples().data()),
              static_cast<std::streamsize>(data.examples().size_bytes()));
    out.write(reinterpret_cast<const char*>(data.attributes().data()),
              static_cast<std::streamsize>(data.attributes().size_bytes()));
    if (!out) throw FormatError("failed writing dataset");
}

Dataset read_dataset(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty dataset file");
    std::istringstream header(line);
    std::string magic;
    header >> magic;
    if (magic != kMagic) throw FormatError("not a dataset file (bad magic)");

    std::map<std::string, std::string> fields;
    std::vector<std::string> order;
    std::string item;
    while (header >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw FormatError("malformed header field '" + item + "'");
        fields[item.substr(0, eq)] = item.substr(eq + 1);
        order.push_back(item.substr(0, eq));
    }
    auto require = [&](const std::string& key) -> const std::string& {
        const auto it = fields.find(key);
        if (it == fields.end()) throw FormatError("dataset header lacks '" + key + "'");
        return it->second;
    };
    auto to_size = [](const std::string& s, const char* what) {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw FormatError(std::string("bad ") + what + " '" + s + "'");
        }
    };

    if (require("version") != std::to_string(kVersion)) {
        throw FormatError("unsupported dataset version " + require("version"));
    }
    Domain domain{};
    try {
        domain = parse_domain(require("domain"));
    } catch (const ContractError& e) {
        throw FormatError(e.what());
    }
    const std::size_t n = to_size(require("n"), "n");
    const std::size_t width = to_size(require("width"), "width");
    const std::string& names_field = require("attributes");
    std::vector<std::string> names = names_field.empty() ? std::vector<std::string>{} : split(names_field, ',');
    const std::string digest = require("digest");

    std::vector<double> examples(n * width);
    std::vector<double> attrs(names.size() * n);
    auto read_block = [&](std::vector<double>& block, const char* what) {
        const auto bytes = static_cast<std::streamsize>(block.size() * sizeof(double));
        in.read(reinterpret_cast<char*>(block.data()), bytes);
        if (in.gcount() != bytes) throw FormatError(std::string("truncated dataset ") + what + " payload");
    };
    read_block(examples, "example");
    read_block(attrs, "attribute");
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after dataset payload");

    Dataset data(domain, n, width, std::move(examples), std::move(names), std::move(attrs));
    if (domain == Domain::Shapes) {
        data.set_side(to_size(require("side"), "side"));
    } else {
        const std::string& vocab = require("vocab");
        const auto colon = vocab.find(':');
        if (colon == std::string::npos) throw FormatError("bad vocab field '" + vocab + "'");
        try {
            data.set_vocabulary(attributes::TokenVocabulary(std::stoi(vocab.substr(0, colon)),
                                                            std::stoi(vocab.substr(colon + 1))));
        } catch (const std::exception&) {
            throw FormatError("bad vocab field '" + vocab + "'");
        }
    }
    static const std::set<std::string> reserved{"version", "domain", "n", "width", "attributes", "side", "vocab", "digest"};
    for (const auto& key : order) {
        if (!reserved.contains(key)) data.set_manifest(key, fields[key]);
    }
    if (hex64(data.digest()) != digest) {
        throw FormatError("dataset digest mismatch: header " + digest + ", payload " + hex64(data.digest()));
    }
    return data;
}

void save_dataset(const std::filesystem::path& path, const Dataset& data)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    write_dataset(out, data);
}

Dataset load_dataset(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    return read_dataset(in);
}

} // namespace arvae::datagen
