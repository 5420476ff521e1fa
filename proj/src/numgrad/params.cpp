#include "arvae/numgrad/params.hpp"

#include "arvae/numgrad/errors.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace arvae::numgrad {

static_assert(std::endian::native == std::endian::little, "parameter files assume a little-endian host");

namespace {

constexpr const char* kMagic = "NUMGRAD-PARAMS";
constexpr int kVersion = 1;

} // namespace

void ParameterSet::add(std::string name, Tensor value)
{
    if (name.empty() || name.find_first_of(" \t\r\n") != std::string::npos) {
        throw ContractError("parameter name '" + name + "' must be non-empty and free of whitespace");
    }
    if (contains(name)) throw ContractError("duplicate parameter name '" + name + "'");
    entries_.push_back({std::move(name), std::move(value)});
}

bool ParameterSet::contains(const std::string& name) const
{
    for (const auto& e : entries_) {
        if (e.name == name) return true;
    }
    return false;
}

const Tensor& ParameterSet::operator[](const std::string& name) const
{
    for (const auto& e : entries_) {
        if (e.name == name) return e.value;
    }
    throw ContractError("no parameter named '" + name + "'");
}

Tensor& ParameterSet::operator[](const std::string& name)
{
    return const_cast<Tensor&>(std::as_const(*this)[name]);
}

std::vector<Tensor> ParameterSet::values() const
{
    std::vector<Tensor> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.value);
    return out;
}

std::vector<Var> ParameterSet::bind(Tape& tape) const
{
    std::vector<Var> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(tape.leaf(e.value));
    return out;
}

void write_parameters(std::ostream& out, const ParameterSet& params)
{
    out << kMagic << ' ' << kVersion << '\n' << params.size() << '\n';
    for (const auto& e : params) {
        out << e.name << ' ' << e.value.rank();
        for (std::size_t extent : e.value.shape()) out << ' ' << extent;
        out << '\n';
    }
    out << "END\n";
    for (const auto& e : params) {
        out.write(reinterpret_cast<const char*>(e.value.data()),
                  static_cast<std::streamsize>(e.value.size() * sizeof(double)));
    }
    if (!out) throw FormatError("failed writing parameter payload");
}

ParameterSet read_parameters(std::istream& in)
{
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty parameter file");
    {
        std::istringstream header(line);
        std::string magic;
        int version = 0;
        header >> magic >> version;
        if (magic != kMagic) throw FormatError("not a parameter file (bad magic)");
        if (version != kVersion) throw FormatError("unsupported parameter file version " + std::to_string(version));
    }
    std::size_t count = 0;
    if (!std::getline(in, line) || !(std::istringstream(line) >> count)) {
        throw FormatError("missing parameter count");
    }
    std::vector<std::pair<std::string, Shape>> layout;
    for (std::size_t i = 0; i < count; ++i) {
        if (!std::getline(in, line)) throw FormatError("truncated parameter header");
        std::istringstream row(line);
        std::string name;
        std::size_t rank = 0;
        if (!(row >> name >> rank)) throw FormatError("malformed parameter header line: " + line);
        Shape shape(rank);
        for (auto& extent : shape) {
            if (!(row >> extent)) throw FormatError("malformed shape for parameter '" + name + "'");
        }
        layout.emplace_back(std::move(name), std::move(shape));
    }
    if (!std::getline(in, line) || line != "END") throw FormatError("missing END marker in parameter header");

    ParameterSet params;
    for (auto& [name, shape] : layout) {
        Tensor value(shape);
        const auto bytes = static_cast<std::streamsize>(value.size() * sizeof(double));
        in.read(reinterpret_cast<char*>(value.data()), bytes);
        if (in.gcount() != bytes) throw FormatError("truncated payload for parameter '" + name + "'");
        params.add(std::move(name), std::move(value));
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after parameter payload");
    return params;
}

void save_parameters(const std::filesystem::path& path, const ParameterSet& params)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
    write_parameters(out, params);
}

ParameterSet load_parameters(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path.string() + "'");
    return read_parameters(in);
}

} // namespace arvae::numgrad
