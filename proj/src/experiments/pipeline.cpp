#include "arvae/experiments/pipeline.hpp"

#include "arvae/attributes/image.hpp"
#include "arvae/datagen/generators.hpp"
#include "arvae/numgrad/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace arvae::experiments {

using nlohmann::json;

DomainInfo DomainInfo::of(const Dataset& data)
{
    DomainInfo info;
    info.domain = data.domain();
    info.side = data.side();
    info.vocabulary = data.vocabulary();
    return info;
}

vae::MlpVaeConfig model_config_for(const Dataset& data, std::size_t latent_dim, std::vector<std::size_t> hidden,
                                   vae::Activation activation)
{
    vae::MlpVaeConfig c;
    c.input_width = data.input_width();
    c.latent_dim = latent_dim;
    c.hidden = std::move(hidden);
    c.activation = activation;
    if (data.domain() == datagen::Domain::Measures) {
        c.head = vae::HeadKind::Categorical;
        c.sequence_length = data.example_width();
        c.vocabulary_size = data.vocabulary().size();
    }
    return c;
}

metrics::LatentAttributeTable encode_table(const vae::MlpVae& model, const Dataset& data,
                                           const std::vector<std::string>& names)
{
    if (data.input_width() != model.input_width()) {
        throw FormatError("model expects input width " + std::to_string(model.input_width()) + " but the dataset has " +
                          std::to_string(data.input_width()));
    }
    const Tensor mu = vae::encode_means(model, data.model_inputs());
    const std::size_t n = data.size();
    const std::size_t D = model.latent_dim();
    metrics::LatentAttributeTable table;
    table.latents.assign(D, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t d = 0; d < D; ++d) table.latents[d][i] = mu.at(i, d);
    }
    const auto& chosen = names.empty() ? data.attribute_names() : names;
    for (const auto& name : chosen) {
        const auto row = data.attribute_row(data.attribute_index(name));
        table.attributes.emplace_back(row.begin(), row.end());
        table.attribute_names.push_back(name);
    }
    return table;
}

metrics::MetricReport evaluate_model(const vae::MlpVae& model, const Dataset& data,
                                     const std::vector<std::string>& names, const metrics::MetricSettings& settings)
{
    metrics::MetricReport report = metrics::evaluate(encode_table(model, data, names), settings);
    report.recon_accuracy = attrreg::evaluate_accuracy(model, data);
    return report;
}

attributes::Measure decode_measure(std::span<const double> logits, const attributes::TokenVocabulary& vocabulary)
{
    const std::size_t v = vocabulary.size();
    if (logits.size() != attributes::kMeasureLength * v) {
        throw DimensionError("decode_measure: expected " + std::to_string(attributes::kMeasureLength * v) +
                             " logits, got " + std::to_string(logits.size()));
    }
    std::array<attributes::Token, attributes::kMeasureLength> tokens;
    for (std::size_t t = 0; t < attributes::kMeasureLength; ++t) {
        const auto row = logits.subspan(t * v, v);
        const auto best = static_cast<std::size_t>(std::max_element(row.begin(), row.end()) - row.begin());
        tokens[t] = vocabulary.token(best);
    }
    return attributes::Measure::sanitized(tokens);
}

bool can_measure(const DomainInfo& info, const std::string& name)
{
    if (info.domain == datagen::Domain::Shapes) return attributes::is_measurable_image_attribute(name);
    return std::find(attributes::kMusicAttributeNames.begin(), attributes::kMusicAttributeNames.end(), name) !=
           attributes::kMusicAttributeNames.end();
}

double decoded_attribute(const DomainInfo& info, std::span<const double> output, const std::string& name)
{
    if (!can_measure(info, name)) throw ContractError("attribute '" + name + "' cannot be measured on model outputs");
    if (info.domain == datagen::Domain::Shapes) {
        const double v = attributes::measured_image_attribute(name, output, info.side);
        return name == "scale" ? datagen::normalized_scale(v) : v;
    }
    const attributes::Measure m = decode_measure(output, info.vocabulary);
    return attributes::music_attribute(name, m, datagen::music_config_for(info.vocabulary));
}

std::vector<double> sweep_values(double lo, double hi, std::size_t steps)
{
    if (steps == 0) throw ContractError("sweep needs at least one step");
    std::vector<double> out(steps, lo);
    if (steps == 1 || lo == hi) return out;
    for (std::size_t k = 0; k < steps; ++k) {
        out[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(steps - 1);
    }
    return out;
}

Tensor traverse(const vae::MlpVae& model, std::span<const double> input, std::size_t dim,
                const std::vector<double>& values)
{
    if (input.size() != model.input_width()) throw DimensionError("traversal anchor has the wrong width");
    if (dim >= model.latent_dim()) throw ContractError("traversal dimension outside the latent space");
    const Tensor mu = vae::encode_means(model, Tensor({1, input.size()}, std::vector<double>(input.begin(), input.end())));
    const std::size_t D = model.latent_dim();
    Tensor z({values.size(), D});
    for (std::size_t k = 0; k < values.size(); ++k) {
        for (std::size_t d = 0; d < D; ++d) z.at(k, d) = mu.at(0, d);
        z.at(k, dim) = values[k];
    }
    return vae::decode_values(model, z);
}

std::vector<SurfacePoint> surface(const vae::MlpVae& model, const DomainInfo& info, const std::string& attribute,
                                  std::size_t dim_x, std::size_t dim_y, std::size_t grid, double lo, double hi,
                                  std::uint64_t seed)
{
    const std::size_t D = model.latent_dim();
    if (dim_x == dim_y) throw ContractError("surface dimensions must differ");
    if (dim_x >= D || dim_y >= D) throw ContractError("surface dimension outside the latent space");
    if (!can_measure(info, attribute)) throw ContractError("attribute '" + attribute + "' cannot be measured");
    numgrad::SeededRng rng(seed);
    std::vector<double> fixed(D);
    for (double& v : fixed) v = rng.normal();

    const auto axis = sweep_values(lo, hi, grid);
    Tensor z({grid * grid, D});
    for (std::size_t yi = 0; yi < grid; ++yi) {
        for (std::size_t xi = 0; xi < grid; ++xi) {
            const std::size_t r = yi * grid + xi;
            for (std::size_t d = 0; d < D; ++d) z.at(r, d) = fixed[d];
            z.at(r, dim_x) = axis[xi];
            z.at(r, dim_y) = axis[yi];
        }
    }
    const Tensor out = vae::decode_values(model, z);
    const std::size_t w = out.cols();
    std::vector<SurfacePoint> points;
    for (std::size_t yi = 0; yi < grid; ++yi) {
        for (std::size_t xi = 0; xi < grid; ++xi) {
            const std::size_t r = yi * grid + xi;
            const std::span<const double> row(out.data() + r * w, w);
            points.push_back({axis[xi], axis[yi], decoded_attribute(info, row, attribute)});
        }
    }
    return points;
}

std::size_t non_decreasing_steps(std::span<const double> values)
{
    std::size_t count = 0;
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        if (values[k + 1] >= values[k]) ++count;
    }
    return count;
}

namespace {

constexpr const char* kMetaSuffix = ".meta.json";

json config_json(const Checkpoint& c)
{
    const auto& m = c.model_config;
    json spec = json::array();
    for (const auto& e : c.spec.entries()) {
        spec.push_back({{"name", e.name}, {"attribute_index", e.attribute_index}, {"dimension", e.dimension}});
    }
    const auto& t = c.train_config;
    return json{
        {"model",
         {{"input_width", m.input_width},
          {"latent_dim", m.latent_dim},
          {"hidden", m.hidden},
          {"activation", vae::to_string(m.activation)},
          {"head", vae::to_string(m.head)},
          {"sequence_length", m.sequence_length},
          {"vocabulary_size", m.vocabulary_size}}},
        {"spec", spec},
        {"train",
         {{"beta", t.beta},
          {"gamma", t.gamma},
          {"delta", t.delta},
          {"batch_size", t.batch_size},
          {"epochs", t.epochs},
          {"learning_rate", t.learning_rate},
          {"seed", t.seed},
          {"regularize_mean", t.regularize_mean}}},
        {"objective", c.beta_vae ? "beta-vae" : "ar-vae"},
        {"domain",
         {{"kind", datagen::to_string(c.domain.domain)},
          {"side", c.domain.side},
          {"vocab_low", c.domain.vocabulary.low()},
          {"vocab_high", c.domain.vocabulary.high()}}},
        {"data_digest", c.data_digest},
    };
}

std::string digest_of(const std::string& text)
{
    const auto* p = reinterpret_cast<const unsigned char*>(text.data());
    return datagen::hex64(datagen::fnv1a64(std::span<const unsigned char>(p, text.size())));
}

} // namespace

std::string Checkpoint::config_digest() const { return digest_of(config_json(*this).dump()); }

void save_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint)
{
    numgrad::save_parameters(path, checkpoint.parameters);
    json meta = config_json(checkpoint);
    meta["format"] = "arvae-checkpoint";
    meta["version"] = 1;
    meta["config_digest"] = checkpoint.config_digest();
    std::ofstream out(path.string() + kMetaSuffix, std::ios::binary);
    if (!out) throw FormatError("cannot write checkpoint sidecar for '" + path.string() + "'");
    out << meta.dump(2) << '\n';
    if (!out) throw FormatError("failed writing checkpoint sidecar");
}

Checkpoint load_checkpoint(const std::filesystem::path& path)
{
    const std::string meta_path = path.string() + kMetaSuffix;
    std::ifstream in(meta_path, std::ios::binary);
    if (!in) throw FormatError("missing checkpoint sidecar '" + meta_path + "'");
    Checkpoint c;
    try {
        const json meta = json::parse(in);
        if (meta.at("format") != "arvae-checkpoint" || meta.at("version") != 1) {
            throw FormatError("unsupported checkpoint sidecar '" + meta_path + "'");
        }
        const auto& m = meta.at("model");
        c.model_config.input_width = m.at("input_width").get<std::size_t>();
        c.model_config.latent_dim = m.at("latent_dim").get<std::size_t>();
        c.model_config.hidden = m.at("hidden").get<std::vector<std::size_t>>();
        c.model_config.activation = vae::parse_activation(m.at("activation").get<std::string>());
        c.model_config.head = vae::parse_head(m.at("head").get<std::string>());
        c.model_config.sequence_length = m.at("sequence_length").get<std::size_t>();
        c.model_config.vocabulary_size = m.at("vocabulary_size").get<std::size_t>();

        std::vector<attrreg::RegularizedAttribute> entries;
        for (const auto& e : meta.at("spec")) {
            entries.push_back({e.at("name").get<std::string>(), e.at("attribute_index").get<std::size_t>(),
                               e.at("dimension").get<std::size_t>()});
        }
        c.spec = attrreg::RegularizationSpec(std::move(entries));

        const auto& t = meta.at("train");
        c.train_config.beta = t.at("beta").get<double>();
        c.train_config.gamma = t.at("gamma").get<double>();
        c.train_config.delta = t.at("delta").get<double>();
        c.train_config.batch_size = t.at("batch_size").get<std::size_t>();
        c.train_config.epochs = t.at("epochs").get<std::size_t>();
        c.train_config.learning_rate = t.at("learning_rate").get<double>();
        c.train_config.seed = t.at("seed").get<std::uint64_t>();
        c.train_config.regularize_mean = t.at("regularize_mean").get<bool>();
        c.beta_vae = meta.at("objective") == "beta-vae";

        const auto& d = meta.at("domain");
        c.domain.domain = datagen::parse_domain(d.at("kind").get<std::string>());
        c.domain.side = d.at("side").get<std::size_t>();
        c.domain.vocabulary = attributes::TokenVocabulary(d.at("vocab_low").get<int>(), d.at("vocab_high").get<int>());
        c.data_digest = meta.at("data_digest").get<std::string>();

        if (meta.at("config_digest") != c.config_digest()) {
            throw FormatError("checkpoint sidecar digest mismatch in '" + meta_path + "'");
        }
    } catch (const json::exception& e) {
        throw FormatError("malformed checkpoint sidecar '" + meta_path + "': " + e.what());
    }
    c.parameters = numgrad::load_parameters(path);
    // validates parameter names and shapes against the configuration
    (void)c.model();
    return c;
}

std::vector<SweepRow> run_sweep(const Dataset& train, const Dataset& eval, const vae::MlpVaeConfig& model_config,
                                const attrreg::RegularizationSpec& spec, const attrreg::ArVaeConfig& base,
                                const std::vector<double>& gammas, const std::vector<double>& deltas,
                                const metrics::MetricSettings& settings)
{
    std::vector<std::string> names;
    for (const auto& e : spec.entries()) names.push_back(e.name);
    std::vector<SweepRow> rows;
    for (double gamma : gammas) {
        for (double delta : deltas) {
            attrreg::ArVaeConfig cfg = base;
            cfg.gamma = gamma;
            cfg.delta = delta;
            vae::MlpVae model(model_config, base.seed);
            attrreg::train(model, train, spec, cfg);
            const auto interp = metrics::interpretability(encode_table(model, eval, names), settings);
            rows.push_back({gamma, delta, attrreg::evaluate_accuracy(model, eval), interp.mean});
        }
    }
    return rows;
}

void write_pgm(std::ostream& out, std::size_t width, std::size_t height, std::span<const double> values)
{
    if (values.size() != width * height) throw DimensionError("PGM pixel count does not match width x height");
    out << "P5\n" << width << ' ' << height << "\n255\n";
    std::string bytes(values.size(), '\0');
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double v = std::clamp(values[i], 0.0, 1.0);
        bytes[i] = static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0)));
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::vector<double> tile_images(const std::vector<std::span<const double>>& images, std::size_t side,
                                std::size_t rows, std::size_t cols)
{
    if (images.size() > rows * cols) throw ContractError("more images than grid cells");
    std::vector<double> out(rows * cols * side * side, 0.0);
    const std::size_t width = cols * side;
    for (std::size_t k = 0; k < images.size(); ++k) {
        if (images[k].size() != side * side) throw DimensionError("tile image has the wrong size");
        const std::size_t r0 = (k / cols) * side;
        const std::size_t c0 = (k % cols) * side;
        for (std::size_t r = 0; r < side; ++r) {
            for (std::size_t c = 0; c < side; ++c) out[(r0 + r) * width + c0 + c] = images[k][r * side + c];
        }
    }
    return out;
}

std::string piano_roll(const attributes::Measure& measure)
{
    int lo = 1000, hi = -1;
    for (const auto& t : measure.tokens()) {
        if (t.is_onset()) {
            lo = std::min(lo, t.midi);
            hi = std::max(hi, t.midi);
        }
    }
    std::ostringstream out;
    if (hi < 0) {
        out << "(no notes)\n";
        return out.str();
    }
    // pitch sounding at each tick
    std::array<int, attributes::kMeasureLength> sounding{};
    int current = -1;
    for (std::size_t t = 0; t < attributes::kMeasureLength; ++t) {
        const auto& tok = measure[t];
        if (tok.is_onset()) current = tok.midi;
        else if (tok.kind == attributes::TokenKind::Rest) current = -1;
        sounding[t] = current;
    }
    for (int p = hi; p >= lo; --p) {
        std::string name = attributes::note_name(p);
        name.resize(4, ' ');
        out << name << '|';
        for (std::size_t t = 0; t < attributes::kMeasureLength; ++t) {
            if (sounding[t] != p) out << '.';
            else out << (measure[t].is_onset() ? 'o' : '=');
        }
        out << "|\n";
    }
    return out.str();
}

} // namespace arvae::experiments
