#include "arvae/datagen/generators.hpp"

#include "arvae/attributes/image.hpp"
#include "arvae/numgrad/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace arvae::datagen {

namespace {

constexpr double kQuarterTurn = std::numbers::pi / 2.0;

std::string format_double(double v)
{
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

// Point-in-shape test in the shape's own frame, pixel units, circumscribed
// radius `radius`.
bool inside(ShapeKind kind, double u, double v, double radius)
{
    switch (kind) {
    case ShapeKind::Disk: return u * u + v * v <= radius * radius;
    case ShapeKind::Square: {
        const double half = radius / std::numbers::sqrt2;
        return std::fabs(u) <= half && std::fabs(v) <= half;
    }
    case ShapeKind::Cross: {
        const double arm = radius / 4.0;
        const double reach = std::sqrt(radius * radius - arm * arm);
        const double au = std::fabs(u);
        const double av = std::fabs(v);
        return (au <= reach && av <= arm) || (au <= arm && av <= reach);
    }
    }
    return false;
}

} // namespace

std::string to_string(ShapeKind kind)
{
    switch (kind) {
    case ShapeKind::Disk: return "disk";
    case ShapeKind::Square: return "square";
    case ShapeKind::Cross: return "cross";
    }
    return "disk";
}

ShapeSpec ShapeSpec::clamped() const
{
    ShapeSpec out = *this;
    out.scale = std::clamp(scale, kMinScale, kMaxScale);
    const double r = out.scale / 2.0;
    out.x = std::clamp(x, r, 1.0 - r);
    out.y = std::clamp(y, r, 1.0 - r);
    out.orientation = std::fmod(orientation, kQuarterTurn);
    if (out.orientation < 0.0) out.orientation += kQuarterTurn;
    return out;
}

Image render_shape(const ShapeSpec& raw, std::size_t side, std::size_t supersample)
{
    if (side < 8) throw ContractError("image side must be at least 8 pixels");
    if (supersample == 0) throw ContractError("supersample must be positive");
    const ShapeSpec spec = raw.clamped();
    const double s = static_cast<double>(side);
    const double cx = spec.x * s;
    const double cy = spec.y * s;
    const double radius = spec.scale * s / 2.0;
    const double c = std::cos(spec.orientation);
    const double sn = std::sin(spec.orientation);
    const double step = 1.0 / static_cast<double>(supersample);
    const double samples = static_cast<double>(supersample * supersample);

    Image image(side);
    for (std::size_t row = 0; row < side; ++row) {
        for (std::size_t col = 0; col < side; ++col) {
            std::size_t hits = 0;
            for (std::size_t i = 0; i < supersample; ++i) {
                const double py = static_cast<double>(row) + (static_cast<double>(i) + 0.5) * step - cy;
                for (std::size_t j = 0; j < supersample; ++j) {
                    const double px = static_cast<double>(col) + (static_cast<double>(j) + 0.5) * step - cx;
                    // rotate into the shape frame
                    const double u = c * px + sn * py;
                    const double v = -sn * px + c * py;
                    if (inside(spec.kind, u, v, radius)) ++hits;
                }
            }
            image.at(row, col) = static_cast<double>(hits) / samples;
        }
    }
    return image;
}

ShapeSpec sample_shape_spec(numgrad::SeededRng& rng)
{
    ShapeSpec spec;
    spec.kind = static_cast<ShapeKind>(rng.uniform_index(3));
    spec.scale = rng.uniform(ShapeSpec::kMinScale, ShapeSpec::kMaxScale);
    const double r = spec.scale / 2.0;
    spec.x = rng.uniform(r, 1.0 - r);
    spec.y = rng.uniform(r, 1.0 - r);
    spec.orientation = rng.uniform(0.0, kQuarterTurn);
    return spec;
}

double normalized_scale(double scale)
{
    return (scale - ShapeSpec::kMinScale) / (ShapeSpec::kMaxScale - ShapeSpec::kMinScale);
}

double normalized_orientation(double orientation) { return orientation / kQuarterTurn; }

Dataset sample_shape_dataset(std::size_t n, std::size_t side, std::uint64_t seed)
{
    if (n == 0) throw ContractError("dataset size must be at least 1");
    const std::size_t width = side * side;
    const std::size_t attrs = kShapeAttributeNames.size();
    std::vector<double> examples(n * width);
    std::vector<double> attributes(attrs * n);
    for (std::size_t i = 0; i < n; ++i) {
        numgrad::SeededRng rng = numgrad::SeededRng::substream(seed, i);
        const ShapeSpec spec = sample_shape_spec(rng).clamped();
        const Image image = render_shape(spec, side);
        std::copy(image.pixels.begin(), image.pixels.end(), examples.begin() + static_cast<std::ptrdiff_t>(i * width));
        const auto truth = attributes::image_attributes(spec, image);
        attributes[0 * n + i] = normalized_scale(truth.scale);
        attributes[1 * n + i] = truth.x;
        attributes[2 * n + i] = truth.y;
        attributes[3 * n + i] = normalized_orientation(truth.orientation);
        attributes[4 * n + i] = truth.area;
    }
    Dataset data(Domain::Shapes, n, width, std::move(examples),
                 std::vector<std::string>(kShapeAttributeNames.begin(), kShapeAttributeNames.end()),
                 std::move(attributes));
    data.set_side(side);
    data.set_manifest("seed", std::to_string(seed));
    data.set_manifest("generator", "shapes-v1");
    return data;
}

void MeasureSamplerConfig::validate() const
{
    auto probability = [](double p) { return p >= 0.0 && p <= 1.0; };
    if (!probability(onset_probability) || !probability(rest_probability)) {
        throw ContractError("sampler probabilities must lie in [0, 1]");
    }
    if (max_step < 0 || max_drift < 0) throw ContractError("pitch step bounds must be non-negative");
}

attributes::Measure sample_measure(const MeasureSamplerConfig& config, numgrad::SeededRng& rng)
{
    using attributes::Token;
    const int low = config.vocabulary.low();
    const int high = config.vocabulary.high();
    std::array<Token, attributes::kMeasureLength> tokens;
    bool sounding = false;
    bool have_pitch = false;
    int pitch = 0;
    int drift = 0;
    if (config.max_drift > 0) {
        drift = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(2 * config.max_drift + 1))) - config.max_drift;
    }
    for (auto& token : tokens) {
        if (rng.bernoulli(config.onset_probability)) {
            if (!have_pitch) {
                pitch = low + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(high - low + 1)));
                have_pitch = true;
            } else {
                const auto span = static_cast<std::uint64_t>(2 * config.max_step + 1);
                pitch += drift + static_cast<int>(rng.uniform_index(span)) - config.max_step;
                if (pitch < low) pitch = low + (low - pitch);
                if (pitch > high) pitch = high - (pitch - high);
                pitch = std::clamp(pitch, low, high);
            }
            token = Token::note(pitch);
            sounding = true;
        } else if (sounding && !rng.bernoulli(config.rest_probability)) {
            token = Token::hold();
        } else {
            token = Token::rest();
            sounding = false;
        }
    }
    return attributes::Measure(tokens);
}

attributes::MusicAttributeConfig music_config_for(const attributes::TokenVocabulary& vocabulary)
{
    attributes::MusicAttributeConfig config;
    config.range = static_cast<double>(vocabulary.high() - vocabulary.low());
    return config;
}

Dataset sample_measure_dataset(std::size_t n, const MeasureSamplerConfig& config)
{
    config.validate();
    if (n == 0) throw ContractError("dataset size must be at least 1");
    const auto music = music_config_for(config.vocabulary);
    const auto weights = attributes::ComplexityWeights::standard();
    const std::size_t width = attributes::kMeasureLength;
    std::vector<double> examples(n * width);
    std::vector<double> attrs(attributes::kMusicAttributeNames.size() * n);
    for (std::size_t i = 0; i < n; ++i) {
        numgrad::SeededRng rng = numgrad::SeededRng::substream(config.seed, i);
        const attributes::Measure m = sample_measure(config, rng);
        for (std::size_t t = 0; t < width; ++t) {
            examples[i * width + t] = static_cast<double>(config.vocabulary.id(m[t]));
        }
        attrs[0 * n + i] = attributes::rhythmic_complexity(m, weights);
        attrs[1 * n + i] = attributes::pitch_range(m, music);
        attrs[2 * n + i] = attributes::note_density(m);
        attrs[3 * n + i] = attributes::contour(m, music);
    }
    Dataset data(Domain::Measures, n, width, std::move(examples),
                 std::vector<std::string>(attributes::kMusicAttributeNames.begin(),
                                          attributes::kMusicAttributeNames.end()),
                 std::move(attrs));
    data.set_vocabulary(config.vocabulary);
    data.set_manifest("seed", std::to_string(config.seed));
    data.set_manifest("generator", "measures-v1");
    data.set_manifest("onset_probability", format_double(config.onset_probability));
    data.set_manifest("rest_probability", format_double(config.rest_probability));
    data.set_manifest("max_drift", std::to_string(config.max_drift));
    data.set_manifest("max_step", std::to_string(config.max_step));
    return data;
}

std::vector<double> recompute_music_attributes(const Dataset& data)
{
    const auto music = music_config_for(data.vocabulary());
    const std::size_t n = data.size();
    std::vector<double> out(data.attribute_count() * n);
    for (std::size_t i = 0; i < n; ++i) {
        const attributes::Measure m = data.measure(i);
        for (std::size_t l = 0; l < data.attribute_count(); ++l) {
            out[l * n + i] = attributes::music_attribute(data.attribute_names()[l], m, music);
        }
    }
    return out;
}

} // namespace arvae::datagen
