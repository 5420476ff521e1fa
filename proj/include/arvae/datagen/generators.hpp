#pragma once

#include "arvae/attributes/music.hpp"
#include "arvae/datagen/dataset.hpp"
#include "arvae/datagen/shape_spec.hpp"
#include "arvae/numgrad/rng.hpp"

#include <cstdint>

namespace arvae::datagen {

/// Antialiased raster of `spec` (clamped to the canvas first); each pixel is
/// the covered fraction of `supersample`^2 sample points.
Image render_shape(const ShapeSpec& spec, std::size_t side, std::size_t supersample = 8);

/// Factors drawn uniformly: kind, scale in [0.2, 0.9], orientation in
/// [0, pi/2), and a centre uniform over the positions that keep the shape
/// inside the canvas.
ShapeSpec sample_shape_spec(numgrad::SeededRng& rng);

// Stored shape attributes are normalised with the fixed factor ranges:
// (scale - 0.2) / 0.7, x, y, orientation / (pi / 2), area.
inline constexpr std::array<const char*, 5> kShapeAttributeNames{"scale", "x", "y", "orientation", "area"};
double normalized_scale(double scale);
double normalized_orientation(double orientation);

/// Example i is generated from substream (seed, i), so the result does not
/// depend on generation order.
Dataset sample_shape_dataset(std::size_t n, std::size_t side, std::uint64_t seed);

struct MeasureSamplerConfig {
    double onset_probability = 0.3;
    // Chance that a non-onset tick after a sounding note becomes a rest
    // rather than a continuation.
    double rest_probability = 0.25;
    // Each measure draws a drift d uniform in [-max_drift, max_drift]; pitch
    // walk steps are then d plus a uniform integer in [-max_step, max_step],
    // reflected at the vocabulary edges. max_drift = 0 is an unbiased walk.
    int max_drift = 0;
    int max_step = 4;
    attributes::TokenVocabulary vocabulary{48, 84};
    std::uint64_t seed = 0;

    void validate() const;
};

attributes::Measure sample_measure(const MeasureSamplerConfig& config, numgrad::SeededRng& rng);

/// Attributes: rhy_complexity, pitch_range, note_density, contour, with R set
/// to the vocabulary span.
Dataset sample_measure_dataset(std::size_t n, const MeasureSamplerConfig& config);

attributes::MusicAttributeConfig music_config_for(const attributes::TokenVocabulary& vocabulary);

/// Music attributes recomputed from the stored token ids (L x N, same order
/// as the dataset's attribute names).
std::vector<double> recompute_music_attributes(const Dataset& data);

} // namespace arvae::datagen
