#pragma once

#include "arvae/datagen/shape_spec.hpp"

#include <span>
#include <string>
#include <string_view>

namespace arvae::attributes {

using datagen::Image;
using datagen::ShapeSpec;

struct ImageAttributes {
    double scale = 0.0;
    double x = 0.0;
    double y = 0.0;
    double orientation = 0.0;
    double shape = 0.0; // ShapeKind ordinal
    double area = 0.0;  // pixel mass / pixel count
};

/// Ground-truth factors of `spec` plus the pixel mass of the rendered image.
ImageAttributes image_attributes(const ShapeSpec& spec, const Image& image);

double pixel_area(std::span<const double> pixels);

/// Attributes recoverable from pixels alone: "area" (pixel mass), "x" and "y"
/// (intensity centroid over the side), "scale" (diameter of the disk with the
/// same radius of gyration, over the side). Throws for anything else.
double measured_image_attribute(std::string_view name, std::span<const double> pixels, std::size_t side);
bool is_measurable_image_attribute(std::string_view name);

} // namespace arvae::attributes
