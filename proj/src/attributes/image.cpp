#include "arvae/attributes/image.hpp"

#include "arvae/numgrad/errors.hpp"

#include <cmath>

namespace arvae::attributes {

ImageAttributes image_attributes(const ShapeSpec& spec, const Image& image)
{
    ImageAttributes out;
    out.scale = spec.scale;
    out.x = spec.x;
    out.y = spec.y;
    out.orientation = spec.orientation;
    out.shape = static_cast<double>(static_cast<int>(spec.kind));
    out.area = pixel_area(image.pixels);
    return out;
}

double pixel_area(std::span<const double> pixels)
{
    if (pixels.empty()) return 0.0;
    double mass = 0.0;
    for (double p : pixels) mass += p;
    return mass / static_cast<double>(pixels.size());
}

bool is_measurable_image_attribute(std::string_view name)
{
    return name == "area" || name == "x" || name == "y" || name == "scale";
}

double measured_image_attribute(std::string_view name, std::span<const double> pixels, std::size_t side)
{
    if (side * side != pixels.size()) throw DimensionError("image pixel count does not match side");
    if (name == "area") return pixel_area(pixels);
    if (!is_measurable_image_attribute(name)) {
        throw ContractError("attribute '" + std::string(name) + "' cannot be measured from pixels");
    }
    double mass = 0.0;
    double sx = 0.0;
    double sy = 0.0;
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const double p = pixels[r * side + c];
            mass += p;
            sx += p * (static_cast<double>(c) + 0.5);
            sy += p * (static_cast<double>(r) + 0.5);
        }
    }
    const double s = static_cast<double>(side);
    if (mass <= 0.0) return name == "scale" ? 0.0 : 0.5;
    const double cx = sx / mass;
    const double cy = sy / mass;
    if (name == "x") return cx / s;
    if (name == "y") return cy / s;

    // A uniform disk of radius r has mean squared distance r^2 / 2 from its centre.
    double moment = 0.0;
    for (std::size_t r = 0; r < side; ++r) {
        for (std::size_t c = 0; c < side; ++c) {
            const double dx = static_cast<double>(c) + 0.5 - cx;
            const double dy = static_cast<double>(r) + 0.5 - cy;
            moment += pixels[r * side + c] * (dx * dx + dy * dy);
        }
    }
    const double radius = std::sqrt(2.0 * moment / mass);
    return 2.0 * radius / s;
}

} // namespace arvae::attributes
