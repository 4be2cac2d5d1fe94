#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "polhdr/image.hpp"

namespace polhdr {

/// Optional per-pixel evaluation mask; nonzero = evaluate.
using PixelMask = std::vector<std::uint8_t>;

/// 10*log10(peak^2 / MSE) over the unmasked pixels. Identical inputs
/// return the +infinity sentinel.
double psnr(const Image2D& a, const Image2D& b, double peak, const PixelMask* mask = nullptr);

/// Mean local SSIM with an 11x11 Gaussian window (sigma 1.5),
/// C1=(0.01*peak)^2, C2=(0.03*peak)^2. Windows are centered where the full
/// 11x11 support fits. With a mask, masked pixels are excluded from the
/// window statistics (weights renormalized) and fully-masked windows are
/// skipped, so the result never reads a masked value.
double ssim(const Image2D& a, const Image2D& b, double peak, const PixelMask* mask = nullptr);

struct MetricReport {
    double psnr_db = 0.0;  // +inf when images identical on the region
    double ssim_value = 0.0;
    std::int64_t evaluated_pixel_count = 0;
    bool masked = false;
    // Reserved so externally computed values can be merged into reports.
    std::optional<double> ms_ssim;
    std::optional<double> q_score;
};

MetricReport compare(const Image2D& reference, const Image2D& test, double peak,
                     const PixelMask* mask = nullptr);

}  // namespace polhdr
