#include "polhdr/fusion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polhdr/error.hpp"

namespace polhdr {

void Bracket::add(LdrImage image, double exposure_time) {
    if (!(exposure_time > 0.0)) throw std::invalid_argument("Bracket: exposure time must be positive");
    if (!snapshots.empty()) {
        if (!(exposure_time > snapshots.back().second))
            throw std::invalid_argument("Bracket: exposure times must be strictly increasing");
        if (!image.image().same_size(snapshots.front().first.image()))
            throw std::invalid_argument("Bracket: snapshot size mismatch");
    }
    snapshots.emplace_back(std::move(image), exposure_time);
}

Image2D scale_image(const LdrImage& img, double exposure, double exposure_floor) {
    if (!(exposure > exposure_floor))
        throw Error(Stage::Fuse, "exposure " + std::to_string(exposure) +
                                     " at or below floor " + std::to_string(exposure_floor));
    Image2D out(img.width(), img.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.at_index(i) = img.image().at_index(i) / exposure;
    return out;
}

Image2D weight_mask(const LdrImage& img, const ValidityThresholds& thresholds) {
    Image2D out(img.width(), img.height());
    for (std::size_t i = 0; i < out.size(); ++i)
        out.at_index(i) = thresholds.well_exposed(img.image().at_index(i)) ? 1.0 : 0.0;
    return out;
}

namespace {

// Shared core of fuse_hdr / fuse_bracket: images with their exposures,
// weights computed on the unscaled codes.
FuseResult fuse_weighted(const std::vector<const LdrImage*>& images,
                         const std::vector<double>& exposures, const ValidityThresholds& thresholds,
                         const FusionParams& params, std::vector<std::string> warnings) {
    const std::size_t n = images.size();
    if (n == 0) throw Error(Stage::Fuse, "fusion failure: every input was dropped");

    const int w = images[0]->width(), h = images[0]->height();
    std::vector<Image2D> scaled;
    scaled.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        scaled.push_back(scale_image(*images[i], exposures[i], params.exposure_floor));

    // Fallback sources: lowest exposure for highlights, highest for shadows.
    std::size_t lowest = 0, highest = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (exposures[i] < exposures[lowest]) lowest = i;
        if (exposures[i] > exposures[highest]) highest = i;
    }

    HdrImage out;
    out.image = Image2D(w, h);
    out.coverage.assign(std::size_t(w) * h, 0);
    for (std::size_t p = 0; p < out.image.size(); ++p) {
        double num = 0.0;
        int cover = 0;
        bool any_saturated = false;
        for (std::size_t i = 0; i < n; ++i) {
            const double code = images[i]->image().at_index(p);
            if (thresholds.well_exposed(code)) {
                num += scaled[i].at_index(p);
                ++cover;
            } else if (code > thresholds.p_max) {
                any_saturated = true;
            }
        }
        if (cover > 0) {
            out.image.at_index(p) = num / (double(cover) + params.epsilon);
            out.coverage[p] = std::uint8_t(cover);
        } else {
            // Poorly exposed everywhere: keep coverage 0 but fill with the
            // best proxy so the image has no holes.
            out.image.at_index(p) =
                any_saturated ? scaled[lowest].at_index(p) : scaled[highest].at_index(p);
        }
    }
    return {std::move(out), std::move(warnings)};
}

}  // namespace

FuseResult fuse_hdr(const PolarityStack& stack, const ExposureEstimate& estimate,
                    const ValidityThresholds& thresholds, const FusionParams& params) {
    std::vector<const LdrImage*> images;
    std::vector<double> exposures;
    std::vector<std::string> warnings;
    for (int i = 0; i < 4; ++i) {
        const double e = estimate.exposure[std::size_t(i)];
        if (e > params.exposure_floor) {
            images.push_back(&stack[i]);
            exposures.push_back(e);
        } else {
            warnings.push_back("polarity " + std::to_string(i + 1) + " dropped: exposure " +
                               std::to_string(e) + " below floor");
        }
    }
    if (images.empty()) throw Error(Stage::Fuse, "fusion failure: all polarities dropped");
    return fuse_weighted(images, exposures, thresholds, params, std::move(warnings));
}

FuseResult fuse_bracket(const Bracket& bracket, const ValidityThresholds& thresholds,
                        const FusionParams& params) {
    if (bracket.snapshots.size() < 2)
        throw Error(Stage::Fuse, "bracket needs at least 2 snapshots");
    std::vector<const LdrImage*> images;
    std::vector<double> exposures;
    for (const auto& [img, t] : bracket.snapshots) {
        images.push_back(&img);
        exposures.push_back(t);
    }
    return fuse_weighted(images, exposures, thresholds, params, {});
}

LdrImage tonemap_reinhard(const HdrImage& hdr, const ReinhardParams& params, int bit_depth) {
    if (!(params.key > 0.0)) throw std::invalid_argument("tonemap: key must be positive");
    const double max_code = double((1u << bit_depth) - 1u);
    const auto& L = hdr.image;

    constexpr double kLogGuard = 1e-6;
    double log_sum = 0.0;
    for (std::size_t i = 0; i < L.size(); ++i) log_sum += std::log(kLogGuard + L.at_index(i));
    const double log_avg = std::exp(log_sum / double(L.size()));
    const double exposure_scale = params.key / log_avg;

    std::vector<double> scaled(L.size());
    for (std::size_t i = 0; i < L.size(); ++i) scaled[i] = exposure_scale * L.at_index(i);

    double white = std::numeric_limits<double>::infinity();
    if (params.white_percentile < 100.0) {
        std::vector<double> sorted = scaled;
        std::sort(sorted.begin(), sorted.end());
        const double rank = params.white_percentile / 100.0 * double(sorted.size() - 1);
        white = sorted[std::size_t(std::llround(rank))];
    }
    const double inv_white2 = std::isfinite(white) && white > 0.0 ? 1.0 / (white * white) : 0.0;

    Image2D out(L.width(), L.height());
    for (std::size_t i = 0; i < L.size(); ++i) {
        const double l = scaled[i];
        const double display = l * (1.0 + l * inv_white2) / (1.0 + l);
        out.at_index(i) = clip(display * max_code, max_code);
    }
    return LdrImage(std::move(out), bit_depth);
}

}  // namespace polhdr
