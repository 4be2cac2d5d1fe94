#pragma once

#include <string>
#include <vector>

#include "polhdr/calibrate.hpp"
#include "polhdr/image.hpp"

namespace polhdr {

/// Linear HDR radiance with per-pixel bookkeeping of how many well-exposed
/// LDR samples contributed. coverage == 0 marks fallback-filled pixels that
/// evaluators should exclude.
struct HdrImage {
    Image2D image;
    std::vector<std::uint8_t> coverage;
};

/// Co-registered multi-shot exposure bracket; times strictly increasing.
struct Bracket {
    std::vector<std::pair<LdrImage, double>> snapshots;

    void add(LdrImage image, double exposure_time);
};

/// Exposures below this carry no usable signal (near-orthogonal polarity).
inline constexpr double kExposureFloor = 1e-6;

/// Denominator guard in the normalized weighted sum.
inline constexpr double kFusionEpsilon = 1e-6;

struct FusionParams {
    double epsilon = kFusionEpsilon;
    double exposure_floor = kExposureFloor;
};

/// Rescales LDR codes by 1/exposure. No clipping.
Image2D scale_image(const LdrImage& img, double exposure, double exposure_floor = kExposureFloor);

/// Binary well-exposedness indicator on the unscaled codes:
/// w = 1 iff p_min <= code <= p_max (inclusive).
Image2D weight_mask(const LdrImage& img, const ValidityThresholds& thresholds);

struct FuseResult {
    HdrImage hdr;
    std::vector<std::string> warnings;  // dropped polarities etc.
};

/// Normalized weighted sum of the exposure-scaled polarity images:
/// H = sum(w_i * I'_i) / (sum(w_i) + eps). Polarities whose estimated
/// exposure is below the floor are dropped with a warning; zero-coverage
/// pixels are filled by the highlight/shadow proxy rule but keep
/// coverage 0.
FuseResult fuse_hdr(const PolarityStack& stack, const ExposureEstimate& estimate,
                    const ValidityThresholds& thresholds, const FusionParams& params = {});

/// Same math over a known-exposure bracket, with exposure times as the
/// scale divisors (H comes out in per-unit-time code units).
FuseResult fuse_bracket(const Bracket& bracket, const ValidityThresholds& thresholds,
                        const FusionParams& params = {});

struct ReinhardParams {
    double key = 0.18;
    /// Percentile of scaled luminance used as the white point; values >=
    /// 100 disable the burn term.
    double white_percentile = 99.9;
};

/// Global photographic tone map: L' = (key / exp(mean log L)) * L, then
/// L'(1 + L'/Lw^2)/(1 + L'), mapped onto [0, max_code]. Monotone.
LdrImage tonemap_reinhard(const HdrImage& hdr, const ReinhardParams& params = {}, int bit_depth = 8);

}  // namespace polhdr
