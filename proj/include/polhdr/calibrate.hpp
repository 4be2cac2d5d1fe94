#pragma once

#include <cstdint>
#include <vector>

#include "polhdr/image.hpp"

namespace polhdr {

/// Code-domain bounds separating properly exposed pixels from clipped or
/// noise-floor ones. Defaults are for 8-bit data and scale proportionally
/// for other depths.
struct ValidityThresholds {
    double p_min = 5.0;
    double p_max = 250.0;

    ValidityThresholds() = default;
    ValidityThresholds(double p_min_, double p_max_);

    static ValidityThresholds defaults_for_bits(int bit_depth);

    bool well_exposed(double code) const { return code >= p_min && code <= p_max; }
};

/// Histogram discretization of the mode over [0, pi/2].
struct AngleHistogramConfig {
    double bin_width = 0.25 * M_PI / 180.0;  // 0.25 degrees
};

/// Per-pixel angle estimates with their validity mask.
struct AngleMap {
    Image2D angle;                // radians; 0 where invalid
    std::vector<std::uint8_t> valid;
    std::int64_t valid_count = 0;
};

/// Per-pixel closed-form estimate theta = arctan(sqrt(I_orth / I_par)),
/// restricted to pixels where BOTH inputs are properly exposed.
AngleMap estimate_angle_map(const LdrImage& i_parallel, const LdrImage& i_orthogonal,
                            const ValidityThresholds& thresholds);

struct ModeResult {
    double theta = 0.0;  // radians
    AngleHistogram histogram;
};

/// Mode of the accepted estimates: most-populated histogram bin (ties break
/// to the lowest-angle bin), refined by the median of the estimates inside
/// the winning bin. Throws a calibration-failure Error when no pixel is
/// valid.
ModeResult aggregate_mode(const AngleMap& map, const AngleHistogramConfig& config = {});
ModeResult aggregate_mode(const std::vector<double>& estimates,
                          const AngleHistogramConfig& config = {});

/// Full self-calibration: theta1 from (I(theta1), I(theta3)), theta2 from
/// (I(theta2), I(theta4)), theta3/theta4 by complement. A pair with no
/// valid pixels falls back to its nominal angle and is flagged; both pairs
/// failing raises a calibration-failure Error.
ExposureEstimate estimate_exposures(const PolarityStack& stack, const ValidityThresholds& thresholds,
                                    const AngleHistogramConfig& config = {});

/// Incident-light specification for the extinction-ratio sweep, measured in
/// the front polarizer's frame. The paper does not state its Fig. 7 setup;
/// these defaults were calibrated to reproduce its reported operating
/// point (2.93% error at rho = 1/500) together with monotone, log-linear
/// error growth over rho in [1e-4, 1e-1].
struct SweepScenario {
    double chi_deg = 16.70;    // light polarization angle from P1's transmission axis
    double theta_deg = 28.75;  // parallel-arm sensor angle from P1's transmission axis
    double dolp = 1.0;         // fully polarized by default
};

struct SweepRow {
    double rho = 0.0;
    double theta_hat_deg = 0.0;
    double error_percent = 0.0;
};

/// For each rho: synthesize the (parallel, orthogonal) images through the
/// imperfect Jones chain, run the estimator + mode aggregation, and report
/// the relative angle error in percent.
std::vector<SweepRow> sweep_extinction_error(const std::vector<double>& rho_grid,
                                             const SweepScenario& scenario = {},
                                             const ValidityThresholds& thresholds = {});

}  // namespace polhdr
