#pragma once

#include <cstdint>
#include <string>

namespace polhdr {

/// One serializable record holding every tunable default of the pipeline.
/// Reproducing a run needs nothing beyond this record, the inputs, and the
/// tool version. On-disk form: flat `key = value` lines; unknown keys are
/// rejected.
struct PipelineConfig {
    // validity thresholds (code units at the configured bit depth)
    double pmin = 5.0;
    double pmax = 250.0;
    // mode aggregation
    double hist_bin_deg = 0.25;
    // fusion
    double epsilon = 1e-6;
    double exposure_floor = 1e-6;
    // tone mapping
    double tonemap_key = 0.18;
    double tonemap_white_percentile = 99.9;
    // mosaic
    std::string channel = "luma";
    // simulator
    double phi_deg = 0.0;
    double rho = 0.0;
    double rho2 = -1.0;  // <0: same as rho
    double dolp = 0.0;
    double aop_deg = 0.0;
    int bit_depth = 8;
    double gain = 1.0;
    double exposure_time = 1.0;
    bool shot_noise = false;
    double read_noise_sigma = 0.0;
    bool quantize = true;
    std::uint64_t seed = 0;
    // extinction sweep scenario (degrees, front-polarizer frame)
    double sweep_chi_deg = 16.70;
    double sweep_theta_deg = 28.75;

    /// Canonical text form; parse(serialize()) round-trips losslessly.
    std::string serialize() const;
    static PipelineConfig parse(const std::string& text);

    static PipelineConfig load(const std::string& path);
    void save(const std::string& path) const;

    /// FNV-1a 64 over the canonical serialization, hex.
    std::string hash() const;
};

/// Tool version reported in every JSON artifact.
inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace polhdr
