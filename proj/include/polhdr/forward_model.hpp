#pragma once

#include <cstdint>

#include "polhdr/image.hpp"
#include "polhdr/mosaic.hpp"

namespace polhdr {

/// Ideal Malus transmission cos^2(theta) between two perfect polarizers.
inline double malus_transmission(double theta) {
    const double c = std::cos(theta);
    return c * c;
}

/// Amplitude attenuation along the extinction axis for extinction ratio
/// rho: alpha = sqrt(rho / (rho + 1)). rho must lie in [0, 1).
double alpha_from_rho(double rho);

/// Real-amplitude Jones vector in the front polarizer's (transmission,
/// extinction) basis. Phases are dropped: the whole chain is real, so they
/// never reach |E|^2.
struct JonesVector {
    double x = 0.0;
    double y = 0.0;
};

inline double intensity(const JonesVector& e) { return e.x * e.x + e.y * e.y; }

/// Closed-form transmission of e0 through the imperfect pair (front
/// polarizer attenuating y by alpha, second polarizer at angle theta with
/// the same alpha):
///   x = X0 cos^2(t) + a X0 sin^2(t) + (a + a^2)(Y0 sin t cos t)
///   y = a^2 Y0 cos^2(t) + a Y0 sin^2(t) + (1 - a)(X0 sin t cos t)
/// This is the estimator analysis model (it drives the extinction sweep).
/// It matches jones_chain exactly when Y0 == 0 or alpha == 0; for
/// extinction-axis input the two differ in the x cross term
/// ((a + a^2) here vs (a - a^2) from the step composition), and this form
/// can exceed unit transmission once alpha grows past ~0.33.
JonesVector jones_through_pair(const JonesVector& e0, double theta, double alpha);

/// The optical chain composed step by step: diag(1, a1) -> rotate(theta)
/// -> diag(1, a2) -> rotate back. Supports distinct attenuations, never
/// amplifies (each step is a contraction), and is what the simulator uses
/// for every sensor pixel.
JonesVector jones_chain(const JonesVector& e0, double theta, double alpha1, double alpha2);

/// Transmission of unpolarized unit-intensity light through the imperfect
/// pair: incoherent average over kUnpolarizedAngles equally spaced incident
/// polarization angles. Exact for the quadratic intensity form (the
/// average kills the cos/sin 2psi terms), and equal to cos^2(theta)/2 when
/// both polarizers are ideal.
inline constexpr int kUnpolarizedAngles = 64;
double unpolarized_transmission(double theta, double alpha1, double alpha2);

/// Sensor behaviour after the optics: code = intensity * gain * time, with
/// optional Poisson shot noise (on the expected count), Gaussian read
/// noise, round-to-nearest quantization, and clipping at 2^bit_depth - 1.
struct SensorModel {
    int bit_depth = 8;
    double gain = 1.0;
    double read_noise_sigma = 0.0;
    bool shot_noise = false;
    bool quantize = true;

    double max_code() const { return double((1u << bit_depth) - 1u); }
};

/// Simulates one raw capture. The scene is sampled at superpixel
/// resolution: frame dimensions are 4x the scene's, and all 16 sensor
/// pixels of a superpixel see the same radiance through their own
/// polarizer angle. Deterministic: the per-pixel noise stream is derived
/// from (seed, pixel index), so any evaluation order gives identical
/// frames.
MosaicFrame simulate_capture(const SceneLight& scene, const PolarizerRig& rig,
                             const SensorModel& sensor, double exposure_time, std::uint64_t seed);

}  // namespace polhdr
