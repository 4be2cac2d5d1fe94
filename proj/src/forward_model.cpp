#include "polhdr/forward_model.hpp"

#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

#include "polhdr/error.hpp"

namespace polhdr {

double alpha_from_rho(double rho) {
    if (!(rho >= 0.0 && rho < 1.0))
        throw std::invalid_argument("alpha_from_rho: rho must be in [0,1), got " + std::to_string(rho));
    return std::sqrt(rho / (rho + 1.0));
}

JonesVector jones_through_pair(const JonesVector& e0, double theta, double alpha) {
    constexpr double kAlphaMax = M_SQRT1_2;
    if (!(alpha >= 0.0 && alpha < kAlphaMax))
        throw std::invalid_argument("jones_through_pair: alpha must be in [0, sqrt(1/2))");
    const double c = std::cos(theta), s = std::sin(theta);
    const double c2 = c * c, s2 = s * s, sc = s * c;
    const double a = alpha;
    return {e0.x * c2 + a * e0.x * s2 + (a + a * a) * (e0.y * sc),
            a * a * e0.y * c2 + a * e0.y * s2 + (1.0 - a) * (e0.x * sc)};
}

JonesVector jones_chain(const JonesVector& e0, double theta, double alpha1, double alpha2) {
    const double c = std::cos(theta), s = std::sin(theta);
    // Front polarizer attenuates the extinction-axis amplitude.
    JonesVector e1{e0.x, alpha1 * e0.y};
    // Project onto the second polarizer's axes (u, v), attenuate, reproject.
    JonesVector uv{c * e1.x + s * e1.y, -s * e1.x + c * e1.y};
    uv.y *= alpha2;
    return {c * uv.x - s * uv.y, s * uv.x + c * uv.y};
}

double unpolarized_transmission(double theta, double alpha1, double alpha2) {
    double sum = 0.0;
    for (int k = 0; k < kUnpolarizedAngles; ++k) {
        const double psi = M_PI * k / kUnpolarizedAngles;
        sum += intensity(jones_chain({std::cos(psi), std::sin(psi)}, theta, alpha1, alpha2));
    }
    return sum / kUnpolarizedAngles;
}

namespace {

uint64_t splitmix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

MosaicFrame simulate_capture(const SceneLight& scene, const PolarizerRig& rig,
                             const SensorModel& sensor, double exposure_time, std::uint64_t seed) {
    if (!(exposure_time > 0.0)) throw Error(Stage::Simulate, "exposure time must be positive");
    if (!(sensor.gain > 0.0)) throw Error(Stage::Simulate, "sensor gain must be positive");
    if (sensor.read_noise_sigma < 0.0) throw Error(Stage::Simulate, "negative read noise");
    for (double v : scene.radiance.data())
        if (!std::isfinite(v)) throw Error(Stage::Simulate, "non-finite scene radiance");

    const double a1 = alpha_from_rho(rig.front_rho());
    const double a2 = alpha_from_rho(rig.sensor_rho());
    const double max_code = sensor.max_code();
    const int sw = scene.radiance.width(), sh = scene.radiance.height();
    const int w = 4 * sw, h = 4 * sh;

    // Per-polarity relative angles and their unpolarized transmissions are
    // shared by every pixel of that polarity.
    std::array<double, 4> theta_rel, unpol;
    for (int i = 0; i < 4; ++i) {
        theta_rel[std::size_t(i)] = PolarityStack::nominal_angle(i) - rig.phi;
        unpol[std::size_t(i)] = unpolarized_transmission(theta_rel[std::size_t(i)], a1, a2);
    }
    const bool scalar_light = !scene.dolp.is_map() && !scene.aop.is_map();
    std::array<double, 4> pol_cached{};
    if (scalar_light) {
        const double chi = scene.aop.scalar() - rig.phi;
        for (int i = 0; i < 4; ++i)
            pol_cached[std::size_t(i)] = intensity(
                jones_chain({std::cos(chi), std::sin(chi)}, theta_rel[std::size_t(i)], a1, a2));
    }

    const bool noisy = sensor.shot_noise || sensor.read_noise_sigma > 0.0;
    const uint64_t stream_base = splitmix64(seed);
    Image2D frame(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int sy = y / 4, sx = x / 4;
            const int pol = MosaicLayout::polarity_at(y, x);
            const double rad = scene.radiance(sy, sx);
            const double d = scene.dolp(sy, sx);

            double transmitted = (1.0 - d) * rad * unpol[std::size_t(pol)];
            if (d > 0.0) {
                double pol_t;
                if (scalar_light) {
                    pol_t = pol_cached[std::size_t(pol)];
                } else {
                    const double chi = scene.aop(sy, sx) - rig.phi;
                    pol_t = intensity(jones_chain({std::cos(chi), std::sin(chi)},
                                                  theta_rel[std::size_t(pol)], a1, a2));
                }
                transmitted += d * rad * pol_t;
            }

            double code = transmitted * sensor.gain * exposure_time;
            if (noisy) {
                std::mt19937_64 rng(splitmix64(stream_base + std::uint64_t(y) * w + std::uint64_t(x)));
                if (sensor.shot_noise) {
                    std::poisson_distribution<long long> poisson(code);
                    code = double(poisson(rng));
                }
                if (sensor.read_noise_sigma > 0.0) {
                    std::normal_distribution<double> gauss(0.0, sensor.read_noise_sigma);
                    code += gauss(rng);
                }
            }
            if (sensor.quantize) code = std::round(code);
            frame(y, x) = clip(code, max_code);
        }
    }
    return MosaicFrame(LdrImage(std::move(frame), sensor.bit_depth));
}

}  // namespace polhdr
