#include "polhdr/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "polhdr/error.hpp"
#include "polhdr/forward_model.hpp"

namespace polhdr {

ValidityThresholds::ValidityThresholds(double p_min_, double p_max_) : p_min(p_min_), p_max(p_max_) {
    if (!(p_min >= 0.0 && p_min < p_max))
        throw std::invalid_argument("ValidityThresholds: need 0 <= p_min < p_max");
}

ValidityThresholds ValidityThresholds::defaults_for_bits(int bit_depth) {
    const double scale = (double((1u << bit_depth) - 1u)) / 255.0;
    return ValidityThresholds(5.0 * scale, 250.0 * scale);
}

AngleMap estimate_angle_map(const LdrImage& i_parallel, const LdrImage& i_orthogonal,
                            const ValidityThresholds& thresholds) {
    if (!i_parallel.image().same_size(i_orthogonal.image()))
        throw std::invalid_argument("estimate_angle_map: image size mismatch");

    AngleMap out;
    out.angle = Image2D(i_parallel.width(), i_parallel.height());
    out.valid.assign(out.angle.size(), 0);
    for (std::size_t i = 0; i < out.angle.size(); ++i) {
        const double par = i_parallel.image().at_index(i);
        const double orth = i_orthogonal.image().at_index(i);
        // par > 0 guards the division when p_min is configured as 0.
        if (thresholds.well_exposed(par) && thresholds.well_exposed(orth) && par > 0.0) {
            out.angle.at_index(i) = std::atan(std::sqrt(orth / par));
            out.valid[i] = 1;
            ++out.valid_count;
        }
    }
    return out;
}

namespace {

ModeResult aggregate_impl(std::vector<double> estimates, const AngleHistogramConfig& config) {
    if (estimates.empty()) throw Error(Stage::Calibrate, "no valid pixels to aggregate");
    if (!(config.bin_width > 0.0)) throw std::invalid_argument("aggregate_mode: bin width must be > 0");

    const double half_pi = M_PI / 2.0;
    const int nbins = std::max(1, int(std::ceil(half_pi / config.bin_width)));
    AngleHistogram hist;
    hist.bin_width = config.bin_width;
    hist.counts.assign(std::size_t(nbins), 0);

    auto bin_of = [&](double v) {
        int b = int(v / config.bin_width);
        return std::clamp(b, 0, nbins - 1);
    };
    for (double v : estimates) ++hist.counts[std::size_t(bin_of(v))];

    // argmax; ties resolve to the lowest-angle bin by scan order
    int winner = 0;
    for (int b = 1; b < nbins; ++b)
        if (hist.counts[std::size_t(b)] > hist.counts[std::size_t(winner)]) winner = b;

    std::vector<double> in_bin;
    for (double v : estimates)
        if (bin_of(v) == winner) in_bin.push_back(v);
    std::sort(in_bin.begin(), in_bin.end());
    const std::size_t n = in_bin.size();
    const double median =
        (n % 2 == 1) ? in_bin[n / 2] : 0.5 * (in_bin[n / 2 - 1] + in_bin[n / 2]);

    return {median, std::move(hist)};
}

}  // namespace

ModeResult aggregate_mode(const AngleMap& map, const AngleHistogramConfig& config) {
    std::vector<double> estimates;
    estimates.reserve(std::size_t(map.valid_count));
    for (std::size_t i = 0; i < map.valid.size(); ++i)
        if (map.valid[i]) estimates.push_back(map.angle.at_index(i));
    return aggregate_impl(std::move(estimates), config);
}

ModeResult aggregate_mode(const std::vector<double>& estimates, const AngleHistogramConfig& config) {
    return aggregate_impl(estimates, config);
}

ExposureEstimate estimate_exposures(const PolarityStack& stack, const ValidityThresholds& thresholds,
                                    const AngleHistogramConfig& config) {
    ExposureEstimate est;
    double theta_pair[2] = {0.0, M_PI / 4.0};  // nominal fallbacks

    for (int pair = 0; pair < 2; ++pair) {
        const int par = pair, orth = pair + 2;
        AngleMap map = estimate_angle_map(stack[par], stack[orth], thresholds);
        est.valid_pixel_count[std::size_t(par)] = map.valid_count;
        est.valid_pixel_count[std::size_t(orth)] = map.valid_count;
        if (map.valid_count == 0) {
            est.pair_valid[std::size_t(pair)] = false;
            continue;
        }
        ModeResult mode = aggregate_mode(map, config);
        theta_pair[pair] = mode.theta;
        est.histogram[std::size_t(pair)] = std::move(mode.histogram);
    }
    if (!est.pair_valid[0] && !est.pair_valid[1])
        throw Error(Stage::Calibrate, "calibration failure: no properly exposed pixels in either pair");

    est.set_angles(theta_pair[0], theta_pair[1]);
    return est;
}

std::vector<SweepRow> sweep_extinction_error(const std::vector<double>& rho_grid,
                                             const SweepScenario& scenario,
                                             const ValidityThresholds& thresholds) {
    if (!(scenario.dolp >= 0.0 && scenario.dolp <= 1.0))
        throw std::invalid_argument("sweep: dolp out of [0,1]");
    const double chi = scenario.chi_deg * M_PI / 180.0;
    const double theta = scenario.theta_deg * M_PI / 180.0;
    const double truth = canonical_angle(theta);
    if (!(truth > 0.0)) throw std::invalid_argument("sweep: scenario angle must be nonzero");

    std::vector<SweepRow> rows;
    rows.reserve(rho_grid.size());
    const int n = 32;  // synthesized image side; constant scene, so any size works
    for (double rho : rho_grid) {
        if (!(rho >= 0.0 && rho < 1.0)) throw std::invalid_argument("sweep: rho out of [0,1)");
        const double a = alpha_from_rho(rho);
        const JonesVector e0{std::cos(chi), std::sin(chi)};
        // The error analysis runs on the closed-form pair transmission (the
        // estimator's own model), not the simulator's composed chain.
        auto transmitted = [&](double th) {
            double t = scenario.dolp * intensity(jones_through_pair(e0, th, a));
            if (scenario.dolp < 1.0) {
                double sum = 0.0;
                for (int k = 0; k < kUnpolarizedAngles; ++k) {
                    const double psi = M_PI * k / kUnpolarizedAngles;
                    sum += intensity(jones_through_pair({std::cos(psi), std::sin(psi)}, th, a));
                }
                t += (1.0 - scenario.dolp) * sum / kUnpolarizedAngles;
            }
            return t;
        };
        const double t_par = transmitted(theta);
        const double t_orth = transmitted(theta + M_PI / 2.0);
        // Scale the pair so the brighter arm sits at 80% of the threshold
        // ceiling; codes stay real-valued (no sensor noise in the sweep).
        const double scale = 0.8 * thresholds.p_max / std::max(t_par, t_orth);
        LdrImage par(Image2D(n, n, t_par * scale), 8);
        LdrImage orth(Image2D(n, n, t_orth * scale), 8);

        AngleMap map = estimate_angle_map(par, orth, thresholds);
        ModeResult mode = aggregate_mode(map);
        const double err = std::fabs(mode.theta - truth) / truth * 100.0;
        rows.push_back({rho, mode.theta * 180.0 / M_PI, err});
    }
    return rows;
}

}  // namespace polhdr
