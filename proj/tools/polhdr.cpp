// polhdr: snapshot HDR reconstruction for polarization cameras.
// Subcommands cover the full pipeline: simulate -> demux -> calibrate ->
// fuse -> eval, plus multi-shot bracket fusion and the extinction-ratio
// error sweep.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polhdr/calibrate.hpp"
#include "polhdr/config.hpp"
#include "polhdr/error.hpp"
#include "polhdr/forward_model.hpp"
#include "polhdr/fusion.hpp"
#include "polhdr/io.hpp"
#include "polhdr/metrics.hpp"
#include "polhdr/mosaic.hpp"
#include "polhdr/pipeline.hpp"

namespace {

using namespace polhdr;

constexpr double kDegToRad = M_PI / 180.0;

std::string angle_file(const std::string& prefix, int polarity, const std::string& ext) {
    static const char* kLabels[4] = {"000", "045", "090", "135"};
    return prefix + kLabels[polarity] + "." + ext;
}

PolarityStack load_stack(const std::vector<std::string>& paths) {
    if (paths.size() != 4)
        throw Error(Stage::Io, "expected exactly 4 stack images (theta = 0,45,90,135), got " +
                                   std::to_string(paths.size()));
    std::array<LdrImage, 4> images;
    for (int i = 0; i < 4; ++i) images[std::size_t(i)] = read_ldr(paths[std::size_t(i)]);
    try {
        return PolarityStack(std::move(images));
    } catch (const std::invalid_argument& e) {
        throw Error(Stage::Io, e.what());
    }
}

int run_simulate(const PipelineConfig& cfg, const std::string& scene_path, const std::string& out,
                 const std::string& gt_out) {
    Image2D radiance = read_pfm(scene_path);
    SceneLight scene(std::move(radiance), ParamMap(cfg.dolp), ParamMap(cfg.aop_deg * kDegToRad));
    PolarizerRig rig(cfg.phi_deg * kDegToRad, cfg.rho, cfg.rho2);
    SensorModel sensor{cfg.bit_depth, cfg.gain, cfg.read_noise_sigma, cfg.shot_noise, cfg.quantize};
    MosaicFrame frame = simulate_capture(scene, rig, sensor, cfg.exposure_time, cfg.seed);
    write_ldr(out, frame.image());
    if (!gt_out.empty()) write_pfm(gt_out, scene.radiance);
    std::cout << "wrote " << out << " (" << frame.width() << "x" << frame.height() << ", "
              << frame.bit_depth() << "-bit)\n";
    return 0;
}

int run_demux(const std::string& input, const std::string& channel, const std::string& prefix,
              const std::string& format) {
    MosaicFrame frame(read_ldr(input));
    Channel ch;
    try {
        ch = channel_from_string(channel);
    } catch (const std::invalid_argument& e) {
        throw Error(Stage::Demux, e.what());
    }
    PolarityStack stack = demux(frame, ch);
    for (int i = 0; i < 4; ++i) {
        const std::string path = angle_file(prefix, i, format);
        write_ldr(path, stack[i]);
        std::cout << "wrote " << path << "\n";
    }
    return 0;
}

int run_calibrate(const std::vector<std::string>& stacks, const PipelineConfig& cfg,
                  const std::string& report) {
    PolarityStack stack = load_stack(stacks);
    ValidityThresholds thr(cfg.pmin, cfg.pmax);
    AngleHistogramConfig hist{cfg.hist_bin_deg * kDegToRad};
    ExposureEstimate est = estimate_exposures(stack, thr, hist);
    for (int i = 0; i < 4; ++i)
        std::printf("theta_%d: %8.4f deg   exposure %.6f   valid px %lld\n", i + 1,
                    est.theta_hat[std::size_t(i)] / kDegToRad, est.exposure[std::size_t(i)],
                    static_cast<long long>(est.valid_pixel_count[std::size_t(i)]));
    if (!report.empty()) {
        Provenance prov = Provenance::make(cfg, stacks);
        write_calib_report(report, est, prov, cfg);
        std::cout << "wrote " << report << "\n";
    }
    return 0;
}

int run_fuse(const std::vector<std::string>& stacks, const std::string& calib,
             const PipelineConfig& cfg, const std::string& out, const std::string& tonemap_out) {
    PolarityStack stack = load_stack(stacks);
    ValidityThresholds thr(cfg.pmin, cfg.pmax);
    ExposureEstimate est;
    if (!calib.empty()) {
        est = read_calib_report(calib);
    } else {
        AngleHistogramConfig hist{cfg.hist_bin_deg * kDegToRad};
        est = estimate_exposures(stack, thr, hist);
    }
    FuseResult fused = fuse_hdr(stack, est, thr, FusionParams{cfg.epsilon, cfg.exposure_floor});
    for (const auto& warning : fused.warnings) std::cerr << "warning: " << warning << "\n";
    write_pfm(out, fused.hdr.image);
    std::cout << "wrote " << out << "\n";
    if (!tonemap_out.empty()) {
        LdrImage preview =
            tonemap_reinhard(fused.hdr, ReinhardParams{cfg.tonemap_key, cfg.tonemap_white_percentile});
        write_ldr(tonemap_out, preview);
        std::cout << "wrote " << tonemap_out << "\n";
    }
    return 0;
}

std::vector<double> read_times_csv(const std::string& path, std::size_t expected) {
    std::ifstream f(path);
    if (!f) throw Error(Stage::Io, path + ": cannot open");
    std::vector<double> times;
    std::string tok;
    while (std::getline(f, tok, ',')) {
        // allow newline-separated too
        std::istringstream cell(tok);
        std::string piece;
        while (cell >> piece) {
            try {
                times.push_back(std::stod(piece));
            } catch (const std::exception&) {
                throw Error(Stage::Io, path + ": bad exposure time '" + piece + "'");
            }
        }
    }
    if (times.size() != expected)
        throw Error(Stage::Io, path + ": have " + std::to_string(times.size()) + " times for " +
                                   std::to_string(expected) + " snapshots");
    return times;
}

int run_fuse_bracket(const std::vector<std::string>& shots, const std::string& times_csv,
                     const PipelineConfig& cfg, const std::string& out) {
    std::vector<double> times = read_times_csv(times_csv, shots.size());
    std::vector<std::size_t> order(times.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return times[a] < times[b]; });

    Bracket bracket;
    try {
        for (auto i : order) bracket.add(read_ldr(shots[i]), times[i]);
    } catch (const std::invalid_argument& e) {
        throw Error(Stage::Fuse, e.what());
    }
    ValidityThresholds thr(cfg.pmin, cfg.pmax);
    FuseResult fused = fuse_bracket(bracket, thr, FusionParams{cfg.epsilon, cfg.exposure_floor});
    for (const auto& warning : fused.warnings) std::cerr << "warning: " << warning << "\n";
    write_pfm(out, fused.hdr.image);
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_eval(const std::string& ref_path, const std::string& test_path, const std::string& mask_path,
             bool tonemapped, const PipelineConfig& cfg, const std::string& report) {
    Image2D ref = read_pfm(ref_path);
    Image2D test = read_pfm(test_path);

    PixelMask mask;
    const PixelMask* mask_ptr = nullptr;
    if (!mask_path.empty()) {
        LdrImage m = read_ldr(mask_path);
        if (!m.image().same_size(ref)) throw Error(Stage::Eval, "mask size mismatch");
        mask.resize(m.image().size());
        for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = m.image().at_index(i) > 0.0 ? 1 : 0;
        mask_ptr = &mask;
    }

    double peak = 0.0;
    for (double v : ref.data()) peak = std::max(peak, v);
    if (peak <= 0.0) throw Error(Stage::Eval, "reference image is all zero");

    MetricReport linear = compare(ref, test, peak, mask_ptr);
    std::printf("linear: psnr %s dB, ssim %.6f (%lld px)\n",
                std::isinf(linear.psnr_db) ? "inf" : std::to_string(linear.psnr_db).c_str(),
                linear.ssim_value, static_cast<long long>(linear.evaluated_pixel_count));

    MetricReport tone_report;
    MetricReport* tone_ptr = nullptr;
    if (tonemapped) {
        // Same operator for both images, per-image log-average anchoring.
        ReinhardParams params{cfg.tonemap_key, cfg.tonemap_white_percentile};
        HdrImage href{ref, {}};
        HdrImage htest{test, {}};
        Image2D tref = tonemap_reinhard(href, params).image();
        Image2D ttest = tonemap_reinhard(htest, params).image();
        tone_report = compare(tref, ttest, 255.0, mask_ptr);
        tone_ptr = &tone_report;
        std::printf("tonemapped: psnr %s dB, ssim %.6f\n",
                    std::isinf(tone_report.psnr_db) ? "inf"
                                                    : std::to_string(tone_report.psnr_db).c_str(),
                    tone_report.ssim_value);
    }
    if (!report.empty()) {
        std::vector<std::string> inputs = {ref_path, test_path};
        if (!mask_path.empty()) inputs.push_back(mask_path);
        Provenance prov = Provenance::make(cfg, inputs);
        write_eval_report(report, linear, tone_ptr, prov, cfg);
        std::cout << "wrote " << report << "\n";
    }
    return 0;
}

int run_sweep(double rho_min, double rho_max, int steps, bool include_zero,
              const PipelineConfig& cfg, const std::string& out) {
    if (!(rho_min > 0.0 && rho_max > rho_min) || steps < 2)
        throw Error(Stage::Sweep, "need 0 < rho-min < rho-max and steps >= 2");
    std::vector<double> grid;
    if (include_zero) grid.push_back(0.0);
    for (int i = 0; i < steps; ++i) {
        const double t = double(i) / (steps - 1);
        grid.push_back(std::pow(10.0, std::log10(rho_min) + t * (std::log10(rho_max) - std::log10(rho_min))));
    }
    SweepScenario scenario{cfg.sweep_chi_deg, cfg.sweep_theta_deg, 1.0};
    ValidityThresholds thr(cfg.pmin, cfg.pmax);
    auto rows = sweep_extinction_error(grid, scenario, thr);

    std::ofstream f(out);
    if (!f) throw Error(Stage::Io, out + ": cannot open for writing");
    f << "rho,theta_hat_deg,error_percent\n";
    char line[128];
    for (const auto& row : rows) {
        std::snprintf(line, sizeof(line), "%.10g,%.10g,%.10g\n", row.rho, row.theta_hat_deg,
                      row.error_percent);
        f << line;
    }
    std::cout << "wrote " << out << " (" << rows.size() << " rows)\n";
    return 0;
}

int run_full_pipeline(const std::string& raw, const std::string& config_path,
                      const std::string& out_dir, bool preview) {
    PipelineConfig cfg;
    if (!config_path.empty()) cfg = PipelineConfig::load(config_path);
    PipelineResult result = run_pipeline(raw, cfg, out_dir, preview);
    for (const auto& warning : result.fused.warnings) std::cerr << "warning: " << warning << "\n";
    for (int i = 0; i < 4; ++i)
        std::printf("theta_%d: %8.4f deg   exposure %.6f\n", i + 1,
                    result.estimate.theta_hat[std::size_t(i)] / kDegToRad,
                    result.estimate.exposure[std::size_t(i)]);
    std::cout << "wrote " << result.hdr_path << "\n" << "wrote " << result.calib_path << "\n";
    if (!result.preview_path.empty()) std::cout << "wrote " << result.preview_path << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"snapshot HDR reconstruction with a polarization camera"};
    app.set_version_flag("--version", std::string(polhdr::kToolVersion));
    app.require_subcommand(1);

    PipelineConfig cfg;

    // simulate
    auto* sim = app.add_subcommand("simulate", "render a raw mosaic frame from a PFM scene");
    std::string scene_path, sim_out = "raw.png", gt_out;
    sim->add_option("--scene", scene_path, "scene radiance PFM")->required();
    sim->add_option("--out", sim_out, "output raw frame (.png/.pgm)");
    sim->add_option("--gt-out", gt_out, "also export the ground-truth radiance PFM");
    sim->add_option("--dolp", cfg.dolp, "degree of linear polarization [0,1]");
    sim->add_option("--aop-deg", cfg.aop_deg, "angle of polarization, sensor frame, degrees");
    sim->add_option("--phi-deg", cfg.phi_deg, "front polarizer angle, degrees");
    sim->add_option("--rho", cfg.rho, "extinction ratio (both polarizers)");
    sim->add_option("--rho2", cfg.rho2, "sensor-array extinction ratio (default: same as --rho)");
    sim->add_option("--bits", cfg.bit_depth, "sensor bit depth");
    sim->add_option("--gain", cfg.gain, "sensor gain (codes per radiance-second)");
    sim->add_option("--time", cfg.exposure_time, "exposure time, seconds");
    sim->add_option("--seed", cfg.seed, "noise seed");
    sim->add_flag("--shot-noise", cfg.shot_noise, "enable Poisson shot noise");
    sim->add_option("--read-noise", cfg.read_noise_sigma, "Gaussian read noise sigma, code units");
    bool no_quantize = false;
    sim->add_flag("--no-quantize", no_quantize, "keep codes real-valued (no rounding)");

    // demux
    auto* dm = app.add_subcommand("demux", "split a raw frame into four per-polarity images");
    std::string dm_input, dm_channel = "luma", dm_prefix = "stack_", dm_format = "png";
    dm->add_option("input", dm_input, "raw mosaic frame")->required();
    dm->add_option("--channel", dm_channel, "R|G1|G2|B|luma");
    dm->add_option("--out-prefix", dm_prefix, "output prefix");
    dm->add_option("--format", dm_format, "png|pgm");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "self-calibrate per-polarity exposures");
    std::vector<std::string> cal_stacks;
    std::string cal_report;
    cal->add_option("stacks", cal_stacks, "four per-polarity images (theta 0,45,90,135)")
        ->expected(4);
    cal->add_option("--pmin", cfg.pmin, "lower well-exposedness bound");
    cal->add_option("--pmax", cfg.pmax, "upper well-exposedness bound");
    cal->add_option("--bin-deg", cfg.hist_bin_deg, "mode histogram bin width, degrees");
    cal->add_option("--report", cal_report, "write calibration JSON here");

    // fuse
    auto* fu = app.add_subcommand("fuse", "merge a polarity stack into a linear HDR image");
    std::vector<std::string> fu_stacks;
    std::string fu_calib, fu_out = "hdr.pfm", fu_tonemap;
    fu->add_option("stacks", fu_stacks, "four per-polarity images (theta 0,45,90,135)")->expected(4);
    fu->add_option("--calib", fu_calib, "calibration JSON (default: self-calibrate)");
    fu->add_option("--out", fu_out, "output PFM");
    fu->add_option("--tonemap", fu_tonemap, "also write a tone-mapped preview here");
    fu->add_option("--key", cfg.tonemap_key, "Reinhard key");
    fu->add_option("--white-percentile", cfg.tonemap_white_percentile, "white point percentile");
    fu->add_option("--pmin", cfg.pmin, "lower well-exposedness bound");
    fu->add_option("--pmax", cfg.pmax, "upper well-exposedness bound");

    // fuse-bracket
    auto* fb = app.add_subcommand("fuse-bracket", "merge a known-exposure bracket (ground truth)");
    std::vector<std::string> fb_shots;
    std::string fb_times, fb_out = "gt.pfm";
    fb->add_option("shots", fb_shots, "bracket snapshots")->expected(-2);
    fb->add_option("--times", fb_times, "CSV of exposure times, one per snapshot")->required();
    fb->add_option("--out", fb_out, "output PFM");
    fb->add_option("--pmin", cfg.pmin, "lower well-exposedness bound");
    fb->add_option("--pmax", cfg.pmax, "upper well-exposedness bound");

    // eval
    auto* ev = app.add_subcommand("eval", "PSNR/SSIM against a reference");
    std::string ev_ref, ev_test, ev_mask, ev_report;
    bool ev_tonemap = false;
    ev->add_option("--ref", ev_ref, "reference PFM")->required();
    ev->add_option("--test", ev_test, "test PFM")->required();
    ev->add_option("--mask", ev_mask, "evaluation mask (nonzero = evaluate), PNG/PGM");
    ev->add_flag("--tonemap", ev_tonemap, "also compare tone-mapped versions");
    ev->add_option("--report", ev_report, "write metrics JSON here");
    ev->add_option("--key", cfg.tonemap_key, "Reinhard key");

    // sweep
    auto* sw = app.add_subcommand("sweep", "extinction-ratio vs angle-estimate-error table");
    double sw_min = 1e-4, sw_max = 1e-1;
    int sw_steps = 40;
    bool sw_zero = false;
    std::string sw_out = "sweep.csv";
    sw->add_option("--rho-min", sw_min, "smallest extinction ratio");
    sw->add_option("--rho-max", sw_max, "largest extinction ratio");
    sw->add_option("--steps", sw_steps, "number of log-spaced grid points");
    sw->add_flag("--include-zero", sw_zero, "prepend a rho = 0 row");
    sw->add_option("--chi-deg", cfg.sweep_chi_deg, "light angle from P1's transmission axis");
    sw->add_option("--theta-deg", cfg.sweep_theta_deg, "sensor pair angle from P1, degrees");
    sw->add_option("--out", sw_out, "output CSV");

    // pipeline
    auto* pl = app.add_subcommand("pipeline", "raw frame -> HDR end to end");
    std::string pl_raw, pl_config, pl_out_dir = ".";
    bool pl_preview = false;
    pl->add_option("--raw", pl_raw, "raw mosaic frame")->required();
    pl->add_option("--config", pl_config, "pipeline config file (key = value lines)");
    pl->add_option("--out-dir", pl_out_dir, "output directory");
    pl->add_flag("--preview", pl_preview, "write a tone-mapped preview.png");

    CLI11_PARSE(app, argc, argv);

    // Each subcommand's dominant stage, for mapping bare invalid_argument
    // errors to an exit code.
    polhdr::Stage fallback_stage = polhdr::Stage::Io;
    if (sim->parsed()) fallback_stage = polhdr::Stage::Simulate;
    if (dm->parsed()) fallback_stage = polhdr::Stage::Demux;
    if (cal->parsed()) fallback_stage = polhdr::Stage::Calibrate;
    if (fu->parsed() || fb->parsed()) fallback_stage = polhdr::Stage::Fuse;
    if (ev->parsed()) fallback_stage = polhdr::Stage::Eval;
    if (sw->parsed()) fallback_stage = polhdr::Stage::Sweep;

    try {
        if (sim->parsed()) {
            cfg.quantize = !no_quantize;
            return run_simulate(cfg, scene_path, sim_out, gt_out);
        }
        if (dm->parsed()) return run_demux(dm_input, dm_channel, dm_prefix, dm_format);
        if (cal->parsed()) return run_calibrate(cal_stacks, cfg, cal_report);
        if (fu->parsed()) return run_fuse(fu_stacks, fu_calib, cfg, fu_out, fu_tonemap);
        if (fb->parsed()) return run_fuse_bracket(fb_shots, fb_times, cfg, fb_out);
        if (ev->parsed()) return run_eval(ev_ref, ev_test, ev_mask, ev_tonemap, cfg, ev_report);
        if (sw->parsed()) return run_sweep(sw_min, sw_max, sw_steps, sw_zero, cfg, sw_out);
        if (pl->parsed()) return run_full_pipeline(pl_raw, pl_config, pl_out_dir, pl_preview);
    } catch (const polhdr::Error& e) {
        std::cerr << "error " << e.what() << "\n";
        return polhdr::stage_exit_code(e.stage());
    } catch (const std::invalid_argument& e) {
        std::cerr << "error [" << polhdr::stage_name(fallback_stage) << "] " << e.what() << "\n";
        return polhdr::stage_exit_code(fallback_stage);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
