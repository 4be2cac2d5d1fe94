#include "polhdr/pipeline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "polhdr/error.hpp"
#include "polhdr/io.hpp"
#include "polhdr/mosaic.hpp"

namespace polhdr {

namespace {

using nlohmann::json;

json config_to_json(const PipelineConfig& config) {
    // Embed the exact canonical form so reports never carry silent defaults.
    json obj = json::object();
    std::istringstream in(config.serialize());
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        obj[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return obj;
}

json provenance_to_json(const Provenance& prov, const PipelineConfig& config) {
    json inputs = json::object();
    for (const auto& [path, hash] : prov.input_hashes) inputs[path] = hash;
    return json{{"tool_version", prov.tool_version},
                {"config_hash", prov.config_hash},
                {"config", config_to_json(config)},
                {"inputs", inputs}};
}

void write_json(const std::string& path, const json& j) {
    std::ofstream f(path);
    if (!f) throw Error(Stage::Io, path + ": cannot open for writing");
    f << j.dump(2) << "\n";
}

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(Stage::Io, path + ": cannot open");
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw Error(Stage::Io, path + ": " + e.what());
    }
    return j;
}

}  // namespace

Provenance Provenance::make(const PipelineConfig& config, const std::vector<std::string>& inputs) {
    Provenance p;
    p.config_hash = config.hash();
    for (const auto& path : inputs) p.input_hashes.emplace_back(path, hash_file(path));
    return p;
}

void write_calib_report(const std::string& path, const ExposureEstimate& estimate,
                        const Provenance& prov, const PipelineConfig& config) {
    json j;
    for (int i = 0; i < 4; ++i) {
        j["theta_hat_rad"].push_back(estimate.theta_hat[std::size_t(i)]);
        j["theta_hat_deg"].push_back(estimate.theta_hat[std::size_t(i)] * 180.0 / M_PI);
        j["exposure"].push_back(estimate.exposure[std::size_t(i)]);
        j["valid_pixel_count"].push_back(estimate.valid_pixel_count[std::size_t(i)]);
    }
    j["pair_valid"] = {estimate.pair_valid[0], estimate.pair_valid[1]};
    j["provenance"] = provenance_to_json(prov, config);
    write_json(path, j);
}

ExposureEstimate read_calib_report(const std::string& path) {
    json j = load_json(path);
    ExposureEstimate est;
    try {
        est.set_angles(j.at("theta_hat_rad").at(0).get<double>(),
                       j.at("theta_hat_rad").at(1).get<double>());
        for (int i = 0; i < 4; ++i)
            est.valid_pixel_count[std::size_t(i)] = j.at("valid_pixel_count").at(std::size_t(i)).get<std::int64_t>();
        est.pair_valid[0] = j.at("pair_valid").at(0).get<bool>();
        est.pair_valid[1] = j.at("pair_valid").at(1).get<bool>();
    } catch (const json::exception& e) {
        throw Error(Stage::Io, path + ": malformed calibration report: " + e.what());
    }
    return est;
}

namespace {

json metric_to_json(const MetricReport& m) {
    json j;
    const bool inf = std::isinf(m.psnr_db);
    j["psnr_db"] = inf ? json(nullptr) : json(m.psnr_db);
    j["psnr_infinite"] = inf;
    j["ssim"] = m.ssim_value;
    j["evaluated_pixel_count"] = m.evaluated_pixel_count;
    j["masked"] = m.masked;
    j["ms_ssim"] = m.ms_ssim ? json(*m.ms_ssim) : json(nullptr);
    j["q_score"] = m.q_score ? json(*m.q_score) : json(nullptr);
    return j;
}

}  // namespace

void write_eval_report(const std::string& path, const MetricReport& linear,
                       const MetricReport* tonemapped, const Provenance& prov,
                       const PipelineConfig& config) {
    json j;
    j["linear"] = metric_to_json(linear);
    if (tonemapped) j["tonemapped"] = metric_to_json(*tonemapped);
    j["provenance"] = provenance_to_json(prov, config);
    write_json(path, j);
}

PipelineResult run_pipeline(const std::string& raw_path, const PipelineConfig& config,
                            const std::string& out_dir, bool write_preview) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    LdrImage raw = read_ldr(raw_path);
    MosaicFrame frame(std::move(raw));

    Channel channel;
    try {
        channel = channel_from_string(config.channel);
    } catch (const std::invalid_argument& e) {
        throw Error(Stage::Config, e.what());
    }
    PolarityStack stack = demux(frame, channel);

    ValidityThresholds thresholds(config.pmin, config.pmax);
    AngleHistogramConfig hist{config.hist_bin_deg * M_PI / 180.0};
    ExposureEstimate estimate = estimate_exposures(stack, thresholds, hist);

    FusionParams fparams{config.epsilon, config.exposure_floor};
    FuseResult fused = fuse_hdr(stack, estimate, thresholds, fparams);

    PipelineResult result;
    result.estimate = estimate;
    result.hdr_path = (fs::path(out_dir) / "hdr.pfm").string();
    result.calib_path = (fs::path(out_dir) / "calib.json").string();
    write_pfm(result.hdr_path, fused.hdr.image);

    Provenance prov = Provenance::make(config, {raw_path});
    write_calib_report(result.calib_path, estimate, prov, config);

    if (write_preview) {
        ReinhardParams tone{config.tonemap_key, config.tonemap_white_percentile};
        LdrImage preview = tonemap_reinhard(fused.hdr, tone, 8);
        result.preview_path = (fs::path(out_dir) / "preview.png").string();
        write_png(result.preview_path, preview);
    }
    result.fused = std::move(fused);
    return result;
}

}  // namespace polhdr
