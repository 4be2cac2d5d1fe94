#pragma once

#include <string>
#include <utility>
#include <vector>

#include "polhdr/config.hpp"
#include "polhdr/fusion.hpp"
#include "polhdr/metrics.hpp"

namespace polhdr {

/// Identifies exactly what produced a report: tool version, config hash,
/// and the content hashes of every input file.
struct Provenance {
    std::string tool_version = kToolVersion;
    std::string config_hash;
    std::vector<std::pair<std::string, std::string>> input_hashes;  // (path, fnv1a64)

    static Provenance make(const PipelineConfig& config, const std::vector<std::string>& inputs);
};

void write_calib_report(const std::string& path, const ExposureEstimate& estimate,
                        const Provenance& prov, const PipelineConfig& config);
ExposureEstimate read_calib_report(const std::string& path);

void write_eval_report(const std::string& path, const MetricReport& linear,
                       const MetricReport* tonemapped, const Provenance& prov,
                       const PipelineConfig& config);

struct PipelineResult {
    ExposureEstimate estimate;
    FuseResult fused;
    std::string hdr_path;
    std::string calib_path;
    std::string preview_path;  // empty when no preview requested
};

/// demux -> estimate_exposures -> fuse_hdr -> optional tone map, writing
/// hdr.pfm, calib.json and the optional preview under out_dir. Failures
/// surface as stage-tagged Errors.
PipelineResult run_pipeline(const std::string& raw_path, const PipelineConfig& config,
                            const std::string& out_dir, bool write_preview);

}  // namespace polhdr
