#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ippg/metrics.hpp"
#include "ippg/pipeline.hpp"

namespace ippg {

struct SweepOptions {
    EpochSpec epochs{};
    ElgendiParams elgendi{};
    int workers = 0;  // 0 picks the hardware concurrency
};

struct SweepError {
    std::string trial_id;
    std::string spec_name;  // empty for trial-level failures
    std::string message;
};

struct SpecResult {
    PipelineSpec spec;
    std::vector<EpochRecord> records;  // ordered by (trial, epoch)
    ParticipantReport report;
};

struct SweepResult {
    std::vector<SpecResult> by_spec;  // in input spec order
    std::vector<SweepError> errors;
};

/// Runs every (trial, spec) cell. Trials are distributed over a worker pool;
/// the ROI color signal and the reference rates are computed once per trial
/// and shared across specs. Per-cell failures are recorded, never fatal, and
/// the merged output is deterministic regardless of worker count.
SweepResult run_grid(const std::vector<TrialData>& trials,
                     const std::vector<PipelineSpec>& specs, const SweepOptions& options = {});

std::string render_csv(const SweepResult& result);
std::string render_json(const SweepResult& result);

/// Writes report.csv and/or report.json into out_dir.
void emit_report(const SweepResult& result, const std::filesystem::path& out_dir, bool csv,
                 bool json);

}  // namespace ippg
