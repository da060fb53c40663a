#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ippg/time_series.hpp"

namespace ippg {

/// One scored epoch: estimated vs reference average pulse rate.
struct EpochPair {
    double pr_bpm = 0.0;
    double pr_ref_bpm = 0.0;
};

double mae(std::span<const EpochPair> pairs);

/// Standard sqrt(mean(e^2)). paper_literal divides the root by N instead,
/// reproducing the published formula verbatim.
double rmse(std::span<const EpochPair> pairs, bool paper_literal = false);

/// Percentage of epochs with absolute error strictly below the threshold.
double pe(std::span<const EpochPair> pairs, double threshold_bpm = 3.5);

struct SnrTemplateParams {
    double delta_f_bpm = 50.0 * 60.0 / 1024.0;  // ~2.93 BPM
    double band_lo_bpm = 40.0;
    double band_hi_bpm = 240.0;
};

/// Spectral signal-to-noise ratio of an iPPG epoch against the reference rate
/// template (fundamental +- delta_f, second harmonic +- 2*delta_f).
/// Returns +inf when the noise bins carry no energy.
double snr(const TimeSeries& ippg_epoch, double pr_ref_bpm, const SnrTemplateParams& params = {});

/// Full bookkeeping for one epoch of one trial inside a sweep.
struct EpochRecord {
    std::string participant_id;
    std::string trial_id;
    int epoch_index = 0;
    std::optional<double> pr_bpm;  // empty when the estimator failed
    double pr_ref_bpm = 0.0;
    std::optional<double> snr_db;  // may hold +inf; empty when unavailable
};

struct MetricRow {
    std::string participant_id;  // "overall" for the pooled row
    int n_epochs = 0;            // scored epochs
    int missing_epochs = 0;
    double mae_bpm = 0.0;
    double rmse_bpm = 0.0;
    double pe35_pct = 0.0;
    std::optional<double> mean_snr_db;  // empty when no finite SNR values
    int snr_inf_count = 0;
};

struct ParticipantReport {
    std::vector<MetricRow> rows;  // one per participant, sorted by id
    MetricRow overall;            // pooled over all epochs
    std::vector<std::string> omitted_participants;  // no scored epochs at all
};

ParticipantReport participant_report(const std::vector<EpochRecord>& records,
                                     double pe_threshold_bpm = 3.5);

}  // namespace ippg
