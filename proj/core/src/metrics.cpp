#include "ippg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "fft.hpp"

namespace ippg {
namespace {

void require_pairs(std::span<const EpochPair> pairs) {
    if (pairs.empty()) throw std::invalid_argument("metrics: no epoch pairs");
}

MetricRow score_group(const std::string& id, const std::vector<const EpochRecord*>& records,
                      double pe_threshold) {
    MetricRow row;
    row.participant_id = id;
    std::vector<EpochPair> pairs;
    double snr_sum = 0.0;
    int snr_n = 0;
    for (const EpochRecord* rec : records) {
        if (!rec->pr_bpm) {
            ++row.missing_epochs;
            continue;
        }
        pairs.push_back({*rec->pr_bpm, rec->pr_ref_bpm});
        if (rec->snr_db) {
            if (std::isinf(*rec->snr_db)) {
                ++row.snr_inf_count;
            } else {
                snr_sum += *rec->snr_db;
                ++snr_n;
            }
        }
    }
    row.n_epochs = static_cast<int>(pairs.size());
    if (!pairs.empty()) {
        row.mae_bpm = mae(pairs);
        row.rmse_bpm = rmse(pairs);
        row.pe35_pct = pe(pairs, pe_threshold);
    }
    if (snr_n > 0) row.mean_snr_db = snr_sum / snr_n;
    return row;
}

}  // namespace

double mae(std::span<const EpochPair> pairs) {
    require_pairs(pairs);
    double acc = 0.0;
    for (const auto& p : pairs) acc += std::abs(p.pr_bpm - p.pr_ref_bpm);
    return acc / static_cast<double>(pairs.size());
}

double rmse(std::span<const EpochPair> pairs, bool paper_literal) {
    require_pairs(pairs);
    double acc = 0.0;
    for (const auto& p : pairs) {
        const double e = p.pr_bpm - p.pr_ref_bpm;
        acc += e * e;
    }
    const double n = static_cast<double>(pairs.size());
    return paper_literal ? std::sqrt(acc) / n : std::sqrt(acc / n);
}

double pe(std::span<const EpochPair> pairs, double threshold_bpm) {
    require_pairs(pairs);
    std::size_t hits = 0;
    for (const auto& p : pairs)
        if (std::abs(p.pr_bpm - p.pr_ref_bpm) < threshold_bpm) ++hits;
    return 100.0 * static_cast<double>(hits) / static_cast<double>(pairs.size());
}

double snr(const TimeSeries& ippg_epoch, double pr_ref_bpm, const SnrTemplateParams& params) {
    if (ippg_epoch.empty()) throw std::invalid_argument("snr: empty epoch");
    const auto mag = detail::magnitude_spectrum(ippg_epoch.samples);
    const double bin_bpm =
        60.0 * ippg_epoch.rate_hz / static_cast<double>(ippg_epoch.size());

    double signal = 0.0, noise = 0.0;
    for (std::size_t k = 1; k < mag.size(); ++k) {
        const double f = static_cast<double>(k) * bin_bpm;
        if (f < params.band_lo_bpm || f > params.band_hi_bpm) continue;
        const double p = mag[k] * mag[k];
        const bool in_template = std::abs(f - pr_ref_bpm) <= params.delta_f_bpm ||
                                 std::abs(f - 2.0 * pr_ref_bpm) <= 2.0 * params.delta_f_bpm;
        if (in_template)
            signal += p;
        else
            noise += p;
    }
    if (noise == 0.0) return std::numeric_limits<double>::infinity();
    if (signal == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(signal / noise);
}

ParticipantReport participant_report(const std::vector<EpochRecord>& records,
                                     double pe_threshold_bpm) {
    std::map<std::string, std::vector<const EpochRecord*>> by_participant;
    std::vector<const EpochRecord*> all;
    all.reserve(records.size());
    for (const auto& rec : records) {
        by_participant[rec.participant_id].push_back(&rec);
        all.push_back(&rec);
    }

    ParticipantReport report;
    for (const auto& [id, recs] : by_participant) {
        MetricRow row = score_group(id, recs, pe_threshold_bpm);
        if (row.n_epochs == 0) {
            report.omitted_participants.push_back(id);
            continue;
        }
        report.rows.push_back(std::move(row));
    }
    report.overall = score_group("overall", all, pe_threshold_bpm);
    return report;
}

}  // namespace ippg
