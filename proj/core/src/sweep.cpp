#include "ippg/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <map>
#include <thread>

#include <nlohmann/json.hpp>

#include "ippg/dataset.hpp"

namespace ippg {
namespace {

std::string fmt4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

// Both report formats carry the same 4-significant-digit values.
double round4(double v) { return std::stod(fmt4(v)); }

std::string roi_key(const RoiOptions& roi) {
    std::string key = roi.mode == RoiMode::whole_face ? "wf" : "be";
    key += roi.skin_masking ? "+skin" : "-skin";
    key += roi.outlier_rejection ? "+out" : "-out";
    key += fmt4(roi.gamma);
    key += fmt4(roi.ranges.hue_lo) + fmt4(roi.ranges.hue_hi) + fmt4(roi.ranges.sat_lo) +
           fmt4(roi.ranges.sat_hi) + fmt4(roi.ranges.val_lo) + fmt4(roi.ranges.val_hi);
    return key;
}

nlohmann::json row_json(const MetricRow& row) {
    nlohmann::json j;
    j["participant"] = row.participant_id;
    j["n_epochs"] = row.n_epochs;
    j["missing_epochs"] = row.missing_epochs;
    j["mae_bpm"] = round4(row.mae_bpm);
    j["rmse_bpm"] = round4(row.rmse_bpm);
    j["pe35_pct"] = round4(row.pe35_pct);
    if (row.mean_snr_db)
        j["snr_db"] = round4(*row.mean_snr_db);
    else
        j["snr_db"] = nullptr;
    j["snr_inf_count"] = row.snr_inf_count;
    return j;
}

void csv_row(std::string& out, const std::string& spec_name, const MetricRow& row) {
    out += spec_name;
    out += ',';
    out += row.participant_id;
    out += ',';
    out += std::to_string(row.n_epochs);
    out += ',';
    out += std::to_string(row.missing_epochs);
    out += ',';
    out += fmt4(row.mae_bpm);
    out += ',';
    out += fmt4(row.rmse_bpm);
    out += ',';
    out += fmt4(row.pe35_pct);
    out += ',';
    if (row.mean_snr_db) out += fmt4(*row.mean_snr_db);
    out += '\n';
}

}  // namespace

SweepResult run_grid(const std::vector<TrialData>& trials, const std::vector<PipelineSpec>& specs,
                     const SweepOptions& options) {
    if (trials.empty()) throw std::invalid_argument("run_grid: no trials");
    if (specs.empty()) throw std::invalid_argument("run_grid: no pipeline specs");
    for (const PipelineSpec& spec : specs) spec.validate();

    const std::size_t n_trials = trials.size();
    const std::size_t n_specs = specs.size();

    // records[trial][spec], filled independently per trial
    std::vector<std::vector<std::vector<EpochRecord>>> records(
        n_trials, std::vector<std::vector<EpochRecord>>(n_specs));
    std::vector<std::vector<SweepError>> errors(n_trials);

    const auto process_trial = [&](std::size_t ti) {
        const TrialData& trial = trials[ti];

        std::vector<std::optional<double>> reference;
        try {
            reference = reference_rate_from_ppg(trial.ppg, options.elgendi, options.epochs);
        } catch (const std::exception& e) {
            errors[ti].push_back({trial.trial_id, "", std::string("reference: ") + e.what()});
            return;  // nothing can be scored without a reference
        }

        std::map<std::string, ColorSignal> raw_cache;
        for (std::size_t si = 0; si < n_specs; ++si) {
            const PipelineSpec& spec = specs[si];
            try {
                const std::string key = roi_key(spec.roi);
                auto it = raw_cache.find(key);
                if (it == raw_cache.end())
                    it = raw_cache
                             .emplace(key, build_color_signal(trial.frames, trial.faces, spec.roi,
                                                              trial.fps))
                             .first;
                records[ti][si] = run_pipeline(trial, spec, options.epochs, options.elgendi,
                                               &it->second, &reference);
            } catch (const std::exception& e) {
                errors[ti].push_back({trial.trial_id, spec.name, e.what()});
            }
        }
    };

    std::size_t n_workers = options.workers > 0
                                ? static_cast<std::size_t>(options.workers)
                                : std::max(1u, std::thread::hardware_concurrency());
    n_workers = std::min(n_workers, n_trials);
    if (n_workers <= 1) {
        for (std::size_t ti = 0; ti < n_trials; ++ti) process_trial(ti);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (std::size_t w = 0; w < n_workers; ++w)
            pool.emplace_back([&] {
                for (std::size_t ti = next.fetch_add(1); ti < n_trials; ti = next.fetch_add(1))
                    process_trial(ti);
            });
        for (auto& th : pool) th.join();
    }

    SweepResult result;
    result.by_spec.reserve(n_specs);
    for (std::size_t si = 0; si < n_specs; ++si) {
        SpecResult sr;
        sr.spec = specs[si];
        for (std::size_t ti = 0; ti < n_trials; ++ti)
            sr.records.insert(sr.records.end(), records[ti][si].begin(), records[ti][si].end());
        sr.report = participant_report(sr.records);
        result.by_spec.push_back(std::move(sr));
    }
    for (std::size_t ti = 0; ti < n_trials; ++ti)
        result.errors.insert(result.errors.end(), errors[ti].begin(), errors[ti].end());
    return result;
}

std::string render_csv(const SweepResult& result) {
    std::string out = "spec,participant,n_epochs,missing_epochs,mae_bpm,rmse_bpm,pe35_pct,snr_db\n";
    for (const SpecResult& sr : result.by_spec) {
        for (const MetricRow& row : sr.report.rows) csv_row(out, sr.spec.name, row);
        csv_row(out, sr.spec.name, sr.report.overall);
    }
    return out;
}

std::string render_json(const SweepResult& result) {
    nlohmann::json j;
    j["specs"] = nlohmann::json::array();
    for (const SpecResult& sr : result.by_spec) {
        nlohmann::json js;
        js["name"] = sr.spec.name;
        js["pipeline"] = sr.spec.describe();
        js["overall"] = row_json(sr.report.overall);
        js["participants"] = nlohmann::json::array();
        for (const MetricRow& row : sr.report.rows) js["participants"].push_back(row_json(row));
        if (!sr.report.omitted_participants.empty())
            js["omitted_participants"] = sr.report.omitted_participants;
        j["specs"].push_back(std::move(js));
    }
    j["errors"] = nlohmann::json::array();
    for (const SweepError& e : result.errors)
        j["errors"].push_back({{"trial", e.trial_id}, {"spec", e.spec_name}, {"message", e.message}});
    return j.dump(2) + "\n";
}

void emit_report(const SweepResult& result, const std::filesystem::path& out_dir, bool csv,
                 bool json) {
    if (result.by_spec.empty()) throw std::invalid_argument("emit_report: no results");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir.string());

    const auto write_file = [&](const char* name, const std::string& body) {
        const auto path = out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write report: " + path.string());
        out << body;
        if (!out) throw IoError("write failed: " + path.string());
    };
    if (csv) write_file("report.csv", render_csv(result));
    if (json) write_file("report.json", render_json(result));
}

}  // namespace ippg
