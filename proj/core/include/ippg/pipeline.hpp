#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ippg/extract.hpp"
#include "ippg/filters.hpp"
#include "ippg/metrics.hpp"
#include "ippg/pulserate.hpp"
#include "ippg/roi.hpp"

namespace ippg {

enum class Estimator { ibi, dft, ar, cwt };

const char* to_string(Estimator est);

struct PostChoice {
    FilterChoice filter{};
    bool wavelet = false;
};

/// One cell of the method grid: the chosen method at every sub-step.
struct PipelineSpec {
    std::string name;
    RoiOptions roi{};
    FilterChoice pre{};
    ExtractionMethod extraction{};
    PostChoice post{};
    Estimator estimator = Estimator::cwt;
    int ar_order = 0;  // 0 resolves to 23 with wavelet filtering, 34 without

    int effective_ar_order() const { return ar_order > 0 ? ar_order : (post.wavelet ? 23 : 34); }

    /// Enforces the method couplings: GRD/CHROM/POS need MCaS at
    /// pre-processing, aGRD needs a band-pass there; MA lengths are limited
    /// to the tested set.
    void validate() const;

    /// Canonical one-line form, also the default name.
    std::string describe() const;
};

/// Parses one spec line of whitespace-separated key=value tokens, e.g.
///   name=pos_cwt roi=whole_face skin=on outliers=on pre=mcas extract=pos post=ma9,fir est=cwt
PipelineSpec parse_pipeline_line(const std::string& line);

/// Loads a spec file: one pipeline per line, '#' comments, blank lines
/// ignored. A line "recommended all" (or "recommended <extract> <est>")
/// expands to the best-performing processing combinations.
std::vector<PipelineSpec> load_pipeline_specs(const std::string& path);

/// Best pre-/post-processing for an extraction/estimator pair.
PipelineSpec recommended_spec(ExtractionKind kind, Estimator est);

/// All 6 x 4 extraction/estimator combinations with recommended processing.
std::vector<PipelineSpec> recommended_grid();

/// One trial's raw inputs.
struct TrialData {
    std::string participant_id;
    std::string trial_id;
    std::vector<FrameRGB> frames;
    std::vector<FaceRect> faces;
    double fps = 0.0;
    TimeSeries ppg;
};

/// Steps 1-4: frames to post-processed iPPG at video rate. If cached_raw is
/// given it replaces the ROI-averaging step (it must match spec.roi).
IppgSignal run_signal_path(const TrialData& trial, const PipelineSpec& spec,
                           const ColorSignal* cached_raw = nullptr);

/// Step 5 on a finished iPPG signal: per-epoch average rates. Estimator
/// failures surface as missing epochs, never as exceptions.
std::vector<std::optional<double>> estimate_epoch_rates(const IppgSignal& ippg,
                                                        const PipelineSpec& spec,
                                                        const EpochSpec& epochs = {},
                                                        const ElgendiParams& elgendi = {});

/// Full pipeline against the trial's reference PPG; one record per epoch with
/// both rates present plus the epoch SNR of the iPPG signal.
std::vector<EpochRecord> run_pipeline(const TrialData& trial, const PipelineSpec& spec,
                                      const EpochSpec& epochs = {},
                                      const ElgendiParams& elgendi = {},
                                      const ColorSignal* cached_raw = nullptr,
                                      const std::vector<std::optional<double>>* cached_ref = nullptr);

}  // namespace ippg
