#include "ippg/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ippg/cwt.hpp"

namespace ippg {
namespace {

const char* detrend_token(Detrend d) {
    switch (d) {
        case Detrend::none: return nullptr;
        case Detrend::mcas: return "mcas";
        case Detrend::spa: return "spa";
    }
    return nullptr;
}

const char* bandpass_token(Bandpass b) {
    switch (b) {
        case Bandpass::none: return nullptr;
        case Bandpass::fir255_hamming: return "fir";
        case Bandpass::iir_butter5: return "iir";
    }
    return nullptr;
}

std::string filter_tokens(const FilterChoice& f, bool wavelet = false) {
    std::vector<std::string> tok;
    if (const char* d = detrend_token(f.detrend)) tok.emplace_back(d);
    if (f.ma_points > 0) tok.push_back("ma" + std::to_string(f.ma_points));
    if (const char* b = bandpass_token(f.bandpass)) tok.emplace_back(b);
    if (wavelet) tok.emplace_back("wf");
    if (tok.empty()) return "none";
    std::string out = tok[0];
    for (std::size_t i = 1; i < tok.size(); ++i) out += "," + tok[i];
    return out;
}

void parse_filter_tokens(const std::string& value, FilterChoice& f, bool* wavelet) {
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty() || tok == "none") continue;
        if (tok == "mcas")
            f.detrend = Detrend::mcas;
        else if (tok == "spa")
            f.detrend = Detrend::spa;
        else if (tok == "fir")
            f.bandpass = Bandpass::fir255_hamming;
        else if (tok == "iir")
            f.bandpass = Bandpass::iir_butter5;
        else if (tok == "wf" || tok == "wavelet") {
            if (!wavelet) throw std::invalid_argument("wavelet filtering is a post-processing step");
            *wavelet = true;
        } else if (tok.rfind("ma", 0) == 0)
            f.ma_points = std::stoi(tok.substr(2));
        else
            throw std::invalid_argument("unknown filter token '" + tok + "'");
    }
}

ExtractionKind parse_extraction(const std::string& v) {
    if (v == "g") return ExtractionKind::g;
    if (v == "grd") return ExtractionKind::grd;
    if (v == "agrd") return ExtractionKind::agrd;
    if (v == "ica") return ExtractionKind::ica;
    if (v == "chrom") return ExtractionKind::chrom;
    if (v == "pos") return ExtractionKind::pos;
    throw std::invalid_argument("unknown extraction method '" + v + "'");
}

std::optional<double> try_rate(const TimeSeries& epoch, const PipelineSpec& spec) {
    try {
        if (spec.estimator == Estimator::dft) return rate_dft(epoch);
        return rate_ar_burg(epoch, spec.effective_ar_order());
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

}  // namespace

const char* to_string(Estimator est) {
    switch (est) {
        case Estimator::ibi: return "ibi";
        case Estimator::dft: return "dft";
        case Estimator::ar: return "ar";
        case Estimator::cwt: return "cwt";
    }
    return "?";
}

void PipelineSpec::validate() const {
    const auto check_ma = [](int m, const char* stage) {
        if (m != 0 && m != 3 && m != 6 && m != 9 && m != 12)
            throw std::invalid_argument(std::string("spec: ") + stage +
                                        " MA length must be one of 0, 3, 6, 9, 12");
    };
    check_ma(pre.ma_points, "pre");
    check_ma(post.filter.ma_points, "post");

    switch (extraction.kind) {
        case ExtractionKind::grd:
        case ExtractionKind::chrom:
        case ExtractionKind::pos:
            if (pre.detrend != Detrend::mcas)
                throw std::invalid_argument(std::string("spec: ") + to_string(extraction.kind) +
                                            " requires MCaS detrending at pre-processing");
            break;
        case ExtractionKind::agrd:
            if (pre.bandpass == Bandpass::none)
                throw std::invalid_argument("spec: agrd requires band-pass pre-processing");
            break;
        default: break;
    }
    if ((extraction.kind == ExtractionKind::chrom || extraction.kind == ExtractionKind::pos) &&
        extraction.window_s <= 0.0)
        throw std::invalid_argument("spec: CHROM/POS need a positive statistics window");
    if (ar_order < 0) throw std::invalid_argument("spec: negative AR order");
}

std::string PipelineSpec::describe() const {
    std::string s;
    s += "roi=";
    s += roi.mode == RoiMode::whole_face ? "whole_face" : "below_eyes";
    s += " skin=";
    s += roi.skin_masking ? "on" : "off";
    s += " outliers=";
    s += roi.outlier_rejection ? "on" : "off";
    s += " pre=" + filter_tokens(pre);
    s += " extract=";
    s += to_string(extraction.kind);
    s += " post=" + filter_tokens(post.filter, post.wavelet);
    s += " est=";
    if (estimator == Estimator::ar)
        s += "ar" + std::to_string(effective_ar_order());
    else
        s += to_string(estimator);
    return s;
}

PipelineSpec parse_pipeline_line(const std::string& line) {
    PipelineSpec spec;
    std::stringstream ss(line);
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("spec token '" + tok + "' is not key=value");
        const std::string key = tok.substr(0, eq);
        const std::string value = tok.substr(eq + 1);
        if (key == "name") {
            spec.name = value;
        } else if (key == "roi") {
            if (value == "whole_face")
                spec.roi.mode = RoiMode::whole_face;
            else if (value == "below_eyes")
                spec.roi.mode = RoiMode::below_eyes;
            else
                throw std::invalid_argument("unknown roi mode '" + value + "'");
        } else if (key == "skin") {
            spec.roi.skin_masking = value == "on";
        } else if (key == "outliers") {
            spec.roi.outlier_rejection = value == "on";
        } else if (key == "gamma") {
            spec.roi.gamma = std::stod(value);
        } else if (key == "pre") {
            parse_filter_tokens(value, spec.pre, nullptr);
        } else if (key == "extract") {
            spec.extraction.kind = parse_extraction(value);
        } else if (key == "window") {
            spec.extraction.window_s = std::stod(value);
        } else if (key == "post") {
            parse_filter_tokens(value, spec.post.filter, &spec.post.wavelet);
        } else if (key == "est") {
            if (value == "ibi")
                spec.estimator = Estimator::ibi;
            else if (value == "dft")
                spec.estimator = Estimator::dft;
            else if (value == "cwt")
                spec.estimator = Estimator::cwt;
            else if (value.rfind("ar", 0) == 0) {
                spec.estimator = Estimator::ar;
                if (value.size() > 2) spec.ar_order = std::stoi(value.substr(2));
            } else
                throw std::invalid_argument("unknown estimator '" + value + "'");
        } else {
            throw std::invalid_argument("unknown spec key '" + key + "'");
        }
    }
    if (spec.name.empty()) spec.name = std::string(to_string(spec.extraction.kind)) + "_" +
                                       (spec.estimator == Estimator::ar
                                            ? "ar" + std::to_string(spec.effective_ar_order())
                                            : to_string(spec.estimator));
    spec.validate();
    return spec;
}

PipelineSpec recommended_spec(ExtractionKind kind, Estimator est) {
    PipelineSpec spec;
    spec.extraction.kind = kind;
    spec.estimator = est;
    const bool for_ar = est == Estimator::ar;

    switch (kind) {
        case ExtractionKind::g:
            spec.post.filter.ma_points = 12;
            spec.post.filter.bandpass = Bandpass::fir255_hamming;
            spec.post.wavelet = true;
            break;
        case ExtractionKind::grd:
            spec.pre.detrend = Detrend::mcas;
            spec.post.filter.ma_points = 12;
            spec.post.filter.bandpass =
                for_ar ? Bandpass::iir_butter5 : Bandpass::fir255_hamming;
            spec.post.wavelet = true;
            break;
        case ExtractionKind::agrd:
            spec.pre.bandpass = for_ar ? Bandpass::iir_butter5 : Bandpass::fir255_hamming;
            spec.post.filter.ma_points = 12;
            spec.post.wavelet = true;
            break;
        case ExtractionKind::ica:
            spec.pre.ma_points = 12;
            spec.pre.bandpass = for_ar ? Bandpass::iir_butter5 : Bandpass::fir255_hamming;
            spec.post.wavelet = true;
            break;
        case ExtractionKind::chrom:
            spec.pre.detrend = Detrend::mcas;
            spec.post.filter.ma_points = est == Estimator::cwt ? 9 : 12;
            spec.post.filter.bandpass =
                est == Estimator::ar ? Bandpass::none : Bandpass::fir255_hamming;
            spec.post.wavelet = true;
            break;
        case ExtractionKind::pos:
            spec.pre.detrend = Detrend::mcas;
            spec.post.filter.ma_points = est == Estimator::cwt ? 9 : 12;
            spec.post.filter.bandpass =
                est == Estimator::ar ? Bandpass::none : Bandpass::fir255_hamming;
            spec.post.wavelet = est != Estimator::cwt;  // POS+CWT peaks without it
            break;
    }
    spec.name = std::string(to_string(kind)) + "_" +
                (est == Estimator::ar ? "ar" + std::to_string(spec.effective_ar_order())
                                      : to_string(est));
    spec.validate();
    return spec;
}

std::vector<PipelineSpec> recommended_grid() {
    std::vector<PipelineSpec> specs;
    for (ExtractionKind kind : {ExtractionKind::g, ExtractionKind::grd, ExtractionKind::agrd,
                                ExtractionKind::ica, ExtractionKind::chrom, ExtractionKind::pos})
        for (Estimator est : {Estimator::ibi, Estimator::dft, Estimator::ar, Estimator::cwt})
            specs.push_back(recommended_spec(kind, est));
    return specs;
}

std::vector<PipelineSpec> load_pipeline_specs(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open spec file: " + path);
    std::vector<PipelineSpec> specs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            std::stringstream ss(line);
            std::string head;
            ss >> head;
            if (head == "recommended") {
                std::string ex, est;
                ss >> ex >> est;
                if (ex.empty() || ex == "all") {
                    auto grid = recommended_grid();
                    specs.insert(specs.end(), grid.begin(), grid.end());
                } else {
                    Estimator e;
                    if (est == "ibi") e = Estimator::ibi;
                    else if (est == "dft") e = Estimator::dft;
                    else if (est == "ar") e = Estimator::ar;
                    else if (est == "cwt") e = Estimator::cwt;
                    else throw std::invalid_argument("unknown estimator '" + est + "'");
                    specs.push_back(recommended_spec(parse_extraction(ex), e));
                }
            } else {
                specs.push_back(parse_pipeline_line(line));
            }
        } catch (const std::exception& e) {
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (specs.empty()) throw std::invalid_argument(path + ": no pipeline specs");
    return specs;
}

IppgSignal run_signal_path(const TrialData& trial, const PipelineSpec& spec,
                           const ColorSignal* cached_raw) {
    spec.validate();
    const ColorSignal raw = cached_raw
                                ? *cached_raw
                                : build_color_signal(trial.frames, trial.faces, spec.roi, trial.fps);
    const ColorSignal refined = apply_filter_chain(raw, spec.pre);
    IppgSignal signal = extract(refined, raw, spec.extraction);
    signal = apply_filter_chain(signal, spec.post.filter);
    if (spec.post.wavelet) signal = wavelet_filter(signal);
    signal.provenance = spec.name.empty() ? spec.describe() : spec.name;
    return signal;
}

std::vector<std::optional<double>> estimate_epoch_rates(const IppgSignal& ippg,
                                                        const PipelineSpec& spec,
                                                        const EpochSpec& epochs,
                                                        const ElgendiParams& elgendi) {
    const TimeSeries& x = ippg.series;
    const std::size_t n_epochs = epoch_start_indices(x.size(), x.rate_hz, epochs).size();

    if (spec.estimator == Estimator::dft || spec.estimator == Estimator::ar) {
        std::vector<std::optional<double>> out;
        for (const TimeSeries& epoch : segment_epochs(x, epochs))
            out.push_back(try_rate(epoch, spec));
        return out;
    }

    try {
        RateSeries rates;
        if (spec.estimator == Estimator::ibi) {
            const TimeSeries upsampled = resample_cubic_spline(x, 250.0);
            const ExtremaList peaks =
                detect_extrema(upsampled, elgendi, ExtremaKind::systolic_peak);
            rates = ibi_momentary_rate(peaks);
        } else {
            rates = rate_cwt(x);
        }
        return epoch_average_rate(rates, x.t0_s, x.duration_s(), epochs);
    } catch (const std::exception&) {
        return std::vector<std::optional<double>>(n_epochs, std::nullopt);
    }
}

std::vector<EpochRecord> run_pipeline(const TrialData& trial, const PipelineSpec& spec,
                                      const EpochSpec& epochs, const ElgendiParams& elgendi,
                                      const ColorSignal* cached_raw,
                                      const std::vector<std::optional<double>>* cached_ref) {
    const IppgSignal ippg = run_signal_path(trial, spec, cached_raw);
    const auto estimates = estimate_epoch_rates(ippg, spec, epochs, elgendi);
    const auto reference =
        cached_ref ? *cached_ref : reference_rate_from_ppg(trial.ppg, elgendi, epochs);
    const auto snr_epochs = segment_epochs(ippg.series, epochs);

    std::vector<EpochRecord> records;
    const std::size_t n = std::min(estimates.size(), reference.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!reference[i]) continue;  // nothing to score against
        EpochRecord rec;
        rec.participant_id = trial.participant_id;
        rec.trial_id = trial.trial_id;
        rec.epoch_index = static_cast<int>(i);
        rec.pr_bpm = estimates[i];
        rec.pr_ref_bpm = *reference[i];
        if (i < snr_epochs.size()) rec.snr_db = snr(snr_epochs[i], rec.pr_ref_bpm);
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace ippg
