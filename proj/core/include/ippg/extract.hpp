#pragma once

#include "ippg/filters.hpp"
#include "ippg/time_series.hpp"

namespace ippg {

enum class ExtractionKind { g, grd, agrd, ica, chrom, pos };

struct ExtractionMethod {
    ExtractionKind kind = ExtractionKind::pos;
    double window_s = 1.6;  // running-statistics window for CHROM/POS
};

const char* to_string(ExtractionKind kind);

/// Trailing L-point running sample standard deviation (Bessel-corrected),
/// warm-up over the available prefix; zero where fewer than 2 samples exist.
TimeSeries running_std(const TimeSeries& x, int window);

IppgSignal extract_g(const ColorSignal& c);
IppgSignal extract_grd(const ColorSignal& c);

/// Adaptive green-red difference; c is the pre-filtered signal, c0 the raw one.
IppgSignal extract_agrd(const ColorSignal& c, const ColorSignal& c0);

/// JADE blind source separation over the z-scored channels; picks the
/// component with the largest in-band spectral peak fraction, sign-corrected
/// against the green channel.
IppgSignal extract_ica(const ColorSignal& c, const BandSpec& band = {});

IppgSignal extract_chrom(const ColorSignal& c, double window_s = 1.6);
IppgSignal extract_pos(const ColorSignal& c, double window_s = 1.6);

/// Dispatches on method.kind; c0 is consulted by aGRD only.
IppgSignal extract(const ColorSignal& c, const ColorSignal& c0, const ExtractionMethod& method);

}  // namespace ippg
