#include "ippg/roi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ippg {

std::size_t RoiMask::count() const {
    std::size_t n = 0;
    for (std::uint8_t v : included) n += v != 0;
    return n;
}

std::array<double, 3> rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
    const double r = r8, g = g8, b = b8;
    const double v = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double delta = v - mn;

    double h = 0.0;
    if (delta > 0.0) {
        if (v == r)
            h = 60.0 * std::fmod((g - b) / delta, 6.0);
        else if (v == g)
            h = 60.0 * ((b - r) / delta + 2.0);
        else
            h = 60.0 * ((r - g) / delta + 4.0);
        if (h < 0.0) h += 360.0;
    }
    const double s = v > 0.0 ? delta / v * 255.0 : 0.0;
    return {h, s, v};
}

FaceRect roi_rect(const FaceRect& face, RoiMode mode) {
    if (face.w <= 0 || face.h <= 0) throw std::invalid_argument("roi_rect: degenerate face rectangle");
    const int w = static_cast<int>(std::lround(0.8 * face.w));
    const int x = face.x + static_cast<int>(std::lround((face.w - w) / 2.0));
    if (mode == RoiMode::whole_face) return FaceRect{x, face.y, w, face.h};

    const int dy = static_cast<int>(std::lround(0.55 * face.h));
    const int h = face.h - dy;
    if (w <= 0 || h <= 0) throw std::invalid_argument("roi_rect: degenerate face rectangle");
    return FaceRect{x, face.y + dy, w, h};
}

FaceRect clamp_rect(const FaceRect& rect, int width, int height) {
    const int x0 = std::clamp(rect.x, 0, width);
    const int y0 = std::clamp(rect.y, 0, height);
    const int x1 = std::clamp(rect.x + rect.w, 0, width);
    const int y1 = std::clamp(rect.y + rect.h, 0, height);
    if (x1 <= x0 || y1 <= y0) throw std::invalid_argument("clamp_rect: rectangle outside frame");
    return FaceRect{x0, y0, x1 - x0, y1 - y0};
}

RoiMask full_mask(const FrameRGB& frame, const FaceRect& rect) {
    const FaceRect r = clamp_rect(rect, frame.width, frame.height);
    return RoiMask{r, std::vector<std::uint8_t>(static_cast<std::size_t>(r.w) * r.h, 1)};
}

RoiMask skin_mask(const FrameRGB& frame, const FaceRect& rect, const SkinRangesHsv& ranges) {
    const FaceRect r = clamp_rect(rect, frame.width, frame.height);
    RoiMask mask{r, std::vector<std::uint8_t>(static_cast<std::size_t>(r.w) * r.h, 0)};
    for (int y = 0; y < r.h; ++y) {
        for (int x = 0; x < r.w; ++x) {
            const std::uint8_t* px = frame.pixel(r.x + x, r.y + y);
            const auto [h, s, v] = rgb_to_hsv(px[0], px[1], px[2]);
            const bool skin = h >= ranges.hue_lo && h <= ranges.hue_hi && s >= ranges.sat_lo &&
                              s <= ranges.sat_hi && v >= ranges.val_lo && v <= ranges.val_hi;
            mask.included[static_cast<std::size_t>(y) * r.w + x] = skin ? 1 : 0;
        }
    }
    return mask;
}

RoiMask reject_outliers(const FrameRGB& frame, const RoiMask& mask, double gamma) {
    const std::size_t n = mask.count();
    if (n == 0) throw std::runtime_error("empty ROI");

    double sum[3] = {0, 0, 0}, sumsq[3] = {0, 0, 0};
    const FaceRect& r = mask.rect;
    for (int y = 0; y < r.h; ++y) {
        for (int x = 0; x < r.w; ++x) {
            if (!mask.included[static_cast<std::size_t>(y) * r.w + x]) continue;
            const std::uint8_t* px = frame.pixel(r.x + x, r.y + y);
            for (int c = 0; c < 3; ++c) {
                sum[c] += px[c];
                sumsq[c] += static_cast<double>(px[c]) * px[c];
            }
        }
    }
    double mean[3], sigma[3];
    for (int c = 0; c < 3; ++c) {
        mean[c] = sum[c] / static_cast<double>(n);
        sigma[c] = std::sqrt(std::max(0.0, sumsq[c] / static_cast<double>(n) - mean[c] * mean[c]));
    }

    RoiMask out{r, std::vector<std::uint8_t>(mask.included.size(), 0)};
    for (int y = 0; y < r.h; ++y) {
        for (int x = 0; x < r.w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * r.w + x;
            if (!mask.included[i]) continue;
            const std::uint8_t* px = frame.pixel(r.x + x, r.y + y);
            bool keep = true;
            for (int c = 0; c < 3 && keep; ++c) {
                if (sigma[c] == 0.0) continue;  // flat channel: everything passes
                keep = std::abs(mean[c] - px[c]) < gamma * sigma[c];
            }
            out.included[i] = keep ? 1 : 0;
        }
    }
    return out;
}

std::array<double, 3> spatial_average(const FrameRGB& frame, const RoiMask& mask) {
    const std::size_t n = mask.count();
    if (n == 0) throw std::runtime_error("empty ROI");
    double sum[3] = {0, 0, 0};
    const FaceRect& r = mask.rect;
    for (int y = 0; y < r.h; ++y) {
        for (int x = 0; x < r.w; ++x) {
            if (!mask.included[static_cast<std::size_t>(y) * r.w + x]) continue;
            const std::uint8_t* px = frame.pixel(r.x + x, r.y + y);
            for (int c = 0; c < 3; ++c) sum[c] += px[c];
        }
    }
    return {sum[0] / n, sum[1] / n, sum[2] / n};
}

ColorSignal build_color_signal(std::span<const FrameRGB> frames, std::span<const FaceRect> faces,
                               const RoiOptions& options, double rate_hz) {
    if (frames.size() != faces.size())
        throw std::invalid_argument("build_color_signal: frame/face counts differ");
    if (frames.empty()) throw std::invalid_argument("build_color_signal: no frames");

    std::vector<double> r(frames.size()), g(frames.size()), b(frames.size());
    std::array<double, 3> prev{};
    for (std::size_t t = 0; t < frames.size(); ++t) {
        const FrameRGB& frame = frames[t];
        const FaceRect region = roi_rect(faces[t], options.mode);

        RoiMask mask = options.skin_masking ? skin_mask(frame, region, options.ranges)
                                            : full_mask(frame, region);
        if (mask.count() > 0 && options.outlier_rejection)
            mask = reject_outliers(frame, mask, options.gamma);

        std::array<double, 3> avg;
        if (mask.count() == 0) {
            if (t == 0) throw std::runtime_error("empty ROI in first frame");
            avg = prev;  // carry forward to keep the series uniformly sampled
        } else {
            avg = spatial_average(frame, mask);
        }
        r[t] = avg[0];
        g[t] = avg[1];
        b[t] = avg[2];
        prev = avg;
    }
    return ColorSignal{TimeSeries(std::move(r), rate_hz), TimeSeries(std::move(g), rate_hz),
                       TimeSeries(std::move(b), rate_hz)};
}

}  // namespace ippg
