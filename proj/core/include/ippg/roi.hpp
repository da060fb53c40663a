#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "ippg/time_series.hpp"

namespace ippg {

/// 8-bit RGB frame, interleaved row-major pixels.
struct FrameRGB {
    int width = 0, height = 0;
    std::vector<std::uint8_t> data;  // size == 3 * width * height

    std::size_t pixel_count() const { return static_cast<std::size_t>(width) * height; }
    const std::uint8_t* pixel(int x, int y) const {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
    std::uint8_t* pixel(int x, int y) {
        return data.data() + 3 * (static_cast<std::size_t>(y) * width + x);
    }
};

struct FaceRect {
    int x = 0, y = 0, w = 0, h = 0;
};

/// Boolean pixel selection over a rectangle.
struct RoiMask {
    FaceRect rect;
    std::vector<std::uint8_t> included;  // row-major over rect, 0/1

    std::size_t count() const;
};

/// HSV skin gate: hue in degrees, saturation and value on the 0-255 scale.
struct SkinRangesHsv {
    double hue_lo = 0.0, hue_hi = 46.0;
    double sat_lo = 23.0, sat_hi = 132.0;
    double val_lo = 88.0, val_hi = 255.0;
};

enum class RoiMode { whole_face, below_eyes };

/// Hexcone RGB -> HSV with H in [0,360) degrees and S,V scaled to 0-255.
std::array<double, 3> rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b);

/// whole_face: 80% of the face width, centered, full height.
/// below_eyes: same width, lower 45% of the face rectangle.
FaceRect roi_rect(const FaceRect& face, RoiMode mode);

FaceRect clamp_rect(const FaceRect& rect, int width, int height);

/// Mask selecting every pixel of the (clamped) rectangle.
RoiMask full_mask(const FrameRGB& frame, const FaceRect& rect);

/// Keeps pixels whose H, S and V all fall inside the skin ranges.
RoiMask skin_mask(const FrameRGB& frame, const FaceRect& rect, const SkinRangesHsv& ranges = {});

/// Single-pass rejection of pixels deviating from the masked mean by gamma
/// standard deviations in any channel; zero-variance channels pass everything.
RoiMask reject_outliers(const FrameRGB& frame, const RoiMask& mask, double gamma = 1.5);

/// Channel-wise mean over the included pixels.
std::array<double, 3> spatial_average(const FrameRGB& frame, const RoiMask& mask);

struct RoiOptions {
    RoiMode mode = RoiMode::whole_face;
    bool skin_masking = true;
    SkinRangesHsv ranges{};
    bool outlier_rejection = true;
    double gamma = 1.5;
};

/// Step 1 end to end: per frame roi_rect -> skin_mask -> reject_outliers ->
/// spatial_average. Frames whose refined ROI is empty reuse the previous
/// frame's average; an empty first frame is an error.
ColorSignal build_color_signal(std::span<const FrameRGB> frames, std::span<const FaceRect> faces,
                               const RoiOptions& options, double rate_hz);

}  // namespace ippg
