#pragma once

#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "ippg/pipeline.hpp"

namespace ippg {

/// Raised for unreadable or malformed data files (CLI exit code 2).
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Descriptor for a raw interleaved RGB8 frame stream.
struct FramesMeta {
    int width = 0;
    int height = 0;
    double fps = 0.0;
    std::size_t frame_count = 0;
};

FramesMeta read_frames_meta(const std::filesystem::path& path);
void write_frames_meta(const std::filesystem::path& path, const FramesMeta& meta);

/// Decodes a raw RGB8 stream; the byte count must match the descriptor.
std::vector<FrameRGB> ingest_frames(const std::filesystem::path& rgb_path, const FramesMeta& meta);
void write_frames_rgb(const std::filesystem::path& path, const std::vector<FrameRGB>& frames);

/// Text PPG format: "rate_hz=<r>" header line, one sample per line.
TimeSeries ingest_ppg(const std::filesystem::path& path);
void write_ppg(const std::filesystem::path& path, const TimeSeries& ppg);

/// Face sidecar: "<frame_index> <x> <y> <w> <h>" per line, or a single
/// "* <x> <y> <w> <h>" line applying one rectangle to every frame.
std::vector<FaceRect> ingest_faces(const std::filesystem::path& path, std::size_t frame_count);
void write_faces_constant(const std::filesystem::path& path, const FaceRect& rect);
void write_faces(const std::filesystem::path& path, const std::vector<FaceRect>& rects);

/// One trial directory inside a dataset root.
struct TrialRecord {
    std::string participant_id;
    std::string trial_id;  // directory name, e.g. "P01_T05"
    std::filesystem::path dir;
    bool excluded = false;
};

/// Lists trial subdirectories (sorted by name); entries named in the
/// exclusion set are flagged, not dropped.
std::vector<TrialRecord> scan_dataset(const std::filesystem::path& root,
                                      const std::set<std::string>& excluded = {});

/// One trial id per line, '#' comments allowed.
std::set<std::string> read_exclusions(const std::filesystem::path& path);

TrialData load_trial(const TrialRecord& record);

/// Writes frames.meta, frames.rgb, faces.txt and ppg.txt into dir.
void write_trial(const std::filesystem::path& dir, const TrialData& trial);

}  // namespace ippg
