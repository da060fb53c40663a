#include "ippg/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace ippg {
namespace fs = std::filesystem;

namespace {

std::string parse_participant(const std::string& trial_id) {
    const auto us = trial_id.find('_');
    return us == std::string::npos ? trial_id : trial_id.substr(0, us);
}

}  // namespace

FramesMeta read_frames_meta(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open frames descriptor: " + path.string());
    FramesMeta meta;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        try {
            if (key == "width")
                meta.width = std::stoi(value);
            else if (key == "height")
                meta.height = std::stoi(value);
            else if (key == "fps")
                meta.fps = std::stod(value);
            else if (key == "frames")
                meta.frame_count = static_cast<std::size_t>(std::stoull(value));
            else
                throw IoError("unknown key '" + key + "'");
        } catch (const std::logic_error&) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad value '" + value +
                          "'");
        }
    }
    if (meta.width <= 0 || meta.height <= 0 || meta.fps <= 0.0 || meta.frame_count == 0)
        throw IoError(path.string() + ": incomplete descriptor (need width, height, fps, frames)");
    return meta;
}

void write_frames_meta(const fs::path& path, const FramesMeta& meta) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write frames descriptor: " + path.string());
    out << "width=" << meta.width << "\nheight=" << meta.height << "\nfps=" << meta.fps
        << "\nframes=" << meta.frame_count << "\n";
}

std::vector<FrameRGB> ingest_frames(const fs::path& rgb_path, const FramesMeta& meta) {
    std::ifstream in(rgb_path, std::ios::binary);
    if (!in) throw IoError("cannot open frame stream: " + rgb_path.string());
    const std::size_t frame_bytes = 3 * static_cast<std::size_t>(meta.width) * meta.height;
    const std::size_t expected = frame_bytes * meta.frame_count;
    const std::uintmax_t actual = fs::file_size(rgb_path);
    if (actual != expected)
        throw IoError(rgb_path.string() + ": size mismatch, expected " + std::to_string(expected) +
                      " bytes, got " + std::to_string(actual));

    std::vector<FrameRGB> frames(meta.frame_count);
    for (std::size_t t = 0; t < meta.frame_count; ++t) {
        FrameRGB& f = frames[t];
        f.width = meta.width;
        f.height = meta.height;
        f.data.resize(frame_bytes);
        if (!in.read(reinterpret_cast<char*>(f.data.data()), static_cast<std::streamsize>(frame_bytes)))
            throw IoError(rgb_path.string() + ": short read at byte offset " +
                          std::to_string(t * frame_bytes));
    }
    return frames;
}

void write_frames_rgb(const fs::path& path, const std::vector<FrameRGB>& frames) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write frame stream: " + path.string());
    for (const FrameRGB& f : frames)
        out.write(reinterpret_cast<const char*>(f.data.data()),
                  static_cast<std::streamsize>(f.data.size()));
}

TimeSeries ingest_ppg(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open PPG file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("rate_hz=", 0) != 0)
        throw IoError(path.string() + ": missing rate_hz header");
    double rate = 0.0;
    try {
        rate = std::stod(line.substr(8));
    } catch (const std::logic_error&) {
        throw IoError(path.string() + ":1: bad rate '" + line + "'");
    }
    if (rate <= 0.0) throw IoError(path.string() + ": rate_hz must be positive");

    std::vector<double> samples;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(line, &pos);
        } catch (const std::logic_error&) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": non-numeric sample '" +
                          line + "'");
        }
        if (pos != line.size() && line.find_first_not_of(" \t\r", pos) != std::string::npos)
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": non-numeric sample '" +
                          line + "'");
        samples.push_back(v);
    }
    if (samples.empty()) throw IoError(path.string() + ": no samples");
    return TimeSeries(std::move(samples), rate);
}

void write_ppg(const fs::path& path, const TimeSeries& ppg) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write PPG file: " + path.string());
    out << "rate_hz=" << ppg.rate_hz << "\n";
    out.precision(17);
    for (double v : ppg.samples) out << v << "\n";
}

std::vector<FaceRect> ingest_faces(const fs::path& path, std::size_t frame_count) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open face sidecar: " + path.string());
    std::vector<FaceRect> rects(frame_count);
    std::vector<bool> seen(frame_count, false);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::stringstream ss(line);
        std::string idx_tok;
        FaceRect r;
        if (!(ss >> idx_tok >> r.x >> r.y >> r.w >> r.h))
            throw IoError(path.string() + ":" + std::to_string(lineno) +
                          ": expected 'frame_index x y w h'");
        if (idx_tok == "*") {
            std::fill(rects.begin(), rects.end(), r);
            std::fill(seen.begin(), seen.end(), true);
            continue;
        }
        std::size_t idx = 0;
        try {
            idx = static_cast<std::size_t>(std::stoull(idx_tok));
        } catch (const std::logic_error&) {
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": bad frame index '" +
                          idx_tok + "'");
        }
        if (idx >= frame_count)
            throw IoError(path.string() + ":" + std::to_string(lineno) + ": frame index " +
                          idx_tok + " out of range (have " + std::to_string(frame_count) +
                          " frames)");
        rects[idx] = r;
        seen[idx] = true;
    }
    for (std::size_t i = 0; i < frame_count; ++i)
        if (!seen[i])
            throw IoError(path.string() + ": no rectangle for frame " + std::to_string(i));
    return rects;
}

void write_faces_constant(const fs::path& path, const FaceRect& rect) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write face sidecar: " + path.string());
    out << "* " << rect.x << " " << rect.y << " " << rect.w << " " << rect.h << "\n";
}

void write_faces(const fs::path& path, const std::vector<FaceRect>& rects) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write face sidecar: " + path.string());
    for (std::size_t i = 0; i < rects.size(); ++i)
        out << i << " " << rects[i].x << " " << rects[i].y << " " << rects[i].w << " "
            << rects[i].h << "\n";
}

std::vector<TrialRecord> scan_dataset(const fs::path& root, const std::set<std::string>& excluded) {
    if (!fs::is_directory(root)) throw IoError("dataset root is not a directory: " + root.string());
    std::vector<TrialRecord> trials;
    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        if (!fs::exists(entry.path() / "frames.meta")) continue;
        TrialRecord rec;
        rec.trial_id = entry.path().filename().string();
        rec.participant_id = parse_participant(rec.trial_id);
        rec.dir = entry.path();
        rec.excluded = excluded.count(rec.trial_id) > 0;
        trials.push_back(std::move(rec));
    }
    std::sort(trials.begin(), trials.end(),
              [](const TrialRecord& a, const TrialRecord& b) { return a.trial_id < b.trial_id; });
    if (trials.empty()) throw IoError("no trial directories under " + root.string());
    return trials;
}

std::set<std::string> read_exclusions(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open exclusion list: " + path.string());
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        out.insert(line.substr(first, last - first + 1));
    }
    return out;
}

TrialData load_trial(const TrialRecord& record) {
    TrialData trial;
    trial.participant_id = record.participant_id;
    trial.trial_id = record.trial_id;
    const FramesMeta meta = read_frames_meta(record.dir / "frames.meta");
    trial.frames = ingest_frames(record.dir / "frames.rgb", meta);
    trial.faces = ingest_faces(record.dir / "faces.txt", meta.frame_count);
    trial.fps = meta.fps;
    trial.ppg = ingest_ppg(record.dir / "ppg.txt");
    return trial;
}

void write_trial(const fs::path& dir, const TrialData& trial) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create trial directory: " + dir.string());
    if (trial.frames.empty()) throw IoError("write_trial: no frames");
    FramesMeta meta{trial.frames[0].width, trial.frames[0].height, trial.fps, trial.frames.size()};
    write_frames_meta(dir / "frames.meta", meta);
    write_frames_rgb(dir / "frames.rgb", trial.frames);
    write_faces(dir / "faces.txt", trial.faces);
    write_ppg(dir / "ppg.txt", trial.ppg);
}

}  // namespace ippg
