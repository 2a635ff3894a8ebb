#include "songsieve/detect.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include "songsieve/csv.hpp"
#include "songsieve/error.hpp"

namespace songsieve {

namespace {

std::mutex& fftw_plan_mutex() {
    static std::mutex m;
    return m;
}

// confidence must stay strictly inside (0,1)
constexpr double kConfidenceEps = 1e-6;

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::vector<double> bandpass_fft(const std::vector<double>& samples, int sample_rate_hz,
                                 double low_hz, double high_hz) {
    const std::size_t n = samples.size();
    const std::size_t n_bins = n / 2 + 1;
    std::vector<double> in = samples;
    std::vector<fftw_complex> spec(n_bins);
    fftw_plan fwd, inv;
    std::vector<double> out(n);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(), spec.data(), FFTW_ESTIMATE);
        inv = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec.data(), out.data(), FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    for (std::size_t k = 0; k < n_bins; ++k) {
        const double freq = static_cast<double>(k) * sample_rate_hz / static_cast<double>(n);
        if (freq < low_hz || freq > high_hz) {
            spec[k][0] = 0.0;
            spec[k][1] = 0.0;
        }
    }
    fftw_execute(inv);
    {
        std::lock_guard<std::mutex> lock(fftw_plan_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(inv);
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

double median_of(std::vector<double> values) {
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + mid, values.end());
    double m = values[mid];
    if (values.size() % 2 == 0) {
        const auto lower = std::max_element(values.begin(), values.begin() + mid);
        m = (m + *lower) / 2.0;
    }
    return m;
}

bool looks_like_csv_header(const std::string& line) {
    return line.rfind("source_id", 0) == 0;
}

void check_confidence(double confidence, const std::string& context) {
    if (!(confidence > 0.0 && confidence < 1.0))
        throw error(errc::confidence_out_of_range, context + ": confidence must lie in (0,1)");
}

}  // namespace

std::pair<double, double> bbox_to_time(const YoloBox& box, double image_width_px,
                                       double clip_duration_s) {
    // denormalize to pixels first, then scale pixels to seconds, exactly as
    // the conversion is defined
    const double x_center_d = box.x_center * image_width_px;
    const double w_d = box.x_width * image_width_px;
    const double seconds_per_px = 60.0 / image_width_px;
    double start_s = (x_center_d - w_d / 2.0) * seconds_per_px;
    double end_s = (x_center_d + w_d / 2.0) * seconds_per_px;
    start_s = std::clamp(start_s, 0.0, clip_duration_s);
    end_s = std::clamp(end_s, 0.0, clip_duration_s);
    return {start_s, end_s};
}

std::vector<Detection> filter_by_confidence(const std::vector<Detection>& detections,
                                            double threshold) {
    std::vector<Detection> kept;
    kept.reserve(detections.size());
    for (const Detection& d : detections)
        if (d.confidence >= threshold) kept.push_back(d);
    return kept;
}

std::vector<Detection> energy_detector(const AudioClip& clip, const DetectorParams& params) {
    const int frame_len = static_cast<int>(std::lround(params.frame_s * clip.sample_rate_hz));
    const int hop_len = static_cast<int>(std::lround(params.hop_s * clip.sample_rate_hz));
    if (frame_len <= 0 || hop_len <= 0 || static_cast<std::size_t>(frame_len) > clip.samples.size())
        throw error(errc::clip_too_short, "clip shorter than one detector frame");

    const std::vector<double> band =
        bandpass_fft(clip.samples, clip.sample_rate_hz, params.band_low_hz, params.band_high_hz);

    const std::size_t n_frames = (band.size() - frame_len) / hop_len + 1;
    std::vector<double> envelope(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) {
        double acc = 0.0;
        const std::size_t start = f * hop_len;
        for (int i = 0; i < frame_len; ++i) acc += band[start + i] * band[start + i];
        envelope[f] = std::sqrt(acc / frame_len);
    }

    const double med = median_of(envelope);
    std::vector<double> deviations(n_frames);
    for (std::size_t f = 0; f < n_frames; ++f) deviations[f] = std::abs(envelope[f] - med);
    const double mad = median_of(deviations);
    const double threshold = med + params.k_mad * mad;

    // active runs as [first_frame, last_frame] index pairs
    struct Run {
        std::size_t first, last;
        double peak;
    };
    std::vector<Run> runs;
    for (std::size_t f = 0; f < n_frames; ++f) {
        if (envelope[f] <= threshold) continue;
        if (!runs.empty() && runs.back().last + 1 == f) {
            runs.back().last = f;
            runs.back().peak = std::max(runs.back().peak, envelope[f]);
        } else {
            runs.push_back({f, f, envelope[f]});
        }
    }

    const auto run_start = [&](const Run& r) { return r.first * params.hop_s; };
    const auto run_end = [&](const Run& r) { return r.last * params.hop_s + params.frame_s; };

    // merge runs separated by less than merge_gap_s
    std::vector<Run> merged;
    for (const Run& r : runs) {
        if (!merged.empty() && run_start(r) - run_end(merged.back()) < params.merge_gap_s) {
            merged.back().last = r.last;
            merged.back().peak = std::max(merged.back().peak, r.peak);
        } else {
            merged.push_back(r);
        }
    }

    const double mad_floor = std::max(mad, 1e-12);
    std::vector<Detection> detections;
    for (const Run& r : merged) {
        const double start = run_start(r);
        const double end = std::min(run_end(r), clip.duration_s());
        if (end - start < params.min_dur_s) continue;
        Detection d;
        d.source_id = clip.source_id;
        d.start_s = start;
        d.end_s = end;
        const double excess = (r.peak - threshold) / mad_floor;
        d.confidence = std::clamp(logistic(excess / (2.0 * params.k_mad)), kConfidenceEps,
                                  1.0 - kConfidenceEps);
        detections.push_back(std::move(d));
    }
    return detections;
}

std::vector<Detection> ingest_detections(const std::string& path, double yolo_duration_s) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::io_failure, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();

    const std::size_t eol = text.find('\n');
    const std::string first_line = text.substr(0, eol == std::string::npos ? text.size() : eol);

    std::vector<Detection> detections;
    if (looks_like_csv_header(first_line)) {
        const std::vector<csv::Row> rows = csv::parse(text);
        for (std::size_t i = 1; i < rows.size(); ++i) {
            const csv::Row& row = rows[i];
            const std::string context = path + ":" + std::to_string(i + 1);
            if (row.size() != 5) throw error(errc::malformed_row, context + ": expected 5 columns");
            Detection d;
            d.source_id = row[0];
            try {
                d.start_s = std::stod(row[1]);
                d.end_s = std::stod(row[2]);
                d.confidence = std::stod(row[3]);
            } catch (const std::exception&) {
                throw error(errc::malformed_row, context + ": non-numeric field");
            }
            if (!row[4].empty()) d.label = row[4];
            if (d.start_s < 0.0 || d.start_s >= d.end_s)
                throw error(errc::malformed_row, context + ": start must be >= 0 and before end");
            check_confidence(d.confidence, context);
            detections.push_back(std::move(d));
        }
        return detections;
    }

    // YOLO rows with a confidence column; source is the file stem
    const std::string source_id = std::filesystem::path(path).stem().string();
    std::istringstream lines(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(lines, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        const std::string context = path + ":" + std::to_string(line_no);
        std::istringstream row(raw);
        YoloBox box;
        double confidence;
        std::string extra;
        if (!(row >> box.class_idx >> box.x_center >> box.y_center >> box.x_width >> box.y_height >> confidence) ||
            (row >> extra))
            throw error(errc::malformed_row, context + ": expected 'class x_c y_c w h conf'");
        check_confidence(confidence, context);
        const auto [start_s, end_s] = bbox_to_time(box, kImageWidthPx, yolo_duration_s);
        if (start_s >= end_s) throw error(errc::malformed_row, context + ": zero-width box");
        Detection d;
        d.source_id = source_id;
        d.start_s = start_s;
        d.end_s = end_s;
        d.confidence = confidence;
        detections.push_back(std::move(d));
    }
    return detections;
}

void write_detections_csv(const std::vector<Detection>& detections, const std::string& path) {
    std::vector<csv::Row> rows;
    rows.push_back({"source_id", "start_s", "end_s", "confidence", "label"});
    char buf[64];
    const auto num = [&buf](double v) {
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return std::string(buf);
    };
    for (const Detection& d : detections)
        rows.push_back({d.source_id, num(d.start_s), num(d.end_s), num(d.confidence),
                        d.label.value_or(std::string())});
    csv::write_file(path, rows);
}

}  // namespace songsieve
