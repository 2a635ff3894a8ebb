#pragma once

#include <optional>
#include <string>
#include <vector>

#include "songsieve/annotations.hpp"
#include "songsieve/audio.hpp"

namespace songsieve {

/// One detected event: time span, confidence in (0,1), and an optional class
/// label (absent for the binary detector).
struct Detection {
    std::string source_id;
    double start_s = 0.0;
    double end_s = 0.0;
    double confidence = 0.0;
    std::optional<std::string> label;
};

/// Baseline energy-detector parameters. The default band follows the
/// recorders' 0.6-16 kHz filter setting.
struct DetectorParams {
    double band_low_hz = 600.0;
    double band_high_hz = 16000.0;
    double frame_s = 0.05;
    double hop_s = 0.025;
    // below ~4 the envelope's own sampling noise crosses the threshold a few
    // times per minute and the merge step promotes those to false detections
    double k_mad = 5.0;
    double min_dur_s = 0.08;
    double merge_gap_s = 0.15;
};

/// Spectrogram image width the detector equations denormalize against.
inline constexpr double kImageWidthPx = 930.0;

/// Convert a normalized box to a time segment: denormalize x_center and
/// x_width by the image width W, then scale pixels to seconds by 60/W.
/// Results are clamped to [0, clip_duration_s].
std::pair<double, double> bbox_to_time(const YoloBox& box, double image_width_px = kImageWidthPx,
                                       double clip_duration_s = 60.0);

/// Keep detections with confidence >= threshold, preserving order.
std::vector<Detection> filter_by_confidence(const std::vector<Detection>& detections,
                                            double threshold);

/// Band-limited RMS-envelope detector: threshold at median + k_mad * MAD,
/// merge runs closer than merge_gap_s, drop runs shorter than min_dur_s.
/// Confidence is a logistic squash of the peak excess over the threshold,
/// strictly inside (0,1) and monotone in peak energy.
///
/// Throws: ClipTooShort.
std::vector<Detection> energy_detector(const AudioClip& clip, const DetectorParams& params);

/// Read external detector output. Accepts either the detections CSV
/// (header source_id,start_s,end_s,confidence,label) or YOLO rows with a
/// trailing confidence column (`class x_c y_c w h conf`), which are converted
/// through bbox_to_time against `yolo_duration_s`.
///
/// Throws: MalformedRow, ConfidenceOutOfRange.
std::vector<Detection> ingest_detections(const std::string& path, double yolo_duration_s = 60.0);

/// Detections CSV writer (the inverse of the CSV branch of ingest).
void write_detections_csv(const std::vector<Detection>& detections, const std::string& path);

}  // namespace songsieve
