#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "songsieve/augment.hpp"
#include "songsieve/detect.hpp"
#include "songsieve/spectrogram.hpp"

namespace songsieve::cli {

/// Declarative pipeline configuration. Defaults mirror the pipeline the
/// toolkit was built around: 930x462 spectrograms over 1 Hz - 16 kHz, IoU
/// floor 0.1, 3 s windows, detector threshold 0.15.
struct PipelineConfig {
    // [paths]
    std::string audio_root;
    std::string annotation_root;
    std::string output_root = "out";
    std::string background_root;
    std::string background_meta;

    // [spectrogram]
    SpectrogramParams spectrogram;

    // [scheme]
    std::string scheme_mode = "binary";  // binary | classifier
    std::string classes_file;

    // [split]
    std::array<double, 3> split_targets = {0.8, 0.1, 0.1};
    std::uint64_t split_seed = kDefaultSeed;

    // [augment]
    AugmentConfig augment;

    // [detector]
    std::string detector_source = "baseline";  // baseline | ingest:<path>
    DetectorParams detector;

    // [evaluation]
    double iou_min = 0.1;
    double window_s = 3.0;
    double confidence_threshold = 0.15;
    double classifier_confidence_threshold = 0.1;
    double clip_duration_s = 60.0;

    // [calibration]
    std::vector<double> calibration_targets = {0.40, 0.60, 0.80, 0.95};
    int n_boot = 1000;
    double band_level = 0.90;
    std::uint64_t calibration_seed = kDefaultSeed;

    // [run]
    int workers = 0;  // 0 = hardware concurrency
};

/// Flat-section key/value document, one section per pipeline stage.
/// Values: quoted strings, numbers, booleans, [a, b, c] arrays, # comments.
struct ConfigDocument {
    std::map<std::string, std::string> scalars;             // "section.key" -> raw value
    std::map<std::string, std::vector<std::string>> arrays;  // "section.key" -> elements
};

ConfigDocument parse_config_text(const std::string& text);

/// Load and validate a config file; unknown keys are rejected so typos
/// cannot silently fall back to defaults.
///
/// Throws: InvalidConfig.
PipelineConfig load_config(const std::string& path);

PipelineConfig apply_document(const ConfigDocument& doc, PipelineConfig base = {});

/// Numeric-range validation shared by file and flag input.
void validate(const PipelineConfig& config);

/// JSON snapshot embedded in the run manifest.
std::string config_to_json(const PipelineConfig& config);

}  // namespace songsieve::cli
