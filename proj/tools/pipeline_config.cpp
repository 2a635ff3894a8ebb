#include "pipeline_config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "songsieve/error.hpp"

namespace songsieve::cli {

namespace {

std::string trim(const std::string& s) {
    const std::size_t first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const std::size_t last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string unquote(const std::string& raw, const std::string& context) {
    std::string v = trim(raw);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    if (!v.empty() && v.front() == '"')
        throw error(errc::invalid_config, context + ": unterminated string");
    return v;
}

std::vector<std::string> parse_array(const std::string& raw, const std::string& context) {
    const std::string body = trim(raw);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw error(errc::invalid_config, context + ": malformed array");
    std::vector<std::string> elements;
    std::string current;
    for (std::size_t i = 1; i + 1 < body.size(); ++i) {
        if (body[i] == ',') {
            elements.push_back(unquote(current, context));
            current.clear();
        } else {
            current.push_back(body[i]);
        }
    }
    if (!trim(current).empty()) elements.push_back(unquote(current, context));
    return elements;
}

double to_double(const std::string& raw, const std::string& context) {
    try {
        std::size_t used = 0;
        const double v = std::stod(raw, &used);
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw error(errc::invalid_config, context + ": expected a number, got '" + raw + "'");
    }
}

long to_long(const std::string& raw, const std::string& context) {
    const double v = to_double(raw, context);
    if (v != std::floor(v))
        throw error(errc::invalid_config, context + ": expected an integer, got '" + raw + "'");
    return static_cast<long>(v);
}

}  // namespace

ConfigDocument parse_config_text(const std::string& text) {
    ConfigDocument doc;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = trim(raw);
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos && line.find('"') == std::string::npos)
            line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        const std::string context = "config line " + std::to_string(line_no);

        if (line.front() == '[') {
            if (line.back() != ']')
                throw error(errc::invalid_config, context + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw error(errc::invalid_config, context + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || section.empty())
            throw error(errc::invalid_config, context + ": key outside a [section]");
        const std::string full = section + "." + key;
        if (!value.empty() && value.front() == '[') {
            doc.arrays[full] = parse_array(value, context);
        } else {
            doc.scalars[full] = unquote(value, context);
        }
    }
    return doc;
}

PipelineConfig apply_document(const ConfigDocument& doc, PipelineConfig base) {
    PipelineConfig& c = base;
    std::set<std::string> seen;

    const auto str = [&](const std::string& key, std::string& field) {
        const auto it = doc.scalars.find(key);
        if (it != doc.scalars.end()) {
            field = it->second;
            seen.insert(key);
        }
    };
    const auto num = [&](const std::string& key, double& field) {
        const auto it = doc.scalars.find(key);
        if (it != doc.scalars.end()) {
            field = to_double(it->second, key);
            seen.insert(key);
        }
    };
    const auto integer = [&](const std::string& key, auto& field) {
        const auto it = doc.scalars.find(key);
        if (it != doc.scalars.end()) {
            field = static_cast<std::decay_t<decltype(field)>>(to_long(it->second, key));
            seen.insert(key);
        }
    };

    str("paths.audio_root", c.audio_root);
    str("paths.annotation_root", c.annotation_root);
    str("paths.output_root", c.output_root);
    str("paths.background_root", c.background_root);
    str("paths.background_meta", c.background_meta);

    integer("spectrogram.n_fft", c.spectrogram.n_fft);
    integer("spectrogram.hop", c.spectrogram.hop);
    str("spectrogram.window", c.spectrogram.window);
    num("spectrogram.fmin_hz", c.spectrogram.fmin_hz);
    num("spectrogram.fmax_hz", c.spectrogram.fmax_hz);
    num("spectrogram.db_floor", c.spectrogram.db_floor);
    integer("spectrogram.width_px", c.spectrogram.out_width_px);
    integer("spectrogram.height_px", c.spectrogram.out_height_px);

    str("scheme.mode", c.scheme_mode);
    str("scheme.classes_file", c.classes_file);

    num("split.train", c.split_targets[0]);
    num("split.validation", c.split_targets[1]);
    num("split.test", c.split_targets[2]);
    integer("split.seed", c.split_seed);

    num("augment.snr_db_min", c.augment.snr_db_min);
    num("augment.snr_db_max", c.augment.snr_db_max);
    num("augment.gain_db_min", c.augment.gain_db_min);
    num("augment.gain_db_max", c.augment.gain_db_max);
    num("augment.background_fraction", c.augment.background_fraction);
    integer("augment.seed", c.augment.seed);
    {
        const auto it = doc.arrays.find("augment.excluded_labels");
        if (it != doc.arrays.end()) {
            c.augment.excluded_background_labels = it->second;
            seen.insert(it->first);
        }
    }

    str("detector.source", c.detector_source);
    num("detector.band_low_hz", c.detector.band_low_hz);
    num("detector.band_high_hz", c.detector.band_high_hz);
    num("detector.frame_s", c.detector.frame_s);
    num("detector.hop_s", c.detector.hop_s);
    num("detector.k_mad", c.detector.k_mad);
    num("detector.min_dur_s", c.detector.min_dur_s);
    num("detector.merge_gap_s", c.detector.merge_gap_s);

    num("evaluation.iou_min", c.iou_min);
    num("evaluation.window_s", c.window_s);
    num("evaluation.confidence_threshold", c.confidence_threshold);
    num("evaluation.classifier_confidence_threshold", c.classifier_confidence_threshold);
    num("evaluation.clip_duration_s", c.clip_duration_s);

    {
        const auto it = doc.arrays.find("calibration.targets");
        if (it != doc.arrays.end()) {
            c.calibration_targets.clear();
            for (const std::string& e : it->second)
                c.calibration_targets.push_back(to_double(e, "calibration.targets"));
            seen.insert(it->first);
        }
    }
    integer("calibration.n_boot", c.n_boot);
    num("calibration.level", c.band_level);
    integer("calibration.seed", c.calibration_seed);

    integer("run.workers", c.workers);

    for (const auto& [key, value] : doc.scalars) {
        (void)value;
        if (!seen.count(key)) throw error(errc::invalid_config, "unknown config key '" + key + "'");
    }
    for (const auto& [key, value] : doc.arrays) {
        (void)value;
        if (!seen.count(key)) throw error(errc::invalid_config, "unknown config key '" + key + "'");
    }
    return base;
}

void validate(const PipelineConfig& c) {
    const auto fail = [](const std::string& what) { throw error(errc::invalid_config, what); };
    if (c.spectrogram.n_fft <= 0 || c.spectrogram.hop <= 0 || c.spectrogram.hop > c.spectrogram.n_fft)
        fail("spectrogram needs n_fft >= hop > 0");
    if (c.spectrogram.fmin_hz <= 0.0 || c.spectrogram.fmin_hz >= c.spectrogram.fmax_hz)
        fail("spectrogram needs 0 < fmin_hz < fmax_hz");
    if (c.spectrogram.out_width_px <= 0 || c.spectrogram.out_height_px <= 0)
        fail("spectrogram geometry must be positive");
    if (c.scheme_mode != "binary" && c.scheme_mode != "classifier")
        fail("scheme.mode must be 'binary' or 'classifier'");
    const double target_sum = c.split_targets[0] + c.split_targets[1] + c.split_targets[2];
    if (std::abs(target_sum - 1.0) > 1e-9) fail("split targets must sum to 1");
    if (c.augment.background_fraction < 0.0 || c.augment.background_fraction >= 1.0)
        fail("augment.background_fraction must lie in [0,1)");
    if (c.augment.snr_db_min > c.augment.snr_db_max) fail("augment SNR range is reversed");
    if (c.augment.gain_db_min > c.augment.gain_db_max) fail("augment gain range is reversed");
    if (c.detector.band_low_hz >= c.detector.band_high_hz) fail("detector band is reversed");
    if (c.detector.frame_s < c.detector.hop_s || c.detector.hop_s <= 0.0)
        fail("detector needs frame_s >= hop_s > 0");
    if (c.iou_min < 0.0 || c.iou_min > 1.0) fail("evaluation.iou_min must lie in [0,1]");
    if (c.window_s <= 0.0 || c.clip_duration_s <= 0.0) fail("window and clip duration must be positive");
    if (c.confidence_threshold < 0.0 || c.confidence_threshold > 1.0)
        fail("evaluation.confidence_threshold must lie in [0,1]");
    for (double t : c.calibration_targets)
        if (t <= 0.0 || t >= 1.0) fail("calibration targets must lie in (0,1)");
    if (c.n_boot < 1) fail("calibration.n_boot must be at least 1");
    if (c.band_level <= 0.0 || c.band_level >= 1.0) fail("calibration.level must lie in (0,1)");
    if (c.workers < 0) fail("run.workers cannot be negative");
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw error(errc::invalid_config, "cannot open config " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    PipelineConfig config = apply_document(parse_config_text(buf.str()));
    validate(config);
    return config;
}

std::string config_to_json(const PipelineConfig& c) {
    nlohmann::json j{
        {"paths",
         {{"audio_root", c.audio_root},
          {"annotation_root", c.annotation_root},
          {"output_root", c.output_root},
          {"background_root", c.background_root},
          {"background_meta", c.background_meta}}},
        {"spectrogram",
         {{"n_fft", c.spectrogram.n_fft},
          {"hop", c.spectrogram.hop},
          {"window", c.spectrogram.window},
          {"fmin_hz", c.spectrogram.fmin_hz},
          {"fmax_hz", c.spectrogram.fmax_hz},
          {"db_floor", c.spectrogram.db_floor},
          {"width_px", c.spectrogram.out_width_px},
          {"height_px", c.spectrogram.out_height_px}}},
        {"scheme", {{"mode", c.scheme_mode}, {"classes_file", c.classes_file}}},
        {"split",
         {{"train", c.split_targets[0]},
          {"validation", c.split_targets[1]},
          {"test", c.split_targets[2]},
          {"seed", c.split_seed}}},
        {"augment",
         {{"snr_db_min", c.augment.snr_db_min},
          {"snr_db_max", c.augment.snr_db_max},
          {"gain_db_min", c.augment.gain_db_min},
          {"gain_db_max", c.augment.gain_db_max},
          {"background_fraction", c.augment.background_fraction},
          {"excluded_labels", c.augment.excluded_background_labels},
          {"seed", c.augment.seed}}},
        {"detector",
         {{"source", c.detector_source},
          {"band_low_hz", c.detector.band_low_hz},
          {"band_high_hz", c.detector.band_high_hz},
          {"frame_s", c.detector.frame_s},
          {"hop_s", c.detector.hop_s},
          {"k_mad", c.detector.k_mad},
          {"min_dur_s", c.detector.min_dur_s},
          {"merge_gap_s", c.detector.merge_gap_s}}},
        {"evaluation",
         {{"iou_min", c.iou_min},
          {"window_s", c.window_s},
          {"confidence_threshold", c.confidence_threshold},
          {"classifier_confidence_threshold", c.classifier_confidence_threshold},
          {"clip_duration_s", c.clip_duration_s}}},
        {"calibration",
         {{"targets", c.calibration_targets},
          {"n_boot", c.n_boot},
          {"level", c.band_level},
          {"seed", c.calibration_seed}}},
        {"run", {{"workers", c.workers}}},
    };
    return j.dump(2);
}

}  // namespace songsieve::cli
