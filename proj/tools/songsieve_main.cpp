// songsieve: batch toolkit for bird-vocalization detection pipelines.
// Subcommands cover spectrogram rendering, annotation conversion, dataset
// splitting, augmentation, baseline detection, IoU evaluation, and
// confidence calibration. All outputs land under the output root together
// with a manifest of checksums.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>

#include "CLI11.hpp"
#include "calibration_svg.hpp"
#include "json.hpp"
#include "parallel.hpp"
#include "pipeline_config.hpp"
#include "run_manifest.hpp"
#include "songsieve/annotations.hpp"
#include "songsieve/audio.hpp"
#include "songsieve/augment.hpp"
#include "songsieve/calibrate.hpp"
#include "songsieve/csv.hpp"
#include "songsieve/detect.hpp"
#include "songsieve/error.hpp"
#include "songsieve/evaluate.hpp"
#include "songsieve/spectrogram.hpp"
#include "songsieve/split.hpp"

namespace fs = std::filesystem;
using namespace songsieve;
using cli::PipelineConfig;
using cli::RunManifest;

namespace {

constexpr const char* kVersion = "0.2.0";

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitData = 2;

std::string two_decimals(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string full_precision(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<fs::path> collect_wavs(const std::string& root) {
    std::vector<fs::path> paths;
    const fs::path p(root);
    if (fs::is_regular_file(p)) {
        paths.push_back(p);
    } else if (fs::is_directory(p)) {
        for (const auto& entry : fs::recursive_directory_iterator(p))
            if (entry.is_regular_file() && entry.path().extension() == ".wav")
                paths.push_back(entry.path());
    } else {
        throw error(errc::invalid_config, root + " is neither a file nor a directory");
    }
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw error(errc::invalid_config, "no .wav files under " + root);
    return paths;
}

fs::path ensure_out_dir(const std::string& out) {
    fs::path dir(out);
    fs::create_directories(dir);
    return dir;
}

void sort_detections(std::vector<Detection>& detections) {
    std::stable_sort(detections.begin(), detections.end(), [](const Detection& a, const Detection& b) {
        if (a.source_id != b.source_id) return a.source_id < b.source_id;
        return a.start_s < b.start_s;
    });
}

nlohmann::json metrics_to_json(const DetectionMetrics& m) {
    nlohmann::json j{
        {"tp", m.tp},
        {"fp", m.fp},
        {"fn", m.fn},
        {"tn", m.tn.has_value() ? nlohmann::json(*m.tn) : nlohmann::json(nullptr)},
        {"precision", m.precision},
        {"recall", m.recall},
        {"f1", m.f1},
        {"accuracy", m.accuracy.has_value() ? nlohmann::json(*m.accuracy) : nlohmann::json(nullptr)},
        {"precision_undefined", m.precision_undefined},
        {"recall_undefined", m.recall_undefined},
    };
    return j;
}

void write_metrics_outputs(const DetectionMetrics& m, const fs::path& dir,
                           const std::string& stem, RunManifest& manifest) {
    const std::string json_path = (dir / (stem + ".json")).string();
    {
        std::ofstream out(json_path, std::ios::binary);
        if (!out) throw error(errc::io_failure, "cannot write " + json_path);
        out << metrics_to_json(m).dump(2) << '\n';
    }
    manifest.record(json_path);

    // table-rounded CSV companion
    std::vector<csv::Row> rows;
    rows.push_back({"metric", "value"});
    rows.push_back({"tp", std::to_string(m.tp)});
    rows.push_back({"fp", std::to_string(m.fp)});
    rows.push_back({"fn", std::to_string(m.fn)});
    rows.push_back({"tn", m.tn.has_value() ? std::to_string(*m.tn) : "-"});
    rows.push_back({"precision", two_decimals(m.precision)});
    rows.push_back({"recall", two_decimals(m.recall)});
    rows.push_back({"f1", two_decimals(m.f1)});
    rows.push_back({"accuracy", m.accuracy.has_value() ? two_decimals(*m.accuracy) : "-"});
    const std::string csv_path = (dir / (stem + ".csv")).string();
    csv::write_file(csv_path, rows);
    manifest.record(csv_path);
}

// ---------------------------------------------------------------------------
// subcommands

int cmd_spectrogram(const PipelineConfig& config, const std::string& audio, const std::string& out) {
    const std::vector<fs::path> wavs = collect_wavs(audio);
    const fs::path dir = ensure_out_dir(out) / "spectrograms";
    fs::create_directories(dir);

    RunManifest manifest("spectrogram");
    std::vector<std::pair<std::string, std::string>> written(wavs.size());
    cli::parallel_for(wavs.size(), config.workers, [&](std::size_t i) {
        const AudioClip clip = load_wav(wavs[i].string());
        const SpectrogramMatrix matrix = compute_stft_db(clip, config.spectrogram);
        const SpectrogramImage image =
            render_log_spectrogram(matrix, config.spectrogram, clip.duration_s(), clip.source_id);
        const std::string png = (dir / (clip.source_id + ".png")).string();
        const std::string sidecar = (dir / (clip.source_id + ".json")).string();
        write_png(image, png);
        write_sidecar(image, sidecar);
        written[i] = {png, sidecar};
    });
    for (const auto& [png, sidecar] : written) {
        manifest.record(png);
        manifest.record(sidecar);
    }
    manifest.write(out, cli::config_to_json(config), config.split_seed);
    std::cout << "wrote " << wavs.size() << " spectrograms to " << dir.string() << "\n";
    return kExitOk;
}

int cmd_convert(const PipelineConfig& config, const std::string& labels,
                const std::string& annotations_csv, const std::string& out) {
    std::vector<Annotation> annotations;
    // box files mirror the label tree's relative layout
    std::map<std::string, fs::path> source_rel_path;
    if (!annotations_csv.empty()) {
        annotations = read_annotations_csv(annotations_csv);
    } else {
        const fs::path root(labels);
        std::vector<fs::path> files;
        if (fs::is_regular_file(root)) {
            files.push_back(root);
        } else if (fs::is_directory(root)) {
            for (const auto& entry : fs::recursive_directory_iterator(root))
                if (entry.is_regular_file() && entry.path().extension() == ".txt")
                    files.push_back(entry.path());
        } else {
            throw error(errc::invalid_config, labels + " is neither a file nor a directory");
        }
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            const std::string stem = file.stem().string();
            const fs::path rel = fs::is_directory(root) ? fs::relative(file, root) : file.filename();
            // stems are the source_id key, so they must be unique tree-wide
            const auto [it, inserted] = source_rel_path.emplace(stem, rel);
            if (!inserted)
                throw error(errc::invalid_config, "duplicate file stem '" + stem + "' (" +
                                                      it->second.string() + " vs " + rel.string() + ")");
            const auto parsed = read_audacity_labels(file.string());
            annotations.insert(annotations.end(), parsed.begin(), parsed.end());
        }
    }

    LabelScheme scheme;
    if (config.scheme_mode == "binary") {
        scheme = LabelScheme::binary();
    } else {
        std::set<std::string> classes;
        if (!config.classes_file.empty()) {
            for (const std::string& c : read_classes_manifest(config.classes_file)) classes.insert(c);
        } else {
            // derive the class set from the data, minus the always-dropped ones
            const std::set<std::string> always_dropped = {"Alaudidae", "Bird", "Fringillidae",
                                                          "Upupa epops", "No Bird"};
            for (const Annotation& a : annotations)
                if (!always_dropped.count(a.label)) classes.insert(a.label);
        }
        scheme = LabelScheme::classifier(classes);
        scheme.dropped.insert("No Bird");
    }

    const fs::path dir = ensure_out_dir(out);
    RunManifest manifest("convert");

    // interchange CSV keeps everything, including "No Bird" rows
    const std::string csv_path = (dir / "annotations.csv").string();
    write_annotations_csv(annotations, csv_path);
    manifest.record(csv_path);

    const std::string classes_path = (dir / "classes.txt").string();
    write_classes_manifest(scheme, classes_path);
    manifest.record(classes_path);

    const std::vector<Annotation> positives = apply_scheme(annotations, scheme);
    std::map<std::string, std::vector<YoloBox>> boxes_per_source;
    for (const auto& [source_id, rel] : source_rel_path) {
        (void)rel;
        boxes_per_source[source_id];
    }
    for (const Annotation& a : annotations) boxes_per_source[a.source_id];  // negatives-only files too
    for (const Annotation& a : positives)
        boxes_per_source[a.source_id].push_back(to_yolo(a, config.clip_duration_s, scheme));

    const fs::path yolo_dir = dir / "yolo";
    fs::create_directories(yolo_dir);
    for (const auto& [source_id, boxes] : boxes_per_source) {
        const auto rel = source_rel_path.find(source_id);
        const fs::path path = rel != source_rel_path.end() ? yolo_dir / rel->second
                                                           : yolo_dir / (source_id + ".txt");
        fs::create_directories(path.parent_path());
        write_yolo_file(boxes, path.string());
        manifest.record(path.string());
    }

    manifest.write(out, cli::config_to_json(config), config.split_seed);
    std::cout << "converted " << annotations.size() << " annotations from "
              << boxes_per_source.size() << " files (" << positives.size() << " positive boxes)\n";
    return kExitOk;
}

int cmd_split(const PipelineConfig& config, const std::string& annotations_csv,
              const std::string& out) {
    const std::vector<Annotation> annotations = read_annotations_csv(annotations_csv);
    const SplitPlan plan = plan_split(annotations, config.split_targets, config.split_seed);

    const fs::path dir = ensure_out_dir(out);
    RunManifest manifest("split");
    const std::string split_path = (dir / "split.csv").string();
    write_split_csv(plan, split_path);
    manifest.record(split_path);
    const std::string report_path = (dir / "split_classes.csv").string();
    write_split_class_report(plan, report_path);
    manifest.record(report_path);
    manifest.write(out, cli::config_to_json(config), config.split_seed);

    for (const std::string& warning : plan.warnings) std::cerr << "warning: " << warning << "\n";
    std::cout << "assigned " << plan.assignment.size() << " files\n";
    return kExitOk;
}

int cmd_augment(const PipelineConfig& config, const std::string& train_audio,
                const std::string& labels, const std::string& out) {
    const std::vector<fs::path> wavs = collect_wavs(train_audio);
    const fs::path dir = ensure_out_dir(out) / "augmented";
    fs::create_directories(dir);
    RunManifest manifest("augment");

    // one noise+gain variant per positive item, labels copied alongside
    std::vector<std::vector<std::string>> written(wavs.size());
    cli::parallel_for(wavs.size(), config.workers, [&](std::size_t i) {
        const AudioClip clip = load_wav(wavs[i].string());
        Rng rng(config.augment.seed + static_cast<std::uint64_t>(i));
        const double snr = rng.uniform(config.augment.snr_db_min, config.augment.snr_db_max);
        const double gain = rng.uniform(config.augment.gain_db_min, config.augment.gain_db_max);
        const std::uint64_t noise_seed = rng.engine()();
        const AudioClip augmented = scale_intensity(add_noise(clip, snr, noise_seed), gain);

        const std::string wav_path = (dir / (clip.source_id + "_aug.wav")).string();
        write_wav(augmented, wav_path);
        written[i].push_back(wav_path);

        if (!labels.empty()) {
            const fs::path label_src = fs::path(labels) / (clip.source_id + ".txt");
            const std::string label_dst = (dir / (clip.source_id + "_aug.txt")).string();
            if (fs::exists(label_src)) {
                fs::copy_file(label_src, label_dst, fs::copy_options::overwrite_existing);
            } else {
                write_yolo_file({}, label_dst);
            }
            written[i].push_back(label_dst);
        }
    });
    for (const auto& paths : written)
        for (const std::string& p : paths) manifest.record(p);

    // background negatives at the configured fraction of the final set
    long n_background = 0;
    if (!config.background_root.empty()) {
        if (config.background_meta.empty())
            throw error(errc::invalid_config, "background_root needs background_meta");
        const auto items = read_background_metadata(config.background_meta);
        const long n_train = static_cast<long>(wavs.size()) * 2;  // originals + augmented copies
        const auto selection = mix_background_set(n_train, items, config.augment);

        const int pipeline_rate = load_wav(wavs.front().string()).sample_rate_hz;
        std::vector<std::vector<std::string>> bg_written(selection.size());
        cli::parallel_for(selection.size(), config.workers, [&](std::size_t i) {
            const fs::path src = fs::path(config.background_root) / selection[i].filename;
            AudioClip clip = load_wav(src.string());
            clip = resample(clip, pipeline_rate);
            clip = tile_to_duration(clip, config.clip_duration_s);
            const std::string stem = "bg_" + fs::path(selection[i].filename).stem().string();
            const std::string wav_path = (dir / (stem + ".wav")).string();
            write_wav(clip, wav_path);
            // negatives always pair with an empty label file
            const std::string label_path = (dir / (stem + ".txt")).string();
            write_yolo_file({}, label_path);
            bg_written[i] = {wav_path, label_path};
        });
        for (const auto& paths : bg_written)
            for (const std::string& p : paths) manifest.record(p);
        n_background = static_cast<long>(selection.size());
    }

    manifest.write(out, cli::config_to_json(config), config.augment.seed);
    std::cout << "wrote " << wavs.size() << " augmented positives and " << n_background
              << " background negatives to " << dir.string() << "\n";
    return kExitOk;
}

int cmd_detect(const PipelineConfig& config, const std::string& audio, const std::string& ingest,
               const std::string& out) {
    std::vector<Detection> detections;
    if (!ingest.empty()) {
        detections = ingest_detections(ingest, config.clip_duration_s);
    } else {
        const std::vector<fs::path> wavs = collect_wavs(audio);
        std::vector<std::vector<Detection>> per_file(wavs.size());
        cli::parallel_for(wavs.size(), config.workers, [&](std::size_t i) {
            const AudioClip clip = load_wav(wavs[i].string());
            per_file[i] = energy_detector(clip, config.detector);
        });
        for (const auto& batch : per_file)
            detections.insert(detections.end(), batch.begin(), batch.end());
    }
    sort_detections(detections);

    const fs::path dir = ensure_out_dir(out);
    RunManifest manifest("detect");
    const std::string path = (dir / "detections.csv").string();
    write_detections_csv(detections, path);
    manifest.record(path);
    manifest.write(out, cli::config_to_json(config), config.split_seed);
    std::cout << "wrote " << detections.size() << " detections to " << path << "\n";
    return kExitOk;
}

int cmd_eval_detections(const PipelineConfig& config, const std::string& gt_csv,
                        const std::string& pred_csv, const std::string& out) {
    const std::vector<Annotation> gts = read_annotations_csv(gt_csv);
    std::vector<Detection> preds = ingest_detections(pred_csv, config.clip_duration_s);
    preds = filter_by_confidence(preds, config.confidence_threshold);

    const MatchResult match = match_detections(preds, gts, config.iou_min);
    const DetectionMetrics metrics = detection_metrics(match);

    const fs::path dir = ensure_out_dir(out);
    RunManifest manifest("eval-detections");
    write_metrics_outputs(metrics, dir, "detection_metrics", manifest);
    manifest.write(out, cli::config_to_json(config), config.split_seed);

    std::cout << "tp " << metrics.tp << "  fp " << metrics.fp << "  fn " << metrics.fn
              << "  precision " << two_decimals(metrics.precision) << "  recall "
              << two_decimals(metrics.recall) << "  f1 " << two_decimals(metrics.f1) << "\n";
    return kExitOk;
}

int cmd_eval_windows(const PipelineConfig& config, const std::string& gt_csv,
                     const std::string& pred_csv, const std::string& mode_name,
                     const std::string& out) {
    const std::vector<Annotation> gts = read_annotations_csv(gt_csv);
    std::vector<Detection> preds = ingest_detections(pred_csv, config.clip_duration_s);
    preds = filter_by_confidence(preds, config.confidence_threshold);

    WindowMode mode;
    if (mode_name == "window") mode = WindowMode::window;
    else if (mode_name == "annotation") mode = WindowMode::annotation;
    else throw error(errc::invalid_config, "mode must be 'window' or 'annotation'");

    const MatchResult match =
        fixed_window_eval(preds, gts, config.window_s, mode, config.clip_duration_s);
    const DetectionMetrics metrics = detection_metrics(match);

    const fs::path dir = ensure_out_dir(out);
    RunManifest manifest("eval-windows");
    write_metrics_outputs(metrics, dir, "window_metrics", manifest);
    manifest.write(out, cli::config_to_json(config), config.split_seed);

    std::cout << "tp " << metrics.tp << "  fp " << metrics.fp << "  fn " << metrics.fn << "  tn "
              << (metrics.tn ? std::to_string(*metrics.tn) : "-") << "\n";
    return kExitOk;
}

int cmd_calibrate(const PipelineConfig& config, const std::string& gt_csv,
                  const std::string& pred_csv, bool with_svg, const std::string& out) {
    const std::vector<Annotation> gts = read_annotations_csv(gt_csv);
    const std::vector<Detection> preds = ingest_detections(pred_csv, config.clip_duration_s);

    const auto samples = collect_calibration_samples(preds, gts, config.iou_min);
    const LogisticModel model = fit_logistic(samples);
    const CalibrationTable table =
        tp_loss_table(preds, gts, model, config.calibration_targets, config.iou_min);
    const BootstrapBand band =
        bootstrap_band(samples, config.n_boot, config.band_level, config.calibration_seed);

    const fs::path dir = ensure_out_dir(out);
    RunManifest manifest("calibrate");

    {
        std::vector<csv::Row> rows;
        rows.push_back({"probability_threshold", "logit_score", "confidence_score",
                        "confidence_score_2dp", "tp_loss_percent"});
        for (const auto& row : table.rows)
            rows.push_back({two_decimals(row.probability_threshold),
                            full_precision(row.logit_score), full_precision(row.confidence_score),
                            two_decimals(round_confidence_2dp(row.confidence_score)),
                            two_decimals(row.tp_loss_percent)});
        const std::string path = (dir / "calibration_table.csv").string();
        csv::write_file(path, rows);
        manifest.record(path);
    }
    {
        nlohmann::json j{{"intercept", model.intercept},
                         {"slope", model.slope},
                         {"n_samples", model.n_samples},
                         {"converged", model.converged},
                         {"baseline_tp", table.baseline_tp}};
        const std::string path = (dir / "calibration_model.json").string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw error(errc::io_failure, "cannot write " + path);
        f << j.dump(2) << '\n';
        manifest.record(path);
    }
    {
        std::vector<csv::Row> rows;
        rows.push_back({"logit", "lower", "upper"});
        for (std::size_t i = 0; i < band.logit_grid.size(); ++i)
            rows.push_back({full_precision(band.logit_grid[i]), full_precision(band.lower[i]),
                            full_precision(band.upper[i])});
        const std::string path = (dir / "calibration_band.csv").string();
        csv::write_file(path, rows);
        manifest.record(path);
    }
    if (with_svg) {
        const std::string path = (dir / "calibration_plot.svg").string();
        cli::write_calibration_svg(path, samples, model, band, config.calibration_targets);
        manifest.record(path);
    }
    manifest.write(out, cli::config_to_json(config), config.calibration_seed);

    for (const auto& row : table.rows)
        std::cout << static_cast<int>(row.probability_threshold * 100) << "%  logit "
                  << two_decimals(row.logit_score) << "  confidence "
                  << two_decimals(row.confidence_score) << "  tp loss "
                  << two_decimals(row.tp_loss_percent) << "%\n";
    return kExitOk;
}

int cmd_eval_classifier(const PipelineConfig& config, const std::string& gt_csv,
                        const std::string& pred_csv, const std::string& classes_file,
                        const std::string& out) {
    const std::vector<Annotation> gts = read_annotations_csv(gt_csv);
    const std::vector<Detection> preds = ingest_detections(pred_csv, config.clip_duration_s);

    std::vector<std::string> class_order;
    if (!classes_file.empty()) {
        class_order = read_classes_manifest(classes_file);
    } else {
        std::set<std::string> classes;
        for (const Annotation& a : gts) classes.insert(a.label);
        class_order.assign(classes.begin(), classes.end());
    }

    const auto items = align_predictions_to_annotations(
        preds, gts, config.classifier_confidence_threshold);
    long n_predictions = 0;
    for (const Detection& d : preds)
        if (d.confidence >= config.classifier_confidence_threshold) ++n_predictions;
    const ClassificationReport report = classification_report(items, class_order, n_predictions);
    const ConfusionMatrix matrix = confusion_matrix(items, class_order, MatrixNormalize::rows);

    const fs::path dir = ensure_out_dir(out);
    RunManifest manifest("eval-classifier");
    {
        nlohmann::json per_class = nlohmann::json::array();
        for (const auto& row : report.per_class)
            per_class.push_back({{"label", row.label},
                                 {"precision", row.precision},
                                 {"recall", row.recall},
                                 {"f1", row.f1},
                                 {"support", row.support}});
        nlohmann::json j{
            {"accuracy", report.accuracy},
            {"macro_avg",
             {{"precision", report.macro_avg.precision},
              {"recall", report.macro_avg.recall},
              {"f1", report.macro_avg.f1}}},
            {"weighted_avg",
             {{"precision", report.weighted_avg.precision},
              {"recall", report.weighted_avg.recall},
              {"f1", report.weighted_avg.f1}}},
            {"n_items", report.n_items},
            {"n_predictions", report.n_predictions},
            {"idx_pred_ann", report.idx_pred_ann},
            {"per_class", per_class},
        };
        const std::string path = (dir / "classification_report.json").string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw error(errc::io_failure, "cannot write " + path);
        f << j.dump(2) << '\n';
        manifest.record(path);
    }
    {
        std::vector<csv::Row> rows;
        rows.push_back({"label", "precision", "recall", "f1", "support"});
        for (const auto& row : report.per_class)
            rows.push_back({row.label, two_decimals(row.precision), two_decimals(row.recall),
                            two_decimals(row.f1), std::to_string(row.support)});
        rows.push_back({"accuracy", "", "", two_decimals(report.accuracy),
                        std::to_string(report.n_items)});
        rows.push_back({"macro avg", two_decimals(report.macro_avg.precision),
                        two_decimals(report.macro_avg.recall), two_decimals(report.macro_avg.f1),
                        std::to_string(report.n_items)});
        rows.push_back({"weighted avg", two_decimals(report.weighted_avg.precision),
                        two_decimals(report.weighted_avg.recall),
                        two_decimals(report.weighted_avg.f1), std::to_string(report.n_items)});
        const std::string path = (dir / "classification_report.csv").string();
        csv::write_file(path, rows);
        manifest.record(path);
    }
    {
        std::vector<csv::Row> rows;
        csv::Row header = {"gt\\pred"};
        header.insert(header.end(), matrix.col_labels.begin(), matrix.col_labels.end());
        rows.push_back(header);
        for (std::size_t r = 0; r < matrix.row_labels.size(); ++r) {
            csv::Row row = {matrix.row_labels[r]};
            for (double v : matrix.values[r]) row.push_back(full_precision(v));
            rows.push_back(row);
        }
        const std::string path = (dir / "confusion_matrix.csv").string();
        csv::write_file(path, rows);
        manifest.record(path);
    }
    manifest.write(out, cli::config_to_json(config), config.split_seed);

    std::cout << "accuracy " << two_decimals(report.accuracy) << "  weighted f1 "
              << two_decimals(report.weighted_avg.f1) << "  idx pred/ann "
              << full_precision(report.idx_pred_ann) << "\n";
    return kExitOk;
}

int cmd_compare(const PipelineConfig& config, const std::string& old_json,
                const std::string& new_json, const std::string& out) {
    const auto load_counts = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw error(errc::io_failure, "cannot open " + path);
        const nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
        if (j.is_discarded() || !j.contains("tp") || !j.contains("fp") || !j.contains("fn"))
            throw error(errc::malformed_row, path + " is not a metrics JSON with tp/fp/fn");
        return std::array<long, 3>{j["tp"].get<long>(), j["fp"].get<long>(), j["fn"].get<long>()};
    };
    const std::array<long, 3> old_counts = load_counts(old_json);
    const std::array<long, 3> new_counts = load_counts(new_json);
    const char* names[3] = {"TP", "FP", "FN"};

    std::vector<csv::Row> rows;
    rows.push_back({"count", "old", "new", "percentage_change"});
    for (int i = 0; i < 3; ++i) {
        std::string change = "-";
        if (old_counts[i] != 0) {
            const long pct = percentage_change_rounded(static_cast<double>(new_counts[i]),
                                                       static_cast<double>(old_counts[i]));
            change = (pct > 0 ? "+" : "") + std::to_string(pct) + "%";
        }
        rows.push_back({names[i], std::to_string(old_counts[i]), std::to_string(new_counts[i]), change});
        std::cout << names[i] << "  " << old_counts[i] << " -> " << new_counts[i] << "  " << change
                  << "\n";
    }

    const fs::path dir = ensure_out_dir(out);
    RunManifest manifest("compare");
    const std::string path = (dir / "comparison.csv").string();
    csv::write_file(path, rows);
    manifest.record(path);
    manifest.write(out, cli::config_to_json(config), config.split_seed);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"songsieve: batch tooling for bird-vocalization detection pipelines"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::string config_path;
    int workers_flag = -1;
    app.add_option("--config", config_path, "pipeline config file (flat TOML-style sections)");
    app.add_option("--workers", workers_flag, "worker threads (0 = all cores, 1 = serial)");

    std::string audio, labels, annotations_csv, gt_csv, pred_csv, ingest, classes_file;
    std::string out_flag, scheme_mode_flag, window_mode_flag = "window", old_json, new_json, train_audio;
    bool with_svg = false;
    double iou_min_flag = -1.0, threshold_flag = -1.0, window_flag = -1.0, duration_flag = -1.0;
    double fraction_flag = -1.0;
    long seed_flag = -1, n_boot_flag = -1;
    std::vector<double> targets_flag;

    CLI::App* spectrogram_cmd = app.add_subcommand("spectrogram", "render log-frequency spectrograms");
    spectrogram_cmd->add_option("--audio", audio, "WAV file or directory")->required();
    spectrogram_cmd->add_option("--out", out_flag, "output root");

    CLI::App* convert_cmd = app.add_subcommand("convert", "Audacity labels -> CSV + YOLO boxes");
    convert_cmd->add_option("--labels", labels, "Audacity label file or directory");
    convert_cmd->add_option("--annotations", annotations_csv, "interchange CSV input");
    convert_cmd->add_option("--mode", scheme_mode_flag, "binary | classifier");
    convert_cmd->add_option("--classes", classes_file, "classes.txt fixing the class order");
    convert_cmd->add_option("--duration", duration_flag, "clip duration in seconds");
    convert_cmd->add_option("--out", out_flag, "output root");

    CLI::App* split_cmd = app.add_subcommand("split", "train/validation/test file assignment");
    split_cmd->add_option("--annotations", annotations_csv, "interchange CSV")->required();
    split_cmd->add_option("--targets", targets_flag, "train,val,test fractions")->delimiter(',');
    split_cmd->add_option("--seed", seed_flag, "split seed");
    split_cmd->add_option("--out", out_flag, "output root");

    CLI::App* augment_cmd = app.add_subcommand("augment", "noise/gain variants + background negatives");
    augment_cmd->add_option("--train-audio", train_audio, "training WAV directory")->required();
    augment_cmd->add_option("--labels", labels, "YOLO label directory to copy alongside");
    augment_cmd->add_option("--background", audio, "background WAV root (ESC-50-style)");
    augment_cmd->add_option("--background-meta", annotations_csv, "background metadata CSV");
    augment_cmd->add_option("--fraction", fraction_flag, "background fraction of the final set");
    augment_cmd->add_option("--duration", duration_flag, "negative-clip length in seconds");
    augment_cmd->add_option("--seed", seed_flag, "augmentation seed");
    augment_cmd->add_option("--out", out_flag, "output root");

    CLI::App* detect_cmd = app.add_subcommand("detect", "baseline energy detector or ingest");
    detect_cmd->add_option("--audio", audio, "WAV file or directory");
    detect_cmd->add_option("--ingest", ingest, "external detections (CSV or YOLO+confidence)");
    detect_cmd->add_option("--out", out_flag, "output root");

    CLI::App* evald_cmd = app.add_subcommand("eval-detections", "IoU-matched detection metrics");
    evald_cmd->add_option("--gt", gt_csv, "ground-truth annotations CSV")->required();
    evald_cmd->add_option("--pred", pred_csv, "detections CSV")->required();
    evald_cmd->add_option("--iou-min", iou_min_flag, "IoU floor for a match");
    evald_cmd->add_option("--threshold", threshold_flag, "confidence threshold");
    evald_cmd->add_option("--out", out_flag, "output root");

    CLI::App* evalw_cmd = app.add_subcommand("eval-windows", "fixed-window detection metrics");
    evalw_cmd->add_option("--gt", gt_csv, "ground-truth annotations CSV")->required();
    evalw_cmd->add_option("--pred", pred_csv, "detections CSV")->required();
    evalw_cmd->add_option("--window", window_flag, "window length in seconds");
    evalw_cmd->add_option("--mode", window_mode_flag, "window | annotation");
    evalw_cmd->add_option("--duration", duration_flag, "file duration in seconds");
    evalw_cmd->add_option("--threshold", threshold_flag, "confidence threshold");
    evalw_cmd->add_option("--out", out_flag, "output root");

    CLI::App* calibrate_cmd = app.add_subcommand("calibrate", "logistic calibration + TP-loss table");
    calibrate_cmd->add_option("--gt", gt_csv, "ground-truth annotations CSV")->required();
    calibrate_cmd->add_option("--pred", pred_csv, "detections CSV")->required();
    calibrate_cmd->add_option("--targets", targets_flag, "probability targets")->delimiter(',');
    calibrate_cmd->add_option("--iou-min", iou_min_flag, "IoU floor for correctness");
    calibrate_cmd->add_option("--n-boot", n_boot_flag, "bootstrap replicates");
    calibrate_cmd->add_option("--seed", seed_flag, "bootstrap seed");
    calibrate_cmd->add_flag("--svg", with_svg, "also write calibration_plot.svg");
    calibrate_cmd->add_option("--out", out_flag, "output root");

    CLI::App* evalc_cmd = app.add_subcommand("eval-classifier", "classification report + confusion matrix");
    evalc_cmd->add_option("--gt", gt_csv, "ground-truth annotations CSV")->required();
    evalc_cmd->add_option("--pred", pred_csv, "labeled detections CSV")->required();
    evalc_cmd->add_option("--classes", classes_file, "classes.txt manifest");
    evalc_cmd->add_option("--threshold", threshold_flag, "classifier confidence threshold");
    evalc_cmd->add_option("--out", out_flag, "output root");

    CLI::App* compare_cmd = app.add_subcommand("compare", "percentage-change table between two runs");
    compare_cmd->add_option("--a", old_json, "old metrics JSON (the reference)")->required();
    compare_cmd->add_option("--b", new_json, "new metrics JSON")->required();
    compare_cmd->add_option("--out", out_flag, "output root");

    CLI11_PARSE(app, argc, argv);

    try {
        // referenced input paths must exist before any work starts
        const auto require_exists = [](const std::string& path, const char* what) {
            if (!path.empty() && !fs::exists(path))
                throw error(errc::invalid_config, std::string(what) + " '" + path + "' does not exist");
        };
        require_exists(config_path, "--config");
        require_exists(audio, "--audio/--background");
        require_exists(labels, "--labels");
        require_exists(annotations_csv, "--annotations/--background-meta");
        require_exists(gt_csv, "--gt");
        require_exists(pred_csv, "--pred");
        require_exists(ingest, "--ingest");
        require_exists(classes_file, "--classes");
        require_exists(train_audio, "--train-audio");
        require_exists(old_json, "--a");
        require_exists(new_json, "--b");

        PipelineConfig config;
        if (!config_path.empty()) config = cli::load_config(config_path);
        if (workers_flag >= 0) config.workers = workers_flag;
        if (iou_min_flag >= 0.0) config.iou_min = iou_min_flag;
        if (threshold_flag >= 0.0) {
            config.confidence_threshold = threshold_flag;
            config.classifier_confidence_threshold = threshold_flag;
        }
        if (window_flag > 0.0) config.window_s = window_flag;
        if (duration_flag > 0.0) config.clip_duration_s = duration_flag;
        if (fraction_flag >= 0.0) config.augment.background_fraction = fraction_flag;
        if (seed_flag >= 0) {
            config.split_seed = static_cast<std::uint64_t>(seed_flag);
            config.augment.seed = static_cast<std::uint64_t>(seed_flag);
            config.calibration_seed = static_cast<std::uint64_t>(seed_flag);
        }
        if (n_boot_flag > 0) config.n_boot = static_cast<int>(n_boot_flag);
        if (!targets_flag.empty()) {
            if (split_cmd->parsed()) {
                if (targets_flag.size() != 3)
                    throw error(errc::invalid_config, "--targets needs three fractions");
                config.split_targets = {targets_flag[0], targets_flag[1], targets_flag[2]};
            } else {
                config.calibration_targets = targets_flag;
            }
        }
        if (!scheme_mode_flag.empty()) config.scheme_mode = scheme_mode_flag;
        if (!classes_file.empty()) config.classes_file = classes_file;
        // output root: flag > env > config
        std::string out = config.output_root;
        if (const char* env = std::getenv("SONGSIEVE_OUTPUT_ROOT")) out = env;
        if (!out_flag.empty()) out = out_flag;
        cli::validate(config);

        if (spectrogram_cmd->parsed()) return cmd_spectrogram(config, audio, out);
        if (convert_cmd->parsed()) {
            if (labels.empty() == annotations_csv.empty())
                throw error(errc::invalid_config, "convert needs exactly one of --labels / --annotations");
            return cmd_convert(config, labels, annotations_csv, out);
        }
        if (split_cmd->parsed()) return cmd_split(config, annotations_csv, out);
        if (augment_cmd->parsed()) {
            if (!audio.empty()) config.background_root = audio;
            if (!annotations_csv.empty()) config.background_meta = annotations_csv;
            return cmd_augment(config, train_audio, labels, out);
        }
        if (detect_cmd->parsed()) {
            if (audio.empty() && ingest.empty())
                throw error(errc::invalid_config, "detect needs --audio or --ingest");
            return cmd_detect(config, audio, ingest, out);
        }
        if (evald_cmd->parsed()) return cmd_eval_detections(config, gt_csv, pred_csv, out);
        if (evalw_cmd->parsed()) return cmd_eval_windows(config, gt_csv, pred_csv, window_mode_flag, out);
        if (calibrate_cmd->parsed()) return cmd_calibrate(config, gt_csv, pred_csv, with_svg, out);
        if (evalc_cmd->parsed()) return cmd_eval_classifier(config, gt_csv, pred_csv, classes_file, out);
        if (compare_cmd->parsed()) return cmd_compare(config, old_json, new_json, out);
        return kExitValidation;
    } catch (const error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == errc::invalid_config ? kExitValidation : kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
