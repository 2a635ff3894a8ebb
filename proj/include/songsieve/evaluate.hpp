#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "songsieve/annotations.hpp"
#include "songsieve/detect.hpp"

namespace songsieve {

/// Outcome of matching detections to ground truth. tn is only populated by
/// fixed-window evaluation; segment matching has no countable negatives.
struct MatchResult {
    long tp = 0;
    long fp = 0;
    long fn = 0;
    std::optional<long> tn;

    struct Pair {
        Detection detection;
        Annotation annotation;
        double iou = 0.0;
    };
    std::vector<Pair> pairs;  // one entry per TP
    std::vector<Detection> unmatched_detections;
    std::vector<Annotation> unmatched_annotations;
};

/// Precision/recall/F1 plus accuracy when true negatives exist. Ratios with a
/// 0/0 numerator are reported as 0 and flagged.
struct DetectionMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::optional<double> accuracy;
    long tp = 0, fp = 0, fn = 0;
    std::optional<long> tn;
    bool precision_undefined = false;
    bool recall_undefined = false;
};

struct ClassificationReport {
    struct Row {
        std::string label;
        double precision = 0.0;
        double recall = 0.0;
        double f1 = 0.0;
        long support = 0;
    };
    std::vector<Row> per_class;
    double accuracy = 0.0;
    Row macro_avg;     // label "macro avg", support = total items
    Row weighted_avg;  // label "weighted avg"
    long n_items = 0;
    long n_predictions = 0;
    double idx_pred_ann = 0.0;
};

/// Temporal intersection-over-union of two [start, end) intervals;
/// 0 when disjoint.
double interval_iou(double a_start, double a_end, double b_start, double b_end);

/// Greedy one-to-one matching per file: predictions in descending confidence
/// order each take the unmatched ground-truth interval with the highest
/// IoU >= iou_min. Leftover predictions are FP, leftover annotations FN.
MatchResult match_detections(const std::vector<Detection>& preds,
                             const std::vector<Annotation>& gts, double iou_min = 0.1);

enum class WindowMode {
    window,      // per-window TP/FP/FN/TN over the fixed grid
    annotation,  // per-annotation any-overlap rule; TN absent
};

/// Fixed-interval evaluation for window-based detectors (3 s by default).
/// In window mode a window is GT-positive iff an annotation overlaps it by
/// more than min_overlap_s, and prediction-positive likewise. In annotation
/// mode each annotation is TP iff any prediction-positive window touches it,
/// and prediction-positive windows touching no annotation are FP.
///
/// Throws: DurationUnknown when file_duration_s is not positive.
MatchResult fixed_window_eval(const std::vector<Detection>& preds,
                              const std::vector<Annotation>& gts, double window_s = 3.0,
                              WindowMode mode = WindowMode::window,
                              double file_duration_s = 60.0, double min_overlap_s = 0.0);

DetectionMetrics detection_metrics(const MatchResult& match);

/// (new - old)/old * 100.  Throws DivisionByZero when old == 0.
double percentage_change(double new_value, double old_value);

/// Table rounding for percentage_change: nearest integer, half away from zero.
long percentage_change_rounded(double new_value, double old_value);

/// Predictions per annotation; > 1 flags overestimation.
/// Throws NoAnnotations when n_annotations == 0.
double idx_pred_ann(long n_predictions, long n_annotations);

/// Pair each ground-truth annotation with the label of the highest-confidence
/// overlapping prediction at or above `confidence_threshold`; annotations with
/// no overlapping prediction are labeled `fallback_label`. Returns
/// (gt_label, predicted_label) per annotation, in annotation order.
std::vector<std::pair<std::string, std::string>> align_predictions_to_annotations(
    const std::vector<Detection>& preds, const std::vector<Annotation>& gts,
    double confidence_threshold = 0.1, const std::string& fallback_label = "Background");

/// Per-class precision/recall/F1/support plus accuracy, macro and weighted
/// averages. `items` holds (gt_label, predicted_label) pairs; every gt label
/// must be in class_order, predictions may additionally use the "Bird" and
/// "Background" catch-alls. n_predictions defaults to the number of
/// non-Background predictions when not supplied.
///
/// Throws: UnknownClass.
ClassificationReport classification_report(
    const std::vector<std::pair<std::string, std::string>>& items,
    const std::vector<std::string>& class_order,
    std::optional<long> n_predictions = std::nullopt);

enum class MatrixNormalize { none, rows };

/// Confusion matrix over class_order rows (ground truth) and columns
/// (predictions; "Bird"/"Background" columns are appended when present).
/// Row normalization divides by row sums, leaving zero rows at zero.
struct ConfusionMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    std::vector<std::vector<double>> values;
};

ConfusionMatrix confusion_matrix(const std::vector<std::pair<std::string, std::string>>& items,
                                 const std::vector<std::string>& class_order,
                                 MatrixNormalize normalize = MatrixNormalize::none);

/// Single-class average precision at IoU >= 0.5: greedy matching in
/// descending confidence order, all-points interpolated area under the
/// precision-recall curve.
double average_precision_50(const std::vector<Detection>& preds,
                            const std::vector<Annotation>& gts, double iou_min = 0.5);

}  // namespace songsieve
