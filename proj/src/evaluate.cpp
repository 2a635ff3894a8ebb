#include "songsieve/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "songsieve/error.hpp"

namespace songsieve {

namespace {

/// Stable ordering of prediction indices by descending confidence; ties keep
/// input order so results never depend on the sort implementation.
std::vector<std::size_t> by_confidence_desc(const std::vector<Detection>& preds) {
    std::vector<std::size_t> order(preds.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return preds[a].confidence > preds[b].confidence;
    });
    return order;
}

double overlap_duration(double a_start, double a_end, double b_start, double b_end) {
    return std::max(0.0, std::min(a_end, b_end) - std::max(a_start, b_start));
}

}  // namespace

double interval_iou(double a_start, double a_end, double b_start, double b_end) {
    const double inter = overlap_duration(a_start, a_end, b_start, b_end);
    if (inter <= 0.0) return 0.0;
    const double uni = (a_end - a_start) + (b_end - b_start) - inter;
    return uni > 0.0 ? inter / uni : 0.0;
}

MatchResult match_detections(const std::vector<Detection>& preds,
                             const std::vector<Annotation>& gts, double iou_min) {
    MatchResult result;
    std::vector<bool> gt_taken(gts.size(), false);

    for (std::size_t pi : by_confidence_desc(preds)) {
        const Detection& det = preds[pi];
        double best_iou = 0.0;
        std::size_t best_gt = gts.size();
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            if (gt_taken[gi] || gts[gi].source_id != det.source_id) continue;
            const double iou = interval_iou(det.start_s, det.end_s, gts[gi].start_s, gts[gi].end_s);
            if (iou >= iou_min && iou > best_iou) {
                best_iou = iou;
                best_gt = gi;
            }
        }
        if (best_gt < gts.size()) {
            gt_taken[best_gt] = true;
            result.pairs.push_back({det, gts[best_gt], best_iou});
        } else {
            result.unmatched_detections.push_back(det);
        }
    }
    for (std::size_t gi = 0; gi < gts.size(); ++gi)
        if (!gt_taken[gi]) result.unmatched_annotations.push_back(gts[gi]);

    result.tp = static_cast<long>(result.pairs.size());
    result.fp = static_cast<long>(result.unmatched_detections.size());
    result.fn = static_cast<long>(result.unmatched_annotations.size());
    return result;
}

MatchResult fixed_window_eval(const std::vector<Detection>& preds,
                              const std::vector<Annotation>& gts, double window_s,
                              WindowMode mode, double file_duration_s, double min_overlap_s) {
    if (file_duration_s <= 0.0 || window_s <= 0.0)
        throw error(errc::duration_unknown, "file duration and window length must be positive");

    std::set<std::string> files;
    for (const Detection& d : preds) files.insert(d.source_id);
    for (const Annotation& a : gts) files.insert(a.source_id);
    if (files.empty()) files.insert("");  // degenerate empty-input case: one file of all-TN windows

    const long n_windows = static_cast<long>(std::ceil(file_duration_s / window_s));
    MatchResult result;
    if (mode == WindowMode::window) result.tn = 0;

    for (const std::string& file : files) {
        std::vector<bool> gt_pos(n_windows, false);
        std::vector<bool> pred_pos(n_windows, false);
        for (long w = 0; w < n_windows; ++w) {
            const double lo = w * window_s;
            const double hi = std::min(file_duration_s, lo + window_s);
            for (const Annotation& a : gts)
                if (a.source_id == file && overlap_duration(a.start_s, a.end_s, lo, hi) > min_overlap_s) {
                    gt_pos[w] = true;
                    break;
                }
            for (const Detection& d : preds)
                if (d.source_id == file && overlap_duration(d.start_s, d.end_s, lo, hi) > min_overlap_s) {
                    pred_pos[w] = true;
                    break;
                }
        }

        if (mode == WindowMode::window) {
            for (long w = 0; w < n_windows; ++w) {
                if (gt_pos[w] && pred_pos[w]) ++result.tp;
                else if (!gt_pos[w] && pred_pos[w]) ++result.fp;
                else if (gt_pos[w] && !pred_pos[w]) ++result.fn;
                else ++*result.tn;
            }
            continue;
        }

        // annotation mode: an annotation is correct if any predicted-positive
        // window overlaps it, even when it spans several windows
        for (const Annotation& a : gts) {
            if (a.source_id != file) continue;
            bool hit = false;
            for (long w = 0; w < n_windows && !hit; ++w) {
                const double lo = w * window_s;
                const double hi = std::min(file_duration_s, lo + window_s);
                hit = pred_pos[w] && overlap_duration(a.start_s, a.end_s, lo, hi) > 0.0;
            }
            if (hit) ++result.tp;
            else {
                ++result.fn;
                result.unmatched_annotations.push_back(a);
            }
        }
        for (long w = 0; w < n_windows; ++w) {
            if (!pred_pos[w]) continue;
            const double lo = w * window_s;
            const double hi = std::min(file_duration_s, lo + window_s);
            bool touches_gt = false;
            for (const Annotation& a : gts)
                if (a.source_id == file && overlap_duration(a.start_s, a.end_s, lo, hi) > 0.0) {
                    touches_gt = true;
                    break;
                }
            if (!touches_gt) ++result.fp;
        }
    }
    return result;
}

DetectionMetrics detection_metrics(const MatchResult& match) {
    DetectionMetrics m;
    m.tp = match.tp;
    m.fp = match.fp;
    m.fn = match.fn;
    m.tn = match.tn;

    if (match.tp + match.fp > 0) {
        m.precision = static_cast<double>(match.tp) / (match.tp + match.fp);
    } else {
        m.precision_undefined = true;
    }
    if (match.tp + match.fn > 0) {
        m.recall = static_cast<double>(match.tp) / (match.tp + match.fn);
    } else {
        m.recall_undefined = true;
    }
    if (m.precision + m.recall > 0.0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    if (match.tn.has_value()) {
        const long total = match.tp + match.fp + match.fn + *match.tn;
        m.accuracy = total > 0 ? static_cast<double>(match.tp + *match.tn) / total : 0.0;
    }
    return m;
}

double percentage_change(double new_value, double old_value) {
    if (old_value == 0.0) throw error(errc::division_by_zero, "old value is zero");
    return (new_value - old_value) / old_value * 100.0;
}

long percentage_change_rounded(double new_value, double old_value) {
    return std::lround(percentage_change(new_value, old_value));
}

double idx_pred_ann(long n_predictions, long n_annotations) {
    if (n_annotations <= 0) throw error(errc::no_annotations, "no annotations to compare against");
    return static_cast<double>(n_predictions) / n_annotations;
}

std::vector<std::pair<std::string, std::string>> align_predictions_to_annotations(
    const std::vector<Detection>& preds, const std::vector<Annotation>& gts,
    double confidence_threshold, const std::string& fallback_label) {
    std::vector<std::pair<std::string, std::string>> items;
    items.reserve(gts.size());
    for (const Annotation& gt : gts) {
        const Detection* best = nullptr;
        for (const Detection& d : preds) {
            if (d.source_id != gt.source_id || d.confidence < confidence_threshold) continue;
            if (overlap_duration(d.start_s, d.end_s, gt.start_s, gt.end_s) <= 0.0) continue;
            if (best == nullptr || d.confidence > best->confidence) best = &d;
        }
        items.emplace_back(gt.label, best && best->label ? *best->label : fallback_label);
    }
    return items;
}

ClassificationReport classification_report(
    const std::vector<std::pair<std::string, std::string>>& items,
    const std::vector<std::string>& class_order, std::optional<long> n_predictions) {
    const std::set<std::string> classes(class_order.begin(), class_order.end());
    const std::set<std::string> catch_alls = {"Bird", "Background"};
    for (const auto& [gt, pred] : items) {
        if (!classes.count(gt))
            throw error(errc::unknown_class, "ground-truth label '" + gt + "' not in class order");
        if (!classes.count(pred) && !catch_alls.count(pred))
            throw error(errc::unknown_class, "predicted label '" + pred + "' not in class order");
    }

    ClassificationReport report;
    report.n_items = static_cast<long>(items.size());

    long correct = 0;
    for (const auto& [gt, pred] : items)
        if (gt == pred) ++correct;
    report.accuracy = items.empty() ? 0.0 : static_cast<double>(correct) / items.size();

    for (const std::string& cls : class_order) {
        ClassificationReport::Row row;
        row.label = cls;
        long tp = 0, pred_count = 0;
        for (const auto& [gt, pred] : items) {
            if (gt == cls) ++row.support;
            if (pred == cls) {
                ++pred_count;
                if (gt == cls) ++tp;
            }
        }
        row.precision = pred_count > 0 ? static_cast<double>(tp) / pred_count : 0.0;
        row.recall = row.support > 0 ? static_cast<double>(tp) / row.support : 0.0;
        row.f1 = row.precision + row.recall > 0.0
                     ? 2.0 * row.precision * row.recall / (row.precision + row.recall)
                     : 0.0;
        report.per_class.push_back(std::move(row));
    }

    report.macro_avg.label = "macro avg";
    report.weighted_avg.label = "weighted avg";
    report.macro_avg.support = report.weighted_avg.support = report.n_items;
    long total_support = 0;
    for (const auto& row : report.per_class) {
        report.macro_avg.precision += row.precision;
        report.macro_avg.recall += row.recall;
        report.macro_avg.f1 += row.f1;
        report.weighted_avg.precision += row.precision * row.support;
        report.weighted_avg.recall += row.recall * row.support;
        report.weighted_avg.f1 += row.f1 * row.support;
        total_support += row.support;
    }
    if (!report.per_class.empty()) {
        report.macro_avg.precision /= report.per_class.size();
        report.macro_avg.recall /= report.per_class.size();
        report.macro_avg.f1 /= report.per_class.size();
    }
    if (total_support > 0) {
        report.weighted_avg.precision /= total_support;
        report.weighted_avg.recall /= total_support;
        report.weighted_avg.f1 /= total_support;
    }

    if (n_predictions.has_value()) {
        report.n_predictions = *n_predictions;
    } else {
        for (const auto& [gt, pred] : items) {
            (void)gt;
            if (pred != "Background") ++report.n_predictions;
        }
    }
    report.idx_pred_ann =
        report.n_items > 0 ? idx_pred_ann(report.n_predictions, report.n_items) : 0.0;
    return report;
}

ConfusionMatrix confusion_matrix(const std::vector<std::pair<std::string, std::string>>& items,
                                 const std::vector<std::string>& class_order,
                                 MatrixNormalize normalize) {
    ConfusionMatrix matrix;
    matrix.row_labels = class_order;
    matrix.col_labels = class_order;

    const std::set<std::string> classes(class_order.begin(), class_order.end());
    for (const std::string extra : {"Bird", "Background"}) {
        if (classes.count(extra)) continue;
        for (const auto& [gt, pred] : items) {
            (void)gt;
            if (pred == extra) {
                matrix.col_labels.push_back(extra);
                break;
            }
        }
    }

    std::map<std::string, std::size_t> row_index, col_index;
    for (std::size_t i = 0; i < matrix.row_labels.size(); ++i) row_index[matrix.row_labels[i]] = i;
    for (std::size_t i = 0; i < matrix.col_labels.size(); ++i) col_index[matrix.col_labels[i]] = i;

    matrix.values.assign(matrix.row_labels.size(),
                         std::vector<double>(matrix.col_labels.size(), 0.0));
    for (const auto& [gt, pred] : items) {
        const auto r = row_index.find(gt);
        const auto c = col_index.find(pred);
        if (r == row_index.end())
            throw error(errc::unknown_class, "ground-truth label '" + gt + "' not in class order");
        if (c == col_index.end())
            throw error(errc::unknown_class, "predicted label '" + pred + "' not in class order");
        matrix.values[r->second][c->second] += 1.0;
    }

    if (normalize == MatrixNormalize::rows) {
        for (auto& row : matrix.values) {
            const double sum = std::accumulate(row.begin(), row.end(), 0.0);
            if (sum > 0.0)
                for (double& v : row) v /= sum;
        }
    }
    return matrix;
}

double average_precision_50(const std::vector<Detection>& preds,
                            const std::vector<Annotation>& gts, double iou_min) {
    if (preds.empty() || gts.empty()) return 0.0;

    // greedy matching in descending confidence order; each detection takes the
    // best still-free ground truth at IoU >= iou_min
    const std::vector<std::size_t> order = by_confidence_desc(preds);
    std::vector<bool> gt_taken(gts.size(), false);
    std::vector<bool> is_tp;
    is_tp.reserve(preds.size());
    for (std::size_t pi : order) {
        const Detection& det = preds[pi];
        double best_iou = 0.0;
        std::size_t best_gt = gts.size();
        for (std::size_t gi = 0; gi < gts.size(); ++gi) {
            if (gt_taken[gi] || gts[gi].source_id != det.source_id) continue;
            const double iou = interval_iou(det.start_s, det.end_s, gts[gi].start_s, gts[gi].end_s);
            if (iou >= iou_min && iou > best_iou) {
                best_iou = iou;
                best_gt = gi;
            }
        }
        if (best_gt < gts.size()) {
            gt_taken[best_gt] = true;
            is_tp.push_back(true);
        } else {
            is_tp.push_back(false);
        }
    }

    // the curve is swept over distinct confidence thresholds, so tied
    // detections contribute a single PR point as a group
    const double n_gt = static_cast<double>(gts.size());
    std::vector<double> precision, recall;
    long tp = 0;
    for (std::size_t i = 0; i < is_tp.size(); ++i) {
        if (is_tp[i]) ++tp;
        const bool group_end =
            i + 1 == is_tp.size() || preds[order[i + 1]].confidence != preds[order[i]].confidence;
        if (group_end) {
            precision.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
            recall.push_back(static_cast<double>(tp) / n_gt);
        }
    }

    // all-points interpolation: make the precision envelope monotone
    // non-increasing from the right, then integrate over recall steps
    for (std::size_t i = precision.size(); i-- > 1;)
        precision[i - 1] = std::max(precision[i - 1], precision[i]);

    double ap = 0.0;
    double prev_recall = 0.0;
    for (std::size_t i = 0; i < precision.size(); ++i) {
        ap += (recall[i] - prev_recall) * precision[i];
        prev_recall = recall[i];
    }
    return ap;
}

}  // namespace songsieve
