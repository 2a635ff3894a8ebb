#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "songsieve/annotations.hpp"
#include "songsieve/detect.hpp"
#include "songsieve/rng.hpp"

namespace songsieve {

/// One detection scored against ground truth: its confidence, the log-odds
/// transform, and whether it matched an annotation at the evaluation IoU.
struct CalibrationSample {
    double confidence = 0.0;
    double logit = 0.0;
    bool correct = false;
};

/// Fitted correctness model: P(correct) = sigmoid(intercept + slope * logit).
struct LogisticModel {
    double intercept = 0.0;
    double slope = 0.0;
    long n_samples = 0;
    bool converged = false;

    double predict(double logit) const;
};

/// One row of the probability-threshold table: the target correctness
/// probability, the logit and confidence scores that achieve it, and the
/// fraction of true positives lost by filtering at that confidence.
struct CalibrationTable {
    struct Row {
        double probability_threshold = 0.0;
        double logit_score = 0.0;
        double confidence_score = 0.0;
        double tp_loss_percent = 0.0;
    };
    std::vector<Row> rows;
    long baseline_tp = 0;  // TP count with no confidence filtering
};

/// Per-grid-point bootstrap prediction band.
struct BootstrapBand {
    std::vector<double> logit_grid;
    std::vector<double> lower;
    std::vector<double> upper;
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

/// Log-odds transform; p is clamped into [1e-6, 1-1e-6] first so detectors
/// that emit exactly 0 or 1 never produce infinite logits.
double confidence_to_logit(double p);

CalibrationSample make_calibration_sample(double confidence, bool correct);

/// Build samples by greedy-matching detections against ground truth at
/// iou_min; matched detections are correct, the rest incorrect.
std::vector<CalibrationSample> collect_calibration_samples(const std::vector<Detection>& preds,
                                                           const std::vector<Annotation>& gts,
                                                           double iou_min = 0.1);

/// Maximum-likelihood logistic fit of correct ~ intercept + slope * logit via
/// iteratively reweighted least squares (<= 100 iterations, gradient
/// tolerance 1e-8, ridge 1e-6 to survive perfect separation).
///
/// Throws: DegenerateData when only one outcome class is present.
LogisticModel fit_logistic(const std::vector<CalibrationSample>& samples);

/// Percentile prediction band over a fixed logit grid from n_boot seeded
/// resample-and-refit rounds. Replicate r uses seed + r, so parallel
/// evaluation cannot change results.
///
/// Throws: DegenerateData when more than half the resamples are degenerate.
BootstrapBand bootstrap_band(const std::vector<CalibrationSample>& samples, int n_boot = 1000,
                             double level = 0.90, std::uint64_t seed = kDefaultSeed,
                             std::vector<double> logit_grid = {});

/// Invert the model at p_target: returns (logit*, confidence*) with
/// confidence* = sigmoid(logit*).
///
/// Throws: NonMonotoneModel when slope <= 0.
std::pair<double, double> threshold_for_probability(const LogisticModel& model, double p_target);

/// Round a confidence threshold the way the operational threshold is quoted:
/// two decimals, half away from zero (0.144... -> 0.14, 0.145 -> 0.15).
double round_confidence_2dp(double confidence);

/// TP-loss table over the probability targets: each row filters detections at
/// the inverted confidence and reports 100 * (1 - TP(filtered)/TP(all)).
CalibrationTable tp_loss_table(const std::vector<Detection>& preds,
                               const std::vector<Annotation>& gts, const LogisticModel& model,
                               const std::vector<double>& p_targets = {0.40, 0.60, 0.80, 0.95},
                               double iou_min = 0.1);

}  // namespace songsieve
