#include "songsieve/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "songsieve/error.hpp"
#include "songsieve/evaluate.hpp"

namespace songsieve {

namespace {

constexpr double kClampLo = 1e-6;
constexpr double kClampHi = 1.0 - 1e-6;
constexpr double kRidge = 1e-6;
constexpr int kMaxIterations = 100;
constexpr double kGradientTol = 1e-8;

/// Linear-interpolated quantile of a sorted vector (type-7, the common
/// spreadsheet/NumPy default).
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

double LogisticModel::predict(double logit) const { return sigmoid(intercept + slope * logit); }

double confidence_to_logit(double p) {
    const double clamped = std::clamp(p, kClampLo, kClampHi);
    return std::log(clamped / (1.0 - clamped));
}

CalibrationSample make_calibration_sample(double confidence, bool correct) {
    return {confidence, confidence_to_logit(confidence), correct};
}

std::vector<CalibrationSample> collect_calibration_samples(const std::vector<Detection>& preds,
                                                           const std::vector<Annotation>& gts,
                                                           double iou_min) {
    const MatchResult match = match_detections(preds, gts, iou_min);
    std::vector<CalibrationSample> samples;
    samples.reserve(preds.size());
    for (const auto& pair : match.pairs)
        samples.push_back(make_calibration_sample(pair.detection.confidence, true));
    for (const Detection& d : match.unmatched_detections)
        samples.push_back(make_calibration_sample(d.confidence, false));
    return samples;
}

LogisticModel fit_logistic(const std::vector<CalibrationSample>& samples) {
    long positives = 0;
    for (const CalibrationSample& s : samples)
        if (s.correct) ++positives;
    if (samples.size() < 2 || positives == 0 || positives == static_cast<long>(samples.size()))
        throw error(errc::degenerate_data, "need both correct and incorrect samples to fit");

    LogisticModel model;
    model.n_samples = static_cast<long>(samples.size());

    double b0 = 0.0, b1 = 0.0;
    for (int iter = 0; iter < kMaxIterations; ++iter) {
        // penalized score and Fisher information for the 2-parameter model
        double g0 = -kRidge * b0, g1 = -kRidge * b1;
        double h00 = kRidge, h01 = 0.0, h11 = kRidge;
        for (const CalibrationSample& s : samples) {
            const double mu = sigmoid(b0 + b1 * s.logit);
            const double r = (s.correct ? 1.0 : 0.0) - mu;
            const double w = mu * (1.0 - mu);
            g0 += r;
            g1 += r * s.logit;
            h00 += w;
            h01 += w * s.logit;
            h11 += w * s.logit * s.logit;
        }
        if (std::max(std::abs(g0), std::abs(g1)) < kGradientTol) {
            model.converged = true;
            break;
        }
        const double det = h00 * h11 - h01 * h01;
        b0 += (h11 * g0 - h01 * g1) / det;
        b1 += (h00 * g1 - h01 * g0) / det;
    }
    model.intercept = b0;
    model.slope = b1;
    return model;
}

BootstrapBand bootstrap_band(const std::vector<CalibrationSample>& samples, int n_boot,
                             double level, std::uint64_t seed, std::vector<double> logit_grid) {
    if (samples.empty()) throw error(errc::degenerate_data, "no samples to resample");
    if (logit_grid.empty()) {
        double lo = samples.front().logit, hi = samples.front().logit;
        for (const CalibrationSample& s : samples) {
            lo = std::min(lo, s.logit);
            hi = std::max(hi, s.logit);
        }
        constexpr int kGridPoints = 101;
        for (int i = 0; i < kGridPoints; ++i)
            logit_grid.push_back(lo + (hi - lo) * i / (kGridPoints - 1));
    }

    // replicate r draws from seed + r: refits are order-independent, so a
    // parallel map over replicates gives identical bands
    std::vector<std::vector<double>> curves;
    curves.reserve(static_cast<std::size_t>(n_boot));
    int degenerate = 0;
    for (int rep = 0; rep < n_boot; ++rep) {
        Rng rng(seed + static_cast<std::uint64_t>(rep));
        std::vector<CalibrationSample> resample;
        resample.reserve(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i)
            resample.push_back(samples[rng.below(samples.size())]);
        try {
            const LogisticModel model = fit_logistic(resample);
            std::vector<double> curve(logit_grid.size());
            for (std::size_t i = 0; i < logit_grid.size(); ++i) curve[i] = model.predict(logit_grid[i]);
            curves.push_back(std::move(curve));
        } catch (const error& e) {
            if (e.code() != errc::degenerate_data) throw;
            ++degenerate;
        }
    }
    if (degenerate * 2 > n_boot)
        throw error(errc::degenerate_data,
                    std::to_string(degenerate) + " of " + std::to_string(n_boot) + " resamples degenerate");

    BootstrapBand band;
    band.logit_grid = std::move(logit_grid);
    band.lower.resize(band.logit_grid.size());
    band.upper.resize(band.logit_grid.size());
    const double alpha = (1.0 - level) / 2.0;
    std::vector<double> column(curves.size());
    for (std::size_t i = 0; i < band.logit_grid.size(); ++i) {
        for (std::size_t c = 0; c < curves.size(); ++c) column[c] = curves[c][i];
        std::sort(column.begin(), column.end());
        band.lower[i] = quantile_sorted(column, alpha);
        band.upper[i] = quantile_sorted(column, 1.0 - alpha);
    }
    return band;
}

std::pair<double, double> threshold_for_probability(const LogisticModel& model, double p_target) {
    if (model.slope <= 0.0)
        throw error(errc::non_monotone_model, "slope must be positive for threshold inversion");
    if (p_target <= 0.0 || p_target >= 1.0)
        throw error(errc::out_of_range, "probability target must lie in (0,1)");
    const double logit_star = (std::log(p_target / (1.0 - p_target)) - model.intercept) / model.slope;
    return {logit_star, sigmoid(logit_star)};
}

double round_confidence_2dp(double confidence) {
    return std::floor(confidence * 100.0 + 0.5) / 100.0;
}

CalibrationTable tp_loss_table(const std::vector<Detection>& preds,
                               const std::vector<Annotation>& gts, const LogisticModel& model,
                               const std::vector<double>& p_targets, double iou_min) {
    CalibrationTable table;
    table.baseline_tp = match_detections(preds, gts, iou_min).tp;

    std::vector<double> targets = p_targets;
    std::sort(targets.begin(), targets.end());
    for (double p : targets) {
        const auto [logit_star, confidence_star] = threshold_for_probability(model, p);
        const long tp_at =
            match_detections(filter_by_confidence(preds, confidence_star), gts, iou_min).tp;
        CalibrationTable::Row row;
        row.probability_threshold = p;
        row.logit_score = logit_star;
        row.confidence_score = confidence_star;
        row.tp_loss_percent =
            table.baseline_tp > 0
                ? (1.0 - static_cast<double>(tp_at) / static_cast<double>(table.baseline_tp)) * 100.0
                : 0.0;
        table.rows.push_back(row);
    }
    return table;
}

}  // namespace songsieve
