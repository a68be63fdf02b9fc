#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "lahja/errors.hpp"

namespace lahja {

// Clipping floor for log loss; -ln(kLogLossEps) = 34.53877639...
inline constexpr double kLogLossEps = 1e-15;

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
};

struct BasicMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    bool degenerate_precision = false;  // tp + fp == 0
    bool degenerate_recall = false;     // tp + fn == 0
};

inline ConfusionMatrix confusion(const std::vector<int>& y_true, const std::vector<int>& y_pred) {
    if (y_true.size() != y_pred.size()) throw DomainError("confusion: length mismatch");
    if (y_true.empty()) throw DomainError("confusion: empty input");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        if (y_true[i] == 1)
            (y_pred[i] == 1 ? cm.tp : cm.fn)++;
        else
            (y_pred[i] == 1 ? cm.fp : cm.tn)++;
    }
    return cm;
}

/// Accuracy, precision, recall, F1. Zero-denominator precision/recall are
/// reported as 0 with the matching degenerate flag set.
inline BasicMetrics basic_metrics(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DomainError("basic_metrics: empty confusion matrix");
    BasicMetrics m;
    const auto tp = static_cast<double>(cm.tp);
    m.accuracy = (tp + static_cast<double>(cm.tn)) / static_cast<double>(cm.total());
    if (cm.tp + cm.fp > 0)
        m.precision = tp / static_cast<double>(cm.tp + cm.fp);
    else
        m.degenerate_precision = true;
    if (cm.tp + cm.fn > 0)
        m.recall = tp / static_cast<double>(cm.tp + cm.fn);
    else
        m.degenerate_recall = true;
    if (m.precision + m.recall > 0.0)
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    return m;
}

enum class LogLossMode { Probability, HardLabel };

/// Mean cross-entropy with probabilities clipped to [eps, 1-eps]. In hard
/// mode the probability is first replaced by the 0/1 predicted label, which
/// makes the loss (1 - accuracy) * (-ln eps) up to the clipping residue.
inline double log_loss(const std::vector<int>& y_true, const std::vector<double>& p,
                       LogLossMode mode = LogLossMode::Probability,
                       double eps = kLogLossEps) {
    if (y_true.size() != p.size()) throw DomainError("log_loss: length mismatch");
    if (y_true.empty()) throw DomainError("log_loss: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        double pi = p[i];
        if (mode == LogLossMode::HardLabel) pi = pi > 0.5 ? 1.0 : 0.0;
        // probability assigned to the true label; forming it before the clip
        // keeps the two clipped branches exactly symmetric
        double q = y_true[i] == 1 ? pi : 1.0 - pi;
        sum -= std::log(std::clamp(q, eps, 1.0 - eps));
    }
    return sum / static_cast<double>(p.size());
}

/// Chance-corrected agreement (p_o - p_e) / (1 - p_e); 0 when p_e = 1.
inline double cohen_kappa(const ConfusionMatrix& cm) {
    const double n = static_cast<double>(cm.total());
    if (n == 0.0) throw DomainError("cohen_kappa: empty confusion matrix");
    const double tp = cm.tp, fp = cm.fp, fn = cm.fn, tn = cm.tn;
    double po = (tp + tn) / n;
    double pe = ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (n * n);
    if (pe == 1.0) return 0.0;
    return (po - pe) / (1.0 - pe);
}

/// Matthews correlation; 0 when any marginal factor vanishes.
inline double mcc(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw DomainError("mcc: empty confusion matrix");
    const double tp = cm.tp, fp = cm.fp, fn = cm.fn, tn = cm.tn;
    double f1 = tp + fp, f2 = tp + fn, f3 = tn + fp, f4 = tn + fn;
    if (f1 == 0.0 || f2 == 0.0 || f3 == 0.0 || f4 == 0.0) return 0.0;
    return (tp * tn - fp * fn) / std::sqrt(f1 * f2 * f3 * f4);
}

struct RocCurve {
    std::vector<std::pair<double, double>> points;  // (fpr, tpr), (0,0) .. (1,1)
    double auc = 0.0;
};

/// Threshold sweep over the distinct score values, descending; tied scores
/// collapse into one step. AUC by the trapezoid rule.
inline RocCurve roc_curve(const std::vector<int>& y_true, const std::vector<double>& scores) {
    if (y_true.size() != scores.size()) throw DomainError("roc_curve: length mismatch");
    std::size_t pos = 0, neg = 0;
    for (int v : y_true) (v == 1 ? pos : neg)++;
    if (pos == 0 || neg == 0) throw DomainError("roc_curve: needs both classes");

    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });

    RocCurve roc;
    roc.points.emplace_back(0.0, 0.0);
    std::size_t tp = 0, fp = 0;
    std::size_t i = 0;
    while (i < order.size()) {
        double s = scores[order[i]];
        while (i < order.size() && scores[order[i]] == s) {
            (y_true[order[i]] == 1 ? tp : fp)++;
            ++i;
        }
        roc.points.emplace_back(static_cast<double>(fp) / static_cast<double>(neg),
                                static_cast<double>(tp) / static_cast<double>(pos));
    }
    for (std::size_t k = 1; k < roc.points.size(); ++k) {
        auto [x0, y0] = roc.points[k - 1];
        auto [x1, y1] = roc.points[k];
        roc.auc += (x1 - x0) * (y0 + y1) / 2.0;
    }
    return roc;
}

}  // namespace lahja
