#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lahja/metrics.hpp"
#include "lahja/rng.hpp"

#include "benchmark_rows.hpp"

using namespace lahja;

namespace {

// (tp, fp, fn, tn) from accuracy/precision/recall under balanced classes,
// scaled to integer counts. The scale is large enough that rounding error
// stays far below the checking tolerances.
ConfusionMatrix reconstruct(double precision, double recall, double scale = 1e7) {
    double tp = recall * 0.5;
    double fp = tp * (1.0 - precision) / precision;
    double fn = 0.5 - tp;
    double tn = 0.5 - fp;
    ConfusionMatrix cm;
    cm.tp = static_cast<std::size_t>(std::llround(tp * scale));
    cm.fp = static_cast<std::size_t>(std::llround(fp * scale));
    cm.fn = static_cast<std::size_t>(std::llround(fn * scale));
    cm.tn = static_cast<std::size_t>(std::llround(tn * scale));
    return cm;
}

}  // namespace

TEST(Confusion, Tally) {
    ConfusionMatrix cm = confusion({1, 1, 0, 0}, {1, 0, 0, 1});
    EXPECT_EQ(cm.tp, 1u);
    EXPECT_EQ(cm.fn, 1u);
    EXPECT_EQ(cm.tn, 1u);
    EXPECT_EQ(cm.fp, 1u);

    ConfusionMatrix perfect = confusion({1, 0, 1}, {1, 0, 1});
    EXPECT_EQ(perfect.fp, 0u);
    EXPECT_EQ(perfect.fn, 0u);

    ConfusionMatrix allpos = confusion({1, 0, 1, 0}, {1, 1, 1, 1});
    EXPECT_EQ(allpos.fp, 2u);
    EXPECT_EQ(allpos.tn, 0u);

    EXPECT_THROW(confusion({1}, {1, 0}), DomainError);
    EXPECT_THROW(confusion({}, {}), DomainError);
}

TEST(BasicMetrics, ReconstructedBenchmarkRow) {
    // the multinomial (1,2) row, rebuilt from its own precision/recall
    const auto& row = lahja::bench::kRows[7];
    ConfusionMatrix cm = reconstruct(row.precision, row.recall);
    BasicMetrics m = basic_metrics(cm);
    EXPECT_NEAR(m.accuracy, row.accuracy, 1e-4);
    EXPECT_NEAR(m.precision, row.precision, 1e-4);
    EXPECT_NEAR(m.recall, row.recall, 1e-4);
    EXPECT_NEAR(m.f1, row.f1, 1e-4);
}

TEST(BasicMetrics, DegenerateConventions) {
    ConfusionMatrix only_tp;
    only_tp.tp = 1;
    BasicMetrics m = basic_metrics(only_tp);
    EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
    EXPECT_DOUBLE_EQ(m.precision, 1.0);
    EXPECT_DOUBLE_EQ(m.recall, 1.0);
    EXPECT_DOUBLE_EQ(m.f1, 1.0);

    ConfusionMatrix no_predicted_pos;
    no_predicted_pos.fn = 2;
    no_predicted_pos.tn = 3;
    BasicMetrics d = basic_metrics(no_predicted_pos);
    EXPECT_DOUBLE_EQ(d.precision, 0.0);
    EXPECT_TRUE(d.degenerate_precision);
    EXPECT_DOUBLE_EQ(d.f1, 0.0);
}

TEST(BasicMetrics, F1IsTheHarmonicMean) {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        ConfusionMatrix cm;
        cm.tp = 1 + rng.below(50);
        cm.fp = rng.below(50);
        cm.fn = rng.below(50);
        cm.tn = rng.below(50);
        BasicMetrics m = basic_metrics(cm);
        EXPECT_NEAR(m.f1, 2.0 * m.precision * m.recall / (m.precision + m.recall), 1e-12);
        EXPECT_NEAR(m.accuracy,
                    static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total()),
                    1e-12);
    }
}

TEST(LogLoss, HardModeIsTheClippedErrorRate) {
    // 100000 docs, 14411 wrong: loss = 0.14411 * (-ln 1e-15) + residue
    std::vector<int> y;
    std::vector<double> p;
    for (int i = 0; i < 100000; ++i) {
        bool wrong = i < 14411;
        y.push_back(1);
        p.push_back(wrong ? 0.1 : 0.9);  // hard mode reads only the side of 0.5
    }
    double loss = log_loss(y, p, LogLossMode::HardLabel);
    EXPECT_NEAR(loss, 0.14411 * -std::log(kLogLossEps), 1e-9);
    EXPECT_NEAR(loss, 4.97743, 1e-4);  // the published value for this row
}

TEST(LogLoss, HardModeIdentityOnRandomOutcomes) {
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n = 10 + rng.below(200);
        std::vector<int> y;
        std::vector<double> p;
        std::size_t errors = 0;
        for (std::size_t i = 0; i < n; ++i) {
            int truth = static_cast<int>(rng.below(2));
            bool wrong = rng.below(4) == 0;
            y.push_back(truth);
            double correct_p = truth == 1 ? 0.8 : 0.2;
            p.push_back(wrong ? 1.0 - correct_p : correct_p);
            errors += wrong;
        }
        double loss = log_loss(y, p, LogLossMode::HardLabel);
        double rate = static_cast<double>(errors) / static_cast<double>(n);
        EXPECT_NEAR(loss, rate * -std::log(kLogLossEps), 1e-9);
    }
}

TEST(LogLoss, ProbabilityMode) {
    std::vector<int> y = {1, 0, 1, 0};
    std::vector<double> half(4, 0.5);
    EXPECT_NEAR(log_loss(y, half), std::log(2.0), 1e-12);

    std::vector<double> perfect = {1.0, 0.0, 1.0, 0.0};
    EXPECT_LT(log_loss(y, perfect), 1e-10);

    EXPECT_THROW(log_loss({1}, {0.5, 0.5}), DomainError);
}

TEST(CohenKappa, BenchmarkRowAndConventions) {
    // the logistic (1,1) row: balanced test set puts kappa at 2*acc - 1
    const auto& row = lahja::bench::kRows[0];
    ConfusionMatrix cm = reconstruct(row.precision, row.recall);
    EXPECT_NEAR(cohen_kappa(cm), row.kappa, 2e-4);
    EXPECT_NEAR(cohen_kappa(cm), 2.0 * row.accuracy - 1.0, 2e-4);

    ConfusionMatrix perfect;
    perfect.tp = 5;
    perfect.tn = 5;
    EXPECT_DOUBLE_EQ(cohen_kappa(perfect), 1.0);

    ConfusionMatrix constant;  // always predicts positive on balanced truth
    constant.tp = 5;
    constant.fp = 5;
    EXPECT_DOUBLE_EQ(cohen_kappa(constant), 0.0);
}

TEST(CohenKappa, MatchesTheDefinitionExactly) {
    Rng rng(4);
    for (int trial = 0; trial < 200; ++trial) {
        ConfusionMatrix cm;
        cm.tp = rng.below(40);
        cm.fp = rng.below(40);
        cm.fn = rng.below(40);
        cm.tn = rng.below(40);
        if (cm.total() == 0) continue;
        double n = static_cast<double>(cm.total());
        double po = (cm.tp + cm.tn) / n;
        double pe = ((cm.tp + cm.fp) * (cm.tp + cm.fn) + (cm.fn + cm.tn) * (cm.fp + cm.tn)) /
                    (n * n);
        double expected = pe == 1.0 ? 0.0 : (po - pe) / (1.0 - pe);
        EXPECT_NEAR(cohen_kappa(cm), expected, 1e-12);
    }
}

TEST(Mcc, BenchmarkRowAndSymmetry) {
    const auto& row = lahja::bench::kRows[7];  // multinomial (1,2)
    ConfusionMatrix cm = reconstruct(row.precision, row.recall);
    EXPECT_NEAR(mcc(cm), row.mcc, 2e-3);

    ConfusionMatrix perfect;
    perfect.tp = 4;
    perfect.tn = 6;
    EXPECT_DOUBLE_EQ(mcc(perfect), 1.0);

    ConfusionMatrix inverted;
    inverted.fp = 6;
    inverted.fn = 4;
    EXPECT_DOUBLE_EQ(mcc(inverted), -1.0);

    ConfusionMatrix degenerate;  // tp+fp = 0
    degenerate.fn = 2;
    degenerate.tn = 2;
    EXPECT_DOUBLE_EQ(mcc(degenerate), 0.0);
    EXPECT_GE(mcc(cm), -1.0);
    EXPECT_LE(mcc(cm), 1.0);
}

TEST(RocCurve, PerfectSeparationAndShape) {
    std::vector<int> y = {1, 1, 0, 0};
    std::vector<double> scores = {0.9, 0.8, 0.2, 0.1};
    RocCurve roc = roc_curve(y, scores);
    EXPECT_DOUBLE_EQ(roc.auc, 1.0);
    EXPECT_EQ(roc.points.front(), (std::pair<double, double>{0.0, 0.0}));
    EXPECT_EQ(roc.points.back(), (std::pair<double, double>{1.0, 1.0}));
    for (std::size_t k = 1; k < roc.points.size(); ++k) {
        EXPECT_GE(roc.points[k].first, roc.points[k - 1].first);
        EXPECT_GE(roc.points[k].second, roc.points[k - 1].second);
    }
}

TEST(RocCurve, TiedScoresCollapseIntoOneStep) {
    std::vector<int> y = {1, 0, 1, 0};
    std::vector<double> scores = {0.5, 0.5, 0.5, 0.5};
    RocCurve roc = roc_curve(y, scores);
    ASSERT_EQ(roc.points.size(), 2u);  // (0,0) and (1,1)
    EXPECT_NEAR(roc.auc, 0.5, 1e-12);
}

TEST(RocCurve, RandomScoresGiveChanceAuc) {
    Rng rng(1234);
    std::vector<int> y;
    std::vector<double> scores;
    for (int i = 0; i < 10000; ++i) {
        y.push_back(static_cast<int>(rng.below(2)));
        scores.push_back(rng.unit());
    }
    RocCurve roc = roc_curve(y, scores);
    EXPECT_NEAR(roc.auc, 0.5, 0.05);
    EXPECT_GE(roc.auc, 0.0);
    EXPECT_LE(roc.auc, 1.0);
}

TEST(RocCurve, SingleClassIsAnError) {
    EXPECT_THROW(roc_curve({1, 1}, {0.5, 0.6}), DomainError);
    EXPECT_THROW(roc_curve({0, 0}, {0.5, 0.6}), DomainError);
}

TEST(Metrics, JointPermutationInvariance) {
    Rng rng(66);
    std::vector<int> y, yhat;
    for (int i = 0; i < 200; ++i) {
        y.push_back(static_cast<int>(rng.below(2)));
        yhat.push_back(static_cast<int>(rng.below(2)));
    }
    ConfusionMatrix base = confusion(y, yhat);
    std::vector<std::size_t> order(y.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    std::vector<int> y2, yhat2;
    for (std::size_t i : order) {
        y2.push_back(y[i]);
        yhat2.push_back(yhat[i]);
    }
    ConfusionMatrix permuted = confusion(y2, yhat2);
    EXPECT_EQ(base.tp, permuted.tp);
    EXPECT_EQ(base.fp, permuted.fp);
    EXPECT_EQ(base.fn, permuted.fn);
    EXPECT_EQ(base.tn, permuted.tn);
    EXPECT_DOUBLE_EQ(cohen_kappa(base), cohen_kappa(permuted));
    EXPECT_DOUBLE_EQ(mcc(base), mcc(permuted));
}
