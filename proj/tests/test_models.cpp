#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "lahja/models.hpp"
#include "lahja/rng.hpp"

#include "oracles.hpp"

using namespace lahja;

namespace {

SparseVector dense(std::initializer_list<double> values) {
    SparseVector v;
    v.dim = values.size();
    std::uint32_t j = 0;
    for (double x : values) {
        if (x != 0.0) v.entries.emplace_back(j, x);
        ++j;
    }
    return v;
}

// toy corpus from the worked smoothing example: class 1 doc "a a b",
// class 0 doc "b b c", raw counts over columns (a, b, c)
std::pair<std::vector<SparseVector>, std::vector<int>> toy_counts() {
    return {{dense({2, 1, 0}), dense({0, 2, 1})}, {1, 0}};
}

TrainConfig config_for(ClassifierKind kind) {
    TrainConfig cfg;
    cfg.kind = kind;
    return cfg;
}

}  // namespace

TEST(MultinomialNB, LaplaceEstimatesByHand) {
    auto [X, y] = toy_counts();
    ClassifierModel model = fit(X, y, config_for(ClassifierKind::MultinomialNB));
    // positive class (doc "a a b"): P = (1/2, 1/3, 1/6); negative: (1/6, 1/2, 1/3)
    EXPECT_NEAR(std::exp(model.feature_log_prob[1][0]), 1.0 / 2.0, 1e-12);
    EXPECT_NEAR(std::exp(model.feature_log_prob[1][1]), 1.0 / 3.0, 1e-12);
    EXPECT_NEAR(std::exp(model.feature_log_prob[1][2]), 1.0 / 6.0, 1e-12);
    EXPECT_NEAR(std::exp(model.feature_log_prob[0][0]), 1.0 / 6.0, 1e-12);
    EXPECT_NEAR(std::exp(model.feature_log_prob[0][1]), 1.0 / 2.0, 1e-12);
    EXPECT_NEAR(std::exp(model.feature_log_prob[0][2]), 1.0 / 3.0, 1e-12);
    // each class table is a proper distribution
    for (int c = 0; c < 2; ++c) {
        double sum = 0.0;
        for (double lp : model.feature_log_prob[c]) sum += std::exp(lp);
        EXPECT_NEAR(sum, 1.0, 1e-9);
    }
}

TEST(MultinomialNB, PosteriorRatioByHand) {
    auto [X, y] = toy_counts();
    ClassifierModel model = fit(X, y, config_for(ClassifierKind::MultinomialNB));
    // doc "a b": priors cancel, score = ln[(1/2 * 1/3) / (1/6 * 1/2)] = ln 2
    SparseVector doc = dense({1, 1, 0});
    EXPECT_NEAR(decision_score(model, doc), std::log(2.0), 1e-12);
    EXPECT_EQ(predict_one(model, doc), 1);
}

TEST(MultinomialNB, ZeroVectorScoresThePriorGap) {
    std::vector<SparseVector> X = {dense({2, 0}), dense({0, 2}), dense({1, 1})};
    std::vector<int> y = {1, 0, 0};
    ClassifierModel model = fit(X, y, config_for(ClassifierKind::MultinomialNB));
    SparseVector zero;
    zero.dim = 2;
    EXPECT_NEAR(decision_score(model, zero),
                model.class_log_prior[1] - model.class_log_prior[0], 1e-12);
}

TEST(MultinomialNB, TieBreaksToMajorityClass) {
    // symmetric corpus: the empty doc scores exactly 0
    std::vector<SparseVector> X = {dense({1, 0}), dense({0, 1}), dense({1, 0})};
    std::vector<int> y = {1, 0, 1};
    ClassifierModel model = fit(X, y, config_for(ClassifierKind::MultinomialNB));
    EXPECT_EQ(model.majority_class, 1);
    SparseVector zero;
    zero.dim = 2;
    EXPECT_DOUBLE_EQ(decision_score(model, zero),
                     model.class_log_prior[1] - model.class_log_prior[0]);
    // balanced variant where the prior gap is zero
    std::vector<SparseVector> Xb = {dense({1, 0}), dense({0, 1})};
    std::vector<int> yb = {0, 1};
    ClassifierModel balanced = fit(Xb, yb, config_for(ClassifierKind::MultinomialNB));
    EXPECT_EQ(balanced.majority_class, 1);  // positives == half, rule says 1
    SparseVector z;
    z.dim = 2;
    EXPECT_DOUBLE_EQ(decision_score(balanced, z), 0.0);
    EXPECT_EQ(predict_one(balanced, z), 1);
}

TEST(MultinomialNB, ArgmaxInvariantToTfScalingWithEqualPriors) {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        auto [X, y] = oracle::random_instance(rng, 10, 6);
        // force balanced classes for equal priors
        std::vector<SparseVector> Xb;
        std::vector<int> yb;
        for (std::size_t i = 0; i + 1 < X.size(); i += 2) {
            Xb.push_back(X[i]);
            yb.push_back(1);
            Xb.push_back(X[i + 1]);
            yb.push_back(0);
        }
        if (Xb.size() < 2) continue;
        ClassifierModel model = fit(Xb, yb, config_for(ClassifierKind::MultinomialNB));
        for (double c : {0.5, 2.0, 7.0}) {
            for (const auto& x : Xb) {
                SparseVector scaled = x;
                for (auto& [j, v] : scaled.entries) v *= c;
                EXPECT_EQ(predict_one(model, x), predict_one(model, scaled));
            }
        }
    }
}

TEST(MultinomialNB, RejectsNegativeFeatures) {
    std::vector<SparseVector> X = {dense({1, -1}), dense({0, 1})};
    std::vector<int> y = {1, 0};
    EXPECT_THROW(fit(X, y, config_for(ClassifierKind::MultinomialNB)), DomainError);
}

TEST(BernoulliNB, BinarizationIgnoresMagnitude) {
    std::vector<SparseVector> X1 = {dense({3, 0}), dense({0, 5})};
    std::vector<SparseVector> X2 = {dense({1, 0}), dense({0, 1})};
    std::vector<int> y = {1, 0};
    ClassifierModel a = fit(X1, y, config_for(ClassifierKind::BernoulliNB));
    ClassifierModel b = fit(X2, y, config_for(ClassifierKind::BernoulliNB));
    for (int c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < 2; ++j)
            EXPECT_DOUBLE_EQ(a.feature_log_prob[c][j], b.feature_log_prob[c][j]);
}

TEST(BernoulliNB, ProperProbabilities) {
    Rng rng(23);
    auto [X, y] = oracle::random_instance(rng, 12, 8);
    ClassifierModel model = fit(X, y, config_for(ClassifierKind::BernoulliNB));
    for (int c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < model.dim; ++j) {
            double p = std::exp(model.feature_log_prob[c][j]);
            EXPECT_GT(p, 0.0);
            EXPECT_LT(p, 1.0);
            EXPECT_NEAR(p + std::exp(model.feature_log_prob_neg[c][j]), 1.0, 1e-12);
        }
}

TEST(NaiveBayes, BruteForceOracleAgreement) {
    Rng rng(2718);
    for (int trial = 0; trial < 200; ++trial) {
        auto [X, y] = oracle::random_instance(rng, 12, 8);
        ClassifierModel mnb = fit(X, y, config_for(ClassifierKind::MultinomialNB));
        EXPECT_EQ(oracle::nb_mismatches(mnb, X, y, false), 0) << "MNB trial " << trial;
        ClassifierModel bnb = fit(X, y, config_for(ClassifierKind::BernoulliNB));
        EXPECT_EQ(oracle::nb_mismatches(bnb, X, y, true), 0) << "BNB trial " << trial;
    }
}

TEST(NaiveBayes, PosteriorsSumToOne) {
    Rng rng(5);
    auto [X, y] = oracle::random_instance(rng, 12, 6);
    for (ClassifierKind kind : {ClassifierKind::MultinomialNB, ClassifierKind::BernoulliNB}) {
        ClassifierModel model = fit(X, y, config_for(kind));
        for (const auto& x : X) {
            double p = predict_proba_one(model, x);
            // the two-class posterior of the complementary class
            double q = 1.0 / (1.0 + std::exp(decision_score(model, x)));
            EXPECT_NEAR(p + q, 1.0, 1e-9);
            EXPECT_GE(p, 0.0);
            EXPECT_LE(p, 1.0);
        }
    }
}

TEST(LogisticRegression, SeparableTwoPoints) {
    std::vector<SparseVector> X = {dense({1.0}), dense({-1.0})};
    std::vector<int> y = {1, 0};
    TrainConfig cfg = config_for(ClassifierKind::LogisticRegression);
    cfg.epochs = 50;
    ClassifierModel model = fit(X, y, cfg);
    EXPECT_GT(model.weights[0], 0.0);
    EXPECT_EQ(predict(model, X), y);
}

TEST(LogisticRegression, GradientMatchesFiniteDifferences) {
    Rng rng(31415);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t n = 10, dim = 8;
        std::vector<SparseVector> X;
        std::vector<int> y;
        for (std::size_t i = 0; i < n; ++i) {
            SparseVector v;
            v.dim = dim;
            for (std::uint32_t j = 0; j < dim; ++j) {
                double val = (static_cast<double>(rng.below(200)) - 100.0) / 50.0;
                if (rng.below(3) != 0) v.entries.emplace_back(j, val);
            }
            X.push_back(std::move(v));
            y.push_back(i % 2);
        }
        std::vector<double> w(dim);
        for (auto& wj : w) wj = (static_cast<double>(rng.below(200)) - 100.0) / 100.0;
        double b = 0.3;
        double lambda = 0.01;

        std::vector<double> grad;
        double grad_b = 0.0;
        logistic_objective(X, y, w, b, lambda, &grad, &grad_b);

        const double h = 1e-6;
        for (std::size_t j = 0; j < dim; ++j) {
            std::vector<double> wp = w, wm = w;
            wp[j] += h;
            wm[j] -= h;
            double numeric = (logistic_objective(X, y, wp, b, lambda) -
                              logistic_objective(X, y, wm, b, lambda)) /
                             (2.0 * h);
            double denom = std::max(std::fabs(numeric), 1e-8);
            EXPECT_LT(std::fabs(numeric - grad[j]) / denom, 1e-5);
        }
        double numeric_b = (logistic_objective(X, y, w, b + h, lambda) -
                            logistic_objective(X, y, w, b - h, lambda)) /
                           (2.0 * h);
        EXPECT_LT(std::fabs(numeric_b - grad_b) / std::max(std::fabs(numeric_b), 1e-8), 1e-5);
    }
}

TEST(LinearSVM, SeparableSetReachesFullTrainingAccuracy) {
    // 20 points on a line with margin >= 0.5 around the boundary
    Rng rng(99);
    std::vector<SparseVector> X;
    std::vector<int> y;
    for (int i = 0; i < 20; ++i) {
        double sign = i % 2 == 0 ? 1.0 : -1.0;
        double mag = 0.5 + static_cast<double>(rng.below(100)) / 100.0;
        X.push_back(dense({sign * mag, 1.0}));
        y.push_back(sign > 0 ? 1 : 0);
    }
    TrainConfig cfg = config_for(ClassifierKind::LinearSVM);
    cfg.epochs = 100;
    ClassifierModel model = fit(X, y, cfg);
    EXPECT_EQ(predict(model, X), y);
}

TEST(LinearSVM, FullBatchSubgradientObjectiveNonIncreasing) {
    // deterministic full-batch descent on a small fixed instance
    std::vector<SparseVector> X = {dense({1.0, 0.2}), dense({-0.8, 0.4}), dense({0.6, -1.0}),
                                   dense({-0.3, -0.6})};
    std::vector<int> y = {1, 0, 1, 0};
    std::vector<double> w(2, 0.0);
    double b = 0.0;
    const double lambda = 0.05, eta = 0.02;
    double prev = hinge_objective(X, y, w, b, lambda);
    for (int epoch = 0; epoch < 60; ++epoch) {
        std::vector<double> grad;
        double grad_b = 0.0;
        hinge_objective(X, y, w, b, lambda, &grad, &grad_b);
        for (std::size_t j = 0; j < w.size(); ++j) w[j] -= eta * grad[j];
        b -= eta * grad_b;
        double obj = hinge_objective(X, y, w, b, lambda);
        EXPECT_LE(obj, prev + 1e-12);
        prev = obj;
    }
}

TEST(LinearModels, SeedDeterminism) {
    Rng rng(77);
    auto [X, y] = oracle::random_instance(rng, 12, 8);
    for (ClassifierKind kind :
         {ClassifierKind::LogisticRegression, ClassifierKind::LinearSVM}) {
        TrainConfig cfg = config_for(kind);
        cfg.seed = 1234;
        ClassifierModel a = fit(X, y, cfg);
        ClassifierModel b = fit(X, y, cfg);
        ASSERT_EQ(a.weights.size(), b.weights.size());
        for (std::size_t j = 0; j < a.weights.size(); ++j)
            EXPECT_EQ(a.weights[j], b.weights[j]);  // bit-identical
        EXPECT_EQ(a.bias, b.bias);
    }
}

TEST(LinearModels, ScoreIsLinearInTheInput) {
    std::vector<SparseVector> X = {dense({1.0, 2.0}), dense({-1.0, 0.5})};
    std::vector<int> y = {1, 0};
    TrainConfig cfg = config_for(ClassifierKind::LogisticRegression);
    ClassifierModel model = fit(X, y, cfg);
    SparseVector x = dense({0.4, -0.2});
    double base = decision_score(model, x) - model.bias;
    SparseVector scaled = x;
    for (auto& [j, v] : scaled.entries) v *= 3.0;
    EXPECT_NEAR(decision_score(model, scaled) - model.bias, 3.0 * base, 1e-12);
}

TEST(PredictProba, SigmoidLinks) {
    std::vector<SparseVector> X = {dense({1.0}), dense({-1.0})};
    std::vector<int> y = {1, 0};
    for (ClassifierKind kind :
         {ClassifierKind::LogisticRegression, ClassifierKind::LinearSVM}) {
        ClassifierModel model = fit(X, y, config_for(kind));
        SparseVector zero;
        zero.dim = 1;
        double margin0 = decision_score(model, zero);
        EXPECT_NEAR(predict_proba_one(model, zero), sigmoid(margin0), 1e-15);
    }
    EXPECT_DOUBLE_EQ(sigmoid(0.0), 0.5);
}

TEST(Fit, InputValidation) {
    std::vector<SparseVector> X = {dense({1.0}), dense({2.0})};
    EXPECT_THROW(fit(X, {1}, config_for(ClassifierKind::MultinomialNB)), DomainError);
    EXPECT_THROW(fit(X, {1, 1}, config_for(ClassifierKind::MultinomialNB)), DomainError);
    std::vector<SparseVector> bad_dim = {dense({1.0}), dense({1.0, 2.0})};
    EXPECT_THROW(fit(bad_dim, {1, 0}, config_for(ClassifierKind::MultinomialNB)), DomainError);

    TrainConfig bad = config_for(ClassifierKind::MultinomialNB);
    bad.alpha = 0.0;
    EXPECT_THROW(fit(X, {1, 0}, bad), DomainError);

    ClassifierModel model = fit(X, {1, 0}, config_for(ClassifierKind::MultinomialNB));
    SparseVector wrong;
    wrong.dim = 5;
    EXPECT_THROW(decision_score(model, wrong), DomainError);
}
