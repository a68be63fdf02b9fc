#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "lahja/errors.hpp"
#include "lahja/rng.hpp"
#include "lahja/vectorize.hpp"

namespace lahja {

enum class ClassifierKind { MultinomialNB, BernoulliNB, LogisticRegression, LinearSVM };

inline const char* to_string(ClassifierKind kind) {
    switch (kind) {
        case ClassifierKind::MultinomialNB: return "multinomial_nb";
        case ClassifierKind::BernoulliNB: return "bernoulli_nb";
        case ClassifierKind::LogisticRegression: return "logistic_regression";
        case ClassifierKind::LinearSVM: return "linear_svm";
    }
    return "?";
}

inline ClassifierKind classifier_kind_from(const std::string& name) {
    if (name == "multinomial_nb" || name == "mnb") return ClassifierKind::MultinomialNB;
    if (name == "bernoulli_nb" || name == "bnb") return ClassifierKind::BernoulliNB;
    if (name == "logistic_regression" || name == "lr") return ClassifierKind::LogisticRegression;
    if (name == "linear_svm" || name == "svm") return ClassifierKind::LinearSVM;
    throw DomainError("unknown classifier: " + name);
}

struct TrainConfig {
    ClassifierKind kind = ClassifierKind::MultinomialNB;
    double alpha = 1.0;               // NB additive smoothing
    double binarize_threshold = 0.0;  // BNB: weight > threshold counts as present
    double l2_lambda = 1e-4;          // LR/SVM regularization strength
    std::size_t epochs = 20;
    double tol = 1e-5;  // stop when relative objective improvement falls below
    std::uint64_t seed = 0;

    void validate() const {
        if (alpha <= 0.0) throw DomainError("alpha must be > 0");
        if (l2_lambda < 0.0) throw DomainError("l2_lambda must be >= 0");
        if (epochs < 1) throw DomainError("epochs must be >= 1");
    }
};

/// A trained binary classifier. NB variants keep per-class log tables;
/// the linear models keep a dense weight vector and bias.
struct ClassifierModel {
    ClassifierKind kind = ClassifierKind::MultinomialNB;
    std::size_t dim = 0;
    TrainConfig config;
    int majority_class = 1;  // tie-break at decision score 0

    // naive Bayes parameters (class 0 = negative, 1 = positive)
    double class_log_prior[2] = {0.0, 0.0};
    std::vector<double> feature_log_prob[2];    // MNB: log P(feature | class)
    std::vector<double> feature_log_prob_neg[2];  // BNB: log(1 - P(feature | class))
    double bnb_base[2] = {0.0, 0.0};            // BNB: sum of log(1-p) per class

    // linear parameters
    std::vector<double> weights;
    double bias = 0.0;
};

namespace detail {

inline void check_training_inputs(const std::vector<SparseVector>& X, const std::vector<int>& y) {
    if (X.size() != y.size()) throw DomainError("fit: X/y length mismatch");
    if (X.size() < 2) throw DomainError("fit: need at least two documents");
    bool has0 = false, has1 = false;
    for (int v : y) (v ? has1 : has0) = true;
    if (!has0 || !has1) throw DomainError("fit: training data has a single class");
    for (const auto& x : X)
        if (x.dim != X[0].dim) throw DomainError("fit: inconsistent vector dimensions");
}

inline int majority(const std::vector<int>& y) {
    std::size_t pos = 0;
    for (int v : y) pos += (v == 1);
    return 2 * pos >= y.size() ? 1 : 0;
}

}  // namespace detail

// ---- objectives (shared by the trainer, the stopping rule, and tests) -----

inline double sigmoid(double z) {
    if (z >= 0) {
        double e = std::exp(-z);
        return 1.0 / (1.0 + e);
    }
    double e = std::exp(z);
    return e / (1.0 + e);
}

inline double log1p_exp(double z) {  // ln(1 + e^z), overflow-safe
    return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

/// Mean logistic loss + (lambda/2)||w||^2 and its gradient.
inline double logistic_objective(const std::vector<SparseVector>& X, const std::vector<int>& y,
                                 const std::vector<double>& w, double b, double lambda,
                                 std::vector<double>* grad_w = nullptr,
                                 double* grad_b = nullptr) {
    const double n = static_cast<double>(X.size());
    if (grad_w) grad_w->assign(w.size(), 0.0);
    if (grad_b) *grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        double yi = y[i] == 1 ? 1.0 : -1.0;
        double margin = yi * (X[i].dot_dense(w) + b);
        loss += log1p_exp(-margin);
        if (grad_w || grad_b) {
            double g = -yi * sigmoid(-margin) / n;
            if (grad_w)
                for (const auto& [j, v] : X[i].entries) (*grad_w)[j] += g * v;
            if (grad_b) *grad_b += g;
        }
    }
    loss /= n;
    double reg = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        reg += w[j] * w[j];
        if (grad_w) (*grad_w)[j] += lambda * w[j];
    }
    return loss + 0.5 * lambda * reg;
}

/// Mean hinge loss + (lambda/2)||w||^2 and a subgradient.
inline double hinge_objective(const std::vector<SparseVector>& X, const std::vector<int>& y,
                              const std::vector<double>& w, double b, double lambda,
                              std::vector<double>* grad_w = nullptr, double* grad_b = nullptr) {
    const double n = static_cast<double>(X.size());
    if (grad_w) grad_w->assign(w.size(), 0.0);
    if (grad_b) *grad_b = 0.0;
    double loss = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        double yi = y[i] == 1 ? 1.0 : -1.0;
        double margin = yi * (X[i].dot_dense(w) + b);
        if (margin < 1.0) {
            loss += 1.0 - margin;
            if (grad_w)
                for (const auto& [j, v] : X[i].entries) (*grad_w)[j] -= yi * v / n;
            if (grad_b) *grad_b -= yi / n;
        }
    }
    loss /= n;
    double reg = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        reg += w[j] * w[j];
        if (grad_w) (*grad_w)[j] += lambda * w[j];
    }
    return loss + 0.5 * lambda * reg;
}

namespace detail {

inline ClassifierModel fit_multinomial_nb(const std::vector<SparseVector>& X,
                                          const std::vector<int>& y, const TrainConfig& cfg) {
    const std::size_t dim = X[0].dim;
    ClassifierModel model;
    model.kind = cfg.kind;
    model.dim = dim;
    model.config = cfg;
    double class_count[2] = {0.0, 0.0};
    std::vector<double> sums[2];
    sums[0].assign(dim, 0.0);
    sums[1].assign(dim, 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        int c = y[i] == 1 ? 1 : 0;
        class_count[c] += 1.0;
        for (const auto& [j, v] : X[i].entries) {
            if (v < 0.0) throw DomainError("multinomial NB requires non-negative features");
            sums[c][j] += v;
        }
    }
    for (int c = 0; c < 2; ++c) {
        model.class_log_prior[c] =
            std::log(class_count[c] / static_cast<double>(X.size()));
        double total = std::accumulate(sums[c].begin(), sums[c].end(), 0.0) +
                       cfg.alpha * static_cast<double>(dim);
        model.feature_log_prob[c].resize(dim);
        for (std::size_t j = 0; j < dim; ++j)
            model.feature_log_prob[c][j] = std::log((sums[c][j] + cfg.alpha) / total);
    }
    return model;
}

inline ClassifierModel fit_bernoulli_nb(const std::vector<SparseVector>& X,
                                        const std::vector<int>& y, const TrainConfig& cfg) {
    const std::size_t dim = X[0].dim;
    ClassifierModel model;
    model.kind = cfg.kind;
    model.dim = dim;
    model.config = cfg;
    double class_count[2] = {0.0, 0.0};
    std::vector<double> present[2];
    present[0].assign(dim, 0.0);
    present[1].assign(dim, 0.0);
    for (std::size_t i = 0; i < X.size(); ++i) {
        int c = y[i] == 1 ? 1 : 0;
        class_count[c] += 1.0;
        for (const auto& [j, v] : X[i].entries)
            if (v > cfg.binarize_threshold) present[c][j] += 1.0;
    }
    for (int c = 0; c < 2; ++c) {
        model.class_log_prior[c] =
            std::log(class_count[c] / static_cast<double>(X.size()));
        model.feature_log_prob[c].resize(dim);
        model.feature_log_prob_neg[c].resize(dim);
        model.bnb_base[c] = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            double p = (present[c][j] + cfg.alpha) / (class_count[c] + 2.0 * cfg.alpha);
            model.feature_log_prob[c][j] = std::log(p);
            model.feature_log_prob_neg[c][j] = std::log1p(-p);
            model.bnb_base[c] += model.feature_log_prob_neg[c][j];
        }
    }
    return model;
}

// Epoch-shuffled SGD with step 1/(lambda*(t + 1/lambda)) = 1/(1 + lambda*t);
// the bias is not regularized. The weight vector is kept as scale * value so
// the L2 shrink costs O(1) per step instead of O(dim). Stops early once the
// full objective stops improving by more than cfg.tol relatively.
inline ClassifierModel fit_linear_sgd(const std::vector<SparseVector>& X,
                                      const std::vector<int>& y, const TrainConfig& cfg) {
    const std::size_t dim = X[0].dim;
    const bool hinge = cfg.kind == ClassifierKind::LinearSVM;
    ClassifierModel model;
    model.kind = cfg.kind;
    model.dim = dim;
    model.config = cfg;
    std::vector<double> v(dim, 0.0);  // w = scale * v
    double scale = 1.0;
    double b = 0.0;
    Rng rng(cfg.seed);
    std::vector<std::size_t> order(X.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const auto materialize = [&] {
        std::vector<double> w(v);
        for (auto& wj : w) wj *= scale;
        return w;
    };
    const auto fold_scale = [&] {
        for (auto& vj : v) vj *= scale;
        scale = 1.0;
    };

    double prev_obj = hinge ? hinge_objective(X, y, materialize(), b, cfg.l2_lambda)
                            : logistic_objective(X, y, materialize(), b, cfg.l2_lambda);
    std::uint64_t t = 0;
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            double eta = 1.0 / (1.0 + cfg.l2_lambda * static_cast<double>(t));
            ++t;
            double yi = y[i] == 1 ? 1.0 : -1.0;
            double dot = 0.0;
            for (const auto& [j, xv] : X[i].entries) dot += v[j] * xv;
            double margin = yi * (scale * dot + b);
            double pull;  // coefficient on y*x in the loss gradient
            if (hinge) {
                pull = margin < 1.0 ? 1.0 : 0.0;
            } else {
                pull = sigmoid(-margin);
            }
            // w <- (1 - eta*lambda) w + eta*pull*y*x
            double shrink = 1.0 - eta * cfg.l2_lambda;
            scale *= shrink > 1e-12 ? shrink : 1e-12;
            if (scale < 1e-9) fold_scale();
            if (pull != 0.0) {
                for (const auto& [j, xv] : X[i].entries) v[j] += eta * pull * yi * xv / scale;
                b += eta * pull * yi;
            }
        }
        double obj = hinge ? hinge_objective(X, y, materialize(), b, cfg.l2_lambda)
                           : logistic_objective(X, y, materialize(), b, cfg.l2_lambda);
        double improvement = (prev_obj - obj) / std::max(std::fabs(prev_obj), 1e-12);
        prev_obj = obj;
        if (improvement >= 0.0 && improvement < cfg.tol) break;
    }
    model.weights = materialize();
    model.bias = b;
    return model;
}

}  // namespace detail

inline ClassifierModel fit(const std::vector<SparseVector>& X, const std::vector<int>& y,
                           const TrainConfig& cfg) {
    cfg.validate();
    detail::check_training_inputs(X, y);
    ClassifierModel model;
    switch (cfg.kind) {
        case ClassifierKind::MultinomialNB: model = detail::fit_multinomial_nb(X, y, cfg); break;
        case ClassifierKind::BernoulliNB: model = detail::fit_bernoulli_nb(X, y, cfg); break;
        case ClassifierKind::LogisticRegression:
        case ClassifierKind::LinearSVM: model = detail::fit_linear_sgd(X, y, cfg); break;
    }
    model.majority_class = detail::majority(y);
    return model;
}

/// Positive-minus-negative log posterior for NB; w.x + b for linear models.
inline double decision_score(const ClassifierModel& model, const SparseVector& x) {
    if (x.dim != model.dim) throw DomainError("decision_score: dimension mismatch");
    switch (model.kind) {
        case ClassifierKind::MultinomialNB: {
            double s = model.class_log_prior[1] - model.class_log_prior[0];
            for (const auto& [j, v] : x.entries)
                s += v * (model.feature_log_prob[1][j] - model.feature_log_prob[0][j]);
            return s;
        }
        case ClassifierKind::BernoulliNB: {
            double s = model.class_log_prior[1] - model.class_log_prior[0] +
                       model.bnb_base[1] - model.bnb_base[0];
            for (const auto& [j, v] : x.entries) {
                if (v > model.config.binarize_threshold) {
                    s += (model.feature_log_prob[1][j] - model.feature_log_prob_neg[1][j]) -
                         (model.feature_log_prob[0][j] - model.feature_log_prob_neg[0][j]);
                }
            }
            return s;
        }
        case ClassifierKind::LogisticRegression:
        case ClassifierKind::LinearSVM:
            return x.dot_dense(model.weights) + model.bias;
    }
    return 0.0;
}

inline std::vector<double> decision_scores(const ClassifierModel& model,
                                           const std::vector<SparseVector>& X) {
    std::vector<double> out;
    out.reserve(X.size());
    for (const auto& x : X) out.push_back(decision_score(model, x));
    return out;
}

inline int predict_one(const ClassifierModel& model, const SparseVector& x) {
    double s = decision_score(model, x);
    if (s > 0.0) return 1;
    if (s < 0.0) return 0;
    return model.majority_class;
}

inline std::vector<int> predict(const ClassifierModel& model,
                                const std::vector<SparseVector>& X) {
    std::vector<int> out;
    out.reserve(X.size());
    for (const auto& x : X) out.push_back(predict_one(model, x));
    return out;
}

/// P(positive | x). For NB this is the exact two-class posterior; for the
/// SVM it is a logistic link on the margin and is reported as uncalibrated.
inline double predict_proba_one(const ClassifierModel& model, const SparseVector& x) {
    return sigmoid(decision_score(model, x));
}

inline std::vector<double> predict_proba(const ClassifierModel& model,
                                         const std::vector<SparseVector>& X) {
    std::vector<double> out;
    out.reserve(X.size());
    for (const auto& x : X) out.push_back(predict_proba_one(model, x));
    return out;
}

}  // namespace lahja
