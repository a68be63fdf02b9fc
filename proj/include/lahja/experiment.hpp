#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "lahja/corpus.hpp"
#include "lahja/meta.hpp"
#include "lahja/metrics.hpp"
#include "lahja/models.hpp"
#include "lahja/textproc.hpp"
#include "lahja/vectorize.hpp"

namespace lahja {

/// Everything one experiment run needs; flags > config file > these defaults.
struct RunConfig {
    std::string dataset;
    std::string positive = "LY";
    std::string tn_label = "TN";
    std::optional<std::size_t> other_quota;  // default: one per positive doc
    std::size_t tunisian_quota = 0;
    bool no_sample = false;  // keep every document, relabel only

    std::optional<NgramRange> word_range = NgramRange{1, 2};
    std::optional<NgramRange> char_range = NgramRange{1, 5};
    std::size_t min_df = 1;
    bool use_meta = false;

    TrainConfig train;
    double test_fraction = 0.2;
    std::uint64_t seed = 42;  // master seed: sampling, split, and shuffling

    std::string stopwords_path;  // empty = shipped default
    std::string emoticons_happy_path;
    std::string emoticons_sad_path;
    bool no_stopwords = false;
    int repeat_cap = 1;

    std::uint64_t sample_seed() const { return seed * 0x9E3779B97F4A7C15ULL + 1; }
    std::uint64_t split_seed() const { return seed * 0x9E3779B97F4A7C15ULL + 2; }
    std::uint64_t train_seed() const { return seed * 0x9E3779B97F4A7C15ULL + 3; }
};

/// Optional meta-feature columns rider: which features were selected on the
/// training split and the min-max bounds fitted there.
struct MetaModel {
    bool enabled = false;
    std::vector<std::size_t> selected;  // indices into kMetaFeatureNames
    MinMaxScaler scaler;
};

/// A self-contained trained artifact: cleaning config, vocabulary, the
/// classifier, and the optional meta rider. Everything prediction needs.
struct TrainedPipeline {
    NormalizationConfig textproc;
    EmoticonTable emoticons;
    Vocabulary vocab;
    ClassifierModel model;
    MetaModel meta;
    std::string positive_label = "LY";
    std::string tn_label = "TN";
    double test_fraction = 0.2;
    std::uint64_t seed = 42;
    // sampling echo, enough to rebuild the exact train/test split
    bool no_sample = false;
    std::int64_t other_quota = -1;  // -1: balanced default
    std::size_t tunisian_quota = 0;
};

struct EvalReport {
    // config echo
    std::string classifier;
    NgramRange word_range{1, 1};
    NgramRange char_range{1, 5};
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
    std::string positive_label;
    std::size_t train_docs = 0;
    std::size_t test_docs = 0;
    bool use_meta = false;
    bool proba_uncalibrated = false;  // SVM logistic link

    ConfusionMatrix cm;
    BasicMetrics basic;
    double log_loss_prob = 0.0;
    double log_loss_hard = 0.0;
    double kappa = 0.0;
    double mcc_value = 0.0;
    RocCurve roc;
};

inline std::string default_data_path(const char* file) {
#ifdef LAHJA_DATA_DIR
    return std::string(LAHJA_DATA_DIR) + "/" + file;
#else
    return std::string("data/") + file;
#endif
}

/// Builds the cleaning config + emoticon table a RunConfig asks for.
inline std::pair<NormalizationConfig, EmoticonTable> make_textproc(const RunConfig& cfg) {
    NormalizationConfig tp;
    tp.repeat_cap = cfg.repeat_cap;
    EmoticonTable emo;
    emo.happy = load_patterns(cfg.emoticons_happy_path.empty()
                                  ? default_data_path("emoticons_happy.txt")
                                  : cfg.emoticons_happy_path);
    emo.sad = load_patterns(cfg.emoticons_sad_path.empty()
                                ? default_data_path("emoticons_sad.txt")
                                : cfg.emoticons_sad_path);
    tp.emoticons = emo.all();
    if (cfg.no_stopwords) {
        tp.remove_stopwords = false;
    } else {
        load_stopwords(cfg.stopwords_path.empty() ? default_data_path("stopwords_ar.txt")
                                                  : cfg.stopwords_path,
                       tp);
    }
    return {std::move(tp), std::move(emo)};
}

/// Positive-vs-OTHER task construction per the run config.
inline LabeledCorpus prepare_task(const LabeledCorpus& corpus, const RunConfig& cfg) {
    if (cfg.no_sample) {
        LabeledCorpus out;
        out.positive_label = cfg.positive;
        out.source_path = corpus.source_path;
        out.sampling_seed = cfg.sample_seed();
        for (const auto& d : corpus.docs)
            out.docs.push_back({d.text, d.label == cfg.positive ? cfg.positive : kOtherLabel});
        return out;
    }
    std::size_t positives = 0;
    for (const auto& d : corpus.docs) positives += (d.label == cfg.positive);
    std::size_t quota = cfg.other_quota.value_or(positives);
    return build_binary_task(corpus, cfg.positive, quota, cfg.tunisian_quota, cfg.sample_seed(),
                             cfg.tn_label);
}

inline std::vector<CleanDoc> clean_corpus(const LabeledCorpus& corpus,
                                          const NormalizationConfig& tp) {
    std::vector<CleanDoc> out;
    out.reserve(corpus.docs.size());
    for (const auto& d : corpus.docs) out.push_back(CleanDoc::of(d.text, tp));
    return out;
}

inline std::vector<int> binary_labels(const LabeledCorpus& corpus, const std::string& positive) {
    std::vector<int> y;
    y.reserve(corpus.docs.size());
    for (const auto& d : corpus.docs) y.push_back(d.label == positive ? 1 : 0);
    return y;
}

namespace detail {

inline std::vector<double> meta_row(const MetaFeatureVector& f,
                                    const std::vector<std::size_t>& selected) {
    std::vector<double> row;
    row.reserve(selected.size());
    for (std::size_t idx : selected) row.push_back(f.value(idx));
    return row;
}

}  // namespace detail

/// Fits the full pipeline (vocabulary, optional meta rider, classifier) on a
/// training corpus. `pre_cleaned`, when given, must be clean_corpus output
/// for the same corpus and config; the sweep uses it to clean only once.
inline TrainedPipeline train_pipeline(const LabeledCorpus& train, const RunConfig& cfg,
                                      const std::vector<CleanDoc>* pre_cleaned = nullptr) {
    TrainedPipeline pipe;
    std::tie(pipe.textproc, pipe.emoticons) = make_textproc(cfg);
    pipe.positive_label = cfg.positive;
    pipe.tn_label = cfg.tn_label;
    pipe.test_fraction = cfg.test_fraction;
    pipe.seed = cfg.seed;
    pipe.no_sample = cfg.no_sample;
    pipe.other_quota = cfg.other_quota ? static_cast<std::int64_t>(*cfg.other_quota) : -1;
    pipe.tunisian_quota = cfg.tunisian_quota;

    std::vector<CleanDoc> own_cleaned;
    if (!pre_cleaned) {
        own_cleaned = clean_corpus(train, pipe.textproc);
        pre_cleaned = &own_cleaned;
    }
    const auto& cleaned = *pre_cleaned;
    pipe.vocab = fit_vocabulary(cleaned, cfg.word_range, cfg.char_range, cfg.min_df);
    auto X = transform_corpus(cleaned, pipe.vocab);
    auto y = binary_labels(train, cfg.positive);

    if (cfg.use_meta) {
        std::vector<MetaFeatureVector> feats;
        feats.reserve(train.docs.size());
        for (const auto& d : train.docs) feats.push_back(extract_meta(d.text, pipe.emoticons));
        MetaSelection sel = select_meta(feats, y);
        pipe.meta.enabled = true;
        for (std::size_t i = 0; i < sel.features.size(); ++i)
            if (sel.features[i].significant) pipe.meta.selected.push_back(i);
        if (!pipe.meta.selected.empty()) {
            std::vector<std::vector<double>> rows;
            rows.reserve(feats.size());
            for (const auto& f : feats) rows.push_back(detail::meta_row(f, pipe.meta.selected));
            pipe.meta.scaler.fit(rows);
            for (std::size_t i = 0; i < X.size(); ++i)
                X[i] = append_meta(X[i], pipe.meta.scaler.transform(rows[i]));
        }
    }

    TrainConfig tc = cfg.train;
    tc.seed = cfg.train_seed();
    pipe.model = fit(X, y, tc);
    return pipe;
}

/// Raw text -> feature vector under a trained pipeline.
inline SparseVector vectorize_raw(const TrainedPipeline& pipe, std::string_view raw) {
    SparseVector x = transform(CleanDoc::of(raw, pipe.textproc), pipe.vocab);
    if (pipe.meta.enabled && !pipe.meta.selected.empty()) {
        auto row = detail::meta_row(extract_meta(raw, pipe.emoticons), pipe.meta.selected);
        x = append_meta(x, pipe.meta.scaler.transform(row));
    }
    return x;
}

/// Runs the model over a test corpus and assembles the full report.
inline EvalReport evaluate(const TrainedPipeline& pipe, const LabeledCorpus& test,
                           const RunConfig& cfg, std::size_t train_docs,
                           const std::vector<CleanDoc>* pre_cleaned = nullptr) {
    std::vector<SparseVector> X;
    X.reserve(test.docs.size());
    for (std::size_t i = 0; i < test.docs.size(); ++i) {
        if (pre_cleaned) {
            SparseVector x = transform((*pre_cleaned)[i], pipe.vocab);
            if (pipe.meta.enabled && !pipe.meta.selected.empty()) {
                auto row = detail::meta_row(extract_meta(test.docs[i].text, pipe.emoticons),
                                            pipe.meta.selected);
                x = append_meta(x, pipe.meta.scaler.transform(row));
            }
            X.push_back(std::move(x));
        } else {
            X.push_back(vectorize_raw(pipe, test.docs[i].text));
        }
    }
    auto y = binary_labels(test, cfg.positive);

    EvalReport rep;
    rep.classifier = to_string(cfg.train.kind);
    if (cfg.word_range) rep.word_range = *cfg.word_range;
    if (cfg.char_range) rep.char_range = *cfg.char_range;
    rep.seed = cfg.seed;
    rep.test_fraction = cfg.test_fraction;
    rep.positive_label = cfg.positive;
    rep.train_docs = train_docs;
    rep.test_docs = test.docs.size();
    rep.use_meta = cfg.use_meta;
    rep.proba_uncalibrated = cfg.train.kind == ClassifierKind::LinearSVM;

    auto y_pred = predict(pipe.model, X);
    auto scores = decision_scores(pipe.model, X);
    auto proba = predict_proba(pipe.model, X);
    rep.cm = confusion(y, y_pred);
    rep.basic = basic_metrics(rep.cm);
    rep.log_loss_prob = log_loss(y, proba, LogLossMode::Probability);
    rep.log_loss_hard = log_loss(y, proba, LogLossMode::HardLabel);
    rep.kappa = cohen_kappa(rep.cm);
    rep.mcc_value = mcc(rep.cm);
    rep.roc = roc_curve(y, scores);
    return rep;
}

/// One train+evaluate run over a prepared (already binary) corpus.
inline std::pair<TrainedPipeline, EvalReport> run_experiment(const LabeledCorpus& task,
                                                             const RunConfig& cfg) {
    auto [train, test] = stratified_split(task, cfg.test_fraction, cfg.split_seed());
    TrainedPipeline pipe = train_pipeline(train, cfg);
    EvalReport rep = evaluate(pipe, test, cfg, train.docs.size());
    return {std::move(pipe), std::move(rep)};
}

/// The 4 x 3 sweep: every classifier against word ranges (1,1), (1,2),
/// (1,3), all with the configured char range. Row order is classifier-major.
inline std::vector<EvalReport> run_sweep(const LabeledCorpus& task, const RunConfig& base) {
    static constexpr ClassifierKind kKinds[] = {
        ClassifierKind::LogisticRegression,
        ClassifierKind::LinearSVM,
        ClassifierKind::MultinomialNB,
        ClassifierKind::BernoulliNB,
    };
    std::vector<EvalReport> reports;
    auto [train, test] = stratified_split(task, base.test_fraction, base.split_seed());
    auto [tp, emo] = make_textproc(base);
    const auto train_cleaned = clean_corpus(train, tp);
    const auto test_cleaned = clean_corpus(test, tp);
    for (ClassifierKind kind : kKinds) {
        for (std::size_t hi = 1; hi <= 3; ++hi) {
            RunConfig cfg = base;
            cfg.train.kind = kind;
            cfg.word_range = NgramRange{1, hi};
            TrainedPipeline pipe = train_pipeline(train, cfg, &train_cleaned);
            reports.push_back(evaluate(pipe, test, cfg, train.docs.size(), &test_cleaned));
        }
    }
    return reports;
}

// ---- rendering -------------------------------------------------------------

namespace detail {

inline std::string fixed5(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.5f", v);
    return buf;
}

inline std::string display_name(const std::string& kind) {
    if (kind == "logistic_regression") return "Logistic Regression";
    if (kind == "linear_svm") return "Linear SVM";
    if (kind == "multinomial_nb") return "Multinomial NB";
    if (kind == "bernoulli_nb") return "Bernoulli NB";
    return kind;
}

inline std::string range_cell(const NgramRange& r) {
    return "(" + std::to_string(r.lo) + ", " + std::to_string(r.hi) + ")";
}

}  // namespace detail

/// Markdown table of accuracy/precision/recall/F1 per sweep row.
inline std::string render_accuracy_table(const std::vector<EvalReport>& reports) {
    std::string out =
        "| Classifier | Word gram | Character gram | Accuracy | Precision | Recall | F1 |\n"
        "|---|---|---|---|---|---|---|\n";
    for (const auto& r : reports) {
        out += "| " + detail::display_name(r.classifier) + " | " +
               detail::range_cell(r.word_range) + " | " + detail::range_cell(r.char_range) +
               " | " + detail::fixed5(r.basic.accuracy) + " | " +
               detail::fixed5(r.basic.precision) + " | " + detail::fixed5(r.basic.recall) +
               " | " + detail::fixed5(r.basic.f1) + " |\n";
    }
    return out;
}

/// Markdown table of log loss / kappa / MCC per sweep row.
inline std::string render_agreement_table(const std::vector<EvalReport>& reports) {
    std::string out =
        "| Classifier | Word gram | Character gram | Log loss | Cohen kappa score | "
        "Matthews Corr. Coeff. |\n|---|---|---|---|---|---|\n";
    for (const auto& r : reports) {
        out += "| " + detail::display_name(r.classifier) + " | " +
               detail::range_cell(r.word_range) + " | " + detail::range_cell(r.char_range) +
               " | " + detail::fixed5(r.log_loss_hard) + " | " + detail::fixed5(r.kappa) +
               " | " + detail::fixed5(r.mcc_value) + " |\n";
    }
    return out;
}

/// ROC points as CSV for external plotting.
inline std::string roc_csv(const EvalReport& report) {
    std::string out = "fpr,tpr\n";
    for (const auto& [fpr, tpr] : report.roc.points) {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", fpr, tpr);
        out += buf;
    }
    return out;
}

}  // namespace lahja
