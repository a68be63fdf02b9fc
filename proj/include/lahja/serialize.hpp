#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "lahja/errors.hpp"
#include "lahja/experiment.hpp"

namespace lahja {

using json = nlohmann::json;

inline constexpr const char* kModelFormat = "lahja-model-v1";
inline constexpr const char* kReportFormat = "lahja-report-v1";
inline constexpr const char* kTfidfFormula = "tfidf-smooth-l2-v1";

namespace detail {

// json::at with a FormatError naming the missing field.
template <typename T>
T field(const json& j, const char* name) {
    if (!j.contains(name)) throw FormatError(std::string("missing field: ") + name);
    try {
        return j.at(name).get<T>();
    } catch (const json::exception&) {
        throw FormatError(std::string("malformed field: ") + name);
    }
}

inline json range_json(const std::optional<NgramRange>& r) {
    if (!r) return nullptr;
    return json::array({r->lo, r->hi});
}

inline std::optional<NgramRange> range_from(const json& j, const char* name) {
    if (!j.contains(name)) throw FormatError(std::string("missing field: ") + name);
    const auto& v = j.at(name);
    if (v.is_null()) return std::nullopt;
    if (!v.is_array() || v.size() != 2) throw FormatError(std::string("malformed field: ") + name);
    NgramRange r{v[0].get<std::size_t>(), v[1].get<std::size_t>()};
    r.validate();
    return r;
}

}  // namespace detail

inline json to_json(const Vocabulary& vocab) {
    json j;
    j["formula"] = kTfidfFormula;
    j["word_range"] = detail::range_json(vocab.word_range);
    j["char_range"] = detail::range_json(vocab.char_range);
    j["word_map"] = vocab.word_map;
    j["char_map"] = vocab.char_map;
    j["doc_freq"] = vocab.doc_freq;
    j["n_docs"] = vocab.n_docs;
    j["min_df"] = vocab.min_df;
    return j;
}

inline Vocabulary vocabulary_from_json(const json& j) {
    if (detail::field<std::string>(j, "formula") != kTfidfFormula)
        throw FormatError("unsupported tf-idf formula");
    Vocabulary vocab;
    vocab.word_range = detail::range_from(j, "word_range");
    vocab.char_range = detail::range_from(j, "char_range");
    vocab.word_map = detail::field<std::map<std::string, std::uint32_t>>(j, "word_map");
    vocab.char_map = detail::field<std::map<std::string, std::uint32_t>>(j, "char_map");
    vocab.doc_freq = detail::field<std::vector<std::uint32_t>>(j, "doc_freq");
    vocab.n_docs = detail::field<std::size_t>(j, "n_docs");
    vocab.min_df = detail::field<std::size_t>(j, "min_df");
    if (vocab.doc_freq.size() != vocab.dim()) throw FormatError("malformed field: doc_freq");
    return vocab;
}

inline json to_json(const NormalizationConfig& tp) {
    json j;
    j["strip_noise"] = tp.strip_noise;
    j["strip_web"] = tp.strip_web;
    j["normalize"] = tp.normalize;
    j["strip_foreign"] = tp.strip_foreign;
    j["squeeze_repeats"] = tp.squeeze_repeats;
    j["tokenize"] = tp.tokenize;
    j["remove_stopwords"] = tp.remove_stopwords;
    j["repeat_cap"] = tp.repeat_cap;
    j["stopwords"] = tp.stopwords;
    j["stopword_prefixes"] = tp.stopword_prefixes;
    return j;
}

inline NormalizationConfig textproc_from_json(const json& j) {
    NormalizationConfig tp;
    tp.strip_noise = detail::field<bool>(j, "strip_noise");
    tp.strip_web = detail::field<bool>(j, "strip_web");
    tp.normalize = detail::field<bool>(j, "normalize");
    tp.strip_foreign = detail::field<bool>(j, "strip_foreign");
    tp.squeeze_repeats = detail::field<bool>(j, "squeeze_repeats");
    tp.tokenize = detail::field<bool>(j, "tokenize");
    tp.remove_stopwords = detail::field<bool>(j, "remove_stopwords");
    tp.repeat_cap = detail::field<int>(j, "repeat_cap");
    tp.stopwords = detail::field<std::set<std::string>>(j, "stopwords");
    tp.stopword_prefixes = detail::field<std::vector<std::string>>(j, "stopword_prefixes");
    return tp;
}

inline json to_json(const TrainedPipeline& pipe) {
    json j;
    j["format"] = kModelFormat;
    j["kind"] = to_string(pipe.model.kind);
    j["hyperparams"] = {{"alpha", pipe.model.config.alpha},
                        {"binarize_threshold", pipe.model.config.binarize_threshold},
                        {"l2_lambda", pipe.model.config.l2_lambda},
                        {"epochs", pipe.model.config.epochs},
                        {"tol", pipe.model.config.tol},
                        {"seed", pipe.model.config.seed}};
    j["preprocess"] = to_json(pipe.textproc);
    j["preprocess"]["emoticons_happy"] = pipe.emoticons.happy;
    j["preprocess"]["emoticons_sad"] = pipe.emoticons.sad;
    j["vocabulary"] = to_json(pipe.vocab);

    json params;
    params["majority_class"] = pipe.model.majority_class;
    params["dim"] = pipe.model.dim;
    const json priors =
        json::array({pipe.model.class_log_prior[0], pipe.model.class_log_prior[1]});
    switch (pipe.model.kind) {
        case ClassifierKind::MultinomialNB:
            params["class_log_prior"] = priors;
            params["feature_log_prob_neg_class"] = pipe.model.feature_log_prob[0];
            params["feature_log_prob_pos_class"] = pipe.model.feature_log_prob[1];
            break;
        case ClassifierKind::BernoulliNB:
            params["class_log_prior"] = priors;
            params["feature_log_prob_neg_class"] = pipe.model.feature_log_prob[0];
            params["feature_log_prob_pos_class"] = pipe.model.feature_log_prob[1];
            params["feature_log_one_minus_neg_class"] = pipe.model.feature_log_prob_neg[0];
            params["feature_log_one_minus_pos_class"] = pipe.model.feature_log_prob_neg[1];
            break;
        case ClassifierKind::LogisticRegression:
        case ClassifierKind::LinearSVM:
            params["weights"] = pipe.model.weights;
            params["bias"] = pipe.model.bias;
            break;
    }
    j["parameters"] = std::move(params);

    if (pipe.meta.enabled) {
        json m;
        std::vector<std::string> names;
        for (std::size_t idx : pipe.meta.selected) names.push_back(kMetaFeatureNames[idx]);
        m["selected"] = names;
        m["mins"] = pipe.meta.scaler.mins;
        m["maxs"] = pipe.meta.scaler.maxs;
        j["meta"] = std::move(m);
    } else {
        j["meta"] = nullptr;
    }

    j["metadata"] = {{"positive_label", pipe.positive_label},
                     {"tn_label", pipe.tn_label},
                     {"seed", pipe.seed},
                     {"split", {{"test_fraction", pipe.test_fraction}}},
                     {"sampling",
                      {{"no_sample", pipe.no_sample},
                       {"other_quota", pipe.other_quota},
                       {"tunisian_quota", pipe.tunisian_quota}}}};
    return j;
}

inline TrainedPipeline pipeline_from_json(const json& j) {
    if (detail::field<std::string>(j, "format") != kModelFormat)
        throw FormatError("unsupported model format (want lahja-model-v1)");
    TrainedPipeline pipe;
    const json& pre = j.contains("preprocess") ? j.at("preprocess")
                                               : throw FormatError("missing field: preprocess");
    pipe.textproc = textproc_from_json(pre);
    pipe.emoticons.happy = detail::field<std::vector<std::string>>(pre, "emoticons_happy");
    pipe.emoticons.sad = detail::field<std::vector<std::string>>(pre, "emoticons_sad");
    pipe.textproc.emoticons = pipe.emoticons.all();
    if (!j.contains("vocabulary")) throw FormatError("missing field: vocabulary");
    pipe.vocab = vocabulary_from_json(j.at("vocabulary"));

    ClassifierModel& model = pipe.model;
    model.kind = classifier_kind_from(detail::field<std::string>(j, "kind"));
    if (!j.contains("hyperparams")) throw FormatError("missing field: hyperparams");
    const json& hp = j.at("hyperparams");
    model.config.kind = model.kind;
    model.config.alpha = detail::field<double>(hp, "alpha");
    model.config.binarize_threshold = detail::field<double>(hp, "binarize_threshold");
    model.config.l2_lambda = detail::field<double>(hp, "l2_lambda");
    model.config.epochs = detail::field<std::size_t>(hp, "epochs");
    model.config.tol = detail::field<double>(hp, "tol");
    model.config.seed = detail::field<std::uint64_t>(hp, "seed");

    if (!j.contains("parameters")) throw FormatError("missing field: parameters");
    const json& params = j.at("parameters");
    model.majority_class = detail::field<int>(params, "majority_class");
    model.dim = detail::field<std::size_t>(params, "dim");
    switch (model.kind) {
        case ClassifierKind::MultinomialNB:
        case ClassifierKind::BernoulliNB: {
            auto priors = detail::field<std::vector<double>>(params, "class_log_prior");
            if (priors.size() != 2) throw FormatError("malformed field: class_log_prior");
            model.class_log_prior[0] = priors[0];
            model.class_log_prior[1] = priors[1];
            model.feature_log_prob[0] =
                detail::field<std::vector<double>>(params, "feature_log_prob_neg_class");
            model.feature_log_prob[1] =
                detail::field<std::vector<double>>(params, "feature_log_prob_pos_class");
            if (model.kind == ClassifierKind::BernoulliNB) {
                model.feature_log_prob_neg[0] = detail::field<std::vector<double>>(
                    params, "feature_log_one_minus_neg_class");
                model.feature_log_prob_neg[1] = detail::field<std::vector<double>>(
                    params, "feature_log_one_minus_pos_class");
                for (int c = 0; c < 2; ++c) {
                    model.bnb_base[c] = 0.0;
                    for (double v : model.feature_log_prob_neg[c]) model.bnb_base[c] += v;
                }
            }
            if (model.feature_log_prob[0].size() != model.dim ||
                model.feature_log_prob[1].size() != model.dim)
                throw FormatError("malformed field: feature_log_prob tables");
            break;
        }
        case ClassifierKind::LogisticRegression:
        case ClassifierKind::LinearSVM:
            model.weights = detail::field<std::vector<double>>(params, "weights");
            model.bias = detail::field<double>(params, "bias");
            if (model.weights.size() != model.dim)
                throw FormatError("malformed field: weights");
            break;
    }

    if (!j.contains("meta")) throw FormatError("missing field: meta");
    if (!j.at("meta").is_null()) {
        const json& m = j.at("meta");
        pipe.meta.enabled = true;
        auto names = detail::field<std::vector<std::string>>(m, "selected");
        for (const auto& name : names) {
            bool found = false;
            for (std::size_t i = 0; i < kMetaFeatureCount; ++i)
                if (name == kMetaFeatureNames[i]) {
                    pipe.meta.selected.push_back(i);
                    found = true;
                }
            if (!found) throw FormatError("malformed field: meta.selected");
        }
        pipe.meta.scaler.mins = detail::field<std::vector<double>>(m, "mins");
        pipe.meta.scaler.maxs = detail::field<std::vector<double>>(m, "maxs");
        pipe.meta.scaler.fitted = true;
    }

    if (!j.contains("metadata")) throw FormatError("missing field: metadata");
    const json& meta = j.at("metadata");
    pipe.positive_label = detail::field<std::string>(meta, "positive_label");
    pipe.seed = detail::field<std::uint64_t>(meta, "seed");
    if (meta.contains("tn_label")) pipe.tn_label = meta.at("tn_label").get<std::string>();
    if (meta.contains("split") && meta.at("split").contains("test_fraction"))
        pipe.test_fraction = meta.at("split").at("test_fraction").get<double>();
    if (meta.contains("sampling")) {
        const json& s = meta.at("sampling");
        pipe.no_sample = detail::field<bool>(s, "no_sample");
        pipe.other_quota = detail::field<std::int64_t>(s, "other_quota");
        pipe.tunisian_quota = detail::field<std::size_t>(s, "tunisian_quota");
    }
    return pipe;
}

inline void save_pipeline(const TrainedPipeline& pipe, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write model file: " + path);
    out << to_json(pipe).dump(2) << '\n';
}

inline TrainedPipeline load_pipeline(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open model file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    return pipeline_from_json(j);
}

inline json to_json(const EvalReport& r) {
    json j;
    j["format"] = kReportFormat;
    j["config"] = {{"classifier", r.classifier},
                   {"word_range", json::array({r.word_range.lo, r.word_range.hi})},
                   {"char_range", json::array({r.char_range.lo, r.char_range.hi})},
                   {"seed", r.seed},
                   {"test_fraction", r.test_fraction},
                   {"positive_label", r.positive_label},
                   {"train_docs", r.train_docs},
                   {"test_docs", r.test_docs},
                   {"use_meta", r.use_meta}};
    j["confusion"] = {{"tp", r.cm.tp}, {"fp", r.cm.fp}, {"fn", r.cm.fn}, {"tn", r.cm.tn}};
    j["metrics"] = {{"accuracy", r.basic.accuracy},
                    {"precision", r.basic.precision},
                    {"recall", r.basic.recall},
                    {"f1", r.basic.f1},
                    {"degenerate_precision", r.basic.degenerate_precision},
                    {"degenerate_recall", r.basic.degenerate_recall},
                    {"log_loss_prob", r.log_loss_prob},
                    {"log_loss_hard", r.log_loss_hard},
                    {"log_loss_eps", kLogLossEps},
                    {"cohen_kappa", r.kappa},
                    {"mcc", r.mcc_value},
                    {"auc", r.roc.auc},
                    {"proba_uncalibrated", r.proba_uncalibrated}};
    json points = json::array();
    for (const auto& [fpr, tpr] : r.roc.points) points.push_back(json::array({fpr, tpr}));
    j["roc"] = std::move(points);
    return j;
}

inline json to_json(const MetaSelection& sel) {
    json features = json::object();
    for (const auto& f : sel.features) {
        json row;
        row["testable"] = f.testable;
        row["significant"] = f.significant;
        if (f.testable) {
            row["statistic"] = f.result.statistic;
            row["dof"] = f.result.dof;
            row["p_value"] = f.result.p_value;
        }
        if (!f.bin_edges.empty()) row["bins"] = f.bin_edges;
        features[f.name] = std::move(row);
    }
    json j;
    j["alpha"] = sel.alpha;
    j["continuity_correction"] = false;
    j["features"] = std::move(features);
    j["selected"] = sel.selected();
    return j;
}

}  // namespace lahja
