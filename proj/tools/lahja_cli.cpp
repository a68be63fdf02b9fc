// lahja: Libyan-dialect identification pipeline.
//
// Subcommands: clean, analyze, chi2, train, evaluate, sweep, predict.
// Exit codes: 0 success, 1 pipeline error, 2 usage or I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lahja/lahja.hpp"

namespace fs = std::filesystem;
using lahja::json;

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::vector<std::string> lines;
    std::istream* in = &std::cin;
    std::ifstream file;
    if (path != "-") {
        file.open(path, std::ios::binary);
        if (!file) throw lahja::ParseError("cannot open input: " + path);
        in = &file;
    }
    std::string line;
    while (std::getline(*in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty() || out_path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw lahja::ParseError("cannot write output: " + out_path);
    out << content;
}

// Dataset options shared by the corpus-consuming commands.
struct DatasetOpts {
    std::string path;
    bool csv = false;
    std::size_t label_column = 0;
    std::size_t text_column = 1;

    lahja::LabeledCorpus load() const {
        return csv ? lahja::load_csv(path, label_column, text_column) : lahja::load_tsv(path);
    }

    void attach(CLI::App* cmd) {
        cmd->add_option("dataset", path, "label<TAB>text dataset (UTF-8)")->required();
        cmd->add_flag("--csv", csv, "dataset is CSV with a header row");
        cmd->add_option("--label-column", label_column, "CSV label column (0-based)");
        cmd->add_option("--text-column", text_column, "CSV text column (0-based)");
    }
};

// flags > config file > defaults: a value from the config file is applied
// only when the flag exists on this subcommand and was not passed.
struct ConfigMerge {
    CLI::App* cmd;
    lahja::TomlConfig toml;

    bool passed(const std::string& flag) const {
        const CLI::Option* opt = cmd->get_option_no_throw(flag);
        return opt != nullptr && opt->count() > 0;
    }
    bool fillable(const std::string& flag, const std::string& key) const {
        return cmd->get_option_no_throw(flag) != nullptr && !passed(flag) && toml.has(key);
    }

    template <typename T>
    void number(const std::string& flag, const std::string& key, T& slot) const {
        if (fillable(flag, key)) slot = static_cast<T>(toml.get_double(key));
    }
    void integer(const std::string& flag, const std::string& key, std::size_t& slot) const {
        if (fillable(flag, key)) slot = static_cast<std::size_t>(toml.get_int(key));
    }
    void integer64(const std::string& flag, const std::string& key, std::uint64_t& slot) const {
        if (fillable(flag, key)) slot = static_cast<std::uint64_t>(toml.get_int(key));
    }
    void text(const std::string& flag, const std::string& key, std::string& slot) const {
        if (fillable(flag, key)) slot = toml.get_string(key);
    }
    void boolean(const std::string& flag, const std::string& key, bool& slot) const {
        if (fillable(flag, key)) slot = toml.get_bool(key);
    }
};

struct RunOpts {
    lahja::RunConfig cfg;
    std::string classifier = "multinomial_nb";
    std::size_t word_lo = 1, word_hi = 2;
    std::size_t char_lo = 1, char_hi = 5;
    std::int64_t other_quota = -1;
    std::string config_path;

    // cleaning + config options every command understands
    void attach_common(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "TOML config file (flags win)");
        cmd->add_option("--positive", cfg.positive, "positive dialect label")
            ->default_val("LY");
        cmd->add_option("--stopwords", cfg.stopwords_path, "stop-word list file");
        cmd->add_flag("--no-stopwords", cfg.no_stopwords, "skip the stop-word step");
        cmd->add_option("--repeat-cap", cfg.repeat_cap, "letters kept from runs of >= 3");
    }

    void attach_sampling(CLI::App* cmd) {
        cmd->add_option("--tn-label", cfg.tn_label, "similar-dialect label for biased sampling");
        cmd->add_option("--other-quota", other_quota,
                        "size of the OTHER side (-1: one per positive doc)");
        cmd->add_option("--tunisian-quota", cfg.tunisian_quota,
                        "docs from --tn-label inside the OTHER side");
        cmd->add_flag("--no-sample", cfg.no_sample, "keep every document, relabel only");
    }

    void attach_training(CLI::App* cmd, bool with_classifier, bool with_word_ranges) {
        if (with_classifier)
            cmd->add_option("--classifier", classifier,
                            "multinomial_nb | bernoulli_nb | logistic_regression | linear_svm");
        if (with_word_ranges) {
            cmd->add_option("--word-lo", word_lo, "word n-gram min order (0 disables)");
            cmd->add_option("--word-hi", word_hi, "word n-gram max order");
        }
        cmd->add_option("--char-lo", char_lo, "char n-gram min order (0 disables)");
        cmd->add_option("--char-hi", char_hi, "char n-gram max order");
        cmd->add_option("--min-df", cfg.min_df, "drop n-grams seen in fewer documents");
        cmd->add_flag("--meta", cfg.use_meta, "append selected meta-feature columns");
        cmd->add_option("--nb-alpha", cfg.train.alpha, "naive Bayes smoothing");
        cmd->add_option("--binarize-threshold", cfg.train.binarize_threshold,
                        "Bernoulli NB presence threshold");
        cmd->add_option("--lambda", cfg.train.l2_lambda, "L2 regularization strength");
        cmd->add_option("--epochs", cfg.train.epochs, "max SGD passes");
        cmd->add_option("--tol", cfg.train.tol, "relative objective improvement stop");
        cmd->add_option("--test-fraction", cfg.test_fraction, "held-out fraction");
        cmd->add_option("--seed", cfg.seed, "master seed for sampling/split/shuffle");
    }

    void finalize(CLI::App* cmd) {
        if (!config_path.empty()) {
            ConfigMerge merge{cmd, lahja::TomlConfig::parse_file(config_path)};
            merge.text("--positive", "positive", cfg.positive);
            merge.text("--stopwords", "stopwords", cfg.stopwords_path);
            merge.boolean("--no-stopwords", "no_stopwords", cfg.no_stopwords);
            merge.number("--repeat-cap", "repeat_cap", cfg.repeat_cap);
            merge.text("--tn-label", "tn_label", cfg.tn_label);
            if (!merge.passed("--other-quota") && merge.toml.has("other_quota"))
                other_quota = merge.toml.get_int("other_quota");
            merge.integer("--tunisian-quota", "tunisian_quota", cfg.tunisian_quota);
            merge.boolean("--no-sample", "no_sample", cfg.no_sample);
            merge.text("--classifier", "classifier", classifier);
            merge.integer("--word-lo", "word_lo", word_lo);
            merge.integer("--word-hi", "word_hi", word_hi);
            merge.integer("--char-lo", "char_lo", char_lo);
            merge.integer("--char-hi", "char_hi", char_hi);
            merge.integer("--min-df", "min_df", cfg.min_df);
            merge.boolean("--meta", "meta", cfg.use_meta);
            merge.number("--nb-alpha", "nb_alpha", cfg.train.alpha);
            merge.number("--binarize-threshold", "binarize_threshold",
                         cfg.train.binarize_threshold);
            merge.number("--lambda", "l2_lambda", cfg.train.l2_lambda);
            merge.integer("--epochs", "epochs", cfg.train.epochs);
            merge.number("--tol", "tol", cfg.train.tol);
            merge.number("--test-fraction", "test_fraction", cfg.test_fraction);
            merge.integer64("--seed", "seed", cfg.seed);
        }
        cfg.train.kind = lahja::classifier_kind_from(classifier);
        cfg.word_range = word_lo == 0 ? std::nullopt
                                      : std::make_optional(lahja::NgramRange{word_lo, word_hi});
        cfg.char_range = char_lo == 0 ? std::nullopt
                                      : std::make_optional(lahja::NgramRange{char_lo, char_hi});
        cfg.other_quota = other_quota < 0
                              ? std::nullopt
                              : std::make_optional(static_cast<std::size_t>(other_quota));
    }
};

int cmd_clean(const std::string& input, const std::string& out_path, RunOpts& opts,
              CLI::App* cmd) {
    opts.finalize(cmd);
    auto [tp, emo] = lahja::make_textproc(opts.cfg);
    std::string out;
    for (const auto& line : read_lines(input)) {
        out += lahja::join_tokens(lahja::preprocess(line, tp));
        out += '\n';
    }
    write_output(out_path, out);
    return 0;
}

int cmd_analyze(const DatasetOpts& data, const std::string& out_path, std::size_t top_k,
                RunOpts& opts, CLI::App* cmd) {
    opts.finalize(cmd);
    auto [tp, emo] = lahja::make_textproc(opts.cfg);
    lahja::LabeledCorpus corpus = data.load();

    json j;
    j["dataset"] = data.path;
    j["labels"] = corpus.label_counts();

    json stats = json::object();
    json tops = json::object();
    for (std::size_t n = 1; n <= 3; ++n) {
        auto st = lahja::ngram_stats(corpus, n, tp);
        stats[std::to_string(n)] = {{"distinct_tokens", st.distinct_tokens},
                                    {"total_tokens", st.total_tokens},
                                    {"hapax_count", st.hapax_count}};
        lahja::LabeledCorpus positives;
        positives.positive_label = opts.cfg.positive;
        for (const auto& d : corpus.docs)
            if (d.label == opts.cfg.positive) positives.docs.push_back(d);
        json top = json::array();
        if (!positives.docs.empty()) {
            for (const auto& [gram, count] : lahja::top_ngrams(positives, n, top_k, tp))
                top.push_back(json::array({gram, count}));
        }
        tops[std::to_string(n)] = std::move(top);
    }
    j["ngram_stats"] = std::move(stats);
    j["top_ngrams_positive"] = std::move(tops);

    // positive-vs-rest descriptive analytics
    lahja::LabeledCorpus grouped;
    grouped.positive_label = opts.cfg.positive;
    for (const auto& d : corpus.docs)
        grouped.docs.push_back(
            {d.text, d.label == opts.cfg.positive ? opts.cfg.positive : lahja::kOtherLabel});
    json hist = json::object();
    json entropy = json::object();
    for (const auto& cls : {opts.cfg.positive, std::string(lahja::kOtherLabel)}) {
        bool present = false;
        for (const auto& d : grouped.docs) present |= (d.label == cls);
        if (!present) continue;
        json h = json::object();
        for (const auto& [len, count] : lahja::length_histogram(grouped, cls, tp))
            h[std::to_string(len)] = count;
        hist[cls] = std::move(h);
        try {
            entropy[cls] = lahja::class_token_entropy(grouped, cls, tp);
        } catch (const lahja::DomainError&) {
            entropy[cls] = nullptr;  // class present but empty after cleaning
        }
    }
    j["length_histogram"] = std::move(hist);
    j["token_entropy_bits"] = std::move(entropy);

    write_output(out_path, j.dump(2) + "\n");
    return 0;
}

int cmd_chi2(const DatasetOpts& data, const std::string& out_path, double alpha, RunOpts& opts,
             CLI::App* cmd) {
    opts.finalize(cmd);
    auto [tp, emo] = lahja::make_textproc(opts.cfg);
    lahja::LabeledCorpus corpus = data.load();
    lahja::LabeledCorpus task;
    task.positive_label = opts.cfg.positive;
    for (const auto& d : corpus.docs)
        task.docs.push_back(
            {d.text, d.label == opts.cfg.positive ? opts.cfg.positive : lahja::kOtherLabel});
    lahja::MetaSelection sel = lahja::select_meta(task, emo, alpha);
    write_output(out_path, lahja::to_json(sel).dump(2) + "\n");
    return 0;
}

int cmd_train(const DatasetOpts& data, const std::string& model_out,
              const std::string& report_out, RunOpts& opts, CLI::App* cmd) {
    opts.finalize(cmd);
    lahja::LabeledCorpus corpus = data.load();
    lahja::LabeledCorpus task = lahja::prepare_task(corpus, opts.cfg);
    auto [train, test] = lahja::stratified_split(task, opts.cfg.test_fraction,
                                                 opts.cfg.split_seed());
    lahja::TrainedPipeline pipe = lahja::train_pipeline(train, opts.cfg);
    lahja::save_pipeline(pipe, model_out);

    lahja::EvalReport train_rep = lahja::evaluate(pipe, train, opts.cfg, train.docs.size());
    json j;
    j["model"] = model_out;
    j["task_docs"] = task.docs.size();
    j["train_docs"] = train.docs.size();
    j["test_docs"] = test.docs.size();
    j["train_accuracy"] = train_rep.basic.accuracy;
    j["vocabulary_columns"] = pipe.vocab.dim();
    j["report"] = lahja::to_json(train_rep);
    write_output(report_out, j.dump(2) + "\n");
    return 0;
}

int cmd_evaluate(const DatasetOpts& data, const std::string& model_path,
                 const std::string& out_path, bool use_model_split, RunOpts& opts,
                 CLI::App* cmd) {
    opts.finalize(cmd);
    lahja::TrainedPipeline pipe = lahja::load_pipeline(model_path);
    lahja::RunConfig cfg = opts.cfg;
    cfg.positive = pipe.positive_label;
    cfg.train.kind = pipe.model.kind;
    lahja::LabeledCorpus corpus = data.load();

    lahja::LabeledCorpus eval_set;
    if (use_model_split) {
        cfg.seed = pipe.seed;
        cfg.test_fraction = pipe.test_fraction;
        cfg.no_sample = pipe.no_sample;
        cfg.tn_label = pipe.tn_label;
        cfg.tunisian_quota = pipe.tunisian_quota;
        cfg.other_quota = pipe.other_quota < 0
                              ? std::nullopt
                              : std::make_optional(static_cast<std::size_t>(pipe.other_quota));
        lahja::LabeledCorpus task = lahja::prepare_task(corpus, cfg);
        auto [train, test] = lahja::stratified_split(task, cfg.test_fraction, cfg.split_seed());
        eval_set = std::move(test);
    } else {
        eval_set.positive_label = cfg.positive;
        for (const auto& d : corpus.docs)
            eval_set.docs.push_back(
                {d.text, d.label == cfg.positive ? cfg.positive : lahja::kOtherLabel});
    }
    lahja::EvalReport rep = lahja::evaluate(pipe, eval_set, cfg, 0);
    write_output(out_path, lahja::to_json(rep).dump(2) + "\n");
    return 0;
}

int cmd_sweep(const DatasetOpts& data, const std::string& out_dir, RunOpts& opts,
              CLI::App* cmd) {
    opts.finalize(cmd);
    lahja::LabeledCorpus corpus = data.load();
    lahja::LabeledCorpus task = lahja::prepare_task(corpus, opts.cfg);
    std::vector<lahja::EvalReport> reports = lahja::run_sweep(task, opts.cfg);

    json all = json::array();
    for (const auto& r : reports) all.push_back(lahja::to_json(r));
    std::string acc_table = lahja::render_accuracy_table(reports);
    std::string agr_table = lahja::render_agreement_table(reports);

    fs::create_directories(out_dir);
    write_output((fs::path(out_dir) / "sweep_reports.json").string(), all.dump(2) + "\n");
    write_output((fs::path(out_dir) / "table_accuracy.md").string(), acc_table);
    write_output((fs::path(out_dir) / "table_agreement.md").string(), agr_table);
    for (const auto& r : reports) {
        std::string name = "roc_" + r.classifier + "_w" + std::to_string(r.word_range.lo) +
                           "-" + std::to_string(r.word_range.hi) + ".csv";
        write_output((fs::path(out_dir) / name).string(), lahja::roc_csv(r));
    }
    std::cout << acc_table << "\n" << agr_table;
    return 0;
}

int cmd_predict(const std::string& model_path, const std::string& input,
                const std::string& out_path) {
    lahja::TrainedPipeline pipe = lahja::load_pipeline(model_path);
    std::string out;
    for (const auto& line : read_lines(input)) {
        if (line.empty()) continue;
        lahja::SparseVector x = lahja::vectorize_raw(pipe, line);
        double score = lahja::decision_score(pipe.model, x);
        double proba = lahja::sigmoid(score);
        int label = score > 0 ? 1 : (score < 0 ? 0 : pipe.model.majority_class);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "\t%.9g\t%.9g\n", score, proba);
        out += (label == 1 ? pipe.positive_label : lahja::kOtherLabel) + std::string(buf);
    }
    write_output(out_path, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"lahja: Libyan-dialect identification pipeline"};
    app.require_subcommand(1);

    // clean
    auto* clean = app.add_subcommand("clean", "run the cleaning pipeline line by line");
    std::string clean_input, clean_out;
    RunOpts clean_opts;
    clean->add_option("input", clean_input, "text file, one sentence per line ('-' = stdin)")
        ->required();
    clean->add_option("--out", clean_out, "output path (default stdout)");
    clean_opts.attach_common(clean);

    // analyze
    auto* analyze = app.add_subcommand("analyze", "corpus analytics as JSON");
    DatasetOpts analyze_data;
    std::string analyze_out;
    std::size_t analyze_topk = 10;
    RunOpts analyze_opts;
    analyze_data.attach(analyze);
    analyze->add_option("--top-k", analyze_topk, "top n-grams per order");
    analyze->add_option("--out", analyze_out, "output path (default stdout)");
    analyze_opts.attach_common(analyze);

    // chi2
    auto* chi2 = app.add_subcommand("chi2", "meta-feature chi-square selection as JSON");
    DatasetOpts chi2_data;
    std::string chi2_out;
    double chi2_alpha = 0.05;
    RunOpts chi2_opts;
    chi2_data.attach(chi2);
    chi2->add_option("--alpha", chi2_alpha, "significance level");
    chi2->add_option("--out", chi2_out, "output path (default stdout)");
    chi2_opts.attach_common(chi2);

    // train
    auto* train = app.add_subcommand("train", "train a classifier, write a model file");
    DatasetOpts train_data;
    std::string train_model_out = "model.json", train_report_out;
    RunOpts train_opts;
    train_data.attach(train);
    train->add_option("--model-out", train_model_out, "model file path");
    train->add_option("--report-out", train_report_out, "train report path (default stdout)");
    train_opts.attach_common(train);
    train_opts.attach_sampling(train);
    train_opts.attach_training(train, true, true);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "evaluate a model on a dataset");
    DatasetOpts eval_data;
    std::string eval_model, eval_out;
    bool eval_use_split = false;
    RunOpts eval_opts;
    eval_data.attach(evaluate);
    evaluate->add_option("--model", eval_model, "model file")->required();
    evaluate->add_flag("--use-model-split", eval_use_split,
                       "rebuild the model's train/test split and score the test side");
    evaluate->add_option("--out", eval_out, "output path (default stdout)");
    eval_opts.attach_common(evaluate);

    // sweep
    auto* sweep = app.add_subcommand("sweep",
                                     "4 classifiers x word ranges (1,1)-(1,3): reports + tables");
    DatasetOpts sweep_data;
    std::string sweep_out_dir = "sweep_out";
    RunOpts sweep_opts;
    sweep_data.attach(sweep);
    sweep->add_option("--out-dir", sweep_out_dir, "directory for reports/tables/ROC files");
    sweep_opts.attach_common(sweep);
    sweep_opts.attach_sampling(sweep);
    sweep_opts.attach_training(sweep, false, false);

    // predict
    auto* predict = app.add_subcommand("predict", "label lines with a trained model");
    std::string predict_model, predict_input, predict_out;
    predict->add_option("--model", predict_model, "model file")->required();
    predict->add_option("input", predict_input, "text file ('-' = stdin)")->required();
    predict->add_option("--out", predict_out, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (clean->parsed()) return cmd_clean(clean_input, clean_out, clean_opts, clean);
        if (analyze->parsed())
            return cmd_analyze(analyze_data, analyze_out, analyze_topk, analyze_opts, analyze);
        if (chi2->parsed()) return cmd_chi2(chi2_data, chi2_out, chi2_alpha, chi2_opts, chi2);
        if (train->parsed())
            return cmd_train(train_data, train_model_out, train_report_out, train_opts, train);
        if (evaluate->parsed())
            return cmd_evaluate(eval_data, eval_model, eval_out, eval_use_split, eval_opts,
                                evaluate);
        if (sweep->parsed()) return cmd_sweep(sweep_data, sweep_out_dir, sweep_opts, sweep);
        if (predict->parsed()) return cmd_predict(predict_model, predict_input, predict_out);
    } catch (const lahja::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
