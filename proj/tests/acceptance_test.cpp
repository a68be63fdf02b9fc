// Acceptance suite: one test per criterion, each printing a single
// [ACCEPTANCE] pass/fail line. Tolerances are pinned in the assertions.
#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <map>
#include <string>
#include <vector>

#include "lahja/lahja.hpp"

#include "benchmark_rows.hpp"
#include "golden_data.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace lahja;

namespace {

struct CriterionLine {
    std::string name;
    explicit CriterionLine(std::string n) : name(std::move(n)) {}
    ~CriterionLine() {
        bool failed = ::testing::Test::HasFailure();
        std::printf("[ACCEPTANCE] %s: %s\n", name.c_str(), failed ? "FAIL" : "PASS");
        std::fflush(stdout);
    }
};

NormalizationConfig shipped_config() {
    NormalizationConfig cfg;
    load_stopwords(std::string(LAHJA_DATA_DIR) + "/stopwords_ar.txt", cfg);
    for (const char* file : {"/emoticons_happy.txt", "/emoticons_sad.txt"})
        for (auto& p : load_patterns(std::string(LAHJA_DATA_DIR) + file))
            cfg.emoticons.push_back(std::move(p));
    return cfg;
}

constexpr double kHardLossPerError = 34.538776394910684;  // -ln(1e-15)

}  // namespace

// 1. The worked cleaning examples reproduce their published outputs exactly;
//    the two documented divergences stay pinned.
TEST(Acceptance, Criterion1GoldenCleaningSuite) {
    CriterionLine line("criterion 1 (golden cleaning suite)");
    NormalizationConfig cfg = shipped_config();

    // hashtag/URL tweet, at the noise+web composition it illustrates
    EXPECT_EQ(strip_web(strip_noise(golden::kWebRaw, cfg)), golden::kWebCleaned);

    // mixed-script sentence through the foreign-character step
    EXPECT_EQ(strip_foreign(normalize_arabic(strip_web(strip_noise(golden::kForeignRaw, cfg)))),
              golden::kForeignCleaned);

    // letter repetition collapses; the published first word drops a letter
    // no squeezing rule produces (typo), pinned as a divergence
    EXPECT_EQ(squeeze_repeats(golden::kRepeatWord, cfg.repeat_cap),
              golden::kRepeatWordSqueezed);
    std::string repeat_full = squeeze_repeats(
        strip_foreign(normalize_arabic(strip_web(strip_noise(golden::kRepeatRaw, cfg)))),
        cfg.repeat_cap);
    EXPECT_EQ(repeat_full, golden::kRepeatByRules);
    EXPECT_NE(repeat_full, std::string(golden::kRepeatPrinted));

    // tokenization, order preserved
    TokenList toks =
        tokenize(strip_foreign(normalize_arabic(strip_web(strip_noise(golden::kTokenizeRaw)))));
    ASSERT_EQ(toks.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(toks[i], golden::kTokenizeTokens[i]);

    // stop-word sentence reproduces the published content words exactly
    TokenList content = preprocess(golden::kStopwordRaw, cfg);
    ASSERT_EQ(content.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_EQ(content[i], golden::kStopwordTokens[i]);

    // normalization divergence: the stated rules give a plain yaa form, not
    // the published doubled-lam form
    EXPECT_EQ(normalize_arabic(golden::kNormalizeRaw), golden::kNormalizeByRules);
    EXPECT_NE(std::string(golden::kNormalizeByRules), golden::kNormalizePrinted);
}

// 2. Hard-label clipped log loss and the balanced-set kappa identity explain
//    the published agreement metrics row by row.
TEST(Acceptance, Criterion2LogLossAndKappaIdentities) {
    CriterionLine line("criterion 2 (log-loss and kappa identities across 12 rows)");
    for (const auto& row : bench::kRows) {
        double predicted_loss = (1.0 - row.accuracy) * kHardLossPerError;
        EXPECT_NEAR(predicted_loss, row.log_loss, 1e-3)
            << row.classifier << " (" << row.word_lo << "," << row.word_hi << ")";
        EXPECT_NEAR(2.0 * row.accuracy - 1.0, row.kappa, 2e-4)
            << row.classifier << " (" << row.word_lo << "," << row.word_hi << ")";
    }
    // spot value: the multinomial (1,2) row
    EXPECT_NEAR(0.14411 * kHardLossPerError, 4.97743, 1e-3);
    EXPECT_NEAR(2.0 * 0.84411 - 1.0, 0.68822, 1e-9);
}

// 3. The confusion matrix reconstructed from each accuracy/precision/recall
//    row under balanced classes reproduces the published MCC.
TEST(Acceptance, Criterion3MccReconstruction) {
    CriterionLine line("criterion 3 (MCC from reconstructed confusion matrices)");
    for (const auto& row : bench::kRows) {
        const double scale = 1e7;
        double tp = row.recall * 0.5;
        double fp = tp * (1.0 - row.precision) / row.precision;
        ConfusionMatrix cm;
        cm.tp = static_cast<std::size_t>(std::llround(tp * scale));
        cm.fp = static_cast<std::size_t>(std::llround(fp * scale));
        cm.fn = static_cast<std::size_t>(std::llround((0.5 - tp) * scale));
        cm.tn = static_cast<std::size_t>(std::llround((0.5 - fp) * scale));
        // consistency: the reconstruction reproduces the row's own accuracy
        EXPECT_NEAR(basic_metrics(cm).accuracy, row.accuracy, 1e-4);
        EXPECT_NEAR(mcc(cm), row.mcc, 2e-3)
            << row.classifier << " (" << row.word_lo << "," << row.word_hi << ")";
    }
}

// 4. Naive Bayes matches brute-force enumeration; the logistic gradient
//    matches central finite differences.
TEST(Acceptance, Criterion4ClassifierOracles) {
    CriterionLine line("criterion 4 (classifier oracles)");
    Rng rng(20240601);
    int mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto [X, y] = oracle::random_instance(rng, 12, 8);
        TrainConfig mnb;
        mnb.kind = ClassifierKind::MultinomialNB;
        mismatches += oracle::nb_mismatches(fit(X, y, mnb), X, y, false);
        TrainConfig bnb;
        bnb.kind = ClassifierKind::BernoulliNB;
        mismatches += oracle::nb_mismatches(fit(X, y, bnb), X, y, true);
    }
    EXPECT_EQ(mismatches, 0);

    Rng grng(424242);
    int gradient_failures = 0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<SparseVector> X;
        std::vector<int> y;
        for (std::size_t i = 0; i < 10; ++i) {
            SparseVector v;
            v.dim = 8;
            for (std::uint32_t j = 0; j < 8; ++j) {
                double val = (static_cast<double>(grng.below(200)) - 100.0) / 50.0;
                if (grng.below(3) != 0) v.entries.emplace_back(j, val);
            }
            X.push_back(std::move(v));
            y.push_back(i % 2);
        }
        std::vector<double> w(8);
        for (auto& wj : w) wj = (static_cast<double>(grng.below(200)) - 100.0) / 100.0;
        double b = (static_cast<double>(grng.below(100)) - 50.0) / 100.0;
        double lambda = 0.01;
        std::vector<double> grad;
        double grad_b;
        logistic_objective(X, y, w, b, lambda, &grad, &grad_b);
        const double h = 1e-6;
        for (std::size_t j = 0; j < 8; ++j) {
            std::vector<double> wp = w, wm = w;
            wp[j] += h;
            wm[j] -= h;
            double numeric = (logistic_objective(X, y, wp, b, lambda) -
                              logistic_objective(X, y, wm, b, lambda)) /
                             (2.0 * h);
            if (std::fabs(numeric - grad[j]) / std::max(std::fabs(numeric), 1e-8) >= 1e-5)
                ++gradient_failures;
        }
    }
    EXPECT_EQ(gradient_failures, 0);
}

// 5. Unit norms and the closed-form smoothed idf.
TEST(Acceptance, Criterion5VectorizerProperties) {
    CriterionLine line("criterion 5 (vectorizer norm and idf form)");
    auto corpus = synth::make_task({.n_docs = 300, .vocab_per_class = 50, .seed = 77});
    auto cleaned = clean_corpus(corpus, NormalizationConfig{});
    Vocabulary vocab = fit_vocabulary(cleaned, NgramRange{1, 2}, NgramRange{1, 5});
    for (const auto& doc : cleaned) {
        SparseVector v = transform(doc, vocab);
        if (!v.entries.empty()) EXPECT_NEAR(v.norm(), 1.0, 1e-9);
    }

    // two-document hand example, exact
    std::vector<CleanDoc> docs = {CleanDoc::of({"a", "b"}), CleanDoc::of({"a"})};
    Vocabulary small = fit_vocabulary(docs, NgramRange{1, 1}, std::nullopt);
    EXPECT_DOUBLE_EQ(small.idf(small.word_map.at("a")), std::log((1.0 + 2.0) / (1.0 + 2.0)) + 1.0);
    EXPECT_DOUBLE_EQ(small.idf(small.word_map.at("b")), std::log((1.0 + 2.0) / (1.0 + 1.0)) + 1.0);
    SparseVector v = transform(docs[0], small);
    double wa = std::log(3.0 / 3.0) + 1.0;
    double wb = std::log(3.0 / 2.0) + 1.0;
    double norm = std::sqrt(wa * wa + wb * wb);
    EXPECT_DOUBLE_EQ(v.entries[small.word_map.at("a")].second, wa / norm);
    EXPECT_DOUBLE_EQ(v.entries[small.word_map.at("b")].second, wb / norm);
}

// 6. The chi-square statistic and its p-value against the quadrature oracle.
TEST(Acceptance, Criterion6ChiSquare) {
    CriterionLine line("criterion 6 (chi-square worked example and oracle)");
    ContingencyTable t;
    t.counts = {{20, 10}, {5, 25}};
    Chi2Result r = chi_square(t, 0.05);
    EXPECT_NEAR(r.statistic, 15.4286, 1e-3);
    EXPECT_EQ(r.dof, 1u);
    double oracle_p = oracle::chi2_sf_quadrature(r.statistic, r.dof);
    EXPECT_NEAR(r.p_value, oracle_p, 1e-8);
    EXPECT_NEAR(r.p_value, 8.6e-5, 1e-5);
    EXPECT_TRUE(r.significant);

    ContingencyTable indep;
    indep.counts = {{10, 10}, {10, 10}};
    Chi2Result r0 = chi_square(indep, 0.05);
    EXPECT_DOUBLE_EQ(r0.statistic, 0.0);
    EXPECT_DOUBLE_EQ(r0.p_value, 1.0);
}

// 7. End-to-end synthetic benchmark: the full sweep finishes quickly, every
//    classifier clears 0.90 accuracy, and the multinomial model leads.
TEST(Acceptance, Criterion7SyntheticBenchmark) {
    CriterionLine line("criterion 7 (synthetic end-to-end sweep)");
    auto task = synth::make_task({.n_docs = 2000,
                                  .vocab_per_class = 120,
                                  .overlap = 0.30,
                                  .len_lo = 8,
                                  .len_hi = 15,
                                  .seed = 20240607,
                                  .shared_token_prob = 0.82});
    RunConfig cfg;
    cfg.no_sample = true;
    cfg.seed = 11;

    auto started = std::chrono::steady_clock::now();
    std::vector<EvalReport> reports = run_sweep(task, cfg);
    double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    EXPECT_LT(seconds, 60.0);
    ASSERT_EQ(reports.size(), 12u);

    std::map<std::string, double> best;
    for (const auto& r : reports) {
        best["all_min"] = best.count("all_min") ? std::min(best["all_min"], r.basic.accuracy)
                                                : r.basic.accuracy;
        auto& slot = best[r.classifier];
        slot = std::max(slot, r.basic.accuracy);
    }
    for (const char* kind :
         {"logistic_regression", "linear_svm", "multinomial_nb", "bernoulli_nb"})
        EXPECT_GE(best[kind], 0.90) << kind;
    double mnb = best["multinomial_nb"];
    EXPECT_GE(mnb + 1e-12, best["logistic_regression"]);
    EXPECT_GE(mnb + 1e-12, best["linear_svm"]);
    EXPECT_GE(mnb + 1e-12, best["bernoulli_nb"]);
}

// 8. Optional external reproduction, exercised only when the full corpus is
//    available locally (LAHJA_QADI_TSV). Not required for acceptance: the
//    source experiment's sampling seed, split, and hyperparameters are not
//    published, so only coarse agreement is checked.
TEST(Acceptance, Criterion8ExternalCorpusOptional) {
    const char* path = std::getenv("LAHJA_QADI_TSV");
    if (!path) {
        std::printf("[ACCEPTANCE] criterion 8 (external corpus reproduction): SKIP "
                    "(set LAHJA_QADI_TSV to enable)\n");
        GTEST_SKIP() << "external corpus not available";
    }
    CriterionLine line("criterion 8 (external corpus reproduction)");
    RunConfig cfg;
    cfg.tunisian_quota = 5000;
    LabeledCorpus corpus = load_tsv(path);
    LabeledCorpus task = prepare_task(corpus, cfg);
    auto [tp, emo] = make_textproc(cfg);
    NgramStats uni = ngram_stats(task, 1, tp);
    EXPECT_NEAR(static_cast<double>(uni.distinct_tokens), 199003.0, 0.02 * 199003.0);
    EXPECT_NEAR(static_cast<double>(uni.total_tokens), 1022966.0, 0.02 * 1022966.0);
    EXPECT_NEAR(static_cast<double>(uni.hapax_count), 132377.0, 0.02 * 132377.0);

    cfg.word_range = NgramRange{1, 2};
    cfg.train.kind = ClassifierKind::MultinomialNB;
    auto [pipe, report] = run_experiment(task, cfg);
    EXPECT_NEAR(report.basic.accuracy, 0.8589, 0.03);
}

// 9. Repeating the sweep with a fixed seed yields byte-identical reports.
TEST(Acceptance, Criterion9Determinism) {
    CriterionLine line("criterion 9 (sweep determinism)");
    auto task = synth::make_task({.n_docs = 300, .vocab_per_class = 50, .seed = 33});
    RunConfig cfg;
    cfg.no_sample = true;
    cfg.seed = 5;
    cfg.train.epochs = 6;

    auto serialize_all = [&] {
        std::vector<EvalReport> reports = run_sweep(task, cfg);
        json all = json::array();
        for (const auto& r : reports) all.push_back(to_json(r));
        return all.dump();
    };
    std::string first = serialize_all();
    std::string second = serialize_all();
    EXPECT_EQ(first, second);
    EXPECT_FALSE(first.empty());
}
