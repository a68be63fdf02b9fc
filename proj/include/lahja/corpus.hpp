#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lahja/errors.hpp"
#include "lahja/rng.hpp"
#include "lahja/textproc.hpp"
#include "lahja/utf8.hpp"

namespace lahja {

inline constexpr const char* kOtherLabel = "OTHER";

struct Document {
    std::string text;
    std::string label;
};

/// An ordered, immutable-after-build collection of labeled documents.
struct LabeledCorpus {
    std::vector<Document> docs;
    std::string positive_label;
    std::string source_path;
    std::uint64_t sampling_seed = 0;

    std::map<std::string, std::size_t> label_counts() const {
        std::map<std::string, std::size_t> counts;
        for (const auto& d : docs) ++counts[d.label];
        return counts;
    }

    std::size_t size() const { return docs.size(); }
};

struct NgramStats {
    std::size_t n = 0;
    std::size_t distinct_tokens = 0;
    std::size_t total_tokens = 0;
    std::size_t hapax_count = 0;
};

/// Reads `label<TAB>text` lines. Blank lines are skipped; a missing tab or
/// invalid UTF-8 raises ParseError with the 1-based line number.
inline LabeledCorpus load_tsv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open dataset: " + path);
    LabeledCorpus corpus;
    corpus.source_path = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!utf8::is_valid(line))
            throw ParseError("invalid UTF-8 at line " + std::to_string(lineno));
        auto tab = line.find('\t');
        if (tab == std::string::npos)
            throw ParseError("missing tab separator at line " + std::to_string(lineno));
        std::string label = line.substr(0, tab);
        std::string text = line.substr(tab + 1);
        // trim outer whitespace from the text
        auto first = text.find_first_not_of(" \t");
        auto last = text.find_last_not_of(" \t");
        text = (first == std::string::npos) ? std::string{} : text.substr(first, last - first + 1);
        if (label.empty())
            throw ParseError("empty label at line " + std::to_string(lineno));
        if (text.empty()) continue;
        corpus.docs.push_back({std::move(text), std::move(label)});
    }
    return corpus;
}

/// CSV ingest with a header row; label/text picked by 0-based column index.
/// Quoted fields follow the usual doubling rule.
inline LabeledCorpus load_csv(const std::string& path, std::size_t label_col,
                              std::size_t text_col) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open dataset: " + path);
    LabeledCorpus corpus;
    corpus.source_path = path;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!utf8::is_valid(line))
            throw ParseError("invalid UTF-8 at line " + std::to_string(lineno));
        std::vector<std::string> fields;
        std::string field;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            char c = line[i];
            if (quoted) {
                if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else if (c == '"') {
                    quoted = false;
                } else {
                    field.push_back(c);
                }
            } else if (c == '"' && field.empty()) {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else {
                field.push_back(c);
            }
        }
        fields.push_back(std::move(field));
        if (lineno == 1) continue;  // header
        if (label_col >= fields.size() || text_col >= fields.size())
            throw ParseError("missing column at line " + std::to_string(lineno));
        if (fields[label_col].empty())
            throw ParseError("empty label at line " + std::to_string(lineno));
        if (fields[text_col].empty()) continue;
        corpus.docs.push_back({fields[text_col], fields[label_col]});
    }
    return corpus;
}

/// Builds the positive-vs-OTHER task: every positive document is kept, the
/// OTHER side is exactly `other_quota` documents of which `tunisian_quota`
/// come from `tn_label` and the rest are sampled from the remaining
/// dialects. Sampled documents keep their original relative order.
inline LabeledCorpus build_binary_task(const LabeledCorpus& corpus, const std::string& positive,
                                       std::size_t other_quota, std::size_t tunisian_quota,
                                       std::uint64_t seed, const std::string& tn_label = "TN") {
    if (tunisian_quota > other_quota)
        throw QuotaError("tunisian_quota exceeds other_quota");
    std::vector<std::size_t> pos_idx, tn_idx, rest_idx;
    for (std::size_t i = 0; i < corpus.docs.size(); ++i) {
        const auto& label = corpus.docs[i].label;
        if (label == positive)
            pos_idx.push_back(i);
        else if (label == tn_label)
            tn_idx.push_back(i);
        else
            rest_idx.push_back(i);
    }
    const std::size_t rest_quota = other_quota - tunisian_quota;
    if (tn_idx.size() < tunisian_quota)
        throw QuotaError("stratum " + tn_label + " short by " +
                         std::to_string(tunisian_quota - tn_idx.size()) + " docs");
    if (rest_idx.size() < rest_quota)
        throw QuotaError("stratum non-" + tn_label + " short by " +
                         std::to_string(rest_quota - rest_idx.size()) + " docs");

    Rng rng(seed);
    auto tn_pick = rng.sample_indices(tn_idx.size(), tunisian_quota);
    auto rest_pick = rng.sample_indices(rest_idx.size(), rest_quota);

    LabeledCorpus out;
    out.positive_label = positive;
    out.source_path = corpus.source_path;
    out.sampling_seed = seed;
    out.docs.reserve(pos_idx.size() + other_quota);
    for (std::size_t i : pos_idx) out.docs.push_back(corpus.docs[i]);
    for (std::size_t k : tn_pick) out.docs.push_back({corpus.docs[tn_idx[k]].text, kOtherLabel});
    for (std::size_t k : rest_pick)
        out.docs.push_back({corpus.docs[rest_idx[k]].text, kOtherLabel});
    return out;
}

/// Seed-deterministic stratified split. Per-class test counts are
/// round(class_count * test_fraction); original document order is preserved
/// on both sides.
inline std::pair<LabeledCorpus, LabeledCorpus> stratified_split(const LabeledCorpus& corpus,
                                                                double test_fraction,
                                                                std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw DomainError("test_fraction must lie in (0,1)");
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < corpus.docs.size(); ++i)
        by_class[corpus.docs[i].label].push_back(i);
    if (by_class.size() < 2)
        throw StratificationError("stratified_split needs at least two classes");
    for (const auto& [label, idx] : by_class)
        if (idx.size() < 2)
            throw StratificationError("class " + label + " has fewer than 2 docs");

    Rng rng(seed);
    std::vector<bool> in_test(corpus.docs.size(), false);
    for (const auto& [label, idx] : by_class) {
        auto k = static_cast<std::size_t>(
            std::llround(static_cast<double>(idx.size()) * test_fraction));
        for (std::size_t p : rng.sample_indices(idx.size(), k)) in_test[idx[p]] = true;
    }
    LabeledCorpus train, test;
    train.positive_label = test.positive_label = corpus.positive_label;
    train.source_path = test.source_path = corpus.source_path;
    train.sampling_seed = test.sampling_seed = corpus.sampling_seed;
    for (std::size_t i = 0; i < corpus.docs.size(); ++i)
        (in_test[i] ? test : train).docs.push_back(corpus.docs[i]);
    return {std::move(train), std::move(test)};
}

namespace detail {

// Word n-grams of one token list, joined with single spaces.
inline void append_word_ngrams(const TokenList& tokens, std::size_t n,
                               std::vector<std::string>& out) {
    if (tokens.size() < n) return;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string gram = tokens[i];
        for (std::size_t k = 1; k < n; ++k) {
            gram.push_back(' ');
            gram.append(tokens[i + k]);
        }
        out.push_back(std::move(gram));
    }
}

}  // namespace detail

/// Frequency table of word n-grams over the preprocessed corpus.
inline std::map<std::string, std::size_t> ngram_frequencies(const LabeledCorpus& corpus,
                                                            std::size_t n,
                                                            const NormalizationConfig& cfg = {}) {
    if (n == 0) throw DomainError("n-gram order must be >= 1");
    std::map<std::string, std::size_t> freq;
    std::vector<std::string> grams;
    for (const auto& doc : corpus.docs) {
        grams.clear();
        detail::append_word_ngrams(preprocess(doc.text, cfg), n, grams);
        for (auto& g : grams) ++freq[std::move(g)];
    }
    return freq;
}

inline NgramStats ngram_stats(const LabeledCorpus& corpus, std::size_t n,
                              const NormalizationConfig& cfg = {}) {
    auto freq = ngram_frequencies(corpus, n, cfg);
    NgramStats stats;
    stats.n = n;
    stats.distinct_tokens = freq.size();
    for (const auto& [gram, count] : freq) {
        stats.total_tokens += count;
        if (count == 1) ++stats.hapax_count;
    }
    return stats;
}

/// The k most frequent n-grams, frequency-descending, ties broken
/// lexicographically on the gram string.
inline std::vector<std::pair<std::string, std::size_t>> top_ngrams(
    const LabeledCorpus& corpus, std::size_t n, std::size_t k,
    const NormalizationConfig& cfg = {}) {
    if (k == 0) throw DomainError("top_ngrams: k must be >= 1");
    auto freq = ngram_frequencies(corpus, n, cfg);
    std::vector<std::pair<std::string, std::size_t>> items(freq.begin(), freq.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (items.size() > k) items.resize(k);
    return items;
}

/// Token-count histogram of one class's documents.
inline std::map<std::size_t, std::size_t> length_histogram(const LabeledCorpus& corpus,
                                                           const std::string& cls,
                                                           const NormalizationConfig& cfg = {}) {
    bool seen = false;
    std::map<std::size_t, std::size_t> hist;
    for (const auto& doc : corpus.docs) {
        if (doc.label != cls) continue;
        seen = true;
        ++hist[preprocess(doc.text, cfg).size()];
    }
    if (!seen) throw DomainError("length_histogram: unknown class " + cls);
    return hist;
}

/// Shannon entropy (bits) of one class's unigram distribution.
inline double class_token_entropy(const LabeledCorpus& corpus, const std::string& cls,
                                  const NormalizationConfig& cfg = {}) {
    std::map<std::string, std::size_t> freq;
    std::size_t total = 0;
    for (const auto& doc : corpus.docs) {
        if (doc.label != cls) continue;
        for (auto& tok : preprocess(doc.text, cfg)) {
            ++freq[tok];
            ++total;
        }
    }
    if (total == 0) throw DomainError("class_token_entropy: class " + cls + " has no tokens");
    double h = 0.0;
    for (const auto& [tok, count] : freq) {
        double p = static_cast<double>(count) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace lahja
