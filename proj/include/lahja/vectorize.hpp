#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lahja/errors.hpp"
#include "lahja/textproc.hpp"
#include "lahja/utf8.hpp"

namespace lahja {

struct NgramRange {
    std::size_t lo = 1;
    std::size_t hi = 1;

    void validate() const {
        if (lo < 1 || hi < lo) throw DomainError("n-gram range must satisfy 1 <= lo <= hi");
    }
    bool operator==(const NgramRange&) const = default;
};

/// L2-normalized sparse document vector; entries sorted by column index.
struct SparseVector {
    std::vector<std::pair<std::uint32_t, double>> entries;
    std::size_t dim = 0;

    double norm() const {
        double s = 0.0;
        for (const auto& [j, w] : entries) s += w * w;
        return std::sqrt(s);
    }
    double dot_dense(const std::vector<double>& w) const {
        double s = 0.0;
        for (const auto& [j, v] : entries) s += w[j] * v;
        return s;
    }
};

/// Fitted n-gram -> column map with document frequencies. Word columns come
/// first (lexicographic), then character columns (lexicographic, offset by
/// the word count). The tf-idf formula is identified in model files as
/// "tfidf-smooth-l2-v1": tf * (ln((1+N)/(1+df)) + 1), L2-normalized.
struct Vocabulary {
    std::optional<NgramRange> word_range;
    std::optional<NgramRange> char_range;
    std::map<std::string, std::uint32_t> word_map;
    std::map<std::string, std::uint32_t> char_map;
    std::vector<std::uint32_t> doc_freq;
    std::size_t n_docs = 0;
    std::size_t min_df = 1;

    std::size_t dim() const { return word_map.size() + char_map.size(); }

    double idf(std::uint32_t col) const {
        return std::log((1.0 + static_cast<double>(n_docs)) /
                        (1.0 + static_cast<double>(doc_freq[col]))) +
               1.0;
    }
};

/// One document ready for vectorization: the preprocessed tokens plus the
/// space-joined cleaned string the character n-grams run over.
struct CleanDoc {
    TokenList tokens;
    std::string joined;

    static CleanDoc of(const TokenList& tokens) { return {tokens, join_tokens(tokens)}; }
    static CleanDoc of(std::string_view raw, const NormalizationConfig& cfg) {
        TokenList toks = preprocess(raw, cfg);
        std::string joined = join_tokens(toks);
        return {std::move(toks), std::move(joined)};
    }
};

namespace detail {

template <typename Fn>
void for_each_word_gram(const TokenList& tokens, const NgramRange& range, Fn&& fn) {
    for (std::size_t n = range.lo; n <= range.hi; ++n) {
        if (tokens.size() < n) break;
        for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
            std::string gram = tokens[i];
            for (std::size_t k = 1; k < n; ++k) {
                gram.push_back(' ');
                gram.append(tokens[i + k]);
            }
            fn(std::move(gram));
        }
    }
}

// Character n-grams over the joined string, codepoint-wise, spaces included
// so grams span word boundaries.
template <typename Fn>
void for_each_char_gram(std::string_view joined, const NgramRange& range, Fn&& fn) {
    std::vector<std::size_t> offsets;  // byte offset of each codepoint
    for (std::size_t i = 0; i < joined.size();) {
        offsets.push_back(i);
        utf8::decode_at(joined, i);
    }
    offsets.push_back(joined.size());
    const std::size_t n_cps = offsets.size() - 1;
    for (std::size_t n = range.lo; n <= range.hi; ++n) {
        if (n_cps < n) break;
        for (std::size_t i = 0; i + n <= n_cps; ++i)
            fn(std::string(joined.substr(offsets[i], offsets[i + n] - offsets[i])));
    }
}

}  // namespace detail

/// Learns the vocabulary and document frequencies from a corpus of cleaned
/// documents. Columns with document frequency below `min_df` are dropped.
inline Vocabulary fit_vocabulary(const std::vector<CleanDoc>& docs,
                                 std::optional<NgramRange> word_range,
                                 std::optional<NgramRange> char_range, std::size_t min_df = 1) {
    if (docs.empty()) throw DomainError("fit_vocabulary: empty corpus");
    if (!word_range && !char_range)
        throw DomainError("fit_vocabulary: need a word or char range");
    if (word_range) word_range->validate();
    if (char_range) char_range->validate();

    std::map<std::string, std::uint32_t> word_df, char_df;
    std::vector<std::string> seen;
    for (const auto& doc : docs) {
        if (word_range) {
            seen.clear();
            detail::for_each_word_gram(doc.tokens, *word_range,
                                       [&](std::string g) { seen.push_back(std::move(g)); });
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            for (auto& g : seen) ++word_df[g];
        }
        if (char_range) {
            seen.clear();
            detail::for_each_char_gram(doc.joined, *char_range,
                                       [&](std::string g) { seen.push_back(std::move(g)); });
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            for (auto& g : seen) ++char_df[g];
        }
    }

    Vocabulary vocab;
    vocab.word_range = word_range;
    vocab.char_range = char_range;
    vocab.n_docs = docs.size();
    vocab.min_df = min_df;
    std::uint32_t col = 0;
    for (const auto& [gram, df] : word_df) {
        if (df < min_df) continue;
        vocab.word_map.emplace(gram, col++);
        vocab.doc_freq.push_back(df);
    }
    for (const auto& [gram, df] : char_df) {
        if (df < min_df) continue;
        vocab.char_map.emplace(gram, col++);
        vocab.doc_freq.push_back(df);
    }
    return vocab;
}

/// tf-idf transform of one document. Unknown grams are ignored; a document
/// with no known grams maps to the zero vector.
inline SparseVector transform(const CleanDoc& doc, const Vocabulary& vocab) {
    std::map<std::uint32_t, double> counts;
    if (vocab.word_range) {
        detail::for_each_word_gram(doc.tokens, *vocab.word_range, [&](std::string g) {
            auto it = vocab.word_map.find(g);
            if (it != vocab.word_map.end()) counts[it->second] += 1.0;
        });
    }
    if (vocab.char_range) {
        detail::for_each_char_gram(doc.joined, *vocab.char_range, [&](std::string g) {
            auto it = vocab.char_map.find(g);
            if (it != vocab.char_map.end()) counts[it->second] += 1.0;
        });
    }
    SparseVector vec;
    vec.dim = vocab.dim();
    vec.entries.reserve(counts.size());
    double norm_sq = 0.0;
    for (const auto& [col, tf] : counts) {
        double w = tf * vocab.idf(col);
        vec.entries.emplace_back(col, w);
        norm_sq += w * w;
    }
    if (norm_sq > 0.0) {
        double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [col, w] : vec.entries) w *= inv;
    }
    return vec;
}

inline std::vector<SparseVector> transform_corpus(const std::vector<CleanDoc>& docs,
                                                  const Vocabulary& vocab) {
    std::vector<SparseVector> out;
    out.reserve(docs.size());
    for (const auto& doc : docs) out.push_back(transform(doc, vocab));
    return out;
}

// ---- optional meta-feature columns ----------------------------------------

/// Min-max scaler fitted on the training split; transform clips to [0,1].
struct MinMaxScaler {
    std::vector<double> mins;
    std::vector<double> maxs;
    bool fitted = false;

    void fit(const std::vector<std::vector<double>>& rows) {
        if (rows.empty()) throw DomainError("MinMaxScaler: empty fit data");
        mins = maxs = rows[0];
        for (const auto& row : rows)
            for (std::size_t j = 0; j < row.size(); ++j) {
                mins[j] = std::min(mins[j], row[j]);
                maxs[j] = std::max(maxs[j], row[j]);
            }
        fitted = true;
    }

    std::vector<double> transform(const std::vector<double>& row) const {
        if (!fitted) throw StateError("MinMaxScaler used before fit");
        std::vector<double> out(row.size());
        for (std::size_t j = 0; j < row.size(); ++j) {
            double span = maxs[j] - mins[j];
            double v = span > 0.0 ? (row[j] - mins[j]) / span : 0.0;
            out[j] = std::clamp(v, 0.0, 1.0);
        }
        return out;
    }
};

/// Appends scaled meta values after the n-gram columns.
inline SparseVector append_meta(const SparseVector& vec, const std::vector<double>& scaled) {
    SparseVector out = vec;
    out.dim = vec.dim + scaled.size();
    for (std::size_t j = 0; j < scaled.size(); ++j) {
        if (scaled[j] != 0.0)
            out.entries.emplace_back(static_cast<std::uint32_t>(vec.dim + j), scaled[j]);
    }
    return out;
}

}  // namespace lahja
