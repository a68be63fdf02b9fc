#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lahja/corpus.hpp"
#include "lahja/errors.hpp"
#include "lahja/math.hpp"
#include "lahja/utf8.hpp"

namespace lahja {

/// Informality indicators computed on RAW text, before any cleaning step.
struct MetaFeatureVector {
    double pct_word_length = 0.0;  // mean word length / sentence length
    double char_length = 0.0;      // codepoints excluding whitespace
    double space_count = 0.0;
    bool has_period = false;
    bool has_comma = false;
    bool has_exclamation = false;
    bool has_happy_emoticon = false;
    bool has_sad_emoticon = false;
    bool has_phone = false;
    bool has_email = false;
    bool has_mention = false;
    bool has_hashtag = false;

    double value(std::size_t i) const {
        switch (i) {
            case 0: return pct_word_length;
            case 1: return char_length;
            case 2: return space_count;
            case 3: return has_period;
            case 4: return has_comma;
            case 5: return has_exclamation;
            case 6: return has_happy_emoticon;
            case 7: return has_sad_emoticon;
            case 8: return has_phone;
            case 9: return has_email;
            case 10: return has_mention;
            case 11: return has_hashtag;
            default: throw DomainError("meta feature index out of range");
        }
    }
};

inline constexpr std::size_t kMetaFeatureCount = 12;
inline constexpr std::size_t kMetaContinuousCount = 3;  // the first three

inline constexpr std::array<const char*, kMetaFeatureCount> kMetaFeatureNames = {
    "pct_word_length", "char_length",        "space_count",      "has_period",
    "has_comma",       "has_exclamation",    "has_happy_emoticon", "has_sad_emoticon",
    "has_phone",       "has_email",          "has_mention",      "has_hashtag",
};

/// Emoticon patterns split by polarity; loaded from the shipped data files.
struct EmoticonTable {
    std::vector<std::string> happy;
    std::vector<std::string> sad;

    std::vector<std::string> all() const {
        std::vector<std::string> out = happy;
        out.insert(out.end(), sad.begin(), sad.end());
        return out;
    }
};

namespace detail {

inline bool contains_pattern(std::string_view text, const std::vector<std::string>& patterns) {
    for (const auto& p : patterns)
        if (!p.empty() && text.find(p) != std::string_view::npos) return true;
    return false;
}

// A run of >= 7 digits, allowing single -, ., space, or parentheses between
// groups and an optional leading +.
inline bool contains_phone(const std::vector<char32_t>& cps) {
    std::size_t i = 0;
    const auto is_sep = [](char32_t c) {
        return c == U'-' || c == U'.' || c == U' ' || c == U'(' || c == U')';
    };
    while (i < cps.size()) {
        if (!utf8::is_digit(cps[i]) && cps[i] != U'+') {
            ++i;
            continue;
        }
        std::size_t j = i;
        if (cps[j] == U'+') ++j;
        std::size_t digits = 0;
        bool prev_sep = false;
        while (j < cps.size()) {
            if (utf8::is_digit(cps[j])) {
                ++digits;
                prev_sep = false;
                ++j;
            } else if (is_sep(cps[j]) && !prev_sep && digits > 0) {
                prev_sep = true;
                ++j;
            } else {
                break;
            }
        }
        if (digits >= 7) return true;
        i = std::max(j, i + 1);
    }
    return false;
}

inline bool is_email_char(char32_t c) {
    return (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z') || utf8::is_ascii_digit(c) ||
           c == U'.' || c == U'_' || c == U'%' || c == U'+' || c == U'-';
}

// RFC-lite x@y.z shape.
inline bool contains_email(const std::vector<char32_t>& cps) {
    for (std::size_t at = 0; at < cps.size(); ++at) {
        if (cps[at] != U'@') continue;
        std::size_t l = at;
        while (l > 0 && is_email_char(cps[l - 1])) --l;
        if (l == at) continue;
        std::size_t r = at + 1;
        bool dot_seen = false;
        std::size_t last_dot = 0;
        while (r < cps.size() && (is_email_char(cps[r]))) {
            if (cps[r] == U'.') {
                dot_seen = true;
                last_dot = r;
            }
            ++r;
        }
        if (!dot_seen || last_dot + 2 > r) continue;
        bool tld_alpha = true;
        for (std::size_t k = last_dot + 1; k < r; ++k)
            if (!((cps[k] >= U'a' && cps[k] <= U'z') || (cps[k] >= U'A' && cps[k] <= U'Z')))
                tld_alpha = false;
        if (tld_alpha && last_dot > at + 1) return true;
    }
    return false;
}

// '@' at a word boundary followed by a handle character.
inline bool contains_mention(const std::vector<char32_t>& cps) {
    for (std::size_t i = 0; i < cps.size(); ++i) {
        if (cps[i] != U'@') continue;
        bool at_start = (i == 0) || utf8::is_space(cps[i - 1]);
        if (!at_start) continue;
        if (i + 1 < cps.size() && !utf8::is_space(cps[i + 1]) && cps[i + 1] != U'@') return true;
    }
    return false;
}

}  // namespace detail

/// All twelve features of one raw sentence. Empty text yields the zero
/// vector with all flags false.
inline MetaFeatureVector extract_meta(std::string_view raw_text, const EmoticonTable& emoticons) {
    MetaFeatureVector f;
    std::vector<char32_t> cps = utf8::decode(raw_text);
    if (cps.empty()) return f;

    std::size_t total = cps.size();
    std::size_t spaces = 0;
    std::size_t word_count = 0;
    std::size_t word_chars = 0;
    bool in_word = false;
    for (char32_t c : cps) {
        if (c == U' ') ++spaces;
        if (utf8::is_space(c)) {
            in_word = false;
        } else {
            ++word_chars;
            if (!in_word) ++word_count;
            in_word = true;
        }
        if (c == U'.') f.has_period = true;
        if (c == U',' || c == 0x060C) f.has_comma = true;
        if (c == U'!') f.has_exclamation = true;
        if (c == U'#') f.has_hashtag = true;
    }
    f.space_count = static_cast<double>(spaces);
    f.char_length = static_cast<double>(word_chars);
    if (word_count > 0)
        f.pct_word_length =
            (static_cast<double>(word_chars) / static_cast<double>(word_count)) /
            static_cast<double>(total);

    f.has_happy_emoticon = detail::contains_pattern(raw_text, emoticons.happy);
    f.has_sad_emoticon = detail::contains_pattern(raw_text, emoticons.sad);
    f.has_phone = detail::contains_phone(cps);
    f.has_email = detail::contains_email(cps);
    f.has_mention = detail::contains_mention(cps);
    return f;
}

// ---- chi-square independence test ----------------------------------------

struct ContingencyTable {
    std::vector<std::vector<double>> counts;  // rows = feature bins, cols = classes

    std::size_t rows() const { return counts.size(); }
    std::size_t cols() const { return counts.empty() ? 0 : counts[0].size(); }
};

struct Chi2Result {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 1.0;
    bool significant = false;
};

/// Tally of (bin value, class index) pairs. Row/column order follows the
/// sorted distinct values.
inline ContingencyTable build_contingency(const std::vector<int>& values,
                                          const std::vector<int>& labels) {
    if (values.size() != labels.size())
        throw DomainError("build_contingency: values/labels length mismatch");
    if (values.empty()) throw DomainError("build_contingency: empty input");
    std::vector<int> rows_ids(values), col_ids(labels);
    std::sort(rows_ids.begin(), rows_ids.end());
    rows_ids.erase(std::unique(rows_ids.begin(), rows_ids.end()), rows_ids.end());
    std::sort(col_ids.begin(), col_ids.end());
    col_ids.erase(std::unique(col_ids.begin(), col_ids.end()), col_ids.end());
    ContingencyTable table;
    table.counts.assign(rows_ids.size(), std::vector<double>(col_ids.size(), 0.0));
    for (std::size_t i = 0; i < values.size(); ++i) {
        auto r = std::lower_bound(rows_ids.begin(), rows_ids.end(), values[i]) - rows_ids.begin();
        auto c = std::lower_bound(col_ids.begin(), col_ids.end(), labels[i]) - col_ids.begin();
        table.counts[r][c] += 1.0;
    }
    return table;
}

/// Pearson chi-square with no continuity correction. A zero row or column
/// marginal makes the table degenerate.
inline Chi2Result chi_square(const ContingencyTable& table, double alpha = 0.05) {
    const std::size_t R = table.rows(), C = table.cols();
    if (R < 2 || C < 2) throw DegenerateTableError("contingency table needs >= 2 rows and cols");
    std::vector<double> row_sum(R, 0.0), col_sum(C, 0.0);
    double total = 0.0;
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            if (table.counts[r][c] < 0.0)
                throw DomainError("contingency cell must be non-negative");
            row_sum[r] += table.counts[r][c];
            col_sum[c] += table.counts[r][c];
            total += table.counts[r][c];
        }
    if (total <= 0.0) throw DegenerateTableError("empty contingency table");
    for (double s : row_sum)
        if (s == 0.0) throw DegenerateTableError("zero row marginal");
    for (double s : col_sum)
        if (s == 0.0) throw DegenerateTableError("zero column marginal");

    Chi2Result res;
    res.dof = (R - 1) * (C - 1);
    for (std::size_t r = 0; r < R; ++r)
        for (std::size_t c = 0; c < C; ++c) {
            double expected = row_sum[r] * col_sum[c] / total;
            double diff = table.counts[r][c] - expected;
            res.statistic += diff * diff / expected;
        }
    res.p_value = math::chi2_sf(res.statistic, res.dof);
    res.significant = res.p_value < alpha;
    return res;
}

// ---- feature selection ----------------------------------------------------

struct MetaFeatureReport {
    std::string name;
    bool testable = false;
    bool significant = false;
    Chi2Result result;
    std::vector<double> bin_edges;  // quartile boundaries for continuous features
};

struct MetaSelection {
    std::vector<MetaFeatureReport> features;
    double alpha = 0.05;

    std::vector<std::string> selected() const {
        std::vector<std::string> out;
        for (const auto& f : features)
            if (f.significant) out.push_back(f.name);
        return out;
    }
};

namespace detail {

// Nearest-rank quantile: value at index ceil(p*n), 1-based.
inline double nearest_rank(const std::vector<double>& sorted, double p) {
    std::size_t n = sorted.size();
    auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
    if (rank < 1) rank = 1;
    if (rank > n) rank = n;
    return sorted[rank - 1];
}

inline int quartile_bin(double x, const std::vector<double>& edges) {
    int bin = 0;
    for (double e : edges) {
        if (x <= e) return bin;
        ++bin;
    }
    return bin;
}

}  // namespace detail

/// Tests every meta feature against the binary label at level `alpha`.
/// Continuous features are discretized into quartile bins (nearest-rank
/// boundaries computed on the full corpus) first.
inline MetaSelection select_meta(const std::vector<MetaFeatureVector>& features,
                                 const std::vector<int>& labels, double alpha = 0.05) {
    if (features.size() != labels.size())
        throw DomainError("select_meta: features/labels length mismatch");
    if (features.empty()) throw DomainError("select_meta: empty corpus");
    {
        bool has0 = false, has1 = false;
        for (int y : labels) (y ? has1 : has0) = true;
        if (!has0 || !has1) throw StratificationError("select_meta needs both classes");
    }

    MetaSelection sel;
    sel.alpha = alpha;
    for (std::size_t fi = 0; fi < kMetaFeatureCount; ++fi) {
        MetaFeatureReport report;
        report.name = kMetaFeatureNames[fi];
        std::vector<int> bins(features.size());
        if (fi < kMetaContinuousCount) {
            std::vector<double> values(features.size());
            for (std::size_t i = 0; i < features.size(); ++i) values[i] = features[i].value(fi);
            std::vector<double> sorted = values;
            std::sort(sorted.begin(), sorted.end());
            report.bin_edges = {detail::nearest_rank(sorted, 0.25),
                                detail::nearest_rank(sorted, 0.50),
                                detail::nearest_rank(sorted, 0.75)};
            for (std::size_t i = 0; i < values.size(); ++i)
                bins[i] = detail::quartile_bin(values[i], report.bin_edges);
        } else {
            for (std::size_t i = 0; i < features.size(); ++i)
                bins[i] = features[i].value(fi) != 0.0 ? 1 : 0;
        }
        try {
            report.result = chi_square(build_contingency(bins, labels), alpha);
            report.testable = true;
            report.significant = report.result.significant;
        } catch (const DegenerateTableError&) {
            report.testable = false;
            report.significant = false;
        }
        sel.features.push_back(std::move(report));
    }
    return sel;
}

/// Convenience wrapper running extraction + selection over a binary corpus.
inline MetaSelection select_meta(const LabeledCorpus& corpus, const EmoticonTable& emoticons,
                                 double alpha = 0.05) {
    std::vector<MetaFeatureVector> feats;
    std::vector<int> labels;
    feats.reserve(corpus.docs.size());
    for (const auto& doc : corpus.docs) {
        feats.push_back(extract_meta(doc.text, emoticons));
        labels.push_back(doc.label == corpus.positive_label ? 1 : 0);
    }
    return select_meta(feats, labels, alpha);
}

}  // namespace lahja
