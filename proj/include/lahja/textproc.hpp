#pragma once

#include <algorithm>
#include <fstream>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "lahja/errors.hpp"
#include "lahja/utf8.hpp"

namespace lahja {

using TokenList = std::vector<std::string>;

/// Configuration for the fixed seven-step cleaning pipeline. The step order
/// never changes; flags only switch individual steps off.
struct NormalizationConfig {
    bool strip_noise = true;      // emoji, emoticons, punctuation
    bool strip_web = true;        // URLs, digits, hashtag marks, mentions
    bool normalize = true;        // orthographic normalization + diacritics
    bool strip_foreign = true;    // keep Arabic letters and spaces only
    bool squeeze_repeats = true;  // collapse letter runs of length >= 3
    bool tokenize = true;
    bool remove_stopwords = true;

    int repeat_cap = 1;  // run length kept when squeezing

    // Whole-token stop words, stored in normalized orthography.
    std::set<std::string> stopwords;
    // Attached function-word prefixes stripped from token fronts (e.g. the
    // conjunction waw). Longest match wins; the remainder must keep >= 3
    // letters or itself be a stop word.
    std::vector<std::string> stopword_prefixes;
    // Emoticon sequences removed by the noise step (":D", "^_^", ...).
    std::vector<std::string> emoticons;
};

namespace detail {

inline bool starts_with_url(std::string_view chunk) {
    return chunk.starts_with("http://") || chunk.starts_with("https://") ||
           chunk.starts_with("ftp://") || chunk.starts_with("www.");
}

inline bool is_skippable_web_chunk(std::string_view chunk) {
    return starts_with_url(chunk) || chunk.starts_with('@') || chunk.starts_with('#');
}

// Collapse runs of whitespace to single spaces and trim the ends.
inline std::string collapse_spaces(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending = false;
    for (std::size_t i = 0; i < s.size();) {
        char32_t cp = utf8::decode_at(s, i);
        if (cp == utf8::kInvalid) continue;
        if (utf8::is_space(cp)) {
            pending = !out.empty();
        } else {
            if (pending) out.push_back(' ');
            pending = false;
            utf8::append(out, cp);
        }
    }
    return out;
}

template <typename Fn>
void for_each_chunk(std::string_view s, Fn&& fn) {
    std::size_t start = 0;
    const auto is_ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || is_ws(s[i])) {
            if (i > start) fn(s.substr(start, i - start));
            start = i + 1;
        }
    }
}

}  // namespace detail

/// Step 1: remove emoji, emoticon sequences, and punctuation. URL, mention,
/// and hashtag chunks pass through untouched so the web step still sees them.
inline std::string strip_noise(std::string_view text, const NormalizationConfig& cfg = {}) {
    std::string out;
    out.reserve(text.size());
    detail::for_each_chunk(text, [&](std::string_view chunk) {
        if (!out.empty()) out.push_back(' ');
        if (detail::is_skippable_web_chunk(chunk)) {
            out.append(chunk);
            return;
        }
        std::size_t i = 0;
        while (i < chunk.size()) {
            // emoticon sequences first, longest match
            std::size_t best = 0;
            for (const auto& pat : cfg.emoticons) {
                if (pat.size() > best && chunk.substr(i).starts_with(pat)) best = pat.size();
            }
            if (best > 0) {
                i += best;
                continue;
            }
            std::size_t j = i;
            char32_t cp = utf8::decode_at(chunk, j);
            if (cp != utf8::kInvalid && !utf8::is_emoji(cp) && !utf8::is_punct(cp)) {
                out.append(chunk.substr(i, j - i));
            }
            i = j;
        }
    });
    return detail::collapse_spaces(out);
}

/// Step 2: remove URLs, digit runs, mentions, and hashtag marks. The hashtag
/// body is kept; mentions are usernames and are dropped entirely.
inline std::string strip_web(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    detail::for_each_chunk(text, [&](std::string_view chunk) {
        if (!out.empty()) out.push_back(' ');
        if (detail::starts_with_url(chunk) || chunk.starts_with('@')) return;
        for (std::size_t i = 0; i < chunk.size();) {
            char32_t cp = utf8::decode_at(chunk, i);
            if (cp == utf8::kInvalid || cp == U'#' || cp == U'@' || utf8::is_digit(cp)) continue;
            utf8::append(out, cp);
        }
    });
    return detail::collapse_spaces(out);
}

namespace detail {

// Positional presentation forms (U+FE70 block) folded to base letters.
// Lam-alef ligatures expand to two letters.
struct PresentationFold {
    char32_t from;
    char32_t to0;
    char32_t to1;  // 0 when the form maps to a single letter
};

inline const PresentationFold* presentation_fold(char32_t cp) {
    static const PresentationFold table[] = {
        {0xFE80, 0x0621, 0}, {0xFE81, 0x0622, 0}, {0xFE82, 0x0622, 0}, {0xFE83, 0x0623, 0},
        {0xFE84, 0x0623, 0}, {0xFE85, 0x0624, 0}, {0xFE86, 0x0624, 0}, {0xFE87, 0x0625, 0},
        {0xFE88, 0x0625, 0}, {0xFE89, 0x0626, 0}, {0xFE8A, 0x0626, 0}, {0xFE8B, 0x0626, 0},
        {0xFE8C, 0x0626, 0}, {0xFE8D, 0x0627, 0}, {0xFE8E, 0x0627, 0}, {0xFE8F, 0x0628, 0},
        {0xFE90, 0x0628, 0}, {0xFE91, 0x0628, 0}, {0xFE92, 0x0628, 0}, {0xFE93, 0x0629, 0},
        {0xFE94, 0x0629, 0}, {0xFE95, 0x062A, 0}, {0xFE96, 0x062A, 0}, {0xFE97, 0x062A, 0},
        {0xFE98, 0x062A, 0}, {0xFE99, 0x062B, 0}, {0xFE9A, 0x062B, 0}, {0xFE9B, 0x062B, 0},
        {0xFE9C, 0x062B, 0}, {0xFE9D, 0x062C, 0}, {0xFE9E, 0x062C, 0}, {0xFE9F, 0x062C, 0},
        {0xFEA0, 0x062C, 0}, {0xFEA1, 0x062D, 0}, {0xFEA2, 0x062D, 0}, {0xFEA3, 0x062D, 0},
        {0xFEA4, 0x062D, 0}, {0xFEA5, 0x062E, 0}, {0xFEA6, 0x062E, 0}, {0xFEA7, 0x062E, 0},
        {0xFEA8, 0x062E, 0}, {0xFEA9, 0x062F, 0}, {0xFEAA, 0x062F, 0}, {0xFEAB, 0x0630, 0},
        {0xFEAC, 0x0630, 0}, {0xFEAD, 0x0631, 0}, {0xFEAE, 0x0631, 0}, {0xFEAF, 0x0632, 0},
        {0xFEB0, 0x0632, 0}, {0xFEB1, 0x0633, 0}, {0xFEB2, 0x0633, 0}, {0xFEB3, 0x0633, 0},
        {0xFEB4, 0x0633, 0}, {0xFEB5, 0x0634, 0}, {0xFEB6, 0x0634, 0}, {0xFEB7, 0x0634, 0},
        {0xFEB8, 0x0634, 0}, {0xFEB9, 0x0635, 0}, {0xFEBA, 0x0635, 0}, {0xFEBB, 0x0635, 0},
        {0xFEBC, 0x0635, 0}, {0xFEBD, 0x0636, 0}, {0xFEBE, 0x0636, 0}, {0xFEBF, 0x0636, 0},
        {0xFEC0, 0x0636, 0}, {0xFEC1, 0x0637, 0}, {0xFEC2, 0x0637, 0}, {0xFEC3, 0x0637, 0},
        {0xFEC4, 0x0637, 0}, {0xFEC5, 0x0638, 0}, {0xFEC6, 0x0638, 0}, {0xFEC7, 0x0638, 0},
        {0xFEC8, 0x0638, 0}, {0xFEC9, 0x0639, 0}, {0xFECA, 0x0639, 0}, {0xFECB, 0x0639, 0},
        {0xFECC, 0x0639, 0}, {0xFECD, 0x063A, 0}, {0xFECE, 0x063A, 0}, {0xFECF, 0x063A, 0},
        {0xFED0, 0x063A, 0}, {0xFED1, 0x0641, 0}, {0xFED2, 0x0641, 0}, {0xFED3, 0x0641, 0},
        {0xFED4, 0x0641, 0}, {0xFED5, 0x0642, 0}, {0xFED6, 0x0642, 0}, {0xFED7, 0x0642, 0},
        {0xFED8, 0x0642, 0}, {0xFED9, 0x0643, 0}, {0xFEDA, 0x0643, 0}, {0xFEDB, 0x0643, 0},
        {0xFEDC, 0x0643, 0}, {0xFEDD, 0x0644, 0}, {0xFEDE, 0x0644, 0}, {0xFEDF, 0x0644, 0},
        {0xFEE0, 0x0644, 0}, {0xFEE1, 0x0645, 0}, {0xFEE2, 0x0645, 0}, {0xFEE3, 0x0645, 0},
        {0xFEE4, 0x0645, 0}, {0xFEE5, 0x0646, 0}, {0xFEE6, 0x0646, 0}, {0xFEE7, 0x0646, 0},
        {0xFEE8, 0x0646, 0}, {0xFEE9, 0x0647, 0}, {0xFEEA, 0x0647, 0}, {0xFEEB, 0x0647, 0},
        {0xFEEC, 0x0647, 0}, {0xFEED, 0x0648, 0}, {0xFEEE, 0x0648, 0}, {0xFEEF, 0x0649, 0},
        {0xFEF0, 0x0649, 0}, {0xFEF1, 0x064A, 0}, {0xFEF2, 0x064A, 0}, {0xFEF3, 0x064A, 0},
        {0xFEF4, 0x064A, 0}, {0xFEF5, 0x0644, 0x0622}, {0xFEF6, 0x0644, 0x0622},
        {0xFEF7, 0x0644, 0x0623}, {0xFEF8, 0x0644, 0x0623}, {0xFEF9, 0x0644, 0x0625},
        {0xFEFA, 0x0644, 0x0625}, {0xFEFB, 0x0644, 0x0627}, {0xFEFC, 0x0644, 0x0627},
    };
    for (const auto& row : table) {
        if (row.from == cp) return &row;
    }
    return nullptr;
}

inline char32_t fold_letter(char32_t cp) {
    switch (cp) {
        case 0x0623:  // alef with hamza above
        case 0x0625:  // alef with hamza below
        case 0x0622:  // alef with madda
        case 0x0671:  // alef wasla
            return 0x0627;
        case 0x0629:  // teh marbuta -> heh
            return 0x0647;
        case 0x0649:  // alef maksura -> yeh
            return 0x064A;
        default:
            return cp;
    }
}

}  // namespace detail

/// Step 3: fold alef variants to plain alef, teh marbuta to heh, alef
/// maksura to yeh; drop diacritics and the tatweel; fold presentation forms.
inline std::string normalize_arabic(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        char32_t cp = utf8::decode_at(text, i);
        if (cp == utf8::kInvalid) continue;
        if (cp == 0xFDF2) {  // the "Allah" word ligature
            utf8::append(out, 0x0627);
            utf8::append(out, 0x0644);
            utf8::append(out, 0x0644);
            utf8::append(out, 0x0647);
            continue;
        }
        if (const auto* fold = detail::presentation_fold(cp)) {
            utf8::append(out, detail::fold_letter(fold->to0));
            if (fold->to1) utf8::append(out, detail::fold_letter(fold->to1));
            continue;
        }
        if (utf8::is_arabic_diacritic(cp)) continue;
        utf8::append(out, detail::fold_letter(cp));
    }
    return out;
}

/// Step 4: keep Arabic-script letters and spaces only.
inline std::string strip_foreign(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size();) {
        char32_t cp = utf8::decode_at(text, i);
        if (cp == utf8::kInvalid) continue;
        if (utf8::is_arabic_letter(cp) || utf8::is_space(cp)) utf8::append(out, cp);
    }
    return detail::collapse_spaces(out);
}

/// Step 5: reduce each run of >= 3 identical Arabic letters to `cap` copies.
/// Runs of length <= 2 are left alone.
inline std::string squeeze_repeats(std::string_view text, int cap = 1) {
    if (cap < 1) throw DomainError("squeeze_repeats: cap must be >= 1");
    std::vector<char32_t> cps = utf8::decode(text);
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < cps.size();) {
        std::size_t j = i;
        while (j < cps.size() && cps[j] == cps[i]) ++j;
        std::size_t run = j - i;
        std::size_t keep = run;
        if (run >= 3 && utf8::is_arabic_letter(cps[i]))
            keep = std::min(run, static_cast<std::size_t>(cap));
        for (std::size_t k = 0; k < keep; ++k) utf8::append(out, cps[i]);
        i = j;
    }
    return out;
}

/// Step 6: whitespace tokenization, order preserved, no empty tokens.
inline TokenList tokenize(std::string_view text) {
    TokenList tokens;
    std::string collapsed = detail::collapse_spaces(text);
    detail::for_each_chunk(collapsed, [&](std::string_view chunk) {
        tokens.emplace_back(chunk);
    });
    return tokens;
}

/// Step 7: drop stop words and strip attached function-word prefixes.
/// Membership is tested in normalized orthography so raw and cleaned tokens
/// behave the same way.
inline TokenList remove_stopwords(const TokenList& tokens, const NormalizationConfig& cfg) {
    TokenList out;
    out.reserve(tokens.size());
    for (const auto& tok : tokens) {
        std::string key = normalize_arabic(tok);
        bool drop = false;
        bool stripped = false;
        for (;;) {
            if (cfg.stopwords.count(key)) {
                drop = true;
                break;
            }
            std::string_view prefix;
            for (const auto& p : cfg.stopword_prefixes) {
                if (p.size() > prefix.size() && key.size() > p.size() && key.starts_with(p))
                    prefix = p;
            }
            if (prefix.empty()) break;
            std::string rest = key.substr(prefix.size());
            if (!cfg.stopwords.count(rest) && utf8::length(rest) < 3) break;
            key = std::move(rest);
            stripped = true;
        }
        if (drop) continue;
        out.push_back(stripped ? key : tok);
    }
    return out;
}

inline TokenList remove_stopwords(const TokenList& tokens, const std::set<std::string>& words) {
    NormalizationConfig cfg;
    cfg.stopwords = words;
    return remove_stopwords(tokens, cfg);
}

/// The full pipeline: enabled steps run in the fixed order.
inline TokenList preprocess(std::string_view text, const NormalizationConfig& cfg = {}) {
    std::string s(text);
    if (cfg.strip_noise) s = strip_noise(s, cfg);
    if (cfg.strip_web) s = strip_web(s);
    if (cfg.normalize) s = normalize_arabic(s);
    if (cfg.strip_foreign) s = strip_foreign(s);
    if (cfg.squeeze_repeats) s = squeeze_repeats(s, cfg.repeat_cap);
    TokenList tokens;
    if (cfg.tokenize) {
        tokens = tokenize(s);
    } else {
        std::string collapsed = detail::collapse_spaces(s);
        if (!collapsed.empty()) tokens.push_back(std::move(collapsed));
    }
    if (cfg.remove_stopwords) tokens = remove_stopwords(tokens, cfg);
    return tokens;
}

/// The cleaned string the vectorizer's character n-grams run over.
inline std::string join_tokens(const TokenList& tokens) {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out.push_back(' ');
        out.append(tokens[i]);
    }
    return out;
}

// ---- data-file loading --------------------------------------------------

/// Stop-word file: one entry per line, '#' comments, entries ending in '+'
/// are prefix rules. Entries are normalized on load.
inline void load_stopwords(const std::string& path, NormalizationConfig& cfg) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open stop-word file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (line.back() == '+') {
            cfg.stopword_prefixes.push_back(normalize_arabic(line.substr(0, line.size() - 1)));
        } else {
            cfg.stopwords.insert(normalize_arabic(line));
        }
    }
}

/// Emoticon pattern file: one pattern per line, no comments (a pattern may
/// legitimately start with '#').
inline std::vector<std::string> load_patterns(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open pattern file: " + path);
    std::vector<std::string> patterns;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) patterns.push_back(line);
    }
    return patterns;
}

}  // namespace lahja
