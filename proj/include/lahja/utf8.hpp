#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lahja::utf8 {

inline constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one codepoint starting at s[i]; advances i past it.
// Returns kInvalid on malformed input (i is advanced by one byte).
inline char32_t decode_at(std::string_view s, std::size_t& i) {
    const auto byte = [&](std::size_t k) { return static_cast<unsigned char>(s[k]); };
    unsigned char b0 = byte(i);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return kInvalid;
    }
    if (i + len > s.size()) {
        ++i;
        return kInvalid;
    }
    for (int k = 1; k < len; ++k) {
        unsigned char bk = byte(i + k);
        if ((bk & 0xC0) != 0x80) {
            ++i;
            return kInvalid;
        }
        cp = (cp << 6) | (bk & 0x3F);
    }
    // reject overlong encodings and surrogates
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
        ++i;
        return kInvalid;
    }
    i += len;
    return cp;
}

inline void append(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline std::string encode(const std::vector<char32_t>& cps) {
    std::string out;
    out.reserve(cps.size() * 2);
    for (char32_t cp : cps) append(out, cp);
    return out;
}

// Decodes the whole string; sets ok=false on the first malformed byte.
inline std::vector<char32_t> decode(std::string_view s, bool* ok = nullptr) {
    std::vector<char32_t> cps;
    cps.reserve(s.size());
    bool valid = true;
    for (std::size_t i = 0; i < s.size();) {
        char32_t cp = decode_at(s, i);
        if (cp == kInvalid) {
            valid = false;
            continue;
        }
        cps.push_back(cp);
    }
    if (ok) *ok = valid;
    return cps;
}

inline bool is_valid(std::string_view s) {
    bool ok;
    decode(s, &ok);
    return ok;
}

inline std::size_t length(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.size();) {
        decode_at(s, i);
        ++n;
    }
    return n;
}

// ---- character classes ------------------------------------------------

inline bool is_space(char32_t cp) {
    return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n' || cp == 0x00A0 ||
           cp == 0x2009 || cp == 0x200B || cp == 0x3000;
}

// Letters of the Arabic script: base block letters plus the supplement.
inline bool is_arabic_letter(char32_t cp) {
    return (cp >= 0x0620 && cp <= 0x063A) || (cp >= 0x0641 && cp <= 0x064A) ||
           (cp >= 0x066E && cp <= 0x066F) || (cp >= 0x0671 && cp <= 0x06D3) || cp == 0x06D5 ||
           (cp >= 0x06EE && cp <= 0x06EF) || (cp >= 0x06FA && cp <= 0x06FC) || cp == 0x06FF ||
           (cp >= 0x0750 && cp <= 0x077F);
}

// Tashkeel marks, the superscript alef, and the tatweel filler.
inline bool is_arabic_diacritic(char32_t cp) {
    return (cp >= 0x064B && cp <= 0x065F) || cp == 0x0670 || cp == 0x0640 ||
           (cp >= 0x06D6 && cp <= 0x06ED);
}

inline bool is_ascii_digit(char32_t cp) { return cp >= U'0' && cp <= U'9'; }

inline bool is_arabic_digit(char32_t cp) {
    return (cp >= 0x0660 && cp <= 0x0669) || (cp >= 0x06F0 && cp <= 0x06F9);
}

inline bool is_digit(char32_t cp) { return is_ascii_digit(cp) || is_arabic_digit(cp); }

// Pictographs, emoji, symbols, and the joiners/selectors that ride with them.
inline bool is_emoji(char32_t cp) {
    return (cp >= 0x1F000 && cp <= 0x1FBFF) || (cp >= 0x2600 && cp <= 0x27BF) ||
           (cp >= 0x2B00 && cp <= 0x2BFF) || (cp >= 0x2190 && cp <= 0x21FF) ||
           (cp >= 0x2300 && cp <= 0x23FF) || (cp >= 0x25A0 && cp <= 0x25FF) ||
           (cp >= 0xFE00 && cp <= 0xFE0F) || cp == 0x200D || cp == 0x20E3 || cp == 0x2122 ||
           cp == 0x3030;
}

// Punctuation and symbols, Latin and Arabic. '#' and '@' are deliberately
// not here: they mark hashtags and mentions and are handled by the web step.
inline bool is_punct(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= U'!' && cp <= U'/' && cp != U'#') || (cp >= U':' && cp <= U'?') ||
               (cp >= U'[' && cp <= U'`') || (cp >= U'{' && cp <= U'~');
    }
    return cp == 0x060C || cp == 0x061B || cp == 0x061F || cp == 0x066A || cp == 0x066B ||
           cp == 0x066C || cp == 0x066D || cp == 0x06D4 || cp == 0x061E ||
           (cp >= 0x00A1 && cp <= 0x00BF) || cp == 0x00D7 || cp == 0x00F7 ||
           (cp >= 0x2000 && cp <= 0x206F && cp != 0x200D) || (cp >= 0x2E00 && cp <= 0x2E7F) ||
           (cp >= 0x3001 && cp <= 0x3003) || (cp >= 0xFF01 && cp <= 0xFF0F) ||
           (cp >= 0xFF1A && cp <= 0xFF20) || cp == 0xFD3E || cp == 0xFD3F;
}

}  // namespace lahja::utf8
