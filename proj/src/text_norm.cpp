#include "aptlabel/text_norm.hpp"

namespace aptlabel {

namespace {

constexpr char32_t kReplacement = 0xFFFD;

// ---------------------------------------------------------------------------
// UTF-8 decode/encode
// ---------------------------------------------------------------------------

// Decodes one codepoint starting at i; advances i past it. Invalid input
// consumes a single byte and yields U+FFFD.
char32_t decode_one(std::string_view s, size_t& i) {
    const auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    char32_t cp = 0;
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
        return kReplacement;
    }
    if (i + len > s.size()) {
        ++i;
        return kReplacement;
    }
    for (int k = 1; k < len; ++k) {
        const auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return kReplacement;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    // Reject overlong forms, surrogates and out-of-range values.
    const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) ||
                          (len == 4 && cp < 0x10000);
    if (overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++i;
        return kReplacement;
    }
    i += len;
    return cp;
}

void encode_one(char32_t cp, std::string& out) {
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

// ---------------------------------------------------------------------------
// Character classification and case folding
//
// Standardization only needs two answers per codepoint: keep it (letter,
// digit, combining mark) or turn it into a space (punctuation, symbol,
// whitespace, control). The tables below cover the scripts that occur in
// threat-intel group names (Latin incl. extensions, Greek, Cyrillic,
// Armenian, Hebrew, Arabic, CJK). Unlisted exotic punctuation inside a
// letter block degrades to "kept", which is harmless for matching and keeps
// behavior identical across platforms: no locale tables are consulted.
// ---------------------------------------------------------------------------

bool keep_codepoint(char32_t cp) {
    if (cp < 0x80)
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
               (cp >= 'A' && cp <= 'Z');
    if (cp <= 0xBF) // Latin-1 punctuation/symbol block, except three letters
        return cp == 0xAA || cp == 0xB5 || cp == 0xBA;
    if (cp <= 0xFF)
        return cp != 0xD7 && cp != 0xF7;
    if (cp < 0x370) // Latin extensions, IPA, modifiers, combining marks
        return true;
    if (cp < 0x2000) {
        switch (cp) { // frequent punctuation embedded in letter blocks
        case 0x37E: case 0x387:                         // Greek ; and ano teleia
        case 0x589: case 0x58A:                         // Armenian
        case 0x5BE: case 0x5C0: case 0x5C3: case 0x5C6: // Hebrew
        case 0x5F3: case 0x5F4:
        case 0x60C: case 0x61B: case 0x61F: case 0x6D4: // Arabic
        case 0x964: case 0x965:                         // Devanagari danda
            return false;
        default:
            return true;
        }
    }
    if (cp < 0x2C00) // general punctuation, symbols, arrows, math, box drawing
        return false;
    if (cp < 0x2E00)
        return true;
    if (cp < 0x2E80) // supplemental punctuation
        return false;
    if (cp <= 0x3000) // CJK radicals up to ideographic space
        return cp < 0x3000;
    if (cp < 0x3040) { // CJK symbols and punctuation block
        if (cp <= 0x3003)
            return false;
        if (cp >= 0x3008 && cp <= 0x3011)
            return false;
        if (cp >= 0x3014 && cp <= 0x301F)
            return false;
        return cp != 0x3030 && cp != 0x303D;
    }
    if (cp == 0x30FB || cp == 0x30A0) // katakana middle dot, double hyphen
        return false;
    if (cp >= 0xE000 && cp <= 0xF8FF) // private use
        return false;
    if (cp >= 0xFE10 && cp <= 0xFE6F) // presentation-form punctuation
        return false;
    if (cp >= 0xFF01 && cp <= 0xFF65) { // fullwidth ASCII variants
        if (cp <= 0xFF0F || (cp >= 0xFF1A && cp <= 0xFF20) ||
            (cp >= 0xFF3B && cp <= 0xFF40) || cp >= 0xFF5B)
            return false;
        return true;
    }
    if (cp == kReplacement)
        return false;
    return true;
}

// Appends the case-folded form of cp (one or two codepoints).
void fold_append(char32_t cp, std::u32string& out) {
    if (cp >= 'A' && cp <= 'Z') {
        out.push_back(cp + 0x20);
        return;
    }
    if (cp < 0x80) {
        out.push_back(cp);
        return;
    }
    switch (cp) {
    case 0xB5:  out.push_back(0x3BC); return;            // micro sign -> mu
    case 0xDF:  out.append(U"ss");    return;            // sharp s
    case 0x130: out.append(U"i̇"); return;          // dotted capital I
    case 0x178: out.push_back(0xFF);  return;            // Y with diaeresis
    case 0x17F: out.push_back('s');   return;            // long s
    case 0x1E9E: out.append(U"ss");   return;            // capital sharp s
    case 0x3C2: out.push_back(0x3C3); return;            // final sigma
    default:    break;
    }
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {         // Latin-1 capitals
        out.push_back(cp + 0x20);
        return;
    }
    if ((cp >= 0x100 && cp <= 0x136 && (cp % 2) == 0) ||  // Latin ext A pairs
        (cp >= 0x14A && cp <= 0x176 && (cp % 2) == 0)) {
        out.push_back(cp + 1);
        return;
    }
    if ((cp >= 0x139 && cp <= 0x147 && (cp % 2) == 1) ||
        (cp >= 0x179 && cp <= 0x17D && (cp % 2) == 1)) {
        out.push_back(cp + 1);
        return;
    }
    if (cp >= 0x386 && cp <= 0x38F) {                     // Greek with tonos
        switch (cp) {
        case 0x386: out.push_back(0x3AC); return;
        case 0x388: out.push_back(0x3AD); return;
        case 0x389: out.push_back(0x3AE); return;
        case 0x38A: out.push_back(0x3AF); return;
        case 0x38C: out.push_back(0x3CC); return;
        case 0x38E: out.push_back(0x3CD); return;
        case 0x38F: out.push_back(0x3CE); return;
        default:    out.push_back(cp);    return;
        }
    }
    if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) {      // Greek capitals
        out.push_back(cp + 0x20);
        return;
    }
    if (cp >= 0x400 && cp <= 0x40F) {                     // Cyrillic
        out.push_back(cp + 0x50);
        return;
    }
    if (cp >= 0x410 && cp <= 0x42F) {
        out.push_back(cp + 0x20);
        return;
    }
    if ((cp >= 0x460 && cp <= 0x480 && (cp % 2) == 0) ||
        (cp >= 0x48A && cp <= 0x4BE && (cp % 2) == 0) ||
        (cp >= 0x4D0 && cp <= 0x52E && (cp % 2) == 0)) {
        out.push_back(cp + 1);
        return;
    }
    if (cp == 0x4C0) {
        out.push_back(0x4CF);
        return;
    }
    if (cp >= 0x4C1 && cp <= 0x4CD && (cp % 2) == 1) {
        out.push_back(cp + 1);
        return;
    }
    if (cp >= 0x531 && cp <= 0x556) {                     // Armenian capitals
        out.push_back(cp + 0x30);
        return;
    }
    if ((cp >= 0x1E00 && cp <= 0x1E94 && (cp % 2) == 0) || // Latin additional
        (cp >= 0x1EA0 && cp <= 0x1EFE && (cp % 2) == 0)) {
        out.push_back(cp + 1);
        return;
    }
    if (cp >= 0xFF21 && cp <= 0xFF3A) {                   // fullwidth capitals
        out.push_back(cp + 0x20);
        return;
    }
    out.push_back(cp);
}

} // namespace

std::u32string decode_utf8(std::string_view bytes) {
    std::u32string out;
    out.reserve(bytes.size());
    size_t i = 0;
    while (i < bytes.size())
        out.push_back(decode_one(bytes, i));
    return out;
}

std::string encode_utf8(const std::u32string& cps) {
    std::string out;
    out.reserve(cps.size());
    for (char32_t cp : cps)
        encode_one(cp, out);
    return out;
}

std::string sanitize_utf8(std::string_view bytes) {
    return encode_utf8(decode_utf8(bytes));
}

std::string standardize_name(std::string_view raw) {
    std::u32string folded;
    folded.reserve(raw.size());
    size_t i = 0;
    bool pending_space = false;
    while (i < raw.size()) {
        const char32_t cp = decode_one(raw, i);
        if (!keep_codepoint(cp)) {
            pending_space = true;
            continue;
        }
        if (pending_space && !folded.empty())
            folded.push_back(' ');
        pending_space = false;
        fold_append(cp, folded);
    }
    return encode_utf8(folded);
}

std::vector<std::string> split_tokens(std::string_view standardized) {
    std::vector<std::string> tokens;
    size_t pos = 0;
    while (pos < standardized.size()) {
        const size_t space = standardized.find(' ', pos);
        const size_t end = (space == std::string_view::npos) ? standardized.size() : space;
        if (end > pos)
            tokens.emplace_back(standardized.substr(pos, end - pos));
        pos = end + 1;
    }
    return tokens;
}

int token_count(std::string_view standardized) {
    int n = 0;
    bool in_token = false;
    for (char c : standardized) {
        if (c == ' ') {
            in_token = false;
        } else if (!in_token) {
            in_token = true;
            ++n;
        }
    }
    return n;
}

} // namespace aptlabel
