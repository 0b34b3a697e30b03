#include "aptlabel/extraction.hpp"

#include "aptlabel/text_norm.hpp"

#include <algorithm>
#include <cctype>

namespace aptlabel {

namespace {

bool is_hex_char(char c) {
    return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
           (c >= 'A' && c <= 'F');
}

} // namespace

std::vector<HashCandidate> find_hashes(const TextUnit& unit) {
    std::vector<HashCandidate> found;
    const std::string& text = unit.text;
    size_t i = 0;
    while (i < text.size()) {
        if (!is_hex_char(text[i])) {
            ++i;
            continue;
        }
        const size_t start = i;
        while (i < text.size() && is_hex_char(text[i]))
            ++i;
        const size_t len = i - start; // maximal run: [start, i)
        if (const auto algo = algo_from_length(len)) {
            std::string hex = text.substr(start, len);
            std::transform(hex.begin(), hex.end(), hex.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            found.push_back({std::move(hex), *algo, unit.doc_id, unit.unit_index});
        }
    }
    return found;
}

TokenStream normalize_text(std::string_view text, const StopwordSet& stopwords) {
    TokenStream out;
    for (std::string& tok : split_tokens(standardize_name(text))) {
        if (stopwords.count(tok))
            continue;
        if (is_wellformed_digest(tok))
            continue; // hashes are handled by find_hashes, not as words
        out.tokens.push_back(std::move(tok));
    }
    return out;
}

std::vector<std::string> top_keywords(const TokenStream& stream, int k) {
    if (k <= 0)
        return {};
    std::map<std::string, int> freq;
    for (const std::string& tok : stream.tokens)
        ++freq[tok];
    // Keyword weight is plain frequency; swap this ranking out here if a
    // smarter scorer (tf-idf and friends) is ever wanted.
    std::vector<std::pair<std::string, int>> ranked(freq.begin(), freq.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second)
            return a.second > b.second;
        return a.first < b.first;
    });
    std::vector<std::string> out;
    out.reserve(std::min<size_t>(ranked.size(), static_cast<size_t>(k)));
    for (const auto& [tok, n] : ranked) {
        if (out.size() == static_cast<size_t>(k))
            break;
        out.push_back(tok);
    }
    return out;
}

NgramCounts word_ngrams(const std::vector<std::string>& tokens, int max_n) {
    NgramCounts counts;
    const int len = static_cast<int>(tokens.size());
    for (int n = 1; n <= max_n; ++n) {
        for (int i = 0; i + n <= len; ++i) {
            std::string gram = tokens[static_cast<size_t>(i)];
            for (int j = 1; j < n; ++j) {
                gram += ' ';
                gram += tokens[static_cast<size_t>(i + j)];
            }
            ++counts[gram];
        }
    }
    return counts;
}

} // namespace aptlabel
