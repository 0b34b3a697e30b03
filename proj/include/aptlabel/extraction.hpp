#pragma once

#include "aptlabel/corpus.hpp"
#include "aptlabel/digest.hpp"

#include <map>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace aptlabel {

// A digest found in a unit, tied back to where it was seen.
struct HashCandidate {
    std::string hex; // lowercase
    HashAlgo algo = HashAlgo::md5;
    std::string doc_id;
    int unit_index = 0;
};

// Normalized token sequence of a unit or document, document order.
struct TokenStream {
    std::vector<std::string> tokens;
};

using StopwordSet = std::unordered_set<std::string>;

// n-gram text -> number of occurrences (with multiplicity).
using NgramCounts = std::map<std::string, int>;

// Finds every maximal hexadecimal run of exactly 32/40/64/128 characters.
// Runs are bounded by non-hex characters or the ends of the text; a longer
// run (say 65 chars) matches nothing. Output is lowercased, in order of
// appearance.
std::vector<HashCandidate> find_hashes(const TextUnit& unit);

// Standardizes text and splits it into tokens, dropping stopwords and any
// token that is itself a digest-length hex run. Text order is preserved;
// duplicates stay.
TokenStream normalize_text(std::string_view text, const StopwordSet& stopwords);

// Top-k tokens by frequency (descending), ties broken lexicographically
// ascending. Fewer than k distinct tokens yields all of them, still ranked.
std::vector<std::string> top_keywords(const TokenStream& stream, int k);

// All contiguous n-grams for n = 1..max_n over the token sequence, counted
// with multiplicity. A sequence of L tokens yields L-n+1 n-grams per n.
NgramCounts word_ngrams(const std::vector<std::string>& tokens, int max_n);

} // namespace aptlabel
