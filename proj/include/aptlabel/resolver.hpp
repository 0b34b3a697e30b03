#pragma once

#include "aptlabel/alias_registry.hpp"
#include "aptlabel/corpus.hpp"
#include "aptlabel/extraction.hpp"

#include <map>
#include <string>
#include <vector>

namespace aptlabel {

// Stages a unit passes through, in order. fallback covers both the
// no-majority tag promotion and the unlabeled keyword bundle.
enum class Stage {
    apt_number,
    metadata_ngram,
    keyword_ngram,
    fulltext_retry,
    fallback,
};

const char* stage_name(Stage s);

// What an unlabeled unit leaves behind for later analysis.
struct KeywordBundle {
    std::vector<std::string> text_keywords;     // top-5 of the document text
    std::vector<std::string> metadata_keywords; // sorted unique metadata tokens
};

struct TraceEntry {
    Stage stage;
    int match_count = 0;
};

struct LabelDecision {
    enum class Outcome { matched, apt_number_tag, unlabeled };
    Outcome outcome = Outcome::unlabeled;
    std::string label;                 // canonical name or normalized tag
    std::vector<std::string> nations;  // sorted; empty for unregistered tags
    KeywordBundle bundle;              // populated for unlabeled outcomes
    Stage stage = Stage::fallback;
    std::vector<TraceEntry> trace;     // stages attempted, in order
};

// Scans tokens for APT-style numeric designators: apt/atk/sig/fin numbers
// plus the apt-c family. Fused forms ("apt28", "aptc36") and adjacent
// token runs ("apt" "28", "apt" "c" "36") both count. Returns normalized
// tag -> occurrence count ("apt28", "apt-c-36", ...).
std::map<std::string, int> apt_number_scan(const std::vector<std::string>& tokens);

struct MajorityOutcome {
    enum class Kind { tag, no_majority, no_matches };
    Kind kind = Kind::no_matches;
    std::string tag; // set only for kind == tag
};

// Strict plurality: a tag whose count exceeds every other's. A shared
// maximum is no_majority; an empty map is no_matches.
MajorityOutcome majority_tag(const std::map<std::string, int>& counts);

struct GroupMatch {
    std::string canonical;
    int token_len = 0;
    int count = 0;
};

// Registry names appearing among the n-grams, ordered by token length
// (desc), then occurrence count (desc), then name (asc).
std::vector<GroupMatch> ngram_match(const NgramCounts& ngrams,
                                    const AliasRegistry& registry);

// Runs the staged resolution for one unit:
//   apt_number -> metadata_ngram -> keyword_ngram -> fulltext_retry -> fallback
// unit_tokens come from the unit text, fulltext_tokens from the whole
// document; k is the keyword count for the n-gram stage. The decision's
// trace always lists the stages attempted in order.
LabelDecision resolve_unit(const TokenStream& unit_tokens,
                           const MetadataBundle& metadata,
                           const TokenStream& fulltext_tokens,
                           const AliasRegistry& registry,
                           int k);

} // namespace aptlabel
