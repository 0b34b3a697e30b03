#include "aptlabel/resolver.hpp"

#include "aptlabel/text_norm.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace aptlabel {

namespace {

bool all_digits(const std::string& s) {
    if (s.empty())
        return false;
    return std::all_of(s.begin(), s.end(), [](unsigned char c) {
        return std::isdigit(c) != 0;
    });
}

bool is_family(const std::string& s) {
    return s == "apt" || s == "atk" || s == "sig" || s == "fin";
}

// "apt28" / "aptc36" -> normalized tag; empty when the token is no tag.
std::string fused_tag(const std::string& tok) {
    static const char* families[] = {"aptc", "apt", "atk", "sig", "fin"};
    for (const char* fam : families) {
        const size_t flen = std::char_traits<char>::length(fam);
        if (tok.size() <= flen || tok.compare(0, flen, fam) != 0)
            continue;
        const std::string digits = tok.substr(flen);
        if (!all_digits(digits))
            continue;
        if (std::string_view(fam) == "aptc")
            return "apt-c-" + digits;
        return fam + digits;
    }
    return {};
}

int total_occurrences(const std::map<std::string, int>& counts) {
    int n = 0;
    for (const auto& [tag, c] : counts)
        n += c;
    return n;
}

std::vector<std::string> nations_of(const GroupAlias& entry) {
    return {entry.nations.begin(), entry.nations.end()};
}

// Builds the decision for a winning tag: a tag whose standardized form is a
// registered canonical name keeps its nation linkage, anything else stays a
// bare designator.
LabelDecision tag_decision(const std::string& tag, const AliasRegistry& registry,
                           Stage stage) {
    LabelDecision d;
    d.stage = stage;
    if (const GroupAlias* entry = registry.lookup(standardize_name(tag))) {
        d.outcome = LabelDecision::Outcome::matched;
        d.label = entry->canonical;
        d.nations = nations_of(*entry);
    } else {
        d.outcome = LabelDecision::Outcome::apt_number_tag;
        d.label = tag;
    }
    return d;
}

LabelDecision match_decision(const GroupMatch& match, const AliasRegistry& registry,
                             Stage stage) {
    LabelDecision d;
    d.stage = stage;
    d.outcome = LabelDecision::Outcome::matched;
    d.label = match.canonical;
    if (const GroupAlias* entry = registry.lookup(match.canonical))
        d.nations = nations_of(*entry);
    return d;
}

} // namespace

const char* stage_name(Stage s) {
    switch (s) {
    case Stage::apt_number:     return "apt_number";
    case Stage::metadata_ngram: return "metadata_ngram";
    case Stage::keyword_ngram:  return "keyword_ngram";
    case Stage::fulltext_retry: return "fulltext_retry";
    case Stage::fallback:       return "fallback";
    }
    return "?";
}

std::map<std::string, int> apt_number_scan(const std::vector<std::string>& tokens) {
    std::map<std::string, int> counts;
    size_t i = 0;
    while (i < tokens.size()) {
        // Longest adjacent form first: (apt, c, N), then (family, N), then
        // a fused token. Consumed tokens are not rescanned.
        if (i + 2 < tokens.size() && tokens[i] == "apt" && tokens[i + 1] == "c" &&
            all_digits(tokens[i + 2])) {
            ++counts["apt-c-" + tokens[i + 2]];
            i += 3;
            continue;
        }
        if (i + 1 < tokens.size() && is_family(tokens[i]) &&
            all_digits(tokens[i + 1])) {
            ++counts[tokens[i] + tokens[i + 1]];
            i += 2;
            continue;
        }
        if (std::string tag = fused_tag(tokens[i]); !tag.empty()) {
            ++counts[tag];
            ++i;
            continue;
        }
        ++i;
    }
    return counts;
}

MajorityOutcome majority_tag(const std::map<std::string, int>& counts) {
    if (counts.empty())
        return {MajorityOutcome::Kind::no_matches, {}};
    int best = 0;
    for (const auto& [tag, c] : counts)
        best = std::max(best, c);
    const std::string* winner = nullptr;
    for (const auto& [tag, c] : counts) {
        if (c != best)
            continue;
        if (winner)
            return {MajorityOutcome::Kind::no_majority, {}};
        winner = &tag;
    }
    return {MajorityOutcome::Kind::tag, *winner};
}

std::vector<GroupMatch> ngram_match(const NgramCounts& ngrams,
                                    const AliasRegistry& registry) {
    std::vector<GroupMatch> matches;
    for (const auto& [gram, count] : ngrams) {
        if (const GroupAlias* entry = registry.lookup(gram))
            matches.push_back({entry->canonical, entry->token_count, count});
    }
    std::sort(matches.begin(), matches.end(),
              [](const GroupMatch& a, const GroupMatch& b) {
                  if (a.token_len != b.token_len)
                      return a.token_len > b.token_len;
                  if (a.count != b.count)
                      return a.count > b.count;
                  return a.canonical < b.canonical;
              });
    return matches;
}

LabelDecision resolve_unit(const TokenStream& unit_tokens,
                           const MetadataBundle& metadata,
                           const TokenStream& fulltext_tokens,
                           const AliasRegistry& registry,
                           int k) {
    std::vector<TraceEntry> trace;
    auto finish = [&trace](LabelDecision d) {
        d.trace = std::move(trace);
        return d;
    };

    // (4) Designator scan over the unit's own tokens.
    const auto unit_counts = apt_number_scan(unit_tokens.tokens);
    trace.push_back({Stage::apt_number, total_occurrences(unit_counts)});
    const MajorityOutcome unit_majority = majority_tag(unit_counts);
    if (unit_majority.kind == MajorityOutcome::Kind::tag)
        return finish(tag_decision(unit_majority.tag, registry, Stage::apt_number));

    // (5) n-grams over path + embedded + sibling metadata.
    const int max_n = registry.max_token_len();
    const auto meta_matches =
        ngram_match(word_ngrams(combined_metadata_tokens(metadata), max_n), registry);
    trace.push_back({Stage::metadata_ngram, static_cast<int>(meta_matches.size())});
    if (!meta_matches.empty())
        return finish(match_decision(meta_matches[0], registry, Stage::metadata_ngram));

    // (6) n-grams over the ranked keyword sequence (not document order).
    const auto kw_matches = ngram_match(
        word_ngrams(top_keywords(unit_tokens, k), max_n), registry);
    trace.push_back({Stage::keyword_ngram, static_cast<int>(kw_matches.size())});
    if (!kw_matches.empty())
        return finish(match_decision(kw_matches[0], registry, Stage::keyword_ngram));

    // (7) One retry of (4)-(6) with the whole document's tokens. Metadata
    // has not changed, so only the scan and keyword legs can produce news.
    const auto full_counts = apt_number_scan(fulltext_tokens.tokens);
    const MajorityOutcome full_majority = majority_tag(full_counts);
    if (full_majority.kind == MajorityOutcome::Kind::tag) {
        trace.push_back({Stage::fulltext_retry, total_occurrences(full_counts)});
        return finish(tag_decision(full_majority.tag, registry, Stage::fulltext_retry));
    }
    const auto full_kw_matches = ngram_match(
        word_ngrams(top_keywords(fulltext_tokens, k), max_n), registry);
    trace.push_back({Stage::fulltext_retry,
                     total_occurrences(full_counts) +
                         static_cast<int>(full_kw_matches.size())});
    if (!full_kw_matches.empty())
        return finish(
            match_decision(full_kw_matches[0], registry, Stage::fulltext_retry));

    // Fallback: promote a tied designator when either scan saw any, else
    // hand back a keyword bundle. Map order makes the tie-break the
    // lexicographically smallest of the highest-count tags.
    const auto& promo = !unit_counts.empty() ? unit_counts : full_counts;
    if (!promo.empty()) {
        trace.push_back({Stage::fallback, 1});
        int best = 0;
        for (const auto& [tag, c] : promo)
            best = std::max(best, c);
        LabelDecision d;
        d.outcome = LabelDecision::Outcome::apt_number_tag;
        d.stage = Stage::fallback;
        for (const auto& [tag, c] : promo) {
            if (c == best) {
                d.label = tag;
                break;
            }
        }
        return finish(std::move(d));
    }

    trace.push_back({Stage::fallback, 0});
    LabelDecision d;
    d.outcome = LabelDecision::Outcome::unlabeled;
    d.stage = Stage::fallback;
    d.bundle.text_keywords = top_keywords(fulltext_tokens, 5);
    std::set<std::string> meta_uni;
    for (const std::string& tok : combined_metadata_tokens(metadata))
        meta_uni.insert(tok);
    d.bundle.metadata_keywords.assign(meta_uni.begin(), meta_uni.end());
    return finish(std::move(d));
}

} // namespace aptlabel
