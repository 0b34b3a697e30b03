#pragma once

#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace aptlabel {

// One (source, nation) block from a group-name source list.
struct RawSourceEntry {
    std::string source_id;
    std::string nation; // raw; standardized on build, empty -> "unknown"
    std::vector<std::string> names;
};

// A canonical group name with every nation and source that claims it.
struct GroupAlias {
    std::string canonical;
    std::set<std::string> nations;
    std::set<std::string> sources;
    int token_count = 0;
};

// Immutable lookup table of canonical group names. Two raw names that
// standardize to the same text are one entry; their nations and sources are
// unioned. Spellings that differ after standardization ("apt 1" vs "apt1")
// stay distinct entries on purpose.
class AliasRegistry {
public:
    // Throws AllSourcesEmptyError when no usable name survives.
    static AliasRegistry build(const std::vector<RawSourceEntry>& sources);

    // Exact lookup by canonical name; nullptr when absent.
    const GroupAlias* lookup(std::string_view canonical) const;

    const std::map<std::string, GroupAlias>& entries() const { return entries_; }
    size_t name_count() const { return entries_.size(); }
    int max_token_len() const { return max_token_len_; }

    // Writes the registry back out in source-list form (one line per
    // canonical/nation pair; the source field carries a comma-joined union).
    void dump(std::ostream& out) const;

private:
    std::map<std::string, GroupAlias> entries_;
    int max_token_len_ = 0;
};

// Parses a TSV source list: source_id <TAB> nation <TAB> name, one per line,
// '#' comments and blank lines skipped, UTF-8 with lossy replacement.
// Lines with the wrong field count raise ParseError.
std::vector<RawSourceEntry> load_alias_sources(const std::filesystem::path& path);

// Nation sentinel used when a source provides no nation for a name.
inline constexpr const char* kUnknownNation = "unknown";

} // namespace aptlabel
