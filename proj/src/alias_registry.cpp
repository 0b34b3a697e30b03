#include "aptlabel/alias_registry.hpp"

#include "aptlabel/errors.hpp"
#include "aptlabel/text_norm.hpp"
#include "aptlabel/util.hpp"

#include <algorithm>

namespace aptlabel {

AliasRegistry AliasRegistry::build(const std::vector<RawSourceEntry>& sources) {
    AliasRegistry reg;
    for (const RawSourceEntry& src : sources) {
        std::string nation = standardize_name(src.nation);
        if (nation.empty())
            nation = kUnknownNation;
        for (const std::string& raw : src.names) {
            std::string canonical = standardize_name(raw);
            if (canonical.empty())
                continue; // name was all punctuation/whitespace
            GroupAlias& entry = reg.entries_[canonical];
            if (entry.canonical.empty()) {
                entry.canonical = canonical;
                entry.token_count = token_count(canonical);
                reg.max_token_len_ = std::max(reg.max_token_len_, entry.token_count);
            }
            entry.nations.insert(nation);
            entry.sources.insert(src.source_id);
        }
    }
    if (reg.entries_.empty())
        throw AllSourcesEmptyError("no usable group names in any source");
    return reg;
}

const GroupAlias* AliasRegistry::lookup(std::string_view canonical) const {
    const auto it = entries_.find(std::string(canonical));
    return it == entries_.end() ? nullptr : &it->second;
}

void AliasRegistry::dump(std::ostream& out) const {
    for (const auto& [canonical, entry] : entries_) {
        std::string sources = join({entry.sources.begin(), entry.sources.end()}, ",");
        for (const std::string& nation : entry.nations)
            out << sources << '\t' << nation << '\t' << canonical << '\n';
    }
}

std::vector<RawSourceEntry> load_alias_sources(const std::filesystem::path& path) {
    const std::string text = sanitize_utf8(read_file(path));
    std::vector<RawSourceEntry> entries;
    int lineno = 0;
    for (const std::string& line : split_lines(text)) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        std::vector<std::string> fields = split_tsv(line);
        if (fields.size() != 3)
            throw ParseError(path.string() + ":" + std::to_string(lineno) +
                             ": expected 3 tab-separated fields, got " +
                             std::to_string(fields.size()));
        // Group consecutive lines of one (source, nation) block together so a
        // RawSourceEntry mirrors the "nation -> names" shape of the sources.
        if (!entries.empty() && entries.back().source_id == fields[0] &&
            entries.back().nation == fields[1]) {
            entries.back().names.push_back(fields[2]);
        } else {
            entries.push_back({fields[0], fields[1], {fields[2]}});
        }
    }
    return entries;
}

} // namespace aptlabel
