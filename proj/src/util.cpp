#include "aptlabel/util.hpp"

#include "aptlabel/errors.hpp"
#include "aptlabel/text_norm.hpp"

#include <fstream>
#include <sstream>

namespace aptlabel {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UnreadableFileError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw UnreadableFileError("read failed: " + path.string());
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw UnreadableFileError("cannot open file for writing: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out)
        throw UnreadableFileError("write failed: " + path.string());
}

std::vector<std::string> split_tsv(std::string_view line) {
    std::vector<std::string> fields;
    size_t pos = 0;
    while (true) {
        const size_t tab = line.find('\t', pos);
        if (tab == std::string_view::npos) {
            fields.emplace_back(line.substr(pos));
            break;
        }
        fields.emplace_back(line.substr(pos, tab - pos));
        pos = tab + 1;
    }
    return fields;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i)
            out += sep;
        out += parts[i];
    }
    return out;
}

std::unordered_set<std::string> load_wordlist(const std::filesystem::path& path) {
    std::unordered_set<std::string> words;
    for (const std::string& line : split_lines(read_file(path))) {
        if (line.empty() || line[0] == '#')
            continue;
        for (const std::string& tok : split_tokens(standardize_name(line)))
            words.insert(tok);
    }
    return words;
}

std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t nl = text.find('\n', pos);
        const size_t end = (nl == std::string_view::npos) ? text.size() : nl;
        size_t len = end - pos;
        if (len > 0 && text[pos + len - 1] == '\r')
            --len;
        lines.emplace_back(text.substr(pos, len));
        if (nl == std::string_view::npos)
            break;
        pos = nl + 1;
    }
    return lines;
}

} // namespace aptlabel
