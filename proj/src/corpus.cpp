#include "aptlabel/corpus.hpp"

#include "aptlabel/digest.hpp"
#include "aptlabel/errors.hpp"
#include "aptlabel/text_norm.hpp"
#include "aptlabel/util.hpp"

#include <algorithm>
#include <cctype>
#include <set>

namespace aptlabel {

namespace {

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool has_extension(const std::filesystem::path& path, std::string_view ext) {
    std::string e = path.extension().string();
    std::transform(e.begin(), e.end(), e.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return e == ext;
}

// True when a line reads like a YARA rule header:
//   [private|global ...] rule <identifier> [: tags] ...
bool looks_like_rule_header(std::string_view line) {
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
            ++i;
    };
    auto read_word = [&]() -> std::string_view {
        const size_t start = i;
        while (i < line.size() && is_word_char(line[i]))
            ++i;
        return line.substr(start, i - start);
    };
    skip_ws();
    std::string_view word = read_word();
    while (word == "private" || word == "global") {
        skip_ws();
        word = read_word();
    }
    if (word != "rule")
        return false;
    skip_ws();
    const std::string_view name = read_word();
    return !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
}

bool content_has_rule_block(std::string_view head) {
    for (const std::string& line : split_lines(head))
        if (looks_like_rule_header(line))
            return true;
    return false;
}

// Ends-with helper for sidecar detection.
bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<std::string> split_pages(std::string_view text) {
    std::vector<std::string> pages;
    size_t pos = 0;
    while (pos < text.size()) {
        const size_t ff = text.find('\f', pos);
        const size_t end = (ff == std::string_view::npos) ? text.size() : ff;
        pages.emplace_back(text.substr(pos, end - pos));
        if (ff == std::string_view::npos)
            return pages;
        pos = ff + 1;
    }
    // Trailing form feed after the last page (pdftotext layout): no extra
    // empty page. An entirely empty file yields zero pages.
    return pages;
}

} // namespace

const char* doc_kind_name(DocKind k) {
    switch (k) {
    case DocKind::report_pdf: return "report_pdf";
    case DocKind::ioc_text:   return "ioc_text";
    case DocKind::yara_rules: return "yara_rules";
    }
    return "?";
}

DocKind classify_document(const std::filesystem::path& path,
                          std::string_view head_bytes) {
    if (head_bytes.substr(0, 5) == "%PDF-")
        return DocKind::report_pdf;
    if (has_extension(path, ".yar") || has_extension(path, ".yara"))
        return DocKind::yara_rules;
    if (content_has_rule_block(head_bytes))
        return DocKind::yara_rules;
    return DocKind::ioc_text;
}

PdfExtraction SidecarPdfBackend::extract(const std::filesystem::path& path,
                                         std::string_view /*bytes*/) {
    const std::filesystem::path sidecar = path.string() + ".txt";
    std::string text;
    try {
        text = sanitize_utf8(read_file(sidecar));
    } catch (const UnreadableFileError&) {
        throw ExtractionFailedError("missing text sidecar: " + sidecar.string());
    }
    PdfExtraction out;
    out.pages = split_pages(text);
    const std::filesystem::path metacar = path.string() + ".meta";
    if (std::filesystem::exists(metacar)) {
        for (const std::string& line : split_lines(sanitize_utf8(read_file(metacar)))) {
            if (line.empty() || line[0] == '#')
                continue;
            const size_t tab = line.find('\t');
            if (tab != std::string::npos)
                out.metadata_values.push_back(line.substr(tab + 1));
        }
    }
    return out;
}

std::vector<std::string> split_yara_rules(std::string_view text) {
    std::vector<std::string> rules;
    int depth = 0;
    size_t rule_start = std::string_view::npos;
    bool in_block = false;     // inside the { } body of the current rule
    char prev_sig = '\0';      // last significant char outside strings/comments
    std::string last_word;     // last identifier, for regex-context detection

    size_t i = 0;
    const size_t n = text.size();
    while (i < n) {
        const char c = text[i];
        // Comments.
        if (c == '/' && i + 1 < n && text[i + 1] == '/') {
            while (i < n && text[i] != '\n')
                ++i;
            continue;
        }
        if (c == '/' && i + 1 < n && text[i + 1] == '*') {
            i += 2;
            while (i + 1 < n && !(text[i] == '*' && text[i + 1] == '/'))
                ++i;
            i = (i + 1 < n) ? i + 2 : n;
            continue;
        }
        // Quoted strings (double quotes, backslash escapes).
        if (c == '"') {
            ++i;
            while (i < n && text[i] != '"') {
                if (text[i] == '\\' && i + 1 < n)
                    ++i;
                ++i;
            }
            if (i < n)
                ++i;
            prev_sig = '"';
            last_word.clear();
            continue;
        }
        // Regex literals: a '/' only opens one right after '=', '(', ',',
        // ':' or the keyword "matches"; otherwise it is division. Regexes
        // do not span lines.
        if (c == '/') {
            const bool regex_ctx = prev_sig == '=' || prev_sig == '(' ||
                                   prev_sig == ',' || prev_sig == ':' ||
                                   last_word == "matches";
            if (regex_ctx) {
                ++i;
                while (i < n && text[i] != '/' && text[i] != '\n') {
                    if (text[i] == '\\' && i + 1 < n)
                        ++i;
                    ++i;
                }
                if (i < n && text[i] == '/')
                    ++i;
                prev_sig = '/';
                last_word.clear();
                continue;
            }
        }
        if (is_word_char(c)) {
            const size_t start = i;
            while (i < n && is_word_char(text[i]))
                ++i;
            last_word.assign(text.substr(start, i - start));
            prev_sig = text[i - 1];
            if (depth == 0 && !in_block && last_word == "rule")
                rule_start = start;
            continue;
        }
        if (c == '{') {
            if (depth == 0 && rule_start != std::string_view::npos)
                in_block = true;
            ++depth;
        } else if (c == '}') {
            if (depth > 0)
                --depth;
            if (depth == 0 && in_block) {
                rules.emplace_back(text.substr(rule_start, i + 1 - rule_start));
                rule_start = std::string_view::npos;
                in_block = false;
            }
        }
        // Whitespace keeps the regex-context state alive ("matches /x/").
        if (!std::isspace(static_cast<unsigned char>(c))) {
            prev_sig = c;
            last_word.clear();
        }
        ++i;
    }
    return rules;
}

std::vector<TextUnit> extract_units(const SourceDocument& doc,
                                    std::string_view raw_bytes,
                                    PdfTextBackend& pdf_backend,
                                    const std::filesystem::path& fs_path,
                                    std::vector<std::string>* embedded_out) {
    std::vector<std::string> parts;
    switch (doc.kind) {
    case DocKind::report_pdf: {
        const std::filesystem::path where =
            fs_path.empty() ? std::filesystem::path(doc.path) : fs_path;
        PdfExtraction ex = pdf_backend.extract(where, raw_bytes);
        parts = std::move(ex.pages);
        if (embedded_out)
            *embedded_out = std::move(ex.metadata_values);
        break;
    }
    case DocKind::yara_rules:
        parts = split_yara_rules(sanitize_utf8(raw_bytes));
        break;
    case DocKind::ioc_text:
        parts = split_lines(sanitize_utf8(raw_bytes));
        break;
    }
    std::vector<TextUnit> units;
    units.reserve(parts.size());
    for (size_t idx = 0; idx < parts.size(); ++idx)
        units.push_back({doc.doc_id, static_cast<int>(idx), std::move(parts[idx])});
    return units;
}

std::vector<LoadedDocument> scan_corpus(const std::filesystem::path& root,
                                        std::vector<std::string>* skipped_paths) {
    if (!std::filesystem::is_directory(root))
        throw ConfigError("corpus root is not a directory: " + root.string());

    std::vector<std::pair<std::string, std::filesystem::path>> files;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file())
            continue;
        const std::string rel =
            entry.path().lexically_relative(root).generic_string();
        // "<x>.pdf.txt" / "<x>.pdf.meta" are extraction sidecars, not corpus
        // documents in their own right.
        if (ends_with(rel, ".pdf.txt") || ends_with(rel, ".pdf.meta"))
            continue;
        files.emplace_back(rel, entry.path());
    }
    std::sort(files.begin(), files.end());

    std::vector<LoadedDocument> docs;
    docs.reserve(files.size());
    for (auto& [rel, abs] : files) {
        std::string bytes;
        try {
            bytes = read_file(abs);
        } catch (const UnreadableFileError&) {
            if (!skipped_paths)
                throw;
            skipped_paths->push_back(rel);
            continue;
        }
        LoadedDocument ld;
        ld.doc.path = rel;
        ld.doc.kind = classify_document(abs, std::string_view(bytes).substr(0, 4096));
        ld.doc.content_digest = sha256_hex(bytes);
        ld.doc.doc_id = ld.doc.content_digest + "#" + rel;
        ld.abs_path = std::move(abs);
        ld.bytes = std::move(bytes);
        docs.push_back(std::move(ld));
    }
    return docs;
}

void populate_metadata(std::vector<LoadedDocument>& docs) {
    for (LoadedDocument& ld : docs) {
        MetadataBundle& m = ld.doc.metadata;
        m.path_tokens.clear();
        for (const auto& component : std::filesystem::path(ld.doc.path))
            for (std::string& tok : split_tokens(standardize_name(component.string())))
                m.path_tokens.push_back(std::move(tok));
        m.embedded.clear();
        for (const std::string& value : ld.embedded_values)
            for (std::string& tok : split_tokens(standardize_name(value)))
                m.embedded.push_back(std::move(tok));
    }

    // Sibling tokens: union of path+embedded tokens across all *other*
    // documents sharing the same content digest, sorted for determinism.
    std::map<std::string, std::vector<size_t>> by_digest;
    for (size_t i = 0; i < docs.size(); ++i)
        by_digest[docs[i].doc.content_digest].push_back(i);
    for (const auto& [digest, idxs] : by_digest) {
        if (idxs.size() < 2)
            continue;
        for (const size_t self : idxs) {
            std::set<std::string> uni;
            for (const size_t other : idxs) {
                if (other == self)
                    continue;
                const MetadataBundle& om = docs[other].doc.metadata;
                uni.insert(om.path_tokens.begin(), om.path_tokens.end());
                uni.insert(om.embedded.begin(), om.embedded.end());
            }
            docs[self].doc.metadata.sibling.assign(uni.begin(), uni.end());
        }
    }
}

std::vector<std::string> combined_metadata_tokens(const MetadataBundle& m) {
    std::vector<std::string> all;
    all.reserve(m.path_tokens.size() + m.embedded.size() + m.sibling.size());
    all.insert(all.end(), m.path_tokens.begin(), m.path_tokens.end());
    all.insert(all.end(), m.embedded.begin(), m.embedded.end());
    all.insert(all.end(), m.sibling.begin(), m.sibling.end());
    return all;
}

} // namespace aptlabel
