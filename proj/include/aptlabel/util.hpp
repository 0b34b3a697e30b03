#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace aptlabel {

// Reads a whole file as raw bytes. Throws UnreadableFileError.
std::string read_file(const std::filesystem::path& path);

// Writes bytes, creating parent directories as needed.
void write_file(const std::filesystem::path& path, std::string_view content);

// Splits one line on tab characters; empty fields are preserved.
std::vector<std::string> split_tsv(std::string_view line);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Loads a one-token-per-line word list ('#' comments, blank lines skipped).
// Tokens are standardized on load, so the set matches normalized text.
std::unordered_set<std::string> load_wordlist(const std::filesystem::path& path);

// Splits text into lines on '\n', stripping one trailing '\r' per line.
// A final empty segment produced by a trailing newline is dropped; interior
// empty lines are preserved.
std::vector<std::string> split_lines(std::string_view text);

} // namespace aptlabel
