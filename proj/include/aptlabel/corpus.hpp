#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace aptlabel {

enum class DocKind { report_pdf, ioc_text, yara_rules };

const char* doc_kind_name(DocKind k);

// Standardized token lists describing a document from the outside.
struct MetadataBundle {
    std::vector<std::string> path_tokens; // from path components, in order
    std::vector<std::string> embedded;    // title/author/subject/keywords
    std::vector<std::string> sibling;     // union from same-digest documents
};

struct SourceDocument {
    std::string doc_id;         // content_digest + "#" + path
    std::string path;           // as discovered, relative to the corpus root
    DocKind kind = DocKind::ioc_text;
    std::string content_digest; // sha256 of raw bytes, lowercase hex
    MetadataBundle metadata;
};

// One extraction unit: a PDF page, a YARA rule block, or an IoC line.
struct TextUnit {
    std::string doc_id;
    int unit_index = 0;
    std::string text; // may be empty (blank page/line); kept for stable indices
};

// Text and embedded metadata pulled out of one PDF.
struct PdfExtraction {
    std::vector<std::string> pages;
    std::vector<std::string> metadata_values; // raw title/author/... values
};

// PDF text extraction is pluggable so tests and offline runs never need a
// real PDF parser.
class PdfTextBackend {
public:
    virtual ~PdfTextBackend() = default;
    // Throws ExtractionFailedError when the document cannot be processed.
    virtual PdfExtraction extract(const std::filesystem::path& path,
                                  std::string_view bytes) = 0;
};

// Reads pre-extracted text from "<name>.pdf.txt" next to the PDF, one page
// per form-feed-separated segment (the layout pdftotext produces). Embedded
// metadata comes from an optional "<name>.pdf.meta" file of "key<TAB>value"
// lines.
class SidecarPdfBackend : public PdfTextBackend {
public:
    PdfExtraction extract(const std::filesystem::path& path,
                          std::string_view bytes) override;
};

// Decides how a file will be ingested. "%PDF-" magic wins; a .yar/.yara
// extension or top-level rule-block grammar marks YARA; everything else is
// line-oriented IoC text. head_bytes holds the start of the file (empty for
// empty files).
DocKind classify_document(const std::filesystem::path& path,
                          std::string_view head_bytes);

// Splits raw content into ordered units for the document's kind.
// PDF extraction failures propagate as ExtractionFailedError. fs_path names
// the on-disk location (for sidecar lookup); empty means doc.path is usable
// as-is. embedded_out, when given, receives raw embedded metadata values.
std::vector<TextUnit> extract_units(const SourceDocument& doc,
                                    std::string_view raw_bytes,
                                    PdfTextBackend& pdf_backend,
                                    const std::filesystem::path& fs_path = {},
                                    std::vector<std::string>* embedded_out = nullptr);

// Splits YARA source into one string per top-level "rule name { ... }"
// block, rule header included. Quoted strings, comments and regexes are
// skipped while balancing braces.
std::vector<std::string> split_yara_rules(std::string_view text);

// A document plus its raw bytes, ready for unit extraction. doc.path is
// root-relative (it feeds doc_id and metadata); abs_path locates the file
// and its sidecars on disk.
struct LoadedDocument {
    SourceDocument doc;
    std::filesystem::path abs_path;
    std::string bytes;
    std::vector<std::string> embedded_values; // raw metadata, PDFs only
};

// Walks the corpus root in sorted path order, reads and classifies every
// file, and computes content digests. PDF sidecar files are companions of
// their PDF, not documents. Unreadable files are recorded in skipped_paths
// (when given) and left out; without it they raise UnreadableFileError.
std::vector<LoadedDocument> scan_corpus(const std::filesystem::path& root,
                                        std::vector<std::string>* skipped_paths = nullptr);

// Fills metadata for every document: path tokens, embedded tokens, and the
// sibling union across documents sharing a content digest.
void populate_metadata(std::vector<LoadedDocument>& docs);

// All metadata of a bundle as one token sequence (path, embedded, sibling).
std::vector<std::string> combined_metadata_tokens(const MetadataBundle& m);

} // namespace aptlabel
