#include <doctest.h>

#include "aptlabel/corpus.hpp"
#include "aptlabel/digest.hpp"
#include "aptlabel/errors.hpp"
#include "aptlabel/util.hpp"

#include "helpers.hpp"

#include <algorithm>

using namespace aptlabel;

TEST_CASE("classify_document") {
    CHECK(classify_document("x/report.pdf", "%PDF-1.7 blah") ==
          DocKind::report_pdf);
    // Magic wins over extension.
    CHECK(classify_document("x/report.txt", "%PDF-1.4") == DocKind::report_pdf);
    CHECK(classify_document("x/rules.yar", "anything") == DocKind::yara_rules);
    CHECK(classify_document("x/rules.YARA", "anything") == DocKind::yara_rules);
    CHECK(classify_document("x/feed.txt", "rule Dropper_1 {\n}") ==
          DocKind::yara_rules);
    CHECK(classify_document("x/feed.txt", "private rule X { }") ==
          DocKind::yara_rules);
    // "rule" must start a rule header, not merely appear.
    CHECK(classify_document("x/feed.txt", "the rule of thumb {") ==
          DocKind::ioc_text);
    CHECK(classify_document("x/feed.txt", "rule 9bad {") == DocKind::ioc_text);
    CHECK(classify_document("x/feed.txt", "plain line\n") == DocKind::ioc_text);
    CHECK(classify_document("x/feed.txt", "") == DocKind::ioc_text);
}

TEST_CASE("split_yara_rules walks strings, comments and regexes") {
    const std::string src =
        "// header comment with rule Fake_One { inside\n"
        "import \"pe\"\n"
        "\n"
        "rule First_Rule : apt {\n"
        "    meta:\n"
        "        description = \"contains { braces } and \\\" quotes\"\n"
        "    strings:\n"
        "        $re = /open\\{2,3\\}brace{/\n"
        "        $s = \"}\"\n"
        "    condition:\n"
        "        $re or $s\n"
        "}\n"
        "/* block comment } { */\n"
        "rule Second_Rule {\n"
        "    condition: filesize matches /x{1,2}/ or true\n"
        "}\n";
    const std::vector<std::string> rules = split_yara_rules(src);
    REQUIRE(rules.size() == 2);
    CHECK(rules[0].substr(0, 15) == "rule First_Rule");
    CHECK(rules[0].back() == '}');
    // The quoted "}" must not have closed the block early.
    CHECK(rules[0].find("$re or $s") != std::string::npos);
    CHECK(rules[1].substr(0, 16) == "rule Second_Rule");
    CHECK(rules[1].find("matches /x{1,2}/") != std::string::npos);
}

TEST_CASE("split_yara_rules ignores braces outside rule blocks") {
    CHECK(split_yara_rules("{ } { no rules here }").empty());
    // An unterminated rule yields nothing rather than a torn slice.
    CHECK(split_yara_rules("rule Broken { condition: true").empty());
}

TEST_CASE("extract_units for ioc text keeps line positions") {
    SidecarPdfBackend pdf;
    SourceDocument doc;
    doc.doc_id = "d#iocs/a.txt";
    doc.kind = DocKind::ioc_text;
    const auto units = extract_units(doc, "one\n\nthree\r\nlast", pdf);
    REQUIRE(units.size() == 4);
    CHECK(units[0].text == "one");
    CHECK(units[1].text == "");
    CHECK(units[2].text == "three");
    CHECK(units[3].text == "last");
    CHECK(units[2].doc_id == doc.doc_id);
    CHECK(units[2].unit_index == 2);
}

TEST_CASE("sidecar pdf extraction: pages, metadata, failure") {
    testutil::TempDir tmp;
    const auto pdf_path = tmp.path / "r.pdf";
    write_file(pdf_path, "%PDF-1.4\n");
    write_file(tmp.path / "r.pdf.txt", "page one\ftwo\f\n");
    write_file(tmp.path / "r.pdf.meta",
               "# comment\ntitle\tSome Title\nauthor\tDesk\nnotab_ignored\n");

    SidecarPdfBackend backend;
    const PdfExtraction ex = backend.extract(pdf_path, "%PDF-1.4\n");
    REQUIRE(ex.pages.size() == 3);
    CHECK(ex.pages[0] == "page one");
    CHECK(ex.pages[1] == "two");
    CHECK(ex.pages[2] == "\n");
    CHECK(ex.metadata_values ==
          std::vector<std::string>{"Some Title", "Desk"});

    SourceDocument doc;
    doc.kind = DocKind::report_pdf;
    doc.path = "r.pdf";
    std::vector<std::string> embedded;
    const auto units = extract_units(doc, "%PDF-1.4\n", backend, pdf_path,
                                     &embedded);
    CHECK(units.size() == 3);
    CHECK(embedded.size() == 2);

    const auto missing = tmp.path / "nosidecar.pdf";
    write_file(missing, "%PDF-1.4\n");
    CHECK_THROWS_AS(backend.extract(missing, ""), ExtractionFailedError);
}

TEST_CASE("scan_corpus finds, sorts and fingerprints the fixture corpus") {
    const auto root = testutil::fixtures_dir() / "corpus";
    const auto docs = scan_corpus(root);
    REQUIRE(docs.size() == 20);
    // Sorted by root-relative path; sidecars are not documents.
    CHECK(std::is_sorted(docs.begin(), docs.end(),
                         [](const LoadedDocument& a, const LoadedDocument& b) {
                             return a.doc.path < b.doc.path;
                         }));
    for (const LoadedDocument& d : docs) {
        CHECK(d.doc.path.find(".pdf.txt") == std::string::npos);
        CHECK(d.doc.path.find(".pdf.meta") == std::string::npos);
        CHECK(d.doc.content_digest == sha256_hex(d.bytes));
        CHECK(d.doc.doc_id == d.doc.content_digest + "#" + d.doc.path);
    }
    CHECK(docs.front().doc.path == "archive/cn/comment_crew.pdf");
    CHECK(docs.front().doc.kind == DocKind::report_pdf);

    const auto yar = std::find_if(docs.begin(), docs.end(),
                                  [](const LoadedDocument& d) {
                                      return d.doc.path ==
                                             "rules/community_rules.txt";
                                  });
    REQUIRE(yar != docs.end());
    // Content-based classification: .txt extension, rule-block grammar.
    CHECK(yar->doc.kind == DocKind::yara_rules);

    CHECK_THROWS_AS(scan_corpus(root / "no_such_dir"), ConfigError);
}

TEST_CASE("populate_metadata: path tokens in order, sibling union by digest") {
    const auto root = testutil::fixtures_dir() / "corpus";
    auto docs = scan_corpus(root);
    SidecarPdfBackend pdf;
    for (LoadedDocument& ld : docs)
        if (ld.doc.kind == DocKind::report_pdf)
            extract_units(ld.doc, ld.bytes, pdf, ld.abs_path,
                          &ld.embedded_values);
    populate_metadata(docs);

    auto find_doc = [&](const std::string& path) -> const SourceDocument& {
        for (const LoadedDocument& d : docs)
            if (d.doc.path == path)
                return d.doc;
        REQUIRE(false);
        return docs[0].doc;
    };

    const SourceDocument& sednit = find_doc("reports/apt28/operation_sednit.pdf");
    CHECK(sednit.metadata.path_tokens ==
          std::vector<std::string>{"reports", "apt28", "operation", "sednit",
                                   "pdf"});
    CHECK(sednit.metadata.sibling.empty());

    // Embedded values come from the .meta sidecar, standardized.
    const SourceDocument& winter = find_doc("reports/dprk/winter_activity.pdf");
    CHECK(winter.metadata.embedded ==
          std::vector<std::string>{"kimsuky", "phishing", "wave", "cti",
                                   "desk"});

    // The two identical PDFs see each other's tokens as siblings.
    const SourceDocument& mirror = find_doc("archive/cn/comment_crew.pdf");
    const std::vector<std::string> sib = mirror.metadata.sibling;
    CHECK(std::find(sib.begin(), sib.end(), "apt1") != sib.end());
    CHECK(std::is_sorted(sib.begin(), sib.end()));
    const SourceDocument& primary = find_doc("reports/apt1/comment_crew.pdf");
    const std::vector<std::string> sib2 = primary.metadata.sibling;
    CHECK(std::find(sib2.begin(), sib2.end(), "archive") != sib2.end());

    // combined = path then embedded then sibling.
    const auto all = combined_metadata_tokens(winter.metadata);
    REQUIRE(all.size() == winter.metadata.path_tokens.size() +
                              winter.metadata.embedded.size());
    CHECK(all.front() == "reports");
    CHECK(all.back() == "desk");
}
