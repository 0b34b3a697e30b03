#pragma once

#include "aptlabel/corpus.hpp"
#include "aptlabel/verify.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace aptlabel {

struct PipelineConfig {
    std::filesystem::path corpus_root;
    std::vector<std::filesystem::path> alias_sources;
    std::filesystem::path stopword_file;
    std::filesystem::path noise_file; // optional second word list
    int keyword_k = 5;
    int parallelism = 1; // ingestion/resolution workers; output is unaffected
    std::filesystem::path output_dir;
    std::string backend = "fixture"; // fixture | live
    std::filesystem::path fixture_records;
    ClientConfig client;
};

struct RunManifest {
    int documents = 0;
    int skipped_documents = 0;
    int units = 0;
    int hash_candidates = 0;
    int labeled_pre_merge = 0;
    int merged = 0;
    int verified = 0;
    int executable = 0;
    int unknown = 0;
    int unverified = 0;
    std::map<std::string, std::int64_t> timings_ms;
    std::string config_digest;

    std::string to_json() const;
};

struct RunResult {
    RunManifest manifest;
    int exit_code = 0; // 0 ok, 2 documents skipped, 3 backend unavailable
};

// Test seams; unset members fall back to config-driven defaults.
struct RunEnv {
    VerificationBackend* backend = nullptr;
    Clock* clock = nullptr;
    PdfTextBackend* pdf = nullptr;
    std::ostream* log = nullptr; // skip/progress lines; default stderr
};

// Executes the whole pipeline: registry build, corpus scan, unit extraction,
// hash search, staged label resolution, merge/dedup, verification,
// canonicalization, executable filter, dataset + stats + manifest emission.
// Outputs are byte-deterministic for identical inputs and config, whatever
// the parallelism. Fatal configuration problems throw.
RunResult run(const PipelineConfig& cfg, const RunEnv& env = {});

// Same as run, but insists on the existing verification cache: the cache
// file must exist and load cleanly (CacheCorruptError otherwise, with a
// pointer at `cache compact`). Cached answers are never re-fetched.
RunResult resume(const PipelineConfig& cfg, const RunEnv& env = {});

} // namespace aptlabel
