#pragma once

#include "aptlabel/merge.hpp"

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace aptlabel {

// One row of the labeled dataset file.
struct DatasetRecord {
    std::string sha256;
    std::string md5;
    std::string sha1;
    std::string labels_joined;  // sorted unique, "/"-separated, non-empty
    std::string nations_joined; // sorted unique, "/"-separated, may be empty
    std::string stage;          // contributing stages in pipeline order
    int detections = 0;
    int engines_total = 0;
    std::string file_type;
    int provenance_count = 0;
};

// One row of the unknown dataset: a hash nobody could label, with the
// keyword bundle that was left behind.
struct UnknownRecord {
    std::string hash; // sha256 when verified, raw extracted hex otherwise
    std::string text_keywords;     // "/"-joined
    std::string metadata_keywords; // "/"-joined
};

// One row of the unverified report: hashes that never made the dataset.
struct UnverifiedRecord {
    std::string hash;
    std::string algo;
    std::string labels_joined;
    std::string nations_joined;
    std::string file_type; // set when the sample verified but was rejected
    std::string reason;    // not_known | backend_unavailable | not_submitted |
                           // non_executable
};

// TSV emitters. Every file carries a header row, rows are pre-sorted by the
// caller's contract (labeled by (sha256, labels), others by hash), and the
// same inputs always produce identical bytes.
void write_labeled(const std::filesystem::path& path,
                   const std::vector<DatasetRecord>& records);
void write_unknown(const std::filesystem::path& path,
                   const std::vector<UnknownRecord>& records);
void write_unverified(const std::filesystem::path& path,
                      const std::vector<UnverifiedRecord>& records);

std::vector<DatasetRecord> read_labeled(const std::filesystem::path& path);
std::vector<UnknownRecord> read_unknown(const std::filesystem::path& path);

// Aggregates recomputable from the emitted files alone.
struct StatsReport {
    int total_labeled = 0;
    int group_count = 0;
    int groups_ge_50 = 0;
    int groups_ge_25 = 0;
    int single_nation_samples = 0;
    int multi_nation_samples = 0;
    int no_nation_samples = 0;
    int unknown_samples = 0;
    std::map<std::string, int> per_nation;       // exactly-one-nation samples
    std::map<std::string, int> multi_nation;     // joined combination -> count
    std::map<std::string, int> per_group;        // multi-label counts once per label
    std::map<int, int> detections_histogram;
    // group -> detections -> count, for groups with >= histogram_min samples
    std::map<std::string, std::map<int, int>> group_histograms;
};

// Computes stats from dataset files; histogram_min gates the per-group
// detection histograms (50 mirrors the "well-represented group" cut).
StatsReport compute_stats(const std::filesystem::path& labeled_file,
                          const std::filesystem::path& unknown_file,
                          int histogram_min = 50);

void write_stats(const std::filesystem::path& path, const StatsReport& stats);

// Scale observed when this method was run against the full public OSINT
// corpus with live verification. Documented for orientation; the bundled
// fixtures are a miniature and do not reproduce these numbers.
inline constexpr int kFullScaleLabeledSamples = 15660;
inline constexpr int kFullScaleGroups = 164;
inline constexpr int kFullScaleSourceFiles = 896;
inline constexpr int kFullScaleUnknownSamples = 7485;
inline constexpr int kFullScaleGroupsWith50Plus = 37;
inline constexpr int kFullScaleGroupsWith25Plus = 54;
inline constexpr int kFullScaleRegistryNames = 1532;

} // namespace aptlabel
