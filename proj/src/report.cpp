#include "aptlabel/report.hpp"

#include "aptlabel/errors.hpp"
#include "aptlabel/util.hpp"

#include <sstream>

namespace aptlabel {

namespace {

constexpr const char* kLabeledHeader =
    "sha256\tmd5\tsha1\tlabels\tnations\tstage\tdetections\tengines_total\t"
    "file_type\tprovenance_count";
constexpr const char* kUnknownHeader = "hash\ttext_keywords\tmetadata_keywords";
constexpr const char* kUnverifiedHeader =
    "hash\talgo\tlabels\tnations\tfile_type\treason";

int parse_int_field(const std::string& s, const std::string& where) {
    try {
        return std::stoi(s);
    } catch (const std::exception&) {
        throw ParseError(where + ": bad integer '" + s + "'");
    }
}

std::vector<std::string> split_slash(const std::string& s) {
    std::vector<std::string> parts;
    if (s.empty())
        return parts;
    size_t pos = 0;
    while (true) {
        const size_t slash = s.find('/', pos);
        if (slash == std::string::npos) {
            parts.push_back(s.substr(pos));
            return parts;
        }
        parts.push_back(s.substr(pos, slash - pos));
        pos = slash + 1;
    }
}

} // namespace

void write_labeled(const std::filesystem::path& path,
                   const std::vector<DatasetRecord>& records) {
    std::ostringstream out;
    out << kLabeledHeader << '\n';
    for (const DatasetRecord& r : records)
        out << r.sha256 << '\t' << r.md5 << '\t' << r.sha1 << '\t'
            << r.labels_joined << '\t' << r.nations_joined << '\t' << r.stage
            << '\t' << r.detections << '\t' << r.engines_total << '\t'
            << r.file_type << '\t' << r.provenance_count << '\n';
    write_file(path, out.str());
}

void write_unknown(const std::filesystem::path& path,
                   const std::vector<UnknownRecord>& records) {
    std::ostringstream out;
    out << kUnknownHeader << '\n';
    for (const UnknownRecord& r : records)
        out << r.hash << '\t' << r.text_keywords << '\t' << r.metadata_keywords
            << '\n';
    write_file(path, out.str());
}

void write_unverified(const std::filesystem::path& path,
                      const std::vector<UnverifiedRecord>& records) {
    std::ostringstream out;
    out << kUnverifiedHeader << '\n';
    for (const UnverifiedRecord& r : records)
        out << r.hash << '\t' << r.algo << '\t' << r.labels_joined << '\t'
            << r.nations_joined << '\t' << r.file_type << '\t' << r.reason << '\n';
    write_file(path, out.str());
}

std::vector<DatasetRecord> read_labeled(const std::filesystem::path& path) {
    const std::vector<std::string> lines = split_lines(read_file(path));
    if (lines.empty() || lines[0] != kLabeledHeader)
        throw ParseError(path.string() + ": missing or unexpected header");
    std::vector<DatasetRecord> records;
    for (size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> f = split_tsv(lines[i]);
        const std::string where = path.string() + ":" + std::to_string(i + 1);
        if (f.size() != 10)
            throw ParseError(where + ": expected 10 fields");
        DatasetRecord r;
        r.sha256 = f[0];
        r.md5 = f[1];
        r.sha1 = f[2];
        r.labels_joined = f[3];
        r.nations_joined = f[4];
        r.stage = f[5];
        r.detections = parse_int_field(f[6], where);
        r.engines_total = parse_int_field(f[7], where);
        r.file_type = f[8];
        r.provenance_count = parse_int_field(f[9], where);
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<UnknownRecord> read_unknown(const std::filesystem::path& path) {
    const std::vector<std::string> lines = split_lines(read_file(path));
    if (lines.empty() || lines[0] != kUnknownHeader)
        throw ParseError(path.string() + ": missing or unexpected header");
    std::vector<UnknownRecord> records;
    for (size_t i = 1; i < lines.size(); ++i) {
        const std::vector<std::string> f = split_tsv(lines[i]);
        if (f.size() != 3)
            throw ParseError(path.string() + ":" + std::to_string(i + 1) +
                             ": expected 3 fields");
        records.push_back({f[0], f[1], f[2]});
    }
    return records;
}

StatsReport compute_stats(const std::filesystem::path& labeled_file,
                          const std::filesystem::path& unknown_file,
                          int histogram_min) {
    StatsReport stats;
    const std::vector<DatasetRecord> labeled = read_labeled(labeled_file);
    stats.total_labeled = static_cast<int>(labeled.size());
    stats.unknown_samples = static_cast<int>(read_unknown(unknown_file).size());

    for (const DatasetRecord& r : labeled) {
        for (const std::string& group : split_slash(r.labels_joined))
            ++stats.per_group[group];
        const std::vector<std::string> nations = split_slash(r.nations_joined);
        if (nations.empty()) {
            ++stats.no_nation_samples;
        } else if (nations.size() == 1) {
            ++stats.single_nation_samples;
            ++stats.per_nation[nations[0]];
        } else {
            // Possible mis-attribution: kept out of the per-nation counts
            // and reported as its own combination.
            ++stats.multi_nation_samples;
            ++stats.multi_nation[r.nations_joined];
        }
        ++stats.detections_histogram[r.detections];
    }
    stats.group_count = static_cast<int>(stats.per_group.size());
    for (const auto& [group, n] : stats.per_group) {
        if (n >= 50)
            ++stats.groups_ge_50;
        if (n >= 25)
            ++stats.groups_ge_25;
    }
    for (const DatasetRecord& r : labeled)
        for (const std::string& group : split_slash(r.labels_joined))
            if (stats.per_group[group] >= histogram_min)
                ++stats.group_histograms[group][r.detections];
    return stats;
}

void write_stats(const std::filesystem::path& path, const StatsReport& stats) {
    std::ostringstream out;
    out << "section\tkey\tvalue\n";
    out << "summary\ttotal_labeled\t" << stats.total_labeled << '\n';
    out << "summary\tgroup_count\t" << stats.group_count << '\n';
    out << "summary\tgroups_ge_50\t" << stats.groups_ge_50 << '\n';
    out << "summary\tgroups_ge_25\t" << stats.groups_ge_25 << '\n';
    out << "summary\tsingle_nation_samples\t" << stats.single_nation_samples << '\n';
    out << "summary\tmulti_nation_samples\t" << stats.multi_nation_samples << '\n';
    out << "summary\tno_nation_samples\t" << stats.no_nation_samples << '\n';
    out << "summary\tunknown_samples\t" << stats.unknown_samples << '\n';
    for (const auto& [nation, n] : stats.per_nation)
        out << "nation\t" << nation << '\t' << n << '\n';
    for (const auto& [combo, n] : stats.multi_nation)
        out << "multi_nation\t" << combo << '\t' << n << '\n';
    for (const auto& [group, n] : stats.per_group)
        out << "group\t" << group << '\t' << n << '\n';
    for (const auto& [detections, n] : stats.detections_histogram)
        out << "detections\t" << detections << '\t' << n << '\n';
    for (const auto& [group, hist] : stats.group_histograms)
        for (const auto& [detections, n] : hist)
            out << "group_detections\t" << group << '\t' << detections << '\t'
                << n << '\n';
    write_file(path, out.str());
}

} // namespace aptlabel
