// Command-line front end.
//
//   aptlabel registry build --source a.tsv --source b.tsv --output reg.tsv
//   aptlabel run     --corpus DIR --source ... --stopwords F [--noise F]
//                    --backend fixture --fixture-records F --cache F --out DIR
//   aptlabel resume  (same flags as run; requires the cache to exist)
//   aptlabel stats   --labeled F --unknown F [--output F]
//   aptlabel cache compact --cache F
//
// Exit codes: 0 success, 1 fatal configuration error, 2 partial results
// (documents skipped), 3 verification backend unavailable.

#include <CLI11.hpp>

#include "aptlabel/alias_registry.hpp"
#include "aptlabel/errors.hpp"
#include "aptlabel/pipeline.hpp"
#include "aptlabel/report.hpp"
#include "aptlabel/verify.hpp"

#include <fstream>
#include <iostream>

namespace {

using namespace aptlabel;

int cmd_registry_build(const std::vector<std::string>& sources,
                       const std::string& output) {
    std::vector<RawSourceEntry> entries;
    for (const std::string& path : sources)
        for (RawSourceEntry& e : load_alias_sources(path))
            entries.push_back(std::move(e));
    const AliasRegistry registry = AliasRegistry::build(entries);
    if (output.empty()) {
        registry.dump(std::cout);
    } else {
        std::ofstream out(output, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("cannot write registry to " + output);
        registry.dump(out);
    }
    std::cerr << "registry: " << registry.name_count() << " canonical names, "
              << "longest " << registry.max_token_len() << " tokens\n";
    return 0;
}

int cmd_stats(const std::string& labeled, const std::string& unknown,
              const std::string& output, int histogram_min) {
    const StatsReport stats = compute_stats(labeled, unknown, histogram_min);
    const std::filesystem::path out = output.empty()
        ? std::filesystem::path("/dev/stdout")
        : std::filesystem::path(output);
    write_stats(out, stats);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"OSINT malware hash extraction and APT labeling pipeline"};
    app.require_subcommand(1);

    // --- registry build ---
    auto* registry_cmd = app.add_subcommand("registry", "alias registry tools");
    registry_cmd->require_subcommand(1);
    auto* reg_build = registry_cmd->add_subcommand("build",
                                                   "build and dump the registry");
    std::vector<std::string> reg_sources;
    std::string reg_output;
    reg_build->add_option("--source", reg_sources, "alias source TSV (repeatable)")
        ->required();
    reg_build->add_option("--output", reg_output, "output path (default stdout)");

    // --- run / resume (shared options) ---
    PipelineConfig cfg;
    std::string corpus, stopwords, noise, out_dir, cache, fixture;
    std::vector<std::string> run_sources;
    auto add_run_options = [&](CLI::App* cmd) {
        cmd->add_option("--corpus", corpus, "corpus root directory")->required();
        cmd->add_option("--source", run_sources, "alias source TSV (repeatable)")
            ->required();
        cmd->add_option("--stopwords", stopwords, "stop word list")->required();
        cmd->add_option("--noise", noise, "extra noise word list");
        cmd->add_option("--out", out_dir, "output directory")->required();
        cmd->add_option("--backend", cfg.backend, "fixture | live")
            ->check(CLI::IsMember({"fixture", "live"}));
        cmd->add_option("--fixture-records", fixture,
                        "records file for the fixture backend");
        cmd->add_option("--cache", cache, "verification cache file")->required();
        cmd->add_option("--rate-limit", cfg.client.rate_limit_per_minute,
                        "verification requests per minute");
        cmd->add_option("--keywords", cfg.keyword_k,
                        "ranked keywords tried during keyword matching");
        cmd->add_option("--parallelism", cfg.parallelism,
                        "ingestion/resolution worker threads");
    };
    auto* run_cmd = app.add_subcommand("run", "run the full pipeline");
    add_run_options(run_cmd);
    auto* resume_cmd =
        app.add_subcommand("resume", "re-run against an existing cache");
    add_run_options(resume_cmd);

    // --- stats ---
    auto* stats_cmd = app.add_subcommand("stats", "recompute stats from outputs");
    std::string stats_labeled, stats_unknown, stats_output;
    int histogram_min = 50;
    stats_cmd->add_option("--labeled", stats_labeled, "labeled.tsv path")->required();
    stats_cmd->add_option("--unknown", stats_unknown, "unknown.tsv path")->required();
    stats_cmd->add_option("--output", stats_output, "output path (default stdout)");
    stats_cmd->add_option("--histogram-min", histogram_min,
                          "per-group histogram threshold");

    // --- cache compact ---
    auto* cache_cmd = app.add_subcommand("cache", "verification cache tools");
    cache_cmd->require_subcommand(1);
    auto* compact_cmd = cache_cmd->add_subcommand(
        "compact", "rewrite the cache keeping the last answer per hash");
    std::string compact_path;
    compact_cmd->add_option("--cache", compact_path, "cache file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (reg_build->parsed())
            return cmd_registry_build(reg_sources, reg_output);
        if (stats_cmd->parsed())
            return cmd_stats(stats_labeled, stats_unknown, stats_output,
                             histogram_min);
        if (compact_cmd->parsed()) {
            CacheStore::compact(compact_path);
            return 0;
        }
        // run / resume
        cfg.corpus_root = corpus;
        for (const std::string& s : run_sources)
            cfg.alias_sources.emplace_back(s);
        cfg.stopword_file = stopwords;
        if (!noise.empty())
            cfg.noise_file = noise;
        cfg.output_dir = out_dir;
        cfg.client.cache_path = cache;
        if (!fixture.empty())
            cfg.fixture_records = fixture;
        const RunResult result =
            resume_cmd->parsed() ? resume(cfg) : aptlabel::run(cfg);
        std::cerr << "documents=" << result.manifest.documents
                  << " skipped=" << result.manifest.skipped_documents
                  << " labeled=" << result.manifest.executable
                  << " unknown=" << result.manifest.unknown
                  << " unverified=" << result.manifest.unverified << '\n';
        return result.exit_code;
    } catch (const BackendUnavailableError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
