#include "aptlabel/pipeline.hpp"

#include "aptlabel/alias_registry.hpp"
#include "aptlabel/digest.hpp"
#include "aptlabel/errors.hpp"
#include "aptlabel/extraction.hpp"
#include "aptlabel/merge.hpp"
#include "aptlabel/report.hpp"
#include "aptlabel/resolver.hpp"
#include "aptlabel/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <iostream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace aptlabel {

namespace {

int64_t steady_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

// Runs fn(0..n-1) on `workers` threads. Result slots must be pre-sized by
// the caller so output order is index order, not completion order.
void parallel_for(size_t n, int workers, const std::function<void(size_t)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::mutex err_mu;
    std::exception_ptr first_error;
    auto worker = [&] {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= n)
                return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!first_error)
                    first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    const int count = std::min<int>(workers, static_cast<int>(n));
    pool.reserve(static_cast<size_t>(count));
    for (int t = 0; t < count; ++t)
        pool.emplace_back(worker);
    for (std::thread& t : pool)
        t.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

// Everything computed per document before observations are collected.
struct DocWork {
    bool skipped = false;
    std::string skip_reason;
    std::vector<TextUnit> units;
    std::vector<std::vector<HashCandidate>> unit_hashes;
    std::vector<TokenStream> unit_tokens; // empty stream for hashless units
    TokenStream fulltext;
    std::vector<LabelDecision> decisions; // valid where unit has hashes
};

// An unlabeled hash with the keyword bundles that accumulated around it.
struct UnknownEntry {
    std::string hex;
    HashAlgo algo = HashAlgo::md5;
    std::set<std::string> text_keywords;
    std::set<std::string> metadata_keywords;
};

std::string obs_key(HashAlgo algo, const std::string& hex) {
    return std::string(algo_name(algo)) + ":" + hex;
}

std::string stage_join(const std::set<Stage>& stages) {
    std::string out;
    for (Stage s : stages) { // set is ordered by pipeline stage order
        if (!out.empty())
            out += '/';
        out += stage_name(s);
    }
    return out;
}

std::string bundle_note(const KeywordBundle& b, const std::string& doc_id,
                        int unit_index) {
    return "unlabeled occurrence at " + doc_id + "#u" + std::to_string(unit_index) +
           " keywords: " + join(b.text_keywords, "/");
}

std::string config_digest(const PipelineConfig& cfg) {
    std::ostringstream s;
    s << "corpus_root=" << cfg.corpus_root.generic_string() << '\n';
    for (const auto& p : cfg.alias_sources)
        s << "alias_source=" << p.generic_string() << '\n';
    s << "stopword_file=" << cfg.stopword_file.generic_string() << '\n'
      << "noise_file=" << cfg.noise_file.generic_string() << '\n'
      << "keyword_k=" << cfg.keyword_k << '\n'
      << "backend=" << cfg.backend << '\n'
      << "fixture_records=" << cfg.fixture_records.generic_string() << '\n'
      << "rate_limit=" << cfg.client.rate_limit_per_minute << '\n';
    return sha256_hex(s.str());
}

} // namespace

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["config_digest"] = config_digest;
    j["counts"] = {
        {"documents", documents},
        {"skipped_documents", skipped_documents},
        {"units", units},
        {"hash_candidates", hash_candidates},
        {"labeled_pre_merge", labeled_pre_merge},
        {"merged", merged},
        {"verified", verified},
        {"executable", executable},
        {"unknown", unknown},
        {"unverified", unverified},
    };
    j["timings_ms"] = timings_ms;
    return j.dump(2) + "\n";
}

RunResult run(const PipelineConfig& cfg, const RunEnv& env) {
    if (cfg.output_dir.empty())
        throw ConfigError("output directory not set");
    if (cfg.keyword_k < 1)
        throw ConfigError("keyword_k must be at least 1");
    std::ostream& log = env.log ? *env.log : std::cerr;

    RunManifest manifest;
    manifest.config_digest = config_digest(cfg);
    int64_t t0 = steady_ms();

    // --- registry ---------------------------------------------------------
    std::vector<RawSourceEntry> source_entries;
    for (const auto& path : cfg.alias_sources)
        for (RawSourceEntry& e : load_alias_sources(path))
            source_entries.push_back(std::move(e));
    const AliasRegistry registry = AliasRegistry::build(source_entries);

    StopwordSet stopwords = load_wordlist(cfg.stopword_file);
    if (!cfg.noise_file.empty()) {
        const StopwordSet noise = load_wordlist(cfg.noise_file);
        stopwords.insert(noise.begin(), noise.end());
    }
    manifest.timings_ms["registry"] = steady_ms() - t0;

    // --- scan --------------------------------------------------------------
    t0 = steady_ms();
    std::vector<std::string> unreadable;
    std::vector<LoadedDocument> docs = scan_corpus(cfg.corpus_root, &unreadable);
    for (const std::string& path : unreadable)
        log << "skip (unreadable): " << path << '\n';
    manifest.skipped_documents = static_cast<int>(unreadable.size());
    manifest.timings_ms["scan"] = steady_ms() - t0;

    // --- extraction + tokenization (parallel over documents) ---------------
    t0 = steady_ms();
    SidecarPdfBackend default_pdf;
    PdfTextBackend& pdf = env.pdf ? *env.pdf : default_pdf;
    std::vector<DocWork> work(docs.size());
    std::mutex log_mu;
    parallel_for(docs.size(), cfg.parallelism, [&](size_t i) {
        DocWork& w = work[i];
        LoadedDocument& ld = docs[i];
        try {
            w.units = extract_units(ld.doc, ld.bytes, pdf, ld.abs_path,
                                    &ld.embedded_values);
        } catch (const ExtractionFailedError& e) {
            w.skipped = true;
            w.skip_reason = e.what();
            std::lock_guard<std::mutex> lock(log_mu);
            log << "skip (extraction failed): " << ld.doc.path << ": "
                << e.what() << '\n';
            return;
        }
        w.unit_hashes.resize(w.units.size());
        w.unit_tokens.resize(w.units.size());
        for (size_t u = 0; u < w.units.size(); ++u) {
            w.unit_hashes[u] = find_hashes(w.units[u]);
            TokenStream tokens = normalize_text(w.units[u].text, stopwords);
            w.fulltext.tokens.insert(w.fulltext.tokens.end(),
                                     tokens.tokens.begin(), tokens.tokens.end());
            w.unit_tokens[u] = std::move(tokens);
        }
    });
    manifest.timings_ms["extract"] = steady_ms() - t0;

    // --- metadata (needs every document's embedded values) -----------------
    t0 = steady_ms();
    populate_metadata(docs);

    // --- resolution (parallel over documents) -------------------------------
    parallel_for(docs.size(), cfg.parallelism, [&](size_t i) {
        DocWork& w = work[i];
        if (w.skipped)
            return;
        w.decisions.resize(w.units.size());
        for (size_t u = 0; u < w.units.size(); ++u) {
            if (w.unit_hashes[u].empty())
                continue; // no hash, nothing to label
            w.decisions[u] = resolve_unit(w.unit_tokens[u], docs[i].doc.metadata,
                                          w.fulltext, registry, cfg.keyword_k);
        }
    });
    manifest.timings_ms["resolve"] = steady_ms() - t0;

    // --- observations -> samples --------------------------------------------
    t0 = steady_ms();
    std::vector<LabeledSample> labeled_obs;
    struct UnlabeledObs {
        HashCandidate cand;
        const LabelDecision* decision;
    };
    std::vector<UnlabeledObs> unlabeled_obs;
    for (size_t i = 0; i < docs.size(); ++i) {
        const DocWork& w = work[i];
        if (w.skipped) {
            ++manifest.skipped_documents;
            continue;
        }
        ++manifest.documents;
        manifest.units += static_cast<int>(w.units.size());
        for (size_t u = 0; u < w.units.size(); ++u) {
            manifest.hash_candidates += static_cast<int>(w.unit_hashes[u].size());
            if (w.unit_hashes[u].empty())
                continue;
            const LabelDecision& d = w.decisions[u];
            for (const HashCandidate& cand : w.unit_hashes[u]) {
                if (d.outcome == LabelDecision::Outcome::unlabeled) {
                    unlabeled_obs.push_back({cand, &d});
                    continue;
                }
                LabeledSample s;
                s.hashes[cand.algo] = cand.hex;
                s.labels = {d.label};
                s.nations = d.nations;
                s.stages = {d.stage};
                s.provenance = {{cand.doc_id, cand.unit_index}};
                labeled_obs.push_back(std::move(s));
            }
        }
    }
    manifest.labeled_pre_merge = static_cast<int>(labeled_obs.size());

    std::vector<LabeledSample> merged = merge_samples(std::move(labeled_obs),
                                                      own_hash_key);
    manifest.merged = static_cast<int>(merged.size());
    std::map<std::string, LabeledSample*> merged_by_key;
    for (LabeledSample& s : merged)
        merged_by_key[*own_hash_key(s)] = &s;

    // A hash with both labeled and unlabeled occurrences keeps the label;
    // the bundle is kept as a provenance note. Purely unlabeled hashes pool
    // their bundles per (algo, hex).
    std::map<std::string, UnknownEntry> unknowns;
    for (const UnlabeledObs& obs : unlabeled_obs) {
        const std::string key = obs_key(obs.cand.algo, obs.cand.hex);
        const auto it = merged_by_key.find(key);
        if (it != merged_by_key.end()) {
            it->second->provenance.insert({obs.cand.doc_id, obs.cand.unit_index});
            it->second->notes.insert(bundle_note(obs.decision->bundle,
                                                 obs.cand.doc_id,
                                                 obs.cand.unit_index));
            continue;
        }
        UnknownEntry& entry = unknowns[key];
        entry.hex = obs.cand.hex;
        entry.algo = obs.cand.algo;
        entry.text_keywords.insert(obs.decision->bundle.text_keywords.begin(),
                                   obs.decision->bundle.text_keywords.end());
        entry.metadata_keywords.insert(obs.decision->bundle.metadata_keywords.begin(),
                                       obs.decision->bundle.metadata_keywords.end());
    }
    manifest.timings_ms["collect"] = steady_ms() - t0;

    // --- verification --------------------------------------------------------
    t0 = steady_ms();
    std::unique_ptr<VerificationBackend> owned_backend;
    VerificationBackend* backend = env.backend;
    if (!backend) {
        if (cfg.backend == "fixture") {
            if (cfg.fixture_records.empty())
                throw ConfigError("fixture backend needs a records file");
            owned_backend = std::make_unique<FixtureBackend>(cfg.fixture_records);
        } else if (cfg.backend == "live") {
            owned_backend = make_live_backend();
        } else {
            throw ConfigError("unknown backend: " + cfg.backend);
        }
        backend = owned_backend.get();
    }
    SystemClock system_clock;
    Clock& clock = env.clock ? *env.clock : static_cast<Clock&>(system_clock);
    VerificationClient client(cfg.client, *backend, clock);

    // sha512 is never submitted; everything else is queried in sorted order
    // so cache files and retries are reproducible run over run.
    std::set<std::string> to_verify;
    for (const LabeledSample& s : merged)
        for (const auto& [algo, hex] : s.hashes)
            if (algo != HashAlgo::sha512)
                to_verify.insert(hex);
    for (const auto& [key, entry] : unknowns)
        if (entry.algo != HashAlgo::sha512)
            to_verify.insert(entry.hex);

    std::map<std::string, VerificationRecord> records;
    std::set<std::string> pending;
    for (const std::string& hex : to_verify) {
        try {
            if (std::optional<VerificationRecord> rec = client.verify(hex))
                records.emplace(hex, std::move(*rec));
        } catch (const BackendUnavailableError&) {
            pending.insert(hex);
            log << "verification pending (backend unavailable): " << hex << '\n';
        }
    }
    manifest.timings_ms["verify"] = steady_ms() - t0;

    // --- canonicalize + route -------------------------------------------------
    t0 = steady_ms();
    CanonicalizeResult canon = canonicalize_after_verification(std::move(merged),
                                                               records);
    manifest.verified = static_cast<int>(canon.verified.size());

    std::map<std::string, VerificationRecord> by_sha256;
    for (const auto& [hex, rec] : records)
        by_sha256.emplace(rec.sha256, rec);
    std::map<std::string, LabeledSample*> verified_by_sha256;
    for (LabeledSample& s : canon.verified)
        verified_by_sha256[s.hashes.at(HashAlgo::sha256)] = &s;

    // Unknown entries whose canonical sha256 landed on a labeled sample fold
    // into it; the rest surface in the unknown dataset under sha256 when
    // verified, raw hex otherwise.
    std::map<std::string, UnknownEntry> unknown_out;
    for (auto& [key, entry] : unknowns) {
        std::string out_hash = entry.hex;
        const auto rec_it = records.find(entry.hex);
        if (rec_it != records.end()) {
            out_hash = rec_it->second.sha256;
            const auto lab_it = verified_by_sha256.find(out_hash);
            if (lab_it != verified_by_sha256.end()) {
                lab_it->second->notes.insert("unlabeled keywords: " +
                                             join({entry.text_keywords.begin(),
                                                   entry.text_keywords.end()},
                                                  "/"));
                continue;
            }
        }
        UnknownEntry& out = unknown_out[out_hash];
        out.hex = out_hash;
        out.algo = rec_it != records.end() ? HashAlgo::sha256 : entry.algo;
        out.text_keywords.insert(entry.text_keywords.begin(),
                                 entry.text_keywords.end());
        out.metadata_keywords.insert(entry.metadata_keywords.begin(),
                                     entry.metadata_keywords.end());
    }

    std::vector<DatasetRecord> dataset;
    std::vector<UnverifiedRecord> unverified;
    for (const LabeledSample& s : canon.verified) {
        const std::string& sha = s.hashes.at(HashAlgo::sha256);
        const VerificationRecord& rec = by_sha256.at(sha);
        if (!is_executable(rec)) {
            unverified.push_back({sha, "sha256", joined(s.labels), joined(s.nations),
                                  rec.file_type, "non_executable"});
            continue;
        }
        DatasetRecord r;
        r.sha256 = sha;
        r.md5 = rec.md5;
        r.sha1 = rec.sha1;
        r.labels_joined = joined(s.labels);
        r.nations_joined = joined(s.nations);
        r.stage = stage_join(s.stages);
        r.detections = rec.detections;
        r.engines_total = rec.engines_total;
        r.file_type = rec.file_type;
        r.provenance_count = static_cast<int>(s.provenance.size());
        dataset.push_back(std::move(r));
    }
    for (const LabeledSample& s : canon.unverified) {
        const auto& [algo, hex] = *s.hashes.begin();
        std::string reason = "not_known";
        if (algo == HashAlgo::sha512)
            reason = "not_submitted";
        else if (pending.count(hex))
            reason = "backend_unavailable";
        unverified.push_back({hex, algo_name(algo), joined(s.labels),
                              joined(s.nations), "", std::move(reason)});
    }
    manifest.executable = static_cast<int>(dataset.size());
    manifest.unknown = static_cast<int>(unknown_out.size());
    manifest.unverified = static_cast<int>(unverified.size());

    std::sort(dataset.begin(), dataset.end(),
              [](const DatasetRecord& a, const DatasetRecord& b) {
                  return std::tie(a.sha256, a.labels_joined) <
                         std::tie(b.sha256, b.labels_joined);
              });
    std::sort(unverified.begin(), unverified.end(),
              [](const UnverifiedRecord& a, const UnverifiedRecord& b) {
                  return a.hash < b.hash;
              });
    std::vector<UnknownRecord> unknown_rows;
    for (const auto& [hash, entry] : unknown_out)
        unknown_rows.push_back(
            {hash,
             join({entry.text_keywords.begin(), entry.text_keywords.end()}, "/"),
             join({entry.metadata_keywords.begin(), entry.metadata_keywords.end()},
                  "/")});

    std::filesystem::create_directories(cfg.output_dir);
    const auto labeled_path = cfg.output_dir / "labeled.tsv";
    const auto unknown_path = cfg.output_dir / "unknown.tsv";
    write_labeled(labeled_path, dataset);
    write_unknown(unknown_path, unknown_rows);
    write_unverified(cfg.output_dir / "unverified.tsv", unverified);
    write_stats(cfg.output_dir / "stats.tsv",
                compute_stats(labeled_path, unknown_path));
    manifest.timings_ms["emit"] = steady_ms() - t0;
    write_file(cfg.output_dir / "manifest.json", manifest.to_json());

    RunResult result;
    result.manifest = manifest;
    if (!pending.empty())
        result.exit_code = 3;
    else if (manifest.skipped_documents > 0 || !unreadable.empty())
        result.exit_code = 2;
    return result;
}

RunResult resume(const PipelineConfig& cfg, const RunEnv& env) {
    if (!std::filesystem::exists(cfg.client.cache_path))
        throw ConfigError("resume requires an existing cache: " +
                          cfg.client.cache_path.string());
    // Strict cache validation up front; CacheCorruptError names the fix.
    CacheStore probe(cfg.client.cache_path);
    (void)probe;
    return run(cfg, env);
}

} // namespace aptlabel
