#include "aptlabel/verify.hpp"

#include "aptlabel/digest.hpp"
#include "aptlabel/errors.hpp"
#include "aptlabel/util.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <thread>

namespace aptlabel {

namespace {

// The executable type tags admitted into the dataset.
const char* kExecutableTypes[] = {"elf", "win32_exe", "win16_exe",
                                  "windows_installer", "win_dll"};

int parse_int(const std::string& s, const char* what) {
    try {
        size_t used = 0;
        const int v = std::stoi(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(std::string("bad integer for ") + what + ": '" + s + "'");
    }
}

void check_record(const VerificationRecord& r, const std::string& where) {
    const bool triple_ok = is_wellformed_digest(r.md5) && r.md5.size() == 32 &&
                           is_wellformed_digest(r.sha1) && r.sha1.size() == 40 &&
                           is_wellformed_digest(r.sha256) && r.sha256.size() == 64;
    if (!triple_ok)
        throw ParseError(where + ": malformed digest triple");
    if (r.query_hash != r.md5 && r.query_hash != r.sha1 && r.query_hash != r.sha256)
        throw ParseError(where + ": query_hash matches none of md5/sha1/sha256");
    if (r.detections < 0 || r.engines_total < r.detections)
        throw ParseError(where + ": detections exceed engines_total");
}

std::string serialize_record(const VerificationRecord& r) {
    return r.md5 + '\t' + r.sha1 + '\t' + r.sha256 + '\t' + r.file_type + '\t' +
           std::to_string(r.detections) + '\t' + std::to_string(r.engines_total);
}

} // namespace

bool is_executable(const VerificationRecord& record) {
    for (const char* t : kExecutableTypes)
        if (record.file_type == t)
            return true;
    return false;
}

int64_t SystemClock::now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

void SystemClock::sleep_ms(int64_t ms) {
    std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

RateLimiter::RateLimiter(int per_minute, Clock& clock)
    : per_minute_(per_minute), clock_(clock) {
    if (per_minute_ < 1)
        per_minute_ = 1;
}

void RateLimiter::acquire() {
    constexpr int64_t kWindowMs = 60'000;
    int64_t now = clock_.now_ms();
    while (!window_.empty() && window_.front() <= now - kWindowMs)
        window_.pop_front();
    if (static_cast<int>(window_.size()) >= per_minute_) {
        const int64_t wake = window_.front() + kWindowMs;
        if (wake > now) {
            clock_.sleep_ms(wake - now);
            now = clock_.now_ms();
        }
        while (!window_.empty() && window_.front() <= now - kWindowMs)
            window_.pop_front();
    }
    window_.push_back(now);
}

FixtureBackend::FixtureBackend(const std::filesystem::path& records_file) {
    records_ = load_fixture_records(records_file);
    for (size_t i = 0; i < records_.size(); ++i) {
        index_[records_[i].md5] = i;
        index_[records_[i].sha1] = i;
        index_[records_[i].sha256] = i;
    }
}

std::optional<VerificationRecord> FixtureBackend::query(const std::string& hash) {
    ++calls_;
    const auto it = index_.find(hash);
    if (it == index_.end())
        return std::nullopt;
    VerificationRecord rec = records_[it->second];
    rec.query_hash = hash; // answer is keyed by whichever digest was asked
    return rec;
}

std::vector<VerificationRecord> load_fixture_records(const std::filesystem::path& path) {
    std::vector<VerificationRecord> records;
    int lineno = 0;
    for (const std::string& line : split_lines(read_file(path))) {
        ++lineno;
        if (line.empty() || line[0] == '#')
            continue;
        const std::vector<std::string> f = split_tsv(line);
        const std::string where = path.string() + ":" + std::to_string(lineno);
        if (f.size() != 7)
            throw ParseError(where + ": expected 7 fields, got " +
                             std::to_string(f.size()));
        VerificationRecord r;
        r.query_hash = f[0];
        r.md5 = f[1];
        r.sha1 = f[2];
        r.sha256 = f[3];
        r.file_type = f[4];
        r.detections = parse_int(f[5], "detections");
        r.engines_total = parse_int(f[6], "engines_total");
        check_record(r, where);
        records.push_back(std::move(r));
    }
    return records;
}

// ---------------------------------------------------------------------------
// Cache
//
// Line format (tab-separated), append-only:
//   <hash> HIT <md5> <sha1> <sha256> <file_type> <detections> <engines_total>
//   <hash> MISS
// Appends are flushed per record so a crash costs at most the line being
// written; strict load treats that torn tail (or any malformed line) as
// corruption so a resume cannot silently run on bad data.
// ---------------------------------------------------------------------------

CacheStore::CacheStore(const std::filesystem::path& path) : path_(path) {
    if (!std::filesystem::exists(path_))
        return;
    const std::string content = read_file(path_);
    if (!content.empty() && content.back() != '\n')
        throw CacheCorruptError("cache truncated mid-record: " + path_.string() +
                                " (run cache compact)");
    int lineno = 0;
    for (const std::string& line : split_lines(content)) {
        ++lineno;
        const std::string where = path_.string() + ":" + std::to_string(lineno);
        const std::vector<std::string> f = split_tsv(line);
        if (f.size() == 2 && f[1] == "MISS") {
            slots_[f[0]] = Slot{std::nullopt};
            continue;
        }
        if (f.size() == 8 && f[1] == "HIT") {
            VerificationRecord r;
            r.query_hash = f[0];
            r.md5 = f[2];
            r.sha1 = f[3];
            r.sha256 = f[4];
            r.file_type = f[5];
            try {
                r.detections = parse_int(f[6], "detections");
                r.engines_total = parse_int(f[7], "engines_total");
                check_record(r, where);
            } catch (const ParseError& e) {
                throw CacheCorruptError(std::string(e.what()) + " (run cache compact)");
            }
            slots_[f[0]] = Slot{std::move(r)};
            continue;
        }
        throw CacheCorruptError(where + ": malformed cache line (run cache compact)");
    }
}

const CacheStore::Slot* CacheStore::find(const std::string& hash) const {
    const auto it = slots_.find(hash);
    return it == slots_.end() ? nullptr : &it->second;
}

void CacheStore::append(const std::string& hash,
                        const std::optional<VerificationRecord>& rec) {
    slots_[hash] = Slot{rec};
    if (path_.has_parent_path())
        std::filesystem::create_directories(path_.parent_path());
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    if (!out)
        throw UnreadableFileError("cannot append to cache: " + path_.string());
    if (rec)
        out << hash << "\tHIT\t" << serialize_record(*rec) << '\n';
    else
        out << hash << "\tMISS\n";
    out.flush();
    if (!out)
        throw UnreadableFileError("cache write failed: " + path_.string());
}

void CacheStore::compact(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path))
        return;
    const std::string content = read_file(path);
    // Lenient read: keep the last well-formed answer per hash, drop damage.
    std::map<std::string, std::string> latest;
    for (const std::string& line : split_lines(content)) {
        const std::vector<std::string> f = split_tsv(line);
        const bool ok = (f.size() == 2 && f[1] == "MISS") ||
                        (f.size() == 8 && f[1] == "HIT");
        if (!ok || f[0].empty())
            continue;
        if (f.size() == 8) {
            VerificationRecord r;
            r.query_hash = f[0];
            r.md5 = f[2];
            r.sha1 = f[3];
            r.sha256 = f[4];
            r.file_type = f[5];
            try {
                r.detections = parse_int(f[6], "detections");
                r.engines_total = parse_int(f[7], "engines_total");
                check_record(r, "compact");
            } catch (const ParseError&) {
                continue;
            }
        }
        latest[f[0]] = line;
    }
    std::string out;
    for (const auto& [hash, line] : latest) {
        out += line;
        out += '\n';
    }
    write_file(path, out);
}

VerificationClient::VerificationClient(const ClientConfig& cfg,
                                       VerificationBackend& backend, Clock& clock)
    : cfg_(cfg), backend_(backend), clock_(clock),
      limiter_(cfg.rate_limit_per_minute, clock), cache_(cfg.cache_path) {}

std::optional<VerificationRecord> VerificationClient::verify(const std::string& hash) {
    const size_t len = hash.size();
    const bool submittable = (len == 32 || len == 40 || len == 64);
    if (!submittable || !is_wellformed_digest(hash))
        throw InvalidHashError("not a lowercase md5/sha1/sha256 hex digest: " + hash);

    std::lock_guard<std::mutex> lock(mu_);
    if (const CacheStore::Slot* slot = cache_.find(hash))
        return slot->record; // cached answers bypass the rate budget entirely

    int attempt = 0;
    while (true) {
        limiter_.acquire();
        ++backend_calls_;
        try {
            std::optional<VerificationRecord> rec = backend_.query(hash);
            cache_.append(hash, rec);
            return rec;
        } catch (const BackendUnavailableError&) {
            ++attempt;
            if (attempt >= cfg_.retry_attempts)
                throw;
            const size_t slot = std::min<size_t>(static_cast<size_t>(attempt) - 1,
                                                 cfg_.backoff_ms.empty()
                                                     ? 0
                                                     : cfg_.backoff_ms.size() - 1);
            if (!cfg_.backoff_ms.empty())
                clock_.sleep_ms(cfg_.backoff_ms[slot]);
        }
    }
}

} // namespace aptlabel
