#pragma once

#include <cstdint>
#include <deque>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace aptlabel {

// One answer from the verification service about a known sample.
struct VerificationRecord {
    std::string query_hash; // equals md5, sha1 or sha256
    std::string md5;
    std::string sha1;
    std::string sha256;
    std::string file_type;  // fixed tag, e.g. "elf", "win32_exe", "pdf_document"
    int detections = 0;
    int engines_total = 0;
    std::optional<std::string> first_seen;
};

// File type tags counted as executable content. Detection counts are
// deliberately not consulted: a zero-detection executable is still a sample.
bool is_executable(const VerificationRecord& record);

// Injectable time source so rate limiting and backoff are testable without
// wall-clock waits.
class Clock {
public:
    virtual ~Clock() = default;
    virtual int64_t now_ms() = 0;
    virtual void sleep_ms(int64_t ms) = 0;
};

class SystemClock : public Clock {
public:
    int64_t now_ms() override;
    void sleep_ms(int64_t ms) override;
};

// Starts at zero; sleeping advances time instantly.
class SimulatedClock : public Clock {
public:
    int64_t now_ms() override { return now_; }
    void sleep_ms(int64_t ms) override { now_ += ms; }

private:
    int64_t now_ = 0;
};

// Sliding-window limiter: at most `per_minute` acquisitions in any 60s
// window; excess callers sleep on the injected clock until a slot frees.
class RateLimiter {
public:
    RateLimiter(int per_minute, Clock& clock);
    void acquire();

private:
    int per_minute_;
    Clock& clock_;
    std::deque<int64_t> window_;
};

// Source of verification answers. query returns nullopt for hashes the
// service does not know; transport problems raise BackendUnavailableError.
class VerificationBackend {
public:
    virtual ~VerificationBackend() = default;
    virtual std::optional<VerificationRecord> query(const std::string& hash) = 0;
};

// Deterministic offline backend: records come from a TSV file, one per line:
//   query_hash md5 sha1 sha256 file_type detections engines_total
// A record is reachable through any of its three digests, the way the real
// service resolves lookups.
class FixtureBackend : public VerificationBackend {
public:
    explicit FixtureBackend(const std::filesystem::path& records_file);
    std::optional<VerificationRecord> query(const std::string& hash) override;
    size_t calls() const { return calls_; }

private:
    std::unordered_map<std::string, size_t> index_; // digest -> record slot
    std::vector<VerificationRecord> records_;
    size_t calls_ = 0;
};

// Live HTTPS adapter for the real service; reads the API key from the
// VT_API_KEY environment variable. Response mapping is adapter-private.
std::unique_ptr<VerificationBackend> make_live_backend();

// Append-only persistent cache of verification answers, one record per
// line; hits and known-miss markers both count. A truncated or malformed
// file raises CacheCorruptError on strict load; compact() rewrites the file
// keeping the last answer per hash and dropping damage.
class CacheStore {
public:
    // Loads existing content (strict); the file may be absent.
    explicit CacheStore(const std::filesystem::path& path);

    struct Slot {
        std::optional<VerificationRecord> record; // nullopt = known miss
    };

    const Slot* find(const std::string& hash) const;
    void append(const std::string& hash, const std::optional<VerificationRecord>& rec);
    size_t size() const { return slots_.size(); }

    static void compact(const std::filesystem::path& path);

private:
    std::filesystem::path path_;
    std::map<std::string, Slot> slots_;
};

struct ClientConfig {
    std::filesystem::path cache_path;
    int rate_limit_per_minute = 4;
    int retry_attempts = 3;                       // total tries per request
    std::vector<int64_t> backoff_ms = {1000, 5000}; // waits between tries
};

// Verification front door: validates hashes, serves answers from the cache,
// rate-limits and retries backend calls, and records every fresh answer.
// Thread-safe; concurrent verifies are dispatched one at a time.
class VerificationClient {
public:
    VerificationClient(const ClientConfig& cfg, VerificationBackend& backend,
                       Clock& clock);

    // nullopt = the service does not know the hash (NotKnown). Throws
    // InvalidHashError for malformed input and BackendUnavailableError when
    // retries are exhausted.
    std::optional<VerificationRecord> verify(const std::string& hash);

    size_t backend_calls() const { return backend_calls_; }

private:
    ClientConfig cfg_;
    VerificationBackend& backend_;
    Clock& clock_;
    RateLimiter limiter_;
    CacheStore cache_;
    std::mutex mu_;
    size_t backend_calls_ = 0;
};

// Loads fixture-format records into a query-hash-keyed map (used by tests
// and golden tooling).
std::vector<VerificationRecord> load_fixture_records(const std::filesystem::path& path);

} // namespace aptlabel
