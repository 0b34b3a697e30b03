// Adapter for the public file-reputation v3 API. Kept separate from the rest
// of the client: everything service-specific (URL shape, auth header, JSON
// layout, type-string mapping) lives here and nowhere else.

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "aptlabel/errors.hpp"
#include "aptlabel/verify.hpp"

#include <cstdlib>

namespace aptlabel {

namespace {

// Collapses the service's free-form type strings onto our fixed tags.
std::string map_file_type(const std::string& type_tag,
                          const std::string& type_description) {
    if (type_tag == "elf")
        return "elf";
    if (type_tag == "pedll")
        return "win_dll";
    if (type_tag == "peexe") {
        if (type_description.find("16 bit") != std::string::npos)
            return "win16_exe";
        return "win32_exe";
    }
    if (type_tag == "msi" || type_description.find("Installer") != std::string::npos)
        return "windows_installer";
    if (type_tag == "pdf")
        return "pdf_document";
    return type_tag.empty() ? "unknown" : type_tag;
}

class LiveBackend : public VerificationBackend {
public:
    LiveBackend() {
        const char* key = std::getenv("VT_API_KEY");
        if (!key || !*key)
            throw ConfigError("live backend selected but VT_API_KEY is not set");
        api_key_ = key;
    }

    std::optional<VerificationRecord> query(const std::string& hash) override {
        httplib::SSLClient client("www.virustotal.com");
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        httplib::Headers headers = {{"x-apikey", api_key_}};
        const auto res = client.Get(("/api/v3/files/" + hash).c_str(), headers);
        if (!res)
            throw BackendUnavailableError("verification service unreachable");
        if (res->status == 404)
            return std::nullopt; // NotKnown
        if (res->status == 429 || res->status >= 500)
            throw BackendUnavailableError("verification service returned " +
                                          std::to_string(res->status));
        if (res->status != 200)
            throw BackendUnavailableError("unexpected verification status " +
                                          std::to_string(res->status));
        return parse(res->body, hash);
    }

private:
    static VerificationRecord parse(const std::string& body, const std::string& hash) {
        const auto doc = nlohmann::json::parse(body, nullptr, false);
        if (doc.is_discarded() || !doc.contains("data"))
            throw BackendUnavailableError("unparseable verification response");
        const auto& attr = doc["data"]["attributes"];
        VerificationRecord rec;
        rec.query_hash = hash;
        rec.md5 = attr.value("md5", "");
        rec.sha1 = attr.value("sha1", "");
        rec.sha256 = attr.value("sha256", "");
        rec.file_type = map_file_type(attr.value("type_tag", ""),
                                      attr.value("type_description", ""));
        if (attr.contains("last_analysis_stats")) {
            const auto& stats = attr["last_analysis_stats"];
            const int malicious = stats.value("malicious", 0);
            int total = 0;
            for (const auto& [k, v] : stats.items())
                if (v.is_number_integer())
                    total += v.get<int>();
            rec.detections = malicious;
            rec.engines_total = total;
        }
        if (attr.contains("first_submission_date"))
            rec.first_seen =
                std::to_string(attr["first_submission_date"].get<int64_t>());
        return rec;
    }

    std::string api_key_;
};

} // namespace

std::unique_ptr<VerificationBackend> make_live_backend() {
    return std::make_unique<LiveBackend>();
}

} // namespace aptlabel
