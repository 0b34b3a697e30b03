#include "aptlabel/merge.hpp"

#include "aptlabel/errors.hpp"
#include "aptlabel/util.hpp"

#include <algorithm>

namespace aptlabel {

namespace {

void sort_unique(std::vector<std::string>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

// Folds src into dst: the union tiers (identical pair / same nations /
// different nations) all reduce to unioning every field.
void absorb(LabeledSample& dst, LabeledSample&& src) {
    for (auto& [algo, hex] : src.hashes)
        dst.hashes.emplace(algo, std::move(hex)); // existing entry wins
    dst.labels.insert(dst.labels.end(), src.labels.begin(), src.labels.end());
    dst.nations.insert(dst.nations.end(), src.nations.begin(), src.nations.end());
    sort_unique(dst.labels);
    sort_unique(dst.nations);
    dst.stages.insert(src.stages.begin(), src.stages.end());
    dst.provenance.insert(src.provenance.begin(), src.provenance.end());
    dst.notes.insert(src.notes.begin(), src.notes.end());
}

} // namespace

std::optional<std::string> own_hash_key(const LabeledSample& s) {
    if (s.hashes.empty())
        return std::nullopt;
    // Pre-verification samples carry exactly one hash; with several, the
    // first in algo order keys the group.
    const auto& [algo, hex] = *s.hashes.begin();
    return std::string(algo_name(algo)) + ":" + hex;
}

std::optional<std::string> sha256_key(const LabeledSample& s) {
    const auto it = s.hashes.find(HashAlgo::sha256);
    if (it == s.hashes.end())
        return std::nullopt;
    return "sha256:" + it->second;
}

std::vector<LabeledSample> merge_samples(std::vector<LabeledSample> samples,
                                         const SampleKeyFn& key) {
    std::map<std::string, LabeledSample> by_key;
    for (LabeledSample& s : samples) {
        const std::optional<std::string> k = key(s);
        if (!k)
            throw MissingKeyHashError("sample lacks the merge key hash");
        sort_unique(s.labels);
        sort_unique(s.nations);
        const auto it = by_key.find(*k);
        if (it == by_key.end())
            by_key.emplace(*k, std::move(s));
        else
            absorb(it->second, std::move(s));
    }
    std::vector<LabeledSample> out;
    out.reserve(by_key.size());
    for (auto& [k, s] : by_key)
        out.push_back(std::move(s));
    return out;
}

CanonicalizeResult canonicalize_after_verification(
    std::vector<LabeledSample> samples,
    const std::map<std::string, VerificationRecord>& records) {
    CanonicalizeResult result;
    for (LabeledSample& s : samples) {
        const VerificationRecord* rec = nullptr;
        for (const auto& [algo, hex] : s.hashes) {
            const auto it = records.find(hex);
            if (it != records.end()) {
                rec = &it->second;
                break;
            }
        }
        if (!rec) {
            result.unverified.push_back(std::move(s));
            continue;
        }
        s.hashes[HashAlgo::md5] = rec->md5;
        s.hashes[HashAlgo::sha1] = rec->sha1;
        s.hashes[HashAlgo::sha256] = rec->sha256;
        result.verified.push_back(std::move(s));
    }
    result.verified = merge_samples(std::move(result.verified), sha256_key);
    return result;
}

std::string joined(const std::vector<std::string>& values) {
    return join(values, "/");
}

} // namespace aptlabel
