#pragma once

#include "aptlabel/digest.hpp"
#include "aptlabel/resolver.hpp"
#include "aptlabel/verify.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace aptlabel {

// A labeled hash observation, possibly the union of several. Labels and
// nations stay sorted and unique; provenance records every (doc_id,
// unit_index) that contributed; notes keep things like absorbed unlabeled
// keyword bundles.
struct LabeledSample {
    std::map<HashAlgo, std::string> hashes;
    std::vector<std::string> labels;
    std::vector<std::string> nations;
    std::set<Stage> stages;
    std::set<std::pair<std::string, int>> provenance;
    std::set<std::string> notes;
};

// Selects the hash a merge groups on; nullopt means the sample lacks it.
using SampleKeyFn = std::function<std::optional<std::string>(const LabeledSample&)>;

// Groups on the sample's own (single) extracted hash, tagged with its algo.
std::optional<std::string> own_hash_key(const LabeledSample& s);

// Groups on the sha256, present once a sample has been verified.
std::optional<std::string> sha256_key(const LabeledSample& s);

// Collapses duplicates: samples sharing a key hash become one sample whose
// labels, nations, stages and provenance are unions (identical pairs simply
// collapse; same-nation duplicates union labels; the rest union both).
// Output is sorted by key. Throws MissingKeyHashError when key(s) is empty.
std::vector<LabeledSample> merge_samples(std::vector<LabeledSample> samples,
                                         const SampleKeyFn& key);

struct CanonicalizeResult {
    std::vector<LabeledSample> verified;   // full hash triples, merged on sha256
    std::vector<LabeledSample> unverified; // untouched; backend did not know them
};

// Rewrites verified samples onto their canonical hash triple (md5/sha1/
// sha256 from the verification record of the sample's key hash) and
// re-merges on sha256 so the same file seen under different algorithms
// becomes one sample. records maps query hash -> record.
CanonicalizeResult canonicalize_after_verification(
    std::vector<LabeledSample> samples,
    const std::map<std::string, VerificationRecord>& records);

// Renders the sorted/unique "/" join used for label and nation columns.
std::string joined(const std::vector<std::string>& values);

} // namespace aptlabel
