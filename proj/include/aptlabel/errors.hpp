#pragma once

#include <stdexcept>
#include <string>

namespace aptlabel {

// Base class for all errors raised by this library. Fatal configuration
// problems abort a run (exit code 1); recoverable conditions are caught by
// the pipeline and turned into skip/route decisions instead.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A file exists in the corpus listing but cannot be opened or read.
struct UnreadableFileError : Error {
    using Error::Error;
};

// Text extraction from a document failed (missing sidecar, bad encoding).
// The pipeline skips the document, logs it, and continues.
struct ExtractionFailedError : Error {
    using Error::Error;
};

// Every configured alias source yielded zero usable names.
struct AllSourcesEmptyError : Error {
    using Error::Error;
};

// A sample reached a merge keyed on a hash it does not carry.
struct MissingKeyHashError : Error {
    using Error::Error;
};

// The verification backend could not be reached after retries.
struct BackendUnavailableError : Error {
    using Error::Error;
};

// A hash submitted for verification is not well-formed md5/sha1/sha256 hex.
struct InvalidHashError : Error {
    using Error::Error;
};

// The verification cache file is truncated or malformed.
struct CacheCorruptError : Error {
    using Error::Error;
};

// Unusable run configuration (missing inputs, bad flag combinations).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed input data file (alias source list, fixture records, ...).
struct ParseError : Error {
    using Error::Error;
};

} // namespace aptlabel
