#pragma once

#include <stdexcept>
#include <string>

namespace lahja {

// Input could not be parsed (bad TSV line, invalid UTF-8, bad config file).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A serialized artifact (model file, report) has the wrong shape or version.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A sampling stratum cannot satisfy its quota.
struct QuotaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An operation that needs >= 2 classes was given fewer.
struct StratificationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Arguments outside an operation's domain (bad n, length mismatch, ...).
struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A contingency table with a zero marginal; the feature is untestable.
struct DegenerateTableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Using a component before fitting it.
struct StateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace lahja
