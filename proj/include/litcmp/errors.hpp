#pragma once

#include <stdexcept>
#include <string>

namespace litcmp {

// Base for every error raised by the engine. `code()` is the machine-readable
// token the HTTP layer puts into the error envelope.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Malformed input: empty labels, bad thresholds, duplicate columns, ...
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& message)
        : Error("validation_error", message) {}
};

// A referenced resource, predicate, statement or group does not exist.
class ReferenceError : public Error {
public:
    explicit ReferenceError(const std::string& message)
        : Error("unknown_reference", message) {}
};

class NotFoundError : public Error {
public:
    explicit NotFoundError(const std::string& message)
        : Error("not_found", message) {}
};

// Operation invoked on an object that is not ready (e.g. vectors not loaded).
class StateError : public Error {
public:
    explicit StateError(const std::string& message)
        : Error("invalid_state", message) {}
};

// DOI metadata could not be obtained from cache or resolver.
class ResolutionError : public Error {
public:
    ResolutionError(std::string doi, const std::string& message)
        : Error("resolution_error", message), doi_(std::move(doi)) {}

    const std::string& doi() const noexcept { return doi_; }

private:
    std::string doi_;
};

class StorageError : public Error {
public:
    explicit StorageError(const std::string& message)
        : Error("storage_error", message) {}
};

}  // namespace litcmp
