#pragma once

#include <stdexcept>
#include <string>

namespace firmval {

/// Argument outside the mathematical domain of an operation
/// (e.g. a discount rate at or below -100%).
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The share mechanics of a firm trajectory broke down: a share price or
/// share count went nonpositive somewhere along the path.
struct InfeasibleTrajectory : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct LedgerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DuplicateMember : LedgerError {
    explicit DuplicateMember(const std::string& id)
        : LedgerError("duplicate member: " + id) {}
};

struct UnknownMember : LedgerError {
    explicit UnknownMember(const std::string& id)
        : LedgerError("unknown member: " + id) {}
};

struct InactiveMember : LedgerError {
    explicit InactiveMember(const std::string& id)
        : LedgerError("inactive member: " + id) {}
};

struct NoActiveMembers : LedgerError {
    NoActiveMembers() : LedgerError("no active members with positive weight") {}
};

/// Scenario file could not be read as structured text at all.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Scenario file parsed but violates the schema or an invariant.
/// Carries the path of the offending field (e.g. "asset.lifetime").
struct ValidationError : std::runtime_error {
    std::string field_path;
    ValidationError(std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message),
          field_path(std::move(path)) {}
};

}  // namespace firmval
