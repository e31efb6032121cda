#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace popanchor {

// Base class for all pipeline errors. `category()` is a stable machine-readable
// tag the CLI emits in its structured stderr output.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

// Bad or inconsistent configuration values.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& m) : Error("config", m) {}
};

// Malformed input file; carries file/line/column.
class SchemaError : public Error {
public:
    SchemaError(const std::string& file, std::size_t line, std::size_t column,
                const std::string& m)
        : Error("schema", file + ":" + std::to_string(line) + ":" +
                              std::to_string(column) + ": " + m),
          file_(file), line_(line), column_(column) {}

    const std::string& file() const noexcept { return file_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string file_;
    std::size_t line_;
    std::size_t column_;
};

// A record references an entity that does not exist (district, cell, person).
class ReferentialError : public Error {
public:
    explicit ReferentialError(const std::string& m) : Error("referential", m) {}
};

// No distribution row available for a key, after any enabled backoff.
class MissingDistributionError : public Error {
public:
    explicit MissingDistributionError(const std::string& m)
        : Error("missing_distribution", m) {}
};

// Caller violated an operation precondition (non-normalized vector, arity mismatch).
class ContractError : public Error {
public:
    explicit ContractError(const std::string& m) : Error("contract", m) {}
};

// All capacities of a constrained draw are zero.
class ExhaustionError : public Error {
public:
    explicit ExhaustionError(const std::string& m) : Error("exhaustion", m) {}
};

// Capacity remains but the probability mass over eligible bins is zero.
class DegenerateMassError : public Error {
public:
    explicit DegenerateMassError(const std::string& m)
        : Error("degenerate_mass", m) {}
};

// Every cell weight in a district is zero for the active purpose.
class DegenerateDistrictError : public Error {
public:
    explicit DegenerateDistrictError(const std::string& m)
        : Error("degenerate_district", m) {}
};

// An operation ran before the pipeline stage it depends on.
class StageError : public Error {
public:
    explicit StageError(const std::string& m) : Error("stage", m) {}
};

// Invariant broken inside the pipeline itself.
class InternalError : public Error {
public:
    explicit InternalError(const std::string& m) : Error("internal", m) {}
};

} // namespace popanchor
