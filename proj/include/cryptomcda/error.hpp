#pragma once

#include <stdexcept>
#include <string>

namespace cryptomcda {

// Each family maps to a distinct CLI exit code (see exit_code()).
enum class ErrorKind {
    config,     // bad configuration or command-line values
    data,       // missing files, schema/row/validation failures, too little data
    math,       // degenerate or undefined numerical results
    io,         // unwritable outputs
    contract,   // caller violated a documented precondition
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(ErrorKind::config, what) {}
};

struct DataError : Error {
    explicit DataError(const std::string& what) : Error(ErrorKind::data, what) {}
};

/// Header lacks a required column; column() names it.
class SchemaError : public DataError {
public:
    explicit SchemaError(std::string column)
        : DataError("missing required column: " + column), column_(std::move(column)) {}
    const std::string& column() const noexcept { return column_; }

private:
    std::string column_;
};

/// A data row failed to parse; row() is the 1-based data row index (header excluded).
class RowError : public DataError {
public:
    RowError(std::size_t row, const std::string& what)
        : DataError("row " + std::to_string(row) + ": " + what), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

struct ValidationError : DataError {
    using DataError::DataError;
};

struct EmptyRangeError : DataError {
    using DataError::DataError;
};

struct InsufficientDataError : DataError {
    using DataError::DataError;
};

struct MathError : Error {
    explicit MathError(const std::string& what) : Error(ErrorKind::math, what) {}
};

struct DegenerateError : MathError {
    using MathError::MathError;
};

struct DomainError : MathError {
    using MathError::MathError;
};

struct IoError : Error {
    explicit IoError(const std::string& what) : Error(ErrorKind::io, what) {}
};

struct ContractError : Error {
    explicit ContractError(const std::string& what) : Error(ErrorKind::contract, what) {}
};

inline int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::config: return 2;
        case ErrorKind::data: return 3;
        case ErrorKind::math: return 4;
        case ErrorKind::io: return 5;
        case ErrorKind::contract: return 6;
    }
    return 1;
}

}  // namespace cryptomcda
