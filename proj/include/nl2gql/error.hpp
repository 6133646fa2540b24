#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nl2gql {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file (JSON syntax, wrong field shapes).
class FormatError : public Error {
public:
    using Error::Error;
};

// Schema definition violates one of its invariants.
class SchemaError : public Error {
public:
    using Error::Error;
};

// A data record (node/edge line, dataset line) violates the schema.
class DataError : public Error {
public:
    DataError(std::size_t line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    explicit DataError(const std::string& message) : Error(message) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_ = 0;
};

// Query text could not be parsed. offset is a byte offset into the input.
class ParseError : public Error {
public:
    ParseError(std::size_t offset, const std::string& message)
        : Error("syntax error at offset " + std::to_string(offset) + ": " + message),
          offset_(offset), detail_(message) {}

    std::size_t offset() const noexcept { return offset_; }
    const std::string& detail() const noexcept { return detail_; }

private:
    std::size_t offset_;
    std::string detail_;
};

// Query references a tag, edge type or property the schema does not declare.
class UnknownSchemaItemError : public Error {
public:
    explicit UnknownSchemaItemError(std::string item)
        : Error("unknown schema item: " + item), item_(std::move(item)) {}

    const std::string& item() const noexcept { return item_; }

private:
    std::string item_;
};

class TypeMismatchError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// A template slot has no schema item satisfying its constraints.
class NoCompatibleSlotError : public Error {
public:
    explicit NoCompatibleSlotError(std::string slot)
        : Error("no compatible schema item for slot " + slot), slot_(std::move(slot)) {}

    const std::string& slot() const noexcept { return slot_; }

private:
    std::string slot_;
};

// Join-table search found no path between two labels.
class DisconnectedLabelsError : public Error {
public:
    DisconnectedLabelsError(std::string a, std::string b)
        : Error("labels '" + a + "' and '" + b + "' are not connected in the schema"),
          first_(std::move(a)), second_(std::move(b)) {}

    const std::string& first() const noexcept { return first_; }
    const std::string& second() const noexcept { return second_; }

private:
    std::string first_;
    std::string second_;
};

} // namespace nl2gql
