#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include <nlohmann/json_fwd.hpp>

namespace nl2gql {

enum class ValueKind { String, Int, Float, Bool };

std::string_view to_string(ValueKind kind);
std::optional<ValueKind> parse_value_kind(std::string_view text);

inline bool is_numeric(ValueKind kind) {
    return kind == ValueKind::Int || kind == ValueKind::Float;
}

// Scalar property value. A default-constructed Value is null; nulls never
// appear in stored graphs but are produced by the executor for missing
// properties.
class Value {
public:
    Value() = default;
    Value(std::string s) : data_(std::move(s)) {}
    Value(const char* s) : data_(std::string(s)) {}
    Value(std::int64_t i) : data_(i) {}
    Value(int i) : data_(static_cast<std::int64_t>(i)) {}
    Value(double d) : data_(d) {}
    Value(bool b) : data_(b) {}

    static Value null() { return Value(); }

    bool is_null() const { return std::holds_alternative<std::monostate>(data_); }
    // Precondition: !is_null().
    ValueKind kind() const;

    bool is_string() const { return std::holds_alternative<std::string>(data_); }
    bool is_int() const { return std::holds_alternative<std::int64_t>(data_); }
    bool is_float() const { return std::holds_alternative<double>(data_); }
    bool is_bool() const { return std::holds_alternative<bool>(data_); }
    bool is_numeric() const { return is_int() || is_float(); }

    const std::string& as_string() const { return std::get<std::string>(data_); }
    std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
    double as_float() const { return std::get<double>(data_); }
    bool as_bool() const { return std::get<bool>(data_); }
    // Int or Float widened to double.
    double as_number() const;

    // Literal surface text as it would appear in a query: strings are
    // single-quoted and escaped, floats always carry a '.' or exponent.
    std::string to_literal() const;
    // Plain text for NL rendering: strings unquoted.
    std::string to_text() const;

    bool operator==(const Value&) const = default;

private:
    std::variant<std::monostate, std::string, std::int64_t, double, bool> data_;
};

// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

// Exact JSON mapping: null, string, integer, float, bool.
nlohmann::json to_json(const Value& value);
Value value_from_json(const nlohmann::json& j);

} // namespace nl2gql
