#include "nl2gql/value.hpp"

#include <array>
#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

#include "nl2gql/error.hpp"

namespace nl2gql {

std::string_view to_string(ValueKind kind) {
    switch (kind) {
    case ValueKind::String: return "string";
    case ValueKind::Int: return "int";
    case ValueKind::Float: return "float";
    case ValueKind::Bool: return "bool";
    }
    return "?";
}

std::optional<ValueKind> parse_value_kind(std::string_view text) {
    if (text == "string") return ValueKind::String;
    if (text == "int") return ValueKind::Int;
    if (text == "float") return ValueKind::Float;
    if (text == "bool") return ValueKind::Bool;
    return std::nullopt;
}

ValueKind Value::kind() const {
    if (is_string()) return ValueKind::String;
    if (is_int()) return ValueKind::Int;
    if (is_float()) return ValueKind::Float;
    if (is_bool()) return ValueKind::Bool;
    throw Error("kind() of null value");
}

double Value::as_number() const {
    if (is_int()) return static_cast<double>(as_int());
    return as_float();
}

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    std::string out(buf.data(), end);
    if (out.find_first_of(".e") == std::string::npos) out += ".0";
    return out;
}

std::string Value::to_literal() const {
    if (is_null()) return "NULL";
    if (is_string()) {
        std::string out = "'";
        for (char c : as_string()) {
            switch (c) {
            case '\'': out += "\\'"; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
            }
        }
        out += '\'';
        return out;
    }
    return to_text();
}

std::string Value::to_text() const {
    if (is_null()) return "null";
    if (is_string()) return as_string();
    if (is_int()) return std::to_string(as_int());
    if (is_float()) return format_double(as_float());
    return as_bool() ? "true" : "false";
}

nlohmann::json to_json(const Value& value) {
    if (value.is_null()) return nullptr;
    if (value.is_string()) return value.as_string();
    if (value.is_int()) return value.as_int();
    if (value.is_float()) return value.as_float();
    return value.as_bool();
}

Value value_from_json(const nlohmann::json& j) {
    switch (j.type()) {
    case nlohmann::json::value_t::null: return Value();
    case nlohmann::json::value_t::string: return Value(j.get<std::string>());
    case nlohmann::json::value_t::boolean: return Value(j.get<bool>());
    case nlohmann::json::value_t::number_integer: return Value(j.get<std::int64_t>());
    case nlohmann::json::value_t::number_unsigned:
        return Value(static_cast<std::int64_t>(j.get<std::uint64_t>()));
    case nlohmann::json::value_t::number_float: return Value(j.get<double>());
    default: throw FormatError("expected a scalar value, got " + j.dump());
    }
}

} // namespace nl2gql
