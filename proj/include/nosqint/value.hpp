#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "nosqint/errors.hpp"

namespace nosqint {

// Schemaless store value: Null, Bool, Number (64-bit float semantics),
// Text, List, or Map. Maps are key-ordered so every serialization of the
// same value is byte-identical.
class Value {
public:
    using List = std::vector<Value>;
    using Map = std::map<std::string, Value>;

    Value() : data_(nullptr) {}
    Value(std::nullptr_t) : data_(nullptr) {}
    Value(bool b) : data_(b) {}
    Value(double n) : data_(n) {}
    Value(int n) : data_(static_cast<double>(n)) {}
    Value(const char* s) : data_(std::string(s)) {}
    Value(std::string s) : data_(std::move(s)) {}
    Value(List l) : data_(std::move(l)) {}
    Value(Map m) : data_(std::move(m)) {}

    bool is_null() const { return std::holds_alternative<std::nullptr_t>(data_); }
    bool is_bool() const { return std::holds_alternative<bool>(data_); }
    bool is_number() const { return std::holds_alternative<double>(data_); }
    bool is_text() const { return std::holds_alternative<std::string>(data_); }
    bool is_list() const { return std::holds_alternative<List>(data_); }
    bool is_map() const { return std::holds_alternative<Map>(data_); }
    bool is_scalar() const { return !is_list() && !is_map(); }

    bool as_bool() const { return std::get<bool>(data_); }
    double as_number() const { return std::get<double>(data_); }
    const std::string& as_text() const { return std::get<std::string>(data_); }
    const List& as_list() const { return std::get<List>(data_); }
    const Map& as_map() const { return std::get<Map>(data_); }
    List& as_list() { return std::get<List>(data_); }
    Map& as_map() { return std::get<Map>(data_); }

    // Type rank for the cross-type total order: Null < Bool < Number < Text < List < Map.
    int type_rank() const { return static_cast<int>(data_.index()); }

    friend bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }
    friend bool operator!=(const Value& a, const Value& b) { return !(a == b); }

    // Total order used for deterministic row sorting; unrelated to filter semantics.
    friend bool operator<(const Value& a, const Value& b) {
        if (a.type_rank() != b.type_rank()) return a.type_rank() < b.type_rank();
        return a.data_ < b.data_;
    }

    static Value from_json(const nlohmann::json& j) {
        switch (j.type()) {
            case nlohmann::json::value_t::null: return Value(nullptr);
            case nlohmann::json::value_t::boolean: return Value(j.get<bool>());
            case nlohmann::json::value_t::number_integer:
            case nlohmann::json::value_t::number_unsigned:
            case nlohmann::json::value_t::number_float: return Value(j.get<double>());
            case nlohmann::json::value_t::string: return Value(j.get<std::string>());
            case nlohmann::json::value_t::array: {
                List l;
                l.reserve(j.size());
                for (const auto& e : j) l.push_back(from_json(e));
                return Value(std::move(l));
            }
            case nlohmann::json::value_t::object: {
                Map m;
                for (auto it = j.begin(); it != j.end(); ++it) m.emplace(it.key(), from_json(it.value()));
                return Value(std::move(m));
            }
            default:
                throw Error("value", "ParseError", "unsupported JSON value type");
        }
    }

    nlohmann::json to_json() const {
        return std::visit(
            [](const auto& v) -> nlohmann::json {
                using T = std::decay_t<decltype(v)>;
                if constexpr (std::is_same_v<T, std::nullptr_t>) {
                    return nullptr;
                } else if constexpr (std::is_same_v<T, bool> || std::is_same_v<T, double> ||
                                     std::is_same_v<T, std::string>) {
                    return v;
                } else if constexpr (std::is_same_v<T, List>) {
                    nlohmann::json a = nlohmann::json::array();
                    for (const auto& e : v) a.push_back(e.to_json());
                    return a;
                } else {
                    nlohmann::json o = nlohmann::json::object();
                    for (const auto& [k, e] : v) o[k] = e.to_json();
                    return o;
                }
            },
            data_);
    }

    std::string dump() const { return to_json().dump(); }

private:
    std::variant<std::nullptr_t, bool, double, std::string, List, Map> data_;
};

// Filter comparator vocabulary shared by the store access primitive and BQL.
enum class Comparator { Eq, Lt, Le, Gt, Ge, Ne };

inline const char* comparator_symbol(Comparator c) {
    switch (c) {
        case Comparator::Eq: return "=";
        case Comparator::Lt: return "<";
        case Comparator::Le: return "<=";
        case Comparator::Gt: return ">";
        case Comparator::Ge: return ">=";
        case Comparator::Ne: return "!=";
    }
    return "?";
}

namespace detail {

template <typename T>
inline bool apply_comparator(Comparator c, const T& a, const T& b) {
    switch (c) {
        case Comparator::Eq: return a == b;
        case Comparator::Lt: return a < b;
        case Comparator::Le: return a <= b;
        case Comparator::Gt: return a > b;
        case Comparator::Ge: return a >= b;
        case Comparator::Ne: return a != b;
    }
    return false;
}

}  // namespace detail

// Scalar comparison under schemaless-store semantics: comparing values of
// different types (Number vs Text, etc.) is false for every comparator,
// never an error. Lists and Maps never compare here.
inline bool compare_scalar(Comparator c, const Value& lhs, const Value& rhs) {
    if (lhs.is_number() && rhs.is_number()) return detail::apply_comparator(c, lhs.as_number(), rhs.as_number());
    if (lhs.is_text() && rhs.is_text()) return detail::apply_comparator(c, lhs.as_text(), rhs.as_text());
    if (lhs.is_bool() && rhs.is_bool()) return detail::apply_comparator(c, lhs.as_bool(), rhs.as_bool());
    if (lhs.is_null() && rhs.is_null()) return c == Comparator::Eq || c == Comparator::Le || c == Comparator::Ge;
    return false;
}

// Filter semantics over an attribute value: scalars compare directly; a
// List attribute with "=" matches if any element matches (membership).
inline bool matches_filter(Comparator c, const Value& attribute, const Value& operand) {
    if (attribute.is_list()) {
        if (c != Comparator::Eq) return false;
        for (const auto& e : attribute.as_list()) {
            if (e.is_scalar() && compare_scalar(Comparator::Eq, e, operand)) return true;
        }
        return false;
    }
    if (!attribute.is_scalar() || !operand.is_scalar()) return false;
    return compare_scalar(c, attribute, operand);
}

}  // namespace nosqint
