#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace cochange {

/// Stable identity of a method: a hash of (file path, enclosing type,
/// method name, ordered parameter types). Renames produce a new id.
struct MethodId {
    std::string value;

    MethodId() = default;
    explicit MethodId(std::string v) : value(std::move(v)) {}

    [[nodiscard]] bool empty() const noexcept { return value.empty(); }

    friend auto operator<=>(const MethodId&, const MethodId&) = default;
    friend bool operator==(const MethodId&, const MethodId&) = default;
    friend std::ostream& operator<<(std::ostream& os, const MethodId& id) { return os << id.value; }
};

MethodId make_method_id(std::string_view file_path, std::string_view type_name,
                        std::string_view method_name, const std::vector<std::string>& param_types);

}  // namespace cochange

template <>
struct std::hash<cochange::MethodId> {
    std::size_t operator()(const cochange::MethodId& id) const noexcept {
        return std::hash<std::string>{}(id.value);
    }
};
