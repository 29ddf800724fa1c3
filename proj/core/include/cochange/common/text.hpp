#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cochange {

/// Splits on `sep`, dropping empty pieces.
std::vector<std::string> split_nonempty(std::string_view text, char sep);

std::string to_lower(std::string_view text);
bool starts_with(std::string_view text, std::string_view prefix) noexcept;
bool ends_with(std::string_view text, std::string_view suffix) noexcept;
std::string trim(std::string_view text);

}  // namespace cochange
