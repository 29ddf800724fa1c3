#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace cochange::analysis {

/// Source with comments stripped and all whitespace runs collapsed to
/// token boundaries; the basis for change detection.
std::string normalized_text(std::string_view source);

/// One line per statement or brace, identifiers and literals replaced by
/// placeholders; the basis for clone similarity.
std::vector<std::string> clone_lines(std::string_view source);

/// Lowercased identifier sub-tokens split on camelCase and underscores.
std::vector<std::string> identifier_subtokens(std::string_view source);

}  // namespace cochange::analysis
