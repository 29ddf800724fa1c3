#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cochange/analysis/method_record.hpp"

namespace cochange::analysis {

/// methods.jsonl: one MethodRecord per line.
void write_methods_jsonl(std::ostream& out, std::span<const MethodRecord> methods);
std::vector<MethodRecord> read_methods_jsonl(std::istream& in, const std::string& origin = "<stream>");

}  // namespace cochange::analysis
