#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "cochange/analysis/method_record.hpp"

namespace cochange::analysis {

struct FileAnalysis {
    std::string package;
    std::vector<TypeDeclaration> types;
    std::vector<MethodRecord> methods;
    std::vector<std::string> warnings;
    bool ok = true;
};

/// Structural parse of one Java compilation unit. Methods declared in
/// anonymous classes are attributed to the nearest named enclosing type;
/// declarations without a body (abstract, interface, native) are skipped.
/// A file that cannot be tokenized or whose brackets do not balance yields
/// no methods and a warning.
FileAnalysis analyze_java_file(std::string_view file_path, std::string_view source);

std::vector<MethodRecord> extract_methods(std::string_view file_path, std::string_view source,
                                          std::vector<std::string>* warnings = nullptr);

/// True when the path has a "test" directory segment.
bool is_test_path(std::string_view file_path) noexcept;

}  // namespace cochange::analysis
