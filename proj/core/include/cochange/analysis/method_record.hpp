#pragma once

#include <string>
#include <vector>

#include "cochange/common/method_id.hpp"

namespace cochange::analysis {

struct Parameter {
    std::string type;
    std::string name;

    friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct LineSpan {
    int start = 0;
    int end = 0;

    friend bool operator==(const LineSpan&, const LineSpan&) = default;
};

/// One method or constructor declaration with a body.
struct MethodRecord {
    MethodId method_id;
    std::string file_path;
    std::string package;    // dotted, empty for the default package
    std::string type_name;  // nearest named enclosing type, "Outer.Inner" for nested types
    std::string name;
    std::vector<Parameter> params;
    std::vector<std::string> superclasses;  // transitive, nearest first, simple names
    std::string body_source;                // full declaration text, header through closing brace
    LineSpan line_span;
    bool is_test = false;

    [[nodiscard]] std::vector<std::string> param_types() const;
    [[nodiscard]] std::vector<std::string> param_names() const;

    friend bool operator==(const MethodRecord&, const MethodRecord&) = default;
};

/// A named class/interface/enum/record declaration.
struct TypeDeclaration {
    std::string file_path;
    std::string package;
    std::string qualified_name;  // "Outer.Inner"
    std::string simple_name;
    std::string superclass;      // simple name of the direct `extends` target, if any
};

/// Recomputes `method_id` from the identity fields.
MethodId identity_of(const MethodRecord& m);

}  // namespace cochange::analysis
