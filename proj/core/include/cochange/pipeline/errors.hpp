#pragma once

#include <exception>
#include <string>
#include <vector>

#include "cochange/common/error.hpp"

namespace cochange::pipeline {

/// Process exit statuses of the command-line tool.
enum class ExitCode : int {
    Ok = 0,
    Internal = 1,
    Usage = 2,            // bad arguments or configuration
    MissingUpstream = 3,  // an earlier stage has not run
    SchemaMismatch = 4,   // an artifact is malformed or from another version
    Data = 5,             // repository or input data problem
    QueryResolution = 6,  // rank query unknown or ambiguous
    Network = 7,          // hosting API failure
};

class MissingArtifactError : public Error {
public:
    using Error::Error;
};

class QueryResolutionError : public Error {
public:
    QueryResolutionError(const std::string& message, std::vector<std::string> suggestions)
        : Error(message), suggestions_(std::move(suggestions)) {}
    [[nodiscard]] const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

private:
    std::vector<std::string> suggestions_;
};

ExitCode exit_code_for(const std::exception& e) noexcept;

}  // namespace cochange::pipeline
