#include "cochange/pipeline/errors.hpp"

#include "cochange/history/github.hpp"

namespace cochange::pipeline {

ExitCode exit_code_for(const std::exception& e) noexcept {
    if (dynamic_cast<const ConfigError*>(&e)) return ExitCode::Usage;
    if (dynamic_cast<const MissingArtifactError*>(&e)) return ExitCode::MissingUpstream;
    if (dynamic_cast<const SchemaError*>(&e)) return ExitCode::SchemaMismatch;
    if (dynamic_cast<const QueryResolutionError*>(&e)) return ExitCode::QueryResolution;
    if (dynamic_cast<const history::HttpError*>(&e)) return ExitCode::Network;
    if (dynamic_cast<const DataError*>(&e)) return ExitCode::Data;
    return ExitCode::Internal;
}

}  // namespace cochange::pipeline
