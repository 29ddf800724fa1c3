#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cochange/analysis/method_record.hpp"

namespace cochange::analysis {

/// All methods of a project at one revision.
struct Snapshot {
    std::string revision;  // commit sha, empty for ad-hoc sources
    std::vector<MethodRecord> methods;  // sorted by method_id, ids unique
    std::vector<TypeDeclaration> types;
    std::vector<std::string> warnings;

    [[nodiscard]] const MethodRecord* find(const MethodId& id) const;
};

struct SourceFile {
    std::string path;
    std::string content;
};

/// Parses every file, resolves transitive superclass chains across the
/// project and drops duplicate ids (first declaration wins, with a warning).
Snapshot build_snapshot(std::string revision, std::span<const SourceFile> files, unsigned jobs = 1);

/// Replaces each method's direct superclass with the transitive chain,
/// nearest first, resolved by simple name among `types`. The universal
/// root `Object` is never included.
void resolve_superclasses(std::span<MethodRecord> methods, std::span<const TypeDeclaration> types);

}  // namespace cochange::analysis
