#include "cochange/analysis/snapshot.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cochange/analysis/method_extractor.hpp"
#include "cochange/common/parallel.hpp"

namespace cochange::analysis {

const MethodRecord* Snapshot::find(const MethodId& id) const {
    auto it = std::lower_bound(methods.begin(), methods.end(), id,
                               [](const MethodRecord& m, const MethodId& key) { return m.method_id < key; });
    return it != methods.end() && it->method_id == id ? &*it : nullptr;
}

void resolve_superclasses(std::span<MethodRecord> methods, std::span<const TypeDeclaration> types) {
    // Simple name -> direct superclass. Ambiguous simple names resolve to the
    // lexicographically first qualified declaration for determinism.
    std::map<std::string, std::pair<std::string, std::string>> parent_of;
    for (const auto& t : types) {
        const std::string key = t.package + "." + t.qualified_name;
        auto [it, inserted] = parent_of.try_emplace(t.simple_name, key, t.superclass);
        if (!inserted && key < it->second.first) it->second = {key, t.superclass};
    }
    for (auto& m : methods) {
        if (m.superclasses.empty()) continue;
        std::vector<std::string> chain;
        std::set<std::string> seen;
        std::string current = m.superclasses.front();
        while (!current.empty() && current != "Object" && seen.insert(current).second) {
            chain.push_back(current);
            auto it = parent_of.find(current);
            if (it == parent_of.end()) break;
            current = it->second.second;
        }
        m.superclasses = std::move(chain);
    }
}

Snapshot build_snapshot(std::string revision, std::span<const SourceFile> files, unsigned jobs) {
    std::vector<FileAnalysis> analyses(files.size());
    parallel_for(files.size(), jobs,
                 [&](std::size_t i) { analyses[i] = analyze_java_file(files[i].path, files[i].content); });

    Snapshot snap;
    snap.revision = std::move(revision);
    for (auto& a : analyses) {
        for (auto& w : a.warnings) snap.warnings.push_back(std::move(w));
        for (auto& t : a.types) snap.types.push_back(std::move(t));
        for (auto& m : a.methods) snap.methods.push_back(std::move(m));
    }
    std::stable_sort(snap.methods.begin(), snap.methods.end(), [](const MethodRecord& a, const MethodRecord& b) {
        if (a.method_id != b.method_id) return a.method_id < b.method_id;
        if (a.file_path != b.file_path) return a.file_path < b.file_path;
        return a.line_span.start < b.line_span.start;
    });
    std::vector<MethodRecord> unique;
    unique.reserve(snap.methods.size());
    for (auto& m : snap.methods) {
        if (!unique.empty() && unique.back().method_id == m.method_id) {
            snap.warnings.push_back(m.file_path + ":" + std::to_string(m.line_span.start) + ": duplicate identity for " +
                                    m.type_name + "." + m.name + ", keeping line " +
                                    std::to_string(unique.back().line_span.start));
            continue;
        }
        unique.push_back(std::move(m));
    }
    snap.methods = std::move(unique);
    resolve_superclasses(snap.methods, snap.types);
    return snap;
}

}  // namespace cochange::analysis
