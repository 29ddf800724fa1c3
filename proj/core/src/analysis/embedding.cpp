#include "cochange/analysis/embedding.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include <nlohmann/json.hpp>

#include "cochange/analysis/normalize.hpp"
#include "cochange/common/hash.hpp"

namespace cochange::analysis {

using nlohmann::json;

std::string to_string(EmbeddingProviderKind kind) {
    return kind == EmbeddingProviderKind::ExternalFile ? "external-file" : "token-hash-fallback";
}

TokenHashEmbedder::TokenHashEmbedder(std::span<const MethodRecord> corpus, std::size_t dimension)
    : dimension_(dimension) {
    if (dimension_ == 0) throw ConfigError("embedding dimension must be positive");
    for (const auto& m : corpus) {
        const auto tokens = identifier_subtokens(m.body_source);
        const std::set<std::string> distinct(tokens.begin(), tokens.end());
        for (const auto& t : distinct) document_frequency_[t] += 1.0;
        documents_ += 1.0;
    }
}

EmbeddingVector TokenHashEmbedder::embed(const MethodRecord& m) const {
    std::map<std::string, double> term_counts;
    for (auto& t : identifier_subtokens(m.body_source)) term_counts[std::move(t)] += 1.0;

    std::vector<double> values(dimension_, 0.0);
    for (const auto& [term, count] : term_counts) {
        auto it = document_frequency_.find(term);
        const double df = it == document_frequency_.end() ? 0.0 : it->second;
        const double idf = std::log((1.0 + documents_) / (1.0 + df)) + 1.0;
        values[fnv1a64(term) % dimension_] += count * idf;
    }
    double norm = 0.0;
    for (double v : values) norm += v * v;
    norm = std::sqrt(norm);
    if (norm > 0.0) {
        for (double& v : values) v /= norm;
    }
    return EmbeddingVector{m.method_id, std::move(values), EmbeddingProviderKind::TokenHashFallback};
}

ExternalEmbeddings ExternalEmbeddings::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embeddings file " + path.string());
    return parse(in, path.string());
}

ExternalEmbeddings ExternalEmbeddings::parse(std::istream& in, const std::string& origin) {
    ExternalEmbeddings out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = origin + ":" + std::to_string(line_no);
        json row;
        try {
            row = json::parse(line);
        } catch (const json::parse_error& e) {
            throw SchemaError(where + ": malformed JSON: " + e.what());
        }
        if (!row.is_object() || !row.contains("method_id") || !row["method_id"].is_string() ||
            !row.contains("values") || !row["values"].is_array()) {
            throw SchemaError(where + ": expected {\"method_id\": string, \"values\": [number...]}");
        }
        std::vector<double> values;
        values.reserve(row["values"].size());
        for (const auto& v : row["values"]) {
            if (!v.is_number()) throw SchemaError(where + ": non-numeric embedding value");
            const double x = v.get<double>();
            if (!std::isfinite(x)) throw SchemaError(where + ": non-finite embedding value");
            values.push_back(x);
        }
        if (values.empty()) throw SchemaError(where + ": empty embedding");
        if (out.dimension_ == 0) out.dimension_ = values.size();
        if (values.size() != out.dimension_) {
            throw SchemaError(where + ": dimension " + std::to_string(values.size()) + " differs from " +
                              std::to_string(out.dimension_));
        }
        MethodId id{row["method_id"].get<std::string>()};
        if (!out.vectors_.emplace(id, std::move(values)).second) {
            throw SchemaError(where + ": duplicate method_id " + id.value);
        }
    }
    return out;
}

EmbeddingVector ExternalEmbeddings::embed(const MethodRecord& m) const {
    auto it = vectors_.find(m.method_id);
    if (it == vectors_.end()) throw EmbeddingNotFound(m.method_id);
    return EmbeddingVector{m.method_id, it->second, EmbeddingProviderKind::ExternalFile};
}

void write_embeddings_jsonl(std::ostream& out, std::span<const EmbeddingVector> vectors) {
    for (const auto& v : vectors) {
        out << json{{"method_id", v.method_id.value}, {"values", v.values}}.dump() << '\n';
    }
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.provider != v.provider) throw DataError("cosine similarity across embedding providers");
    if (u.values.size() != v.values.size()) throw DataError("cosine similarity of vectors with different lengths");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        dot += u.values[i] * v.values[i];
        nu += u.values[i] * u.values[i];
        nv += v.values[i] * v.values[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    const double c = dot / (std::sqrt(nu) * std::sqrt(nv));
    return std::clamp(c, -1.0, 1.0);
}

}  // namespace cochange::analysis
