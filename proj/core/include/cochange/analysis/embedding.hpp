#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cochange/analysis/method_record.hpp"
#include "cochange/common/error.hpp"

namespace cochange::analysis {

enum class EmbeddingProviderKind { ExternalFile, TokenHashFallback };

std::string to_string(EmbeddingProviderKind kind);

struct EmbeddingVector {
    MethodId method_id;
    std::vector<double> values;
    EmbeddingProviderKind provider = EmbeddingProviderKind::TokenHashFallback;
};

class EmbeddingNotFound : public Error {
public:
    explicit EmbeddingNotFound(const MethodId& id)
        : Error("no embedding for method " + id.value), id_(id) {}
    [[nodiscard]] const MethodId& id() const noexcept { return id_; }

private:
    MethodId id_;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    [[nodiscard]] virtual EmbeddingVector embed(const MethodRecord& m) const = 0;
    [[nodiscard]] virtual EmbeddingProviderKind kind() const noexcept = 0;
};

/// Hashed sub-token counts weighted by smoothed IDF over a corpus, then
/// L2-normalized. The IDF table is fixed at construction.
class TokenHashEmbedder final : public EmbeddingProvider {
public:
    static constexpr std::size_t kDefaultDimension = 256;

    explicit TokenHashEmbedder(std::span<const MethodRecord> corpus, std::size_t dimension = kDefaultDimension);

    [[nodiscard]] EmbeddingVector embed(const MethodRecord& m) const override;
    [[nodiscard]] EmbeddingProviderKind kind() const noexcept override {
        return EmbeddingProviderKind::TokenHashFallback;
    }
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }

private:
    std::size_t dimension_;
    double documents_ = 0;
    std::unordered_map<std::string, double> document_frequency_;
};

/// Vectors read from an embeddings.jsonl file ({"method_id", "values"} per
/// line). Any consistent dimension is accepted.
class ExternalEmbeddings final : public EmbeddingProvider {
public:
    static ExternalEmbeddings load(const std::filesystem::path& path);
    static ExternalEmbeddings parse(std::istream& in, const std::string& origin = "<stream>");

    [[nodiscard]] EmbeddingVector embed(const MethodRecord& m) const override;
    [[nodiscard]] EmbeddingProviderKind kind() const noexcept override { return EmbeddingProviderKind::ExternalFile; }
    [[nodiscard]] bool contains(const MethodId& id) const { return vectors_.contains(id); }
    [[nodiscard]] std::size_t dimension() const noexcept { return dimension_; }
    [[nodiscard]] std::size_t size() const noexcept { return vectors_.size(); }

private:
    std::size_t dimension_ = 0;
    std::unordered_map<MethodId, std::vector<double>> vectors_;
};

void write_embeddings_jsonl(std::ostream& out, std::span<const EmbeddingVector> vectors);

/// dot(u, v) / (|u| |v|); 0 when either norm is 0. Throws DataError when the
/// vectors come from different providers or differ in length.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

}  // namespace cochange::analysis
