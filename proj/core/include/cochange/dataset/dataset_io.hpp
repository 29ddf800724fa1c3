#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "cochange/dataset/correlation.hpp"
#include "cochange/dataset/ranking_list.hpp"

namespace cochange::dataset {

/// dataset.jsonl: one ranking list per line,
/// {"query", "window": {"t_s","t_d","t_e"}, "candidates": [{"id","features","label"}...]}.
void write_dataset_jsonl(std::ostream& out, std::span<const RankingList> lists);
std::vector<RankingList> read_dataset_jsonl(std::istream& in, const std::string& origin = "<stream>");

/// Tabular learning-to-rank text: `<label> qid:<query> 1:<f1> ... #<candidate>`,
/// columns numbered in `schema` order.
void write_letor(std::ostream& out, std::span<const RankingList> lists, const FeatureSchema& schema);

/// Schema and correlation matrix as one JSON document.
std::string schema_to_json(const FeatureSchema& schema);
FeatureSchema schema_from_json(const std::string& text, const std::string& origin = "<schema>");

}  // namespace cochange::dataset
