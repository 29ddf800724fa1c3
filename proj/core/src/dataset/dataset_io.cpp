#include "cochange/dataset/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "cochange/common/error.hpp"

namespace cochange::dataset {

using nlohmann::json;

namespace {

json features_to_json(const FeatureVector& v) {
    return json{{"co_change_count", v.co_change_count},
                {"author_similarity", v.author_similarity},
                {"semantic_similarity", v.semantic_similarity},
                {"path_similarity", v.path_similarity},
                {"code_dependency", v.code_dependency},
                {"hierarchy_similarity", v.hierarchy_similarity},
                {"clone_similarity", v.clone_similarity},
                {"package_similarity", v.package_similarity},
                {"arg_type_similarity", v.arg_type_similarity},
                {"arg_name_similarity", v.arg_name_similarity}};
}

FeatureVector features_from_json(const json& j) {
    FeatureVector v;
    v.co_change_count = j.at("co_change_count").get<int>();
    v.author_similarity = j.at("author_similarity").get<double>();
    v.semantic_similarity = j.at("semantic_similarity").get<double>();
    v.path_similarity = j.at("path_similarity").get<double>();
    v.code_dependency = j.at("code_dependency").get<int>();
    v.hierarchy_similarity = j.at("hierarchy_similarity").get<bool>();
    v.clone_similarity = j.at("clone_similarity").get<double>();
    v.package_similarity = j.at("package_similarity").get<double>();
    v.arg_type_similarity = j.at("arg_type_similarity").get<double>();
    v.arg_name_similarity = j.at("arg_name_similarity").get<double>();
    try {
        check_ranges(v);
    } catch (const DataError& e) {
        throw SchemaError(e.what());
    }
    return v;
}

std::string format_value(double x) {
    if (x == std::floor(x) && std::abs(x) < 1e15) return std::to_string(static_cast<long long>(x));
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

}  // namespace

void write_dataset_jsonl(std::ostream& out, std::span<const RankingList> lists) {
    for (const auto& list : lists) {
        json candidates = json::array();
        for (const auto& c : list.candidates) {
            candidates.push_back({{"id", c.id.value}, {"features", features_to_json(c.features)}, {"label", c.label}});
        }
        const json row{{"query", list.query.value},
                       {"window",
                        {{"t_s", to_iso8601(list.window.t_s)},
                         {"t_d", to_iso8601(list.window.t_d)},
                         {"t_e", to_iso8601(list.window.t_e)}}},
                       {"candidates", std::move(candidates)}};
        out << row.dump() << '\n';
    }
}

std::vector<RankingList> read_dataset_jsonl(std::istream& in, const std::string& origin) {
    std::vector<RankingList> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json row = json::parse(line);
            RankingList list;
            list.query = MethodId{row.at("query").get<std::string>()};
            const auto& w = row.at("window");
            list.window = WindowConfig{parse_iso8601(w.at("t_s").get<std::string>()),
                                       parse_iso8601(w.at("t_d").get<std::string>()),
                                       parse_iso8601(w.at("t_e").get<std::string>())};
            for (const auto& c : row.at("candidates")) {
                const int label = c.at("label").get<int>();
                if (label < 0) throw SchemaError("negative label");
                list.candidates.push_back(
                    Candidate{MethodId{c.at("id").get<std::string>()}, features_from_json(c.at("features")), label});
            }
            out.push_back(std::move(list));
        } catch (const json::exception& e) {
            throw SchemaError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const SchemaError& e) {
            throw SchemaError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

void write_letor(std::ostream& out, std::span<const RankingList> lists, const FeatureSchema& schema) {
    const auto indices = schema.indices();
    for (const auto& list : lists) {
        for (const auto& c : list.candidates) {
            const auto values = c.features.to_array();
            out << c.label << " qid:" << list.query.value;
            for (std::size_t i = 0; i < indices.size(); ++i) {
                out << ' ' << (i + 1) << ':' << format_value(values[indices[i]]);
            }
            out << " #" << c.id.value << '\n';
        }
    }
}

std::string schema_to_json(const FeatureSchema& schema) {
    json dropped = json::array();
    for (const auto& d : schema.dropped) {
        dropped.push_back({{"name", d.name}, {"correlated_with", d.correlated_with}, {"rho", d.rho}});
    }
    json matrix = json::array();
    for (const auto& row : schema.correlation) {
        json r = json::array();
        for (const auto& v : row) r.push_back(v ? json(*v) : json(nullptr));
        matrix.push_back(std::move(r));
    }
    const json doc{{"features", schema.features},
                   {"dropped", std::move(dropped)},
                   {"threshold", schema.threshold},
                   {"correlation", {{"features", schema.all_features}, {"spearman", std::move(matrix)}}}};
    return doc.dump(2) + "\n";
}

FeatureSchema schema_from_json(const std::string& text, const std::string& origin) {
    try {
        const json doc = json::parse(text);
        FeatureSchema s;
        s.features = doc.at("features").get<std::vector<std::string>>();
        s.threshold = doc.at("threshold").get<double>();
        for (const auto& d : doc.at("dropped")) {
            s.dropped.push_back(DroppedFeature{d.at("name").get<std::string>(),
                                               d.at("correlated_with").get<std::string>(), d.at("rho").get<double>()});
        }
        const auto& corr = doc.at("correlation");
        s.all_features = corr.at("features").get<std::vector<std::string>>();
        for (const auto& row : corr.at("spearman")) {
            std::vector<std::optional<double>> r;
            for (const auto& v : row) r.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
            s.correlation.push_back(std::move(r));
        }
        (void)s.indices();
        return s;
    } catch (const json::exception& e) {
        throw SchemaError(origin + ": " + e.what());
    }
}

}  // namespace cochange::dataset
