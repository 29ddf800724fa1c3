#include "cochange/analysis/methods_io.hpp"

#include <istream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "cochange/common/error.hpp"

namespace cochange::analysis {

using nlohmann::json;

void write_methods_jsonl(std::ostream& out, std::span<const MethodRecord> methods) {
    for (const auto& m : methods) {
        json params = json::array();
        for (const auto& p : m.params) params.push_back({{"type", p.type}, {"name", p.name}});
        const json row{{"method_id", m.method_id.value},
                       {"file_path", m.file_path},
                       {"package", m.package},
                       {"type_name", m.type_name},
                       {"name", m.name},
                       {"params", std::move(params)},
                       {"superclasses", m.superclasses},
                       {"start_line", m.line_span.start},
                       {"end_line", m.line_span.end},
                       {"is_test", m.is_test},
                       {"body_source", m.body_source}};
        out << row.dump() << '\n';
    }
}

std::vector<MethodRecord> read_methods_jsonl(std::istream& in, const std::string& origin) {
    std::vector<MethodRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const json row = json::parse(line);
            MethodRecord m;
            m.method_id = MethodId{row.at("method_id").get<std::string>()};
            m.file_path = row.at("file_path").get<std::string>();
            m.package = row.at("package").get<std::string>();
            m.type_name = row.at("type_name").get<std::string>();
            m.name = row.at("name").get<std::string>();
            for (const auto& p : row.at("params")) {
                m.params.push_back(Parameter{p.at("type").get<std::string>(), p.at("name").get<std::string>()});
            }
            m.superclasses = row.at("superclasses").get<std::vector<std::string>>();
            m.line_span = LineSpan{row.at("start_line").get<int>(), row.at("end_line").get<int>()};
            m.is_test = row.at("is_test").get<bool>();
            m.body_source = row.at("body_source").get<std::string>();
            if (m.line_span.start > m.line_span.end) throw SchemaError("start_line after end_line");
            out.push_back(std::move(m));
        } catch (const json::exception& e) {
            throw SchemaError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        } catch (const SchemaError& e) {
            throw SchemaError(origin + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace cochange::analysis
