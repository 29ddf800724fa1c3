#include "cochange/analysis/method_record.hpp"

namespace cochange::analysis {

std::vector<std::string> MethodRecord::param_types() const {
    std::vector<std::string> out;
    out.reserve(params.size());
    for (const auto& p : params) out.push_back(p.type);
    return out;
}

std::vector<std::string> MethodRecord::param_names() const {
    std::vector<std::string> out;
    out.reserve(params.size());
    for (const auto& p : params) out.push_back(p.name);
    return out;
}

MethodId identity_of(const MethodRecord& m) {
    return make_method_id(m.file_path, m.type_name, m.name, m.param_types());
}

}  // namespace cochange::analysis
