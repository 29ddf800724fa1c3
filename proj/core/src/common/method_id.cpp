#include "cochange/common/method_id.hpp"

#include "cochange/common/hash.hpp"

namespace cochange {

MethodId make_method_id(std::string_view file_path, std::string_view type_name,
                        std::string_view method_name, const std::vector<std::string>& param_types) {
    std::string key;
    key.reserve(file_path.size() + type_name.size() + method_name.size() + 32);
    key.append(file_path).push_back('\x1f');
    key.append(type_name).push_back('\x1f');
    key.append(method_name).push_back('(');
    for (std::size_t i = 0; i < param_types.size(); ++i) {
        if (i) key.push_back(',');
        key.append(param_types[i]);
    }
    key.push_back(')');
    return MethodId{to_hex(fnv1a64(key))};
}

}  // namespace cochange
