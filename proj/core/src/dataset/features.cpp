#include "cochange/dataset/features.hpp"

#include <algorithm>
#include <cmath>

#include "cochange/common/error.hpp"
#include "cochange/common/text.hpp"

namespace cochange::dataset {

const std::array<std::string, kFeatureCount>& feature_names() {
    static const std::array<std::string, kFeatureCount> names{
        "co_change_count",      "author_similarity", "semantic_similarity", "path_similarity",
        "code_dependency",      "hierarchy_similarity", "clone_similarity", "package_similarity",
        "arg_type_similarity",  "arg_name_similarity",
    };
    return names;
}

std::optional<std::size_t> feature_index(std::string_view name) {
    const auto& names = feature_names();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == name) return i;
    }
    return std::nullopt;
}

std::array<double, kFeatureCount> FeatureVector::to_array() const {
    return {static_cast<double>(co_change_count),
            author_similarity,
            semantic_similarity,
            path_similarity,
            static_cast<double>(code_dependency),
            hierarchy_similarity ? 1.0 : 0.0,
            clone_similarity,
            package_similarity,
            arg_type_similarity,
            arg_name_similarity};
}

FeatureVector FeatureVector::from_array(const std::array<double, kFeatureCount>& v) {
    FeatureVector f;
    f.co_change_count = static_cast<int>(std::llround(v[0]));
    f.author_similarity = v[1];
    f.semantic_similarity = v[2];
    f.path_similarity = v[3];
    f.code_dependency = static_cast<int>(std::llround(v[4]));
    f.hierarchy_similarity = v[5] >= 0.5;
    f.clone_similarity = v[6];
    f.package_similarity = v[7];
    f.arg_type_similarity = v[8];
    f.arg_name_similarity = v[9];
    check_ranges(f);
    return f;
}

void check_ranges(const FeatureVector& v) {
    auto require = [](bool ok, const char* name, double value) {
        if (!ok) throw DataError(std::string(name) + " out of range: " + std::to_string(value));
    };
    auto unit = [](double x) { return x >= 0.0 && x <= 1.0; };
    require(v.co_change_count >= 0, "co_change_count", v.co_change_count);
    require(unit(v.author_similarity), "author_similarity", v.author_similarity);
    require(v.semantic_similarity >= -1.0 && v.semantic_similarity <= 1.0, "semantic_similarity",
            v.semantic_similarity);
    require(unit(v.path_similarity), "path_similarity", v.path_similarity);
    require(v.code_dependency >= 0, "code_dependency", v.code_dependency);
    require(v.clone_similarity >= 0.0 && v.clone_similarity <= 100.0, "clone_similarity", v.clone_similarity);
    require(unit(v.package_similarity), "package_similarity", v.package_similarity);
    require(unit(v.arg_type_similarity), "arg_type_similarity", v.arg_type_similarity);
    require(unit(v.arg_name_similarity), "arg_name_similarity", v.arg_name_similarity);
}

double path_similarity(std::string_view a, std::string_view b, char separator) {
    auto ta = split_nonempty(a, separator);
    auto tb = split_nonempty(b, separator);
    if (ta.empty() && tb.empty()) return 1.0;
    if (ta.empty() || tb.empty()) return 0.0;
    std::sort(ta.begin(), ta.end());
    std::sort(tb.begin(), tb.end());
    std::size_t common = 0;
    for (std::size_t i = 0, j = 0; i < ta.size() && j < tb.size();) {
        if (ta[i] < tb[j]) {
            ++i;
        } else if (tb[j] < ta[i]) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    return static_cast<double>(common) / static_cast<double>(std::max(ta.size(), tb.size()));
}

double jaccard_similarity(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t common = 0;
    for (const auto& x : a) common += b.count(x);
    return static_cast<double>(common) / static_cast<double>(a.size() + b.size() - common);
}

bool share_superclass(std::span<const std::string> a, std::span<const std::string> b) {
    for (const auto& x : a) {
        if (x == "Object") continue;
        if (std::find(b.begin(), b.end(), x) != b.end()) return true;
    }
    return false;
}

int co_change_count(const MethodId& q, const MethodId& c, std::span<const history::ChangeSet> change_sets,
                    const TimeRange& period) {
    int n = 0;
    for (const auto& cs : change_sets) {
        if (period.contains(cs.merged_at) && cs.changed_method_ids.contains(q) && cs.changed_method_ids.contains(c)) {
            ++n;
        }
    }
    return n;
}

CoChangeIndex::CoChangeIndex(std::span<const history::ChangeSet> change_sets, const TimeRange& period) {
    for (std::size_t i = 0; i < change_sets.size(); ++i) {
        if (!period.contains(change_sets[i].merged_at)) continue;
        for (const auto& id : change_sets[i].changed_method_ids) sets_[id].push_back(static_cast<std::uint32_t>(i));
    }
}

int CoChangeIndex::count(const MethodId& q, const MethodId& c) const {
    auto a = sets_.find(q);
    auto b = sets_.find(c);
    if (a == sets_.end() || b == sets_.end()) return 0;
    const auto& x = a->second;
    const auto& y = b->second;
    int n = 0;
    for (std::size_t i = 0, j = 0; i < x.size() && j < y.size();) {
        if (x[i] < y[j]) {
            ++i;
        } else if (y[j] < x[i]) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

std::size_t CoChangeIndex::change_sets_of(const MethodId& m) const {
    auto it = sets_.find(m);
    return it == sets_.end() ? 0 : it->second.size();
}

FeatureContext::FeatureContext(const FeatureInputs& inputs)
    : period_(inputs.period),
      co_changes_(inputs.change_sets, inputs.period),
      call_graph_(analysis::build_call_graph(inputs.methods)),
      clones_(inputs.methods) {
    const analysis::TokenHashEmbedder fallback(inputs.methods);
    for (const auto& m : inputs.methods) {
        Entry e;
        e.record = &m;
        if (inputs.histories) {
            auto it = inputs.histories->find(m.method_id);
            if (it != inputs.histories->end()) e.authors = it->second.authors_in(period_);
        }
        for (const auto& p : m.params) {
            e.param_types.insert(p.type);
            e.param_names.insert(p.name);
        }
        e.fallback = fallback.embed(m);
        if (inputs.embeddings && inputs.embeddings->contains(m.method_id)) e.external = inputs.embeddings->embed(m);
        entries_.emplace(m.method_id, std::move(e));
    }
}

const analysis::MethodRecord* FeatureContext::find(const MethodId& id) const {
    auto it = entries_.find(id);
    return it == entries_.end() ? nullptr : it->second.record;
}

const FeatureContext::Entry& FeatureContext::entry(const MethodId& id) const {
    auto it = entries_.find(id);
    if (it == entries_.end()) throw DataError("method " + id.value + " is not in the snapshot");
    return it->second;
}

FeatureVector FeatureContext::compute(const MethodId& q, const MethodId& c) const {
    const Entry& eq = entry(q);
    const Entry& ec = entry(c);
    const auto& mq = *eq.record;
    const auto& mc = *ec.record;

    FeatureVector v;
    v.co_change_count = co_changes_.count(q, c);
    v.author_similarity = jaccard_similarity(eq.authors, ec.authors);
    if (eq.external && ec.external) {
        v.semantic_similarity = analysis::cosine_similarity(*eq.external, *ec.external);
    } else {
        v.semantic_similarity = analysis::cosine_similarity(eq.fallback, ec.fallback);
    }
    v.semantic_similarity = std::clamp(v.semantic_similarity, -1.0, 1.0);
    v.path_similarity = path_similarity(mq.file_path, mc.file_path, '/');
    v.code_dependency = call_graph_.calls_between(q, c);
    v.hierarchy_similarity = share_superclass(mq.superclasses, mc.superclasses);
    v.clone_similarity = clones_.similarity(q, c);
    v.package_similarity = path_similarity(mq.package, mc.package, '.');
    v.arg_type_similarity = jaccard_similarity(eq.param_types, ec.param_types);
    v.arg_name_similarity = jaccard_similarity(eq.param_names, ec.param_names);
    return v;
}

}  // namespace cochange::dataset
