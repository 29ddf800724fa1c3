#include "cochange/dataset/builder.hpp"

#include <algorithm>
#include <filesystem>

#include "cochange/common/parallel.hpp"

namespace cochange::dataset {

void WindowConfig::validate() const {
    if (!(t_s < t_d && t_d < t_e)) {
        throw ConfigError("invalid window: need t_s < t_d < t_e, got " + to_iso8601(t_s) + ", " + to_iso8601(t_d) +
                          ", " + to_iso8601(t_e));
    }
}

int RankingList::max_label() const noexcept {
    int best = 0;
    for (const auto& c : candidates) best = std::max(best, c.label);
    return best;
}

namespace {

std::string parent_directory(const std::string& path) {
    return std::filesystem::path(path).parent_path().generic_string();
}

}  // namespace

std::vector<RankingList> build_dataset(std::span<const analysis::MethodRecord> methods,
                                       const history::EditHistories& histories,
                                       std::span<const history::ChangeSet> change_sets, const WindowConfig& window,
                                       const BuildOptions& options, BuildReport* report) {
    window.validate();
    BuildReport local;
    local.snapshot_methods = methods.size();

    std::vector<analysis::MethodRecord> sorted(methods.begin(), methods.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const auto& a, const auto& b) { return a.method_id < b.method_id; });
    sorted.erase(std::unique(sorted.begin(), sorted.end(),
                             [](const auto& a, const auto& b) { return a.method_id == b.method_id; }),
                 sorted.end());

    std::vector<const analysis::MethodRecord*> valid;
    for (const auto& m : sorted) {
        if (m.is_test) {
            ++local.test_methods;
            continue;
        }
        auto it = histories.find(m.method_id);
        if (it == histories.end() || !it->second.has_event_in(window.feature_period())) {
            ++local.methods_without_history;
            continue;
        }
        valid.push_back(&m);
    }
    local.valid_methods = valid.size();

    std::vector<RankingList> out;
    if (valid.size() < 2) {
        local.note = valid.empty() ? "no valid methods: every method is a test method or has no edit history "
                                     "before t_d"
                                   : "only one valid method; no candidates to rank";
        if (report) *report = local;
        return out;
    }

    const FeatureContext context(FeatureInputs{sorted, &histories, change_sets, window.feature_period(),
                                               options.embeddings});
    const CoChangeIndex labels(change_sets, window.label_period());

    std::vector<std::string> directories;
    if (options.blocking) {
        for (const auto* m : valid) directories.push_back(parent_directory(m->file_path));
    }

    std::vector<std::optional<RankingList>> slots(valid.size());
    parallel_for(valid.size(), options.jobs, [&](std::size_t qi) {
        const MethodId& q = valid[qi]->method_id;
        RankingList list;
        list.query = q;
        list.window = window;
        bool any_positive = false;
        for (std::size_t ci = 0; ci < valid.size(); ++ci) {
            if (ci == qi) continue;
            const MethodId& c = valid[ci]->method_id;
            if (options.blocking && directories[qi] != directories[ci] && context.co_changes().count(q, c) == 0 &&
                !context.call_graph().linked(q, c)) {
                continue;
            }
            Candidate cand{c, context.compute(q, c), labels.count(q, c)};
            any_positive = any_positive || cand.label > 0;
            list.candidates.push_back(std::move(cand));
        }
        if (any_positive) slots[qi] = std::move(list);
    });

    for (auto& slot : slots) {
        if (slot) {
            out.push_back(std::move(*slot));
        } else {
            ++local.lists_all_zero;
        }
    }
    local.lists_emitted = out.size();
    if (out.empty()) local.note = "every ranking list had all-zero labels";
    if (report) *report = local;
    return out;
}

SplitWindows split_windows(Instant first_commit, Instant last_commit, int train_label_days, int test_label_days) {
    if (train_label_days <= 0 || test_label_days <= 0) {
        throw ConfigError("label periods must be positive day counts");
    }
    const Instant test_d = last_commit - Days{test_label_days};
    const Instant train_d = test_d - Days{train_label_days};
    if (!(first_commit < train_d)) {
        const auto have = std::chrono::duration_cast<Days>(last_commit - first_commit).count();
        throw HistoryTooShortError("insufficient history: need more than " +
                                   std::to_string(train_label_days + test_label_days) + " days, have " +
                                   std::to_string(have));
    }
    SplitWindows w;
    w.train = WindowConfig{first_commit, train_d, test_d};
    w.test = WindowConfig{first_commit, test_d, last_commit};
    return w;
}

}  // namespace cochange::dataset
