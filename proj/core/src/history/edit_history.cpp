#include "cochange/history/edit_history.hpp"

#include <algorithm>
#include <unordered_set>

#include "cochange/common/error.hpp"

namespace cochange::history {

std::set<std::string> MethodEditHistory::authors_in(const TimeRange& range) const {
    std::set<std::string> out;
    for (const auto& e : events) {
        if (range.contains(e.timestamp)) out.insert(e.author);
    }
    return out;
}

bool MethodEditHistory::has_event_in(const TimeRange& range) const {
    return std::any_of(events.begin(), events.end(), [&](const auto& e) { return range.contains(e.timestamp); });
}

EditHistories build_edit_histories(std::span<const ChangeSet> change_sets,
                                   std::span<const MethodChangeEvent> events) {
    std::unordered_set<std::string> known;
    for (const auto& cs : change_sets) known.insert(cs.cs_id);

    EditHistories out;
    for (const auto& e : events) {
        if (!known.contains(e.cs_id)) {
            throw DataError("event for " + e.method_id.value + " references unknown change set " + e.cs_id);
        }
        auto& h = out[e.method_id];
        h.method_id = e.method_id;
        h.events.push_back(e);
        h.authors.insert(e.author);
    }
    for (auto& [id, h] : out) {
        std::sort(h.events.begin(), h.events.end(), [](const auto& a, const auto& b) {
            return a.timestamp != b.timestamp ? a.timestamp < b.timestamp : a.commit_sha < b.commit_sha;
        });
    }
    return out;
}

}  // namespace cochange::history
