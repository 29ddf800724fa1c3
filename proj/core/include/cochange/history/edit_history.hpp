#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cochange/common/method_id.hpp"
#include "cochange/common/time.hpp"
#include "cochange/history/change_set.hpp"

namespace cochange::history {

struct MethodChangeEvent {
    MethodId method_id;
    std::string cs_id;
    std::string commit_sha;
    std::string author;
    Instant timestamp{};

    friend bool operator==(const MethodChangeEvent&, const MethodChangeEvent&) = default;
};

struct MethodEditHistory {
    MethodId method_id;
    std::vector<MethodChangeEvent> events;  // ascending by (timestamp, commit_sha)
    std::set<std::string> authors;

    /// Authors of events with timestamps inside `range`.
    [[nodiscard]] std::set<std::string> authors_in(const TimeRange& range) const;
    [[nodiscard]] bool has_event_in(const TimeRange& range) const;
};

using EditHistories = std::map<MethodId, MethodEditHistory>;

/// Groups events by method. Methods without events are absent. Throws
/// DataError when an event names a change set that is not in `change_sets`.
EditHistories build_edit_histories(std::span<const ChangeSet> change_sets,
                                   std::span<const MethodChangeEvent> events);

}  // namespace cochange::history
