#pragma once

#include <vector>

#include "cochange/common/method_id.hpp"
#include "cochange/common/time.hpp"
#include "cochange/dataset/features.hpp"

namespace cochange::dataset {

/// Feature period [t_s, t_d), label period [t_d, t_e).
struct WindowConfig {
    Instant t_s{};
    Instant t_d{};
    Instant t_e{};

    [[nodiscard]] TimeRange feature_period() const noexcept { return {t_s, t_d}; }
    [[nodiscard]] TimeRange label_period() const noexcept { return {t_d, t_e}; }
    /// Throws ConfigError unless t_s < t_d < t_e.
    void validate() const;

    friend bool operator==(const WindowConfig&, const WindowConfig&) = default;
};

struct Candidate {
    MethodId id;
    FeatureVector features;
    int label = 0;

    friend bool operator==(const Candidate&, const Candidate&) = default;
};

/// One query method and its candidates, in ascending id order.
struct RankingList {
    MethodId query;
    std::vector<Candidate> candidates;
    WindowConfig window;

    [[nodiscard]] int max_label() const noexcept;

    friend bool operator==(const RankingList&, const RankingList&) = default;
};

}  // namespace cochange::dataset
