#pragma once

#include <span>
#include <string>

namespace cochange::eval {

enum class SignificanceMethod { Exact, NormalApproximation };

std::string to_string(SignificanceMethod m);

/// Largest effective sample size for which the exact distribution is used.
inline constexpr int kExactWilcoxonLimit = 25;

struct SignificanceResult {
    double statistic = 0.0;  // W = min(W+, W-)
    double w_plus = 0.0;     // rank sum of positive a - b
    double w_minus = 0.0;
    int n_effective = 0;     // pairs with a nonzero difference
    double p_value = 1.0;    // two-sided
    SignificanceMethod method = SignificanceMethod::Exact;
};

/// Two-sided Wilcoxon signed-rank test on a - b. Zero differences are
/// dropped and tied |d| share average ranks. Exact null distribution of W+
/// for n_effective <= 25, otherwise the normal approximation with tie and
/// continuity corrections. Throws DataError for unequal or empty inputs.
SignificanceResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

}  // namespace cochange::eval
