#pragma once

#include <cstddef>
#include <span>

namespace homeokit {

struct StatsResult {
    double u_statistic = 0.0;  // U of the test sample, ties counted half
    double p_value = 1.0;      // one-sided, alternative: test < control
    double a_measure = 0.5;    // Vargha-Delaney A(test, control)
    bool exact = false;        // p from the exact permutation distribution
};

/// Largest |test|*|control| for which the exact distribution is used.
inline constexpr std::size_t kExactPairLimit = 400;

/// Probability that a random test value exceeds a random control value, ties
/// counted half.
double vargha_delaney_a(std::span<const double> test, std::span<const double> control);

/// Mann-Whitney-Wilcoxon rank-sum test, one-sided in the direction test < control.
StatsResult mann_whitney(std::span<const double> test, std::span<const double> control);

/// Exact one-sided p: P(U <= U_obs) over all equally likely relabelings of the
/// pooled sample (midranks for ties).
double mann_whitney_exact_p(std::span<const double> test, std::span<const double> control);

/// Normal approximation with tie-corrected variance and continuity correction.
double mann_whitney_normal_p(std::span<const double> test, std::span<const double> control);

}  // namespace homeokit
