#include "homeokit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace homeokit {

namespace {

void require_samples(std::span<const double> test, std::span<const double> control) {
    if (test.empty() || control.empty()) throw std::invalid_argument("statistics need two non-empty samples");
}

// U counted as wins + ties/2, returned doubled so it stays integral.
long long doubled_u(std::span<const double> test, std::span<const double> control) {
    long long u2 = 0;
    for (double t : test) {
        for (double c : control) {
            if (t > c) u2 += 2;
            else if (t == c) u2 += 1;
        }
    }
    return u2;
}

// Doubled midranks of the pooled sample, in pooled order (test first).
std::vector<long long> doubled_midranks(std::span<const double> test, std::span<const double> control) {
    std::vector<double> pooled(test.begin(), test.end());
    pooled.insert(pooled.end(), control.begin(), control.end());
    std::vector<std::size_t> order(pooled.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pooled[a] < pooled[b]; });

    std::vector<long long> ranks(pooled.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
        // Ranks i+1..j+1 share the midrank (i+j+2)/2; doubled that is i+j+2.
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = static_cast<long long>(i + j + 2);
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double vargha_delaney_a(std::span<const double> test, std::span<const double> control) {
    require_samples(test, control);
    return static_cast<double>(doubled_u(test, control)) /
           (2.0 * static_cast<double>(test.size()) * static_cast<double>(control.size()));
}

double mann_whitney_exact_p(std::span<const double> test, std::span<const double> control) {
    require_samples(test, control);
    const std::size_t n1 = test.size();
    const std::size_t n2 = control.size();
    const auto ranks = doubled_midranks(test, control);

    // Distribution of the doubled rank sum of the smaller group, by counting
    // subsets of that size (dp over pooled observations).
    const bool use_test = n1 <= n2;
    const std::size_t k = use_test ? n1 : n2;
    const long long max_sum = std::accumulate(ranks.begin(), ranks.end(), 0LL);
    std::vector<std::vector<double>> dp(k + 1, std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
    dp[0][0] = 1.0;
    for (long long r : ranks) {
        for (std::size_t m = k; m >= 1; --m) {
            auto& row = dp[m];
            const auto& prev = dp[m - 1];
            for (long long s = max_sum; s >= r; --s) row[static_cast<std::size_t>(s)] += prev[static_cast<std::size_t>(s - r)];
        }
    }

    // Rank sum R of a group of size m maps to doubled U as 2R - m(m+1).
    const long long u2_obs = doubled_u(test, control);
    const long long total_u2 = 2LL * static_cast<long long>(n1 * n2);
    const auto km = static_cast<long long>(k);
    double hit = 0.0;
    double all = 0.0;
    for (long long s = 0; s <= max_sum; ++s) {
        const double count = dp[k][static_cast<std::size_t>(s)];
        if (count == 0.0) continue;
        all += count;
        const long long u2_group = s - km * (km + 1);  // s is already a doubled rank sum
        const long long u2_test = use_test ? u2_group : total_u2 - u2_group;
        if (u2_test <= u2_obs) hit += count;
    }
    return std::clamp(hit / all, 0.0, 1.0);
}

double mann_whitney_normal_p(std::span<const double> test, std::span<const double> control) {
    require_samples(test, control);
    const auto n1 = static_cast<double>(test.size());
    const auto n2 = static_cast<double>(control.size());
    const double n = n1 + n2;

    std::vector<double> pooled(test.begin(), test.end());
    pooled.insert(pooled.end(), control.begin(), control.end());
    std::sort(pooled.begin(), pooled.end());
    double tie_term = 0.0;
    for (std::size_t i = 0; i < pooled.size();) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j] == pooled[i]) ++j;
        const auto t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
    if (!(var > 0.0)) return 1.0;
    const double u = static_cast<double>(doubled_u(test, control)) / 2.0;
    const double z = (u + 0.5 - n1 * n2 / 2.0) / std::sqrt(var);
    return std::clamp(0.5 * std::erfc(-z / std::sqrt(2.0)), 0.0, 1.0);
}

StatsResult mann_whitney(std::span<const double> test, std::span<const double> control) {
    require_samples(test, control);
    StatsResult r;
    r.u_statistic = static_cast<double>(doubled_u(test, control)) / 2.0;
    r.a_measure = vargha_delaney_a(test, control);
    r.exact = test.size() * control.size() <= kExactPairLimit;
    r.p_value = r.exact ? mann_whitney_exact_p(test, control) : mann_whitney_normal_p(test, control);
    return r;
}

}  // namespace homeokit
