#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "zbar/measures.hpp"
#include "zbar/state_space.hpp"

namespace zbar {

inline constexpr int kBallEnumCap = 24;
inline constexpr int kObservableDpCap = 400;

enum class SlopeMethod { last_difference, richardson };
std::string to_string(SlopeMethod m);

struct DecayReport {
    std::vector<std::pair<std::int64_t, double>> points;
    double slope = 0.0;
    SlopeMethod method = SlopeMethod::last_difference;
    double residual = 0.0;
};

// log P_{sigma R}(w in A^sigma throughout, w_n = sigma R); -inf when zero.
double excursion_log_prob(const TransitionProfile& profile, std::int64_t R, int sigma, std::int64_t n);
double excursion_prob(const TransitionProfile& profile, std::int64_t R, int sigma, std::int64_t n);
double meander_log_prob(const TransitionProfile& profile, std::int64_t R, int sigma, std::int64_t n);
double meander_prob(const TransitionProfile& profile, std::int64_t R, int sigma, std::int64_t n);

// One DP pass giving the values at n_min, n_min + step, ..., n_max.
std::vector<std::pair<std::int64_t, double>> excursion_log_series(const TransitionProfile& profile, std::int64_t R,
                                                                  int sigma, std::int64_t n_min, std::int64_t n_max,
                                                                  std::int64_t step);
std::vector<std::pair<std::int64_t, double>> meander_log_series(const TransitionProfile& profile, std::int64_t R,
                                                                int sigma, std::int64_t n_min, std::int64_t n_max,
                                                                std::int64_t step);

std::map<std::int64_t, double> endpoint_distribution(const TransitionProfile& profile, std::int64_t start,
                                                     std::int64_t n);

struct ClassFilter {
    int sigma;
    std::int64_t R;
};

double ball_prob_enum(const TransitionProfile& profile, const MeasureZbar& mu, double epsilon, int n,
                      std::optional<ClassFilter> filter = std::nullopt, std::int64_t start = 0);
// Plain single-threaded enumeration over all 2^(n-1) sign patterns, kept as a reference.
double ball_prob_enum_serial(const TransitionProfile& profile, const MeasureZbar& mu, double epsilon, int n,
                             std::optional<ClassFilter> filter = std::nullopt, std::int64_t start = 0);

struct BlockObservable {
    std::vector<std::pair<std::int64_t, std::int64_t>> blocks;
    bool operator()(std::int64_t x) const {
        for (const auto& [c, d] : blocks)
            if (x >= c && x <= d) return true;
        return false;
    }
};

std::vector<std::pair<std::int64_t, std::int64_t>> counterexample_blocks(int m);
// Largest m for which the recurrence fits in int64.
int counterexample_max_blocks();

// P_0(|l_n(f) - target| < epsilon), with l_n(f) = (1/n) sum_{k=1..n} f(S_k), S_1 = 0.
double observable_ball_log_prob(const TransitionProfile& profile, const BlockObservable& f, double target,
                                double epsilon, int n);
double observable_ball_prob(const TransitionProfile& profile, const BlockObservable& f, double target, double epsilon,
                            int n);

struct StartComparison {
    double lhs;
    double rhs;
    bool holds;
};
StartComparison starting_point_comparison(const TransitionProfile& profile, const MeasureZbar& mu, double epsilon,
                                          int n, std::int64_t m);

DecayReport rate_slope(const std::vector<std::pair<std::int64_t, double>>& points, std::int64_t parity_step,
                       SlopeMethod method = SlopeMethod::last_difference);

}  // namespace zbar
