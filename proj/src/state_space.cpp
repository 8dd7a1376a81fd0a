#include "zbar/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace zbar {

std::string to_string(const PointZbar& x) {
    switch (x.tag) {
    case PointZbar::Tag::minus_infinity: return "-inf";
    case PointZbar::Tag::plus_infinity: return "+inf";
    default: return std::to_string(x.k);
    }
}

double varphi(std::int64_t k) {
    const std::int64_t a = std::min<std::int64_t>(k < 0 ? -k : k, 1074);
    const double t = std::ldexp(1.0, -static_cast<int>(a));
    return k >= 0 ? 1.0 - t : -1.0 + t;
}

double varphi(const PointZbar& x) {
    switch (x.tag) {
    case PointZbar::Tag::minus_infinity: return -1.0;
    case PointZbar::Tag::plus_infinity: return 1.0;
    default: return varphi(x.k);
    }
}

double dist(const PointZbar& h, const PointZbar& k) { return std::abs(varphi(h) - varphi(k)); }

static void check_probability(const std::string& key, double p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream os;
        os << "value " << p << " is not strictly inside (0,1)";
        throw ValidationError(key, os.str());
    }
}

TransitionProfile::TransitionProfile(std::int64_t window_lo, std::int64_t window_hi,
                                     const std::map<std::int64_t, double>& table,
                                     double tail_minus, double tail_plus)
    : lo_(window_lo), hi_(window_hi), tail_minus_(tail_minus), tail_plus_(tail_plus) {
    if (lo_ > 0) throw ValidationError("window_lo", "must be <= 0");
    if (hi_ < 0) throw ValidationError("window_hi", "must be >= 0");
    check_probability("tail_minus", tail_minus);
    check_probability("tail_plus", tail_plus);
    table_.assign(static_cast<std::size_t>(hi_ - lo_ + 1), 0.0);
    for (const auto& [k, p] : table) {
        if (k < lo_ || k > hi_)
            throw ValidationError("table", "key " + std::to_string(k) + " outside the window");
        check_probability("table." + std::to_string(k), p);
        table_[static_cast<std::size_t>(k - lo_)] = p;
    }
    for (std::int64_t k = lo_; k <= hi_; ++k)
        if (table_[static_cast<std::size_t>(k - lo_)] == 0.0)
            throw ValidationError("table", "missing key " + std::to_string(k));
}

TransitionProfile TransitionProfile::homogeneous(double p) { return {0, 0, {{0, p}}, p, p}; }

TransitionProfile TransitionProfile::two_sided(double p_minus, double p_plus) {
    return {0, 0, {{0, p_plus}}, p_minus, p_plus};
}

std::map<std::int64_t, double> TransitionProfile::table() const {
    std::map<std::int64_t, double> out;
    for (std::int64_t k = lo_; k <= hi_; ++k) out[k] = table_[static_cast<std::size_t>(k - lo_)];
    return out;
}

double step_prob(const TransitionProfile& profile, std::int64_t x, std::int64_t y) {
    if (y == x + 1) return profile.p(x);
    if (y == x - 1) return 1.0 - profile.p(x);
    return 0.0;
}

std::int64_t r_zbar(double epsilon) {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon", "must be positive");
    return static_cast<std::int64_t>(std::ceil(std::log2(1.0 / epsilon))) + 1;
}

double tail_gap_at(const TransitionProfile& profile, std::int64_t R) {
    const double pp = profile.tail_plus(), pm = profile.tail_minus();
    const double mp = std::min(pp, 1.0 - pp), mm = std::min(pm, 1.0 - pm);
    double sup_plus = 0.0, sup_minus = 0.0;
    for (std::int64_t k = std::max(R, profile.window_lo()); k <= profile.window_hi(); ++k)
        sup_plus = std::max(sup_plus, std::abs(profile.p(k) - pp));
    for (std::int64_t k = profile.window_lo(); k <= std::min(-R, profile.window_hi()); ++k)
        sup_minus = std::max(sup_minus, std::abs(profile.p(k) - pm));
    return std::max(sup_plus / mp, sup_minus / mm);
}

double tail_gap(const TransitionProfile& profile, double epsilon) {
    return tail_gap_at(profile, r_zbar(epsilon));
}

EpsilonStar epsilon_star(const TransitionProfile& profile) {
    // G is nonincreasing in R, and eps < 2^(2-R0) exactly when r_zbar(eps) >= R0.
    const std::int64_t K = std::max(-profile.window_lo(), profile.window_hi()) + 1;
    if (tail_gap_at(profile, -K) < 1.0) return {true, 0.0};
    std::int64_t R0 = -K;
    while (tail_gap_at(profile, R0) >= 1.0) ++R0;
    return {false, std::ldexp(1.0, static_cast<int>(2 - R0))};
}

std::string to_string(const EpsilonStar& e) {
    if (e.unbounded) return "unbounded";
    std::ostringstream os;
    os.precision(17);
    os << e.value;
    return os.str();
}

double comparison_slack_from_gap(double G) {
    if (!(G < 1.0) || G < 0.0) throw DomainError("comparison slack requires 0 <= G < 1");
    return std::max(std::abs(std::log(1.0 - G)), std::log1p(G));
}

double comparison_slack(const TransitionProfile& profile, double epsilon) {
    return comparison_slack_from_gap(tail_gap(profile, epsilon));
}

double p_star(const TransitionProfile& profile) {
    auto m = [](double p) { return std::min(p, 1.0 - p); };
    double out = std::min(m(profile.tail_minus()), m(profile.tail_plus()));
    for (std::int64_t k = profile.window_lo(); k <= profile.window_hi(); ++k) out = std::min(out, m(profile.p(k)));
    return out;
}

int region(const PointZbar& x, std::int64_t R) {
    switch (x.tag) {
    case PointZbar::Tag::minus_infinity: return -1;
    case PointZbar::Tag::plus_infinity: return 1;
    default: return region(x.k, R);
    }
}

}  // namespace zbar
