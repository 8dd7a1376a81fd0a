#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace zbar {

// Raised for malformed inputs; key() names the offending field.
class ValidationError : public std::invalid_argument {
public:
    ValidationError(std::string key, const std::string& what)
        : std::invalid_argument(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

// Raised when an operation is undefined for otherwise valid inputs.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct PointZbar {
    enum class Tag : std::uint8_t { minus_infinity, finite, plus_infinity };

    Tag tag = Tag::finite;
    std::int64_t k = 0;  // zero unless finite, so the defaulted order is the natural one

    static PointZbar finite(std::int64_t k) { return {Tag::finite, k}; }
    static PointZbar minus_infinity() { return {Tag::minus_infinity, 0}; }
    static PointZbar plus_infinity() { return {Tag::plus_infinity, 0}; }

    bool is_finite() const { return tag == Tag::finite; }

    auto operator<=>(const PointZbar&) const = default;
};

std::string to_string(const PointZbar& x);

double varphi(const PointZbar& x);
double varphi(std::int64_t k);
double dist(const PointZbar& h, const PointZbar& k);

class TransitionProfile {
public:
    TransitionProfile(std::int64_t window_lo, std::int64_t window_hi,
                      const std::map<std::int64_t, double>& table,
                      double tail_minus, double tail_plus);

    static TransitionProfile homogeneous(double p);
    // p(k) = p_plus for k >= 0 and p_minus for k < 0.
    static TransitionProfile two_sided(double p_minus, double p_plus);

    double p(std::int64_t k) const {
        if (k < lo_) return tail_minus_;
        if (k > hi_) return tail_plus_;
        return table_[static_cast<std::size_t>(k - lo_)];
    }

    std::int64_t window_lo() const { return lo_; }
    std::int64_t window_hi() const { return hi_; }
    double tail_minus() const { return tail_minus_; }
    double tail_plus() const { return tail_plus_; }
    double tail(int sigma) const { return sigma < 0 ? tail_minus_ : tail_plus_; }
    std::map<std::int64_t, double> table() const;

private:
    std::int64_t lo_;
    std::int64_t hi_;
    std::vector<double> table_;
    double tail_minus_;
    double tail_plus_;
};

double step_prob(const TransitionProfile& profile, std::int64_t x, std::int64_t y);

std::int64_t r_zbar(double epsilon);

// G as a function of the threshold R directly; tail_gap(eps) = tail_gap_at(r_zbar(eps)).
double tail_gap_at(const TransitionProfile& profile, std::int64_t R);
double tail_gap(const TransitionProfile& profile, double epsilon);

struct EpsilonStar {
    bool unbounded = false;
    double value = 0.0;  // meaningful only when !unbounded
};
EpsilonStar epsilon_star(const TransitionProfile& profile);
std::string to_string(const EpsilonStar& e);

double comparison_slack(const TransitionProfile& profile, double epsilon);
double comparison_slack_from_gap(double G);

double p_star(const TransitionProfile& profile);

// Regions A^-_R = (-inf,-R], A^0_R = [-R+1,R-1], A^+_R = [R,inf); returns -1, 0, +1.
inline int region(std::int64_t k, std::int64_t R) {
    if (k <= -R) return -1;
    if (k >= R) return 1;
    return 0;
}
int region(const PointZbar& x, std::int64_t R);

}  // namespace zbar
