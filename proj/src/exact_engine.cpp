#include "zbar/exact_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <omp.h>

namespace zbar {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kTiny = 1e-280;

void check_sigma(int sigma) {
    if (sigma != 1 && sigma != -1) throw ValidationError("sigma", "must be -1 or +1");
}

// Forward DP over heights h >= 0 above sigma R, killed on leaving A^sigma.
class RegionDp {
public:
    RegionDp(const TransitionProfile& profile, std::int64_t R, int sigma, std::int64_t n_max)
        : cur_(static_cast<std::size_t>(n_max + 1), 0.0), nxt_(cur_.size(), 0.0), away_(cur_.size()) {
        if (R < 1) throw ValidationError("R", "must be >= 1");
        check_sigma(sigma);
        for (std::size_t h = 0; h < away_.size(); ++h) {
            const std::int64_t x = sigma * (R + static_cast<std::int64_t>(h));
            away_[h] = sigma > 0 ? profile.p(x) : 1.0 - profile.p(x);
        }
        cur_[0] = 1.0;
    }

    // Advances from n letters to n + 1 letters.
    void advance() {
        ++t_;
        const std::size_t top = std::min<std::size_t>(static_cast<std::size_t>(t_), cur_.size() - 1);
        std::fill(nxt_.begin(), nxt_.begin() + static_cast<std::ptrdiff_t>(top + 1), 0.0);
        double mx = 0.0;
        for (std::size_t h = 0; h < top; ++h) {
            const double m = cur_[h];
            if (m == 0.0) continue;
            nxt_[h + 1] += m * away_[h];
            if (h > 0) nxt_[h - 1] += m * (1.0 - away_[h]);
        }
        for (std::size_t h = 0; h <= top; ++h) mx = std::max(mx, nxt_[h]);
        cur_.swap(nxt_);
        if (mx > 0.0 && mx < kTiny) {
            for (std::size_t h = 0; h <= top; ++h) cur_[h] /= mx;
            log_scale_ += std::log(mx);
        }
    }

    std::int64_t letters() const { return t_ + 1; }
    double log_at_base() const { return cur_[0] > 0.0 ? std::log(cur_[0]) + log_scale_ : kNegInf; }
    double log_total() const {
        double s = 0.0;
        for (double v : cur_) s += v;
        return s > 0.0 ? std::log(s) + log_scale_ : kNegInf;
    }

private:
    std::vector<double> cur_, nxt_, away_;
    double log_scale_ = 0.0;
    std::int64_t t_ = 0;
};

template <class Extract>
std::vector<std::pair<std::int64_t, double>> series(const TransitionProfile& profile, std::int64_t R, int sigma,
                                                    std::int64_t n_min, std::int64_t n_max, std::int64_t step,
                                                    Extract extract) {
    if (n_min < 1 || n_max < n_min) throw ValidationError("n_min", "need 1 <= n_min <= n_max");
    if (step < 1) throw ValidationError("step", "must be >= 1");
    RegionDp dp(profile, R, sigma, n_max);
    std::vector<std::pair<std::int64_t, double>> out;
    for (std::int64_t n = n_min; n <= n_max; n += step) {
        while (dp.letters() < n) dp.advance();
        out.emplace_back(n, extract(dp));
    }
    return out;
}

}  // namespace

std::string to_string(SlopeMethod m) { return m == SlopeMethod::richardson ? "richardson" : "last_difference"; }

double excursion_log_prob(const TransitionProfile& profile, std::int64_t R, int sigma, std::int64_t n) {
    if (n < 1) throw ValidationError("n", "must be >= 1");
    if (n % 2 == 0) {
        check_sigma(sigma);
        return kNegInf;
    }
    return series(profile, R, sigma, n, n, 1, [](const RegionDp& d) { return d.log_at_base(); }).front().second;
}

double excursion_prob(const TransitionProfile& profile, std::int64_t R, int sigma, std::int64_t n) {
    return std::exp(excursion_log_prob(profile, R, sigma, n));
}

double meander_log_prob(const TransitionProfile& profile, std::int64_t R, int sigma, std::int64_t n) {
    if (n < 1) throw ValidationError("n", "must be >= 1");
    return series(profile, R, sigma, n, n, 1, [](const RegionDp& d) { return d.log_total(); }).front().second;
}

double meander_prob(const TransitionProfile& profile, std::int64_t R, int sigma, std::int64_t n) {
    return std::exp(meander_log_prob(profile, R, sigma, n));
}

std::vector<std::pair<std::int64_t, double>> excursion_log_series(const TransitionProfile& profile, std::int64_t R,
                                                                  int sigma, std::int64_t n_min, std::int64_t n_max,
                                                                  std::int64_t step) {
    return series(profile, R, sigma, n_min, n_max, step, [](const RegionDp& d) { return d.log_at_base(); });
}

std::vector<std::pair<std::int64_t, double>> meander_log_series(const TransitionProfile& profile, std::int64_t R,
                                                                int sigma, std::int64_t n_min, std::int64_t n_max,
                                                                std::int64_t step) {
    return series(profile, R, sigma, n_min, n_max, step, [](const RegionDp& d) { return d.log_total(); });
}

std::map<std::int64_t, double> endpoint_distribution(const TransitionProfile& profile, std::int64_t start,
                                                     std::int64_t n) {
    if (n < 1) throw ValidationError("n", "must be >= 1");
    const std::int64_t lo = start - (n - 1);
    std::vector<double> cur(static_cast<std::size_t>(2 * n - 1), 0.0), nxt(cur.size());
    cur[static_cast<std::size_t>(start - lo)] = 1.0;
    for (std::int64_t t = 1; t < n; ++t) {
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (cur[i] == 0.0) continue;
            const double p = profile.p(lo + static_cast<std::int64_t>(i));
            nxt[i + 1] += cur[i] * p;
            nxt[i - 1] += cur[i] * (1.0 - p);
        }
        cur.swap(nxt);
    }
    std::map<std::int64_t, double> out;
    for (std::size_t i = 0; i < cur.size(); ++i)
        if (cur[i] > 0.0) out[lo + static_cast<std::int64_t>(i)] = cur[i];
    return out;
}

namespace {

struct BallSearch {
    const TransitionProfile& profile;
    const MeasureZbar& mu;
    double epsilon;
    int n;
    std::optional<ClassFilter> filter;
    std::int64_t offset;
    std::vector<std::int64_t> counts;

    double leaf(std::int64_t pos) {
        if (filter && region(pos, filter->R) != filter->sigma) return 0.0;
        return within_radius(kr_distance_counts(counts, offset, n, mu), epsilon) ? 1.0 : 0.0;
    }

    double dfs(std::int64_t pos, int letters) {
        if (letters == n) return leaf(pos);
        double s = 0.0;
        const double p = profile.p(pos);
        for (int d : {1, -1}) {
            const std::int64_t y = pos + d;
            auto& c = counts[static_cast<std::size_t>(y - offset)];
            ++c;
            const double sub = dfs(y, letters + 1);
            --c;
            if (sub != 0.0) s += (d > 0 ? p : 1.0 - p) * sub;
        }
        return s;
    }
};

void check_ball_args(int n, double epsilon) {
    if (n < 1 || n > kBallEnumCap) throw ValidationError("n", "ball enumeration requires 1 <= n <= 24");
    if (!(epsilon > 0.0)) throw ValidationError("epsilon", "must be positive");
}

}  // namespace

double ball_prob_enum(const TransitionProfile& profile, const MeasureZbar& mu, double epsilon, int n,
                      std::optional<ClassFilter> filter, std::int64_t start) {
    check_ball_args(n, epsilon);
    const int depth = std::min(n - 1, 12);
    const std::int64_t prefixes = std::int64_t{1} << depth;
    std::vector<double> part(static_cast<std::size_t>(prefixes), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::int64_t b = 0; b < prefixes; ++b) {
        BallSearch s{profile, mu, epsilon, n, filter, start - (n - 1),
                     std::vector<std::int64_t>(static_cast<std::size_t>(2 * n - 1), 0)};
        std::int64_t pos = start;
        double pr = 1.0;
        ++s.counts[static_cast<std::size_t>(pos - s.offset)];
        for (int j = 0; j < depth; ++j) {
            const bool up = (b >> j) & 1;
            pr *= up ? profile.p(pos) : 1.0 - profile.p(pos);
            pos += up ? 1 : -1;
            ++s.counts[static_cast<std::size_t>(pos - s.offset)];
        }
        part[static_cast<std::size_t>(b)] = pr * s.dfs(pos, depth + 1);
    }
    double total = 0.0;
    for (double v : part) total += v;
    return total;
}

double ball_prob_enum_serial(const TransitionProfile& profile, const MeasureZbar& mu, double epsilon, int n,
                             std::optional<ClassFilter> filter, std::int64_t start) {
    check_ball_args(n, epsilon);
    double total = 0.0;
    Word w(static_cast<std::size_t>(n));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
        w[0] = start;
        double pr = 1.0;
        for (int j = 1; j < n; ++j) {
            const bool up = (mask >> (j - 1)) & 1;
            pr *= step_prob(profile, w[j - 1], w[j - 1] + (up ? 1 : -1));
            w[j] = w[j - 1] + (up ? 1 : -1);
        }
        if (filter && region(w.back(), filter->R) != filter->sigma) continue;
        if (in_ball(empirical_measure(w), mu, epsilon)) total += pr;
    }
    return total;
}

std::vector<std::pair<std::int64_t, std::int64_t>> counterexample_blocks(int m) {
    if (m < 1) throw ValidationError("m", "must be >= 1");
    std::vector<std::pair<std::int64_t, std::int64_t>> out;
    std::int64_t c = 1;
    for (int k = 1; k <= m; ++k) {
        std::int64_t d = 0;
        if (__builtin_mul_overflow(c, static_cast<std::int64_t>(k + 1), &d))
            throw DomainError("block recurrence overflows 64-bit integers at m = " + std::to_string(k));
        out.emplace_back(c, d);
        if (k < m && __builtin_mul_overflow(d, d, &c))
            throw DomainError("block recurrence overflows 64-bit integers at m = " + std::to_string(k + 1));
    }
    return out;
}

int counterexample_max_blocks() {
    int m = 1;
    try {
        while (true) {
            counterexample_blocks(m + 1);
            ++m;
        }
    } catch (const DomainError&) {
    }
    return m;
}

double observable_ball_log_prob(const TransitionProfile& profile, const BlockObservable& f, double target,
                                double epsilon, int n) {
    if (n < 1 || n > kObservableDpCap) throw ValidationError("n", "observable DP requires 1 <= n <= 400");
    if (!(epsilon > 0.0)) throw ValidationError("epsilon", "must be positive");
    const std::int64_t lo = -(n - 1);
    const std::size_t P = static_cast<std::size_t>(2 * n - 1), C = static_cast<std::size_t>(n + 1);
    std::vector<double> cur(P * C, 0.0), nxt(P * C, 0.0);
    std::vector<char> inf(P);
    for (std::size_t i = 0; i < P; ++i) inf[i] = f(lo + static_cast<std::int64_t>(i)) ? 1 : 0;
    const std::size_t i0 = static_cast<std::size_t>(-lo);
    cur[i0 * C + (inf[i0] ? 1 : 0)] = 1.0;
    double log_scale = 0.0;
    for (int t = 1; t < n; ++t) {
        // After t letters positions lie in [-(t-1), t-1] and counts in [0, t].
        const std::size_t ilo = static_cast<std::size_t>(-lo - (t - 1)), ihi = static_cast<std::size_t>(-lo + (t - 1));
        const std::size_t cmax = static_cast<std::size_t>(t);
        for (std::size_t i = ilo - 1; i <= ihi + 1; ++i)
            std::fill(nxt.begin() + static_cast<std::ptrdiff_t>(i * C),
                      nxt.begin() + static_cast<std::ptrdiff_t>(i * C + cmax + 2), 0.0);
        for (std::size_t i = ilo; i <= ihi; ++i) {
            const double p = profile.p(lo + static_cast<std::int64_t>(i));
            const double* row = &cur[i * C];
            double* up = &nxt[(i + 1) * C + (inf[i + 1] ? 1 : 0)];
            double* dn = &nxt[(i - 1) * C + (inf[i - 1] ? 1 : 0)];
            for (std::size_t c = 0; c <= cmax; ++c) {
                const double m = row[c];
                if (m == 0.0) continue;
                up[c] += m * p;
                dn[c] += m * (1.0 - p);
            }
        }
        cur.swap(nxt);
        double mx = 0.0;
        for (std::size_t i = ilo - 1; i <= ihi + 1; ++i)
            for (std::size_t c = 0; c <= cmax + 1; ++c) mx = std::max(mx, cur[i * C + c]);
        if (mx > 0.0 && mx < kTiny) {
            for (auto& v : cur) v /= mx;
            log_scale += std::log(mx);
        }
    }
    double s = 0.0;
    for (std::size_t c = 0; c < C; ++c) {
        if (!(std::abs(static_cast<double>(c) / n - target) < epsilon)) continue;
        for (std::size_t i = 0; i < P; ++i) s += cur[i * C + c];
    }
    return s > 0.0 ? std::log(s) + log_scale : kNegInf;
}

double observable_ball_prob(const TransitionProfile& profile, const BlockObservable& f, double target, double epsilon,
                            int n) {
    return std::exp(observable_ball_log_prob(profile, f, target, epsilon, n));
}

StartComparison starting_point_comparison(const TransitionProfile& profile, const MeasureZbar& mu, double epsilon,
                                          int n, std::int64_t m) {
    const std::int64_t am = m < 0 ? -m : m;
    if (am >= n) throw ValidationError("m", "|m| must be smaller than n");
    const double lhs = ball_prob_enum(profile, mu, epsilon, n, std::nullopt, m);
    const double rhs = std::pow(p_star(profile), static_cast<double>(am)) *
                       ball_prob_enum(profile, mu, epsilon / 2.0, n - static_cast<int>(am), std::nullopt, 0);
    return {lhs, rhs, lhs >= rhs};
}

DecayReport rate_slope(const std::vector<std::pair<std::int64_t, double>>& points, std::int64_t parity_step,
                       SlopeMethod method) {
    if (points.size() < 3) throw ValidationError("points", "at least 3 points are required");
    if (parity_step < 1) throw ValidationError("parity_step", "must be >= 1");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i].first - points[i - 1].first != parity_step)
            throw ValidationError("points", "n values must advance by the common step");
    for (const auto& pt : points)
        if (!std::isfinite(pt.second)) throw ValidationError("points", "log-probabilities must be finite");

    DecayReport r;
    r.points = points;
    r.method = method;
    const std::size_t k = std::min<std::size_t>(5, points.size());
    const std::size_t first = points.size() - k;
    const double corr = method == SlopeMethod::richardson ? 1.5 : 0.0;
    // Least squares of log_prob + corr * log n = a + b n on the last k points.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::vector<double> xs, ys;
    for (std::size_t i = first; i < points.size(); ++i) {
        const double x = static_cast<double>(points[i].first);
        const double y = points[i].second + corr * std::log(x);
        xs.push_back(x);
        ys.push_back(y);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double kk = static_cast<double>(k);
    const double b = (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
    const double a = (sy - b * sx) / kk;
    double ss = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) ss += (ys[i] - a - b * xs[i]) * (ys[i] - a - b * xs[i]);
    r.residual = std::sqrt(ss / kk);
    if (method == SlopeMethod::richardson) {
        r.slope = b;
    } else {
        const auto& last = points.back();
        const auto& prev = points[points.size() - 2];
        r.slope = (last.second - prev.second) / static_cast<double>(last.first - prev.first);
    }
    return r;
}

}  // namespace zbar
