#include "zbar/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <omp.h>

namespace zbar {

Word sample_path(const TransitionProfile& profile, std::int64_t start, std::int64_t n, CounterStream& rng) {
    if (n < 1) throw ValidationError("n", "must be >= 1");
    Word w(static_cast<std::size_t>(n));
    w[0] = start;
    for (std::size_t j = 1; j < w.size(); ++j) w[j] = w[j - 1] + (rng.uniform() < profile.p(w[j - 1]) ? 1 : -1);
    return w;
}

TiltSchedule::TiltSchedule(std::vector<TiltSegment> segments) : segments_(std::move(segments)) {
    std::sort(segments_.begin(), segments_.end(), [](const auto& a, const auto& b) { return a.from < b.from; });
    for (std::size_t i = 0; i < segments_.size(); ++i) {
        auto& s = segments_[i];
        if (s.from < 1 || s.to < s.from) throw ValidationError("from", "segment needs 1 <= from <= to");
        if (!(std::abs(s.x) <= 1.0)) throw ValidationError("x", "tilt target must lie in [-1, 1]");
        s.x = std::clamp(s.x, -kTiltClamp, kTiltClamp);
        if (i > 0 && s.from <= segments_[i - 1].to) throw ValidationError("from", "segments overlap");
    }
}

TiltSchedule TiltSchedule::constant(double x, std::int64_t n) {
    if (n < 2) return TiltSchedule{};
    return TiltSchedule({{1, n - 1, x}});
}

std::optional<double> TiltSchedule::up_prob(std::int64_t step) const {
    auto it = std::upper_bound(segments_.begin(), segments_.end(), step,
                               [](std::int64_t v, const TiltSegment& s) { return v < s.from; });
    if (it == segments_.begin()) return std::nullopt;
    --it;
    if (step > it->to) return std::nullopt;
    return (1.0 + it->x) / 2.0;
}

std::vector<double> TiltSchedule::dense(std::int64_t n) const {
    std::vector<double> out(static_cast<std::size_t>(std::max<std::int64_t>(n, 1)),
                            std::numeric_limits<double>::quiet_NaN());
    for (const auto& s : segments_)
        for (std::int64_t j = s.from; j <= std::min(s.to, n - 1); ++j)
            out[static_cast<std::size_t>(j)] = (1.0 + s.x) / 2.0;
    return out;
}

PathEvent excursion_event(std::int64_t R, int sigma) {
    return {[R, sigma](std::int64_t, std::int64_t pos) { return region(pos, R) == sigma; },
            [R, sigma](const Word& w) { return w.back() == sigma * R; }};
}

PathEvent meander_event(std::int64_t R, int sigma) {
    return {[R, sigma](std::int64_t, std::int64_t pos) { return region(pos, R) == sigma; },
            [](const Word&) { return true; }};
}

PathEvent ball_event(const MeasureZbar& mu, double epsilon) {
    return {nullptr, [mu, epsilon](const Word& w) { return in_ball(empirical_measure(w), mu, epsilon); }};
}

namespace {

WeightedPath sample_dense(const TransitionProfile& profile, const std::vector<double>& tilt, std::int64_t start,
                          std::int64_t n, CounterStream& rng, const PathEvent* event) {
    WeightedPath out;
    out.word.reserve(static_cast<std::size_t>(n));
    out.word.push_back(start);
    if (event && event->keep && !event->keep(1, start)) {
        out.alive = false;
        return out;
    }
    std::int64_t pos = start;
    for (std::int64_t j = 1; j < n; ++j) {
        const double p = profile.p(pos);
        const double q = tilt[static_cast<std::size_t>(j)];
        const double u = rng.uniform();
        bool up;
        if (std::isnan(q)) {
            up = u < p;
        } else {
            up = u < q;
            out.log_weight += up ? std::log(p / q) : std::log((1.0 - p) / (1.0 - q));
        }
        pos += up ? 1 : -1;
        out.word.push_back(pos);
        if (event && event->keep && !event->keep(j + 1, pos)) {
            out.alive = false;
            return out;
        }
    }
    return out;
}

struct Moments {
    double s1 = 0.0;
    double s2 = 0.0;
    std::int64_t hits = 0;
};

Moments block_moments(const TransitionProfile& profile, const PathEvent& event, const std::vector<double>& tilt,
                      std::int64_t start, std::int64_t n, std::int64_t first, std::int64_t last, std::uint64_t seed) {
    Moments m;
    for (std::int64_t i = first; i < last; ++i) {
        CounterStream rng(seed, static_cast<std::uint64_t>(i));
        auto p = sample_dense(profile, tilt, start, n, rng, &event);
        if (!p.alive || (event.accept && !event.accept(p.word))) continue;
        const double w = std::exp(p.log_weight);
        m.s1 += w;
        m.s2 += w * w;
        ++m.hits;
    }
    return m;
}

Moments pairwise(const std::vector<Moments>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo == 1) return v[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    const Moments a = pairwise(v, lo, mid), b = pairwise(v, mid, hi);
    return {a.s1 + b.s1, a.s2 + b.s2, a.hits + b.hits};
}

Estimate finish(const std::vector<Moments>& blocks, std::int64_t n_samples, std::uint64_t seed) {
    const Moments m = pairwise(blocks, 0, blocks.size());
    if (!(m.s1 > 0.0)) throw DomainError("zero effective samples: no sample carried positive weight");
    Estimate e;
    e.n_samples = n_samples;
    e.seed = seed;
    e.hits = m.hits;
    const double N = static_cast<double>(n_samples);
    e.mean = m.s1 / N;
    const double var = N > 1 ? std::max(0.0, (m.s2 / N - e.mean * e.mean) * N / (N - 1.0)) : 0.0;
    e.rel_std_err = std::sqrt(var / N) / e.mean;
    e.ess = m.s1 * m.s1 / m.s2;
    return e;
}

void check_mc_args(std::int64_t n, std::int64_t n_samples) {
    if (n < 1) throw ValidationError("n", "must be >= 1");
    if (n_samples < 1) throw ValidationError("samples", "must be >= 1");
}

}  // namespace

WeightedPath sample_tilted(const TransitionProfile& profile, const TiltSchedule& schedule, std::int64_t start,
                           std::int64_t n, CounterStream& rng, const PathEvent* event) {
    if (n < 1) throw ValidationError("n", "must be >= 1");
    return sample_dense(profile, schedule.dense(n), start, n, rng, event);
}

Estimate importance_estimate(const TransitionProfile& profile, const PathEvent& event, const TiltSchedule& schedule,
                             std::int64_t start, std::int64_t n, std::int64_t n_samples, std::uint64_t seed) {
    check_mc_args(n, n_samples);
    const auto tilt = schedule.dense(n);
    const std::int64_t nb = (n_samples + kMcBlock - 1) / kMcBlock;
    std::vector<Moments> blocks(static_cast<std::size_t>(nb));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t b = 0; b < nb; ++b)
        blocks[static_cast<std::size_t>(b)] = block_moments(profile, event, tilt, start, n, b * kMcBlock,
                                                            std::min(n_samples, (b + 1) * kMcBlock), seed);
    return finish(blocks, n_samples, seed);
}

Estimate importance_estimate_serial(const TransitionProfile& profile, const PathEvent& event,
                                    const TiltSchedule& schedule, std::int64_t start, std::int64_t n,
                                    std::int64_t n_samples, std::uint64_t seed) {
    check_mc_args(n, n_samples);
    const auto tilt = schedule.dense(n);
    const std::int64_t nb = (n_samples + kMcBlock - 1) / kMcBlock;
    std::vector<Moments> blocks;
    for (std::int64_t b = 0; b < nb; ++b)
        blocks.push_back(
            block_moments(profile, event, tilt, start, n, b * kMcBlock, std::min(n_samples, (b + 1) * kMcBlock), seed));
    return finish(blocks, n_samples, seed);
}

McRateReport mc_rate(const TransitionProfile& profile, const std::function<PathEvent(std::int64_t)>& event_family,
                     const std::function<TiltSchedule(std::int64_t)>& schedule_family,
                     const std::vector<std::int64_t>& n_grid, std::int64_t samples_per_n, std::uint64_t seed,
                     std::int64_t start, SlopeMethod method) {
    if (n_grid.size() < 3) throw ValidationError("n_grid", "at least 3 grid points are required");
    const std::int64_t step = n_grid[1] - n_grid[0];
    McRateReport out;
    std::vector<std::pair<std::int64_t, double>> pts;
    for (std::int64_t n : n_grid) {
        auto e = importance_estimate(profile, event_family(n), schedule_family(n), start, n, samples_per_n, seed);
        if (e.rel_std_err > 1.0) out.unreliable = true;
        pts.emplace_back(n, std::log(e.mean));
        out.estimates.push_back(e);
    }
    out.report = rate_slope(pts, step, method);
    const double r1 = out.estimates.back().rel_std_err, r2 = out.estimates[out.estimates.size() - 2].rel_std_err;
    out.slope_band = std::sqrt(r1 * r1 + r2 * r2) / static_cast<double>(step);
    return out;
}

}  // namespace zbar
