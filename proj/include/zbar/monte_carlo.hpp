#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "zbar/exact_engine.hpp"
#include "zbar/measures.hpp"
#include "zbar/random.hpp"
#include "zbar/state_space.hpp"

namespace zbar {

inline constexpr double kTiltClamp = 1.0 - 1e-3;

Word sample_path(const TransitionProfile& profile, std::int64_t start, std::int64_t n, CounterStream& rng);

struct TiltSegment {
    std::int64_t from;  // step indices, step j moves w_j to w_{j+1}
    std::int64_t to;
    double x;
};

// Steps not covered by any segment follow the ambient profile.
class TiltSchedule {
public:
    TiltSchedule() = default;
    explicit TiltSchedule(std::vector<TiltSegment> segments);

    static TiltSchedule constant(double x, std::int64_t n);

    const std::vector<TiltSegment>& segments() const { return segments_; }
    // Tilted up-probability (1 + x) / 2 at a step, if the step is covered.
    std::optional<double> up_prob(std::int64_t step) const;
    // Dense per-step table for steps 1..n-1 (index 0 unused); NaN marks ambient steps.
    std::vector<double> dense(std::int64_t n) const;

private:
    std::vector<TiltSegment> segments_;  // sorted by from
};

struct PathEvent {
    // Called after each new letter with (letter count, position); false kills the path.
    std::function<bool(std::int64_t, std::int64_t)> keep;
    // Final decision on the full word.
    std::function<bool(const Word&)> accept;
};

PathEvent excursion_event(std::int64_t R, int sigma);
PathEvent meander_event(std::int64_t R, int sigma);
PathEvent ball_event(const MeasureZbar& mu, double epsilon);

struct Estimate {
    double mean = 0.0;
    double rel_std_err = 0.0;
    std::int64_t n_samples = 0;
    std::uint64_t seed = 0;
    double ess = 0.0;       // (sum w)^2 / sum w^2 over accepted samples
    std::int64_t hits = 0;  // accepted samples
};

struct WeightedPath {
    Word word;
    double log_weight = 0.0;  // log(ambient / tilted) over the sampled steps
    bool alive = true;
};

WeightedPath sample_tilted(const TransitionProfile& profile, const TiltSchedule& schedule, std::int64_t start,
                           std::int64_t n, CounterStream& rng, const PathEvent* event = nullptr);

inline constexpr std::int64_t kMcBlock = 4096;

Estimate importance_estimate(const TransitionProfile& profile, const PathEvent& event, const TiltSchedule& schedule,
                             std::int64_t start, std::int64_t n, std::int64_t n_samples, std::uint64_t seed);
Estimate importance_estimate_serial(const TransitionProfile& profile, const PathEvent& event,
                                    const TiltSchedule& schedule, std::int64_t start, std::int64_t n,
                                    std::int64_t n_samples, std::uint64_t seed);

struct McRateReport {
    DecayReport report;
    double slope_band = 0.0;
    bool unreliable = false;
    std::vector<Estimate> estimates;
};

McRateReport mc_rate(const TransitionProfile& profile, const std::function<PathEvent(std::int64_t)>& event_family,
                     const std::function<TiltSchedule(std::int64_t)>& schedule_family,
                     const std::vector<std::int64_t>& n_grid, std::int64_t samples_per_n, std::uint64_t seed,
                     std::int64_t start, SlopeMethod method = SlopeMethod::last_difference);

}  // namespace zbar
