#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zbar/exact_engine.hpp"
#include "zbar/measures.hpp"
#include "zbar/random.hpp"
#include "zbar/state_space.hpp"
#include "zbar/trajectories.hpp"

namespace zbar {

struct SuiteResult {
    std::string name;
    std::int64_t instances = 0;
    std::int64_t checks = 0;
    std::int64_t failures = 0;
    std::vector<std::string> messages;  // first few failures
    bool passed() const { return instances > 0 && failures == 0; }
};

// A word near a measure, with the ball hypotheses of the occupation bounds verified.
struct BallInstance {
    TransitionProfile profile;
    MeasureZbar mu;
    double epsilon;
    std::int64_t R;
    Word w;
};

TransitionProfile random_window_profile(CounterStream& rng);

// Retries internally; nullopt only when no valid instance was found in the attempt budget.
std::optional<BallInstance> make_ball_instance(CounterStream& rng, double epsilon, bool central_only);

struct TypicalInstance {
    Construction c;
    int sigma;
    TypicalComponents parts;
};

std::optional<TypicalInstance> make_typical_instance(CounterStream& rng, double epsilon);

SuiteResult suite_occupation_bounds(std::int64_t instances, std::uint64_t seed);
SuiteResult suite_endpoint_bound(std::int64_t instances, std::uint64_t seed);
SuiteResult suite_restricted_measure(std::int64_t instances, std::uint64_t seed);
SuiteResult suite_connector_length(std::int64_t instances, std::uint64_t seed);
SuiteResult suite_typical_injectivity();
SuiteResult suite_typical_membership(std::int64_t instances, std::uint64_t seed);
SuiteResult suite_typical_lower_bound(std::int64_t instances, std::uint64_t seed);
SuiteResult suite_cut_count(std::int64_t instances, std::uint64_t seed);
SuiteResult suite_stitched_membership(std::int64_t instances, std::uint64_t seed);
SuiteResult suite_stitch_upper_bound(std::int64_t instances, std::uint64_t seed);
SuiteResult suite_cut_roundtrip(int exhaustive_max_n, std::int64_t samples, std::int64_t sample_n, std::uint64_t seed);

// Named groups: "occupation", "typical", "stitching", "all".
std::vector<SuiteResult> run_lemma_suites(const std::string& group, std::int64_t instances, std::uint64_t seed);

struct CheckResult {
    std::string name;
    double measured = 0.0;
    double predicted = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string detail;
};

CheckResult verify_excursion(double p, std::int64_t R, std::int64_t n_max);
CheckResult verify_meander(double p, std::int64_t R, std::int64_t n_max);
// Class partition of the ball probability on enumerated instances.
CheckResult verify_ball(std::int64_t instances, int n_max, std::uint64_t seed);
CheckResult verify_counterexample(double p_bar, double epsilon);

}  // namespace zbar
