#include "zbar/suites.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>
#include <omp.h>

#include "zbar/monte_carlo.hpp"
#include "zbar/rate_functions.hpp"

namespace zbar {

namespace {

constexpr int kAttempts = 400;
constexpr std::size_t kMaxMessages = 8;

double unif(CounterStream& rng) { return rng.uniform(); }

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

struct Outcome {
    bool counted = true;
    std::int64_t checks = 0;
    std::vector<std::string> failures;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok) failures.push_back(what);
    }
};

// Runs body(i, outcome) for i in [0, count) in parallel and merges in index order.
SuiteResult run_parallel(const std::string& name, std::int64_t count,
                         const std::function<void(std::int64_t, Outcome&)>& body) {
    std::vector<Outcome> out(static_cast<std::size_t>(std::max<std::int64_t>(count, 0)));
#pragma omp parallel for schedule(dynamic, 4)
    for (std::int64_t i = 0; i < count; ++i) {
        auto& o = out[static_cast<std::size_t>(i)];
        try {
            body(i, o);
        } catch (const std::exception& e) {
            o.failures.push_back(std::string("exception: ") + e.what());
        }
    }
    SuiteResult r;
    r.name = name;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i].counted) ++r.instances;
        r.checks += out[i].checks;
        r.failures += static_cast<std::int64_t>(out[i].failures.size());
        for (const auto& f : out[i].failures)
            if (r.messages.size() < kMaxMessages) r.messages.push_back("instance " + std::to_string(i) + ": " + f);
    }
    return r;
}

std::uint64_t mix(std::uint64_t seed, std::uint64_t tag) { return splitmix64(seed ^ (tag * 0x9e3779b97f4a7c15ULL)); }

double epsilon_for(std::int64_t i) {
    static constexpr double e[] = {0.1, 0.05, 0.02};
    return e[i % 3];
}

MeasureZbar central_measure(const CentralMeasure& m) { return {0.0, 0.0, m}; }

// Measure obtained from w by sending letters at |k| >= B to the matching infinity.
MeasureZbar lift_word(const Word& w, std::int64_t B, CounterStream& rng, double jitter) {
    std::int64_t cm = 0, cp = 0;
    std::map<std::int64_t, double> central;
    for (auto x : w) {
        if (x >= B) ++cp;
        else if (x <= -B) ++cm;
        else central[x] += 1.0;
    }
    const double n = static_cast<double>(w.size());
    for (auto& [k, v] : central) v /= n;
    if (central.size() >= 2 && jitter > 0.0) {
        auto a = central.begin(), b = central.begin();
        std::advance(a, static_cast<std::ptrdiff_t>(rng() % central.size()));
        std::advance(b, static_cast<std::ptrdiff_t>(rng() % central.size()));
        if (a != b) {
            const double d = std::min(jitter * unif(rng), a->second / 2.0);
            a->second -= d;
            b->second += d;
        }
    }
    return {static_cast<double>(cm) / n, static_cast<double>(cp) / n, std::move(central)};
}

}  // namespace

TransitionProfile random_window_profile(CounterStream& rng) {
    std::map<std::int64_t, double> table;
    for (std::int64_t k = -3; k <= 3; ++k) table[k] = 0.2 + 0.6 * unif(rng);
    return {-3, 3, table, 0.55 + 0.3 * unif(rng), 0.15 + 0.3 * unif(rng)};
}

std::optional<BallInstance> make_ball_instance(CounterStream& rng, double epsilon, bool central_only) {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        TransitionProfile profile = random_window_profile(rng);
        const std::int64_t R = r_zbar(epsilon) + 1 + static_cast<std::int64_t>(rng() & 1);
        const std::int64_t B = R + static_cast<std::int64_t>(std::ceil(std::log2(1.0 / epsilon))) + 4;
        const double radius = std::ldexp(epsilon, -static_cast<int>(R));

        Word w{0};
        auto push_step = [&](int d) { w.push_back(w.back() + d); };
        auto step_to = [&](std::int64_t target) {
            while (w.back() != target) push_step(target > w.back() ? 1 : -1);
        };
        auto core = [&](std::int64_t len) {
            for (std::int64_t j = 0; j < len; ++j) {
                const auto x = w.back();
                push_step(x >= 3 ? -1 : (x <= -3 ? 1 : ((rng() >> 63) ? 1 : -1)));
            }
        };
        auto high = [&](int s, std::int64_t len) {
            step_to(s * B);
            for (std::int64_t j = 0; j < len; ++j) {
                const auto h = s * w.back() - B;
                push_step(s * (h <= 0 ? 1 : (h >= 3 ? -1 : ((rng() >> 63) ? 1 : -1))));
            }
        };

        if (central_only) {
            const auto n_target = static_cast<std::int64_t>(1000 + rng() % 3000);
            core(n_target);
            const auto climb = static_cast<std::int64_t>(unif(rng) * epsilon * static_cast<double>(n_target) / 2.0);
            for (std::int64_t j = 0; j < climb; ++j) push_step(1);
        } else {
            double a0 = 0.25 + 0.75 * unif(rng);
            double am = unif(rng) < 0.8 ? 0.15 + 0.85 * unif(rng) : 0.0;
            double ap = unif(rng) < 0.8 ? 0.15 + 0.85 * unif(rng) : 0.0;
            const double tot = a0 + am + ap;
            a0 /= tot;
            am /= tot;
            ap /= tot;
            std::vector<int> visits;
            for (int s : {-1, 1})
                if ((s < 0 ? am : ap) > 0.0)
                    for (int k = 0, m = 1 + static_cast<int>(rng() % 2); k < m; ++k) visits.push_back(s);
            for (std::size_t j = visits.size(); j > 1; --j) std::swap(visits[j - 1], visits[rng() % j]);
            const double climb = 2.0 * static_cast<double>(B + 1) * static_cast<double>(std::max<std::size_t>(visits.size(), 1));
            const auto n_target = static_cast<std::int64_t>((1.5 + unif(rng)) * climb / (epsilon * a0)) + 500;
            const bool end_high = !visits.empty() && (rng() & 1);
            const std::size_t core_segments = visits.size() + (end_high ? 0 : 1);
            auto share = [&](double alpha, std::size_t parts) {
                std::vector<std::int64_t> out(parts, 0);
                for (auto& v : out) v = static_cast<std::int64_t>(alpha * static_cast<double>(n_target) * (0.5 + unif(rng)) /
                                                                 static_cast<double>(parts));
                return out;
            };
            const auto core_len = share(a0, std::max<std::size_t>(core_segments, 1));
            std::array<std::vector<std::int64_t>, 2> high_len;
            for (int s : {-1, 1}) {
                const auto cnt = static_cast<std::size_t>(std::count(visits.begin(), visits.end(), s));
                high_len[s > 0] = share(s < 0 ? am : ap, cnt);
            }
            std::array<std::size_t, 2> used{0, 0};
            core(core_len[0]);
            for (std::size_t i = 0; i < visits.size(); ++i) {
                const int s = visits[i];
                high(s, high_len[s > 0][used[s > 0]++]);
                if (i + 1 == visits.size() && end_high) break;
                step_to(s * 3);
                core(core_len[i + 1]);
            }
        }

        MeasureZbar mu = lift_word(w, B, rng, 0.3 * radius);
        const Decomposition d = decompose(mu);
        if (!(R > r_mu0(d.mu_zero, epsilon))) continue;
        if (!(kr_distance(empirical_measure(w), mu) < radius)) continue;
        return BallInstance{std::move(profile), std::move(mu), epsilon, R, std::move(w)};
    }
    return std::nullopt;
}

std::optional<TypicalInstance> make_typical_instance(CounterStream& rng, double epsilon) {
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        TransitionProfile profile = random_window_profile(rng);
        const std::int64_t R = r_zbar(epsilon) + 1 + static_cast<std::int64_t>(rng() & 1);

        std::int64_t a = -static_cast<std::int64_t>(rng() % 4), b = static_cast<std::int64_t>(rng() % 4);
        if (a == b) b = 1;
        std::map<std::int64_t, double> mu0;
        double Jsum = 0.0;
        for (std::int64_t e = a; e < b; ++e) {
            const double J = 0.2 + unif(rng);
            mu0[e] += J;
            mu0[e + 1] += J;
            Jsum += 2.0 * J;
        }

        double a0;
        const double u = unif(rng);
        if (u < 0.08) a0 = 0.0;
        else if (u < 0.16) a0 = 3.0 * epsilon * unif(rng);
        else a0 = 3.0 * epsilon + 0.1 + unif(rng) * (0.8 - 3.0 * epsilon);
        double am = (1.0 - a0) * unif(rng);
        if (unif(rng) < 0.15) am = 0.0;
        CentralMeasure central;
        if (a0 > 0.0)
            for (const auto& [k, v] : mu0) central[k] = a0 * v / Jsum;
        double csum = 0.0;
        for (const auto& [k, v] : central) csum += v;
        const double ap = std::max(0.0, 1.0 - csum - am);

        const double n_floor = (4.0 * static_cast<double>(R) + 9.0) / epsilon;
        std::int64_t n = static_cast<std::int64_t>(n_floor) + 1 + static_cast<std::int64_t>(rng() % 3000);
        if (a0 > 3.0 * epsilon) n = std::max<std::int64_t>(n, std::min<std::int64_t>(100000, static_cast<std::int64_t>(std::ceil(8000.0 / (a0 - 3.0 * epsilon)))));

        Construction c{std::move(profile), MeasureZbar(am, ap, std::move(central)), epsilon, R, n, CheckMode::strict};
        if (!typical_assumption_failures(c).empty()) continue;
        const int sigma = (rng() & 1) ? 1 : -1;
        try {
            TypicalComponents parts = sample_typical_components(sigma, c, rng);
            return TypicalInstance{std::move(c), sigma, std::move(parts)};
        } catch (const AssumptionError&) {
        }
    }
    return std::nullopt;
}

namespace {

std::optional<BallInstance> ball_with(CounterStream& rng, double eps, bool central_only,
                                      const std::function<bool(const BallInstance&)>& pred) {
    for (int k = 0; k < 50; ++k) {
        auto inst = make_ball_instance(rng, eps, central_only);
        if (!inst) return std::nullopt;
        if (!pred || pred(*inst)) return inst;
    }
    return std::nullopt;
}

bool stitch_ready(const BallInstance& b) {
    Construction c{b.profile, b.mu, b.epsilon, b.R, static_cast<std::int64_t>(b.w.size()), CheckMode::strict};
    return stitch_assumption_failures(c, b.w).empty();
}

}  // namespace

SuiteResult suite_occupation_bounds(std::int64_t instances, std::uint64_t seed) {
    return run_parallel("occupation_bounds", instances, [&](std::int64_t i, Outcome& o) {
        CounterStream rng(mix(seed, 1), static_cast<std::uint64_t>(i));
        auto inst = make_ball_instance(rng, epsilon_for(i), false);
        if (!inst) return o.expect(false, "no valid instance generated");
        const double n = static_cast<double>(inst->w.size()), eps = inst->epsilon;
        const auto oc = occupation_counts(inst->w, inst->R);
        for (int s = -1; s <= 1; ++s) {
            const double dev = std::abs(static_cast<double>(oc.region_count(s)) - inst->mu.alpha(s) * n);
            o.expect(dev < 2.0 * eps * n, "region " + std::to_string(s) + " count deviation " + num(dev) +
                                              " >= 2 eps n = " + num(2.0 * eps * n));
        }
        for (std::int64_t m : {-inst->R, -inst->R + 1, inst->R - 1, inst->R}) {
            const auto v = static_cast<double>(oc.site(m));
            o.expect(v < 3.0 * eps * n, "site " + std::to_string(m) + " visited " + num(v) + " times");
        }
    });
}

SuiteResult suite_endpoint_bound(std::int64_t instances, std::uint64_t seed) {
    return run_parallel("endpoint_bound", instances, [&](std::int64_t i, Outcome& o) {
        CounterStream rng(mix(seed, 2), static_cast<std::uint64_t>(i));
        auto inst = make_ball_instance(rng, epsilon_for(i), true);
        if (!inst) return o.expect(false, "no valid instance generated");
        const double n = static_cast<double>(inst->w.size());
        const double bound = static_cast<double>(inst->R) + 2.0 * inst->epsilon * n;
        o.expect(static_cast<double>(std::abs(inst->w.back())) <= bound,
                 "last letter " + std::to_string(inst->w.back()) + " beyond " + num(bound));
    });
}

SuiteResult suite_restricted_measure(std::int64_t instances, std::uint64_t seed) {
    return run_parallel("restricted_measure", instances, [&](std::int64_t i, Outcome& o) {
        CounterStream rng(mix(seed, 3), static_cast<std::uint64_t>(i));
        const double eps = epsilon_for(i);
        auto inst = ball_with(rng, eps, false, [](const BallInstance& b) { return b.epsilon < b.mu.alpha_zero() / 2.0; });
        if (!inst) return o.expect(false, "no valid instance generated");
        const double a0 = inst->mu.alpha_zero();
        const double d = kr_distance(central_measure(restricted_empirical(inst->w, inst->R)),
                                     central_measure(decompose(inst->mu).mu_zero));
        o.expect(d < 6.0 * eps / a0, "restricted distance " + num(d) + " >= " + num(6.0 * eps / a0));
    });
}

namespace {

SuiteResult typical_suite(const std::string& name, std::int64_t instances, std::uint64_t seed, std::uint64_t tag,
                          const std::function<void(const TypicalInstance&, const TypicalWord&, Outcome&)>& check) {
    return run_parallel(name, instances, [&](std::int64_t i, Outcome& o) {
        CounterStream rng(mix(seed, tag), static_cast<std::uint64_t>(i));
        auto inst = make_typical_instance(rng, i % 2 == 0 ? 0.1 : 0.05);
        if (!inst) return o.expect(false, "no valid instance generated");
        const TypicalWord tw = build_typical(inst->sigma, inst->parts, inst->c);
        check(*inst, tw, o);
    });
}

}  // namespace

SuiteResult suite_connector_length(std::int64_t instances, std::uint64_t seed) {
    return typical_suite("connector_length", instances, seed, 4, [](const auto& inst, const auto& tw, Outcome& o) {
        const double bound = 9.0 * inst.c.epsilon * static_cast<double>(inst.c.n);
        o.expect(static_cast<double>(tw.connector_letters) <= bound,
                 "connector letters " + std::to_string(tw.connector_letters) + " > " + num(bound));
    });
}

SuiteResult suite_typical_membership(std::int64_t instances, std::uint64_t seed) {
    return typical_suite("typical_membership", instances, seed, 5, [](const auto& inst, const auto& tw, Outcome& o) {
        const auto& w = tw.word;
        o.expect(static_cast<std::int64_t>(w.size()) == inst.c.n, "length differs from n");
        o.expect(!w.empty() && w.front() == 0, "first letter is not 0");
        o.expect(is_word(w), "not a nearest-neighbour word");
        o.expect(!w.empty() && region(w.back(), inst.c.R) == inst.sigma, "last letter outside the target region");
        const double d = kr_distance(empirical_measure(w), inst.c.mu);
        o.expect(d < 22.0 * inst.c.epsilon, "distance " + num(d) + " >= 22 eps");
    });
}

SuiteResult suite_typical_lower_bound(std::int64_t instances, std::uint64_t seed) {
    return typical_suite("typical_lower_bound", instances, seed, 6, [](const auto& inst, const auto& tw, Outcome& o) {
        const auto& pr = inst.c.profile;
        const double lhs = log_path_prob(tw.word, pr);
        const double rhs = 10.0 * inst.c.epsilon * static_cast<double>(inst.c.n) * std::log(p_star(pr)) +
                           log_path_prob(inst.parts.central, pr) + log_path_prob(inst.parts.excursion, pr) +
                           log_path_prob(inst.parts.meander, pr);
        o.expect(lhs >= rhs - 1e-9 * std::abs(rhs), "log path probability " + num(lhs) + " < " + num(rhs));
    });
}

SuiteResult suite_typical_injectivity() {
    // Small permissive instance; the component sets are enumerated in full.
    const TransitionProfile pr = TransitionProfile::homogeneous(0.5);
    const MeasureZbar mu(0.0, 0.4, {{0, 0.6}});
    const double eps = 0.1;
    const std::int64_t n = 40, R = 2;
    const Construction c{pr, mu, eps, R, n, CheckMode::permissive};
    const TypicalTimes t = typical_times(mu, eps, n);

    auto all_from = [](std::int64_t start, std::int64_t len, const std::function<bool(const Word&)>& keep) {
        std::vector<Word> out;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (len - 1)); ++mask) {
            Word w{start};
            for (std::int64_t j = 1; j < len; ++j) w.push_back(w.back() + (((mask >> (j - 1)) & 1) ? 1 : -1));
            if (keep(w)) out.push_back(std::move(w));
        }
        return out;
    };

    SuiteResult r;
    r.name = "typical_injectivity";
    for (int sigma : {-1, 1}) {
        const auto centrals = all_from(0, t.zero, [](const Word&) { return true; });
        const auto excs = all_from(-sigma * R, t.at(-sigma), [&](const Word& w) { return is_excursion(w, -sigma, R); });
        const auto meas = all_from(sigma * R, t.at(sigma), [&](const Word& w) { return is_meander(w, sigma, R); });
        std::set<Word> seen;
        for (const auto& vc : centrals)
            for (const auto& ve : excs)
                for (const auto& vm : meas) {
                    ++r.instances;
                    ++r.checks;
                    auto tw = build_typical(sigma, {vc, ve, vm}, c);
                    if (!seen.insert(std::move(tw.word)).second) {
                        ++r.failures;
                        if (r.messages.size() < kMaxMessages)
                            r.messages.push_back("sigma " + std::to_string(sigma) + ": two triples share an output");
                    }
                }
    }
    return r;
}

SuiteResult suite_cut_count(std::int64_t instances, std::uint64_t seed) {
    return run_parallel("cut_count", instances, [&](std::int64_t i, Outcome& o) {
        CounterStream rng(mix(seed, 7), static_cast<std::uint64_t>(i));
        auto inst = make_ball_instance(rng, epsilon_for(i), false);
        if (!inst) return o.expect(false, "no valid instance generated");
        const double n = static_cast<double>(inst->w.size());
        const auto d = cut_sequence(inst->w, inst->R);
        for (int s = -1; s <= 1; ++s) {
            const auto k = static_cast<double>(d.cuts.index_set(s).size());
            o.expect(k < 6.0 * inst->epsilon * n + 1.0,
                     "region " + std::to_string(s) + " has " + num(k) + " subwords");
        }
    });
}

namespace {

SuiteResult stitch_suite(const std::string& name, std::int64_t instances, std::uint64_t seed, std::uint64_t tag,
                         const std::function<void(const BallInstance&, const Construction&,
                                                  const std::array<StitchedWord, 3>&, Outcome&)>& check) {
    return run_parallel(name, instances, [&](std::int64_t i, Outcome& o) {
        CounterStream rng(mix(seed, tag), static_cast<std::uint64_t>(i));
        auto inst = ball_with(rng, 0.02, false, stitch_ready);
        if (!inst) return o.expect(false, "no valid instance generated");
        const Construction c{inst->profile, inst->mu, inst->epsilon, inst->R,
                             static_cast<std::int64_t>(inst->w.size()), CheckMode::strict};
        const std::array<StitchedWord, 3> sw{stitch(inst->w, -1, c), stitch(inst->w, 0, c), stitch(inst->w, 1, c)};
        check(*inst, c, sw, o);
    });
}

}  // namespace

SuiteResult suite_stitched_membership(std::int64_t instances, std::uint64_t seed) {
    return stitch_suite("stitched_membership", instances, seed, 8, [](const auto& inst, const auto& c, const auto& sw, Outcome& o) {
        const double n = static_cast<double>(c.n), eps = c.epsilon;
        const int rho = region(inst.w.back(), c.R);
        for (int s = -1; s <= 1; ++s) {
            const auto& x = sw[static_cast<std::size_t>(s + 1)];
            const std::string tag = "sigma " + std::to_string(s) + ": ";
            o.expect(static_cast<std::int64_t>(x.word.size()) == stitched_length(c.mu, s, eps, c.n), tag + "wrong length");
            o.expect(static_cast<double>(x.padding) < 11.0 * eps * n, tag + "padding " + std::to_string(x.padding));
            o.expect(is_word(x.word), tag + "not a word");
            if (s != 0) {
                const bool ok = s == rho ? is_meander(x.word, s, c.R) : is_excursion(x.word, s, c.R);
                o.expect(ok, tag + (s == rho ? "not a meander" : "not an excursion"));
            } else if (c.mu.alpha_zero() > 0.0) {
                const double d = kr_distance(empirical_measure(x.word), central_measure(decompose(c.mu).mu_zero));
                o.expect(d <= 40.0 * eps / c.mu.alpha_zero(), tag + "central distance " + num(d));
            }
        }
    });
}

SuiteResult suite_stitch_upper_bound(std::int64_t instances, std::uint64_t seed) {
    return stitch_suite("stitch_upper_bound", instances, seed, 9, [](const auto& inst, const auto& c, const auto& sw, Outcome& o) {
        const double lhs = log_path_prob(inst.w, c.profile);
        double rhs = c.epsilon * static_cast<double>(c.n) * 69.0 * -std::log(p_star(c.profile));
        for (const auto& x : sw) rhs += log_path_prob(x.word, c.profile);
        o.expect(lhs <= rhs + 1e-9 * std::abs(rhs), "log path probability " + num(lhs) + " > " + num(rhs));
    });
}

SuiteResult suite_cut_roundtrip(int exhaustive_max_n, std::int64_t samples, std::int64_t sample_n, std::uint64_t seed) {
    auto check = [](const Word& w, std::int64_t R, const TransitionProfile& pr, Outcome& o) {
        const auto oc = occupation_counts(w, R);
        const double n = static_cast<double>(w.size());
        CentralMeasure central;
        for (auto x : w)
            if (region(x, R) == 0) central[x] += 1.0 / n;
        const MeasureZbar mu(static_cast<double>(oc.minus) / n, static_cast<double>(oc.plus) / n, std::move(central));
        const Construction c{pr, mu, 0.25, R, static_cast<std::int64_t>(w.size()), CheckMode::permissive};
        std::array<Word, 3> st{stitch(w, -1, c).word, stitch(w, 0, c).word, stitch(w, 1, c).word};
        o.expect(reconstruct(st, encode_cuts(w, R)) == w, "reconstruction differs, n = " + std::to_string(w.size()));
    };

    const TransitionProfile sym = TransitionProfile::homogeneous(0.5);
    std::vector<std::pair<int, std::uint64_t>> jobs;  // (n, mask), exhaustive part
    for (int n = 1; n <= exhaustive_max_n; ++n)
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n - 1)); ++m) jobs.emplace_back(n, m);
    const auto exhaustive = static_cast<std::int64_t>(jobs.size());

    return run_parallel("cut_roundtrip", exhaustive + samples, [&](std::int64_t i, Outcome& o) {
        if (i < exhaustive) {
            const auto [n, mask] = jobs[static_cast<std::size_t>(i)];
            Word w{0};
            for (int j = 1; j < n; ++j) w.push_back(w.back() + (((mask >> (j - 1)) & 1) ? 1 : -1));
            for (std::int64_t R : {2, 3}) check(w, R, sym, o);
            return;
        }
        CounterStream rng(mix(seed, 10), static_cast<std::uint64_t>(i - exhaustive));
        const TransitionProfile pr = random_window_profile(rng);
        const std::int64_t R = 2 + static_cast<std::int64_t>(rng() % 3);
        Word w = sample_path(pr, 0, sample_n, rng);
        check(w, R, pr, o);
    });
}

std::vector<SuiteResult> run_lemma_suites(const std::string& group, std::int64_t instances, std::uint64_t seed) {
    std::vector<SuiteResult> out;
    const bool all = group == "all";
    if (!all && group != "occupation" && group != "typical" && group != "stitching")
        throw ValidationError("suite", "unknown suite group '" + group + "'");
    if (all || group == "occupation") {
        out.push_back(suite_occupation_bounds(instances, seed));
        out.push_back(suite_endpoint_bound(instances, seed));
        out.push_back(suite_restricted_measure(instances, seed));
    }
    if (all || group == "typical") {
        out.push_back(suite_connector_length(instances, seed));
        out.push_back(suite_typical_injectivity());
        out.push_back(suite_typical_membership(instances, seed));
        out.push_back(suite_typical_lower_bound(instances, seed));
    }
    if (all || group == "stitching") {
        out.push_back(suite_cut_count(instances, seed));
        out.push_back(suite_stitched_membership(instances, seed));
        out.push_back(suite_stitch_upper_bound(instances, seed));
        out.push_back(suite_cut_roundtrip(16, 10 * instances, 200, seed));
    }
    return out;
}

CheckResult verify_excursion(double p, std::int64_t R, std::int64_t n_max) {
    if (n_max < 7) throw ValidationError("n_max", "must be >= 7");
    const std::int64_t top = n_max % 2 == 1 ? n_max : n_max - 1;
    const auto pts = excursion_log_series(TransitionProfile::homogeneous(p), R, 1, top - 8, top, 2);
    const auto rep = rate_slope(pts, 2);
    CheckResult c{"excursion", rep.slope, -cramer_at_zero(p).value(), 5e-3, false, ""};
    c.passed = std::abs(c.measured - c.predicted) <= c.tolerance;
    c.detail = "last-difference slope at n = " + std::to_string(top);
    return c;
}

CheckResult verify_meander(double p, std::int64_t R, std::int64_t n_max) {
    if (n_max < 7) throw ValidationError("n_max", "must be >= 7");
    const auto pts = meander_log_series(TransitionProfile::homogeneous(p), R, 1, n_max - 8, n_max, 2);
    const auto rep = rate_slope(pts, 2);
    CheckResult c{"meander", rep.slope, 0.0 - cramer_inf(p, Side::nonneg).value(), 1e-2, false, ""};
    c.passed = std::abs(c.measured - c.predicted) <= c.tolerance;
    c.detail = "last-difference slope at n = " + std::to_string(n_max);
    return c;
}

CheckResult verify_ball(std::int64_t instances, int n_max, std::uint64_t seed) {
    if (n_max < 2 || n_max > kBallEnumCap) throw ValidationError("n_max", "must lie in [2, 24]");
    std::vector<double> diff(static_cast<std::size_t>(instances), 0.0);
    for (std::int64_t i = 0; i < instances; ++i) {
        CounterStream rng(mix(seed, 11), static_cast<std::uint64_t>(i));
        const TransitionProfile pr = random_window_profile(rng);
        const int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(n_max - 1));
        const Word ref = sample_path(pr, 0, n, rng);
        const MeasureZbar mu = empirical_measure(ref);
        const double eps = 0.05 + 0.6 * unif(rng);
        const std::int64_t R = 1 + static_cast<std::int64_t>(rng() % 3);
        const double total = ball_prob_enum(pr, mu, eps, n);
        double parts = 0.0;
        for (int s = -1; s <= 1; ++s) parts += ball_prob_enum(pr, mu, eps, n, ClassFilter{s, R});
        diff[static_cast<std::size_t>(i)] = std::abs(parts - total);
    }
    CheckResult c{"ball_class_partition", *std::max_element(diff.begin(), diff.end()), 0.0, 1e-13, false, ""};
    c.passed = c.measured <= c.tolerance;
    c.detail = std::to_string(instances) + " enumerated instances with n <= " + std::to_string(n_max);
    return c;
}

CheckResult verify_counterexample(double p_bar, double epsilon) {
    const auto blocks = counterexample_blocks(3);
    const BlockObservable f{blocks};
    const TransitionProfile pr = TransitionProfile::homogeneous(p_bar);
    const std::int64_t d2 = blocks[1].second, c3 = blocks[2].first;
    const double a = observable_ball_log_prob(pr, f, 1.0, epsilon, static_cast<int>(d2)) / static_cast<double>(d2);
    const double b = observable_ball_log_prob(pr, f, 1.0, epsilon, static_cast<int>(c3)) / static_cast<double>(c3);
    CheckResult c{"counterexample_gap", a - b, 0.05, 0.0, false, ""};
    c.passed = c.measured >= c.predicted;
    c.detail = "(1/n) log P at n = " + std::to_string(d2) + ": " + num(a) + "; at n = " + std::to_string(c3) + ": " + num(b);
    return c;
}

}  // namespace zbar
