#include "zbar/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace zbar {

namespace {

// ceil with a guard against representation noise such as 0.47 * 500 = 235.00000000000003.
std::int64_t ceil_guarded(double x) { return static_cast<std::int64_t>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x)))); }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

void report(const std::vector<std::string>& failures, CheckMode mode, std::vector<std::string>& warnings) {
    if (failures.empty()) return;
    if (mode == CheckMode::strict) {
        std::string msg = "standing assumption violated:";
        for (const auto& f : failures) msg += " [" + f + "]";
        throw AssumptionError(msg);
    }
    warnings.insert(warnings.end(), failures.begin(), failures.end());
}

MeasureZbar central_as_measure(const CentralMeasure& m) { return {0.0, 0.0, m}; }

}  // namespace

double path_prob(const Word& w, const TransitionProfile& profile) {
    require_word(w);
    double p = 1.0;
    for (std::size_t i = 1; i < w.size(); ++i) p *= step_prob(profile, w[i - 1], w[i]);
    return p;
}

double log_path_prob(const Word& w, const TransitionProfile& profile) {
    require_word(w);
    double lp = 0.0;
    for (std::size_t i = 1; i < w.size(); ++i) lp += std::log(step_prob(profile, w[i - 1], w[i]));
    return lp;
}

UpDown up_down_counts(const Word& w) {
    require_word(w);
    UpDown c;
    for (std::size_t i = 1; i < w.size(); ++i) (w[i] > w[i - 1] ? c.up : c.down)++;
    return c;
}

Word concat(const Word& a, const Word& b) {
    if (!a.empty() && !b.empty() && std::abs(a.back() - b.front()) != 1)
        throw ValidationError("concat", "junction letters are not adjacent");
    Word out(a);
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

Word connector_xi(int sigma, std::int64_t k, std::int64_t R) {
    if (R < 1) throw ValidationError("R", "must be >= 1");
    if (sigma != 1 && sigma != -1) throw ValidationError("sigma", "must be -1 or +1");
    const std::int64_t s = sigma;
    Word out;
    if (k == s * R) return {s * (R - 1)};
    if (s * k < R) {
        for (std::int64_t x = k + s; s * x <= R - 1; x += s) out.push_back(x);
    } else {
        for (std::int64_t x = k - s; s * x >= R + 1; x -= s) out.push_back(x);
    }
    return out;
}

Word connector_chi(int sigma, std::int64_t R) { return connector_xi(sigma, -sigma * R, R); }

TypicalTimes typical_times(const MeasureZbar& mu, double epsilon, std::int64_t n) {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon", "must be positive");
    if (n < 1) throw ValidationError("n", "must be >= 1");
    auto t = [&](double a) {
        return std::max<std::int64_t>(2 * ceil_guarded((a - 3.0 * epsilon) * static_cast<double>(n) / 2.0) + 1, 1);
    };
    return {t(mu.alpha_minus()), t(mu.alpha_zero()), t(mu.alpha_plus())};
}

std::vector<std::string> typical_assumption_failures(const Construction& c) {
    std::vector<std::string> out;
    const double eps = c.epsilon;
    const EpsilonStar es = epsilon_star(c.profile);
    if (!(eps < 1.0 / 9.0)) out.push_back("epsilon < 1/9 fails: epsilon = " + fmt(eps));
    if (!es.unbounded && !(eps < es.value)) out.push_back("epsilon < epsilon* fails: epsilon* = " + fmt(es.value));
    const std::int64_t rm = r_mu0(decompose(c.mu).mu_zero, eps), rz = r_zbar(eps);
    if (!(c.R > std::max(rm, rz)))
        out.push_back("R > max(R_mu0, R_zbar) fails: R = " + std::to_string(c.R) + ", R_mu0 = " + std::to_string(rm) +
                      ", R_zbar = " + std::to_string(rz));
    if (!(static_cast<double>(c.n) > (4.0 * static_cast<double>(c.R) + 9.0) / eps))
        out.push_back("n > (4R+9)/epsilon fails: n = " + std::to_string(c.n));
    return out;
}

std::vector<std::string> stitch_assumption_failures(const Construction& c, const Word& w) {
    std::vector<std::string> out;
    const double eps = c.epsilon;
    double amin = 1.0;
    for (int s = -1; s <= 1; ++s)
        if (c.mu.alpha(s) > 0.0) amin = std::min(amin, c.mu.alpha(s));
    if (!(eps < 0.5 * amin)) out.push_back("epsilon < min positive alpha / 2 fails: epsilon = " + fmt(eps));
    if (!(eps < 1.0 / 40.0)) out.push_back("epsilon < 1/40 fails: epsilon = " + fmt(eps));
    const EpsilonStar es = epsilon_star(c.profile);
    if (!es.unbounded && !(eps < es.value)) out.push_back("epsilon < epsilon* fails: epsilon* = " + fmt(es.value));
    const std::int64_t rm = r_mu0(decompose(c.mu).mu_zero, eps), rz = r_zbar(eps);
    if (!(c.R > std::max(rm, rz)))
        out.push_back("R > max(R_mu0, R_zbar) fails: R = " + std::to_string(c.R) + ", R_mu0 = " + std::to_string(rm) +
                      ", R_zbar = " + std::to_string(rz));
    if (!(static_cast<double>(c.n) > 3.0 / eps)) out.push_back("n > 3/epsilon fails: n = " + std::to_string(c.n));
    const double kr = kr_distance(empirical_measure(w), c.mu);
    const double radius = std::ldexp(eps, -static_cast<int>(c.R));
    if (!(kr < radius)) out.push_back("w in B(mu, 2^-R epsilon) fails: distance = " + fmt(kr) + ", radius = " + fmt(radius));
    return out;
}

bool is_excursion(const Word& w, int sigma, std::int64_t R) {
    if (w.empty() || !is_word(w) || w.front() != sigma * R || w.back() != sigma * R) return false;
    return std::all_of(w.begin(), w.end(), [&](std::int64_t x) { return sigma * x >= R; });
}

bool is_meander(const Word& w, int sigma, std::int64_t R) {
    if (w.empty() || !is_word(w) || w.front() != sigma * R) return false;
    return std::all_of(w.begin(), w.end(), [&](std::int64_t x) { return sigma * x >= R; });
}

TypicalWord build_typical(int sigma, const TypicalComponents& v, const Construction& c) {
    if (sigma != 1 && sigma != -1) throw ValidationError("sigma", "must be -1 or +1");
    if (v.central.empty() || v.excursion.empty() || v.meander.empty())
        throw ValidationError("components", "empty component word");
    TypicalWord out;
    report(typical_assumption_failures(c), c.mode, out.warnings);

    const TypicalTimes t = typical_times(c.mu, c.epsilon, c.n);
    std::vector<std::string> membership;
    if (static_cast<std::int64_t>(v.central.size()) != t.zero || v.central.front() != 0 || !is_word(v.central))
        membership.push_back("central word must start at 0 with length t0 = " + std::to_string(t.zero));
    else if (c.mu.alpha_zero() > 3.0 * c.epsilon) {
        const double kr = kr_distance(empirical_measure(v.central), central_as_measure(decompose(c.mu).mu_zero));
        if (!(kr < std::ldexp(c.epsilon, -static_cast<int>(c.R))))
            membership.push_back("central word outside B(mu0, 2^-R epsilon): distance = " + fmt(kr));
    }
    if (static_cast<std::int64_t>(v.excursion.size()) != t.at(-sigma) || !is_excursion(v.excursion, -sigma, c.R))
        membership.push_back("excursion component must have length " + std::to_string(t.at(-sigma)));
    if (static_cast<std::int64_t>(v.meander.size()) != t.at(sigma) || !is_meander(v.meander, sigma, c.R))
        membership.push_back("meander component must have length " + std::to_string(t.at(sigma)));
    report(membership, c.mode, out.warnings);

    const Word xi = connector_xi(-sigma, v.central.back(), c.R);
    const Word chi = connector_chi(sigma, c.R);
    Word w = concat(concat(concat(concat(v.central, xi), v.excursion), chi), v.meander);
    const std::int64_t h = c.n - static_cast<std::int64_t>(w.size());
    if (h < 0) throw AssumptionError("components are longer than n; padding length would be " + std::to_string(h));
    for (std::int64_t j = 1; j <= h; ++j) w.push_back(v.meander.back() + sigma * j);
    out.connector_letters = static_cast<std::int64_t>(xi.size() + chi.size()) + h;
    out.word = std::move(w);
    return out;
}

namespace {

Word sample_central(const Construction& c, std::int64_t t0, CounterStream& rng) {
    const CentralMeasure mu0 = decompose(c.mu).mu_zero;
    const std::int64_t lo = std::min<std::int64_t>(0, mu0.begin()->first);
    const std::int64_t hi = std::max<std::int64_t>(0, mu0.rbegin()->first);
    const auto E = static_cast<std::size_t>(hi - lo);  // edge e joins lo+e and lo+e+1
    if (E == 0) throw AssumptionError("central measure delta_0 admits no closed walk of positive length");

    // Zero-flux edge weights of mu0 on each contiguous block; gaps get weight 0.
    std::vector<double> J(E, 0.0);
    for (auto it = mu0.begin(); it != mu0.end();) {
        auto end = std::next(it);
        while (end != mu0.end() && end->first == std::prev(end)->first + 1) ++end;
        double prev = 0.0;
        for (auto s = it; s != end; ++s) {
            const double cur = s->second - prev;
            if (std::next(s) == end) {
                if (std::abs(cur) > 1e-9)
                    throw AssumptionError("central measure has no zero-flux kernel; no closed walk approximates it");
            } else {
                if (cur < -1e-12) throw AssumptionError("central measure has no zero-flux kernel");
                J[static_cast<std::size_t>(s->first - lo)] = std::max(cur, 0.0);
            }
            prev = cur;
        }
        it = end;
    }

    // Integer traversal counts m_e >= 1 with sum (t0-1)/2, by largest remainder.
    const std::int64_t K = (t0 - 1) / 2;
    std::vector<std::int64_t> m(E, 1);
    std::int64_t forced = 0;
    double Jsum = 0.0;
    for (std::size_t e = 0; e < E; ++e) {
        if (J[e] > 0.0) Jsum += J[e];
        else ++forced;
    }
    const std::int64_t budget = K - forced;
    if (budget < static_cast<std::int64_t>(E) - forced) throw AssumptionError("t0 too short for a central closed walk");
    std::vector<std::pair<double, std::size_t>> rem;
    std::int64_t used = 0;
    for (std::size_t e = 0; e < E; ++e) {
        if (J[e] <= 0.0) continue;
        const double target = static_cast<double>(budget) * J[e] / Jsum;
        m[e] = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(target)));
        used += m[e];
        rem.emplace_back(target - std::floor(target), e);
    }
    if (rem.empty()) throw AssumptionError("central measure has no positive edge flux");
    std::sort(rem.begin(), rem.end(), [](auto& a, auto& b) { return a.first > b.first || (a.first == b.first && a.second < b.second); });
    for (std::size_t i = 0; used < budget; i = (i + 1) % rem.size(), ++used) ++m[rem[i].second];
    for (std::size_t i = 0; used > budget; i = (i + 1) % rem.size())
        if (m[rem[i].second] > 1) {
            --m[rem[i].second];
            --used;
        }

    // Random Eulerian circuit: shuffle exits at each site, last exit of y != 0 points toward 0.
    const auto S = E + 1;
    std::vector<std::vector<signed char>> exits(S);
    for (std::size_t i = 0; i < S; ++i) {
        const std::int64_t y = lo + static_cast<std::int64_t>(i);
        const std::int64_t up = i < E ? m[i] : 0, down = i > 0 ? m[i - 1] : 0;
        auto& ex = exits[i];
        ex.insert(ex.end(), static_cast<std::size_t>(up), 1);
        ex.insert(ex.end(), static_cast<std::size_t>(down), -1);
        for (std::size_t j = ex.size(); j > 1; --j) std::swap(ex[j - 1], ex[rng() % j]);
        if (y != 0) {
            const signed char home = y > 0 ? -1 : 1;
            auto it = std::find(ex.begin(), ex.end(), home);
            std::iter_swap(it, ex.end() - 1);
        }
    }
    std::vector<std::size_t> next(S, 0);
    Word w{0};
    w.reserve(static_cast<std::size_t>(t0));
    std::int64_t y = 0;
    for (std::int64_t step = 0; step < 2 * K; ++step) {
        const auto i = static_cast<std::size_t>(y - lo);
        y += exits[i][next[i]++];
        w.push_back(y);
    }
    const double kr = kr_distance(empirical_measure(w), central_as_measure(mu0));
    if (!(kr < std::ldexp(c.epsilon, -static_cast<int>(c.R))))
        throw AssumptionError("central closed walk misses B(mu0, 2^-R epsilon) at distance " + fmt(kr) +
                              "; increase n");
    return w;
}

Word sample_excursion(int s, std::int64_t R, std::int64_t t, CounterStream& rng) {
    if (t == 1) return {s * R};
    const std::int64_t half = (t - 1) / 2;
    std::vector<signed char> steps(static_cast<std::size_t>(2 * half + 1), -1);
    std::fill(steps.begin(), steps.begin() + half, 1);
    for (std::size_t j = steps.size(); j > 1; --j) std::swap(steps[j - 1], steps[rng() % j]);
    // Cycle lemma: rotate to start just after the first minimum of the partial sums.
    std::int64_t sum = 0, best = 1;
    std::size_t arg = 0;
    for (std::size_t j = 0; j < steps.size(); ++j) {
        sum += steps[j];
        if (sum < best) {
            best = sum;
            arg = j;
        }
    }
    std::rotate(steps.begin(), steps.begin() + static_cast<std::ptrdiff_t>(arg + 1), steps.end());
    Word w{s * R};
    std::int64_t h = 0;
    for (std::size_t j = 0; j + 1 < steps.size(); ++j) {
        h += steps[j];
        w.push_back(s * (R + h));
    }
    return w;
}

Word sample_meander(int s, std::int64_t R, std::int64_t t, CounterStream& rng) {
    Word w{s * R};
    std::int64_t h = 0;
    for (std::int64_t j = 1; j < t; ++j) {
        h += (h == 0 || (rng() >> 63)) ? 1 : -1;
        w.push_back(s * (R + h));
    }
    return w;
}

}  // namespace

TypicalComponents sample_typical_components(int sigma, const Construction& c, CounterStream& rng) {
    if (sigma != 1 && sigma != -1) throw ValidationError("sigma", "must be -1 or +1");
    std::vector<std::string> ignored;
    report(typical_assumption_failures(c), c.mode, ignored);
    const TypicalTimes t = typical_times(c.mu, c.epsilon, c.n);
    TypicalComponents out;
    out.central = c.mu.alpha_zero() > 3.0 * c.epsilon ? sample_central(c, t.zero, rng) : Word{0};
    out.excursion = sample_excursion(-sigma, c.R, t.at(-sigma), rng);
    out.meander = sample_meander(sigma, c.R, t.at(sigma), rng);
    if (!is_excursion(out.excursion, -sigma, c.R) || !is_meander(out.meander, sigma, c.R))
        throw DomainError("sampled component failed its membership check");
    return out;
}

CutDecomposition cut_sequence(const Word& w, std::int64_t R) {
    require_word(w);
    if (R < 1) throw ValidationError("R", "must be >= 1");
    if (w.front() != 0) throw ValidationError("word", "must start at 0");
    CutDecomposition d;
    auto& cs = d.cuts;
    cs.n = static_cast<std::int64_t>(w.size());
    int cur = region(w[0], R);
    cs.times.push_back(1);
    cs.regions.push_back(cur);
    Word piece{w[0]};
    auto close = [&]() {
        d.subwords[static_cast<std::size_t>(cs.regions.back() + 1)].push_back(std::move(piece));
        piece.clear();
    };
    for (std::size_t j = 1; j < w.size(); ++j) {
        const int r = region(w[j], R);
        if (r != cur) {
            close();
            cur = r;
            cs.times.push_back(static_cast<std::int64_t>(j) + 1);
            cs.regions.push_back(r);
        }
        piece.push_back(w[j]);
    }
    close();
    cs.L = static_cast<std::int64_t>(cs.times.size());
    for (std::int64_t i = 0; i < cs.L; ++i) cs.J[static_cast<std::size_t>(cs.regions[i] + 1)].push_back(i + 1);
    return d;
}

std::int64_t stitched_length(const MeasureZbar& mu, int sigma, double epsilon, std::int64_t n) {
    return 2 * ceil_guarded((mu.alpha(sigma) + 8.0 * epsilon) * static_cast<double>(n) / 2.0) + 1;
}

StitchedWord stitch(const Word& w, int sigma, const Construction& c) {
    if (sigma < -1 || sigma > 1) throw ValidationError("sigma", "must be -1, 0 or +1");
    if (c.R < 2) throw AssumptionError("stitching needs R >= 2 so that the central padding can zig-zag");
    if (static_cast<std::int64_t>(w.size()) != c.n) throw ValidationError("n", "does not match the word length");
    StitchedWord out;
    report(stitch_assumption_failures(c, w), c.mode, out.warnings);

    const CutDecomposition d = cut_sequence(w, c.R);
    const auto& subs = d.of(sigma);
    const std::int64_t target = stitched_length(c.mu, sigma, c.epsilon, c.n);
    Word& s = out.word;
    if (subs.empty()) {
        for (std::int64_t j = 1; j <= target; ++j) s.push_back(sigma * (c.R + (j % 2 == 0 ? 1 : 0)));
        out.padding = target;
        return out;
    }
    for (std::size_t h = 0; h < subs.size(); ++h) {
        if (h > 0) {
            const std::int64_t prev = subs[h - 1].back();
            s.push_back(sigma != 0 ? sigma * (c.R + 1) : (prev > 0 ? c.R : -c.R));
        }
        s.insert(s.end(), subs[h].begin(), subs[h].end());
    }
    const std::int64_t m = target - static_cast<std::int64_t>(s.size());
    if (m <= 0) throw AssumptionError("stitched target length too short: padding length " + std::to_string(m));
    const std::int64_t last = s.back();
    const std::int64_t delta = sigma > 0 ? 1 : (sigma < 0 ? -1 : (last > 0 ? -1 : 1));
    for (std::int64_t j = 1; j <= m; ++j) s.push_back(last + (j % 2 == 1 ? delta : 0));
    out.padding = m;
    return out;
}

CutData encode_cuts(const Word& w, std::int64_t R) {
    const CutDecomposition d = cut_sequence(w, R);
    return {d.cuts.times, d.cuts.regions, d.cuts.n};
}

Word reconstruct(const std::array<Word, 3>& stitched, const CutData& cuts) {
    const std::size_t L = cuts.times.size();
    if (L == 0 || cuts.regions.size() != L || cuts.times[0] != 1) throw ValidationError("cut_data", "malformed cut sequence");
    Word w;
    w.reserve(static_cast<std::size_t>(cuts.n));
    std::array<std::int64_t, 3> cursor{0, 0, 0};  // 0-indexed read position inside each stitched word
    std::array<std::int64_t, 3> seen{0, 0, 0};
    for (std::size_t i = 0; i < L; ++i) {
        const std::int64_t end = i + 1 < L ? cuts.times[i + 1] : cuts.n + 1;
        const std::int64_t len = end - cuts.times[i];
        const auto r = cuts.regions[i];
        if (len <= 0 || r < -1 || r > 1) throw ValidationError("cut_data", "non-increasing cut times");
        const auto idx = static_cast<std::size_t>(r + 1);
        if (seen[idx] > 0) ++cursor[idx];  // skip the one-letter connector
        const Word& src = stitched[idx];
        if (cursor[idx] + len > static_cast<std::int64_t>(src.size()))
            throw ValidationError("cut_data", "cut lengths exceed the stitched word");
        w.insert(w.end(), src.begin() + cursor[idx], src.begin() + cursor[idx] + len);
        cursor[idx] += len;
        ++seen[idx];
    }
    if (static_cast<std::int64_t>(w.size()) != cuts.n || !is_word(w))
        throw ValidationError("cut_data", "reconstruction is not a word of the recorded length");
    return w;
}

}  // namespace zbar
