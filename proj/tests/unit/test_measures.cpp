#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "zbar/measures.hpp"

using namespace zbar;

namespace {

PointZbar random_point(std::mt19937_64& rng) {
    const int v = std::uniform_int_distribution<int>(-9, 9)(rng);
    if (v == 9) return PointZbar::plus_infinity();
    if (v == -9) return PointZbar::minus_infinity();
    return PointZbar::finite(v);
}

SignedMeasureZbar random_signed(std::mt19937_64& rng, int max_support) {
    SignedMeasureZbar nu;
    const int m = std::uniform_int_distribution<int>(1, max_support)(rng);
    std::uniform_real_distribution<double> w(-1.0, 1.0);
    for (int i = 0; i < m; ++i) nu.add(random_point(rng), w(rng));
    return nu;
}

MeasureZbar random_probability(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double am = u(rng) < 0.5 ? u(rng) : 0.0, ap = u(rng) < 0.5 ? u(rng) : 0.0;
    CentralMeasure c;
    const int m = std::uniform_int_distribution<int>(0, 4)(rng);
    double s = 0.0;
    for (int i = 0; i < m; ++i) {
        const double v = 0.05 + u(rng);
        c[std::uniform_int_distribution<int>(-6, 6)(rng)] += v;
        s += v;
    }
    if (m == 0 && am + ap == 0.0) ap = 1.0;
    const double tot = am + ap + s;
    for (auto& [k, v] : c) v /= tot;
    double cs = 0.0;
    for (auto& [k, v] : c) cs += v;
    am /= tot;
    return {am, std::max(0.0, 1.0 - am - cs), c};
}

}  // namespace

TEST_CASE("word predicates") {
    CHECK(is_word({0, 1, 0, -1}));
    CHECK_FALSE(is_word({0, 2}));
    CHECK_FALSE(is_word({}));
    CHECK_THROWS_AS(require_word({0, 0}), ValidationError);
}

TEST_CASE("measure validation") {
    CHECK_NOTHROW(MeasureZbar(0.2, 0.3, {{1, 0.25}, {2, 0.25}}));
    try {
        MeasureZbar(0.2, 0.3, {{1, 0.25}});
        FAIL("expected a normalization error");
    } catch (const ValidationError& e) {
        CHECK(e.key() == "central");
    }
    CHECK_THROWS_AS(MeasureZbar(-0.1, 1.1, {}), ValidationError);
    CHECK_THROWS_AS(MeasureZbar(0.0, 0.5, {{0, 0.5}, {1, 0.0}}), ValidationError);
}

TEST_CASE("decompose") {
    auto d = decompose(MeasureZbar::dirac(PointZbar::plus_infinity()));
    CHECK(d.alpha_plus == 1.0);
    CHECK(d.alpha_zero == 0.0);
    CHECK(d.mu_zero == CentralMeasure{{0, 1.0}});
    d = decompose(MeasureZbar(0.5, 0.0, {{0, 0.5}}));
    CHECK(d.alpha_minus == 0.5);
    CHECK(d.alpha_zero == 0.5);
    CHECK(d.mu_zero.at(0) == 1.0);
    d = decompose(MeasureZbar(0.2, 0.3, {{1, 0.25}, {2, 0.25}}));
    CHECK(d.alpha_zero == doctest::Approx(0.5));
    CHECK(d.mu_zero.at(1) == doctest::Approx(0.5));
    CHECK(d.mu_zero.at(2) == doctest::Approx(0.5));
}

TEST_CASE("kr_norm examples") {
    const auto F = PointZbar::finite;
    const MeasureZbar mu(0.2, 0.3, {{1, 0.25}, {-2, 0.25}});
    CHECK(kr_norm(SignedMeasureZbar(mu)) == doctest::Approx(1.0));
    CHECK(kr_norm(SignedMeasureZbar(mu) - SignedMeasureZbar(mu)) == 0.0);
    SignedMeasureZbar d;
    d.add(F(0), 1.0);
    d.add(F(1), -1.0);
    CHECK(kr_norm(d) == doctest::Approx(0.5));
    CHECK(kr_distance(MeasureZbar::dirac(F(0)), MeasureZbar::dirac(F(0))) == 0.0);
    CHECK(kr_distance(MeasureZbar::dirac(F(0)), MeasureZbar::dirac(PointZbar::plus_infinity())) ==
          doctest::Approx(1.0));
}

TEST_CASE("kr_norm agrees with LP vertex enumeration") {
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int i = 0; i < 500; ++i) {
        const auto nu = random_signed(rng, 4);
        worst = std::max(worst, std::abs(kr_norm(nu) - oracle::kr_norm_vertices(nu)));
    }
    CHECK(worst < 1e-7);
}

TEST_CASE("kr_norm structural properties") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> c(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        const auto a = random_signed(rng, 5), b = random_signed(rng, 5);
        const double t = c(rng);
        CHECK(kr_norm(t * a) == doctest::Approx(std::abs(t) * kr_norm(a)).epsilon(1e-12));
        CHECK(kr_norm(a + b) <= kr_norm(a) + kr_norm(b) + 1e-12);
        CHECK(kr_norm(SignedMeasureZbar(random_probability(rng))) == doctest::Approx(1.0).epsilon(1e-12));
        const auto h = random_point(rng), k = random_point(rng);
        SignedMeasureZbar dd;
        dd.add(h, 1.0);
        dd.add(k, -1.0);
        CHECK(kr_norm(dd) <= dist(h, k) + 1e-15);
    }
}

TEST_CASE("in_ball is an open ball") {
    const auto F = PointZbar::finite;
    std::mt19937_64 rng(5);
    const auto mu = random_probability(rng);
    CHECK(in_ball(mu, mu, 1e-9));
    CHECK_FALSE(in_ball(MeasureZbar::dirac(F(0)), MeasureZbar::dirac(F(1)), 0.5));
    CHECK(in_ball(MeasureZbar::dirac(F(0)), MeasureZbar::dirac(F(1)), 0.6));
}

TEST_CASE("kr_distance_counts matches kr_distance") {
    std::mt19937_64 rng(13);
    for (int i = 0; i < 300; ++i) {
        const int n = std::uniform_int_distribution<int>(1, 30)(rng);
        Word w{std::uniform_int_distribution<int>(-3, 3)(rng)};
        for (int j = 1; j < n; ++j) w.push_back(w.back() + ((rng() & 1) ? 1 : -1));
        const std::int64_t lo = *std::min_element(w.begin(), w.end()) - 2;
        std::vector<std::int64_t> counts(static_cast<std::size_t>(*std::max_element(w.begin(), w.end()) - lo + 3), 0);
        for (auto x : w) ++counts[static_cast<std::size_t>(x - lo)];
        const auto center = random_probability(rng);
        CHECK(kr_distance_counts(counts, lo, n, center) ==
              doctest::Approx(kr_distance(empirical_measure(w), center)).epsilon(1e-12));
    }
}

TEST_CASE("r_mu0") {
    CHECK(r_mu0({{0, 1.0}}, 0.5) == 1);
    CHECK(r_mu0({{-3, 0.5}, {3, 0.5}}, 0.1) == 4);
    CHECK(r_mu0({{0, 1.0}}, 0.99) == 1);
    CHECK(r_mu0({{0, 0.95}, {7, 0.05}}, 0.1) == 1);
}

TEST_CASE("empirical measure and occupation counts") {
    auto e = empirical_measure({0});
    CHECK(e.central() == CentralMeasure{{0, 1.0}});
    e = empirical_measure({0, 1, 0});
    CHECK(e.central().at(0) == doctest::Approx(2.0 / 3.0));
    CHECK(e.central().at(1) == doctest::Approx(1.0 / 3.0));
    e = empirical_measure({0, -1, 0, 1});
    CHECK(e.central().at(-1) == 0.25);
    CHECK(e.central().at(0) == 0.5);

    auto oc = occupation_counts({0, 1, 2}, 2);
    CHECK(oc.minus == 0);
    CHECK(oc.zero == 2);
    CHECK(oc.plus == 1);
    CHECK(oc.sites == std::map<std::int64_t, std::int64_t>{{0, 1}, {1, 1}, {2, 1}});
    oc = occupation_counts({0}, 3);
    CHECK(oc.zero == 1);
    oc = occupation_counts({-5, -6, -5}, 5);
    CHECK(oc.minus == 3);
    CHECK(oc.site(-5) == 2);
    CHECK(oc.site(-6) == 1);
}

TEST_CASE("restricted empirical measure") {
    CHECK(restricted_empirical({0, 1, 0}, 1) == CentralMeasure{{0, 1.0}});
    CHECK(restricted_empirical({0}, 1) == CentralMeasure{{0, 1.0}});
    auto r = restricted_empirical({0, 1, 2, 1, 0}, 2);
    CHECK(r.at(0) == 0.5);
    CHECK(r.at(1) == 0.5);
    CHECK_THROWS_AS(restricted_empirical({3, 4, 3}, 3), DomainError);
}
