#include <cmath>
#include <random>

#include "doctest.h"
#include "zbar/state_space.hpp"

using namespace zbar;

namespace {

TransitionProfile deviating(std::int64_t lo, std::int64_t hi, std::map<std::int64_t, double> dev, double tm, double tp) {
    std::map<std::int64_t, double> t;
    for (std::int64_t k = lo; k <= hi; ++k) t[k] = k < 0 ? tm : tp;
    for (auto [k, v] : dev) t[k] = v;
    return {lo, hi, t, tm, tp};
}

}  // namespace

TEST_CASE("varphi values and monotonicity") {
    CHECK(varphi(PointZbar::plus_infinity()) == 1.0);
    CHECK(varphi(PointZbar::minus_infinity()) == -1.0);
    CHECK(varphi(0) == 0.0);
    CHECK(varphi(2) == 0.75);
    CHECK(varphi(-3) == doctest::Approx(-0.875));
    CHECK(varphi(5000) == 1.0);
    CHECK(varphi(-5000) == -1.0);
    // strict until 1 - 2^-k rounds to 1
    for (std::int64_t k = -53; k < 53; ++k) CHECK(varphi(k) < varphi(k + 1));
    CHECK(varphi(53) < varphi(PointZbar::plus_infinity()));
    for (std::int64_t k = 53; k < 80; ++k) CHECK(varphi(k) <= varphi(k + 1));
}

TEST_CASE("dist examples and triangle inequality") {
    const auto F = PointZbar::finite;
    CHECK(dist(F(0), F(1)) == 0.5);
    CHECK(dist(PointZbar::minus_infinity(), PointZbar::plus_infinity()) == 2.0);
    CHECK(dist(F(3), PointZbar::plus_infinity()) == 0.125);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-12, 12);
    auto pick = [&]() {
        const int v = d(rng);
        if (v == 12) return PointZbar::plus_infinity();
        if (v == -12) return PointZbar::minus_infinity();
        return F(v);
    };
    for (int i = 0; i < 2000; ++i) {
        const auto a = pick(), b = pick(), c = pick();
        CHECK(dist(a, c) <= dist(a, b) + dist(b, c) + 1e-15);
        CHECK(dist(a, b) == dist(b, a));
        CHECK((dist(a, b) == 0.0) == (a == b));
    }
}

TEST_CASE("step_prob") {
    const auto h5 = TransitionProfile::homogeneous(0.5), h7 = TransitionProfile::homogeneous(0.7);
    CHECK(step_prob(h5, 0, 1) == 0.5);
    CHECK(step_prob(h7, 5, 4) == doctest::Approx(0.3));
    CHECK(step_prob(h7, 0, 2) == 0.0);
    const auto pr = deviating(-2, 2, {{-1, 0.13}, {2, 0.91}}, 0.4, 0.6);
    for (std::int64_t x = -5; x <= 5; ++x) CHECK(step_prob(pr, x, x + 1) + step_prob(pr, x, x - 1) == 1.0);
}

TEST_CASE("profile validation names the key") {
    auto key_of = [](auto&& f) {
        try {
            f();
        } catch (const ValidationError& e) {
            return e.key();
        }
        return std::string("none");
    };
    CHECK(key_of([] { TransitionProfile(-1, 1, {{-1, 0.5}, {0, 0.5}, {1, 0.5}}, 0.5, 1.2); }) == "tail_plus");
    CHECK(key_of([] { TransitionProfile(-1, 1, {{-1, 0.5}, {0, 0.5}, {1, 0.5}}, 0.0, 0.5); }) == "tail_minus");
    CHECK(key_of([] { TransitionProfile(1, 2, {{1, 0.5}, {2, 0.5}}, 0.5, 0.5); }) == "window_lo");
    CHECK(key_of([] { TransitionProfile(0, 1, {{0, 0.5}}, 0.5, 0.5); }) == "table");
    CHECK(key_of([] { TransitionProfile(0, 1, {{0, 0.5}, {1, 1.0}}, 0.5, 0.5); }).rfind("table", 0) == 0);
}

TEST_CASE("r_zbar") {
    CHECK(r_zbar(1.0) == 1);
    CHECK(r_zbar(0.5) == 2);
    CHECK(r_zbar(0.1) == 5);
    CHECK_THROWS_AS(r_zbar(0.0), ValidationError);
    for (double eps : {0.3, 0.1, 0.01, 1e-4}) {
        const auto R = r_zbar(eps);
        for (std::int64_t k = R; k < R + 5; ++k) {
            CHECK(dist(PointZbar::finite(k), PointZbar::plus_infinity()) < eps);
            CHECK(dist(PointZbar::finite(-k), PointZbar::minus_infinity()) < eps);
        }
    }
}

TEST_CASE("tail_gap") {
    CHECK(tail_gap(TransitionProfile::homogeneous(0.3), 0.1) == 0.0);
    CHECK(tail_gap(deviating(-1, 1, {{0, 0.9}}, 0.4, 0.6), 0.5) == 0.0);
    CHECK(tail_gap(deviating(0, 6, {{5, 0.6}}, 0.5, 0.5), 0.1) == doctest::Approx(0.2));
    // Tends to zero along dyadic breakpoints.
    const auto pr = deviating(-4, 4, {{-4, 0.9}, {3, 0.2}, {4, 0.45}}, 0.7, 0.3);
    CHECK(tail_gap(pr, std::ldexp(1.0, -4)) == 0.0);
}

TEST_CASE("epsilon_star") {
    CHECK(epsilon_star(TransitionProfile::homogeneous(0.4)).unbounded);
    CHECK(epsilon_star(deviating(-2, 2, {{1, 0.55}, {-2, 0.45}}, 0.5, 0.5)).unbounded);
    const auto e = epsilon_star(deviating(0, 7, {{7, 0.5}}, 0.5, 0.2));
    REQUIRE_FALSE(e.unbounded);
    CHECK(e.value == std::ldexp(1.0, -6));
    CHECK(tail_gap(deviating(0, 7, {{7, 0.5}}, 0.5, 0.2), e.value * 0.999) < 1.0);
    CHECK(tail_gap(deviating(0, 7, {{7, 0.5}}, 0.5, 0.2), e.value * 1.001) >= 1.0);
    CHECK(to_string(epsilon_star(TransitionProfile::homogeneous(0.4))) == "unbounded");
}

TEST_CASE("comparison_slack") {
    CHECK(comparison_slack_from_gap(0.0) == 0.0);
    CHECK(comparison_slack_from_gap(0.5) == doctest::Approx(std::log(2.0)));
    CHECK(comparison_slack_from_gap(0.1) == doctest::Approx(0.1053605157));
    CHECK_THROWS_AS(comparison_slack_from_gap(1.0), DomainError);
    CHECK(comparison_slack(TransitionProfile::homogeneous(0.3), 0.2) == 0.0);
}

TEST_CASE("p_star") {
    CHECK(p_star(TransitionProfile::homogeneous(0.5)) == 0.5);
    CHECK(p_star(TransitionProfile::homogeneous(0.7)) == doctest::Approx(0.3));
    CHECK(p_star(TransitionProfile(0, 0, {{0, 0.9}}, 0.5, 0.5)) == doctest::Approx(0.1));
}

TEST_CASE("regions partition the line") {
    for (std::int64_t R : {1, 2, 5})
        for (std::int64_t k = -9; k <= 9; ++k) {
            const int r = region(k, R);
            CHECK((r == -1) == (k <= -R));
            CHECK((r == 1) == (k >= R));
        }
    CHECK(region(PointZbar::plus_infinity(), 3) == 1);
    CHECK(region(PointZbar::minus_infinity(), 3) == -1);
}
