#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "zbar/rate_functions.hpp"

using namespace zbar;

namespace {

TransitionProfile random_profile(std::mt19937_64& rng, int half_window = 3) {
    std::uniform_real_distribution<double> u(0.1, 0.9);
    std::map<std::int64_t, double> t;
    for (int k = -half_window; k <= half_window; ++k) t[k] = u(rng);
    return {-half_window, half_window, t, u(rng), u(rng)};
}

double kl_bernoulli(double a, double b) {
    auto term = [](double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); };
    return term(a, b) + term(1.0 - a, 1.0 - b);
}

// Geometric invariant measure of p(k) = p_plus (k >= 0), p_minus (k < 0) with
// p_plus = 1 - p_minus, on the window [-half-1, half], symmetric about -1/2.
CentralMeasure inward_invariant(double p_plus, int half) {
    const double r = p_plus / (1.0 - p_plus);
    CentralMeasure m;
    double s = 0.0;
    for (int k = 0; k <= half; ++k) {
        m[k] = std::pow(r, k);
        m[-k - 1] = std::pow(r, k);
        s += 2.0 * std::pow(r, k);
    }
    for (auto& [k, v] : m) v /= s;
    return m;
}

}  // namespace

TEST_CASE("RateValue sentinels") {
    CHECK(RateValue::unbounded(RateForm::cramer).is_infinite());
    CHECK(std::isinf(RateValue::unbounded(RateForm::cramer).value()));
    CHECK(format_rate(RateValue::unbounded(RateForm::cramer)) == "unbounded");
    CHECK_THROWS(RateValue::finite(std::nan(""), RateForm::cramer));
    CHECK(RateValue::finite(INFINITY, RateForm::cramer).is_infinite());
}

TEST_CASE("cgf") {
    CHECK(cgf(0.5, 0.0) == 0.0);
    for (double l : {-3.0, -0.4, 0.2, 1.7, 25.0}) CHECK(cgf(0.5, l) == doctest::Approx(std::log(std::cosh(l))));
    CHECK(cgf(0.7, 1.0) == doctest::Approx(std::log(0.7 * std::exp(1.0) + 0.3 * std::exp(-1.0))));
    CHECK(std::isfinite(cgf(0.3, 2000.0)));
    CHECK(cgf(0.3, 2000.0) == doctest::Approx(2000.0 + std::log(0.3)));
}

TEST_CASE("cramer") {
    for (double p : {0.1, 0.3, 0.5, 0.77}) CHECK(cramer(p, 2.0 * p - 1.0).value() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(cramer(0.5, 0.0).value() == 0.0);
    CHECK(cramer(0.3, 0.0).value() == doctest::Approx(0.0871766).epsilon(1e-6));
    CHECK(cramer(0.3, 1.5).is_infinite());
    CHECK(cramer(0.3, 1.0).value() == doctest::Approx(std::log(1.0 / 0.3)));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-1.0, 1.0), up(0.05, 0.95);
    for (int i = 0; i < 300; ++i) {
        const double p = up(rng), a = u(rng), b = u(rng);
        CHECK(cramer(p, (a + b) / 2).value() <= (cramer(p, a).value() + cramer(p, b).value()) / 2 + 1e-14);
        CHECK(cramer(p, a).value() == doctest::Approx(kl_bernoulli((1 + a) / 2, p)).epsilon(1e-12));
    }
}

TEST_CASE("cramer_at_zero and cramer_inf") {
    CHECK(cramer_at_zero(0.5).value() == 0.0);
    CHECK(cramer_at_zero(0.62).value() == doctest::Approx(0.029663).epsilon(1e-5));
    CHECK(cramer_at_zero(0.31).value() == doctest::Approx(0.077978).epsilon(1e-5));
    for (double p : {0.12, 0.31, 0.62, 0.9}) CHECK(std::abs(cramer_at_zero(p).value() - cramer(p, 0.0).value()) < 1e-14);
    CHECK(cramer_inf(0.62, Side::nonneg).value() == 0.0);
    CHECK(cramer_inf(0.31, Side::nonneg).value() == doctest::Approx(0.077978).epsilon(1e-5));
    CHECK(cramer_inf(0.5, Side::nonneg).value() == 0.0);
    CHECK(cramer_inf(0.5, Side::nonpos).value() == 0.0);
    CHECK(cramer_inf(0.7, Side::nonpos).value() == doctest::Approx(cramer_at_zero(0.7).value()));
}

TEST_CASE("DV gradient matches central differences") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pr = random_profile(rng);
        const DvObjective F({{-1, 0.3}, {0, 0.2}, {2, 0.5}}, pr, 3);
        std::vector<double> v(F.dim()), g;
        for (auto& x : v) x = u(rng);
        F.gradient(v, g);
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto vp = v, vm = v;
            vp[i] += 1e-6;
            vm[i] -= 1e-6;
            const double fd = (F.value(vp) - F.value(vm)) / 2e-6;
            CHECK(g[i] == doctest::Approx(fd).epsilon(1e-4).scale(1e-6));
        }
    }
}

TEST_CASE("DV examples") {
    const auto sym = TransitionProfile::homogeneous(0.5);
    const CentralMeasure pair{{0, 0.5}, {1, 0.5}};
    CHECK(dv_rate_variational(pair, sym).value() == doctest::Approx(std::log(2.0)).epsilon(1e-3));
    CHECK(dv_rate_kernel_form(pair, sym).value() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(dv_rate_variational({{0, 1.0}}, sym).is_infinite());
    CHECK(dv_rate_kernel_form({{0, 1.0}}, sym).is_infinite());

    const auto inward = TransitionProfile::two_sided(0.7, 0.3);
    const auto mu_inf = inward_invariant(0.3, 12);
    CHECK(dv_rate_variational(mu_inf, inward).value() <= 1e-3);
    CHECK(dv_rate_kernel_form(mu_inf, inward).value() <= 1e-3);
    const auto cert = dv_rate_variational(pair, sym).certificate;
    REQUIRE(cert.has_value());
    CHECK(cert->kind == "u");
    for (double u : cert->values) CHECK(u >= 1.0);
}

TEST_CASE("DV variational against kernel form on random small supports") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double worst = 0.0;
    int finite = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const auto pr = random_profile(rng);
        // Odd trials: edge fluxes J_e > 0 and mu(k) = (J_{k-1} + J_k) / 2, which admits a stationary
        // kernel. Even trials: generic weights, which do not.
        CentralMeasure m;
        const int lo = std::uniform_int_distribution<int>(-4, 2)(rng);
        const int len = std::uniform_int_distribution<int>(2, 5)(rng);
        std::vector<double> J(static_cast<std::size_t>(len + 1), 0.0);
        for (int e = 1; e < len; ++e) J[static_cast<std::size_t>(e)] = u(rng);
        double s = 0.0;
        for (int i = 0; i < len; ++i)
            s += (m[lo + i] = trial % 2 ? J[static_cast<std::size_t>(i)] + J[static_cast<std::size_t>(i + 1)] : u(rng));
        for (auto& [k, v] : m) v /= s;
        const auto var = dv_rate_variational(m, pr), ker = dv_rate_kernel_form(m, pr);
        CHECK(var.is_infinite() == ker.is_infinite());
        if (!ker.is_infinite()) {
            ++finite;
            CHECK(var.value() <= ker.value() + 1e-6);
            worst = std::max(worst, std::abs(var.value() - ker.value()));
        }
    }
    CHECK(finite >= 30);
    CHECK(worst < 3e-3);
}

TEST_CASE("composite rate examples") {
    const auto h7 = TransitionProfile::homogeneous(0.7);
    const auto plus = MeasureZbar::dirac(PointZbar::plus_infinity());
    const auto minus = MeasureZbar::dirac(PointZbar::minus_infinity());
    CHECK(composite_rate(plus, h7).value() == 0.0);
    CHECK(composite_rate(minus, h7).value() == doctest::Approx(0.087177).epsilon(1e-5));
    const auto blue = TransitionProfile::two_sided(0.31, 0.62);
    const MeasureZbar half(0.5, 0.5, {});
    CHECK(composite_rate(half, blue).value() == doctest::Approx(0.0148315).epsilon(1e-6));
    CHECK(composite_rate_closed(half, blue).value() == doctest::Approx(0.0148315).epsilon(1e-6));
    CHECK(composite_rate_variational(half, blue).value() == doctest::Approx(0.0148315).epsilon(1e-6));

    const auto in = TransitionProfile::two_sided(0.7, 0.3);
    const MeasureZbar thirds(1.0 / 3, 1.0 / 3, {{0, 1.0 / 3}});
    CHECK(composite_rate_closed(thirds, in).is_infinite());
    const MeasureZbar thirds_pair(1.0 / 3, 1.0 / 3, {{-1, 1.0 / 6}, {0, 1.0 / 6}});
    const double c = composite_rate_closed(thirds_pair, in).value();
    CHECK(std::isfinite(c));
    CHECK(composite_rate(thirds_pair, in).value() == doctest::Approx(c).epsilon(1e-12));
    CHECK(composite_rate_variational(thirds_pair, in).value() == doctest::Approx(c).epsilon(1e-8));
    // no cheaper than the central part alone
    CHECK(c >= dv_rate_variational({{-1, 0.5}, {0, 0.5}}, in).value() / 3 - 1e-9);

    const auto sym = TransitionProfile::homogeneous(0.5);
    for (double a : {0.0, 0.2, 0.9}) CHECK(composite_rate_closed(MeasureZbar(a, 1 - a, {}), sym).value() == 0.0);
    CHECK(composite_rate_variational(plus, h7).value() == doctest::Approx(0.0).scale(1e-10));
    CHECK(composite_rate_variational(minus, blue).value() ==
          doctest::Approx(cramer_inf(0.31, Side::nonpos).value()).scale(1e-10));
}

TEST_CASE("composite forms agree on shared inputs across regimes") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int regimes[4] = {0, 0, 0, 0};
    for (int i = 0; i < 200; ++i) {
        const double pm = i % 4 < 2 ? 0.05 + 0.44 * u(rng) : 0.5 + 0.45 * u(rng);
        const double pp = i % 2 == 0 ? 0.05 + 0.44 * u(rng) : 0.5 + 0.45 * u(rng);
        ++regimes[static_cast<int>(regime_of(pm, pp))];
        double a0 = u(rng) < 0.2 ? 0.0 : u(rng), am = u(rng), ap = u(rng);
        const double s = a0 + am + ap;
        const CompositeInputs in{am / s, a0 / s, ap / s, u(rng) < 0.1 ? INFINITY : 0.3 * u(rng), pm, pp};
        const double mn = composite_min_value(in), cl = composite_closed_value(in), va = composite_variational_value(in, 64);
        if (std::isinf(mn)) {
            CHECK(std::isinf(cl));
            CHECK(std::isinf(va));
            continue;
        }
        CHECK(std::abs(mn - cl) <= 1e-12);
        CHECK(std::abs(mn - va) <= 1e-8);
    }
    for (int r : regimes) CHECK(r >= 40);
}

TEST_CASE("segment profile") {
    const auto blue = segment_profile(TransitionProfile::two_sided(0.31, 0.62), 2000);
    CHECK(blue.front().second == 0.0);
    CHECK(blue.back().second == 0.0);
    auto peak = *std::max_element(blue.begin(), blue.end(), [](auto& a, auto& b) { return a.second < b.second; });
    CHECK(peak.second == doctest::Approx(0.02149).epsilon(1e-4 / 0.02149));
    CHECK(std::abs(peak.first - 0.7244) < 1e-3);
    const auto red = segment_profile(TransitionProfile::two_sided(0.35, 0.8), 100);
    CHECK(red.front().second == 0.0);
    CHECK(red.back().second == 0.0);
    for (const auto* c : {&blue, &red})
        for (std::size_t i = 1; i + 1 < c->size(); ++i)
            CHECK((*c)[i - 1].second + (*c)[i + 1].second - 2 * (*c)[i].second <= 1e-10);
    for (const auto& [a, r] : segment_profile(TransitionProfile::homogeneous(0.5), 50)) CHECK(r == 0.0);
}

TEST_CASE("contraction rate") {
    const auto h7 = TransitionProfile::homogeneous(0.7);
    const auto c = Observable::constant(0.4);
    CHECK(contraction_rate({c}, {0.4}, h7).value() == doctest::Approx(0.0).scale(1e-9));
    CHECK(contraction_rate({c}, {0.1}, h7).is_infinite());
    const Observable sign{-1, 1, {-1.0, 0.0, 1.0}, -1.0, 1.0};
    CHECK(contraction_rate({sign}, {1.0}, h7).value() <= 1e-6);
    CHECK(contraction_rate({sign}, {-1.0}, h7).value() <= cramer_at_zero(0.7).value() + 1e-6);
    CHECK(contraction_rate({sign}, {1.5}, h7).is_infinite());
}
