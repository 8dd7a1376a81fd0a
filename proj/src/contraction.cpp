#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "zbar/rate_functions.hpp"

namespace zbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log of the Perron root of the walk killed outside [lo,hi] and reweighted by exp(g(y)).
double log_perron(const TransitionProfile& profile, std::int64_t lo, const std::vector<double>& g) {
    const auto m = static_cast<Eigen::Index>(g.size());
    if (m == 1) return -kInf;
    std::vector<double> ls(static_cast<std::size_t>(m - 1));
    double c = -kInf;
    for (Eigen::Index i = 0; i + 1 < m; ++i) {
        const std::int64_t x = lo + i;
        ls[i] = 0.5 * (std::log(profile.p(x)) + std::log1p(-profile.p(x + 1)) + g[i] + g[i + 1]);
        c = std::max(c, ls[i]);
    }
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(m), sub(m - 1);
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = std::exp(ls[i] - c);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    return c + std::log(es.eigenvalues()(m - 1));
}

double golden_max(const std::function<double(double)>& h, double lo, double hi, int iters) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = h(x1), f2 = h(x2);
    for (int k = 0; k < iters; ++k) {
        if (f1 > f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = h(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = h(x2);
        }
    }
    return std::max(f1, f2);
}

}  // namespace

RateValue contraction_rate(const std::vector<Observable>& f, const std::vector<double>& x,
                           const TransitionProfile& profile, const ContractionOptions& opts) {
    const std::size_t d = f.size();
    if (d < 1 || d > 2) throw ValidationError("f", "only one or two observables are supported");
    if (x.size() != d) throw ValidationError("x", "dimension does not match the observables");
    if (opts.window_lo > opts.window_hi) throw ValidationError("window", "empty window");
    if (opts.alpha_grid < 1) throw ValidationError("alpha_grid", "must be >= 1");

    const std::int64_t lo = opts.window_lo;
    const auto W = static_cast<std::size_t>(opts.window_hi - lo + 1);
    std::vector<std::vector<double>> fw(d, std::vector<double>(W));
    std::vector<double> fmin(d, kInf), fmax(d, -kInf);
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t i = 0; i < W; ++i) {
            fw[c][i] = f[c](lo + static_cast<std::int64_t>(i));
            fmin[c] = std::min(fmin[c], fw[c][i]);
            fmax[c] = std::max(fmax[c], fw[c][i]);
        }

    std::vector<double> g(W);
    auto neg_rate = [&](const std::vector<double>& lam, const std::vector<double>& m) {
        double lin = 0.0;
        for (std::size_t i = 0; i < W; ++i) {
            g[i] = 0.0;
            for (std::size_t c = 0; c < d; ++c) g[i] += lam[c] * fw[c][i];
        }
        for (std::size_t c = 0; c < d; ++c) lin += lam[c] * m[c];
        return lin - log_perron(profile, lo, g);
    };
    // Inner value: sup over lambda of <lambda, m> - log rho(lambda).
    auto inner = [&](const std::vector<double>& m) {
        const double L = opts.lambda_max;
        if (d == 1) {
            return golden_max([&](double l) { return neg_rate({l}, m); }, -L, L, 90);
        }
        return golden_max(
            [&](double l1) { return golden_max([&](double l2) { return neg_rate({l1, l2}, m); }, -L, L, 60); }, -L,
            L, 60);
    };

    double best = kInf;
    auto consider_boundary = [&](double am, double ap) {
        for (std::size_t c = 0; c < d; ++c)
            if (std::abs(ap * f[c].f_plus + am * f[c].f_minus - x[c]) > 1e-9) return;
        best = std::min(best, composite_min_value({am, 0.0, ap, 0.0, profile.tail_minus(), profile.tail_plus()}));
    };
    const int G = opts.alpha_grid;
    for (int i = 0; i <= G; ++i)
        for (int j = 0; i + j <= G; ++j) {
            const double am = static_cast<double>(i) / G, ap = static_cast<double>(j) / G;
            const double a0 = 1.0 - am - ap;
            if (i + j == G) {
                consider_boundary(am, ap);
                continue;
            }
            std::vector<double> m(d);
            bool feasible = true;
            for (std::size_t c = 0; c < d; ++c) {
                m[c] = (x[c] - ap * f[c].f_plus - am * f[c].f_minus) / a0;
                if (m[c] < fmin[c] - 1e-12 || m[c] > fmax[c] + 1e-12) feasible = false;
            }
            if (!feasible) continue;
            const double J = inner(m);
            best = std::min(best, composite_min_value({am, a0, ap, J, profile.tail_minus(), profile.tail_plus()}));
        }
    // Exact solutions of the constraint with no central mass.
    for (std::size_t c = 0; c < d; ++c) {
        const double span = f[c].f_plus - f[c].f_minus;
        if (span != 0.0) {
            const double ap = (x[c] - f[c].f_minus) / span;
            if (ap >= 0.0 && ap <= 1.0) consider_boundary(1.0 - ap, ap);
        }
    }
    if (std::isinf(best)) return RateValue::unbounded(RateForm::contraction);
    return RateValue::finite(best, RateForm::contraction);
}

}  // namespace zbar
