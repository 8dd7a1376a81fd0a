#include "zbar/rate_functions.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace zbar {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogy_ratio(double a, double b) { return a > 0.0 ? a * std::log(a / b) : 0.0; }

double mul(double alpha, double rate) { return alpha == 0.0 ? 0.0 : alpha * rate; }

void check_p(double p) {
    if (!(p > 0.0 && p < 1.0)) throw ValidationError("p", "must lie strictly inside (0,1)");
}

// log(exp(a) + exp(b))
double lse(double a, double b) {
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

double logistic(double t) {
    if (t >= 0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

}  // namespace

std::string to_string(RateForm f) {
    switch (f) {
    case RateForm::cramer: return "cramer";
    case RateForm::dv_variational: return "dv_variational";
    case RateForm::dv_kernel: return "dv_kernel";
    case RateForm::composite_min: return "composite_min";
    case RateForm::composite_variational: return "composite_variational";
    case RateForm::composite_closed: return "composite_closed";
    case RateForm::contraction: return "contraction";
    }
    return "unknown";
}

RateValue RateValue::finite(double v, RateForm form) {
    if (std::isnan(v)) throw DomainError("rate value is NaN");
    if (std::isinf(v)) return unbounded(form);
    return {std::max(0.0, v), false, form};
}

RateValue RateValue::unbounded(RateForm form) { return {0.0, true, form}; }

double RateValue::value() const { return infinite_ ? kInf : value_; }

std::string format_rate(const RateValue& r) {
    if (r.is_infinite()) return "unbounded";
    std::ostringstream os;
    os.precision(17);
    os << r.value();
    return os.str();
}

double cgf(double p, double lambda) {
    check_p(p);
    return lse(std::log(p) + lambda, std::log1p(-p) - lambda);
}

RateValue cramer(double p, double x) {
    check_p(p);
    if (std::abs(x) > 1.0) return RateValue::unbounded(RateForm::cramer);
    const double a = 0.5 * (1.0 - x), b = 0.5 * (1.0 + x);
    return RateValue::finite(xlogy_ratio(a, 1.0 - p) + xlogy_ratio(b, p), RateForm::cramer);
}

RateValue cramer_at_zero(double p) {
    check_p(p);
    return RateValue::finite(-0.5 * std::log(4.0 * p * (1.0 - p)), RateForm::cramer);
}

RateValue cramer_inf(double p, Side side) {
    check_p(p);
    const bool pays = side == Side::nonneg ? p <= 0.5 : p >= 0.5;
    return pays ? cramer_at_zero(p) : RateValue::finite(0.0, RateForm::cramer);
}

DvObjective::DvObjective(const CentralMeasure& mu_zero, const TransitionProfile& profile, int pad) {
    if (mu_zero.empty()) throw ValidationError("mu_zero", "empty measure");
    if (pad < 1) throw ValidationError("window_pad", "must be >= 1");
    double total = 0.0;
    for (const auto& [k, w] : mu_zero) {
        if (!(w > 0.0)) throw ValidationError("mu_zero", "weights must be > 0");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mu_zero", "not a probability measure");
    const std::int64_t lo = mu_zero.begin()->first, hi = mu_zero.rbegin()->first;
    offset_ = lo - pad;
    dim_ = static_cast<std::size_t>(hi - lo + 1 + 2 * pad);
    for (const auto& [k, w] : mu_zero) terms_.push_back({static_cast<std::size_t>(k - offset_), w, profile.p(k)});
}

double DvObjective::value(const std::vector<double>& v) const {
    double F = 0.0;
    for (const auto& t : terms_)
        F += t.mu * (v[t.i] - lse(std::log(t.p) + v[t.i + 1], std::log1p(-t.p) + v[t.i - 1]));
    return F;
}

void DvObjective::gradient(const std::vector<double>& v, std::vector<double>& g) const {
    g.assign(dim_, 0.0);
    for (const auto& t : terms_) {
        const double a = logistic(std::log(t.p) - std::log1p(-t.p) + v[t.i + 1] - v[t.i - 1]);
        g[t.i] += t.mu;
        g[t.i + 1] -= t.mu * a;
        g[t.i - 1] -= t.mu * (1.0 - a);
    }
}

void DvObjective::hessian(const std::vector<double>& v, std::vector<double>& H) const {
    H.assign(dim_ * dim_, 0.0);
    for (const auto& t : terms_) {
        const double a = logistic(std::log(t.p) - std::log1p(-t.p) + v[t.i + 1] - v[t.i - 1]);
        const double c = t.mu * a * (1.0 - a);
        const std::size_t u = t.i + 1, d = t.i - 1;
        H[u * dim_ + u] -= c;
        H[d * dim_ + d] -= c;
        H[u * dim_ + d] += c;
        H[d * dim_ + u] += c;
    }
}

RateValue dv_rate_variational(const CentralMeasure& mu_zero, const TransitionProfile& profile, const DvOptions& opts) {
    const DvObjective obj(mu_zero, profile, opts.window_pad);
    const std::size_t n = obj.dim();
    std::vector<double> v(n, 0.0), trial(n), g, H;
    double F = obj.value(v);
    double lambda = 1.0;
    int it = 0;
    // Projected Levenberg-Marquardt ascent on v >= 0.
    for (; it < opts.max_iters; ++it) {
        obj.gradient(v, g);
        obj.hessian(v, H);
        std::vector<std::size_t> free;
        double pg = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            if (v[i] > 0.0 || g[i] > 0.0) {
                free.push_back(i);
                pg = std::max(pg, std::abs(g[i]));
            }
        if (free.empty() || pg < 1e-15) break;
        const auto m = static_cast<Eigen::Index>(free.size());
        Eigen::MatrixXd A(m, m);
        Eigen::VectorXd b(m);
        for (Eigen::Index r = 0; r < m; ++r) {
            b(r) = g[free[r]];
            for (Eigen::Index c = 0; c < m; ++c) A(r, c) = -H[free[r] * n + free[c]];
            A(r, r) += lambda;
        }
        const Eigen::VectorXd d = A.llt().solve(b);
        trial = v;
        for (Eigen::Index r = 0; r < m; ++r) trial[free[r]] = std::max(0.0, v[free[r]] + d(r));
        const double Ft = obj.value(trial);
        if (Ft > F) {
            const double gain = Ft - F;
            v.swap(trial);
            F = Ft;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (F > opts.cap && gain > opts.tol) return RateValue::unbounded(RateForm::dv_variational);
            if (gain < opts.tol && pg < 1e-7) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e15) break;
        }
    }
    RateValue out = RateValue::finite(F, RateForm::dv_variational);
    Certificate cert{"u", {}, {}, it};
    for (std::size_t i = 0; i < n; ++i) {
        cert.sites.push_back(obj.offset() + static_cast<std::int64_t>(i));
        cert.values.push_back(std::exp(v[i]));
    }
    out.certificate = std::move(cert);
    return out;
}

RateValue dv_rate_kernel_form(const CentralMeasure& mu_zero, const TransitionProfile& profile, double tol) {
    if (mu_zero.empty()) throw ValidationError("mu_zero", "empty measure");
    double total = 0.0;
    for (const auto& [k, w] : mu_zero) {
        if (!(w > 0.0)) throw ValidationError("mu_zero", "weights must be > 0");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("mu_zero", "not a probability measure");

    // Zero net flux across every edge forces J_y = mu(y) - J_{y-1} on each maximal block.
    Certificate cert{"kernel", {}, {}, 0};
    double value = 0.0;
    auto it = mu_zero.begin();
    while (it != mu_zero.end()) {
        auto block_end = std::next(it);
        while (block_end != mu_zero.end() && block_end->first == std::prev(block_end)->first + 1) ++block_end;
        double J_prev = 0.0;
        for (auto s = it; s != block_end; ++s) {
            const double mu = s->second;
            const double J = mu - J_prev;
            const bool last = std::next(s) == block_end;
            if (last ? std::abs(J) > tol : J < -tol) return RateValue::unbounded(RateForm::dv_kernel);
            const double up = last ? 0.0 : std::clamp(J / mu, 0.0, 1.0);
            const double p = profile.p(s->first);
            value += mu * (xlogy_ratio(up, p) + xlogy_ratio(1.0 - up, 1.0 - p));
            cert.sites.push_back(s->first);
            cert.values.push_back(up);
            J_prev = last ? 0.0 : J;
        }
        it = block_end;
    }
    RateValue out = RateValue::finite(value, RateForm::dv_kernel);
    out.certificate = std::move(cert);
    return out;
}

Regime regime_of(double p_minus, double p_plus) {
    if (p_plus < 0.5 && p_minus < 0.5) return Regime::both_below;
    if (p_plus >= 0.5 && p_minus >= 0.5) return Regime::both_above;
    if (p_plus < 0.5) return Regime::inward;
    return Regime::outward;
}

Regime regime_of(const TransitionProfile& profile) { return regime_of(profile.tail_minus(), profile.tail_plus()); }

std::string to_string(Regime r) {
    switch (r) {
    case Regime::both_below: return "both_below";
    case Regime::both_above: return "both_above";
    case Regime::inward: return "inward";
    case Regime::outward: return "outward";
    }
    return "unknown";
}

double composite_min_value(const CompositeInputs& in) {
    const double Im0 = cramer_at_zero(in.p_minus).value(), Ip0 = cramer_at_zero(in.p_plus).value();
    const double inf_p = cramer_inf(in.p_plus, Side::nonneg).value();
    const double inf_m = cramer_inf(in.p_minus, Side::nonpos).value();
    const double base = mul(in.alpha_zero, in.dv);
    return base + std::min(mul(in.alpha_minus, Im0) + mul(in.alpha_plus, inf_p),
                           mul(in.alpha_plus, Ip0) + mul(in.alpha_minus, inf_m));
}

double composite_closed_value(const CompositeInputs& in) {
    const double Im = mul(in.alpha_minus, cramer_at_zero(in.p_minus).value());
    const double Ip = mul(in.alpha_plus, cramer_at_zero(in.p_plus).value());
    const double base = mul(in.alpha_zero, in.dv);
    switch (regime_of(in.p_minus, in.p_plus)) {
    case Regime::both_below: return base + Ip;
    case Regime::both_above: return base + Im;
    case Regime::inward: return base + Im + Ip;
    case Regime::outward: return base + std::min(Ip, Im);
    }
    return kInf;
}

namespace {

// min over [a,b] of alpha * I^p(x): grid scan, then golden section around the best node.
double min_on_segment(double alpha, double p, double a, double b, int grid) {
    if (alpha == 0.0) return 0.0;
    auto h = [&](double x) { return alpha * cramer(p, x).value(); };
    int best = 0;
    double best_val = kInf;
    for (int i = 0; i < grid; ++i) {
        const double x = a + (b - a) * i / (grid - 1);
        const double y = h(x);
        if (y < best_val) {
            best_val = y;
            best = i;
        }
    }
    double lo = a + (b - a) * std::max(0, best - 1) / (grid - 1);
    double hi = a + (b - a) * std::min(grid - 1, best + 1) / (grid - 1);
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - r * (hi - lo), x2 = lo + r * (hi - lo);
    double f1 = h(x1), f2 = h(x2);
    for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
        if (f1 < f2) {
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
    return std::min({best_val, f1, f2, h(0.5 * (lo + hi))});
}

}  // namespace

double composite_variational_value(const CompositeInputs& in, int grid_size) {
    if (grid_size < 2) throw ValidationError("grid_size", "must be >= 2");
    const double base = mul(in.alpha_zero, in.dv);
    // Segment x- = 0, x+ in [0,1]; segment x+ = 0, x- in [-1,0].
    const double segA = mul(in.alpha_minus, cramer(in.p_minus, 0.0).value()) +
                        min_on_segment(in.alpha_plus, in.p_plus, 0.0, 1.0, grid_size);
    const double segB = mul(in.alpha_plus, cramer(in.p_plus, 0.0).value()) +
                        min_on_segment(in.alpha_minus, in.p_minus, -1.0, 0.0, grid_size);
    return base + std::min(segA, segB);
}

CompositeInputs composite_inputs(const MeasureZbar& mu, const TransitionProfile& profile, const DvOptions& dv_opts,
                                 std::optional<Certificate>* dv_cert) {
    const Decomposition d = decompose(mu);
    CompositeInputs in{d.alpha_minus, d.alpha_zero, d.alpha_plus, 0.0, profile.tail_minus(), profile.tail_plus()};
    if (d.alpha_zero > 0.0) {
        RateValue dv = dv_rate_variational(d.mu_zero, profile, dv_opts);
        in.dv = dv.value();
        if (dv_cert) *dv_cert = dv.certificate;
    }
    return in;
}

RateValue composite_rate(const MeasureZbar& mu, const TransitionProfile& profile, const DvOptions& dv_opts) {
    return RateValue::finite(composite_min_value(composite_inputs(mu, profile, dv_opts)), RateForm::composite_min);
}

RateValue composite_rate_closed(const MeasureZbar& mu, const TransitionProfile& profile, const DvOptions& dv_opts) {
    return RateValue::finite(composite_closed_value(composite_inputs(mu, profile, dv_opts)),
                             RateForm::composite_closed);
}

RateValue composite_rate_variational(const MeasureZbar& mu, const TransitionProfile& profile, int grid_size,
                                     const DvOptions& dv_opts) {
    return RateValue::finite(composite_variational_value(composite_inputs(mu, profile, dv_opts), grid_size),
                             RateForm::composite_variational);
}

std::vector<std::pair<double, double>> segment_profile(const TransitionProfile& profile, int grid) {
    if (grid < 3) throw ValidationError("grid", "must be >= 3");
    std::vector<std::pair<double, double>> out;
    out.reserve(static_cast<std::size_t>(grid));
    for (int i = 0; i < grid; ++i) {
        const double a = static_cast<double>(i) / (grid - 1);
        const CompositeInputs in{1.0 - a, 0.0, a, 0.0, profile.tail_minus(), profile.tail_plus()};
        out.emplace_back(a, composite_min_value(in));
    }
    return out;
}

Observable Observable::constant(double c) { return {0, 0, {c}, c, c}; }

}  // namespace zbar
