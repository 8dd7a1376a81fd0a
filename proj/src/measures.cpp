#include "zbar/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace zbar {

bool is_word(const Word& w) {
    if (w.empty()) return false;
    for (std::size_t i = 1; i < w.size(); ++i)
        if (std::abs(w[i] - w[i - 1]) != 1) return false;
    return true;
}

void require_word(const Word& w, const char* what) {
    if (w.empty()) throw ValidationError(what, "empty word");
    if (!is_word(w)) throw ValidationError(what, "consecutive letters are not adjacent");
}

MeasureZbar::MeasureZbar(double alpha_minus, double alpha_plus, CentralMeasure central)
    : alpha_minus_(alpha_minus), alpha_plus_(alpha_plus), alpha_zero_(0.0), central_(std::move(central)) {
    if (!(alpha_minus_ >= 0.0)) throw ValidationError("alpha_minus", "must be >= 0");
    if (!(alpha_plus_ >= 0.0)) throw ValidationError("alpha_plus", "must be >= 0");
    double comp = 0.0;  // Neumaier compensation; words can visit tens of thousands of sites
    for (const auto& [k, w] : central_) {
        if (!(w > 0.0)) throw ValidationError("central." + std::to_string(k), "weights must be > 0");
        const double t = alpha_zero_ + w;
        comp += std::abs(alpha_zero_) >= w ? (alpha_zero_ - t) + w : (w - t) + alpha_zero_;
        alpha_zero_ = t;
    }
    alpha_zero_ += comp;
    const double total = alpha_minus_ + alpha_plus_ + alpha_zero_;
    if (std::abs(total - 1.0) > 1e-12) throw ValidationError("central", "total mass differs from 1 by more than 1e-12");
}

MeasureZbar MeasureZbar::dirac(const PointZbar& x) {
    switch (x.tag) {
    case PointZbar::Tag::minus_infinity: return {1.0, 0.0, {}};
    case PointZbar::Tag::plus_infinity: return {0.0, 1.0, {}};
    default: return {0.0, 0.0, {{x.k, 1.0}}};
    }
}

Decomposition decompose(const MeasureZbar& mu) {
    Decomposition d{mu.alpha_minus(), mu.alpha_zero(), mu.alpha_plus(), {}};
    if (d.alpha_zero > 0.0) {
        for (const auto& [k, w] : mu.central()) d.mu_zero[k] = w / d.alpha_zero;
    } else {
        d.mu_zero[0] = 1.0;
    }
    return d;
}

SignedMeasureZbar::SignedMeasureZbar(const MeasureZbar& mu) {
    if (mu.alpha_minus() != 0.0) atoms_[PointZbar::minus_infinity()] = mu.alpha_minus();
    if (mu.alpha_plus() != 0.0) atoms_[PointZbar::plus_infinity()] = mu.alpha_plus();
    for (const auto& [k, w] : mu.central()) atoms_[PointZbar::finite(k)] = w;
}

void SignedMeasureZbar::add(const PointZbar& x, double w) { atoms_[x] += w; }

SignedMeasureZbar& SignedMeasureZbar::operator+=(const SignedMeasureZbar& o) {
    for (const auto& [x, w] : o.atoms_) atoms_[x] += w;
    return *this;
}

SignedMeasureZbar& SignedMeasureZbar::operator-=(const SignedMeasureZbar& o) {
    for (const auto& [x, w] : o.atoms_) atoms_[x] -= w;
    return *this;
}

SignedMeasureZbar& SignedMeasureZbar::operator*=(double c) {
    for (auto& [x, w] : atoms_) w *= c;
    return *this;
}

SignedMeasureZbar operator+(SignedMeasureZbar a, const SignedMeasureZbar& b) { return a += b; }
SignedMeasureZbar operator-(SignedMeasureZbar a, const SignedMeasureZbar& b) { return a -= b; }
SignedMeasureZbar operator*(double c, SignedMeasureZbar a) { return a *= c; }

namespace {

// Concave piecewise-linear function on [-1,1] given by its breakpoints.
struct PiecewiseLinear {
    std::vector<double> x;
    std::vector<double> y;

    double at(double t) const {
        if (t <= x.front()) return y.front();
        if (t >= x.back()) return y.back();
        auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - x.begin());
        const double x0 = x[j - 1], x1 = x[j];
        if (x1 == x0) return std::max(y[j - 1], y[j]);
        const double s = (t - x0) / (x1 - x0);
        return y[j - 1] + s * (y[j] - y[j - 1]);
    }
};

}  // namespace

double kr_norm_sorted(const std::vector<double>& phi, const std::vector<double>& nu) {
    const std::size_t m = phi.size();
    if (m == 0) return 0.0;
    // V_i(g) = best partial objective over f_1..f_i with f_i = g.
    PiecewiseLinear V{{-1.0, 1.0}, {-nu[0], nu[0]}};
    std::vector<double> cand;
    for (std::size_t i = 1; i < m; ++i) {
        const double d = phi[i] - phi[i - 1];
        const std::size_t js = static_cast<std::size_t>(std::max_element(V.y.begin(), V.y.end()) - V.y.begin());
        const double fs = V.x[js], fv = V.y[js];
        cand.clear();
        cand.push_back(-1.0);
        cand.push_back(1.0);
        for (std::size_t j = 0; j <= js; ++j) cand.push_back(V.x[j] - d);
        for (std::size_t j = js; j < V.x.size(); ++j) cand.push_back(V.x[j] + d);
        std::sort(cand.begin(), cand.end());
        PiecewiseLinear W;
        for (double g : cand) {
            if (g < -1.0 || g > 1.0) continue;
            if (!W.x.empty() && g == W.x.back()) continue;
            double w;
            if (g - d > fs) w = V.at(g - d);
            else if (g + d < fs) w = V.at(g + d);
            else w = fv;
            W.x.push_back(g);
            W.y.push_back(w + nu[i] * g);
        }
        V = std::move(W);
    }
    return std::max(0.0, *std::max_element(V.y.begin(), V.y.end()));
}

double kr_norm(const SignedMeasureZbar& nu) {
    // std::map order on PointZbar is the natural order, along which varphi is increasing.
    std::vector<double> phi, w;
    phi.reserve(nu.atoms().size());
    w.reserve(nu.atoms().size());
    for (const auto& [x, v] : nu.atoms()) {
        phi.push_back(varphi(x));
        w.push_back(v);
    }
    return kr_norm_sorted(phi, w);
}

double kr_distance(const MeasureZbar& mu, const MeasureZbar& nu) {
    return kr_norm(SignedMeasureZbar(mu) - SignedMeasureZbar(nu));
}

bool in_ball(const MeasureZbar& mu, const MeasureZbar& center, double epsilon) {
    return within_radius(kr_distance(mu, center), epsilon);
}

double kr_distance_counts(const std::vector<std::int64_t>& counts, std::int64_t offset,
                          std::int64_t total, const MeasureZbar& center) {
    thread_local std::vector<double> phi, nu;
    phi.clear();
    nu.clear();
    const double inv = 1.0 / static_cast<double>(total);
    if (center.alpha_minus() > 0.0) {
        phi.push_back(-1.0);
        nu.push_back(-center.alpha_minus());
    }
    auto it = center.central().begin();
    const auto end = center.central().end();
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const std::int64_t k = offset + static_cast<std::int64_t>(i);
        for (; it != end && it->first < k; ++it) {
            phi.push_back(varphi(it->first));
            nu.push_back(-it->second);
        }
        double v = counts[i] * inv;
        if (it != end && it->first == k) {
            v -= it->second;
            ++it;
        }
        if (counts[i] != 0 || v != 0.0) {
            phi.push_back(varphi(k));
            nu.push_back(v);
        }
    }
    for (; it != end; ++it) {
        phi.push_back(varphi(it->first));
        nu.push_back(-it->second);
    }
    if (center.alpha_plus() > 0.0) {
        phi.push_back(1.0);
        nu.push_back(-center.alpha_plus());
    }
    return kr_norm_sorted(phi, nu);
}

std::int64_t r_mu0(const CentralMeasure& mu_zero, double epsilon) {
    if (!(epsilon > 0.0)) throw ValidationError("epsilon", "must be positive");
    if (mu_zero.empty()) throw ValidationError("mu_zero", "empty measure");
    std::int64_t maxabs = 0;
    for (const auto& [k, w] : mu_zero) maxabs = std::max<std::int64_t>(maxabs, std::abs(k));
    for (std::int64_t R = 1;; ++R) {
        double mass = 0.0;
        for (const auto& [k, w] : mu_zero)
            if (std::abs(k) <= R - 1) mass += w;
        if (mass > 1.0 - epsilon || R > maxabs) return R;
    }
}

MeasureZbar empirical_measure(const Word& w) {
    require_word(w);
    std::map<std::int64_t, std::int64_t> c;
    for (auto x : w) ++c[x];
    CentralMeasure central;
    const double n = static_cast<double>(w.size());
    for (const auto& [k, v] : c) central[k] = static_cast<double>(v) / n;
    return {0.0, 0.0, std::move(central)};
}

OccupationCounts occupation_counts(const Word& w, std::int64_t R) {
    if (R < 1) throw ValidationError("R", "must be >= 1");
    OccupationCounts out;
    for (auto x : w) {
        const int s = region(x, R);
        if (s < 0) ++out.minus;
        else if (s > 0) ++out.plus;
        else ++out.zero;
        ++out.sites[x];
    }
    return out;
}

CentralMeasure restricted_empirical(const Word& w, std::int64_t R) {
    if (R < 1) throw ValidationError("R", "must be >= 1");
    std::map<std::int64_t, std::int64_t> c;
    std::int64_t n0 = 0;
    for (auto x : w)
        if (region(x, R) == 0) {
            ++c[x];
            ++n0;
        }
    if (n0 == 0) throw DomainError("empty restriction: no letter in the central region");
    CentralMeasure out;
    for (const auto& [k, v] : c) out[k] = static_cast<double>(v) / static_cast<double>(n0);
    return out;
}

}  // namespace zbar
