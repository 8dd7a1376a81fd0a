#pragma once

// Independent reference computations used only by the tests.

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "zbar/measures.hpp"
#include "zbar/state_space.hpp"
#include "zbar/trajectories.hpp"

namespace oracle {

using zbar::Word;

// Calls visit(word, probability) for every word of length n starting at start.
inline void for_each_path(const zbar::TransitionProfile& pr, std::int64_t start, int n,
                          const std::function<void(const Word&, double)>& visit) {
    Word w(static_cast<std::size_t>(n));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
        w[0] = start;
        double p = 1.0;
        for (int j = 1; j < n; ++j) {
            const bool up = (mask >> (j - 1)) & 1;
            p *= up ? pr.p(w[j - 1]) : 1.0 - pr.p(w[j - 1]);
            w[j] = w[j - 1] + (up ? 1 : -1);
        }
        visit(w, p);
    }
}

inline double path_sum(const zbar::TransitionProfile& pr, std::int64_t start, int n,
                       const std::function<bool(const Word&)>& pred) {
    double s = 0.0;
    for_each_path(pr, start, n, [&](const Word& w, double p) {
        if (pred(w)) s += p;
    });
    return s;
}

// Solves A x = b by Gaussian elimination with partial pivoting; false if singular.
inline bool solve(std::vector<std::vector<double>> A, std::vector<double> b, std::vector<double>& x) {
    const std::size_t m = b.size();
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < m; ++r)
            if (std::abs(A[r][c]) > std::abs(A[piv][c])) piv = r;
        if (std::abs(A[piv][c]) < 1e-12) return false;
        std::swap(A[piv], A[c]);
        std::swap(b[piv], b[c]);
        for (std::size_t r = 0; r < m; ++r) {
            if (r == c) continue;
            const double f = A[r][c] / A[c][c];
            for (std::size_t k = c; k < m; ++k) A[r][k] -= f * A[c][k];
            b[r] -= f * b[c];
        }
    }
    x.resize(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = b[i] / A[i][i];
    return true;
}

// KR norm by enumerating LP vertices: max sum nu_i f_i with |f_i| <= 1 and
// |f_i - f_j| <= d_ij for every pair (not only neighbours in phi-order).
inline double kr_norm_vertices(const std::vector<double>& phi, const std::vector<double>& nu) {
    const std::size_t m = phi.size();
    if (m == 0) return 0.0;
    std::vector<std::vector<double>> G;  // rows g with g . f <= h
    std::vector<double> h;
    for (std::size_t i = 0; i < m; ++i)
        for (double s : {1.0, -1.0}) {
            std::vector<double> g(m, 0.0);
            g[i] = s;
            G.push_back(g);
            h.push_back(1.0);
        }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            if (i == j) continue;
            std::vector<double> g(m, 0.0);
            g[i] = 1.0;
            g[j] = -1.0;
            G.push_back(g);
            h.push_back(std::abs(phi[i] - phi[j]));
        }
    const std::size_t C = G.size();
    double best = -1e300;
    std::vector<std::size_t> pick(m);
    std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t depth, std::size_t from) {
        if (depth == m) {
            std::vector<std::vector<double>> A;
            std::vector<double> b;
            for (auto k : pick) {
                A.push_back(G[k]);
                b.push_back(h[k]);
            }
            std::vector<double> f;
            if (!solve(A, b, f)) return;
            for (std::size_t k = 0; k < C; ++k) {
                double lhs = 0.0;
                for (std::size_t i = 0; i < m; ++i) lhs += G[k][i] * f[i];
                if (lhs > h[k] + 1e-9) return;
            }
            double obj = 0.0;
            for (std::size_t i = 0; i < m; ++i) obj += nu[i] * f[i];
            best = std::max(best, obj);
            return;
        }
        for (std::size_t k = from; k < C; ++k) {
            pick[depth] = k;
            rec(depth + 1, k + 1);
        }
    };
    rec(0, 0);
    return best;
}

inline double kr_norm_vertices(const zbar::SignedMeasureZbar& nu) {
    std::vector<double> phi, w;
    for (const auto& [x, v] : nu.atoms()) {
        phi.push_back(zbar::varphi(x));
        w.push_back(v);
    }
    return kr_norm_vertices(phi, w);
}

inline long long binom(int n, int k) {
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline double catalan(int m) { return static_cast<double>(binom(2 * m, m)) / (m + 1); }

}  // namespace oracle
