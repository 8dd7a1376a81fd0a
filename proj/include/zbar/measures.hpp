#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "zbar/state_space.hpp"

namespace zbar {

// Nearest-neighbour path; letters[i+1] - letters[i] = +-1.
using Word = std::vector<std::int64_t>;

bool is_word(const Word& w);
void require_word(const Word& w, const char* what = "word");

using CentralMeasure = std::map<std::int64_t, double>;

class MeasureZbar {
public:
    MeasureZbar(double alpha_minus, double alpha_plus, CentralMeasure central);

    static MeasureZbar dirac(const PointZbar& x);

    double alpha_minus() const { return alpha_minus_; }
    double alpha_plus() const { return alpha_plus_; }
    double alpha_zero() const { return alpha_zero_; }
    double alpha(int sigma) const { return sigma < 0 ? alpha_minus_ : (sigma > 0 ? alpha_plus_ : alpha_zero_); }
    const CentralMeasure& central() const { return central_; }

private:
    double alpha_minus_;
    double alpha_plus_;
    double alpha_zero_;
    CentralMeasure central_;
};

struct Decomposition {
    double alpha_minus;
    double alpha_zero;
    double alpha_plus;
    CentralMeasure mu_zero;  // normalized; delta_0 when alpha_zero = 0
};

Decomposition decompose(const MeasureZbar& mu);

class SignedMeasureZbar {
public:
    SignedMeasureZbar() = default;
    explicit SignedMeasureZbar(const MeasureZbar& mu);

    void add(const PointZbar& x, double w);
    const std::map<PointZbar, double>& atoms() const { return atoms_; }

    SignedMeasureZbar& operator+=(const SignedMeasureZbar& o);
    SignedMeasureZbar& operator-=(const SignedMeasureZbar& o);
    SignedMeasureZbar& operator*=(double c);

private:
    std::map<PointZbar, double> atoms_;
};

SignedMeasureZbar operator+(SignedMeasureZbar a, const SignedMeasureZbar& b);
SignedMeasureZbar operator-(SignedMeasureZbar a, const SignedMeasureZbar& b);
SignedMeasureZbar operator*(double c, SignedMeasureZbar a);

// Value of max sum nu_i f_i s.t. |f_i| <= 1, |f_i - f_{i+1}| <= phi_{i+1} - phi_i,
// for phi sorted ascending.
double kr_norm_sorted(const std::vector<double>& phi, const std::vector<double>& nu);

double kr_norm(const SignedMeasureZbar& nu);
double kr_distance(const MeasureZbar& mu, const MeasureZbar& nu);

// Open-ball test. Distances within kBallTieSlack of the radius count as on the boundary, so
// exact ties (common for empirical measures) do not depend on summation order.
inline constexpr double kBallTieSlack = 1e-12;
inline bool within_radius(double distance, double epsilon) { return distance < epsilon - kBallTieSlack; }
bool in_ball(const MeasureZbar& mu, const MeasureZbar& center, double epsilon);

// Evaluates kr_distance(empirical measure with these counts, center) without building maps.
// counts[i] is the number of visits to site offset + i.
double kr_distance_counts(const std::vector<std::int64_t>& counts, std::int64_t offset,
                          std::int64_t total, const MeasureZbar& center);

std::int64_t r_mu0(const CentralMeasure& mu_zero, double epsilon);

MeasureZbar empirical_measure(const Word& w);

struct OccupationCounts {
    std::int64_t minus = 0;
    std::int64_t zero = 0;
    std::int64_t plus = 0;
    std::map<std::int64_t, std::int64_t> sites;

    std::int64_t region_count(int sigma) const { return sigma < 0 ? minus : (sigma > 0 ? plus : zero); }
    std::int64_t site(std::int64_t m) const {
        auto it = sites.find(m);
        return it == sites.end() ? 0 : it->second;
    }
};

OccupationCounts occupation_counts(const Word& w, std::int64_t R);
CentralMeasure restricted_empirical(const Word& w, std::int64_t R);

}  // namespace zbar
