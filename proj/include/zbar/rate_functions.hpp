#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zbar/measures.hpp"
#include "zbar/state_space.hpp"

namespace zbar {

enum class RateForm {
    cramer,
    dv_variational,
    dv_kernel,
    composite_min,
    composite_variational,
    composite_closed,
    contraction
};
std::string to_string(RateForm f);

// kind = "u" (DV potential, values are u = exp(v)) or "kernel" (values are up-probabilities).
struct Certificate {
    std::string kind;
    std::vector<std::int64_t> sites;
    std::vector<double> values;
    int iterations = 0;
};

class RateValue {
public:
    static RateValue finite(double v, RateForm form);
    static RateValue unbounded(RateForm form);

    bool is_infinite() const { return infinite_; }
    // +infinity as a double when unbounded.
    double value() const;
    RateForm form() const { return form_; }

    std::optional<Certificate> certificate;

private:
    RateValue(double v, bool inf, RateForm f) : value_(v), infinite_(inf), form_(f) {}
    double value_;
    bool infinite_;
    RateForm form_;
};

std::string format_rate(const RateValue& r);

double cgf(double p, double lambda);
RateValue cramer(double p, double x);
RateValue cramer_at_zero(double p);

enum class Side { nonneg, nonpos };
RateValue cramer_inf(double p, Side side);

struct DvOptions {
    int window_pad = 8;
    int max_iters = 20000;
    double tol = 1e-13;
    double cap = 50.0;
};

// Objective F(v) = sum_k mu(k) [v_k - log(p_k e^{v_{k+1}} + (1-p_k) e^{v_{k-1}})]
// over v on [support_lo - pad, support_hi + pad], v = 0 outside.
class DvObjective {
public:
    DvObjective(const CentralMeasure& mu_zero, const TransitionProfile& profile, int pad);

    std::size_t dim() const { return dim_; }
    std::int64_t offset() const { return offset_; }
    double value(const std::vector<double>& v) const;
    void gradient(const std::vector<double>& v, std::vector<double>& g) const;
    // Dense row-major Hessian.
    void hessian(const std::vector<double>& v, std::vector<double>& H) const;

private:
    struct Term {
        std::size_t i;
        double mu;
        double p;
    };
    std::vector<Term> terms_;
    std::size_t dim_;
    std::int64_t offset_;
};

RateValue dv_rate_variational(const CentralMeasure& mu_zero, const TransitionProfile& profile,
                              const DvOptions& opts = {});
RateValue dv_rate_kernel_form(const CentralMeasure& mu_zero, const TransitionProfile& profile,
                              double tol = 1e-12);

enum class Regime {
    both_below,   // p+ < 1/2, p- < 1/2
    both_above,   // p+ >= 1/2, p- >= 1/2
    inward,       // p+ < 1/2 <= p-
    outward       // p+ >= 1/2 > p-
};
Regime regime_of(double p_minus, double p_plus);
Regime regime_of(const TransitionProfile& profile);
std::string to_string(Regime r);

struct CompositeInputs {
    double alpha_minus;
    double alpha_zero;
    double alpha_plus;
    double dv;  // I_DV(mu_0); may be +infinity; ignored when alpha_zero = 0
    double p_minus;
    double p_plus;
};

// The three equivalent expressions of I on shared inputs; +infinity propagates as a double.
double composite_min_value(const CompositeInputs& in);
double composite_closed_value(const CompositeInputs& in);
double composite_variational_value(const CompositeInputs& in, int grid_size);

CompositeInputs composite_inputs(const MeasureZbar& mu, const TransitionProfile& profile,
                                 const DvOptions& dv_opts, std::optional<Certificate>* dv_cert = nullptr);

RateValue composite_rate(const MeasureZbar& mu, const TransitionProfile& profile, const DvOptions& dv_opts = {});
RateValue composite_rate_closed(const MeasureZbar& mu, const TransitionProfile& profile, const DvOptions& dv_opts = {});
RateValue composite_rate_variational(const MeasureZbar& mu, const TransitionProfile& profile, int grid_size = 64,
                                     const DvOptions& dv_opts = {});

// Samples alpha in [0,1] with I((1-alpha) delta_-inf + alpha delta_+inf).
std::vector<std::pair<double, double>> segment_profile(const TransitionProfile& profile, int grid);

// Bounded observable: explicit values on [lo, hi], f_minus below, f_plus above.
struct Observable {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<double> values;  // size hi - lo + 1
    double f_minus = 0.0;
    double f_plus = 0.0;

    double operator()(std::int64_t k) const {
        if (k < lo) return f_minus;
        if (k > hi) return f_plus;
        return values[static_cast<std::size_t>(k - lo)];
    }
    static Observable constant(double c);
};

struct ContractionOptions {
    std::int64_t window_lo = -8;
    std::int64_t window_hi = 8;
    int alpha_grid = 40;
    double lambda_max = 40.0;
    DvOptions dv;
};

// Upper bound on inf { I(mu) : <f_j, mu> = x_j }, for one or two observables.
RateValue contraction_rate(const std::vector<Observable>& f, const std::vector<double>& x,
                           const TransitionProfile& profile, const ContractionOptions& opts = {});

}  // namespace zbar
