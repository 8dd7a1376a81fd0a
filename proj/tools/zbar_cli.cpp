#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "zbar/exact_engine.hpp"
#include "zbar/io.hpp"
#include "zbar/monte_carlo.hpp"
#include "zbar/rate_functions.hpp"
#include "zbar/suites.hpp"
#include "zbar/trajectories.hpp"

using json = nlohmann::json;
using namespace zbar;

namespace {

constexpr int kSchemaVersion = 1;

struct Globals {
    std::string profile;
    std::string measure;
    std::string out;
    std::uint64_t seed = 1;
    int workers = 0;
};

json rate_json(const RateValue& r) { return r.is_infinite() ? json("unbounded") : json(r.value()); }
json rate_json(double v) { return std::isinf(v) ? json("unbounded") : json(v); }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

std::string fixed(double v, int digits = 10) {
    std::ostringstream os;
    os.precision(digits);
    os << std::fixed << v;
    return os.str();
}

TransitionProfile profile_or(const Globals& g, std::optional<double> p) {
    if (!g.profile.empty()) return load_profile(g.profile);
    if (p) return TransitionProfile::homogeneous(*p);
    throw ValidationError("profile", "pass --profile <file> or --p <value>");
}

MeasureZbar require_measure(const Globals& g) {
    if (g.measure.empty()) throw ValidationError("measure", "pass --measure <file>");
    return load_measure(g.measure);
}

void write_file(const Globals& g, const std::string& name, const std::string& content) {
    if (g.out.empty()) return;
    std::filesystem::create_directories(g.out);
    std::ofstream f(std::filesystem::path(g.out) / name);
    if (!f) throw ValidationError("out", "cannot write into '" + g.out + "'");
    f << content;
}

json check_json(const CheckResult& c) {
    return {{"name", c.name},     {"measured", c.measured}, {"predicted", c.predicted}, {"tolerance", c.tolerance},
            {"pass", c.passed},   {"detail", c.detail}};
}

// ----- rate

int cmd_rate_eval(const Globals& g) {
    if (g.profile.empty()) throw ValidationError("profile", "pass --profile <file>");
    const TransitionProfile pr = load_profile(g.profile);
    const MeasureZbar mu = require_measure(g);
    std::optional<Certificate> cert;
    const CompositeInputs in = composite_inputs(mu, pr, DvOptions{}, &cert);
    const RateValue main = composite_rate(mu, pr);
    const RateValue closed = composite_rate_closed(mu, pr);
    const RateValue var = composite_rate_variational(mu, pr);
    auto close = [](const RateValue& a, const RateValue& b) {
        if (a.is_infinite() || b.is_infinite()) return a.is_infinite() == b.is_infinite();
        return std::abs(a.value() - b.value()) <= 1e-8 * std::max(1.0, std::abs(a.value()));
    };
    const bool agree = close(main, closed) && close(main, var);
    json cs = nullptr;
    if (cert) cs = {{"kind", cert->kind}, {"support", cert->sites.size()}, {"iterations", cert->iterations}};
    emit({{"schema_version", kSchemaVersion},
          {"value", rate_json(main)},
          {"form", to_string(main.form())},
          {"regime", to_string(regime_of(pr))},
          {"min_form", rate_json(main)},
          {"closed_form", rate_json(closed)},
          {"variational_form", rate_json(var)},
          {"dv", in.alpha_zero > 0.0 ? rate_json(in.dv) : json(nullptr)},
          {"forms_agree", agree},
          {"certificate_summary", cs}});
    return agree ? 0 : 1;
}

int cmd_rate_segment(const Globals& g, int grid) {
    const TransitionProfile pr = profile_or(g, std::nullopt);
    std::ostringstream os;
    os << "alpha,rate\n";
    for (const auto& [a, r] : segment_profile(pr, grid)) os << fixed(a, 6) << "," << fixed(r, 12) << "\n";
    std::cout << os.str();
    write_file(g, "segment.csv", os.str());
    return 0;
}

// ----- verify

int cmd_verify_series(bool excursion, std::optional<double> p, std::int64_t R, std::int64_t n_max) {
    if (!p) throw ValidationError("p", "pass --p <value>");
    const CheckResult c = excursion ? verify_excursion(*p, R, n_max) : verify_meander(*p, R, n_max);
    json j = check_json(c);
    j["schema_version"] = kSchemaVersion;
    emit(j);
    return c.passed ? 0 : 1;
}

int cmd_verify_lemmas(const std::string& suite, std::int64_t instances, std::uint64_t seed) {
    const auto results = run_lemma_suites(suite, instances, seed);
    json arr = json::array();
    bool ok = true;
    for (const auto& r : results) {
        ok = ok && r.passed();
        arr.push_back({{"name", r.name}, {"instances", r.instances}, {"checks", r.checks}, {"failures", r.failures},
                       {"messages", r.messages}, {"pass", r.passed()}});
    }
    emit({{"schema_version", kSchemaVersion}, {"suite", suite}, {"results", arr}, {"pass", ok}});
    return ok ? 0 : 1;
}

// ----- mc

PathEvent make_event(const std::string& kind, std::int64_t R, int sigma, const Globals& g, double eps) {
    if (kind == "excursion") return excursion_event(R, sigma);
    if (kind == "meander") return meander_event(R, sigma);
    if (kind == "ball") return ball_event(require_measure(g), eps);
    throw ValidationError("event", "expected excursion, meander or ball");
}

std::int64_t event_start(const std::string& kind, std::int64_t R, int sigma) { return kind == "ball" ? 0 : sigma * R; }

json estimate_json(const Estimate& e, std::int64_t n) {
    return {{"n", n},           {"mean", e.mean}, {"log_mean", std::log(e.mean)}, {"rel_std_err", e.rel_std_err},
            {"n_samples", e.n_samples}, {"seed", e.seed}, {"ess", e.ess}, {"hits", e.hits}};
}

// ----- trajectory / figure

std::string trajectory_csv(const Word& w, std::int64_t R) {
    std::ostringstream os;
    os << "step,position,region\n";
    for (std::size_t i = 0; i < w.size(); ++i) os << i + 1 << "," << w[i] << "," << region(w[i], R) << "\n";
    return os.str();
}

std::string svg_polylines(const std::vector<std::vector<std::pair<double, double>>>& curves,
                          const std::vector<std::string>& colours) {
    double ymax = 0.0;
    for (const auto& c : curves)
        for (const auto& [x, y] : c) ymax = std::max(ymax, y);
    if (ymax <= 0.0) ymax = 1.0;
    const double W = 640, H = 400, pad = 40;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << H - pad << "\" x2=\"" << W - pad << "\" y2=\"" << H - pad
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << pad << "\" y1=\"" << pad << "\" x2=\"" << pad << "\" y2=\"" << H - pad
       << "\" stroke=\"black\"/>\n";
    for (std::size_t k = 0; k < curves.size(); ++k) {
        os << "<polyline fill=\"none\" stroke=\"" << colours[k] << "\" stroke-width=\"2\" points=\"";
        for (const auto& [x, y] : curves[k])
            os << fixed(pad + x * (W - 2 * pad), 2) << "," << fixed(H - pad - y / ymax * (H - 2 * pad), 2) << " ";
        os << "\"/>\n";
    }
    os << "</svg>\n";
    return os.str();
}

int cmd_figure1(const Globals& g, int grid) {
    const auto blue = segment_profile(TransitionProfile::two_sided(0.31, 0.62), grid);
    const auto red = segment_profile(TransitionProfile::two_sided(0.35, 0.8), grid);
    std::ostringstream os;
    os << "alpha,rate_blue,rate_red\n";
    for (std::size_t i = 0; i < blue.size(); ++i)
        os << fixed(blue[i].first, 6) << "," << fixed(blue[i].second, 12) << "," << fixed(red[i].second, 12) << "\n";
    std::cout << os.str();
    write_file(g, "figure1.csv", os.str());
    write_file(g, "figure1.svg", svg_polylines({blue, red}, {"#1f4e9c", "#b22222"}));

    bool ok = true;
    for (const auto* c : {&blue, &red}) {
        ok = ok && std::abs(c->front().second) < 1e-12 && std::abs(c->back().second) < 1e-12;
        for (std::size_t i = 1; i + 1 < c->size(); ++i)
            ok = ok && (*c)[i - 1].second + (*c)[i + 1].second <= 2.0 * (*c)[i].second + 1e-12;
    }
    if (!ok) std::cerr << "figure1: curves fail the endpoint or concavity check\n";
    return ok ? 0 : 1;
}

int cmd_trajectory_demo(const Globals& g, double eps, std::int64_t R, std::int64_t n, int sigma) {
    const TransitionProfile pr = g.profile.empty() ? TransitionProfile::two_sided(0.7, 0.3) : load_profile(g.profile);
    const MeasureZbar mu = g.measure.empty() ? MeasureZbar(0.3, 0.3, {{-1, 0.1}, {0, 0.2}, {1, 0.1}}) : load_measure(g.measure);
    const Construction c{pr, mu, eps, R, n, CheckMode::permissive};
    CounterStream rng(g.seed, 0);
    const TypicalComponents parts = sample_typical_components(sigma, c, rng);
    const TypicalWord tw = build_typical(sigma, parts, c);
    for (const auto& w : tw.warnings) std::cerr << "warning: " << w << "\n";
    const std::string csv = trajectory_csv(tw.word, R);
    std::cout << csv;
    write_file(g, "trajectory.csv", csv);
    static const char* names[] = {"stitched_minus.csv", "stitched_zero.csv", "stitched_plus.csv"};
    for (int s = -1; s <= 1; ++s) {
        const StitchedWord sw = stitch(tw.word, s, c);
        write_file(g, names[s + 1], trajectory_csv(sw.word, R));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate functions and exact/Monte Carlo decay checks for walks on the compactified integers"};
    app.require_subcommand(1);
    // global flags are accepted after the subcommand names too
    app.fallthrough();
    Globals g;
    app.add_option("--profile", g.profile, "Profile YAML file");
    app.add_option("--measure", g.measure, "Measure YAML file");
    app.add_option("--out", g.out, "Output directory for files");
    app.add_option("--seed", g.seed, "Random seed");
    app.add_option("--workers", g.workers, "OpenMP worker count (0 = runtime default)");

    int grid = 200;
    std::optional<double> p;
    std::int64_t R = 5, n_max = 401, n_min = 101, step = 50, n = 101, instances = 1000, samples = 100000;
    int sigma = 1;
    double eps = 0.25, p_bar = 0.7, x = 0.0;
    std::string suite = "all", event = "excursion", schedule;

    auto* rate = app.add_subcommand("rate", "Evaluate the rate function");
    rate->require_subcommand(1);
    rate->fallthrough();
    auto* rate_eval = rate->add_subcommand("eval", "Rate of a measure under a profile, all forms");
    auto* rate_seg = rate->add_subcommand("segment", "Rate along (1-alpha) delta_-inf + alpha delta_+inf");
    rate_seg->add_option("--grid", grid, "Number of intervals");

    auto* verify = app.add_subcommand("verify", "Run a verification campaign");
    verify->require_subcommand(1);
    verify->fallthrough();
    auto* v_exc = verify->add_subcommand("excursion", "Excursion decay rate vs the Cramer rate at 0");
    auto* v_mea = verify->add_subcommand("meander", "Meander decay rate vs the one-sided Cramer infimum");
    for (auto* s : {v_exc, v_mea}) {
        s->add_option("--p", p, "Homogeneous up-probability")->required();
        s->add_option("--R", R, "Region threshold");
        s->add_option("--n-max", n_max, "Largest length");
    }
    auto* v_ball = verify->add_subcommand("ball", "Class partition of enumerated ball probabilities");
    int ball_n = 14;
    v_ball->add_option("--instances", instances, "Random instances")->default_val(100);
    v_ball->add_option("--n-max", ball_n, "Largest enumerated length");
    auto* v_cex = verify->add_subcommand("counterexample", "Finite-n gap for the block observable");
    v_cex->add_option("--p-bar", p_bar, "Homogeneous up-probability");
    v_cex->add_option("--epsilon", eps, "Ball radius");
    auto* v_lem = verify->add_subcommand("lemmas", "Property suites on random instances");
    v_lem->add_option("--suite", suite, "occupation, typical, stitching or all");
    v_lem->add_option("--instances", instances, "Instances per suite");

    auto* mc = app.add_subcommand("mc", "Importance-sampled Monte Carlo");
    mc->require_subcommand(1);
    mc->fallthrough();
    auto* mc_est = mc->add_subcommand("estimate", "Estimate one event probability");
    auto* mc_rate_cmd = mc->add_subcommand("rate", "Decay slope from estimates over an n grid");
    for (auto* s : {mc_est, mc_rate_cmd}) {
        s->add_option("--samples", samples, "Samples per estimate");
        s->add_option("--schedule", schedule, "CSV schedule file with from,to,x rows");
        s->add_option("--x", x, "Constant tilt target used when no schedule file is given");
        s->add_option("--event", event, "excursion, meander or ball");
        s->add_option("--p", p, "Homogeneous up-probability when no profile file is given");
        s->add_option("--R", R, "Region threshold");
        s->add_option("--sigma", sigma, "Region sign");
        s->add_option("--epsilon", eps, "Ball radius for the ball event");
    }
    mc_est->add_option("--n", n, "Word length");
    mc_rate_cmd->add_option("--n-min", n_min, "First grid length");
    mc_rate_cmd->add_option("--n-max", n_max, "Last grid length");
    mc_rate_cmd->add_option("--step", step, "Grid step");

    auto* traj = app.add_subcommand("trajectory", "Trajectory constructions");
    traj->require_subcommand(1);
    traj->fallthrough();
    auto* demo = traj->add_subcommand("demo", "Typical trajectory and its stitched pieces as CSV");
    double demo_eps = 0.1;
    std::int64_t demo_R = 6, demo_n = 2000;
    demo->add_option("--epsilon", demo_eps, "Construction epsilon");
    demo->add_option("--R", demo_R, "Region threshold");
    demo->add_option("--n", demo_n, "Length");
    demo->add_option("--sigma", sigma, "Target region sign");

    auto* fig = app.add_subcommand("figure1", "Segment curves for the two reference profiles");
    fig->add_option("--grid", grid, "Number of intervals");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    if (g.workers > 0) omp_set_num_threads(g.workers);

    try {
        if (*rate_eval) return cmd_rate_eval(g);
        if (*rate_seg) return cmd_rate_segment(g, grid);
        if (*v_exc) return cmd_verify_series(true, p, R, n_max);
        if (*v_mea) return cmd_verify_series(false, p, R, n_max);
        if (*v_ball) {
            const CheckResult c = verify_ball(instances, ball_n, g.seed);
            json j = check_json(c);
            j["schema_version"] = kSchemaVersion;
            emit(j);
            return c.passed ? 0 : 1;
        }
        if (*v_cex) {
            const CheckResult c = verify_counterexample(p_bar, eps);
            json j = check_json(c);
            j["schema_version"] = kSchemaVersion;
            emit(j);
            return c.passed ? 0 : 1;
        }
        if (*v_lem) return cmd_verify_lemmas(suite, instances, g.seed);
        if (*mc_est || *mc_rate_cmd) {
            const TransitionProfile pr = profile_or(g, p);
            if (sigma != 1 && sigma != -1) throw ValidationError("sigma", "must be -1 or +1");
            const std::optional<TiltSchedule> fixed_schedule =
                schedule.empty() ? std::nullopt : std::optional<TiltSchedule>(load_schedule(schedule));
            auto schedule_for = [&](std::int64_t len) {
                return fixed_schedule ? *fixed_schedule : TiltSchedule::constant(x, len);
            };
            const std::int64_t start = event_start(event, R, sigma);
            if (*mc_est) {
                const Estimate e =
                    importance_estimate(pr, make_event(event, R, sigma, g, eps), schedule_for(n), start, n, samples, g.seed);
                json j = estimate_json(e, n);
                j["schema_version"] = kSchemaVersion;
                emit(j);
                return 0;
            }
            std::vector<std::int64_t> grid_n;
            for (std::int64_t m = n_min; m <= n_max; m += step) grid_n.push_back(m);
            const McRateReport r = mc_rate(
                pr, [&](std::int64_t) { return make_event(event, R, sigma, g, eps); }, schedule_for, grid_n, samples,
                g.seed, start);
            json pts = json::array();
            for (const auto& [m, lp] : r.report.points) pts.push_back({m, lp});
            json ests = json::array();
            for (std::size_t i = 0; i < r.estimates.size(); ++i) ests.push_back(estimate_json(r.estimates[i], grid_n[i]));
            emit({{"schema_version", kSchemaVersion},
                  {"points", pts},
                  {"slope", r.report.slope},
                  {"method", to_string(r.report.method)},
                  {"residual", r.report.residual},
                  {"slope_band", r.slope_band},
                  {"unreliable", r.unreliable},
                  {"estimates", ests}});
            return r.unreliable ? 1 : 0;
        }
        if (*demo) return cmd_trajectory_demo(g, demo_eps, demo_R, demo_n, sigma);
        if (*fig) return cmd_figure1(g, grid);
    } catch (const ValidationError& e) {
        std::cerr << json({{"error", "validation"}, {"key", e.key()}, {"message", e.what()}}).dump() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << json({{"error", "domain"}, {"message", e.what()}}).dump() << "\n";
        return 2;
    }
    return 2;
}
