#include <functional>
#include <string>

#include "doctest.h"
#include "zbar/io.hpp"

using namespace zbar;

namespace {

std::string key_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const ValidationError& e) {
        return e.key();
    }
    return "";
}

}  // namespace

TEST_CASE("profile yaml") {
    const auto pr = parse_profile("window_lo: -1\nwindow_hi: 1\ntail_minus: 0.7\ntail_plus: 0.3\n"
                                  "table: {-1: 0.6, 0: 0.5, 1: 0.4}\n");
    CHECK(pr.p(-5) == 0.7);
    CHECK(pr.p(0) == 0.5);
    CHECK(pr.p(1) == 0.4);
    CHECK(pr.p(9) == 0.3);
    CHECK(key_of([] { parse_profile("window_lo: 0\nwindow_hi: 0\ntail_minus: 0.5\n"); }) == "tail_plus");
    CHECK(key_of([] { parse_profile("window_lo: a\nwindow_hi: 0\ntail_minus: 0.5\ntail_plus: 0.5\n"); }) ==
          "window_lo");
    CHECK(key_of([] {
              parse_profile("window_lo: 0\nwindow_hi: 0\ntail_minus: 0.5\ntail_plus: 0.5\ntable: {0: x}\n");
          }) == "table.0");
    CHECK(key_of([] { parse_profile("- 1\n- 2\n"); }) == "yaml");
    CHECK(key_of([] { parse_profile("a: [1\n"); }) == "yaml");
    CHECK(key_of([] { load_profile("/nonexistent/profile.yaml"); }) == "path");
}

TEST_CASE("measure yaml") {
    const auto mu = parse_measure("alpha_minus: 0.25\nalpha_plus: 0.25\ncentral: {0: 0.3, 2: 0.2}\n");
    CHECK(mu.alpha_zero() == doctest::Approx(0.5));
    CHECK(mu.central().at(2) == 0.2);
    const auto plus = parse_measure("alpha_minus: 0\nalpha_plus: 1\n");
    CHECK(plus.central().empty());
    CHECK(key_of([] { parse_measure("alpha_plus: 1\n"); }) == "alpha_minus");
    CHECK(key_of([] { parse_measure("alpha_minus: 0\nalpha_plus: 0.5\ncentral: {z: 0.5}\n"); }) == "central");
}

TEST_CASE("schedule csv") {
    const auto s = parse_schedule("from,to,x\n# climb\n1,10,0.999\n11,20,0\n");
    REQUIRE(s.segments().size() == 2);
    CHECK(s.segments()[1].from == 11);
    CHECK(*s.up_prob(15) == 0.5);
    CHECK(key_of([] { parse_schedule("1,2\n"); }) == "schedule.line1");
    CHECK(key_of([] { parse_schedule("from,to,x\n1,q,0\n"); }) == "schedule.line2");
    CHECK(key_of([] { parse_schedule("1,5,0\n4,6,0\n"); }) == "from");
}
