#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "pla/scenario.hpp"

using namespace pla;

TEST_CASE("packet counts are ceilings of m and 1/m") {
    ScenarioParams sp;
    sp.m = 1;
    auto d = derive_params(sp);
    CHECK(d.packets_per_publish == 1);
    CHECK(d.msgs_per_retx_packet == 1);

    sp.m = 10;
    d = derive_params(sp);
    CHECK(d.packets_per_publish == 10);
    CHECK(d.msgs_per_retx_packet == 1);

    sp.m = 0.008;
    d = derive_params(sp);
    CHECK(d.packets_per_publish == 1);
    CHECK(d.msgs_per_retx_packet == 125);

    sp.m = 0.5;
    d = derive_params(sp);
    CHECK(d.packets_per_publish == 1);
    CHECK(d.msgs_per_retx_packet == 2);

    sp.m = 2.5;  // neither m nor 1/m integral; ceilings still apply
    d = derive_params(sp);
    CHECK(d.packets_per_publish == 3);
    CHECK(d.msgs_per_retx_packet == 1);
}

TEST_CASE("validation separates errors from warnings") {
    ScenarioParams ok;
    ok.m = 1;
    ok.r_ms = 50;
    ok.h_ms = 50;
    ok.p = 0.95;
    auto rep = validate_scenario(ok);
    CHECK(rep.ok());
    CHECK(rep.warnings.empty());

    ScenarioParams bad_p = ok;
    bad_p.p = 0.0;
    rep = validate_scenario(bad_p);
    CHECK_FALSE(rep.ok());
    REQUIRE(rep.errors.size() == 1);
    CHECK(rep.errors[0].find("p out of range") != std::string::npos);

    ScenarioParams above = ok;
    above.p = 1.5;
    CHECK_FALSE(validate_scenario(above).ok());

    ScenarioParams odd_m = ok;
    odd_m.m = 0.7;
    odd_m.p = 0.9;
    rep = validate_scenario(odd_m);
    CHECK(rep.ok());  // accepted, but flagged
    REQUIRE(rep.warnings.size() == 1);

    ScenarioParams neg = ok;
    neg.r_ms = -1;
    CHECK_FALSE(validate_scenario(neg).ok());
}
