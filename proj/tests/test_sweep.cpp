#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cberry/sweep.hpp"

using namespace cberry;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    return out;
}
}

TEST_CASE("value formatting: 12 significant digits, empty for NaN") {
    CHECK(format_value(std::numeric_limits<double>::quiet_NaN()) == "");
    CHECK(format_value(-1.0) == "-1");
    CHECK(format_value(0.25) == "0.25");
    CHECK(format_value(kPi) == "3.14159265359");
}

TEST_CASE("point evaluation emits the expected uncoupled row") {
    SweepSpec spec;
    spec.mode = SweepMode::point;
    spec.theta = kPi / 3.0;
    spec.g_min = spec.g_max = 0.0;
    spec.g_steps = 1;
    spec.branches = {Branch::plus};
    const auto rows = run_point(spec);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].gamma_ab == doctest::Approx(-kPi).epsilon(1e-13));
    CHECK(rows[0].gamma_mixed_sum == doctest::Approx(2.0 * rows[0].gamma_a));
    CHECK(rows[0].r == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rows[0].X == doctest::Approx(1.0).epsilon(1e-12));

    const std::string csv = render_csv(spec, rows);
    const auto lines = split(csv, '\n');
    REQUIRE(lines.size() >= 4);
    CHECK(lines[0] == "# coupled-berry v1");
    CHECK(lines[1].rfind("# mode=point", 0) == 0);
    const auto fields = split(lines[3], ',');
    REQUIRE(fields.size() == 14);
    CHECK(fields[3] == "-1");  // gamma_ab in units of pi
    CHECK(fields[12] == "analytic");
    CHECK(fields[13] == "ok");
}

TEST_CASE("point evaluation on a degenerate branch throws") {
    SweepSpec spec;
    spec.mode = SweepMode::point;
    spec.theta = kPi / 3.0;
    spec.g_min = spec.g_max = 0.0;
    spec.g_steps = 1;
    spec.branches = {Branch::zero};
    CHECK_THROWS_AS(run_point(spec), DegenerateSchmidt);
}

TEST_CASE("point oracle rows agree with the analytic row") {
    SweepSpec spec;
    spec.mode = SweepMode::point;
    spec.theta = kPi / 4.0;
    spec.g_min = spec.g_max = 2.0;
    spec.g_steps = 1;
    spec.branches = {Branch::plus};
    spec.oracle_wilson = true;
    spec.points = 4096;
    const auto rows = run_point(spec);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].method == "wilson");
    CHECK(std::abs(wrap_angle(rows[0].gamma_ab - rows[1].gamma_ab)) < 1e-4);
}

TEST_CASE("g sweep: continuity, mixed-sum column, degenerate status rows") {
    SweepSpec spec;
    spec.mode = SweepMode::sweep_g;
    spec.theta = kPi / 3.0;
    spec.g_min = 0.0;
    spec.g_max = 5.0;
    spec.g_steps = 51;
    spec.branches = {Branch::zero, Branch::plus};
    const auto rows = run_sweep_g(spec);
    REQUIRE(rows.size() == 102);

    // zero branch at g = 0 has r = 0: emitted as a status row, not an abort
    CHECK(rows[0].branch == "zero");
    CHECK(rows[0].status == "degenerate-schmidt");
    CHECK(!std::isnan(rows[0].gamma_ab));  // composite phase still defined

    double prev_ga = std::numeric_limits<double>::quiet_NaN();
    double prev_gab = std::numeric_limits<double>::quiet_NaN();
    for (const auto& rec : rows) {
        if (rec.branch != "plus") continue;
        CHECK(rec.status == "ok");
        CHECK(rec.gamma_mixed_sum == doctest::Approx(2.0 * rec.gamma_a));
        if (!std::isnan(prev_ga)) {
            CHECK(std::abs(rec.gamma_a - prev_ga) < 0.5);    // unwrapped: no jumps
            CHECK(std::abs(rec.gamma_ab - prev_gab) < 0.5);  // closed form smooth
        }
        prev_ga = rec.gamma_a;
        prev_gab = rec.gamma_ab;
    }
    // plus branch starts at the uncoupled anchor and quenches upward
    const auto& first = rows[51];
    CHECK(first.branch == "plus");
    CHECK(first.gamma_ab == doctest::Approx(-kPi).epsilon(1e-12));
}

TEST_CASE("transition sweep rows") {
    SweepSpec spec;
    spec.mode = SweepMode::transition_sweep;
    spec.g_min = 0.0;
    spec.g_max = 2.0;
    spec.g_steps = 5;  // grid hits g = 0.5 where the pole spectrum degenerates
    spec.branches = {Branch::zero, Branch::plus};
    spec.panels = 4096;
    const auto rows = run_transition_sweep(spec);
    REQUIRE(rows.size() == 10);
    int degenerate = 0;
    for (const auto& rec : rows) {
        if (std::abs(rec.g - 0.5) < 1e-12) {
            // the pole spectrum is degenerate at g = 1/2: branch labels are
            // ambiguous at the endpoints for every requested branch
            CHECK(rec.status == "degenerate-roots");
            ++degenerate;
        } else {
            CHECK(rec.status == "ok");
            CHECK(rec.method == "quadrature");
        }
    }
    CHECK(degenerate == 2);
}

TEST_CASE("single-point transition sweep reduces to one row per branch") {
    SweepSpec spec;
    spec.mode = SweepMode::transition_sweep;
    spec.g_min = spec.g_max = 1.0;
    spec.g_steps = 1;
    spec.branches = {Branch::minus, Branch::plus};
    spec.panels = 2048;
    const auto rows = run_transition_sweep(spec);
    REQUIRE(rows.size() == 2);
    for (const auto& rec : rows) {
        CHECK(rec.g == 1.0);
        CHECK(rec.status == "ok");
    }
}

TEST_CASE("repeated renders are byte-identical") {
    SweepSpec spec;
    spec.mode = SweepMode::sweep_g;
    spec.theta = 0.4 * kPi;
    spec.g_min = 0.0;
    spec.g_max = 3.0;
    spec.g_steps = 31;
    const std::string a = render_csv(spec, run_sweep_g(spec));
    const std::string b = render_csv(spec, run_sweep_g(spec));
    CHECK(a == b);
}

TEST_CASE("radian units scale the phase columns only") {
    SweepSpec spec;
    spec.mode = SweepMode::point;
    spec.theta = kPi / 3.0;
    spec.g_min = spec.g_max = 0.0;
    spec.g_steps = 1;
    spec.branches = {Branch::plus};
    const auto rows = run_point(spec);

    spec.units = "rad";
    const std::string rad_csv = render_csv(spec, rows);
    const auto fields = split(split(rad_csv, '\n')[3], ',');
    CHECK(std::stod(fields[3]) == doctest::Approx(-kPi).epsilon(1e-12));
    CHECK(std::stod(fields[11]) == doctest::Approx(1.0).epsilon(1e-12));  // X unscaled
}
