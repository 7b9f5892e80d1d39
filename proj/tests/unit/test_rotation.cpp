#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "roundreach/rotation.hpp"

using namespace roundreach;

TEST_CASE("angle descriptors")
{
    const auto a = RotationAngle::parse("pi/42");
    REQUIRE(a.is_exact());
    CHECK(a.angle() == Angle(1, 42));
    CHECK(RotationAngle::parse("1/4 pi").angle() == Angle(1, 4));
    CHECK(RotationAngle::parse("-pi/3").angle() == Angle(5, 3));
    CHECK(RotationAngle::parse("0").angle() == Angle());

    const auto irr = RotationAngle::parse("2^(2/5)/10 pi");
    CHECK_FALSE(irr.is_exact());
    CHECK(irr.approx() == doctest::Approx(1.3195079107728942 / 10 * 3.141592653589793).epsilon(1e-12));
    CHECK_THROWS_AS(RotationAngle::parse("pi/"), Error);
    CHECK_THROWS_AS(RotationAngle::parse("sin(pi)"), Error);
}

TEST_CASE("rounded rotation of single points")
{
    const auto quarter = RotationAngle::parse("pi/2");
    CHECK(rotate_round({1, 0}, quarter) == LatticePoint{0, 1});
    CHECK(rotate_round({10, 0}, RotationAngle::parse("pi/42")) == LatticePoint{10, 1});
    CHECK(rotate_round({0, 0}, RotationAngle::parse("2^(2/5)/10 pi")) == LatticePoint{0, 0});
    CHECK(rotate_round({10, 0}, RotationAngle::parse("pi/42"), RotationPath::Interval) == LatticePoint{10, 1});

    // a genuine half-integer tie is certified by the exact path only
    const auto sixty = RotationAngle::parse("pi/3");
    CHECK(rotate_round({1, 0}, sixty, RotationPath::Exact) == LatticePoint{1, 1});
    CHECK_THROWS_AS(rotate_round({1, 0}, sixty, RotationPath::Interval), Error);
}

TEST_CASE("unit disk under a quarter turn")
{
    const auto report = run_disk(1, RotationAngle::parse("pi/2"), 100);
    CHECK(report.orbits.size() == 5);
    CHECK(report.unresolved.empty());
    for (const auto& o : report.orbits) {
        CHECK(o.transient == 0);
        REQUIRE(o.period.has_value());
        CHECK(*o.period <= 4);
    }
    std::ostringstream csv;
    emit_grid(report, csv);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "x,y,first_generation");
    int rows = 0;
    while (std::getline(lines, line)) {
        ++rows;
        CHECK(line.substr(line.rfind(',') + 1) == "0");
    }
    CHECK(rows == 5);
}

TEST_CASE("empty report writes the header only")
{
    std::ostringstream csv;
    emit_grid(GridReport{}, csv);
    CHECK(csv.str() == "x,y,first_generation\n");
}

TEST_CASE("lattice point counts")
{
    CHECK(disk_point_count(1) == 5);
    CHECK(disk_point_count(10) == 317);
    CHECK(disk_point_count(0) == 1);
}

TEST_CASE("cycle witnesses replay")
{
    for (const char* theta : {"pi/42", "pi/14", "pi/91", "2^(2/5)/10 pi"}) {
        Rotator rot(RotationAngle::parse(theta));
        for (LatticePoint start : {LatticePoint{7, 3}, LatticePoint{-5, 8}, LatticePoint{9, 0}}) {
            const auto rec = run_orbit(start, rot, 100000);
            REQUIRE(rec.period.has_value());
            LatticePoint p = start;
            for (std::uint64_t i = 0; i < rec.transient; ++i) {
                p = rot.apply(p);
            }
            const LatticePoint anchor = p;
            for (std::uint64_t i = 0; i < *rec.period; ++i) {
                p = rot.apply(p);
                if (i + 1 < *rec.period) {
                    CHECK(p != anchor);
                }
            }
            CHECK(p == anchor);
        }
    }
}

TEST_CASE("exact and interval paths agree on rational angles")
{
    for (const char* theta : {"pi/42", "pi/14", "3/7 pi"}) {
        const auto angle = RotationAngle::parse(theta);
        Rotator exact(angle, RotationPath::Exact);
        Rotator interval(angle, RotationPath::Interval);
        for (std::int64_t x = -6; x <= 6; x += 3) {
            for (std::int64_t y = -6; y <= 6; y += 4) {
                LatticePoint a{x, y};
                LatticePoint b{x, y};
                for (int i = 0; i < 200; ++i) {
                    a = exact.apply(a);
                    b = interval.apply(b);
                    REQUIRE(a == b);
                }
            }
        }
    }
}

TEST_CASE("disk of radius 10 at pi/42")
{
    const auto report = run_disk(10, RotationAngle::parse("pi/42"), 1000000);
    CHECK(report.orbits.size() == 317);
    CHECK(report.unresolved.empty());

    std::int64_t min_x = 0;
    std::int64_t max_x = 0;
    std::int64_t min_y = 0;
    std::int64_t max_y = 0;
    for (const auto& [p, gen] : report.cells) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    }
    // occupied cells span a square around the disk and spill past its boundary
    CHECK(max_x - min_x == max_y - min_y);
    CHECK(max_x >= 10);
    CHECK(min_x <= -10);
    CHECK(report.cells.size() > 317);

    std::ostringstream a;
    std::ostringstream b;
    emit_grid(report, a);
    emit_grid(run_disk(10, RotationAngle::parse("pi/42"), 1000000), b);
    CHECK(a.str() == b.str());
}
