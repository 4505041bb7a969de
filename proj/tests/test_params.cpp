#include <doctest.h>

#include <cmath>

#include "liouville/params.hpp"

using namespace liouville;

TEST_CASE("ceil_alpha") {
    CHECK(ceil_alpha(DiskParams(2.5)) == 3);
    CHECK(ceil_alpha(DiskParams(3.0)) == 3);
    CHECK(ceil_alpha(DiskParams(0.1)) == 1);
}

TEST_CASE("solution_count") {
    CHECK(solution_count(DiskParams(2.5)) == 5);
    CHECK(solution_count(DiskParams(1.0)) == 3);
    CHECK(solution_count(DiskParams(4.0)) == 6);
}

TEST_CASE("solution_count constant between integers") {
    for (double a : {2.1, 2.5, 2.9999, 3.0})
        CHECK(solution_count(DiskParams(a)) == 5);
}

TEST_CASE("polygon_radius closed form") {
    CHECK(polygon_radius(DiskParams(1.0), PeakCount(1)) ==
          doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
    CHECK(polygon_radius(DiskParams(2.5), PeakCount(3)) ==
          doctest::Approx(std::pow(1.0 / 13.0, 1.0 / 6.0)).epsilon(1e-12));
    CHECK(polygon_radius(DiskParams(2.5), PeakCount(3)) == doctest::Approx(0.6521429).epsilon(1e-6));
    CHECK_THROWS_AS(polygon_radius(DiskParams(1.0), PeakCount(2)), DomainError);
    CHECK_THROWS_AS(polygon_radius(DiskParams(2.0), PeakCount(3)), DomainError);
}

TEST_CASE("polygon_radius monotone in m and alpha") {
    int checked = 0;
    for (double a = 1.5; a <= 6.5 && checked < 50; a += 0.5) {
        for (int m = 1; m + 1 < a + 1 && checked < 50; ++m) {
            CHECK(polygon_radius(DiskParams(a), PeakCount(m)) >
                  polygon_radius(DiskParams(a), PeakCount(m + 1)));
            CHECK(polygon_radius(DiskParams(a + 0.5), PeakCount(m)) >
                  polygon_radius(DiskParams(a), PeakCount(m)));
            ++checked;
        }
    }
    CHECK(checked >= 30);
}

TEST_CASE("r^2m identity") {
    for (double a : {1.2, 2.5, 4.0, 6.5})
        for (int m = 1; m < a + 1; ++m) {
            const DiskParams p(a);
            const double r = polygon_radius(p, PeakCount(m));
            const double lhs = std::pow(r, 2.0 * m);
            const double rhs = (p.beta - m) / (p.beta + m);
            CHECK(std::abs(lhs - rhs) <= 1e-14 * std::abs(rhs));
        }
}

TEST_CASE("polygon_config") {
    SUBCASE("m=1 alpha=2") {
        const VortexConfig c = polygon_config(DiskParams(2.0), PeakCount(1));
        REQUIRE(c.size() == 1);
        CHECK(c.points[0].real() == doctest::Approx(0.7071068).epsilon(1e-6));
        CHECK(c.points[0].imag() == doctest::Approx(0.0));
    }
    SUBCASE("m=3 alpha=2.5") {
        const VortexConfig c = polygon_config(DiskParams(2.5), PeakCount(3));
        REQUIRE(c.size() == 3);
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(c.points[j]) == doctest::Approx(0.6521429).epsilon(1e-6));
            CHECK(std::arg(c.points[j]) ==
                  doctest::Approx(std::remainder(2.0 * M_PI * j / 3.0, 2.0 * M_PI)).epsilon(1e-12));
        }
    }
    SUBCASE("rotation by theta0") {
        const VortexConfig a = polygon_config(DiskParams(2.5), PeakCount(3), 0.0);
        const VortexConfig b = polygon_config(DiskParams(2.5), PeakCount(3), M_PI / 6.0);
        for (int j = 0; j < 3; ++j) {
            CHECK(std::abs(b.points[j]) == doctest::Approx(std::abs(a.points[j])).epsilon(1e-14));
            CHECK(std::arg(b.points[j]) ==
                  doctest::Approx(std::arg(a.points[j]) + M_PI / 6.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("invalid parameters") {
    CHECK_THROWS_AS(DiskParams(-1.0), DomainError);
    CHECK_THROWS_AS(DiskParams(0.0), DomainError);
    CHECK_THROWS_AS(DiskParams(1.0, -0.5), DomainError);
    CHECK_THROWS_AS(PeakCount(0), DomainError);
}
