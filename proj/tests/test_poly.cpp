#include <doctest.h>

#include <cmath>
#include <random>

#include "liouville/critical.hpp"
#include "liouville/hamiltonian.hpp"
#include "liouville/poly.hpp"

using namespace liouville;

namespace {

ComplexPoly from_coeffs(std::initializer_list<Complex> c) {
    return ComplexPoly(std::vector<Complex>(c));
}

} // namespace

TEST_CASE("basic polynomial arithmetic") {
    const ComplexPoly p = ComplexPoly::from_roots({Complex(1.0), Complex(-1.0)});
    REQUIRE(p.degree() == 2);
    CHECK(std::abs(p.coeffs[0] - Complex(-1.0)) < 1e-15);
    CHECK(std::abs(p.coeffs[1]) < 1e-15);
    CHECK(std::abs(p.coeffs[2] - Complex(1.0)) < 1e-15);

    const ComplexPoly cubed = from_coeffs({0, 0, 0, 1}); // z^3
    const ComplexPoly d = cubed.derivative();
    REQUIRE(d.degree() == 2);
    CHECK(std::abs(d.coeffs[2] - Complex(3.0)) < 1e-15);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> roots;
    for (int i = 0; i < 6; ++i) roots.emplace_back(u(rng), u(rng));
    const ComplexPoly q = ComplexPoly::from_roots(roots);
    double scale = 0.0;
    for (const Complex& c : q.coeffs) scale = std::max(scale, std::abs(c));
    for (const Complex& r : roots) CHECK(std::abs(q.evaluate(r)) < 1e-12 * scale);
}

TEST_CASE("build_PQ") {
    SUBCASE("polygon gives z^m - e^{im theta0} r^m and its reflection") {
        const DiskParams p(2.5);
        const double theta0 = 0.35;
        const VortexConfig c = polygon_config(p, PeakCount(3), theta0);
        const auto [P, Q] = build_PQ(c);
        const double r = polygon_radius(p, PeakCount(3));
        const Complex lead = std::polar(std::pow(r, 3.0), 3.0 * theta0);
        REQUIRE(P.degree() == 3);
        CHECK(std::abs(P.coeffs[0] + lead) < 1e-14);
        CHECK(std::abs(P.coeffs[1]) < 1e-14);
        CHECK(std::abs(P.coeffs[2]) < 1e-14);
        const Complex leadq = std::polar(std::pow(r, -3.0), 3.0 * theta0);
        CHECK(std::abs(Q.coeffs[0] + leadq) < 1e-12);
    }
    SUBCASE("m=1 real point") {
        const auto [P, Q] = build_PQ(VortexConfig({Complex(0.5, 0.0)}));
        CHECK(std::abs(P.coeffs[0] + 0.5) < 1e-15);
        CHECK(std::abs(Q.coeffs[0] + 2.0) < 1e-15);
    }
    SUBCASE("roots of Q reflect through the unit circle") {
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> rad(0.2, 0.8), ang(0.0, 2 * M_PI);
        std::vector<Complex> pts;
        for (int i = 0; i < 4; ++i) pts.push_back(std::polar(rad(rng), ang(rng)));
        const auto [P, Q] = build_PQ(VortexConfig(pts));
        std::vector<Complex> rp = roots(P), rq = roots(Q);
        for (const Complex& zr : rp) {
            double best = 1e9;
            for (const Complex& zq : rq)
                best = std::min(best, std::abs(std::abs(zr) * std::abs(zq) - 1.0));
            CHECK(best < 1e-9);
        }
    }
}

TEST_CASE("P/Q identity at critical points") {
    SUBCASE("polygon configurations") {
        for (auto [a, m] : {std::pair<double, int>{2.5, 3}, {5.0, 4}, {6.5, 5}, {1.0, 1}}) {
            const DiskParams p(a);
            const auto [P, Q] = build_PQ(polygon_config(p, PeakCount(m), 0.17));
            CHECK(pq_identity_residual(P, Q, p).relative() < 1e-12);
        }
    }
    SUBCASE("m=1 hand critical point") {
        const DiskParams p(2.0);
        const auto [P, Q] = build_PQ(VortexConfig({Complex(std::sqrt(0.5), 0.0)}));
        CHECK(pq_identity_residual(P, Q, p).relative() < 1e-13);
    }
    SUBCASE("displaced root breaks the identity") {
        const DiskParams p(2.5);
        VortexConfig c = polygon_config(p, PeakCount(3));
        c.points[0] += Complex(0.01, 0.0);
        const auto [P, Q] = build_PQ(c);
        CHECK(pq_identity_residual(P, Q, p).relative() > 1e-5);
    }
    SUBCASE("degree mismatch") {
        const DiskParams p(1.0);
        const ComplexPoly P = ComplexPoly::from_roots({Complex(0.5)});
        const ComplexPoly Q = ComplexPoly::from_roots({Complex(2.0), Complex(3.0)});
        CHECK_THROWS_AS(pq_identity_residual(P, Q, p), DegreeMismatch);
    }
}

TEST_CASE("P/Q identity at 200 solver-produced critical points") {
    std::mt19937_64 rng(3141);
    std::uniform_real_distribution<double> theta(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> da(0.2, 3.0);
    std::uniform_real_distribution<double> noise(-0.03, 0.03);
    std::uniform_int_distribution<int> dm(1, 4);
    int produced = 0;
    while (produced < 200) {
        const int m = dm(rng);
        const DiskParams p(m + da(rng)); // guarantees m < alpha + 1
        VortexConfig start = polygon_config(p, PeakCount(m), theta(rng));
        for (Complex& z : start.points) z += Complex(noise(rng), noise(rng));
        if (!config_is_valid(start)) continue;
        const CriticalPointReport rep = newton_refine(start, p, 1e-10, 100);
        if (rep.verdict != Verdict::polygon) continue;
        const auto [P, Q] = build_PQ(rep.config);
        CHECK(pq_identity_residual(P, Q, p).relative() < 1e-10);
        CHECK(unit_circle_clearance(P) > 0.1);
        ++produced;
    }
}

TEST_CASE("reflection coefficient map") {
    SUBCASE("involution is exact") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        for (int t = 0; t < 20; ++t) {
            std::vector<Complex> c;
            for (int i = 0; i < 5; ++i) c.emplace_back(u(rng), u(rng));
            c.emplace_back(1.0, 0.0);
            const ComplexPoly P{std::vector<Complex>(c)};
            const ComplexPoly twice = reflect_coefficients(reflect_coefficients(P));
            REQUIRE(twice.degree() == P.degree());
            for (size_t i = 0; i < c.size(); ++i) CHECK(twice.coeffs[i] == P.coeffs[i]);
        }
    }
    SUBCASE("coefficient map agrees with reflected roots") {
        std::mt19937_64 rng(29);
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        for (int t = 0; t < 10; ++t) {
            std::vector<Complex> w;
            for (int i = 0; i < 4; ++i) w.emplace_back(u(rng), u(rng));
            const ComplexPoly P = ComplexPoly::from_roots(w);
            std::vector<Complex> refl;
            for (const Complex& wj : w) refl.push_back(-std::conj(wj));
            const ComplexPoly Q1 = ComplexPoly::from_roots(refl);
            const ComplexPoly Q2 = reflect_coefficients(P);
            double scale = 1.0;
            for (const Complex& c : Q1.coeffs) scale = std::max(scale, std::abs(c));
            REQUIRE(Q1.degree() == Q2.degree());
            for (int i = 0; i <= Q1.degree(); ++i)
                CHECK(std::abs(Q1.coeffs[i] - Q2.coeffs[i]) < 1e-12 * scale);
        }
    }
}

TEST_CASE("limit identity for the explicit families") {
    SUBCASE("p=3 family") {
        CHECK(limit_identity_residual(limit_family(3, 0.0, 0.0)).relative() < 1e-13);
        for (double t : {-2.0, -1.0, 0.0, 1.0, 2.0})
            for (double s : {-2.0, -1.0, 0.0, 1.0, 2.0})
                CHECK(limit_identity_residual(limit_family(3, t, s)).relative() < 1e-12);
    }
    SUBCASE("p=4 family") {
        CHECK(limit_identity_residual(limit_family(4, 0.0)).relative() < 1e-13);
        for (double t : {-2.0, -0.5, 0.0, 0.5, 2.0})
            CHECK(limit_identity_residual(limit_family(4, t)).relative() < 1e-12);
    }
    SUBCASE("expansion of the t=s=0 p=3 member") {
        const ComplexPoly P = limit_family(3, 0.0, 0.0); // z^3 + 3z^2 + 3z - 3
        REQUIRE(P.degree() == 3);
        CHECK(std::abs(P.coeffs[0] - Complex(-3.0)) < 1e-14);
        CHECK(std::abs(P.coeffs[1] - Complex(3.0)) < 1e-14);
        CHECK(std::abs(P.coeffs[2] - Complex(3.0)) < 1e-14);
    }
    SUBCASE("no p=2 solution over a random sweep") {
        std::mt19937_64 rng(101);
        std::uniform_real_distribution<double> u(-3.0, 3.0);
        double min_resid = 1e9;
        for (int t = 0; t < 10000; ++t) {
            const ComplexPoly P{
                std::vector<Complex>{Complex(u(rng), u(rng)), Complex(u(rng), u(rng)), 1.0}};
            min_resid = std::min(min_resid, limit_identity_residual(P).relative());
        }
        CHECK(min_resid > 1e-6);
    }
    SUBCASE("non-monic rejected") {
        CHECK_THROWS_AS(limit_identity_residual(from_coeffs({1.0, 2.0, Complex(2.0)})), NonMonic);
    }
}

TEST_CASE("residual degree bound 2p-2") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int p = 2; p <= 6; ++p)
        for (int t = 0; t < 10; ++t) {
            std::vector<Complex> c;
            for (int i = 0; i < p; ++i) c.emplace_back(u(rng), u(rng));
            c.emplace_back(1.0, 0.0);
            const IdentityResidual res = limit_identity_residual(ComplexPoly{std::move(c)});
            // coefficients of degrees 2p-1 and 2p cancel identically
            if ((int)res.coeffs.size() > 2 * p - 1)
                CHECK(std::abs(res.coeffs[2 * p - 1]) < 1e-12 * res.normalization);
            if ((int)res.coeffs.size() > 2 * p)
                CHECK(std::abs(res.coeffs[2 * p]) < 1e-12 * res.normalization);
        }
}

TEST_CASE("root structure reports") {
    SUBCASE("p=3 t=s=0: roots -1 + 4^{1/3} w^k") {
        const RootStructure rs = root_structure_report(limit_family(3, 0.0, 0.0));
        CHECK(rs.sum_re == doctest::Approx(-3.0).epsilon(1e-10));
        CHECK(rs.max_re == doctest::Approx(std::cbrt(4.0) - 1.0).epsilon(1e-10));
        CHECK(rs.max_re > 0.0);
    }
    SUBCASE("p=4 t=0: triple root -2 and simple root 2") {
        const RootStructure rs = root_structure_report(limit_family(4, 0.0));
        CHECK(std::abs(rs.sum_re + 4.0) < 1e-10);
        CHECK(rs.max_re == doctest::Approx(2.0).epsilon(1e-10));
    }
    SUBCASE("generic family members") {
        const RootStructure rs = root_structure_report(limit_family(3, 2.0, 5.0));
        CHECK(std::abs(rs.sum_re + 3.0) < 1e-9);
        CHECK(rs.max_re > 0.0);
    }
}

TEST_CASE("unit circle clearance") {
    SUBCASE("polygon P") {
        const DiskParams p(2.5);
        const auto [P, Q] = build_PQ(polygon_config(p, PeakCount(3)));
        const double r = polygon_radius(p, PeakCount(3));
        CHECK(unit_circle_clearance(P) == doctest::Approx(1.0 - r).epsilon(1e-10));
    }
    SUBCASE("roots on the circle") {
        CHECK(unit_circle_clearance(from_coeffs({-1.0, 0.0, 1.0})) ==
              doctest::Approx(0.0).epsilon(1e-12));
    }
}
