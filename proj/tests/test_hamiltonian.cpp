#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "liouville/hamiltonian.hpp"

using namespace liouville;

namespace {

// Independent term-by-term oracle for Phi_m, written directly from the
// complex-notation definition (long double accumulation).
long double phi_oracle(const VortexConfig& c, double alpha) {
    const int m = c.size();
    long double acc = 0.0L;
    for (int j = 0; j < m; ++j) {
        const std::complex<long double> z(c.points[j].real(), c.points[j].imag());
        acc += 2.0L * (long double)alpha * std::log(std::abs(z));
        acc += 2.0L * std::log(1.0L - std::norm(z));
    }
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (j == k) continue;
            const std::complex<long double> zj(c.points[j].real(), c.points[j].imag());
            const std::complex<long double> zk(c.points[k].real(), c.points[k].imag());
            acc += 2.0L * std::log(std::abs(1.0L - zj * std::conj(zk)));
            acc -= 2.0L * std::log(std::abs(zj - zk));
        }
    return acc;
}

VortexConfig random_config(std::mt19937_64& rng, int m, double min_sep = 0.05) {
    std::uniform_real_distribution<double> rad(0.15, 0.9);
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
    for (;;) {
        std::vector<Complex> pts(m);
        for (int j = 0; j < m; ++j) pts[j] = std::polar(rad(rng), ang(rng));
        bool ok = true;
        for (int j = 0; j < m && ok; ++j)
            for (int k = j + 1; k < m && ok; ++k)
                if (std::abs(pts[j] - pts[k]) < min_sep) ok = false;
        if (ok) return VortexConfig(pts);
    }
}

std::vector<double> equiangular(int m) {
    std::vector<double> a(m);
    for (int j = 0; j < m; ++j) a[j] = 2.0 * M_PI * j / m;
    return a;
}

} // namespace

TEST_CASE("phi_m hand values") {
    // m=1 real point: 2 a log r + 2 log(1 - r^2)
    const VortexConfig c(std::vector<Complex>{Complex(0.5, 0.0)});
    const double v = phi_m(c, DiskParams(2.0));
    CHECK(v == doctest::Approx(4.0 * std::log(0.5) + 2.0 * std::log(0.75)).epsilon(1e-14));
    CHECK(v == doctest::Approx(-3.3479532).epsilon(1e-6));
}

TEST_CASE("phi_m matches independent summation oracle") {
    const DiskParams p(1.0);
    const VortexConfig c(std::vector<Complex>{Complex(0.5, 0.0), Complex(-0.5, 0.0)});
    CHECK(phi_m(c, p) == doctest::Approx((double)phi_oracle(c, 1.0)).epsilon(1e-12));

    std::mt19937_64 rng(12345);
    for (int t = 0; t < 20; ++t) {
        const VortexConfig rc = random_config(rng, 1 + (t % 5));
        const DiskParams q(0.5 + 0.37 * (t % 7));
        CHECK(phi_m(rc, q) == doctest::Approx((double)phi_oracle(rc, q.alpha)).epsilon(1e-12));
    }
}

TEST_CASE("phi_m rotational invariance") {
    std::mt19937_64 rng(777);
    std::uniform_real_distribution<double> ang(0.0, 2 * M_PI);
    const DiskParams p(2.5);
    for (int t = 0; t < 100; ++t) {
        const VortexConfig c = random_config(rng, 1 + (t % 4));
        const double phi = ang(rng);
        CHECK(phi_m(rotate(c, phi), p) == doctest::Approx(phi_m(c, p)).epsilon(1e-12));
    }
}

TEST_CASE("phi_m rejects degenerate configurations") {
    const DiskParams p(1.0);
    CHECK_THROWS_AS(phi_m(VortexConfig({Complex(0.5, 0), Complex(0.5 + 1e-9, 0)}), p),
                    DegenerateConfig);
    CHECK_THROWS_AS(phi_m(VortexConfig({Complex(1.0 - 1e-9, 0)}), p), DegenerateConfig);
    CHECK_THROWS_AS(phi_m(VortexConfig({Complex(1e-9, 0)}), p), DegenerateConfig);
}

TEST_CASE("gradient at the polygon vanishes") {
    const DiskParams p(2.5);
    const VortexConfig c = polygon_config(p, PeakCount(3));
    const GradientVector g = grad_phi_m(c, p, GradMode::polar);
    REQUIRE(g.entries.size() == 6);
    for (double e : g.entries) CHECK(std::abs(e) < 1e-10);
    // theta components vanish by symmetry of the polar formula
    for (int j = 0; j < 3; ++j) CHECK(std::abs(g.entries[2 * j + 1]) < 1e-13);
}

TEST_CASE("gradient m=1 hand value") {
    const DiskParams p(2.0);
    const VortexConfig c(std::vector<Complex>{Complex(0.5, 0.0)});
    const GradientVector g = grad_phi_m(c, p, GradMode::polar);
    CHECK(g.entries[0] == doctest::Approx(8.0 - 8.0 / 3.0).epsilon(1e-13));
    CHECK(g.entries[1] == doctest::Approx(0.0));
}

TEST_CASE("gradient matches finite differences") {
    std::mt19937_64 rng(31);
    const double h = 1e-6;
    for (int t = 0; t < 100; ++t) {
        const int m = 1 + (t % 4);
        const DiskParams p(0.7 + 0.41 * (t % 6));
        const VortexConfig c = random_config(rng, m);
        const GradientVector g = grad_phi_m(c, p, GradMode::polar);
        for (int i = 0; i < 2 * m; ++i) {
            auto probe = [&](double d) {
                std::vector<Complex> pts = c.points;
                const int j = i / 2;
                double r = std::abs(pts[j]), th = std::arg(pts[j]);
                (i % 2 == 0 ? r : th) += d;
                pts[j] = std::polar(r, th);
                return phi_m(VortexConfig(pts), p);
            };
            const double fd = (probe(h) - probe(-h)) / (2.0 * h);
            CHECK(std::abs(g.entries[i] - fd) < 1e-5);
        }
    }
}

TEST_CASE("complex and polar gradients agree under the Jacobian") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 50; ++t) {
        const int m = 1 + (t % 4);
        const DiskParams p(1.3 + 0.3 * (t % 5));
        const VortexConfig c = random_config(rng, m);
        const GradientVector gp = grad_phi_m(c, p, GradMode::polar);
        const GradientVector gc = grad_phi_m(c, p, GradMode::complex_cartesian);
        for (int j = 0; j < m; ++j) {
            const double th = std::arg(c.points[j]);
            const double r = std::abs(c.points[j]);
            const double gr = std::cos(th) * gc.entries[2 * j] + std::sin(th) * gc.entries[2 * j + 1];
            const double gt =
                r * (-std::sin(th) * gc.entries[2 * j] + std::cos(th) * gc.entries[2 * j + 1]);
            CHECK(std::abs(gr - gp.entries[2 * j]) < 1e-11);
            CHECK(std::abs(gt - gp.entries[2 * j + 1]) < 1e-11);
        }
    }
}

TEST_CASE("hessian_fd basic properties") {
    const DiskParams p(2.0);
    SUBCASE("m=1 radial entry is negative at the polygon") {
        const VortexConfig c = polygon_config(p, PeakCount(1));
        const Eigen::MatrixXd H = hessian_fd(c, p, 1e-5);
        CHECK(H(0, 0) < 0.0);
        // d^2/dr^2 of 2 a log r + 2 log(1-r^2) at r^2 = 1/2
        const double r2 = 0.5;
        const double expect = -2.0 * p.alpha / r2 - 4.0 * (1.0 + r2) / ((1.0 - r2) * (1.0 - r2));
        CHECK(H(0, 0) == doctest::Approx(expect).epsilon(1e-7));
    }
    SUBCASE("rotation leaves eigenvalues unchanged") {
        const DiskParams q(3.5);
        const VortexConfig c = polygon_config(q, PeakCount(3));
        const VortexConfig cr = rotate(c, 0.83);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e1(hessian_fd(c, q, 1e-5));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> e2(hessian_fd(cr, q, 1e-5));
        const double rad = e1.eigenvalues().cwiseAbs().maxCoeff();
        for (int i = 0; i < e1.eigenvalues().size(); ++i)
            CHECK(std::abs(e1.eigenvalues()[i] - e2.eigenvalues()[i]) < 1e-8 * rad);
    }
    SUBCASE("step too large") {
        const VortexConfig c(std::vector<Complex>{Complex(0.99, 0.0)});
        CHECK_THROWS_AS(hessian_fd(c, p, 0.5), StepTooLarge);
    }
}

TEST_CASE("E0 values and gradient") {
    SUBCASE("m=3 equiangular") {
        const AngleConfig a(equiangular(3));
        CHECK(e0_value(a) == doctest::Approx(4.0).epsilon(1e-13));
        for (double gj : e0_grad(a)) CHECK(std::abs(gj) < 1e-12);
    }
    SUBCASE("m=2 antipodal") {
        CHECK(e0_value(AngleConfig({0.0, M_PI})) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("m=4 equiangular value m(m^2-1)/6") {
        CHECK(e0_value(AngleConfig(equiangular(4))) == doctest::Approx(10.0).epsilon(1e-13));
    }
    SUBCASE("colliding angles") {
        CHECK_THROWS_AS(e0_value(AngleConfig({0.0, 2.0 * M_PI})), CollidingAngles);
    }
}

TEST_CASE("E0 equiangular values for m=3..6") {
    for (int m = 3; m <= 6; ++m) {
        const double expect = m * (m * m - 1.0) / 6.0;
        CHECK(e0_value(AngleConfig(equiangular(m))) == doctest::Approx(expect).epsilon(1e-10));
    }
}

TEST_CASE("E0 hessian structure and convexity bound") {
    for (int m = 3; m <= 6; ++m) {
        const AngleConfig a(equiangular(m));
        const Eigen::MatrixXd H = e0_hessian(a);
        // off-diagonal entries are -f0(phi_j - phi_k)
        for (int j = 0; j < m; ++j) {
            double row = 0.0;
            for (int k = 0; k < m; ++k) row += H(j, k);
            CHECK(std::abs(row) < 1e-9); // rotation mode in the kernel
        }
        // restricted to the mean-zero subspace, min eigenvalue >= m/2
        Eigen::MatrixXd B(m, m - 1);
        B.setZero();
        for (int c = 0; c < m - 1; ++c) {
            for (int r = 0; r <= c; ++r) B(r, c) = 1.0;
            B(c + 1, c) = -(c + 1.0);
            B.col(c).normalize();
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B.transpose() * H * B);
        CHECK(es.eigenvalues().minCoeff() >= m / 2.0 - 1e-8);
    }
}

TEST_CASE("E0 unique critical point via multistart Newton") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> jitter(-0.8, 0.8);
    for (int m : {3, 4, 5}) {
        int runs = (m == 4) ? 20 : 15;
        for (int t = 0; t < runs; ++t) {
            std::vector<double> start = equiangular(m);
            for (double& s : start) s += jitter(rng);
            std::sort(start.begin(), start.end());
            bool distinct = true;
            for (int j = 0; j + 1 < m; ++j)
                if (start[j + 1] - start[j] < 0.2) distinct = false;
            if (!distinct) continue;

            AngleConfig got = e0_newton(AngleConfig(start));
            std::vector<double> angles = got.angles;
            std::sort(angles.begin(), angles.end());
            // compare consecutive gaps with 2 pi / m
            for (int j = 0; j + 1 < m; ++j)
                CHECK(angles[j + 1] - angles[j] == doctest::Approx(2.0 * M_PI / m).epsilon(1e-9));
        }
    }
}
