#include "liouville/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace liouville {

namespace {

// Angle reduced to (-pi, pi].
template <typename T>
T reduce_angle(T x) {
    const T two_pi = 2 * static_cast<T>(M_PIl);
    x = std::fmod(x, two_pi);
    if (x <= -static_cast<T>(M_PIl)) x += two_pi;
    if (x > static_cast<T>(M_PIl)) x -= two_pi;
    return x;
}

template <typename T>
struct PolarPoints {
    std::vector<T> r, th;
};

template <typename T>
bool polar_valid(const PolarPoints<T>& c) {
    const int m = static_cast<int>(c.r.size());
    for (int j = 0; j < m; ++j) {
        if (!(c.r[j] > kConfigGuard)) return false;
        if (!(1.0 - c.r[j] > kConfigGuard)) return false;
    }
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
            const T dx = c.r[j] * std::cos(c.th[j]) - c.r[k] * std::cos(c.th[k]);
            const T dy = c.r[j] * std::sin(c.th[j]) - c.r[k] * std::sin(c.th[k]);
            if (std::sqrt(dx * dx + dy * dy) < kConfigGuard) return false;
        }
    return true;
}

// Phi_m in polar variables; evaluated in T = long double by hessian_fd.
template <typename T>
T phi_polar(const PolarPoints<T>& c, double alpha) {
    const int m = static_cast<int>(c.r.size());
    T acc = 0;
    for (int j = 0; j < m; ++j) {
        acc += 2 * static_cast<T>(alpha) * std::log(c.r[j]);
        acc += 2 * std::log(1 - c.r[j] * c.r[j]);
    }
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (k == j) continue;
            const T cd = std::cos(c.th[j] - c.th[k]);
            const T rj = c.r[j], rk = c.r[k];
            const T A = 1 + rj * rj * rk * rk - 2 * rj * rk * cd;
            const T B = rj * rj + rk * rk - 2 * rj * rk * cd;
            acc += std::log(A) - std::log(B);
        }
    return acc;
}

template <typename T>
PolarPoints<T> to_polar(const VortexConfig& c) {
    PolarPoints<T> out;
    out.r.reserve(c.points.size());
    out.th.reserve(c.points.size());
    for (const Complex& z : c.points) {
        out.r.push_back(static_cast<T>(std::abs(z)));
        out.th.push_back(static_cast<T>(std::arg(z)));
    }
    return out;
}

double f0(double phi) {
    phi = reduce_angle(phi);
    const double s = std::sin(phi / 2);
    const double s2 = s * s;
    return (2.0 + std::cos(phi)) / (2.0 * s2 * s2);
}

void validate_angles(const AngleConfig& a) {
    const int m = a.size();
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k)
            if (std::abs(std::sin((a.angles[j] - a.angles[k]) / 2.0)) < 1e-9)
                throw CollidingAngles("angles coincide modulo 2*pi");
}

} // namespace

void validate_config(const VortexConfig& c) {
    if (c.points.empty()) throw DegenerateConfig("empty configuration");
    for (const Complex& z : c.points) {
        const double r = std::abs(z);
        if (!(r > kConfigGuard))
            throw DegenerateConfig("point too close to the origin");
        if (!(1.0 - r > kConfigGuard))
            throw DegenerateConfig("point too close to the boundary");
    }
    const int m = c.size();
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k)
            if (std::abs(c.points[j] - c.points[k]) < kConfigGuard)
                throw DegenerateConfig("points too close to each other");
}

bool config_is_valid(const VortexConfig& c) {
    try {
        validate_config(c);
        return true;
    } catch (const DegenerateConfig&) {
        return false;
    }
}

VortexConfig rotate(const VortexConfig& c, double phi) {
    VortexConfig out = c;
    const Complex w = std::polar(1.0, phi);
    for (Complex& z : out.points) z *= w;
    return out;
}

double phi_m(const VortexConfig& c, const DiskParams& p) {
    validate_config(c);
    return static_cast<double>(phi_polar(to_polar<double>(c), p.alpha));
}

std::vector<Complex> critical_residual(const VortexConfig& c, const DiskParams& p) {
    validate_config(c);
    const int m = c.size();
    std::vector<Complex> res(m);
    for (int j = 0; j < m; ++j) {
        const Complex zj = c.points[j];
        Complex s = -p.alpha / (2.0 * zj);
        for (int k = 0; k < m; ++k) {
            if (k != j) s += 1.0 / (zj - c.points[k]);
            s -= 1.0 / (zj - 1.0 / std::conj(c.points[k]));
        }
        res[j] = s;
    }
    return res;
}

GradientVector grad_phi_m(const VortexConfig& c, const DiskParams& p, GradMode mode) {
    validate_config(c);
    const int m = c.size();
    GradientVector g;
    g.mode = mode;
    g.entries.assign(2 * m, 0.0);

    if (mode == GradMode::complex_cartesian) {
        const std::vector<Complex> res = critical_residual(c, p);
        for (int j = 0; j < m; ++j) {
            g.entries[2 * j] = -4.0 * res[j].real();
            g.entries[2 * j + 1] = 4.0 * res[j].imag();
        }
        return g;
    }

    const PolarPoints<double> pol = to_polar<double>(c);
    for (int j = 0; j < m; ++j) {
        const double rj = pol.r[j];
        double gr = 2.0 * p.alpha / rj - 4.0 * rj / (1.0 - rj * rj);
        double gt = 0.0;
        for (int k = 0; k < m; ++k) {
            if (k == j) continue;
            const double rk = pol.r[k];
            const double cd = std::cos(pol.th[j] - pol.th[k]);
            const double sd = std::sin(pol.th[j] - pol.th[k]);
            const double A = 1.0 + rj * rj * rk * rk - 2.0 * rj * rk * cd;
            const double B = rj * rj + rk * rk - 2.0 * rj * rk * cd;
            gr += 2.0 * ((2.0 * rj * rk * rk - 2.0 * rk * cd) / A -
                         (2.0 * rj - 2.0 * rk * cd) / B);
            gt += 4.0 * rj * rk * sd * (1.0 / A - 1.0 / B);
        }
        g.entries[2 * j] = gr;
        g.entries[2 * j + 1] = gt;
    }
    return g;
}

Eigen::MatrixXd hessian_fd(const VortexConfig& c, const DiskParams& p, double step) {
    validate_config(c);
    if (!(step > 0.0)) throw DomainError("FD step must be positive");
    const int m = c.size();
    const int n = 2 * m;
    const PolarPoints<long double> base = to_polar<long double>(c);
    const long double h = static_cast<long double>(step);

    auto probe = [&](int i, long double di, int j, long double dj) -> long double {
        PolarPoints<long double> q = base;
        auto bump = [&](int idx, long double d) {
            if (idx % 2 == 0)
                q.r[idx / 2] += d;
            else
                q.th[idx / 2] += d;
        };
        bump(i, di);
        if (j >= 0) bump(j, dj);
        if (!polar_valid(q)) throw StepTooLarge("FD probe leaves the guarded domain");
        return phi_polar(q, p.alpha);
    };

    const long double f00 = phi_polar(base, p.alpha);
    Eigen::MatrixXd H(n, n);
    for (int i = 0; i < n; ++i) {
        const long double fp = probe(i, h, -1, 0);
        const long double fm = probe(i, -h, -1, 0);
        H(i, i) = static_cast<double>((fp - 2 * f00 + fm) / (h * h));
        for (int j = i + 1; j < n; ++j) {
            const long double fpp = probe(i, h, j, h);
            const long double fpm = probe(i, h, j, -h);
            const long double fmp = probe(i, -h, j, h);
            const long double fmm = probe(i, -h, j, -h);
            const double v = static_cast<double>((fpp - fpm - fmp + fmm) / (4 * h * h));
            H(i, j) = v;
            H(j, i) = v;
        }
    }
    return 0.5 * (H + H.transpose());
}

double e0_value(const AngleConfig& a) {
    validate_angles(a);
    const int m = a.size();
    double acc = 0.0;
    for (int j = 0; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
            const double s = std::sin(reduce_angle(a.angles[j] - a.angles[k]) / 2.0);
            acc += 1.0 / (s * s);
        }
    return acc;
}

std::vector<double> e0_grad(const AngleConfig& a) {
    validate_angles(a);
    const int m = a.size();
    std::vector<double> g(m, 0.0);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (k == j) continue;
            const double d = reduce_angle(a.angles[j] - a.angles[k]) / 2.0;
            const double s = std::sin(d);
            g[j] -= std::cos(d) / (s * s * s);
        }
    return g;
}

Eigen::MatrixXd e0_hessian(const AngleConfig& a) {
    validate_angles(a);
    const int m = a.size();
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m, m);
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            if (k == j) continue;
            const double f = f0(a.angles[j] - a.angles[k]);
            H(j, k) = -f;
            H(j, j) += f;
        }
    return H;
}

AngleConfig e0_newton(const AngleConfig& start, double tol, int max_iter) {
    const int m = start.size();
    Eigen::VectorXd phi(m);
    for (int j = 0; j < m; ++j) phi[j] = start.angles[j];

    // Orthonormal basis of the mean-zero subspace (rotation mode removed).
    Eigen::MatrixXd B(m, m - 1);
    B.setZero();
    for (int c = 0; c < m - 1; ++c) {
        for (int r = 0; r <= c; ++r) B(r, c) = 1.0;
        B(c + 1, c) = -(c + 1.0);
        B.col(c).normalize();
    }

    auto angles_ok = [&](const Eigen::VectorXd& v) {
        for (int j = 0; j < m; ++j)
            for (int k = j + 1; k < m; ++k)
                if (std::abs(std::sin((v[j] - v[k]) / 2.0)) < 1e-7) return false;
        return true;
    };
    auto grad_of = [&](const Eigen::VectorXd& v) {
        std::vector<double> vv(v.data(), v.data() + m);
        const std::vector<double> g = e0_grad(AngleConfig(vv));
        return Eigen::Map<const Eigen::VectorXd>(g.data(), m).eval();
    };

    Eigen::VectorXd g = grad_of(phi);
    for (int it = 0; it < max_iter; ++it) {
        if (g.norm() < tol) break;
        std::vector<double> vv(phi.data(), phi.data() + m);
        const Eigen::MatrixXd H = e0_hessian(AngleConfig(vv));
        const Eigen::MatrixXd Hr = B.transpose() * H * B;
        const Eigen::VectorXd gr = B.transpose() * g;
        Eigen::VectorXd dc = Hr.ldlt().solve(-gr);
        Eigen::VectorXd d = B * dc;
        double t = 1.0;
        const double base = g.squaredNorm();
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            const Eigen::VectorXd cand = phi + t * d;
            if (angles_ok(cand)) {
                const Eigen::VectorXd gc = grad_of(cand);
                if (gc.squaredNorm() <= (1.0 - 1e-4 * t) * base) {
                    phi = cand;
                    g = gc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }
    std::vector<double> out(phi.data(), phi.data() + m);
    return AngleConfig(std::move(out));
}

} // namespace liouville
