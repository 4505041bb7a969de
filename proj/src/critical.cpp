#include "liouville/critical.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <thread>

#include "liouville/hamiltonian.hpp"

namespace liouville {

namespace {

VortexConfig from_polar(const Eigen::VectorXd& x) {
    const int m = static_cast<int>(x.size()) / 2;
    std::vector<Complex> pts(m);
    for (int j = 0; j < m; ++j) pts[j] = std::polar(x[2 * j], x[2 * j + 1]);
    return VortexConfig(std::move(pts));
}

Eigen::VectorXd to_polar_vec(const VortexConfig& c) {
    const int m = c.size();
    Eigen::VectorXd x(2 * m);
    for (int j = 0; j < m; ++j) {
        x[2 * j] = std::abs(c.points[j]);
        x[2 * j + 1] = std::arg(c.points[j]);
    }
    return x;
}

Eigen::VectorXd polar_grad(const Eigen::VectorXd& x, const DiskParams& p) {
    const GradientVector g = grad_phi_m(from_polar(x), p, GradMode::polar);
    return Eigen::Map<const Eigen::VectorXd>(g.entries.data(), g.entries.size());
}

bool polar_vec_valid(const Eigen::VectorXd& x) {
    return config_is_valid(from_polar(x));
}

double reduce_mod(double x, double period) {
    double y = std::fmod(x, period);
    if (y < 0) y += period;
    return y;
}

// Classify a converged configuration against the polygon prediction:
// all radii within 1e-6 of a common value and angles equispaced within 1e-6.
void classify(CriticalPointReport& rep, const DiskParams& p) {
    const int m = rep.config.size();
    std::vector<double> radii(m), angles(m);
    for (int j = 0; j < m; ++j) {
        radii[j] = std::abs(rep.config.points[j]);
        angles[j] = std::arg(rep.config.points[j]);
    }
    double rmean = 0.0;
    for (double r : radii) rmean += r;
    rmean /= m;
    bool poly = true;
    for (double r : radii)
        if (std::abs(r - rmean) > 1e-6) poly = false;

    std::sort(angles.begin(), angles.end());
    const double gap = 2.0 * M_PI / m;
    for (int j = 0; j + 1 < m; ++j)
        if (std::abs(angles[j + 1] - angles[j] - gap) > 1e-6) poly = false;
    if (m > 1 &&
        std::abs((angles[0] + 2.0 * M_PI) - angles[m - 1] - gap) > 1e-6)
        poly = false;

    if (!poly || !(m < p.beta)) {
        rep.verdict = Verdict::non_polygon;
        return;
    }
    rep.verdict = Verdict::polygon;
    rep.polygon_r = rmean;
    double t0 = 0.0;
    for (int j = 0; j < m; ++j) t0 += angles[j] - gap * j;
    t0 = reduce_mod(t0 / m, gap);
    rep.polygon_theta0 = t0;
    rep.radius_error = std::abs(rmean - polygon_radius(p, PeakCount(m)));
}

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Smallest max-distance threshold admitting a perfect matching (bottleneck
// assignment, Kuhn's augmenting paths).
double bottleneck_match(const std::vector<std::vector<double>>& d) {
    const int n = static_cast<int>(d.size());
    std::vector<double> cand;
    for (const auto& row : d)
        for (double v : row) cand.push_back(v);
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

    auto feasible = [&](double t) {
        std::vector<int> match(n, -1);
        for (int j = 0; j < n; ++j) {
            std::vector<char> used(n, 0);
            std::function<bool(int)> try_k = [&](int jj) -> bool {
                for (int k = 0; k < n; ++k) {
                    if (used[k] || d[jj][k] > t) continue;
                    used[k] = 1;
                    if (match[k] < 0 || try_k(match[k])) {
                        match[k] = jj;
                        return true;
                    }
                }
                return false;
            };
            if (!try_k(j)) return false;
        }
        return true;
    };

    int lo = 0, hi = static_cast<int>(cand.size()) - 1;
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        if (feasible(cand[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return cand[lo];
}

VortexConfig polygon_at(double r, int m) {
    std::vector<Complex> pts(m);
    for (int j = 0; j < m; ++j) pts[j] = std::polar(r, 2.0 * M_PI * j / m);
    return VortexConfig(std::move(pts));
}

int thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("LIOUVILLE_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1 && static_cast<unsigned long>(cap) < hw) hw = static_cast<unsigned>(cap);
    }
    return static_cast<int>(hw);
}

} // namespace

CriticalPointReport newton_refine(const VortexConfig& c, const DiskParams& p, double tol,
                                  int max_iter) {
    CriticalPointReport rep;
    rep.config = c;
    if (!config_is_valid(c)) return rep;
    if (!(tol > 0.0)) throw DomainError("tol must be positive");

    const int n = 2 * c.size();
    Eigen::VectorXd x = to_polar_vec(c);
    Eigen::VectorXd g = polar_grad(x, p);

    const double fd_h = 1e-6;
    int it = 0;
    for (; it < max_iter; ++it) {
        if (g.lpNorm<Eigen::Infinity>() < tol) break;

        Eigen::MatrixXd J(n, n);
        bool fd_ok = true;
        for (int j = 0; j < n && fd_ok; ++j) {
            Eigen::VectorXd xp = x, xm = x;
            xp[j] += fd_h;
            xm[j] -= fd_h;
            if (!polar_vec_valid(xp) || !polar_vec_valid(xm)) {
                fd_ok = false;
                break;
            }
            J.col(j) = (polar_grad(xp, p) - polar_grad(xm, p)) / (2.0 * fd_h);
        }
        if (!fd_ok) break;
        J = 0.5 * (J + J.transpose().eval());

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double smax = svd.singularValues()(0);
        const double smin = svd.singularValues()(n - 1);
        Eigen::VectorXd d(n);
        if (smin <= 0.0 || smax / smin > 1e12) {
            // Rotational zero mode: solve in the chart that pins theta_1.
            std::vector<int> keep;
            for (int i = 0; i < n; ++i)
                if (i != 1) keep.push_back(i);
            Eigen::MatrixXd Jr(n - 1, n - 1);
            Eigen::VectorXd gr(n - 1);
            for (size_t a = 0; a < keep.size(); ++a) {
                gr[a] = g[keep[a]];
                for (size_t b = 0; b < keep.size(); ++b) Jr(a, b) = J(keep[a], keep[b]);
            }
            const Eigen::VectorXd dr = Jr.fullPivLu().solve(-gr);
            d.setZero();
            for (size_t a = 0; a < keep.size(); ++a) d[keep[a]] = dr[a];
        } else {
            d = J.fullPivLu().solve(-g);
        }
        if (!d.allFinite()) break;

        const double base = g.squaredNorm();
        double t = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 40; ++ls) {
            const Eigen::VectorXd cand = x + t * d;
            if (polar_vec_valid(cand)) {
                const Eigen::VectorXd gc = polar_grad(cand, p);
                if (gc.squaredNorm() <= (1.0 - 1e-4 * t) * base) {
                    x = cand;
                    g = gc;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if (!accepted) break;
    }

    rep.config = from_polar(x);
    rep.residual = g.lpNorm<Eigen::Infinity>();
    rep.iterations = it;
    if (rep.residual < tol)
        classify(rep, p);
    else
        rep.verdict = Verdict::not_converged;
    return rep;
}

double rotation_quotient_distance(const VortexConfig& a, const VortexConfig& b) {
    if (a.size() != b.size()) throw SizeMismatch("configurations differ in size");
    const int m = a.size();

    auto objective = [&](double phi) {
        const Complex w = std::polar(1.0, phi);
        std::vector<std::vector<double>> d(m, std::vector<double>(m));
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) d[j][k] = std::abs(a.points[j] * w - b.points[k]);
        return bottleneck_match(d);
    };

    const int coarse = 720;
    double best_phi = 0.0, best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < coarse; ++i) {
        const double phi = 2.0 * M_PI * i / coarse;
        const double v = objective(phi);
        if (v < best) {
            best = v;
            best_phi = phi;
        }
    }
    double window = 2.0 * M_PI / coarse;
    for (int round = 0; round < 9; ++round) {
        const int pts = 17;
        double lb = best_phi - window, ub = best_phi + window;
        for (int i = 0; i <= pts; ++i) {
            const double phi = lb + (ub - lb) * i / pts;
            const double v = objective(phi);
            if (v < best) {
                best = v;
                best_phi = phi;
            }
        }
        window /= 8.0;
    }
    return best;
}

SearchSummary multistart_search(const DiskParams& p, const PeakCount& pc, int restarts,
                                std::uint64_t seed) {
    if (restarts < 1) throw DomainError("restarts must be >= 1");
    const int m = pc.m;

    SearchSummary out;
    out.restarts = restarts;
    out.seed = seed;

    std::vector<std::optional<CriticalPointReport>> results(restarts);
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= restarts) return;
            std::mt19937_64 rng(splitmix64(seed + 0x9E3779B97F4A7C15ULL * (i + 1)));
            std::uniform_real_distribution<double> rad(0.1, 0.95);
            std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
            VortexConfig start;
            bool found = false;
            for (int att = 0; att < 1000 && !found; ++att) {
                std::vector<Complex> pts(m);
                for (int j = 0; j < m; ++j) pts[j] = std::polar(rad(rng), ang(rng));
                bool ok = true;
                for (int j = 0; j < m && ok; ++j)
                    for (int k = j + 1; k < m && ok; ++k)
                        if (std::abs(pts[j] - pts[k]) < 0.1) ok = false;
                if (ok) {
                    start = VortexConfig(std::move(pts));
                    found = true;
                }
            }
            if (!found) continue;
            const CriticalPointReport rep = newton_refine(start, p, 1e-10, 100);
            if (rep.verdict != Verdict::not_converged) results[i] = rep;
        }
    };
    const int nthreads = std::min(thread_budget(), restarts);
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    std::vector<CriticalPointReport> converged;
    for (auto& r : results)
        if (r) converged.push_back(std::move(*r));
    out.converged = static_cast<int>(converged.size());

    // Order-independent aggregation: sort by radius profile, then dedup
    // modulo rotation.
    auto sort_key = [](const CriticalPointReport& r) {
        std::vector<double> radii;
        for (const Complex& z : r.config.points) radii.push_back(std::abs(z));
        std::sort(radii.begin(), radii.end());
        return radii;
    };
    std::stable_sort(converged.begin(), converged.end(),
                     [&](const CriticalPointReport& x, const CriticalPointReport& y) {
                         return sort_key(x) < sort_key(y);
                     });
    for (auto& rep : converged) {
        bool dup = false;
        for (const auto& cls : out.distinct_classes)
            if (rotation_quotient_distance(rep.config, cls.config) < 1e-6) {
                dup = true;
                break;
            }
        if (!dup) out.distinct_classes.push_back(std::move(rep));
    }
    return out;
}

std::vector<SignChange> radial_profile_scan(const DiskParams& p, const PeakCount& pc,
                                            int grid) {
    if (grid < 100) throw DomainError("grid must be >= 100");
    const int m = pc.m;
    auto slope = [&](double r) {
        const GradientVector g = grad_phi_m(polygon_at(r, m), p, GradMode::polar);
        double acc = 0.0;
        for (int j = 0; j < m; ++j) acc += g.entries[2 * j];
        return acc;
    };

    std::vector<SignChange> out;
    const double lo = 0.01, hi = 0.99;
    double prev_r = lo, prev_v = slope(lo);
    for (int i = 1; i < grid; ++i) {
        const double r = lo + (hi - lo) * i / (grid - 1.0);
        const double v = slope(r);
        if ((prev_v < 0.0) != (v < 0.0)) {
            double a = prev_r, b = r, fa = prev_v;
            while (b - a > 1e-12) {
                const double mid = 0.5 * (a + b);
                const double fm = slope(mid);
                if ((fa < 0.0) != (fm < 0.0))
                    b = mid;
                else {
                    a = mid;
                    fa = fm;
                }
            }
            out.push_back({prev_r, r, 0.5 * (a + b)});
        }
        prev_r = r;
        prev_v = v;
    }
    return out;
}

} // namespace liouville
