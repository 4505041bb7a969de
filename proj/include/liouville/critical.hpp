#pragma once

#include <cstdint>
#include <optional>

#include "liouville/params.hpp"

namespace liouville {

enum class Verdict { polygon, non_polygon, not_converged };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::polygon: return "polygon";
        case Verdict::non_polygon: return "non_polygon";
        default: return "not_converged";
    }
}

struct CriticalPointReport {
    VortexConfig config;
    double residual = 0.0; // max-norm of the polar gradient
    Verdict verdict = Verdict::not_converged;
    double polygon_r = 0.0;      // measured common radius (polygon verdict)
    double polygon_theta0 = 0.0; // representative rotation angle
    std::optional<double> radius_error;
    int iterations = 0;
};

struct SearchSummary {
    int restarts = 0;
    int converged = 0;
    std::vector<CriticalPointReport> distinct_classes;
    std::uint64_t seed = 0;
};

struct SignChange {
    double r_lo = 0.0, r_hi = 0.0;
    double root = 0.0; // bisected to 1e-12
};

/// Damped Newton on the polar gradient with backtracking on |grad|^2.
/// Falls back to the theta_1-pinned chart when the Jacobian condition
/// estimate exceeds 1e12 (the rotational zero mode).
CriticalPointReport newton_refine(const VortexConfig& c, const DiskParams& p,
                                  double tol = 1e-10, int max_iter = 100);

/// Uniform random starts (radii in (0.1, 0.95), min separation 0.1),
/// deduplicated modulo rotation. Deterministic for fixed seed.
SearchSummary multistart_search(const DiskParams& p, const PeakCount& m, int restarts,
                                std::uint64_t seed);

/// min over rotations and relabelings of the max pointwise distance.
double rotation_quotient_distance(const VortexConfig& a, const VortexConfig& b);

/// Sign changes of d/dr Phi_m(polygon(r)) on a uniform grid in (0.01, 0.99).
std::vector<SignChange> radial_profile_scan(const DiskParams& p, const PeakCount& m,
                                            int grid = 2000);

} // namespace liouville
