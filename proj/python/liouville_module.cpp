// Python bindings for the main toolkit operations.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "liouville/critical.hpp"
#include "liouville/hamiltonian.hpp"
#include "liouville/params.hpp"
#include "liouville/pde2d.hpp"
#include "liouville/poly.hpp"
#include "liouville/radial.hpp"
#include "liouville/spectral.hpp"

namespace py = pybind11;
using namespace liouville;

namespace {

std::vector<std::vector<double>> matrix_to_lists(const Eigen::MatrixXd& M) {
    std::vector<std::vector<double>> out(M.rows(), std::vector<double>(M.cols()));
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j) out[i][j] = M(i, j);
    return out;
}

} // namespace

PYBIND11_MODULE(_liouville, mod) {
    mod.doc() = "Blow-up classification toolkit for the singular Liouville equation "
                "on the unit disk";

    py::register_exception<Error>(mod, "LiouvilleError");

    py::class_<DiskParams>(mod, "DiskParams")
        .def(py::init<double, std::optional<double>>(), py::arg("alpha"),
             py::arg("lambda_") = std::nullopt)
        .def_readonly("alpha", &DiskParams::alpha)
        .def_readonly("beta", &DiskParams::beta)
        .def_readonly("lambda_", &DiskParams::lambda);

    mod.def("ceil_alpha", [](double a) { return ceil_alpha(DiskParams(a)); });
    mod.def("solution_count", [](double a) { return solution_count(DiskParams(a)); });
    mod.def("polygon_radius",
            [](double a, int m) { return polygon_radius(DiskParams(a), PeakCount(m)); });
    mod.def(
        "polygon_config",
        [](double a, int m, double theta0) {
            return polygon_config(DiskParams(a), PeakCount(m), theta0).points;
        },
        py::arg("alpha"), py::arg("m"), py::arg("theta0") = 0.0);

    mod.def("phi_m", [](const std::vector<Complex>& pts, double a) {
        return phi_m(VortexConfig(pts), DiskParams(a));
    });
    mod.def(
        "grad_phi_m",
        [](const std::vector<Complex>& pts, double a, const std::string& mode) {
            const GradMode gm =
                (mode == "complex") ? GradMode::complex_cartesian : GradMode::polar;
            return grad_phi_m(VortexConfig(pts), DiskParams(a), gm).entries;
        },
        py::arg("points"), py::arg("alpha"), py::arg("mode") = "polar");
    mod.def(
        "hessian_fd",
        [](const std::vector<Complex>& pts, double a, double step) {
            return matrix_to_lists(hessian_fd(VortexConfig(pts), DiskParams(a), step));
        },
        py::arg("points"), py::arg("alpha"), py::arg("step") = 1e-5);

    mod.def("e0_value", [](const std::vector<double>& a) { return e0_value(AngleConfig(a)); });
    mod.def("e0_grad", [](const std::vector<double>& a) { return e0_grad(AngleConfig(a)); });
    mod.def("e0_hessian",
            [](const std::vector<double>& a) { return matrix_to_lists(e0_hessian(AngleConfig(a))); });

    py::class_<CriticalPointReport>(mod, "CriticalPointReport")
        .def_property_readonly("points",
                               [](const CriticalPointReport& r) { return r.config.points; })
        .def_readonly("residual", &CriticalPointReport::residual)
        .def_readonly("iterations", &CriticalPointReport::iterations)
        .def_readonly("radius", &CriticalPointReport::polygon_r)
        .def_readonly("theta0", &CriticalPointReport::polygon_theta0)
        .def_readonly("radius_error", &CriticalPointReport::radius_error)
        .def_property_readonly(
            "verdict", [](const CriticalPointReport& r) { return verdict_name(r.verdict); });

    py::class_<SearchSummary>(mod, "SearchSummary")
        .def_readonly("restarts", &SearchSummary::restarts)
        .def_readonly("converged", &SearchSummary::converged)
        .def_readonly("seed", &SearchSummary::seed)
        .def_readonly("distinct_classes", &SearchSummary::distinct_classes);

    mod.def(
        "newton_refine",
        [](const std::vector<Complex>& pts, double a, double tol, int max_iter) {
            return newton_refine(VortexConfig(pts), DiskParams(a), tol, max_iter);
        },
        py::arg("points"), py::arg("alpha"), py::arg("tol") = 1e-10, py::arg("max_iter") = 100);
    mod.def(
        "multistart_search",
        [](double a, int m, int restarts, std::uint64_t seed) {
            return multistart_search(DiskParams(a), PeakCount(m), restarts, seed);
        },
        py::arg("alpha"), py::arg("m"), py::arg("restarts") = 200, py::arg("seed") = 0);
    mod.def("rotation_quotient_distance",
            [](const std::vector<Complex>& a, const std::vector<Complex>& b) {
                return rotation_quotient_distance(VortexConfig(a), VortexConfig(b));
            });
    mod.def(
        "radial_profile_scan",
        [](double a, int m, int grid) {
            std::vector<double> roots;
            for (const SignChange& sc : radial_profile_scan(DiskParams(a), PeakCount(m), grid))
                roots.push_back(sc.root);
            return roots;
        },
        py::arg("alpha"), py::arg("m"), py::arg("grid") = 2000);

    py::class_<ModeBlock>(mod, "ModeBlock")
        .def_readonly("p", &ModeBlock::p)
        .def_readonly("mu", &ModeBlock::mu)
        .def_readonly("nu", &ModeBlock::nu)
        .def_readonly("gamma", &ModeBlock::gamma)
        .def_property_readonly("det", [](const ModeBlock& m) { return m.det(); });

    mod.def("assemble_blocks", [](double a, int m) {
        const BlockCirculant bc = assemble_blocks(DiskParams(a), PeakCount(m));
        std::vector<std::vector<std::vector<double>>> blocks;
        for (const auto& B : bc.blocks) blocks.push_back(matrix_to_lists(B));
        return py::make_tuple(blocks, bc.rho);
    });
    mod.def("mode_block",
            [](double a, int m, int p) { return mode_block(DiskParams(a), PeakCount(m), p); });
    mod.def("lattice_sums", [](double a, int m, int p) {
        const LatticeSums s = lattice_sums(DiskParams(a), PeakCount(m), p);
        return py::make_tuple(s.R, s.S, s.T);
    });
    mod.def("full_spectrum", [](double a, int m) {
        const Spectrum s = full_spectrum(DiskParams(a), PeakCount(m));
        return py::make_tuple(s.eigenvalues, s.zero_vector, s.zero_count);
    });
    mod.def("dft_conjugation_residual",
            [](double a, int m) { return dft_conjugation_residual(DiskParams(a), PeakCount(m)); });

    mod.def("pq_identity_residual", [](const std::vector<Complex>& pts, double a) {
        const auto [P, Q] = build_PQ(VortexConfig(pts));
        return pq_identity_residual(P, Q, DiskParams(a)).relative();
    });
    mod.def(
        "limit_family",
        [](int p, double t, double s) { return limit_family(p, t, s).coeffs; },
        py::arg("p"), py::arg("t") = 0.0, py::arg("s") = 0.0);
    mod.def("limit_identity_residual", [](const std::vector<Complex>& coeffs) {
        return limit_identity_residual(ComplexPoly{std::vector<Complex>(coeffs)}).relative();
    });
    mod.def("poly_roots", [](const std::vector<Complex>& coeffs) {
        return roots(ComplexPoly{std::vector<Complex>(coeffs)});
    });
    mod.def("root_structure_report", [](const std::vector<Complex>& coeffs) {
        const RootStructure r = root_structure_report(ComplexPoly{std::vector<Complex>(coeffs)});
        return py::make_tuple(r.sum_re, r.max_re, r.roots);
    });
    mod.def("unit_circle_clearance", [](const std::vector<Complex>& coeffs) {
        return unit_circle_clearance(ComplexPoly{std::vector<Complex>(coeffs)});
    });

    mod.def("lambda_of_Lambda",
            [](double L, double a) { return lambda_of_Lambda(L, DiskParams(a)); });
    mod.def("lambda_max", [](double a) { return lambda_max(DiskParams(a)); });
    mod.def("solve_Lambda", [](double a, double lam) { return solve_Lambda(DiskParams(a, lam)); });
    mod.def("radial_u", [](double L, double a, double lam, double r) {
        return radial_solution(L, DiskParams(a, lam)).u(r);
    });
    mod.def("shoot", [](double a, double lam, double u0) { return shoot(DiskParams(a, lam), u0); });
    mod.def("mass", [](double L, double a) { return mass(L, DiskParams(a)); });
    mod.def("mass_quadrature",
            [](double L, double a) { return mass_quadrature(L, DiskParams(a)); });
    mod.def("mode_boundary_value", [](int k, double L, double a) {
        const ModeAnalysis m = mode_boundary_value(k, L, DiskParams(a));
        return py::make_tuple(m.delta, m.s_boundary, m.f1_boundary, m.degenerate);
    });
    mod.def("degeneracy_lambda",
            [](int k, double a) { return degeneracy_lambda(k, DiskParams(a)); });
    mod.def("mode_ode_residual",
            [](int k, double a) { return mode_ode_residual(k, DiskParams(a)); });

    py::class_<PeakReport>(mod, "PeakReport")
        .def_property_readonly("peaks",
                               [](const PeakReport& pr) {
                                   std::vector<std::tuple<double, double, double>> out;
                                   for (const Peak& p : pr.peaks)
                                       out.emplace_back(p.r, p.theta, p.height);
                                   return out;
                               })
        .def_readonly("mass", &PeakReport::mass)
        .def_readonly("residual_norm", &PeakReport::residual_norm);

    py::class_<Field2D>(mod, "Field2D")
        .def_property_readonly("r", [](const Field2D& f) { return f.grid->r; })
        .def_property_readonly("values",
                               [](const Field2D& f) { return matrix_to_lists(f.values); })
        .def_readonly("origin", &Field2D::origin)
        .def_readonly("lambda_", &Field2D::lambda)
        .def("interpolate", &Field2D::interpolate)
        .def("peak_report", [](const Field2D& f) { return peak_report(f); })
        .def("mass", [](const Field2D& f) { return mass_2d(f); })
        .def("power_map_check", [](const Field2D& f, int m) { return power_map_check(f, m); })
        .def("angular_monotonicity",
             [](const Field2D& f, int m, double r0) {
                 return std::string(monotonicity_name(angular_monotonicity_check(f, m, r0)));
             });

    mod.def(
        "pde2d_solve",
        [](double a, double lam, int nr, int nt, int sector, const std::string& init) {
            const DiskParams p(a, lam);
            auto g = std::make_shared<PolarGrid>(make_polar_grid(nr, nt, sector));
            Field2D f0 = zero_field(p, g);
            if (init != "zero") {
                const std::vector<double> roots = solve_Lambda(p);
                if (roots.empty()) throw DomainError("no radial solution at this lambda");
                const double L = (init == "radial-singular") ? roots.back() : roots.front();
                const RadialSolution sol = radial_solution(L, p);
                f0 = radial_field(p, g, [&](double r) { return sol.u(r); });
            }
            return newton_solve(p, g, f0);
        },
        py::arg("alpha"), py::arg("lambda_"), py::arg("nr") = 48, py::arg("nt") = 48,
        py::arg("sector") = 1, py::arg("init") = "zero");
    mod.def(
        "enter_one_peak_branch",
        [](double a, double lam, int nr, int nt, double eps) {
            const DiskParams p(a, lam);
            auto g = std::make_shared<PolarGrid>(
                make_polar_grid(nr, nt, 1, polygon_radius(p, PeakCount(1))));
            return enter_one_peak_branch(p, g, eps);
        },
        py::arg("alpha"), py::arg("lambda_"), py::arg("nr") = 64, py::arg("nt") = 64,
        py::arg("eps") = 1e-2);
    mod.def(
        "continue_in_lambda",
        [](double a, double lam_from, double lam_to, int steps, const Field2D& start) {
            const ContinuationRun run =
                continue_in_lambda(DiskParams(a, lam_from), lam_from, lam_to, steps, start);
            std::vector<py::tuple> out;
            for (const ContinuationPoint& cp : run.points)
                out.push_back(py::make_tuple(cp.lambda, cp.field, cp.peaks));
            return py::make_tuple(run.completed, out);
        },
        py::arg("alpha"), py::arg("lambda_from"), py::arg("lambda_to"), py::arg("steps"),
        py::arg("start"));
}
