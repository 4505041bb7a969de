// Command-line front end: every toolkit operation as a subcommand with
// deterministic JSON/CSV output (sorted keys, 17 significant digits).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "liouville/critical.hpp"
#include "liouville/hamiltonian.hpp"
#include "liouville/jsonio.hpp"
#include "liouville/params.hpp"
#include "liouville/pde2d.hpp"
#include "liouville/poly.hpp"
#include "liouville/radial.hpp"
#include "liouville/spectral.hpp"

using namespace liouville;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

void write_out(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

void emit_error(const std::string& code, const std::string& message,
                const std::string& flag = "") {
    json j;
    j["error"] = {{"code", code}, {"message", message}, {"flag", flag}};
    std::cerr << emit_canonical(j);
}

std::string csv_row(std::initializer_list<double> vals) {
    std::string row;
    bool first = true;
    for (double v : vals) {
        if (!first) row += ',';
        first = false;
        row += format_double(v);
    }
    row += '\n';
    return row;
}

json run_count(const DiskParams& p) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["alpha"] = p.alpha;
    j["classes"] = solution_count(p);
    json breakdown = json::array();
    breakdown.push_back("minimal");
    breakdown.push_back("singular");
    for (int m = 1; m <= ceil_alpha(p); ++m) breakdown.push_back("m=" + std::to_string(m));
    j["breakdown"] = breakdown;
    return j;
}

json run_critical(const DiskParams& p, int m, int restarts, std::uint64_t seed) {
    const SearchSummary s = multistart_search(p, PeakCount(m), restarts, seed);
    json j = to_json(s);
    j["schema_version"] = kSchemaVersion;
    j["alpha"] = p.alpha;
    j["m"] = m;
    return j;
}

json hessian_json(const DiskParams& p, int m) {
    const BlockCirculant bc = assemble_blocks(p, PeakCount(m));
    json modes = json::array();
    for (int q = 0; q < m; ++q) {
        const ModeBlock mb = mode_block(p, PeakCount(m), q);
        modes.push_back({{"p", q},
                         {"mu", mb.mu},
                         {"nu", mb.nu},
                         {"gamma", mb.gamma},
                         {"det", mb.det()},
                         {"det_closed_form", mb.det_closed_form(m, bc.rho)}});
    }
    const Spectrum s = full_spectrum(p, PeakCount(m));
    json j;
    j["schema_version"] = kSchemaVersion;
    j["alpha"] = p.alpha;
    j["m"] = m;
    j["rho"] = bc.rho;
    j["radius"] = std::sqrt(bc.rho);
    j["modes"] = modes;
    j["eigenvalues"] = s.eigenvalues;
    j["zero_vector"] = s.zero_vector;
    j["zero_count"] = s.zero_count;
    j["dft_residual"] = dft_conjugation_residual(p, PeakCount(m));
    return j;
}

std::string hessian_csv(const DiskParams& p, int m) {
    const BlockCirculant bc = assemble_blocks(p, PeakCount(m));
    std::string out = "p,mu,nu,gamma,det,det_closed_form\n";
    for (int q = 0; q < m; ++q) {
        const ModeBlock mb = mode_block(p, PeakCount(m), q);
        out += std::to_string(q) + ',';
        out += csv_row({mb.mu, mb.nu, mb.gamma, mb.det(), mb.det_closed_form(m, bc.rho)});
    }
    return out;
}

json run_poly_check(const DiskParams& p, int m, double theta0) {
    const VortexConfig c = polygon_config(p, PeakCount(m), theta0);
    const auto [P, Q] = build_PQ(c);
    const IdentityResidual res = pq_identity_residual(P, Q, p);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["alpha"] = p.alpha;
    j["m"] = m;
    j["theta0"] = theta0;
    j["radius"] = polygon_radius(p, PeakCount(m));
    j["relative_residual"] = res.relative();
    j["unit_circle_clearance"] = unit_circle_clearance(P);
    return j;
}

json run_limit_poly(int pdeg, double t, double s) {
    const ComplexPoly P = limit_family(pdeg, t, s);
    const RootStructure rs = root_structure_report(P);
    json coeffs = json::array();
    for (const Complex& c : P.coeffs) coeffs.push_back({{"re", c.real()}, {"im", c.imag()}});
    json j;
    j["schema_version"] = kSchemaVersion;
    j["p"] = pdeg;
    j["t"] = t;
    j["s"] = s;
    j["coeffs"] = coeffs;
    j["relative_residual"] = limit_identity_residual(P).relative();
    j["sum_re"] = rs.sum_re;
    j["max_re"] = rs.max_re;
    return j;
}

json run_radial(const DiskParams& p) {
    json sols = json::array();
    const std::vector<double> roots = solve_Lambda(p);
    const std::vector<Branch> tags =
        roots.size() == 2 ? std::vector<Branch>{Branch::minimal, Branch::singular}
                          : std::vector<Branch>(roots.size(), Branch::minimal);
    for (size_t i = 0; i < roots.size(); ++i) {
        const RadialSolution s = radial_solution(roots[i], p);
        sols.push_back({{"branch", branch_name(roots.size() == 1 ? Branch::minimal : tags[i])},
                        {"Lambda", s.Lambda},
                        {"mass", mass(s.Lambda, p)},
                        {"sup_norm", s.sup_norm()},
                        {"u0", s.u(0.0)}});
    }
    json j;
    j["schema_version"] = kSchemaVersion;
    j["alpha"] = p.alpha;
    j["lambda"] = p.lambda_value();
    j["lambda_max"] = lambda_max(p);
    j["solutions"] = sols;
    return j;
}

std::string run_bifurcate(const DiskParams& p, double lo, double hi, int steps) {
    std::vector<double> grid;
    for (int i = 0; i < steps; ++i)
        grid.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1.0));
    std::string out = "lambda,branch,Lambda,mass,sup_norm\n";
    for (const BranchPoint& bp : continuation(p, grid)) {
        out += format_double(bp.lambda);
        out += ',';
        out += branch_name(bp.branch);
        out += ',';
        out += csv_row({bp.Lambda, bp.mass, bp.sup_norm});
    }
    return out;
}

json run_modes(const DiskParams& p, int kmax, double Lambda) {
    json per_k = json::array();
    for (int k = 0; k <= kmax; ++k) {
        const ModeAnalysis m = mode_boundary_value(k, Lambda, p);
        per_k.push_back({{"k", k},
                         {"delta", m.delta},
                         {"s_boundary", m.s_boundary},
                         {"f1_boundary", m.f1_boundary},
                         {"degenerate", m.degenerate}});
    }
    json degeneracies = json::array();
    for (int k = 0; k < p.beta; ++k)
        degeneracies.push_back({{"k", k},
                                {"lambda", degeneracy_lambda(k, p)},
                                {"Lambda", mode_degeneracy_Lambda(k, p)}});
    json j;
    j["schema_version"] = kSchemaVersion;
    j["alpha"] = p.alpha;
    j["Lambda"] = Lambda;
    j["modes"] = per_k;
    j["degeneracies"] = degeneracies;
    return j;
}

std::string modes_csv(const DiskParams& p, int kmax, double Lambda) {
    std::string out = "k,delta,s_boundary,f1_boundary,degenerate\n";
    for (int k = 0; k <= kmax; ++k) {
        const ModeAnalysis m = mode_boundary_value(k, Lambda, p);
        out += std::to_string(k) + ',';
        out += format_double(m.delta);
        out += ',';
        out += format_double(m.s_boundary);
        out += ',';
        out += format_double(m.f1_boundary);
        out += ',';
        out += m.degenerate ? "1" : "0";
        out += '\n';
    }
    return out;
}

Field2D initial_field(const DiskParams& p, std::shared_ptr<const PolarGrid> g,
                      const std::string& kind) {
    if (kind == "zero") return zero_field(p, g);
    const std::vector<double> roots = solve_Lambda(p);
    if (roots.empty()) throw DomainError("no radial solution at this lambda");
    const double L = (kind == "radial-singular") ? roots.back() : roots.front();
    const RadialSolution sol = radial_solution(L, p);
    return radial_field(p, g, [&](double r) { return sol.u(r); });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical toolkit for the singular Liouville equation on the unit disk"};
    app.require_subcommand(1);

    double alpha = 1.0, lambda = 1.0, theta0 = 0.0, t_par = 0.0, s_par = 0.0;
    double lambda_min = 0.5, lambda_max_flag = 7.5, lambda_from = 5.8, lambda_to = 0.5;
    double Lambda_flag = -1.0, seed_eps = 1e-2, r0 = 0.5;
    int m = 1, restarts = 200, steps = 16, nr = 64, nt = 64, sector = 1, pdeg = 3, kmax = -1;
    std::uint64_t seed = 0;
    std::string format = "json", output, field_out, init_kind = "zero", branch = "one-peak";

    auto* c_count = app.add_subcommand("count", "Number of solution classes, ceil(alpha)+2");
    c_count->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_count->add_option("--output", output);

    auto* c_crit = app.add_subcommand("critical", "Multistart census of Phi_m critical points");
    c_crit->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_crit->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_crit->add_option("--restarts", restarts)->check(CLI::PositiveNumber);
    c_crit->add_option("--seed", seed);
    c_crit->add_option("--output", output);

    auto* c_hess = app.add_subcommand("hessian", "Block-circulant Hessian spectra at the polygon");
    c_hess->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_hess->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_hess->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    c_hess->add_option("--output", output);

    auto* c_poly = app.add_subcommand("poly-check", "P/Q identity at the polygon critical point");
    c_poly->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_poly->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_poly->add_option("--theta0", theta0);
    c_poly->add_option("--output", output);

    auto* c_lim = app.add_subcommand("limit-poly", "Limit-system polynomial families");
    c_lim->add_option("--p", pdeg)->required()->check(CLI::IsMember({3, 4}));
    c_lim->add_option("--t", t_par);
    c_lim->add_option("--s", s_par);
    c_lim->add_option("--output", output);

    auto* c_rad = app.add_subcommand("radial", "The two radial solutions at a coupling");
    c_rad->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_rad->add_option("--lambda", lambda)->required()->check(CLI::PositiveNumber);
    c_rad->add_option("--output", output);

    auto* c_bif = app.add_subcommand("bifurcate", "Radial branch table over a lambda grid");
    c_bif->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_bif->add_option("--lambda-min", lambda_min)->required()->check(CLI::PositiveNumber);
    c_bif->add_option("--lambda-max", lambda_max_flag)->required()->check(CLI::PositiveNumber);
    c_bif->add_option("--steps", steps)->check(CLI::PositiveNumber);
    c_bif->add_option("--output", output);

    auto* c_mod = app.add_subcommand("modes", "Fourier-mode degeneracy analysis");
    c_mod->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_mod->add_option("--lambda", lambda)->check(CLI::PositiveNumber);
    c_mod->add_option("--Lambda", Lambda_flag);
    c_mod->add_option("--kmax", kmax);
    c_mod->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    c_mod->add_option("--output", output);

    auto* c_solve = app.add_subcommand("pde2d-solve", "Newton solve on the polar grid");
    c_solve->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_solve->add_option("--lambda", lambda)->required()->check(CLI::PositiveNumber);
    c_solve->add_option("--nr", nr)->check(CLI::PositiveNumber);
    c_solve->add_option("--nt", nt)->check(CLI::PositiveNumber);
    c_solve->add_option("--sector", sector)->check(CLI::PositiveNumber);
    c_solve->add_option("--init", init_kind)
        ->check(CLI::IsMember({"zero", "radial-minimal", "radial-singular"}));
    c_solve->add_option("--field-out", field_out);
    c_solve->add_option("--output", output);

    auto* c_cont = app.add_subcommand("pde2d-continue", "Branch continuation in lambda");
    c_cont->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_cont->add_option("--lambda-from", lambda_from)->required()->check(CLI::PositiveNumber);
    c_cont->add_option("--lambda-to", lambda_to)->required()->check(CLI::PositiveNumber);
    c_cont->add_option("--steps", steps)->check(CLI::PositiveNumber);
    c_cont->add_option("--nr", nr)->check(CLI::PositiveNumber);
    c_cont->add_option("--nt", nt)->check(CLI::PositiveNumber);
    c_cont->add_option("--branch", branch)
        ->check(CLI::IsMember({"one-peak", "minimal", "singular"}));
    c_cont->add_option("--seed-eps", seed_eps)->check(CLI::PositiveNumber);
    c_cont->add_option("--output", output);

    auto* c_pow = app.add_subcommand("power-check", "Power-map residual on a radial field");
    c_pow->add_option("--alpha", alpha)->required()->check(CLI::PositiveNumber);
    c_pow->add_option("--lambda", lambda)->required()->check(CLI::PositiveNumber);
    c_pow->add_option("--m", m)->required()->check(CLI::PositiveNumber);
    c_pow->add_option("--nr", nr)->check(CLI::PositiveNumber);
    c_pow->add_option("--nt", nt)->check(CLI::PositiveNumber);
    c_pow->add_option("--branch", branch)->check(CLI::IsMember({"minimal", "singular"}));
    c_pow->add_option("--output", output);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        emit_error("UsageError", e.what());
        return 1;
    }

    try {
        if (c_count->parsed()) {
            write_out(emit_canonical(run_count(DiskParams(alpha))), output);
        } else if (c_crit->parsed()) {
            write_out(emit_canonical(run_critical(DiskParams(alpha), m, restarts, seed)), output);
        } else if (c_hess->parsed()) {
            if (format == "csv")
                write_out(hessian_csv(DiskParams(alpha), m), output);
            else
                write_out(emit_canonical(hessian_json(DiskParams(alpha), m)), output);
        } else if (c_poly->parsed()) {
            write_out(emit_canonical(run_poly_check(DiskParams(alpha), m, theta0)), output);
        } else if (c_lim->parsed()) {
            write_out(emit_canonical(run_limit_poly(pdeg, t_par, s_par)), output);
        } else if (c_rad->parsed()) {
            write_out(emit_canonical(run_radial(DiskParams(alpha, lambda))), output);
        } else if (c_bif->parsed()) {
            if (!(lambda_min <= lambda_max_flag))
                throw DomainError("--lambda-min must not exceed --lambda-max");
            write_out(run_bifurcate(DiskParams(alpha), lambda_min, lambda_max_flag, steps),
                      output);
        } else if (c_mod->parsed()) {
            const DiskParams p(alpha);
            double L = Lambda_flag;
            if (L <= 0.0) {
                const DiskParams q(alpha, lambda);
                const std::vector<double> roots = solve_Lambda(q);
                if (roots.empty()) throw DomainError("no radial branch at this lambda");
                L = roots.back();
            }
            const int kk = kmax >= 0 ? kmax : (int)std::ceil(p.beta);
            if (format == "csv")
                write_out(modes_csv(p, kk, L), output);
            else
                write_out(emit_canonical(run_modes(p, kk, L)), output);
        } else if (c_solve->parsed()) {
            const DiskParams p(alpha, lambda);
            auto g = std::make_shared<PolarGrid>(make_polar_grid(nr, nt, sector));
            const Field2D f = newton_solve(p, g, initial_field(p, g, init_kind));
            if (!field_out.empty()) write_out(field_to_csv(f), field_out);
            json j = to_json(peak_report(f));
            j["schema_version"] = kSchemaVersion;
            j["alpha"] = alpha;
            j["lambda"] = lambda;
            write_out(emit_canonical(j), output);
        } else if (c_cont->parsed()) {
            const DiskParams p(alpha, lambda_from);
            Field2D start;
            if (branch == "one-peak") {
                auto g = std::make_shared<PolarGrid>(
                    make_polar_grid(nr, nt, 1, polygon_radius(p, PeakCount(1))));
                start = enter_one_peak_branch(p, g, seed_eps);
            } else {
                auto g = std::make_shared<PolarGrid>(make_polar_grid(nr, nt, 1));
                start = newton_solve(
                    p, g,
                    initial_field(p, g,
                                  branch == "minimal" ? "radial-minimal" : "radial-singular"));
            }
            const ContinuationRun run =
                continue_in_lambda(p, lambda_from, lambda_to, steps, start);
            std::string out = "lambda,peak_r,peak_theta,height,mass,residual_norm,npeaks\n";
            for (const ContinuationPoint& cp : run.points) {
                double rpk = 0.0, th = 0.0, h = -1e300;
                for (const Peak& pk : cp.peaks.peaks)
                    if (pk.height > h) {
                        h = pk.height;
                        rpk = pk.r;
                        th = pk.theta;
                    }
                out += format_double(cp.lambda);
                out += ',';
                out += csv_row({rpk, th, h, cp.peaks.mass, cp.peaks.residual_norm});
                out.insert(out.size() - 1, "," + std::to_string(cp.peaks.peaks.size()));
            }
            if (!run.completed) {
                emit_error("BranchLost", run.message);
                write_out(out, output);
                return 1;
            }
            write_out(out, output);
        } else if (c_pow->parsed()) {
            const DiskParams p(alpha, lambda);
            auto g = std::make_shared<PolarGrid>(make_polar_grid(nr, nt, 1));
            const Field2D f = newton_solve(
                p, g,
                initial_field(p, g, branch == "singular" ? "radial-singular" : "radial-minimal"));
            json j;
            j["schema_version"] = kSchemaVersion;
            j["alpha"] = alpha;
            j["lambda"] = lambda;
            j["m"] = m;
            j["residual"] = power_map_check(f, m);
            j["solver_residual"] = discrete_residual_norm(f);
            write_out(emit_canonical(j), output);
        }
    } catch (const Error& e) {
        emit_error(e.code(), e.what());
        return is_domain_error(e) ? 1 : 2;
    } catch (const std::exception& e) {
        emit_error("InternalError", e.what());
        return 2;
    }
    return 0;
}
