#include "liouville/poly.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "liouville/hamiltonian.hpp"

namespace liouville {

void ComplexPoly::trim() {
    while (!coeffs.empty() && coeffs.back() == Complex(0.0, 0.0)) coeffs.pop_back();
}

Complex ComplexPoly::evaluate(Complex z) const {
    Complex v(0.0);
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
    return v;
}

ComplexPoly ComplexPoly::derivative() const {
    if (coeffs.size() <= 1) return ComplexPoly();
    std::vector<Complex> d(coeffs.size() - 1);
    for (size_t i = 1; i < coeffs.size(); ++i) d[i - 1] = coeffs[i] * double(i);
    return ComplexPoly(std::move(d));
}

ComplexPoly ComplexPoly::shifted_up() const {
    if (is_zero()) return ComplexPoly();
    std::vector<Complex> c(coeffs.size() + 1, Complex(0.0));
    std::copy(coeffs.begin(), coeffs.end(), c.begin() + 1);
    return ComplexPoly(std::move(c));
}

ComplexPoly ComplexPoly::from_roots(const std::vector<Complex>& roots) {
    ComplexPoly p(std::vector<Complex>{Complex(1.0)});
    for (const Complex& r : roots)
        p = multiply(p, ComplexPoly(std::vector<Complex>{-r, Complex(1.0)}));
    return p;
}

ComplexPoly multiply(const ComplexPoly& a, const ComplexPoly& b) {
    if (a.is_zero() || b.is_zero()) return ComplexPoly();
    std::vector<Complex> out(a.coeffs.size() + b.coeffs.size() - 1, Complex(0.0));
    for (size_t i = 0; i < a.coeffs.size(); ++i)
        for (size_t j = 0; j < b.coeffs.size(); ++j)
            out[i + j] += a.coeffs[i] * b.coeffs[j];
    return ComplexPoly(std::move(out));
}

ComplexPoly add(const ComplexPoly& a, const ComplexPoly& b) {
    std::vector<Complex> out(std::max(a.coeffs.size(), b.coeffs.size()), Complex(0.0));
    for (size_t i = 0; i < a.coeffs.size(); ++i) out[i] += a.coeffs[i];
    for (size_t i = 0; i < b.coeffs.size(); ++i) out[i] += b.coeffs[i];
    return ComplexPoly(std::move(out));
}

ComplexPoly scale(const ComplexPoly& a, Complex s) {
    std::vector<Complex> out = a.coeffs;
    for (Complex& c : out) c *= s;
    return ComplexPoly(std::move(out));
}

namespace {

double max_abs_coeff(const ComplexPoly& p) {
    double m = 0.0;
    for (const Complex& c : p.coeffs) m = std::max(m, std::abs(c));
    return m;
}

// Residual of a sum of already-assembled terms; normalization is the largest
// intermediate coefficient magnitude so thresholds are scale-free.
IdentityResidual combine_terms(const std::vector<ComplexPoly>& terms) {
    ComplexPoly sum;
    double norm = 0.0;
    for (const ComplexPoly& t : terms) {
        sum = add(sum, t);
        norm = std::max(norm, max_abs_coeff(t));
    }
    IdentityResidual out;
    out.coeffs = sum.coeffs;
    out.max_abs = max_abs_coeff(sum);
    out.normalization = std::max(norm, 1e-300);
    return out;
}

} // namespace

std::pair<ComplexPoly, ComplexPoly> build_PQ(const VortexConfig& c) {
    validate_config(c);
    std::vector<Complex> refl(c.points.size());
    for (size_t j = 0; j < c.points.size(); ++j) refl[j] = 1.0 / std::conj(c.points[j]);
    return {ComplexPoly::from_roots(c.points), ComplexPoly::from_roots(refl)};
}

IdentityResidual pq_identity_residual(const ComplexPoly& P, const ComplexPoly& Q,
                                      const DiskParams& p) {
    if (P.degree() != Q.degree())
        throw DegreeMismatch("P and Q must have equal degree");
    const ComplexPoly Pd = P.derivative(), Qd = Q.derivative();
    const ComplexPoly Pdd = Pd.derivative(), Qdd = Qd.derivative();

    const ComplexPoly t1 = scale(multiply(Pd, Qd).shifted_up(), 2.0);
    const ComplexPoly t2 =
        multiply(add(scale(Pd, p.alpha), scale(Pdd.shifted_up(), -1.0)), Q);
    const ComplexPoly t3 =
        scale(multiply(add(scale(Qd, p.alpha + 2.0), Qdd.shifted_up()), P), -1.0);
    return combine_terms({t1, t2, t3});
}

ComplexPoly reflect_coefficients(const ComplexPoly& P) {
    const int p = P.degree();
    std::vector<Complex> q(P.coeffs.size());
    for (int j = 0; j <= p; ++j) {
        const Complex cj = std::conj(P.coeffs[j]);
        q[j] = ((p - j) % 2 == 0) ? cj : -cj;
    }
    return ComplexPoly(std::move(q));
}

IdentityResidual limit_identity_residual(const ComplexPoly& Pcal) {
    if (Pcal.is_zero() || std::abs(Pcal.leading() - Complex(1.0)) > 1e-12)
        throw NonMonic("limit identity requires a monic polynomial");
    const ComplexPoly Q = reflect_coefficients(Pcal);
    const ComplexPoly Pd = Pcal.derivative(), Qd = Q.derivative();
    const ComplexPoly Pdd = Pd.derivative(), Qdd = Qd.derivative();

    const ComplexPoly t1 = multiply(add(Pdd, scale(Pd, -1.0)), Q);
    const ComplexPoly t2 = multiply(add(Qdd, Qd), Pcal);
    const ComplexPoly t3 = scale(multiply(Pd, Qd), -2.0);
    return combine_terms({t1, t2, t3});
}

ComplexPoly limit_family(int p, double t, double s) {
    if (p == 3) {
        ComplexPoly base =
            ComplexPoly::from_roots({Complex(-1.0, -t), Complex(-1.0, -t), Complex(-1.0, -t)});
        base.coeffs[0] += Complex(-4.0, s);
        return base;
    }
    if (p == 4) {
        const Complex a(-2.0, -t), b(2.0, -t);
        return ComplexPoly::from_roots({a, a, a, b});
    }
    throw DomainError("limit_family implemented for p in {3, 4}");
}

namespace {

std::vector<Complex> companion_roots(const std::vector<Complex>& monic) {
    const int n = static_cast<int>(monic.size()) - 1;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) C(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) C(i, n - 1) = -monic[i];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C);
    std::vector<Complex> out(n);
    for (int i = 0; i < n; ++i) out[i] = es.eigenvalues()[i];
    return out;
}

double backward_scale(const ComplexPoly& P, Complex z) {
    double s = 0.0, zp = 1.0;
    const double az = std::abs(z);
    for (const Complex& c : P.coeffs) {
        s += std::abs(c) * zp;
        zp *= az;
    }
    return std::max(s, 1e-300);
}

} // namespace

std::vector<Complex> roots(const ComplexPoly& P) {
    if (P.degree() < 1) throw RootFindingFailure("degree < 1");
    const int n = P.degree();
    std::vector<Complex> monic(P.coeffs.size());
    for (size_t i = 0; i < P.coeffs.size(); ++i) monic[i] = P.coeffs[i] / P.leading();
    ComplexPoly Pm{std::vector<Complex>(monic)};
    const ComplexPoly Pd = Pm.derivative();

    // Aberth-Ehrlich from a perturbed circle of radius given by a Cauchy bound.
    double R = 0.0;
    for (int i = 0; i < n; ++i) R = std::max(R, std::abs(monic[i]));
    R = 1.0 + R;
    std::vector<Complex> z(n);
    for (int i = 0; i < n; ++i)
        z[i] = std::polar(R, 2.0 * M_PI * i / n + 0.4);

    bool converged = false;
    for (int it = 0; it < 300 && !converged; ++it) {
        converged = true;
        for (int i = 0; i < n; ++i) {
            const Complex pv = Pm.evaluate(z[i]);
            if (std::abs(pv) <= 1e-15 * backward_scale(Pm, z[i])) continue;
            const Complex pd = Pd.evaluate(z[i]);
            Complex ratio = (pd != Complex(0.0)) ? pv / pd : Complex(1e-3);
            Complex sum(0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            const Complex denom = 1.0 - ratio * sum;
            const Complex step = (denom != Complex(0.0)) ? ratio / denom : ratio;
            z[i] -= step;
            if (std::abs(step) > 1e-14 * std::max(1.0, std::abs(z[i]))) converged = false;
        }
    }

    auto residual_ok = [&](const std::vector<Complex>& cand) {
        for (const Complex& r : cand)
            if (std::abs(Pm.evaluate(r)) > 1e-8 * backward_scale(Pm, r)) return false;
        return true;
    };
    if (!residual_ok(z)) {
        z = companion_roots(monic);
        if (!residual_ok(z))
            throw RootFindingFailure("root residual exceeds 1e-8 * scale");
    }

    // A cluster of s roots scatters ~eps^(1/s) without structure, which
    // ruins root sums. The cluster center is a simple root of P^(s-1);
    // polish it there and collapse the cluster onto it.
    std::vector<char> done(n, 0);
    for (int i = 0; i < n; ++i) {
        if (done[i]) continue;
        std::vector<int> cluster{i};
        for (int j = i + 1; j < n; ++j)
            if (!done[j] && std::abs(z[i] - z[j]) < 1e-3 * (1.0 + std::abs(z[i])))
                cluster.push_back(j);
        if (cluster.size() < 2) continue;
        const int s = static_cast<int>(cluster.size());
        ComplexPoly d = Pm;
        for (int k = 0; k + 1 < s; ++k) d = d.derivative();
        const ComplexPoly dd = d.derivative();
        Complex c(0.0);
        for (int idx : cluster) c += z[idx];
        c /= double(s);
        for (int it = 0; it < 60; ++it) {
            const Complex num = d.evaluate(c);
            const Complex den = dd.evaluate(c);
            if (den == Complex(0.0)) break;
            const Complex step = num / den;
            c -= step;
            if (std::abs(step) < 1e-16 * (1.0 + std::abs(c))) break;
        }
        if (std::abs(Pm.evaluate(c)) <= 1e-8 * backward_scale(Pm, c))
            for (int idx : cluster) z[idx] = c;
        for (int idx : cluster) done[idx] = 1;
    }
    return z;
}

RootStructure root_structure_report(const ComplexPoly& Pcal) {
    if (Pcal.is_zero() || std::abs(Pcal.leading() - Complex(1.0)) > 1e-12)
        throw NonMonic("root report requires a monic polynomial");
    RootStructure out;
    out.roots = roots(Pcal);
    out.max_re = -std::numeric_limits<double>::infinity();
    for (const Complex& r : out.roots) {
        out.sum_re += r.real();
        out.max_re = std::max(out.max_re, r.real());
    }
    return out;
}

double unit_circle_clearance(const ComplexPoly& P) {
    double best = std::numeric_limits<double>::infinity();
    for (const Complex& r : roots(P))
        best = std::min(best, std::abs(std::abs(r) - 1.0));
    return best;
}

} // namespace liouville
