#pragma once

#include "liouville/params.hpp"

namespace liouville {

/// Dense complex polynomial, coefficients in ascending degree, exact trailing
/// zeros trimmed. The zero polynomial has an empty coefficient list.
struct ComplexPoly {
    std::vector<Complex> coeffs;

    ComplexPoly() = default;
    explicit ComplexPoly(std::vector<Complex> c) : coeffs(std::move(c)) { trim(); }

    void trim();
    bool is_zero() const { return coeffs.empty(); }
    int degree() const { return static_cast<int>(coeffs.size()) - 1; }
    Complex leading() const { return coeffs.empty() ? Complex(0) : coeffs.back(); }

    Complex evaluate(Complex z) const;
    ComplexPoly derivative() const;
    ComplexPoly shifted_up() const; // multiply by z

    static ComplexPoly from_roots(const std::vector<Complex>& roots);
};

ComplexPoly multiply(const ComplexPoly& a, const ComplexPoly& b);
ComplexPoly add(const ComplexPoly& a, const ComplexPoly& b);
ComplexPoly scale(const ComplexPoly& a, Complex s);

struct IdentityResidual {
    std::vector<Complex> coeffs;
    double max_abs = 0.0;
    double normalization = 1.0;

    double relative() const { return max_abs / normalization; }
};

/// P(z) = prod (z - z_j), Q(z) = prod (z - 1/conj(z_j)).
std::pair<ComplexPoly, ComplexPoly> build_PQ(const VortexConfig& c);

/// Residual of 2 z P'Q' + (a P' - z P'')Q - ((a+2)Q' + z Q'')P, normalized by
/// the largest intermediate coefficient magnitude.
IdentityResidual pq_identity_residual(const ComplexPoly& P, const ComplexPoly& Q,
                                      const DiskParams& p);

/// Reflection w -> -conj(w) on the coefficients: c_j -> (-1)^(p-j) conj(c_j).
ComplexPoly reflect_coefficients(const ComplexPoly& P);

/// Residual of (P'' - P')Q + (Q'' + Q')P - 2 P'Q' with Q built from P by
/// reflection. P must be monic.
IdentityResidual limit_identity_residual(const ComplexPoly& Pcal);

/// The explicit limit-system families:
///   p=3: (z + 1 + t i)^3 - 4 + s i, p=4: (z + 2 + t i)^3 (z - 2 + t i).
ComplexPoly limit_family(int p, double t, double s = 0.0);

std::vector<Complex> roots(const ComplexPoly& P);

struct RootStructure {
    double sum_re = 0.0;
    double max_re = 0.0;
    std::vector<Complex> roots;
};

RootStructure root_structure_report(const ComplexPoly& Pcal);

/// min over roots of | |root| - 1 |.
double unit_circle_clearance(const ComplexPoly& P);

} // namespace liouville
