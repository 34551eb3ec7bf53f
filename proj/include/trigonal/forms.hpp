#pragma once

// Holomorphic differentials, the kernel Omega and the fundamental 2-form R
// with its second-kind differentials eta_j = h_j(x, y) dx / 3y^2.

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "trigonal/curve.hpp"
#include "trigonal/jet.hpp"
#include "trigonal/series.hpp"

namespace trigonal {

/// x, y, z, w (weights -3, -4, -3, -4) and l3..l12; every variable is exact.
VarTablePtr pair_table();

/// numerator(x, y) dx / (3 y^2)
struct DifferentialForm {
  Series numerator;
  std::string name;
};

std::array<DifferentialForm, 3> omega_basis(const TrigonalCurve& c);

/// (numerator, denominator) of Omega((x,y),(z,w)) over pair_table().
struct RationalExpression {
  Series numerator;
  Series denominator;
};

/// The trigonal kernel (y^2 + y w + w^2) / ((x - z) 3 y^2).
RationalExpression build_Omega(const TrigonalCurve& c);

/// Omega of the general nine-parameter model, assembled from the truncations
/// [f(z,w) / w^(4-k)]_w of non-negative powers in w. Requires numeric
/// values for the non-trigonal lambdas; the trigonal ones may be symbolic.
RationalExpression build_Omega_general(const TrigonalCurve& c);

/// Replaces y^3 by g(x) and w^3 by g(z) until both exponents are below 3.
Series reduce_mod_curve(const Series& p, const TrigonalCurve& c);

/// Exchanges (x, y) with (z, w).
Series swap_points(const Series& p);

struct KleinKernel {
  Series F;                   // over pair_table()
  std::array<Series, 3> h;    // numerators of eta_j, polynomials in (z, w)
  std::array<Series, 3> h_xy;  // same polynomials written in (x, y)
  std::size_t unknowns = 0;    // ansatz size
  std::size_t freedom = 0;     // dimension of the symmetric solution family
  long weight = 0;             // Sato weight of F
};

/// Solves for h_1, h_2, h_3 making
///   F = (y + 2w)(x - z) g'(z) + 3 w^2 (y^2 + y w + w^2) + (x - z)^2 (h1 + x h2 + y h3)
/// symmetric modulo the curve, picking the member of the solution family with
/// the fewest nonzero ansatz coefficients. R = F / ((x - z)^2 3y^2 3w^2).
KleinKernel solve_eta(const TrigonalCurve& c);

/// Evaluates a pair_table() polynomial at complex points of the curve.
std::complex<double> evaluate_pair(const Series& p, const TrigonalCurve& c, std::complex<double> x,
                                   std::complex<double> y, std::complex<double> z = 0,
                                   std::complex<double> w = 0);

/// Substitutes x = x(t), y = y(t) (and z, w from a second jet in s) into a
/// pair_table() polynomial; the target table carries t, s and the lambdas.
Series restrict_pair(const Series& p, const VarTablePtr& target, const Series& x, const Series& y,
                     const Series& z, const Series& w);

}  // namespace trigonal
