#pragma once

// Expansions of the curve and of the Abel map at the point at infinity.

#include "trigonal/curve.hpp"
#include "trigonal/series.hpp"

namespace trigonal {

/// Table with one series variable `param` (weight 1) followed by l3, l6, l9, l12.
VarTablePtr jet_table(std::string_view param = "t");

struct CurveJet {
  VarTablePtr vars;  // jet_table("t")
  Series x, y;       // x = -t^-3 exactly, y of order -4
  Series u1, u2, u3;  // u3 = t + O(t^4)
  int cutoff = 0;    // precision of the unit factor of y
  int branch = 0;

  const Series& u(int i) const { return i == 1 ? u1 : i == 2 ? u2 : u3; }
};

/// x(t), y(t) with x = -t^-3 and y = t^-4 (1 - l3 t^3 + l6 t^6 - l9 t^9 + l12 t^12)^(1/3),
/// y known to O(t^(cutoff-4)).
std::pair<Series, Series> branch_expansion(const TrigonalCurve& c, int cutoff);

/// Integrates the holomorphic forms along the branch. The literal parameter
/// t = x^(-1/3) produces u3 = -t + ...; the jet is re-oriented so that u3 = t + O(t^4).
CurveJet abel_jet(const TrigonalCurve& c, int cutoff);

/// x and y as series in u3 (table jet_table("u3")).
std::pair<Series, Series> xy_on_curve(const CurveJet& jet);

/// The closed form at lambda = 0: (t^5/5, -t^2/2, t), x = -t^-3, y = t^-4.
CurveJet origin_jet(const VarTablePtr& vars);

}  // namespace trigonal
