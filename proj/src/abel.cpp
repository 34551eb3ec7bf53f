#include <cmath>
#include <numbers>
#include <stdexcept>

#include "trigonal/numerics.hpp"
#include "quadrature.hpp"

namespace trigonal {

namespace {

const cplx kZeta(-0.5, std::sqrt(3.0) / 2);

cplx cbrt_p(cplx z) { return z == cplx(0) ? cplx(0) : std::pow(z, 1.0 / 3.0); }

cplx g_at(const std::vector<cplx>& roots, cplx x) {
  cplx r = 1;
  for (auto e : roots) r *= x - e;
  return r;
}

double nearest_branch(const std::vector<cplx>& roots, cplx x) {
  double d = 1e300;
  for (auto e : roots) d = std::min(d, std::abs(x - e));
  return d;
}

double segment_clearance(const std::vector<cplx>& roots, cplx a, cplx b) {
  cplx d = b - a;
  double best = 1e300;
  for (auto e : roots) {
    double s = std::clamp(std::real((e - a) * std::conj(d)) / std::norm(d), 0.0, 1.0);
    best = std::min(best, std::abs(e - (a + d * s)));
  }
  return best;
}

const auto& gl16() {
  static const auto rule = detail::gauss_legendre(16);
  return rule;
}

}  // namespace

AbelMap::AbelMap(const TrigonalCurve& c, int jet_cutoff) : curve_(c) {
  branch_ = branch_points(c);
  jet_ = abel_jet(c, jet_cutoff);
  const auto& vars = *jet_.vars;
  lambda_values_.assign(vars.size(), 0);
  for (std::size_t i = 1; i < vars.size(); ++i) {
    lambda_values_[i] = to_double(c.lambda(std::stoi(vars[i].name.substr(1))));
  }
}

CVector3 AbelMap::operator()(cplx x, cplx y) const {
  double scale = 1;
  for (auto e : branch_) scale = std::max(scale, std::abs(e));
  const double R = 40 * scale;
  double dx = nearest_branch(branch_, x);
  double need = std::min(0.1 * scale, 0.5 * dx);
  // Straight path from x out to |x| = R, in a direction that clears the branch points.
  cplx xb;
  bool found = false;
  double phi0 = std::abs(x) > 1e-3 ? std::arg(x) : 0.3;
  for (int k = 0; k < 64 && !found; ++k) {
    double phi = phi0 + (k % 2 ? 1 : -1) * 0.1 * ((k + 1) / 2);
    xb = std::polar(R, phi);
    found = segment_clearance(branch_, x, xb) >= need;
  }
  if (!found) throw std::runtime_error("no clear integration path to the point");

  // Pieces short relative to the distance to the branch points keep the principal
  // cube root of g(b)/g(a) on the continuous branch.
  std::vector<cplx> knots{x};
  while (true) {
    cplx cur = knots.back();
    double h = 0.25 * nearest_branch(branch_, cur);
    if (std::abs(xb - cur) <= h) break;
    knots.push_back(cur + (xb - cur) / std::abs(xb - cur) * h);
  }
  knots.push_back(xb);

  CVector3 u = CVector3::Zero();
  cplx ycur = y;
  cplx gcur = g_at(branch_, x);
  for (std::size_t k = 0; k + 1 < knots.size(); ++k) {
    cplx a = knots[k], b = knots[k + 1];
    for (int i = 0; i < 16; ++i) {
      cplx xi = a + (b - a) * gl16().first[i];
      cplx yi = ycur * cbrt_p(g_at(branch_, xi) / gcur);
      cplx w = (b - a) * gl16().second[i] / (3.0 * yi * yi);
      u(0) += w;
      u(1) += w * xi;
      u(2) += w * yi;
    }
    cplx gnext = g_at(branch_, b);
    ycur *= cbrt_p(gnext / gcur);
    gcur = gnext;
  }
  // u(P) = u(base) - integral from P to base
  cplx t0 = cbrt_p(-1.0 / xb);
  int best = -1;
  double err = 1e300;
  std::vector<cplx> vals = lambda_values_;
  for (int k = 0; k < 3; ++k) {
    vals[0] = t0 * std::pow(kZeta, k);
    double e = std::abs(jet_.y.evaluate(vals) - ycur) / std::abs(ycur);
    if (e < err) {
      err = e;
      best = k;
    }
  }
  if (err > 1e-8) throw std::runtime_error("jet at the base point does not match the continued sheet");
  vals[0] = t0 * std::pow(kZeta, best);
  CVector3 base(jet_.u1.evaluate(vals), jet_.u2.evaluate(vals), jet_.u3.evaluate(vals));
  return base - u;
}

CurvePoint AbelMap::random_point(std::mt19937_64& rng, double radius) const {
  std::uniform_real_distribution<double> unif(-1, 1);
  std::uniform_int_distribution<int> sheet(0, 2);
  for (int tries = 0; tries < 1000; ++tries) {
    cplx x(radius * unif(rng), radius * unif(rng));
    if (std::abs(x) > radius || nearest_branch(branch_, x) < 0.25) continue;
    cplx y = cbrt_p(g_at(branch_, x)) * std::pow(kZeta, sheet(rng));
    return point(x, y);
  }
  throw std::runtime_error("could not sample a curve point");
}

}  // namespace trigonal
