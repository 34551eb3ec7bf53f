#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "trigonal/forms.hpp"
#include "trigonal/numerics.hpp"
#include "quadrature.hpp"

namespace trigonal {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI(0, 1);
const cplx kZeta(-0.5, std::sqrt(3.0) / 2);

cplx zeta_pow(int k) {
  k = ((k % 3) + 3) % 3;
  return k == 0 ? cplx(1) : k == 1 ? kZeta : std::conj(kZeta);
}

cplx cbrt_p(cplx z) { return z == cplx(0) ? cplx(0) : std::pow(z, 1.0 / 3.0); }

std::vector<cplx> g_complex(const TrigonalCurve& c) {
  std::vector<cplx> g;
  for (const auto& q : c.g_coefficients()) g.emplace_back(to_double(q), 0);
  return g;
}

cplx horner(const std::vector<cplx>& a, cplx x) {
  cplx r = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) r = r * x + *it;
  return r;
}

/// A straight segment between two branch points with a continuous cube root of g along it.
struct Segment {
  cplx a, b;  // hub and far end
  std::vector<cplx> others;
  cplx m;

  // y0 = cbrt(b - a) s^(1/3) * cbrt(a - b) (1 - s)^(1/3) * prod cbrt(m - e) cbrt((x - e) / (m - e))
  cplx y0(double s, double s13, double om13) const {
    cplx x = a + (b - a) * s;
    cplx r = cbrt_p(b - a) * s13 * cbrt_p(a - b) * om13;
    for (const auto& e : others) r *= cbrt_p(m - e) * cbrt_p((x - e) / (m - e));
    return r;
  }
  cplx at(double s) const { return a + (b - a) * s; }
  /// lim y0 / s^(1/3) at the hub and lim y0 / (1 - s)^(1/3) at the far end.
  cplx hub_unit() const { return y0(0, 1, 1); }
  cplx end_unit() const { return y0(1, 1, 1); }
};

/// x^p y^(c-2) / 3 pieces of a form numerator(x, y) dx / 3y^2.
struct FormTerm {
  cplx coef;
  int p = 0;
  int c = 0;
};
using Form = std::vector<FormTerm>;

Form form_from_series(const Series& num) {
  const auto& vars = *num.vars();
  std::size_t ix = vars.index_of("x"), iy = vars.index_of("y");
  Form f;
  for (const auto& [m, q] : num.terms()) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (i != ix && i != iy && m[i] != 0) throw std::invalid_argument("form numerator must be numeric in x, y");
    }
    f.push_back({cplx(to_double(q), 0), m[ix], m[iy]});
  }
  return f;
}

struct SegmentIntegrals {
  // I[b][p] = integral over the segment of x^p y0^(-b) dx, b = 0, 1, 2
  std::array<std::vector<cplx>, 3> I;
};

SegmentIntegrals integrate_segment(const Segment& seg, int max_p, int nodes) {
  auto [v, w] = detail::gauss_legendre(nodes);
  SegmentIntegrals out;
  for (auto& row : out.I) row.assign(max_p + 1, cplx(0));
  const double c2 = std::cbrt(0.5);
  for (int half = 0; half < 2; ++half) {
    for (int i = 0; i < nodes; ++i) {
      double vi = v[i];
      double t = 0.5 * vi * vi * vi;
      double s = half == 0 ? t : 1 - t;
      double jac = 1.5 * vi * vi;
      double s13 = half == 0 ? vi * c2 : std::cbrt(s);
      double om13 = half == 0 ? std::cbrt(1 - s) : vi * c2;
      cplx x = seg.at(s);
      cplx y = seg.y0(s, s13, om13);
      cplx dx = (seg.b - seg.a) * (jac * w[i]);
      cplx xp = 1;
      for (int p = 0; p <= max_p; ++p) {
        out.I[0][p] += xp * dx;
        out.I[1][p] += xp / y * dx;
        out.I[2][p] += xp / (y * y) * dx;
        xp *= x;
      }
    }
  }
  return out;
}

/// Integral of a form over the dumbbell: out on sheet k, back on sheet k + 1.
cplx dumbbell_period(const Form& f, const SegmentIntegrals& I, int k) {
  cplx r = 0;
  for (const auto& t : f) {
    int b = 2 - t.c;
    if (b < 0 || b > 2) throw std::invalid_argument("form numerator has y-degree above 2");
    cplx sheet = zeta_pow(-b * k) - zeta_pow(-b * (k + 1));
    r += t.coef / 3.0 * sheet * I.I[b][t.p];
  }
  return r;
}

struct Star {
  cplx hub;
  std::vector<Segment> segs;
  std::vector<cplx> roots;
};

double dist_to_segment(cplx p, cplx a, cplx b) {
  cplx d = b - a;
  double s = std::clamp(std::real((p - a) * std::conj(d)) / std::norm(d), 0.0, 1.0);
  return std::abs(p - (a + d * s));
}

Star build_star(const std::vector<cplx>& roots) {
  double scale = 0;
  for (auto& r : roots) scale = std::max(scale, std::abs(r));
  scale = std::max(scale, 1.0);
  int best = -1;
  double best_clear = -1;
  for (std::size_t h = 0; h < roots.size(); ++h) {
    double clear = 1e300;
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (j == h) continue;
      for (std::size_t k = 0; k < roots.size(); ++k) {
        if (k == h || k == j) continue;
        clear = std::min(clear, dist_to_segment(roots[k], roots[h], roots[j]));
      }
    }
    if (clear > best_clear) {
      best_clear = clear;
      best = static_cast<int>(h);
    }
  }
  if (best_clear < 1e-6 * scale) throw std::runtime_error("no star of segments clears the branch points");
  Star st;
  st.hub = roots[best];
  st.roots = roots;
  for (std::size_t j = 0; j < roots.size(); ++j) {
    if (static_cast<int>(j) == best) continue;
    Segment s;
    s.a = st.hub;
    s.b = roots[j];
    s.m = 0.5 * (s.a + s.b);
    for (std::size_t k = 0; k < roots.size(); ++k) {
      if (static_cast<int>(k) != best && k != j) s.others.push_back(roots[k]);
    }
    st.segs.push_back(s);
  }
  return st;
}

double wrap(double a) {
  a = std::fmod(a, 2 * kPi);
  return a < 0 ? a + 2 * kPi : a;
}

/// z-plane angle of the lift of a segment on `sheet`, in the chart z = y / cbrt(g'(e)) at e.
double ray_angle(cplx unit, cplx gprime_root, int sheet, cplx direction) {
  double approx = std::arg(zeta_pow(sheet) * unit / gprime_root);
  double base = std::arg(direction) / 3;
  double best = 0, err = 1e300;
  for (int r = 0; r < 3; ++r) {
    double cand = base + 2 * kPi * r / 3;
    double d = std::abs(std::remainder(cand - approx, 2 * kPi));
    if (d < err) {
      err = d;
      best = cand;
    }
  }
  if (err > 1e-3) throw std::runtime_error("inconsistent local sheet at a branch point");
  return wrap(best);
}

struct Passage {
  int point;  // 0 = hub, j + 1 = far end of segment j
  double in, out;
};

/// Sign of the crossing of Q (in c, out d) with P (in a, out b) at a common point.
int local_intersection(double a, double b, double c, double d) {
  auto ccw = [](double from, double to) { return wrap(to - from); };
  double span = ccw(a, b);
  auto right = [&](double t) { return ccw(a, t) > 0 && ccw(a, t) < span; };
  bool cr = right(c), dr = right(d);
  if (cr && !dr) return 1;
  if (!cr && dr) return -1;
  return 0;
}

struct StarCycles {
  Star star;
  std::vector<std::pair<int, int>> cycles;  // (segment, sheet)
  Eigen::MatrixXi K;
};

StarCycles star_cycles(const TrigonalCurve& c) {
  StarCycles sc;
  auto roots = branch_points(c);
  sc.star = build_star(roots);
  auto g = g_complex(c);
  std::vector<cplx> gd;
  for (std::size_t i = 1; i < g.size(); ++i) gd.push_back(g[i] * static_cast<double>(i));
  auto root_of_gp = [&](cplx e) { return cbrt_p(horner(gd, e)); };
  const int nseg = static_cast<int>(sc.star.segs.size());
  for (int j = 0; j < nseg; ++j) {
    for (int k = 0; k < 2; ++k) sc.cycles.emplace_back(j, k);
  }
  // Passages through branch points, with optional left offset eps for the perturbed copy.
  auto passages = [&](int j, int k, double eps) {
    const Segment& s = sc.star.segs[j];
    cplx ch = root_of_gp(s.a), ce = root_of_gp(s.b);
    std::vector<Passage> p;
    p.push_back({0, wrap(ray_angle(s.hub_unit(), ch, k + 1, s.b - s.a) - eps),
                 wrap(ray_angle(s.hub_unit(), ch, k, s.b - s.a) + eps)});
    p.push_back({j + 1, wrap(ray_angle(s.end_unit(), ce, k, s.a - s.b) - eps),
                 wrap(ray_angle(s.end_unit(), ce, k + 1, s.a - s.b) + eps)});
    return p;
  };
  const int n = static_cast<int>(sc.cycles.size());
  sc.K = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      auto P = passages(sc.cycles[i].first, sc.cycles[i].second, 0);
      auto Q = passages(sc.cycles[j].first, sc.cycles[j].second, 1e-4);
      int total = 0;
      for (const auto& pp : P) {
        for (const auto& qq : Q) {
          if (pp.point == qq.point) total += local_intersection(pp.in, pp.out, qq.in, qq.out);
        }
      }
      sc.K(i, j) = total;
    }
  }
  if (sc.K != Eigen::MatrixXi(-sc.K.transpose())) throw std::runtime_error("intersection matrix is not skew");
  return sc;
}

/// Rows of the result give alpha_1..3, beta_1..3 as integer combinations of the input cycles.
Eigen::MatrixXi symplectic_basis(const Eigen::MatrixXi& K) {
  const int n = static_cast<int>(K.rows());
  using Vec = Eigen::VectorXi;
  auto form = [&](const Vec& x, const Vec& y) { return static_cast<long>(x.dot(K * y)); };
  std::vector<Vec> rest;
  for (int i = 0; i < n; ++i) rest.push_back(Vec::Unit(n, i));
  std::vector<Vec> A, B;
  while (!rest.empty()) {
    int ia = -1, ib = -1;
    for (std::size_t i = 0; i < rest.size() && ia < 0; ++i) {
      for (std::size_t j = 0; j < rest.size(); ++j) {
        if (i != j && std::abs(form(rest[i], rest[j])) == 1) {
          ia = static_cast<int>(i);
          ib = static_cast<int>(j);
          break;
        }
      }
    }
    if (ia < 0) {
      // Combine two vectors to create a unit pairing.
      bool done = false;
      for (std::size_t i = 0; i < rest.size() && !done; ++i) {
        for (std::size_t j = 0; j < rest.size() && !done; ++j) {
          if (i == j) continue;
          for (std::size_t k = 0; k < rest.size() && !done; ++k) {
            if (k == i || k == j) continue;
            for (int sgn : {1, -1}) {
              Vec v = rest[i] + sgn * rest[k];
              if (std::abs(form(v, rest[j])) == 1) {
                rest[i] = v;
                done = true;
                break;
              }
            }
          }
        }
      }
      if (!done) throw std::runtime_error("homology reduction failed: the cycles do not span H1");
      continue;
    }
    Vec a = rest[ia], b = rest[ib];
    if (form(a, b) == -1) b = -b;
    std::vector<Vec> next;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      if (static_cast<int>(i) == ia || static_cast<int>(i) == ib) continue;
      Vec w = rest[i];
      long wa = form(w, a), wb = form(w, b);
      Vec r = w - static_cast<int>(wb) * a + static_cast<int>(wa) * b;
      if (!r.isZero()) next.push_back(r);
    }
    A.push_back(a);
    B.push_back(b);
    rest = next;
  }
  if (A.size() != 3) throw std::runtime_error("homology rank is not 6");
  Eigen::MatrixXi S(6, n);
  for (int i = 0; i < 3; ++i) {
    S.row(i) = A[i].transpose();
    S.row(3 + i) = B[i].transpose();
  }
  return S;
}

}  // namespace

std::vector<cplx> branch_points(const TrigonalCurve& c, double tol) {
  if (c.is_symbolic()) throw std::invalid_argument("branch points need a numeric curve");
  if (!c.purely_trigonal()) throw std::invalid_argument("branch points are computed for purely trigonal curves");
  if (sgn(c.discriminant()) == 0) throw std::invalid_argument("g has a repeated root (D = 0)");
  auto g = g_complex(c);
  Eigen::Matrix4cd comp = Eigen::Matrix4cd::Zero();
  for (int i = 1; i < 4; ++i) comp(i, i - 1) = 1;
  for (int i = 0; i < 4; ++i) comp(i, 3) = -g[i];
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(comp);
  std::vector<cplx> roots(es.eigenvalues().data(), es.eigenvalues().data() + 4);
  std::vector<cplx> gd;
  for (std::size_t i = 1; i < g.size(); ++i) gd.push_back(g[i] * static_cast<double>(i));
  for (auto& r : roots) {
    for (int it = 0; it < 50; ++it) {
      cplx step = horner(g, r) / horner(gd, r);
      r -= step;
      if (std::abs(step) < 1e-17 * std::max(1.0, std::abs(r))) break;
    }
  }
  double scale = 1;
  for (auto& r : roots) scale = std::max(scale, std::abs(r));
  double sep = 1e300;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) sep = std::min(sep, std::abs(roots[i] - roots[j]));
    if (std::abs(horner(g, roots[i])) > 1e3 * tol * std::pow(scale, 4)) throw std::runtime_error("root polishing failed");
  }
  if (sep < 1e3 * tol * scale) throw std::runtime_error("branch points are not separated");
  auto key = [](cplx z) { return std::make_pair(std::round(std::arg(z) * 1e9), std::abs(z)); };
  std::sort(roots.begin(), roots.end(), [&](cplx p, cplx q) { return key(p) < key(q); });
  return roots;
}

Eigen::MatrixXi star_intersection_matrix(const TrigonalCurve& c) { return star_cycles(c).K; }

bool Characteristic::odd() const {
  double s = 0;
  for (int i = 0; i < 3; ++i) s += 4 * delta1[i] * delta2[i];
  return static_cast<long>(std::lround(s)) % 2 != 0;
}

int Characteristic::index() const {
  int k = 0;
  for (int i = 0; i < 3; ++i) k |= (delta1[i] != 0 ? 1 : 0) << i;
  for (int i = 0; i < 3; ++i) k |= (delta2[i] != 0 ? 1 : 0) << (3 + i);
  return k;
}

Characteristic Characteristic::from_index(int k) {
  if (k < 0 || k > 63) throw std::invalid_argument("characteristic index must be in 0..63");
  Characteristic d;
  for (int i = 0; i < 3; ++i) d.delta1[i] = (k >> i) & 1 ? 0.5 : 0.0;
  for (int i = 0; i < 3; ++i) d.delta2[i] = (k >> (3 + i)) & 1 ? 0.5 : 0.0;
  return d;
}

std::string Characteristic::to_string() const {
  auto f = [](double v) { return v != 0 ? std::string("1/2") : std::string("0"); };
  return "[" + f(delta1[0]) + " " + f(delta1[1]) + " " + f(delta1[2]) + "; " + f(delta2[0]) + " " + f(delta2[1]) +
         " " + f(delta2[2]) + "]";
}

nlohmann::json PeriodValidation::to_json() const {
  return {{"legendre_residual", legendre_residual},
          {"tau_asymmetry", tau_asymmetry},
          {"min_imag_eigenvalue", min_imag_eigenvalue},
          {"zeta_lattice_residual", zeta_lattice_residual}};
}

PeriodValidation validate_periods(const PeriodData& p) {
  PeriodValidation v;
  Eigen::Matrix<cplx, 6, 6> M, J = Eigen::Matrix<cplx, 6, 6>::Zero();
  M << p.omega1, p.omega2, p.eta1, p.eta2;
  J.block<3, 3>(0, 3) = -CMatrix3::Identity();
  J.block<3, 3>(3, 0) = CMatrix3::Identity();
  Eigen::Matrix<cplx, 6, 6> R = M * J * M.transpose() - 2 * kPi * kI * J;
  v.legendre_residual = R.cwiseAbs().maxCoeff();
  v.tau_asymmetry = (p.tau - p.tau.transpose()).cwiseAbs().maxCoeff();
  Eigen::Matrix3d Y = (0.5 * (p.tau + p.tau.transpose())).imag();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(Y);
  v.min_imag_eigenvalue = es.eigenvalues().minCoeff();

  Eigen::Matrix<cplx, 3, 6> Pi;
  Pi << p.omega1, p.omega2;
  Eigen::Matrix<double, 6, 6> real;
  real << Pi.real(), Pi.imag();
  Eigen::FullPivLU<Eigen::Matrix<double, 6, 6>> lu(real);
  const cplx mult[3] = {kZeta, kZeta, std::conj(kZeta)};
  double worst = 0;
  for (int col = 0; col < 6; ++col) {
    CVector3 w;
    for (int i = 0; i < 3; ++i) w(i) = mult[i] * Pi(i, col);
    Eigen::Matrix<double, 6, 1> rhs;
    rhs << w.real(), w.imag();
    Eigen::Matrix<double, 6, 1> n = lu.solve(rhs);
    for (int i = 0; i < 6; ++i) worst = std::max(worst, std::abs(n(i) - std::round(n(i))));
  }
  v.zeta_lattice_residual = worst;
  return v;
}

PeriodData compute_periods(const TrigonalCurve& c, const PeriodOptions& o) {
  StarCycles sc = star_cycles(c);
  Eigen::MatrixXi S = symplectic_basis(sc.K);

  KleinKernel K = solve_eta(c);
  std::array<Form, 6> forms;
  VarTablePtr P = pair_table();
  for (int i = 0; i < 3; ++i) {
    Series num = i == 0   ? Series::constant(P, Rational(1))
                 : i == 1 ? Series::variable(P, "x")
                          : Series::variable(P, "y");
    forms[i] = form_from_series(num);
    forms[3 + i] = form_from_series(K.h_xy[i]);
  }
  int max_p = 0;
  for (auto& f : forms) {
    for (auto& t : f) max_p = std::max(max_p, t.p);
  }

  auto star_periods = [&](int nodes) {
    Eigen::Matrix<cplx, 6, Eigen::Dynamic> per(6, sc.cycles.size());
    std::vector<SegmentIntegrals> I;
    for (const auto& seg : sc.star.segs) I.push_back(integrate_segment(seg, max_p, nodes));
    for (std::size_t j = 0; j < sc.cycles.size(); ++j) {
      auto [s, k] = sc.cycles[j];
      for (int f = 0; f < 6; ++f) per(f, static_cast<long>(j)) = dumbbell_period(forms[f], I[s], k);
    }
    return per;
  };
  auto per = star_periods(o.nodes);
  auto coarse = star_periods(o.nodes / 2);
  double quad_err = (per - coarse).cwiseAbs().maxCoeff();

  Eigen::Matrix<cplx, 6, 6> basis = per * S.transpose().cast<cplx>();
  PeriodData p;
  p.curve = c;
  p.omega1 = basis.block<3, 3>(0, 0);
  p.omega2 = basis.block<3, 3>(0, 3);
  p.eta1 = basis.block<3, 3>(3, 0);
  p.eta2 = basis.block<3, 3>(3, 3);
  p.tau = p.omega1.inverse() * p.omega2;
  bool flipped = false;
  Eigen::Matrix3d Y = p.tau.imag();
  if (Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(0.5 * (Y + Y.transpose())).eigenvalues().maxCoeff() < 0) {
    // Opposite orientation convention: reverse the beta cycles.
    p.omega2 = -p.omega2;
    p.eta2 = -p.eta2;
    p.tau = -p.tau;
    flipped = true;
  }
  p.validation = validate_periods(p);
  p.metadata["intersection_matrix"] = nlohmann::json::array();
  for (int i = 0; i < sc.K.rows(); ++i) {
    std::vector<int> row(sc.K.cols());
    for (int j = 0; j < sc.K.cols(); ++j) row[j] = sc.K(i, j);
    p.metadata["intersection_matrix"].push_back(row);
  }
  p.metadata["quadrature_nodes"] = o.nodes;
  p.metadata["quadrature_error_estimate"] = quad_err;
  p.metadata["beta_reversed"] = flipped;
  p.metadata["hub"] = {sc.star.hub.real(), sc.star.hub.imag()};
  if (!p.validation.ok(o.tol)) {
    throw std::runtime_error("period validation failed: " + p.validation.to_json().dump());
  }
  return p;
}

}  // namespace trigonal
