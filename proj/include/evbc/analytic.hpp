#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "evbc/profile.hpp"

namespace evbc {

constexpr double kDefaultCompatTol = 1e-9;

// Guard for e^{k d} style factors; beyond this the closed forms report a
// signed-infinity sentinel instead of overflowing.
constexpr double kExpArgGuard = 300.0;

struct LambdaResult {
  double value;
  bool diverged;  // exponent guard tripped; value is a signed infinity
};

// lambda from the boundary row at a for a constant interior profile, with
// f_{M-1}/f_M = e^{kd} for the decaying exponential eigenfunction:
//   lambda = m_in/(k d E(a)) (-e^{kd}) + [m_L k/(k E(a)) + m_in/(k d E(a))],
//   E(a) = k (m_in - m_L).
// Unbounded below as k grows when m_in > m_L.
inline LambdaResult constant_lambda_left(double k, double d, double m_in,
                                         double m_L) {
  if (!(k > 0.0) || !(d > 0.0))
    throw Error("constant_lambda_left: requires k > 0 and d > 0");
  if (m_in == m_L)
    throw DegenerateJump("constant_lambda_left: m_in = m_L gives E(a) = 0");
  const double E_a = k * (m_in - m_L);
  if (k * d > kExpArgGuard) {
    const double inf = std::numeric_limits<double>::infinity();
    return {E_a > 0.0 ? -inf : inf, true};
  }
  const double value = (m_in / (k * d * E_a)) * (-std::exp(k * d)) +
                       (m_L * k / (k * E_a) + m_in / (k * d * E_a));
  return {value, false};
}

// lambda from the boundary row at b, with f_1/f_0 = e^{-kd}:
//   lambda = m_in/(k d E(b)) (-e^{-kd}) + [m_R k/(k E(b)) + m_in/(k d E(b))],
//   E(b) = k (m_R - m_in).
// Tends to 0 as k grows; never overflows.
inline LambdaResult constant_lambda_right(double k, double d, double m_in,
                                          double m_R) {
  if (!(k > 0.0) || !(d > 0.0))
    throw Error("constant_lambda_right: requires k > 0 and d > 0");
  if (m_in == m_R)
    throw DegenerateJump("constant_lambda_right: m_in = m_R gives E(b) = 0");
  const double E_b = k * (m_R - m_in);
  const double value = (m_in / (k * d * E_b)) * (-std::exp(-k * d)) +
                       (m_R * k / (k * E_b) + m_in / (k * d * E_b));
  return {value, false};
}

// One piece of a piecewise-exponential function, in the piece-local basis
// f(x) = A e^{k(x - x_left)} + B e^{-k(x - x_left)} so that transfer factors
// stay bounded by e^{k * piece_width}.
struct ExpPiece {
  double x_left;
  double x_right;
  double A;
  double B;
};

// Eigenfunction candidate for a step profile: a solution of
// -f_xx + k^2 f = 0 on each piece, normalized so that the exterior amplitude
// is 1, i.e. f(a) = e^{ka} and f(0) = 1.
struct PiecewiseExponential {
  double k = 0.0;
  std::vector<ExpPiece> pieces;

  double a() const { return pieces.front().x_left; }

  double value_at(double x) const {
    const ExpPiece& p = piece_for(x);
    const double s = x - p.x_left;
    return p.A * std::exp(k * s) + p.B * std::exp(-k * s);
  }

  // Derivative inside a piece (one-sided at breakpoints: the piece owning x
  // by the left-piece convention).
  double derivative_at(double x) const {
    const ExpPiece& p = piece_for(x);
    const double s = x - p.x_left;
    return k * (p.A * std::exp(k * s) - p.B * std::exp(-k * s));
  }

 private:
  const ExpPiece& piece_for(double x) const {
    if (!(x >= pieces.front().x_left && x <= pieces.back().x_right))
      throw OutOfDomain("piecewise exponential evaluated outside [a, 0]");
    for (std::size_t i = 0; i + 1 < pieces.size(); ++i)
      if (x <= pieces[i].x_right) return pieces[i];
    return pieces.back();
  }
};

enum class Side { a, b };

// Everything the compatibility ratio needs at one endpoint: the trace of f,
// the one-sided derivatives (the exterior side is fixed by the far-field
// relations f_x^-(a) = k f(a), f_x^+(b) = -k f(b)), the jump coefficient E
// and the one-sided coefficient traces.
struct BoundarySideData {
  Side side;
  double f_val;
  double fx_minus;
  double fx_plus;
  double E;
  double m_minus;
  double m_plus;
};

namespace detail {

// Solve [[r0c0, r0c1], [r1c0, r1c1]] (u, v)^T = (rhs0, rhs1)^T by Gaussian
// elimination with partial pivoting; SingularTransfer if the row-scaled
// determinant falls below 1e-14.
inline std::array<double, 2> solve2(double r0c0, double r0c1, double rhs0,
                                    double r1c0, double r1c1, double rhs1) {
  const double s0 = std::max(std::abs(r0c0), std::abs(r0c1));
  const double s1 = std::max(std::abs(r1c0), std::abs(r1c1));
  if (s0 == 0.0 || s1 == 0.0)
    throw SingularTransfer("endpoint matching system has a zero row");
  const double det_scaled = (r0c0 * r1c1 - r0c1 * r1c0) / (s0 * s1);
  if (std::abs(det_scaled) < 1e-14)
    throw SingularTransfer("endpoint matching system is singular");
  if (std::abs(r0c0) < std::abs(r1c0)) {
    std::swap(r0c0, r1c0);
    std::swap(r0c1, r1c1);
    std::swap(rhs0, rhs1);
  }
  const double factor = r1c0 / r0c0;
  const double v = (rhs1 - factor * rhs0) / (r1c1 - factor * r0c1);
  const double u = (rhs0 - r0c1 * v) / r0c0;
  return {u, v};
}

}  // namespace detail

// Interior eigenfunction candidate for a step profile, matched to the
// exterior exponentials: f(a) = e^{ka}, f(0) = 1.
//
// smooth mode: one global C^1 solution of -f_xx + k^2 f = 0 on (a, 0); the
// endpoint matching forces (A, B) = (1, 0) in the global basis, i.e.
// f(x) = e^{kx} exactly, for every k > 0.
//
// flux mode: per-piece solutions glued by continuity of f and of m f_x at
// the interior breakpoints (2x2 transfer matrices), endpoint values matched
// by a 2x2 solve in the first piece's amplitudes.
inline PiecewiseExponential solve_step_interior(const ProblemSpec& spec) {
  const auto* sp = std::get_if<StepProfile>(&spec.profile);
  if (sp == nullptr)
    throw Error("solve_step_interior: requires a step profile");
  const double k = spec.k;
  if (!(k > 0.0)) throw Error("solve_step_interior: requires k > 0");
  const double a = sp->a();
  if (k * (-a) > 700.0)
    throw SingularTransfer("solve_step_interior: k|a| too large for the "
                           "endpoint basis");

  const auto& y = sp->breakpoints();
  const auto& m = sp->values();
  const std::size_t N = sp->pieces();

  PiecewiseExponential f;
  f.k = k;
  f.pieces.resize(N);
  for (std::size_t i = 0; i < N; ++i) {
    f.pieces[i].x_left = y[i];
    f.pieces[i].x_right = y[i + 1];
  }

  const double f_at_a = std::exp(k * a);

  if (spec.interface_model == InterfaceModel::smooth || N == 1) {
    // Global basis f = A e^{kx} + B e^{-kx}; rows: f(a) = e^{ka}, f(0) = 1.
    const auto ab = detail::solve2(std::exp(k * a), std::exp(-k * a), f_at_a,
                                   1.0, 1.0, 1.0);
    for (std::size_t i = 0; i < N; ++i) {
      f.pieces[i].A = ab[0] * std::exp(k * y[i]);
      f.pieces[i].B = ab[1] * std::exp(-k * y[i]);
    }
  } else {
    // Composite transfer map (A_1, B_1) -> (A_N, B_N).
    double c00 = 1.0, c01 = 0.0, c10 = 0.0, c11 = 1.0;
    for (std::size_t i = 0; i + 1 < N; ++i) {
      const double w = y[i + 1] - y[i];
      const double ep = std::exp(k * w);
      const double en = std::exp(-k * w);
      const double r = m[i] / m[i + 1];
      const double t00 = 0.5 * (1.0 + r) * ep;
      const double t01 = 0.5 * (1.0 - r) * en;
      const double t10 = 0.5 * (1.0 - r) * ep;
      const double t11 = 0.5 * (1.0 + r) * en;
      const double n00 = t00 * c00 + t01 * c10;
      const double n01 = t00 * c01 + t01 * c11;
      const double n10 = t10 * c00 + t11 * c10;
      const double n11 = t10 * c01 + t11 * c11;
      c00 = n00; c01 = n01; c10 = n10; c11 = n11;
    }
    const double wN = y[N] - y[N - 1];
    const double epN = std::exp(k * wN);
    const double enN = std::exp(-k * wN);
    // Row 1: A_1 + B_1 = e^{ka}.  Row 2: f(0) = 1 through the transfer map.
    const auto ab = detail::solve2(1.0, 1.0, f_at_a,
                                   epN * c00 + enN * c10,
                                   epN * c01 + enN * c11, 1.0);
    double A = ab[0], B = ab[1];
    f.pieces[0].A = A;
    f.pieces[0].B = B;
    for (std::size_t i = 0; i + 1 < N; ++i) {
      const double w = y[i + 1] - y[i];
      const double ep = std::exp(k * w);
      const double en = std::exp(-k * w);
      const double r = m[i] / m[i + 1];
      const double u = A * ep + B * en;
      const double v = A * ep - B * en;
      A = 0.5 * (u + r * v);
      B = 0.5 * (u - r * v);
      f.pieces[i + 1].A = A;
      f.pieces[i + 1].B = B;
    }
  }

  const double left = f.value_at(a);
  const double right = f.value_at(0.0);
  if (std::abs(left - f_at_a) > 1e-10 * std::abs(f_at_a) ||
      std::abs(right - 1.0) > 1e-10)
    throw SingularTransfer("solve_step_interior: endpoint matching failed");
  return f;
}

// Traces, one-sided derivatives and jump data of f at one endpoint.  The
// exterior derivative comes from the far-field exponentials, the interior
// one from the adjacent piece's amplitudes.
inline BoundarySideData boundary_side_data(const PiecewiseExponential& f,
                                           const ProblemSpec& spec, Side side) {
  BoundarySideData out{};
  out.side = side;
  const double k = f.k;
  const BoundaryData bd = jump_coeffs(spec);
  if (side == Side::a) {
    const ExpPiece& p = f.pieces.front();
    out.f_val = p.A + p.B;
    out.fx_plus = k * (p.A - p.B);  // interior limit
    out.fx_minus = k * out.f_val;   // exterior limit
    out.m_minus = spec.domain.m_L;
    out.m_plus = bd.m_plus_a;
    out.E = bd.E_a;
  } else {
    const ExpPiece& p = f.pieces.back();
    const double w = p.x_right - p.x_left;
    const double ep = std::exp(k * w);
    const double en = std::exp(-k * w);
    out.f_val = p.A * ep + p.B * en;
    out.fx_minus = k * (p.A * ep - p.B * en);  // interior limit
    out.fx_plus = -k * out.f_val;              // exterior limit
    out.m_minus = bd.m_minus_b;
    out.m_plus = spec.domain.m_R;
    out.E = bd.E_b;
  }
  return out;
}

// Compatibility ratio V = k E f / (m^- f_x^- - m^+ f_x^+).  Each boundary
// condition forces sigma = V, so an eigenvalue exists only if V(a) = V(b).
// Homogeneous of degree 0 in f.
inline double compatibility_V(const BoundarySideData& data, double k) {
  const double lhs = data.m_minus * data.fx_minus;
  const double rhs = data.m_plus * data.fx_plus;
  const double den = lhs - rhs;
  if (den == 0.0 || std::abs(den) <= 1e-14 * (std::abs(lhs) + std::abs(rhs)))
    throw ZeroDenominator(
        "compatibility_V: boundary condition cannot determine sigma");
  return k * data.E * data.f_val / den;
}

// Closed forms of the ratios for the globally exponential candidate:
// V(a) = k(m_1 - m_L)/(m_L - m_1) = -k,   V(b) = k(m_R - m_N)/(m_N + m_R).
inline double asymptotic_V_a(double k, double m_1, double m_L) {
  if (m_1 == m_L) throw DegenerateJump("asymptotic_V_a: m_1 = m_L");
  return k * (m_1 - m_L) / (m_L - m_1);
}

inline double asymptotic_V_b(double k, double m_N, double m_R) {
  return k * (m_R - m_N) / (m_N + m_R);
}

// Verdict on the existence of an eigenvalue for a step profile.
struct CompatibilityReport {
  double V_a = 0.0;
  double V_b = 0.0;
  double lambda_a = 0.0;  // 1/V_a
  double lambda_b = 0.0;  // 1/V_b
  double residual = 0.0;  // V_a - V_b
  // Algebraic simplification of V_a - V_b in smooth mode: -2k m_R/(m_N + m_R).
  double closed_form_residual = 0.0;
  // Root of residual(m_R) = 0; the boundary conditions are compatible only
  // for this (non-admissible) plateau value.
  double m_R_for_zero_residual = 0.0;
  bool eigenvalue_exists = false;
};

// Builds the eigenfunction candidate, evaluates both compatibility ratios and
// reports whether any sigma can satisfy both boundary conditions.  Also
// root-solves the residual as a function of the right plateau m_R; the root
// is 0, outside the admissible range m_R > 0.
inline CompatibilityReport nonexistence_certificate(
    const ProblemSpec& spec, double tol_compat = kDefaultCompatTol) {
  const auto* sp = std::get_if<StepProfile>(&spec.profile);
  if (sp == nullptr)
    throw Error("nonexistence_certificate: requires a step profile");
  if (!(spec.k > 0.0))
    throw Error("nonexistence_certificate: requires k > 0");
  const BoundaryData bd = jump_coeffs(spec);
  if (bd.degenerate_a)
    throw DegenerateJump("nonexistence_certificate: m_1 = m_L, E(a) = 0");

  const PiecewiseExponential f = solve_step_interior(spec);
  const BoundarySideData da = boundary_side_data(f, spec, Side::a);
  const BoundarySideData db = boundary_side_data(f, spec, Side::b);
  const double k = spec.k;

  CompatibilityReport report;
  report.V_a = compatibility_V(da, k);
  report.V_b = compatibility_V(db, k);
  report.lambda_a = 1.0 / report.V_a;
  report.lambda_b = 1.0 / report.V_b;
  report.residual = report.V_a - report.V_b;
  const double m_N = sp->last_value();
  const double m_R = spec.domain.m_R;
  report.closed_form_residual = -2.0 * k * m_R / (m_N + m_R);
  report.eigenvalue_exists = std::abs(report.residual) <= tol_compat;

  // residual(m) with the solved f held fixed; only the side-b ratio depends
  // on the right plateau:  V_b(m) = k^2 (m - m_N) f / (m_N fx^- + m k f).
  const auto residual_of = [&](double m) {
    return report.V_a - (k * (k * (m - m_N)) * db.f_val /
                         (db.m_minus * db.fx_minus + m * k * db.f_val));
  };
  double lo = -0.5 * m_N;
  double hi = std::max(10.0 * m_R, 10.0);
  double flo = residual_of(lo);
  double fhi = residual_of(hi);
  int expand = 0;
  while (flo * fhi > 0.0 && expand++ < 60) {
    hi *= 2.0;
    fhi = residual_of(hi);
  }
  if (flo * fhi > 0.0) {
    report.m_R_for_zero_residual = std::numeric_limits<double>::quiet_NaN();
    return report;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = residual_of(mid);
    if (fmid == 0.0) {
      lo = hi = mid;
      break;
    }
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  report.m_R_for_zero_residual = 0.5 * (lo + hi);
  return report;
}

}  // namespace evbc
