#pragma once

#include <cmath>
#include <string>

#include "evbc/grid.hpp"
#include "evbc/profile.hpp"

namespace evbc {

constexpr double kDefaultSingTol = 1e-10;

// Tridiagonal matrix P of the discrete problem P f = lambda Q f.
//
// Rows 1..M-1 discretize -(m f_x)_x + k^2 m f at x_i with the conservative
// midpoint stencil (m evaluated at x_i +- d/2).  Node indexing runs right to
// left, so the entry multiplying f_{i-1} couples x_i to the node at x_i + d.
// Rows 0 and M carry the eigenvalue-dependent boundary conditions; their
// coefficients are written exactly in the form
//   a_00 = m_R k/(k E(b)) + m(0-)/(k d E(b)),   a_01 = -m(0-)/(k d E(b)),
//   a_MM = m_L k/(k E(a)) + m(a+)/(k d E(a)),   a_M,M-1 = -m(a+)/(k d E(a)).
inline TriMatrix assemble_P(const ProblemSpec& spec, const Grid& grid,
                            double jump_tol = kDefaultJumpTol) {
  if (!(spec.k > 0.0)) throw DegenerateJump("assemble_P: requires k > 0");
  const BoundaryData bd = jump_coeffs(spec, jump_tol);
  if (std::abs(bd.E_a) <= jump_tol)
    throw DegenerateJump("assemble_P: E(a) vanishes, no jump of m at a");
  if (std::abs(bd.E_b) <= jump_tol)
    throw DegenerateJump("assemble_P: E(b) vanishes, no jump of m at b");

  const double k = spec.k;
  const double d = grid.d;
  const double m_L = spec.domain.m_L;
  const double m_R = spec.domain.m_R;
  const int M = grid.M;

  TriMatrix P(M + 1);

  P.diag(0) = m_R * k / (k * bd.E_b) + bd.m_minus_b / (k * d * bd.E_b);
  P.super(0) = -bd.m_minus_b / (k * d * bd.E_b);

  for (int i = 1; i < M; ++i) {
    const double x = grid.nodes[static_cast<std::size_t>(i)];
    // Midpoints x_i +- d/2, written as cell midpoints so that neighbouring
    // rows evaluate m at the bit-identical point.
    const double m_up = eval_profile(
        spec.profile, 0.5 * (grid.nodes[static_cast<std::size_t>(i - 1)] + x));
    const double m_dn = eval_profile(
        spec.profile, 0.5 * (x + grid.nodes[static_cast<std::size_t>(i + 1)]));
    const double m_here = eval_profile(spec.profile, x);
    P.sub(i - 1) = -m_up / (d * d);                    // multiplies f_{i-1}
    P.diag(i) = (m_up + m_dn) / (d * d) + k * k * m_here;
    P.super(i) = -m_dn / (d * d);                      // multiplies f_{i+1}
  }

  P.sub(M - 1) = -bd.m_plus_a / (k * d * bd.E_a);
  P.diag(M) = m_L * k / (k * bd.E_a) + bd.m_plus_a / (k * d * bd.E_a);
  return P;
}

// Diagonal matrix Q: unit entries in the boundary rows, k^2 m_x(x_i) at the
// interior nodes (the k^2 factor comes from the right-hand side of the
// differential equation, so that lambda = 1/sigma).
inline DiagMatrix assemble_Q(const ProblemSpec& spec, const Grid& grid) {
  const auto* profile = std::get_if<ContinuousProfile>(&spec.profile);
  if (profile == nullptr)
    throw Error("assemble_Q: requires a continuous profile with a derivative");
  DiagMatrix Q(grid.M + 1);
  Q.diag(0) = 1.0;
  Q.diag(grid.M) = 1.0;
  const double k2 = spec.k * spec.k;
  for (int i = 1; i < grid.M; ++i)
    Q.diag(i) = k2 * profile->derivative_at(grid.nodes[static_cast<std::size_t>(i)]);
  return Q;
}

// Q^{-1} P, still tridiagonal.  The singularity threshold is relative to the
// largest |Q| entry.
inline TriMatrix reduce_to_standard(const TriMatrix& P, const DiagMatrix& Q,
                                    double sing_tol = kDefaultSingTol) {
  if (P.order() != Q.order())
    throw Error("reduce_to_standard: order mismatch");
  const int n = P.order();
  double q_max = 0.0;
  for (int i = 0; i < n; ++i) q_max = std::max(q_max, std::abs(Q.diag(i)));
  const double threshold = sing_tol * q_max;
  for (int i = 0; i < n; ++i)
    if (std::abs(Q.diag(i)) < threshold || Q.diag(i) == 0.0)
      throw SingularQ("reduce_to_standard: Q singular at node " + std::to_string(i) +
                          " (m_x vanishes there)",
                      i);
  TriMatrix R(n);
  for (int i = 0; i < n; ++i) {
    const double s = 1.0 / Q.diag(i);
    R.diag(i) = P.diag(i) * s;
    if (i > 0) R.sub(i - 1) = P.sub(i - 1) * s;
    if (i < n - 1) R.super(i) = P.super(i) * s;
  }
  return R;
}

// Interior-row action of P on nodal samples; rows 0 and M of the result are
// left at zero.  Used to test consistency against -(m f_x)_x + k^2 m f.
inline DiscreteVector apply_interior_stencil(const ProblemSpec& spec,
                                             const Grid& grid,
                                             const DiscreteVector& f_samples) {
  if (static_cast<int>(f_samples.size()) != grid.M + 1)
    throw Error("apply_interior_stencil: sample vector must have M+1 entries");
  DiscreteVector out(f_samples.size(), 0.0);
  const double d = grid.d;
  const double k2 = spec.k * spec.k;
  for (int i = 1; i < grid.M; ++i) {
    const double x = grid.nodes[static_cast<std::size_t>(i)];
    const double m_up = eval_profile(
        spec.profile, 0.5 * (grid.nodes[static_cast<std::size_t>(i - 1)] + x));
    const double m_dn = eval_profile(
        spec.profile, 0.5 * (x + grid.nodes[static_cast<std::size_t>(i + 1)]));
    const double m_here = eval_profile(spec.profile, x);
    const double f_up = f_samples[static_cast<std::size_t>(i - 1)];
    const double f_dn = f_samples[static_cast<std::size_t>(i + 1)];
    const double f_here = f_samples[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] =
        (-m_up * f_up + (m_up + m_dn) * f_here - m_dn * f_dn) / (d * d) +
        k2 * m_here * f_here;
  }
  return out;
}

}  // namespace evbc
