#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <variant>
#include <vector>

#include "evbc/errors.hpp"

namespace evbc {

// Interval [a, 0] with exterior plateau values of the coefficient m.
// The right endpoint is fixed at b = 0.
struct DomainSpec {
  double a;    // left endpoint, a < 0
  double m_L;  // m(x) for x < a
  double m_R;  // m(x) for x > 0

  DomainSpec(double a_, double m_left, double m_right)
      : a(a_), m_L(m_left), m_R(m_right) {
    if (!(a < 0.0)) throw InvalidDomain("domain: a must be negative");
    if (!(m_L > 0.0) || !(m_R > 0.0))
      throw InvalidDomain("domain: exterior plateaus m_L, m_R must be positive");
  }

  static constexpr double b = 0.0;

  bool operator==(const DomainSpec&) const = default;
};

// ---------------------------------------------------------------------------
// Continuous coefficient profiles m(x) on [a, 0].
// ---------------------------------------------------------------------------

enum class ProfileFamily { affine, exponential_blend, tanh_blend, tabulated };

// m(x) = intercept + slope * x
struct AffineParams {
  double intercept;
  double slope;
  bool operator==(const AffineParams&) const = default;
};

// m(x) = v0 + (v1 - v0) * (e^{rate*t} - 1)/(e^{rate} - 1),  t = (x-a)/|a|.
// The weight runs from exactly 0 at x=a to exactly 1 at x=0 and is monotone,
// so m stays between v0 and v1.
struct ExpBlendParams {
  double left_value;   // v0 = m(a)
  double right_value;  // v1 = m(0)
  double rate;
  bool operator==(const ExpBlendParams&) const = default;
};

// m(x) = v0 + (v1 - v0) * w(t) with
// w(t) = (tanh(s(t-1/2)) + tanh(s/2)) / (2 tanh(s/2)),  t = (x-a)/|a|.
struct TanhBlendParams {
  double left_value;
  double right_value;
  double steepness;
  bool operator==(const TanhBlendParams&) const = default;
};

// Equally spaced samples on [a, 0], piecewise-linear in between.
struct TabulatedParams {
  std::vector<double> samples;  // size >= 2; samples.front() = m(a)
  bool operator==(const TabulatedParams&) const = default;
};

namespace detail {

// Blend weights and their t-derivatives; rate ~ 0 degenerates to linear.
inline double exp_blend_weight(double t, double rate) {
  if (std::abs(rate) < 1e-12) return t;
  return std::expm1(rate * t) / std::expm1(rate);
}
inline double exp_blend_weight_dt(double t, double rate) {
  if (std::abs(rate) < 1e-12) return 1.0;
  return rate * std::exp(rate * t) / std::expm1(rate);
}
inline double tanh_blend_weight(double t, double s) {
  if (std::abs(s) < 1e-12) return t;
  const double th = std::tanh(0.5 * s);
  return (std::tanh(s * (t - 0.5)) + th) / (2.0 * th);
}
inline double tanh_blend_weight_dt(double t, double s) {
  if (std::abs(s) < 1e-12) return 1.0;
  const double th = std::tanh(0.5 * s);
  const double c = std::cosh(s * (t - 0.5));
  return s / (2.0 * th * c * c);
}

}  // namespace detail

// A continuous coefficient profile on [a, 0].  Immutable after construction;
// construction verifies m_L <= m(x) <= m_R by dense sampling.
class ContinuousProfile {
 public:
  using Params =
      std::variant<AffineParams, ExpBlendParams, TanhBlendParams, TabulatedParams>;

  ContinuousProfile(DomainSpec domain, Params params)
      : domain_(domain), params_(std::move(params)) {
    if (const auto* tab = std::get_if<TabulatedParams>(&params_)) {
      if (tab->samples.size() < 2)
        throw Error("tabulated profile needs at least 2 samples");
    }
    check_bounds();
  }

  const DomainSpec& domain() const { return domain_; }
  const Params& params() const { return params_; }

  ProfileFamily family() const {
    switch (params_.index()) {
      case 0: return ProfileFamily::affine;
      case 1: return ProfileFamily::exponential_blend;
      case 2: return ProfileFamily::tanh_blend;
      default: return ProfileFamily::tabulated;
    }
  }

  // Interior nodes where the profile is not smooth (table nodes of a
  // tabulated profile); empty for the closed families.
  std::vector<double> partition() const {
    const auto* tab = std::get_if<TabulatedParams>(&params_);
    if (tab == nullptr) return {};
    std::vector<double> nodes(tab->samples.size());
    const auto n = static_cast<double>(tab->samples.size() - 1);
    for (std::size_t j = 0; j < nodes.size(); ++j)
      nodes[j] = domain_.a * (1.0 - static_cast<double>(j) / n);
    return nodes;
  }

  // m(x).  Throws OutOfDomain outside [a, 0].
  double value_at(double x) const {
    require_inside(x);
    return value_unchecked(x);
  }

  // m_x(x): analytic for the closed families, centered finite difference with
  // the table's native spacing for tabulated profiles.
  double derivative_at(double x) const {
    require_inside(x);
    const double inv_len = 1.0 / (-domain_.a);
    const double t = (x - domain_.a) * inv_len;
    if (const auto* p = std::get_if<AffineParams>(&params_)) {
      return p->slope;
    } else if (const auto* p = std::get_if<ExpBlendParams>(&params_)) {
      return (p->right_value - p->left_value) *
             detail::exp_blend_weight_dt(t, p->rate) * inv_len;
    } else if (const auto* p = std::get_if<TanhBlendParams>(&params_)) {
      return (p->right_value - p->left_value) *
             detail::tanh_blend_weight_dt(t, p->steepness) * inv_len;
    }
    const auto& tab = std::get<TabulatedParams>(params_);
    const double h = -domain_.a / static_cast<double>(tab.samples.size() - 1);
    const double lo = std::max(domain_.a, x - h);
    const double hi = std::min(0.0, x + h);
    return (value_unchecked(hi) - value_unchecked(lo)) / (hi - lo);
  }

  bool operator==(const ContinuousProfile&) const = default;

 private:
  void require_inside(double x) const {
    if (!(x >= domain_.a && x <= 0.0))
      throw OutOfDomain("profile evaluation outside [a, 0]");
  }

  double value_unchecked(double x) const {
    const double t = (x - domain_.a) / (-domain_.a);
    if (const auto* p = std::get_if<AffineParams>(&params_)) {
      return p->intercept + p->slope * x;
    } else if (const auto* p = std::get_if<ExpBlendParams>(&params_)) {
      return p->left_value +
             (p->right_value - p->left_value) * detail::exp_blend_weight(t, p->rate);
    } else if (const auto* p = std::get_if<TanhBlendParams>(&params_)) {
      return p->left_value + (p->right_value - p->left_value) *
                                 detail::tanh_blend_weight(t, p->steepness);
    }
    const auto& tab = std::get<TabulatedParams>(params_);
    const std::size_t n = tab.samples.size() - 1;
    const double pos = t * static_cast<double>(n);
    const std::size_t j = std::min(static_cast<std::size_t>(pos), n - 1);
    const double frac = pos - static_cast<double>(j);
    return tab.samples[j] + frac * (tab.samples[j + 1] - tab.samples[j]);
  }

  void check_bounds() const {
    constexpr int kSamples = 10000;
    const double slack = 1e-12 * (std::abs(domain_.m_L) + std::abs(domain_.m_R));
    for (int j = 0; j <= kSamples; ++j) {
      const double x = domain_.a * (1.0 - static_cast<double>(j) / kSamples);
      const double m = value_unchecked(x);
      if (!(m >= domain_.m_L - slack && m <= domain_.m_R + slack))
        throw Error("profile leaves [m_L, m_R] at x = " + std::to_string(x));
      if (!(m > 0.0)) throw Error("profile must be positive");
    }
  }

  DomainSpec domain_;
  Params params_;
};

// ---------------------------------------------------------------------------
// Step profiles.
// ---------------------------------------------------------------------------

// Piecewise-constant m_S with value m_i on piece (y_{i-1}, y_i).  Pieces are
// indexed left to right: piece 1 touches a, piece N touches b = 0.  Note the
// grid nodes of the discretization are indexed the other way around.
class StepProfile {
 public:
  StepProfile(std::vector<double> breakpoints, std::vector<double> values)
      : y_(std::move(breakpoints)), m_(std::move(values)) {
    if (m_.empty() || y_.size() != m_.size() + 1)
      throw Error("step profile: need N+1 breakpoints for N pieces, N >= 1");
    if (!(y_.front() < 0.0) || y_.back() != 0.0)
      throw Error("step profile: breakpoints must start at a < 0 and end at 0");
    for (std::size_t i = 1; i < y_.size(); ++i)
      if (!(y_[i - 1] < y_[i]))
        throw Error("step profile: breakpoints must be strictly increasing");
    for (double v : m_)
      if (!(v > 0.0)) throw Error("step profile: piece values must be positive");
  }

  std::size_t pieces() const { return m_.size(); }
  double a() const { return y_.front(); }
  const std::vector<double>& breakpoints() const { return y_; }
  const std::vector<double>& values() const { return m_; }

  double first_value() const { return m_.front(); }  // m_1, adjacent to a
  double last_value() const { return m_.back(); }    // m_N, adjacent to b

  // m_S(x).  Breakpoint evaluation returns the left piece by convention
  // (the leftmost breakpoint a belongs to piece 1).
  double value_at(double x) const {
    if (!(x >= y_.front() && x <= 0.0))
      throw OutOfDomain("step profile evaluation outside [a, 0]");
    const auto it = std::lower_bound(y_.begin() + 1, y_.end(), x);
    return m_[static_cast<std::size_t>(it - y_.begin()) - 1];
  }

  bool operator==(const StepProfile&) const = default;

 private:
  std::vector<double> y_;
  std::vector<double> m_;
};

using Profile = std::variant<ContinuousProfile, StepProfile>;

// For step profiles, how the interior of a piecewise-exponential eigenfunction
// candidate is glued at breakpoints: `smooth` keeps one global C^1 solution of
// -f_xx + k^2 f = 0, `flux` additionally imposes continuity of m*f_x.
enum class InterfaceModel { smooth, flux };

// Full problem statement: domain, coefficient profile and wavenumber.
struct ProblemSpec {
  DomainSpec domain;
  Profile profile;
  double k;  // wavenumber, k >= 0
  InterfaceModel interface_model = InterfaceModel::smooth;

  ProblemSpec(DomainSpec d, Profile p, double wavenumber,
              InterfaceModel im = InterfaceModel::smooth)
      : domain(d), profile(std::move(p)), k(wavenumber), interface_model(im) {
    if (!(k >= 0.0)) throw Error("problem: k must be >= 0");
    if (const auto* cp = std::get_if<ContinuousProfile>(&profile)) {
      if (cp->domain() != domain)
        throw Error("problem: profile was built for a different domain");
    } else {
      const auto& sp = std::get<StepProfile>(profile);
      if (std::abs(sp.a() - domain.a) > 1e-12 * std::abs(domain.a))
        throw Error("problem: step profile does not start at domain.a");
    }
  }

  // Interior trace m(a+):  m(a) for continuous profiles, m_1 for steps.
  double m_plus_a() const {
    if (const auto* cp = std::get_if<ContinuousProfile>(&profile))
      return cp->value_at(domain.a);
    return std::get<StepProfile>(profile).first_value();
  }

  // Interior trace m(0-):  m(0) for continuous profiles, m_N for steps.
  double m_minus_b() const {
    if (const auto* cp = std::get_if<ContinuousProfile>(&profile))
      return cp->value_at(0.0);
    return std::get<StepProfile>(profile).last_value();
  }
};

// Jump coefficients E at the endpoints together with the traces they came
// from.  E vanishes either when k = 0 (structural) or when the profile has no
// genuine jump at an endpoint; only the latter sets the degenerate flags.
struct BoundaryData {
  double E_a;        // k * (m(a+) - m_L)
  double E_b;        // k * (m_R  - m(0-))
  double m_plus_a;   // interior trace at a
  double m_minus_b;  // interior trace at b
  bool degenerate_a = false;
  bool degenerate_b = false;
};

constexpr double kDefaultJumpTol = 1e-12;

// -----------------------------------------------------------------------
// Operations
// -----------------------------------------------------------------------

inline double eval_profile(const Profile& p, double x) {
  if (const auto* cp = std::get_if<ContinuousProfile>(&p)) return cp->value_at(x);
  return std::get<StepProfile>(p).value_at(x);
}

// Piecewise-constant approximation of p with N equal-width pieces, each piece
// taking the value of p at its midpoint.
inline StepProfile sample_step(const ContinuousProfile& p, int num_pieces) {
  if (num_pieces < 1) throw Error("sample_step: N must be >= 1");
  const double a = p.domain().a;
  const auto n = static_cast<double>(num_pieces);
  std::vector<double> breakpoints(static_cast<std::size_t>(num_pieces) + 1);
  std::vector<double> values(static_cast<std::size_t>(num_pieces));
  for (int i = 0; i <= num_pieces; ++i)
    breakpoints[static_cast<std::size_t>(i)] = a * (1.0 - i / n);
  for (int i = 1; i <= num_pieces; ++i)
    values[static_cast<std::size_t>(i - 1)] = p.value_at(a * (1.0 - (i - 0.5) / n));
  return StepProfile(std::move(breakpoints), std::move(values));
}

enum class ProfileNorm { sup, L1 };

// Distance between a continuous profile and a step approximation of it.
// sup norm: dense sampling (10^4+1 points).  L1 norm: composite midpoint
// quadrature on the common refinement of the step partition and a uniform
// partition at the same resolution, so no cell straddles a discontinuity.
inline double profile_distance(const ContinuousProfile& p, const StepProfile& s,
                               ProfileNorm norm) {
  const double a = p.domain().a;
  if (std::abs(s.a() - a) > 1e-12 * std::abs(a))
    throw Error("profile_distance: profiles live on different domains");

  constexpr int kResolution = 10000;
  if (norm == ProfileNorm::sup) {
    double best = 0.0;
    for (int j = 0; j <= kResolution; ++j) {
      const double x = a * (1.0 - static_cast<double>(j) / kResolution);
      best = std::max(best, std::abs(p.value_at(x) - s.value_at(x)));
    }
    return best;
  }

  // Refinement of both partitions (step breakpoints and, for tabulated
  // profiles, the table nodes), plus a uniform grid for resolution.
  std::vector<double> cuts(s.breakpoints());
  const std::vector<double> p_nodes = p.partition();
  cuts.insert(cuts.end(), p_nodes.begin(), p_nodes.end());
  for (int j = 1; j < kResolution; ++j)
    cuts.push_back(a * (1.0 - static_cast<double>(j) / kResolution));
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double total = 0.0;
  for (std::size_t j = 0; j + 1 < cuts.size(); ++j) {
    const double w = cuts[j + 1] - cuts[j];
    const double mid = 0.5 * (cuts[j] + cuts[j + 1]);
    total += w * std::abs(p.value_at(mid) - s.value_at(mid));
  }
  return total;
}

// E(a) = k [m(a+) - m_L],  E(b) = k [m_R - m(0-)].
inline BoundaryData jump_coeffs(const ProblemSpec& spec,
                                double jump_tol = kDefaultJumpTol) {
  BoundaryData out{};
  out.m_plus_a = spec.m_plus_a();
  out.m_minus_b = spec.m_minus_b();
  out.E_a = spec.k * (out.m_plus_a - spec.domain.m_L);
  out.E_b = spec.k * (spec.domain.m_R - out.m_minus_b);
  if (spec.k > 0.0) {
    out.degenerate_a = std::abs(out.E_a) <= jump_tol;
    out.degenerate_b = std::abs(out.E_b) <= jump_tol;
  }
  return out;
}

}  // namespace evbc
