#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "evbc/analytic.hpp"
#include "evbc/assemble.hpp"
#include "evbc/config.hpp"
#include "evbc/csv.hpp"
#include "evbc/eigen.hpp"

namespace evbc {

namespace detail {

inline std::vector<std::string> standard_metadata(const RunConfig& cfg,
                                                  const std::string& command) {
  return {std::string("tool = ") + kToolVersion, "command = " + command,
          "config_hash = " + config_hash(cfg)};
}

inline double require_single_k(const RunConfig& cfg) {
  if (!cfg.k_value)
    throw ConfigError("k.value", "this command needs a single wavenumber");
  return *cfg.k_value;
}

inline std::vector<double> k_samples(const RunConfig& cfg) {
  if (cfg.k_value) return {*cfg.k_value};
  if (!cfg.k_range)
    throw ConfigError("k.value", "need k.value or a k range");
  const KRange& r = *cfg.k_range;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(r.steps));
  if (r.steps == 1) {
    out.push_back(r.min);
    return out;
  }
  for (int i = 0; i < r.steps; ++i) {
    const double frac = static_cast<double>(i) / (r.steps - 1);
    if (r.spacing == KSpacing::linear)
      out.push_back(r.min + frac * (r.max - r.min));
    else
      out.push_back(std::exp(std::log(r.min) + frac * (std::log(r.max) - std::log(r.min))));
  }
  return out;
}

inline const ContinuousProfile& require_continuous(const Profile& p) {
  const auto* cp = std::get_if<ContinuousProfile>(&p);
  if (cp == nullptr)
    throw ConfigError("profile.family",
                      "this command needs a continuous profile family");
  return *cp;
}

// Greedy nearest-neighbour pairing of two complex sets (both sorted
// lexicographically); returns the largest matched distance.
inline double matched_distance(const std::vector<std::complex<double>>& prev,
                               const std::vector<std::complex<double>>& cur) {
  std::vector<bool> used(cur.size(), false);
  double worst = 0.0;
  for (const auto& p : prev) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_j = cur.size();
    for (std::size_t j = 0; j < cur.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(p - cur[j]);
      if (dist < best) {
        best = dist;
        best_j = j;
      }
    }
    if (best_j == cur.size()) break;
    used[best_j] = true;
    worst = std::max(worst, best);
  }
  return worst;
}

// The j eigenvalues closest to the origin, sorted lexicographically.
inline std::vector<std::complex<double>> smallest_by_modulus(
    const ComplexSpectrum& s, int count) {
  std::vector<std::complex<double>> vals = s.values;
  std::stable_sort(vals.begin(), vals.end(),
                   [](const std::complex<double>& a, const std::complex<double>& b) {
                     if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
                     return lex_less(a, b);
                   });
  vals.resize(std::min<std::size_t>(vals.size(), static_cast<std::size_t>(count)));
  std::sort(vals.begin(), vals.end(), lex_less);
  return vals;
}

}  // namespace detail

// Assembles the pencil (P, Q) for the configured continuous profile.
inline std::pair<TriMatrix, DiagMatrix> assemble_pencil(const RunConfig& cfg,
                                                        double k, int M) {
  const ProblemSpec spec(cfg.domain(), build_profile(cfg), k, cfg.interface_model);
  const Grid grid = build_grid(cfg.a, M);
  return {assemble_P(spec, grid, cfg.tol_jump), assemble_Q(spec, grid)};
}

// Remark-1 sweep: the two boundary-row eigenvalue expressions for a constant
// interior profile, per wavenumber.  Columns (k, lambda_left, lambda_right,
// abs_gap); divergence sentinels serialize as "inf"/"-inf".
inline CsvTable cmd_ksweep(const RunConfig& cfg) {
  if (cfg.profile.kind != ProfileKind::affine || cfg.profile.affine.slope != 0.0)
    throw ConfigError("profile.family",
                      "ksweep needs a constant interior profile "
                      "(family 'constant', or affine with slope 0)");
  const double m_in = cfg.profile.affine.intercept;
  if (!cfg.M) throw ConfigError("grid.M", "ksweep needs grid.M to fix d = -a/M");
  const double d = -cfg.a / static_cast<double>(*cfg.M);
  const std::vector<double> ks = detail::k_samples(cfg);

  CsvTable out;
  out.metadata = detail::standard_metadata(cfg, "ksweep");
  out.metadata.push_back("d = " + format_double(d));
  out.header = {"k", "lambda_left", "lambda_right", "abs_gap"};
  std::size_t diverged = 0;
  for (double k : ks) {
    const LambdaResult left = constant_lambda_left(k, d, m_in, cfg.m_L);
    const LambdaResult right = constant_lambda_right(k, d, m_in, cfg.m_R);
    if (left.diverged || right.diverged) ++diverged;
    out.append_row({k, left.value, right.value, std::abs(left.value - right.value)});
  }
  if (diverged > 0)
    out.metadata.push_back("diverged_rows = " + std::to_string(diverged));
  return out;
}

// Step-approximation study: sample the continuous profile into N pieces,
// measure how close the step profile is, and test whether the perturbed
// problem still has an eigenvalue.  It never does; the residual stays away
// from zero no matter how fine the sampling.
inline CsvTable cmd_stepstudy(const RunConfig& cfg) {
  const Profile profile = build_profile(cfg);
  const ContinuousProfile& p = detail::require_continuous(profile);
  if (cfg.N_list.empty())
    throw ConfigError("step.N_list", "stepstudy needs a list of piece counts");
  const double k = detail::require_single_k(cfg);
  if (!(k > 0.0)) throw ConfigError("k.value", "stepstudy needs k > 0");

  CsvTable out;
  out.metadata = detail::standard_metadata(cfg, "stepstudy");
  out.header = {"N",   "dist_sup", "dist_l1",
                "V_a", "V_b",      "residual",
                "closed_form_residual", "exists_flag"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (int N : cfg.N_list) {
    const StepProfile s = sample_step(p, N);
    const double dist_sup = profile_distance(p, s, ProfileNorm::sup);
    const double dist_l1 = profile_distance(p, s, ProfileNorm::L1);
    try {
      const ProblemSpec spec(cfg.domain(), s, k, cfg.interface_model);
      const BoundaryData bd = jump_coeffs(spec, cfg.tol_jump);
      if (bd.degenerate_a)
        throw DegenerateJump("E(a) vanishes: sampled profile has no jump at a");
      if (bd.degenerate_b)
        throw DegenerateJump("E(b) vanishes: sampled profile has no jump at b");
      const CompatibilityReport rep = nonexistence_certificate(spec, cfg.tol_compat);
      out.append_row({static_cast<double>(N), dist_sup, dist_l1, rep.V_a, rep.V_b,
                      rep.residual, rep.closed_form_residual,
                      rep.eigenvalue_exists ? 1.0 : 0.0});
    } catch (const DegenerateJump& e) {
      out.metadata.push_back("error N=" + std::to_string(N) + ": " + e.what());
      out.append_row({static_cast<double>(N), dist_sup, dist_l1, nan, nan, nan,
                      nan, 0.0});
    }
  }
  return out;
}

// Grid refinement study on the discrete eigenproblem Q^{-1}P f = lambda f.
// Tracks the j smallest-modulus eigenvalues per M and the matched distance
// between successive refinements.
inline CsvTable cmd_refine(const RunConfig& cfg) {
  std::vector<int> Ms = cfg.M_list;
  if (Ms.empty() && cfg.M) Ms.push_back(*cfg.M);
  if (Ms.empty())
    throw ConfigError("grid.M_list", "refine needs grid.M_list (or grid.M)");
  const double k = detail::require_single_k(cfg);
  (void)detail::require_continuous(build_profile(cfg));

  int order_min = std::numeric_limits<int>::max();
  for (int M : Ms) order_min = std::min(order_min, M + 1);
  const int track = std::min(cfg.refine_track, order_min);

  CsvTable out;
  out.metadata = detail::standard_metadata(cfg, "refine");
  out.header = {"M"};
  for (int j = 1; j <= track; ++j) out.header.push_back("re_lambda_" + std::to_string(j));
  for (int j = 1; j <= track; ++j) out.header.push_back("im_lambda_" + std::to_string(j));
  out.header.push_back("cauchy_diff");

  std::vector<std::complex<double>> prev;
  for (int M : Ms) {
    auto [P, Q] = assemble_pencil(cfg, k, M);
    const TriMatrix R = reduce_to_standard(P, Q, cfg.tol_sing);
    const ComplexSpectrum spectrum = qr_eigenvalues(R, cfg.tol_qr, cfg.qr_max_iter);
    const auto tracked = detail::smallest_by_modulus(spectrum, track);
    std::vector<double> row;
    row.push_back(static_cast<double>(M));
    for (const auto& v : tracked) row.push_back(v.real());
    for (const auto& v : tracked) row.push_back(v.imag());
    row.push_back(prev.empty() ? std::numeric_limits<double>::quiet_NaN()
                               : detail::matched_distance(prev, tracked));
    out.append_row(std::move(row));
    prev = tracked;
  }
  return out;
}

// Full spectrum of Q^{-1}P for a single grid, with the characteristic-
// polynomial residual of the reported spectrum in the metadata.
inline CsvTable cmd_eig(const RunConfig& cfg) {
  if (!cfg.M) throw ConfigError("grid.M", "eig needs a single grid.M");
  const double k = detail::require_single_k(cfg);
  (void)detail::require_continuous(build_profile(cfg));
  auto [P, Q] = assemble_pencil(cfg, k, *cfg.M);
  const TriMatrix R = reduce_to_standard(P, Q, cfg.tol_sing);
  const ComplexSpectrum spectrum = qr_eigenvalues(R, cfg.tol_qr, cfg.qr_max_iter);
  const double residual = spectrum_residual(R, spectrum);

  CsvTable out;
  out.metadata = detail::standard_metadata(cfg, "eig");
  out.metadata.push_back("spectrum_residual = " + format_double(residual));
  out.metadata.push_back("qr_sweeps = " + std::to_string(spectrum.stats.iterations));
  out.metadata.push_back("qr_deflations = " +
                         std::to_string(spectrum.stats.deflations));
  out.header = {"index", "re_lambda", "im_lambda"};
  for (std::size_t i = 0; i < spectrum.values.size(); ++i)
    out.append_row({static_cast<double>(i), spectrum.values[i].real(),
                    spectrum.values[i].imag()});
  return out;
}

}  // namespace evbc
