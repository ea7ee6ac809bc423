#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "evbc/grid.hpp"

namespace evbc {

constexpr double kDefaultQrTol = 1e-12;
constexpr int kDefaultQrMaxIter = 60;

struct SpectrumStats {
  long iterations = 0;  // double-QR sweeps performed
  long deflations = 0;  // 1x1 / 2x2 blocks split off
};

// All eigenvalues of a real matrix, sorted lexicographically by (re, im).
// Complex values occur in conjugate pairs.
struct ComplexSpectrum {
  std::vector<std::complex<double>> values;
  SpectrumStats stats;
};

namespace detail {

inline bool lex_less(const std::complex<double>& a, const std::complex<double>& b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

// Roots of the trailing 2x2 block [[y, *],[*, x]] with off-diagonal product w,
// i.e. of lambda^2 - (x+y) lambda + (x y - w), shifted by t.  EISPACK's
// stable formulation: the smaller root comes from the product.
inline void emit_block2(double x, double y, double w, double t,
                        std::vector<std::complex<double>>& out) {
  const double p = 0.5 * (y - x);
  const double q = p * p + w;
  const double z = std::sqrt(std::abs(q));
  const double xs = x + t;
  if (q >= 0.0) {
    const double zz = p + (p >= 0.0 ? z : -z);
    const double r1 = xs + zz;
    out.emplace_back(r1, 0.0);
    out.emplace_back(zz != 0.0 ? xs - w / zz : r1, 0.0);
  } else {
    out.emplace_back(xs + p, z);
    out.emplace_back(xs + p, -z);
  }
}

}  // namespace detail

// Eigenvalues of a real tridiagonal (hence upper Hessenberg) matrix by
// Francis-style shifted QR with deflation on negligible subdiagonals
// (|h_{l,l-1}| <= tol (|h_{l-1,l-1}| + |h_{l,l}|)).  Works on a dense copy of
// the Hessenberg band; trailing 1x1 and 2x2 blocks are solved in closed form.
// Throws ConvergenceFailure after max_iter sweeps without a deflation.
inline ComplexSpectrum qr_eigenvalues(const TriMatrix& T,
                                      double tol = kDefaultQrTol,
                                      int max_iter = kDefaultQrMaxIter) {
  const int n = T.order();
  for (int i = 0; i < n; ++i) {
    bool finite = std::isfinite(T.diag(i));
    if (i + 1 < n) finite = finite && std::isfinite(T.sub(i)) && std::isfinite(T.super(i));
    if (!finite) throw Error("qr_eigenvalues: non-finite entry");
  }

  ComplexSpectrum spectrum;
  spectrum.values.reserve(static_cast<std::size_t>(n));

  if (n == 1) {
    spectrum.values.emplace_back(T.diag(0), 0.0);
    return spectrum;
  }
  if (n == 2) {
    detail::emit_block2(T.diag(1), T.diag(0), T.sub(0) * T.super(0), 0.0,
                        spectrum.values);
    std::sort(spectrum.values.begin(), spectrum.values.end(), detail::lex_less);
    return spectrum;
  }

  std::vector<double> hbuf(static_cast<std::size_t>(n) * static_cast<std::size_t>(n),
                           0.0);
  auto h = [&](int i, int j) -> double& {
    return hbuf[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(j)];
  };
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    h(i, i) = T.diag(i);
    norm += std::abs(T.diag(i));
    if (i > 0) {
      h(i, i - 1) = T.sub(i - 1);
      norm += std::abs(T.sub(i - 1));
    }
    if (i < n - 1) {
      h(i, i + 1) = T.super(i);
      norm += std::abs(T.super(i));
    }
  }
  if (norm == 0.0) norm = 1.0;

  auto& w = spectrum.values;
  int en = n - 1;
  double t = 0.0;  // accumulated shifts
  int its = 0;

  while (en >= 0) {
    if (en == 0) {
      w.emplace_back(h(0, 0) + t, 0.0);
      ++spectrum.stats.deflations;
      break;
    }

    // Look for a single negligible subdiagonal element.
    int l = en;
    while (l > 0) {
      double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(h(l, l - 1)) <= tol * s) break;
      --l;
    }

    double x = h(en, en);
    if (l == en) {
      w.emplace_back(x + t, 0.0);
      --en;
      its = 0;
      ++spectrum.stats.deflations;
      continue;
    }
    const int na = en - 1;
    double y = h(na, na);
    double ww = h(en, na) * h(na, en);
    if (l == na) {
      detail::emit_block2(x, y, ww, t, w);
      en -= 2;
      its = 0;
      ++spectrum.stats.deflations;
      continue;
    }

    if (its >= max_iter)
      throw ConvergenceFailure("qr_eigenvalues: no deflation after " +
                               std::to_string(its) + " sweeps (block end " +
                               std::to_string(en) + ")");
    if (its == 10 || its == 20) {
      // Exceptional shift.
      t += x;
      for (int i = 0; i <= en; ++i) h(i, i) -= x;
      const double s = std::abs(h(en, na)) + std::abs(h(na, en - 2));
      x = y = 0.75 * s;
      ww = -0.4375 * s * s;
    }
    ++its;
    ++spectrum.stats.iterations;

    // Look for two consecutive small subdiagonal elements.
    const int enm2 = en - 2;
    int m = enm2;
    double p = 0.0, q = 0.0, r = 0.0;
    while (true) {
      const double zz = h(m, m);
      const double rr = x - zz;
      const double ss = y - zz;
      p = (rr * ss - ww) / h(m + 1, m) + h(m, m + 1);
      q = h(m + 1, m + 1) - zz - rr - ss;
      r = h(m + 2, m + 1);
      const double scale = std::abs(p) + std::abs(q) + std::abs(r);
      p /= scale;
      q /= scale;
      r /= scale;
      if (m == l) break;
      const double tst1 =
          std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(zz) +
                         std::abs(h(m + 1, m + 1)));
      if (std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r)) <=
          std::numeric_limits<double>::epsilon() * tst1)
        break;
      --m;
    }
    for (int i = m + 2; i <= en; ++i) {
      h(i, i - 2) = 0.0;
      if (i > m + 2) h(i, i - 3) = 0.0;
    }

    // Double QR step on rows l..en.
    for (int k = m; k <= na; ++k) {
      const bool notlast = k != na;
      if (k != m) {
        p = h(k, k - 1);
        q = h(k + 1, k - 1);
        r = notlast ? h(k + 2, k - 1) : 0.0;
        x = std::abs(p) + std::abs(q) + std::abs(r);
        if (x == 0.0) continue;
        p /= x;
        q /= x;
        r /= x;
      }
      double s = std::sqrt(p * p + q * q + r * r);
      if (p < 0.0) s = -s;
      if (k != m)
        h(k, k - 1) = -s * x;
      else if (l != m)
        h(k, k - 1) = -h(k, k - 1);
      p += s;
      x = p / s;
      y = q / s;
      const double zz = r / s;
      q /= p;
      r /= p;
      if (notlast) {
        for (int j = k; j <= en; ++j) {
          double pp = h(k, j) + q * h(k + 1, j) + r * h(k + 2, j);
          h(k, j) -= pp * x;
          h(k + 1, j) -= pp * y;
          h(k + 2, j) -= pp * zz;
        }
        const int jmax = std::min(en, k + 3);
        for (int i = l; i <= jmax; ++i) {
          double pp = x * h(i, k) + y * h(i, k + 1) + zz * h(i, k + 2);
          h(i, k) -= pp;
          h(i, k + 1) -= pp * q;
          h(i, k + 2) -= pp * r;
        }
      } else {
        for (int j = k; j <= en; ++j) {
          double pp = h(k, j) + q * h(k + 1, j);
          h(k, j) -= pp * x;
          h(k + 1, j) -= pp * y;
        }
        const int jmax = std::min(en, k + 3);
        for (int i = l; i <= jmax; ++i) {
          double pp = x * h(i, k) + y * h(i, k + 1);
          h(i, k) -= pp;
          h(i, k + 1) -= pp * q;
        }
      }
    }
  }

  std::sort(w.begin(), w.end(), detail::lex_less);
  return spectrum;
}

// det(T - zI) carried as mantissa * 2^exponent2 so that large orders neither
// overflow nor underflow.
struct ScaledComplex {
  std::complex<double> mantissa;
  long exponent2 = 0;

  double log_abs() const {
    const double m = std::abs(mantissa);
    if (m == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(m) + static_cast<double>(exponent2) * std::numbers::ln2;
  }

  std::complex<double> value() const {
    return {std::ldexp(mantissa.real(), static_cast<int>(exponent2)),
            std::ldexp(mantissa.imag(), static_cast<int>(exponent2))};
  }
};

// Three-term determinant recurrence for tridiagonal matrices:
// D_0 = 1, D_1 = t_11 - z, D_j = (t_jj - z) D_{j-1} - sub_j super_{j-1} D_{j-2}.
inline ScaledComplex charpoly_eval(const TriMatrix& T, std::complex<double> z) {
  const int n = T.order();
  std::complex<double> prev = 1.0;
  std::complex<double> cur = T.diag(0) - z;
  long e2 = 0;
  constexpr double kBig = 0x1p256;
  constexpr double kSmall = 0x1p-256;
  for (int j = 1; j < n; ++j) {
    const std::complex<double> next =
        (T.diag(j) - z) * cur - T.sub(j - 1) * T.super(j - 1) * prev;
    prev = cur;
    cur = next;
    const double mag = std::max(std::abs(cur), std::abs(prev));
    if (mag > kBig) {
      cur *= kSmall;
      prev *= kSmall;
      e2 += 256;
    } else if (mag < kSmall && mag > 0.0) {
      cur *= kBig;
      prev *= kBig;
      e2 -= 256;
    }
  }
  return {cur, e2};
}

// Coefficients of det(T - zI) in ascending powers of z, via the same
// recurrence carried in coefficient space.
inline std::vector<double> charpoly_coeffs(const TriMatrix& T) {
  const int n = T.order();
  std::vector<double> prev{1.0};
  std::vector<double> cur{T.diag(0), -1.0};
  for (int j = 1; j < n; ++j) {
    std::vector<double> next(static_cast<std::size_t>(j) + 2, 0.0);
    for (int c = 0; c <= j; ++c) {
      next[static_cast<std::size_t>(c)] += T.diag(j) * cur[static_cast<std::size_t>(c)];
      next[static_cast<std::size_t>(c) + 1] -= cur[static_cast<std::size_t>(c)];
    }
    const double od = T.sub(j - 1) * T.super(j - 1);
    for (int c = 0; c < j; ++c)
      next[static_cast<std::size_t>(c)] -= od * prev[static_cast<std::size_t>(c)];
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

// Independent brute-force oracle for small orders: expand the characteristic
// polynomial exactly, then find all roots by Aberth-Ehrlich iteration from
// perturbed-circle starting points, to 1e-13 relative correction.
inline ComplexSpectrum roots_oracle(const TriMatrix& T) {
  const int deg = T.order();
  if (deg > 8)
    throw OracleDegree("roots_oracle: order " + std::to_string(deg) +
                       " exceeds supported maximum 8");
  const std::vector<double> c = charpoly_coeffs(T);

  const double lead = c[static_cast<std::size_t>(deg)];
  double radius = 0.0;
  for (int j = 0; j < deg; ++j)
    radius = std::max(radius, std::abs(c[static_cast<std::size_t>(j)] / lead));
  radius = 1.0 + radius;

  std::vector<std::complex<double>> z(static_cast<std::size_t>(deg));
  for (int i = 0; i < deg; ++i) {
    const double angle =
        2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(deg) +
        0.4;
    const double r = radius * (0.8 + 0.25 * static_cast<double>(i) /
                                         static_cast<double>(deg));
    z[static_cast<std::size_t>(i)] = std::polar(r, angle);
  }

  auto eval = [&](std::complex<double> x, std::complex<double>& p,
                  std::complex<double>& dp) {
    p = c[static_cast<std::size_t>(deg)];
    dp = 0.0;
    for (int j = deg - 1; j >= 0; --j) {
      dp = dp * x + p;
      p = p * x + c[static_cast<std::size_t>(j)];
    }
  };

  for (int iter = 0; iter < 400; ++iter) {
    double worst = 0.0;
    for (int i = 0; i < deg; ++i) {
      auto& zi = z[static_cast<std::size_t>(i)];
      std::complex<double> p, dp;
      eval(zi, p, dp);
      if (p == 0.0) continue;
      if (dp == 0.0) {
        zi += 1e-8 * (1.0 + std::abs(zi));
        worst = 1.0;
        continue;
      }
      const std::complex<double> newton = p / dp;
      std::complex<double> repulsion = 0.0;
      for (int j = 0; j < deg; ++j)
        if (j != i) repulsion += 1.0 / (zi - z[static_cast<std::size_t>(j)]);
      const std::complex<double> denom = 1.0 - newton * repulsion;
      const std::complex<double> step = (denom == 0.0) ? newton : newton / denom;
      zi -= step;
      worst = std::max(worst, std::abs(step) / (1.0 + std::abs(zi)));
    }
    if (worst <= 1e-13) break;
  }

  // The coefficients are real, so the exact roots are closed under
  // conjugation; enforce that on the converged iterates so sorting pairs
  // them deterministically.
  std::vector<std::complex<double>> cleaned;
  cleaned.reserve(z.size());
  std::vector<bool> used(z.size(), false);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const std::complex<double> zi = z[i];
    if (std::abs(zi.imag()) <= 1e-9 * (1.0 + std::abs(zi))) {
      cleaned.emplace_back(zi.real(), 0.0);
      continue;
    }
    std::size_t partner = z.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < z.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(std::conj(zi) - z[j]);
      if (dist < best) {
        best = dist;
        partner = j;
      }
    }
    if (partner != z.size() && best <= 1e-6 * (1.0 + std::abs(zi))) {
      used[partner] = true;
      const double re = 0.5 * (zi.real() + z[partner].real());
      const double im = 0.5 * (std::abs(zi.imag()) + std::abs(z[partner].imag()));
      cleaned.emplace_back(re, -im);
      cleaned.emplace_back(re, im);
    } else {
      cleaned.emplace_back(zi.real(), 0.0);
    }
  }

  ComplexSpectrum spectrum;
  spectrum.values = std::move(cleaned);
  std::sort(spectrum.values.begin(), spectrum.values.end(), detail::lex_less);
  return spectrum;
}

// Verification gate: max over the reported eigenvalues lambda_i of
// |det(T - lambda_i I)| normalized by prod_{j != i} (1 + |lambda_j -
// lambda_i|), evaluated in log space together with the scaling exponent of
// the determinant.  Near a true root the normalizer cancels the remaining
// root factors, so the residual estimates the distance from lambda_i to the
// closest root of the characteristic polynomial.
inline double spectrum_residual(const TriMatrix& T, const ComplexSpectrum& s) {
  const auto& vals = s.values;
  double worst = 0.0;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double log_num = charpoly_eval(T, vals[i]).log_abs();
    if (log_num == -std::numeric_limits<double>::infinity()) continue;
    double log_den = 0.0;
    for (std::size_t j = 0; j < vals.size(); ++j)
      if (j != i) log_den += std::log1p(std::abs(vals[j] - vals[i]));
    worst = std::max(worst, std::exp(log_num - log_den));
  }
  return worst;
}

}  // namespace evbc
