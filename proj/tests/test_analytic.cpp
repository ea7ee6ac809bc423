#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "evbc/analytic.hpp"

using namespace evbc;

namespace {

// Random step profile on [a, 0] with N pieces in [lo, hi], m_1 != m_L.
StepProfile random_step(std::mt19937& rng, double a, int pieces, double lo,
                        double hi) {
  std::uniform_real_distribution<double> mdist(lo, hi);
  std::vector<double> y(static_cast<std::size_t>(pieces) + 1);
  for (int i = 0; i <= pieces; ++i)
    y[static_cast<std::size_t>(i)] = a * (1.0 - static_cast<double>(i) / pieces);
  std::vector<double> m(static_cast<std::size_t>(pieces));
  for (auto& v : m) v = mdist(rng);
  return StepProfile(std::move(y), std::move(m));
}

// Residuals of every imposed condition of the flux-mode gluing, evaluated
// with piece-local scaling.
double flux_conditions_residual(const PiecewiseExponential& f,
                                const StepProfile& sp, double k) {
  const auto& y = sp.breakpoints();
  const auto& m = sp.values();
  double worst = 0.0;
  const double fa = std::exp(k * y.front());
  worst = std::max(worst, std::abs(f.value_at(y.front()) - fa) / fa);
  worst = std::max(worst, std::abs(f.value_at(0.0) - 1.0));
  for (std::size_t i = 0; i + 1 < sp.pieces(); ++i) {
    const ExpPiece& left = f.pieces[i];
    const ExpPiece& right = f.pieces[i + 1];
    const double w = left.x_right - left.x_left;
    const double lv = left.A * std::exp(k * w) + left.B * std::exp(-k * w);
    const double rv = right.A + right.B;
    const double scale_v = std::abs(lv) + std::abs(rv) + 1e-300;
    worst = std::max(worst, std::abs(lv - rv) / scale_v);
    const double ld = m[i] * k * (left.A * std::exp(k * w) - left.B * std::exp(-k * w));
    const double rd = m[i + 1] * k * (right.A - right.B);
    const double scale_d = std::abs(ld) + std::abs(rd) + 1e-300;
    worst = std::max(worst, std::abs(ld - rd) / scale_d);
  }
  return worst;
}

}  // namespace

TEST_CASE("constant_lambda_left fixed values") {
  // k=1, d=1, m_in=2, m_L=1: 3 - 2e.
  const LambdaResult r = constant_lambda_left(1.0, 1.0, 2.0, 1.0);
  CHECK_FALSE(r.diverged);
  CHECK(r.value == doctest::Approx(3.0 - 2.0 * std::exp(1.0)).epsilon(1e-12));
  CHECK(r.value == doctest::Approx(-2.43656365691809).epsilon(1e-12));

  // Large k: dominated by -e^{kd} / (k^2 d (m_in - m_L)) * m_in.
  const LambdaResult big = constant_lambda_left(300.0, 0.1, 2.0, 1.0);
  CHECK_FALSE(big.diverged);
  CHECK(big.value < -1e6);

  // kd -> 0 balance: lambda -> -1/k.
  const LambdaResult tiny = constant_lambda_left(1e-3, 1e-3, 2.0, 1.0);
  CHECK(std::abs(tiny.value * 1e-3 + 1.0) < 1e-5);

  CHECK_THROWS_AS(constant_lambda_left(1.0, 1.0, 2.0, 2.0), DegenerateJump);
  CHECK_THROWS_AS(constant_lambda_left(0.0, 1.0, 2.0, 1.0), Error);
}

TEST_CASE("constant_lambda_left overflow guard") {
  const LambdaResult r = constant_lambda_left(5000.0, 0.1, 2.0, 1.0);
  CHECK(r.diverged);
  CHECK(std::isinf(r.value));
  CHECK(r.value < 0.0);  // m_in > m_L: E(a) > 0, divergence to -inf
  const LambdaResult flipped = constant_lambda_left(5000.0, 0.1, 1.0, 2.0);
  CHECK(flipped.diverged);
  CHECK(flipped.value > 0.0);
}

TEST_CASE("constant_lambda_right fixed values") {
  const LambdaResult r = constant_lambda_right(1.0, 1.0, 2.0, 3.0);
  CHECK_FALSE(r.diverged);
  CHECK(r.value ==
        doctest::Approx(2.0 * (1.0 - std::exp(-1.0)) + 3.0).epsilon(1e-12));

  const LambdaResult big = constant_lambda_right(300.0, 0.1, 2.0, 3.0);
  CHECK(std::abs(big.value) < 0.05);

  // lambda -> 0 from above as k grows.
  double prev = std::numeric_limits<double>::infinity();
  for (double k : {50.0, 100.0, 200.0, 400.0, 800.0}) {
    const double v = constant_lambda_right(k, 0.1, 2.0, 3.0).value;
    CHECK(v > 0.0);
    CHECK(v < prev);
    prev = v;
  }

  CHECK_THROWS_AS(constant_lambda_right(1.0, 1.0, 3.0, 3.0), DegenerateJump);
}

TEST_CASE("Remark-1 limit shapes of the two lambda expressions") {
  // Left expression: strictly decreasing, below -1e3 from k = 200 on.
  double prev = 0.0;
  for (double k : {50.0, 100.0, 200.0, 400.0}) {
    const double v = constant_lambda_left(k, 0.1, 2.0, 1.0).value;
    CHECK(v < prev);
    if (k >= 200.0) CHECK(v < -1e3);
    prev = v;
  }
  // Right expression: |lambda| <= C/k with stable fitted C.
  std::vector<double> fitted;
  for (double k : {100.0, 200.0, 400.0})
    fitted.push_back(k * std::abs(constant_lambda_right(k, 0.1, 2.0, 3.0).value));
  const double cmin = *std::min_element(fitted.begin(), fitted.end());
  const double cmax = *std::max_element(fitted.begin(), fitted.end());
  CHECK(cmax / cmin < 1.2);
}

TEST_CASE("solve_step_interior in smooth mode is exactly e^{kx}") {
  const DomainSpec dom(-1.0, 1.0, 3.0);
  const StepProfile sp({-1.0, -0.5, 0.0}, {1.5, 2.5});
  const ProblemSpec spec(dom, sp, 2.0, InterfaceModel::smooth);
  const PiecewiseExponential f = solve_step_interior(spec);
  REQUIRE(f.pieces.size() == 2);
  // Global amplitudes (1, 0): every piece-local B vanishes.
  for (const auto& piece : f.pieces) CHECK(piece.B == 0.0);
  CHECK(f.value_at(-0.5) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(f.value_at(-1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
  CHECK(f.value_at(0.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(f.derivative_at(-0.25) ==
        doctest::Approx(2.0 * std::exp(-0.5)).epsilon(1e-13));
}

TEST_CASE("solve_step_interior preconditions") {
  const DomainSpec dom(-1.0, 1.0, 3.0);
  const StepProfile sp({-1.0, 0.0}, {2.0});
  CHECK_THROWS_AS(solve_step_interior(ProblemSpec(dom, sp, 0.0)), Error);
  const ContinuousProfile cp(dom, AffineParams{2.0, 0.0});
  CHECK_THROWS_AS(solve_step_interior(ProblemSpec(dom, cp, 1.0)), Error);
  // k|a| beyond the representable exponential range.
  CHECK_THROWS_AS(solve_step_interior(ProblemSpec(dom, sp, 800.0)),
                  SingularTransfer);
}

TEST_CASE("flux mode with one piece coincides with smooth mode") {
  const DomainSpec dom(-1.0, 1.0, 3.0);
  const StepProfile sp({-1.0, 0.0}, {2.0});
  const PiecewiseExponential fs =
      solve_step_interior(ProblemSpec(dom, sp, 1.7, InterfaceModel::smooth));
  const PiecewiseExponential ff =
      solve_step_interior(ProblemSpec(dom, sp, 1.7, InterfaceModel::flux));
  CHECK(ff.pieces[0].A == fs.pieces[0].A);
  CHECK(ff.pieces[0].B == fs.pieces[0].B);
}

TEST_CASE("flux mode N=2 satisfies all interface and endpoint equations") {
  const DomainSpec dom(-1.0, 1.0, 3.0);
  const StepProfile sp({-1.0, -0.5, 0.0}, {1.0, 2.0});
  const ProblemSpec spec(dom, sp, 1.0, InterfaceModel::flux);
  const PiecewiseExponential f = solve_step_interior(spec);
  CHECK(flux_conditions_residual(f, sp, 1.0) < 1e-12);

  // Independent dense solve of the full 2N x 2N linear system.
  const int n = 4;
  double A[4][5] = {};
  // Row 0: A1 + B1 = e^{-k}.
  A[0][0] = 1.0; A[0][1] = 1.0; A[0][4] = std::exp(-1.0);
  // Row 1: value continuity at -0.5 (piece width 0.5).
  const double ep = std::exp(0.5), en = std::exp(-0.5);
  A[1][0] = ep; A[1][1] = en; A[1][2] = -1.0; A[1][3] = -1.0;
  // Row 2: flux continuity, m1 = 1, m2 = 2.
  A[2][0] = 1.0 * ep; A[2][1] = -1.0 * en; A[2][2] = -2.0; A[2][3] = 2.0;
  // Row 3: f(0) = 1 from piece 2's local basis.
  A[3][2] = ep; A[3][3] = en; A[3][4] = 1.0;
  // Gaussian elimination with partial pivoting.
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
    for (int c = 0; c <= n; ++c) std::swap(A[col][c], A[pivot][c]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = A[r][col] / A[col][col];
      for (int c = col; c <= n; ++c) A[r][c] -= factor * A[col][c];
    }
  }
  const double a1 = A[0][4] / A[0][0], b1 = A[1][4] / A[1][1];
  const double a2 = A[2][4] / A[2][2], b2 = A[3][4] / A[3][3];
  CHECK(f.pieces[0].A == doctest::Approx(a1).epsilon(1e-12));
  CHECK(f.pieces[0].B == doctest::Approx(b1).epsilon(1e-12));
  CHECK(f.pieces[1].A == doctest::Approx(a2).epsilon(1e-12));
  CHECK(f.pieces[1].B == doctest::Approx(b2).epsilon(1e-12));
}

TEST_CASE("flux mode satisfies its gluing equations on random profiles") {
  std::mt19937 rng(2718);
  std::uniform_int_distribution<int> npieces(1, 16);
  std::uniform_real_distribution<double> kdist(0.1, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const StepProfile sp = random_step(rng, -1.0, npieces(rng), 0.5, 4.0);
    const DomainSpec dom(-1.0, 0.25, 4.5);
    const double k = kdist(rng);
    const PiecewiseExponential f =
        solve_step_interior(ProblemSpec(dom, sp, k, InterfaceModel::flux));
    CHECK(flux_conditions_residual(f, sp, k) < 1e-11);
  }
}

TEST_CASE("boundary_side_data in smooth mode") {
  const DomainSpec dom(-1.0, 2.0, 3.0);
  const StepProfile sp({-1.0, 0.0}, {1.0});  // m_1 = m_N = 1
  const ProblemSpec spec(dom, sp, 2.0);
  const PiecewiseExponential f = solve_step_interior(spec);

  const BoundarySideData db = boundary_side_data(f, spec, Side::b);
  CHECK(db.f_val == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(db.fx_minus == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(db.fx_plus == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(db.m_minus == 1.0);
  CHECK(db.m_plus == 3.0);
  CHECK(db.E == doctest::Approx(2.0 * (3.0 - 1.0)).epsilon(1e-14));

  const BoundarySideData da = boundary_side_data(f, spec, Side::a);
  const double fa = std::exp(-2.0);
  CHECK(da.f_val == doctest::Approx(fa).epsilon(1e-13));
  // No derivative jump at a: both one-sided derivatives equal k f(a).
  CHECK(da.fx_minus == doctest::Approx(2.0 * fa).epsilon(1e-13));
  CHECK(da.fx_plus == doctest::Approx(2.0 * fa).epsilon(1e-13));
  CHECK(da.m_minus == 2.0);
  CHECK(da.m_plus == 1.0);
}

TEST_CASE("compatibility_V closed-form values") {
  SUBCASE("side a gives -k for any jump") {
    const DomainSpec dom(-1.0, 1.0, 3.0);
    const StepProfile sp({-1.0, 0.0}, {2.0});
    for (double k : {0.5, 1.0, 7.0}) {
      const ProblemSpec spec(dom, sp, k);
      const PiecewiseExponential f = solve_step_interior(spec);
      const double va = compatibility_V(boundary_side_data(f, spec, Side::a), k);
      CHECK(va == doctest::Approx(-k).epsilon(1e-12));
    }
  }
  SUBCASE("side b: m_N=1, m_R=3, k=2 gives 1") {
    const DomainSpec dom(-1.0, 2.0, 3.0);
    const StepProfile sp({-1.0, 0.0}, {1.0});
    const ProblemSpec spec(dom, sp, 2.0);
    const PiecewiseExponential f = solve_step_interior(spec);
    const double vb = compatibility_V(boundary_side_data(f, spec, Side::b), 2.0);
    CHECK(vb == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("scaling f leaves V unchanged") {
    const DomainSpec dom(-1.0, 1.0, 3.0);
    const StepProfile sp({-1.0, 0.0}, {2.0});
    const ProblemSpec spec(dom, sp, 2.0);
    const PiecewiseExponential f = solve_step_interior(spec);
    for (Side side : {Side::a, Side::b}) {
      BoundarySideData data = boundary_side_data(f, spec, side);
      const double v0 = compatibility_V(data, 2.0);
      for (double c : {2.0, -0.5}) {
        BoundarySideData scaled = data;
        scaled.f_val *= c;
        scaled.fx_minus *= c;
        scaled.fx_plus *= c;
        CHECK(compatibility_V(scaled, 2.0) == doctest::Approx(v0).epsilon(1e-14));
      }
    }
  }
  SUBCASE("zero denominator is reported") {
    BoundarySideData data{};
    data.f_val = 1.0;
    data.fx_minus = 1.0;
    data.fx_plus = 1.0;
    data.m_minus = 2.0;
    data.m_plus = 2.0;
    data.E = 1.0;
    CHECK_THROWS_AS(compatibility_V(data, 1.0), ZeroDenominator);
  }
}

TEST_CASE("asymptotic ratios") {
  CHECK(asymptotic_V_a(3.7, 2.0, 1.0) == doctest::Approx(-3.7).epsilon(1e-15));
  CHECK(asymptotic_V_a(3.7, 0.4, 1.0) == doctest::Approx(-3.7).epsilon(1e-15));
  CHECK_THROWS_AS(asymptotic_V_a(1.0, 2.0, 2.0), DegenerateJump);
  CHECK(asymptotic_V_b(2.0, 1.0, 3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(asymptotic_V_b(5.0, 3.0, 3.0) == 0.0);
}

TEST_CASE("nonexistence certificate on fixed instances") {
  SUBCASE("k=2, m_N=1, m_R=3") {
    const DomainSpec dom(-1.0, 2.0, 3.0);
    const StepProfile sp({-1.0, 0.0}, {1.0});
    const CompatibilityReport rep =
        nonexistence_certificate(ProblemSpec(dom, sp, 2.0));
    CHECK(rep.V_a == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(rep.V_b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.residual == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(rep.closed_form_residual == doctest::Approx(-3.0).epsilon(1e-15));
    CHECK_FALSE(rep.eigenvalue_exists);
    CHECK(rep.lambda_a == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(rep.lambda_b == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.lambda_a * rep.V_a == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rep.lambda_b * rep.V_b == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(rep.m_R_for_zero_residual) < 1e-12);
  }
  SUBCASE("k=1, m_N=1, m_R=1") {
    const DomainSpec dom(-1.0, 2.0, 1.0);
    const StepProfile sp({-1.0, 0.0}, {1.0});
    const CompatibilityReport rep =
        nonexistence_certificate(ProblemSpec(dom, sp, 1.0));
    CHECK(rep.residual == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rep.closed_form_residual == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_FALSE(rep.eigenvalue_exists);
  }
  SUBCASE("degenerate left jump is fatal") {
    const DomainSpec dom(-1.0, 2.0, 3.0);
    const StepProfile sp({-1.0, 0.0}, {2.0});  // m_1 = m_L = 2
    CHECK_THROWS_AS(nonexistence_certificate(ProblemSpec(dom, sp, 2.0)),
                    DegenerateJump);
  }
}

TEST_CASE("smooth-mode universality over random step profiles") {
  std::mt19937 rng(424242);
  std::uniform_int_distribution<int> npieces(1, 16);
  std::uniform_real_distribution<double> mdist(0.5, 4.0);
  int accepted = 0;
  while (accepted < 120) {
    const int N = npieces(rng);
    const StepProfile sp = random_step(rng, -1.0, N, 0.5, 4.0);
    const double m_L = mdist(rng);
    const double m_R = mdist(rng);
    if (std::abs(sp.first_value() - m_L) < 1e-6) continue;
    const DomainSpec dom(-1.0, m_L, m_R);
    for (double k : {0.1, 1.0, 10.0}) {
      const ProblemSpec spec(dom, sp, k, InterfaceModel::smooth);
      const CompatibilityReport rep = nonexistence_certificate(spec);
      // V_a is -k to 1e-10 relative.
      CHECK(std::abs(rep.V_a + k) <= 1e-10 * k);
      // Residual identity to 1e-12 relative.
      const double closed = -2.0 * k * m_R / (sp.last_value() + m_R);
      CHECK(std::abs(rep.residual - closed) <= 1e-12 * std::abs(closed));
      // Strict non-existence.
      CHECK(rep.residual < 0.0);
      CHECK_FALSE(rep.eigenvalue_exists);
      CHECK(std::abs(rep.m_R_for_zero_residual) <= 1e-12);
    }
    ++accepted;
  }
}
