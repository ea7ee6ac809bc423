#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "evbc/errors.hpp"

namespace evbc {

// Uniform grid of M+1 nodes on [a, 0], indexed right to left exactly as the
// node numbering of the discrete problem:  a = x_M < ... < x_1 < x_0 = b = 0,
// x_{i-1} - x_i = d.
struct Grid {
  int M;                      // number of intervals, >= 2
  double d;                   // spacing, d = -a/M
  std::vector<double> nodes;  // nodes[i] = x_i = -i*d

  double a() const { return nodes.back(); }
};

inline Grid build_grid(double a, int M) {
  if (!(a < 0.0)) throw InvalidDomain("build_grid: a must be negative");
  if (M < 2) throw InvalidDomain("build_grid: M must be >= 2");
  Grid g;
  g.M = M;
  g.d = -a / static_cast<double>(M);
  g.nodes.resize(static_cast<std::size_t>(M) + 1);
  for (int i = 0; i <= M; ++i)
    g.nodes[static_cast<std::size_t>(i)] = -(static_cast<double>(i) * g.d);
  return g;
}

// Nodal values (f_0, ..., f_M); f_0 = f(b), f_M = f(a).
using DiscreteVector = std::vector<double>;

// Real tridiagonal matrix stored by bands.  sub[i] is entry (i+1, i),
// diag[i] is (i, i), super[i] is (i, i+1).
class TriMatrix {
 public:
  explicit TriMatrix(int order)
      : n_(order),
        sub_(order > 0 ? static_cast<std::size_t>(order - 1) : 0, 0.0),
        diag_(static_cast<std::size_t>(order), 0.0),
        super_(order > 0 ? static_cast<std::size_t>(order - 1) : 0, 0.0) {
    if (order < 1) throw Error("TriMatrix: order must be >= 1");
  }

  int order() const { return n_; }

  double& sub(int i) { return sub_[static_cast<std::size_t>(i)]; }
  double& diag(int i) { return diag_[static_cast<std::size_t>(i)]; }
  double& super(int i) { return super_[static_cast<std::size_t>(i)]; }
  double sub(int i) const { return sub_[static_cast<std::size_t>(i)]; }
  double diag(int i) const { return diag_[static_cast<std::size_t>(i)]; }
  double super(int i) const { return super_[static_cast<std::size_t>(i)]; }

  // Entry (i, j); structurally zero outside the three bands.
  double at(int i, int j) const {
    if (i == j) return diag(i);
    if (j == i - 1) return sub(j);
    if (j == i + 1) return super(i);
    return 0.0;
  }

  double trace() const {
    double t = 0.0;
    for (double v : diag_) t += v;
    return t;
  }

  DiscreteVector apply(const DiscreteVector& f) const {
    if (static_cast<int>(f.size()) != n_)
      throw Error("TriMatrix::apply: size mismatch");
    DiscreteVector out(f.size(), 0.0);
    for (int i = 0; i < n_; ++i) {
      double v = diag(i) * f[static_cast<std::size_t>(i)];
      if (i > 0) v += sub(i - 1) * f[static_cast<std::size_t>(i - 1)];
      if (i < n_ - 1) v += super(i) * f[static_cast<std::size_t>(i + 1)];
      out[static_cast<std::size_t>(i)] = v;
    }
    return out;
  }

 private:
  int n_;
  std::vector<double> sub_, diag_, super_;
};

class DiagMatrix {
 public:
  explicit DiagMatrix(int order) : diag_(static_cast<std::size_t>(order), 0.0) {
    if (order < 1) throw Error("DiagMatrix: order must be >= 1");
  }

  int order() const { return static_cast<int>(diag_.size()); }
  double& diag(int i) { return diag_[static_cast<std::size_t>(i)]; }
  double diag(int i) const { return diag_[static_cast<std::size_t>(i)]; }

 private:
  std::vector<double> diag_;
};

}  // namespace evbc
