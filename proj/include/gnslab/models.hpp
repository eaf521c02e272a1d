#ifndef GNSLAB_MODELS_HPP
#define GNSLAB_MODELS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gnslab/functional.hpp"

namespace gnslab {

// A ready-made model/functional pair.  `expected` records which conditions
// hold for the infinite-dimensional original that the model truncates, so
// sweeps can contrast finite behaviour against the limit.
struct ModelBundle {
  QuasiAlgebraSpec spec;
  Functional omega;
  std::string name;
  std::map<std::string, double> parameters;
  std::map<std::string, bool> expected;
};

// Componentwise sequences of length N summed by omega; the core spans the
// first K coordinates.  Unital exactly when K = N.
ModelBundle model_ell2(int n, int k);

// Functions on a uniform grid over [a, b] under the quadrature functional
// h * sum; the core consists of functions vanishing at both endpoints.
ModelBundle model_grid_integral(double a, double b, int points);

// Same grid algebra, omega = evaluation at the node 0 (which must be a
// strictly interior grid point).
ModelBundle model_pointeval(double a, double b, int points);

// Functions on two points {p, q} with core spanned by the indicator of p
// and omega(f) = f(p) + f(q).  The smallest model on which the extended
// bound condition fails while everything else holds.
ModelBundle model_two_points();

// Full d x d matrix algebra over the corner core supported on the leading
// (d-1) x (d-1) block; omega is a random positive combination of vector
// states, seed-deterministic.  With `states_in_core` the state vectors are
// drawn inside the corner subspace, which makes the extended bound
// condition hold; with full-space states it fails on the border units.
ModelBundle model_matrix_corner(int d, std::uint64_t seed,
                                bool states_in_core = false);

// Exact continuum moments of the unit-plateau tent of half-width n with
// ramps of width 1/n: i1 = integral, i2 = integral of the square.
struct TentMoments {
  double i1 = 0.0;
  double i2 = 0.0;
};
TentMoments tent_moments(int n);

// The flat bump of height 1/sqrt(2n) on [-n, n]: integral and squared
// 2-norm (exactly 1).
struct Sqrt2nValues {
  double norm1 = 0.0;
  double norm2sq = 0.0;
};
Sqrt2nValues sqrt2n_family(int n);

enum class SweepFamily { Ell2, Tent, Sqrt2n, Pointeval };

SweepFamily parse_family(const std::string& name);
std::string family_name(SweepFamily family);

// One row per size.  NaN marks columns without finite-model content; the
// closed-form families (tent, sqrt2n) report witnessed lower bounds instead
// of Gram suprema and carry ehb_status "n/a".
struct SweepRow {
  std::string family;
  int size = 0;
  double hilbert_bound = 0.0;
  std::string ehb_status;
  double ehb_zeta_sq = 0.0;
  double canonical_ratio = 0.0;
  double gamma_min = 0.0;
};

// Runs the family at every size (parallel across sizes, capped by the
// GNSLAB_THREADS environment variable) and asserts the divergence the
// family is known for: strictly increasing ratios for tent, sqrt2n and
// ell2 when the sizes are ascending.
std::vector<SweepRow> sweep(SweepFamily family, const std::vector<int>& sizes,
                            const Tolerances& tol = {});

}  // namespace gnslab

#endif
