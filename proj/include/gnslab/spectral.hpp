#ifndef GNSLAB_SPECTRAL_HPP
#define GNSLAB_SPECTRAL_HPP

#include <cstdint>
#include <string>

#include "gnslab/errors.hpp"
#include "gnslab/types.hpp"

namespace gnslab {

// Hermitian eigendecomposition with a relative numerical-rank cutoff.
//
// Eigenvalues are sorted descending; eigenvectors form a unitary matrix whose
// column order matches.  Degenerate eigenspaces are re-based by projecting
// coordinate axes in ascending index order (Gram-Schmidt), and every column's
// phase is fixed so its largest entry is real positive, so the decomposition
// of a given matrix is reproducible down to the bit pattern.
struct HermitianEig {
  RVec eigenvalues;  // descending
  Mat eigenvectors;  // unitary, columns aligned with eigenvalues
  int rank = 0;      // #{ lambda_i > rank_cutoff * max(lambda_max, tiny) }
  double rank_cutoff = 0.0;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  double max_abs_eigenvalue() const;

  // First `rank` columns: orthonormal basis of the numerical range.
  Mat range_basis() const { return eigenvectors.leftCols(rank); }
  // Remaining columns: orthonormal basis of the numerical kernel.
  Mat kernel_basis() const { return eigenvectors.rightCols(dim() - rank); }

  Vec pinv_apply(const Vec& u) const;        // H^+ u
  Vec project_range(const Vec& u) const;     // H H^+ u
  double range_residual(const Vec& u) const; // ||u - H H^+ u||_2
  // Lambda_+^{-1/2} U_+^dagger M  (whitening against the positive part).
  Mat pinv_sqrt_apply(const Mat& m) const;
};

// Decomposes the Hermitian part of `h`.  Throws DataError when the
// anti-Hermitian part exceeds `herm_tol * max|h|`.
HermitianEig hermitian_eig(const Mat& h, double rank_cutoff = 1e-10,
                           double herm_tol = 1e-10);

// Outcome of a quadratically-constrained supremum.  When bounded, `witness`
// attains the value on the constraint surface (zero vector if the value is
// zero); when unbounded, `witness` is a unit constraint-null direction with
// nonzero objective, so it replays the divergence directly.
struct BoundednessResult {
  bool bounded = false;
  double value = 0.0;
  Vec witness;
  std::string witness_kind;  // "optimizer" | "null-direction" | refined labels
};

// sup { |u^dagger a|^2 : a^dagger G a = 1 } for PSD G.
//
// Bounded iff u lies in range(G) up to `range_tol * max(||u||, scale_floor)`;
// the value is then u^dagger G^+ u.  `scale_floor` lets callers whose u is a
// compressed intermediate (so that ||u|| itself may be rounding noise) anchor
// the test to the scale of the source data; 0 keeps the test relative to u.
// The G = 0 edge follows the same rule: bounded with value 0 when u = 0,
// unbounded otherwise.  Throws DataError when G has an eigenvalue below
// -psd_tol * max|lambda|.
BoundednessResult constrained_sup(const Mat& g, const Vec& u,
                                  const Tolerances& tol = {});
BoundednessResult constrained_sup(const HermitianEig& eig, const Vec& u,
                                  double range_tol, double scale_floor = 0.0);

// Monte-Carlo lower bound for the same supremum: random directions scaled
// onto the constraint surface.  Deterministic for a fixed (samples, seed).
// Kept deliberately independent of the pseudoinverse formula so the two
// routes cross-check each other.  Throws DataError when G = 0 (the constraint
// surface is empty).
double brute_force_sup(const Mat& g, const Vec& u, std::int64_t samples,
                       std::uint64_t seed);

}  // namespace gnslab

#endif
