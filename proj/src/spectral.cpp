#include "gnslab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace gnslab {

namespace {

double max_abs(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Rotate each column so its largest-magnitude entry is real positive.
void canonicalize_phases(Mat& u) {
  for (int c = 0; c < u.cols(); ++c) {
    int imax = 0;
    double best = -1.0;
    for (int r = 0; r < u.rows(); ++r) {
      double a = std::abs(u(r, c));
      if (a > best) {
        best = a;
        imax = r;
      }
    }
    if (best <= 0.0) continue;
    cplx pivot = u(imax, c);
    u.col(c) *= std::conj(pivot) / std::abs(pivot);
  }
}

// Replace each block of (numerically) equal eigenvalues by the basis obtained
// from projecting coordinate axes e_0, e_1, ... onto the eigenspace and
// Gram-Schmidt-ing in that order.  A unitary change within a block preserves
// the decomposition, so this only pins down the representative.
void canonicalize_degenerate_blocks(const RVec& vals, Mat& u, double scale) {
  const int n = static_cast<int>(vals.size());
  const double block_tol = 1e-13 * std::max(scale, 1e-300);
  int i = 0;
  while (i < n) {
    int j = i + 1;
    while (j < n && std::abs(vals(j) - vals(i)) <= block_tol) ++j;
    if (j - i > 1) {
      Mat b = u.middleCols(i, j - i);
      Mat fixed(u.rows(), j - i);
      int filled = 0;
      for (int axis = 0; axis < u.rows() && filled < j - i; ++axis) {
        Vec v = b * (b.adjoint().col(axis));  // project e_axis onto the block
        for (int c = 0; c < filled; ++c)
          v -= fixed.col(c) * (fixed.col(c).adjoint() * v);
        double nrm = v.norm();
        if (nrm > 1e-6) fixed.col(filled++) = v / nrm;
      }
      if (filled == j - i) u.middleCols(i, j - i) = fixed;
    }
    i = j;
  }
}

}  // namespace

double HermitianEig::max_abs_eigenvalue() const {
  return eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
}

Vec HermitianEig::pinv_apply(const Vec& u) const {
  Vec y = Vec::Zero(u.size());
  for (int i = 0; i < rank; ++i) {
    const Vec col = eigenvectors.col(i);
    y += col * (col.dot(u) / eigenvalues(i));
  }
  return y;
}

Vec HermitianEig::project_range(const Vec& u) const {
  Vec y = Vec::Zero(u.size());
  for (int i = 0; i < rank; ++i) {
    const Vec col = eigenvectors.col(i);
    y += col * col.dot(u);
  }
  return y;
}

double HermitianEig::range_residual(const Vec& u) const {
  return (u - project_range(u)).norm();
}

Mat HermitianEig::pinv_sqrt_apply(const Mat& m) const {
  Mat w = eigenvectors.leftCols(rank).adjoint() * m;
  for (int i = 0; i < rank; ++i) w.row(i) /= std::sqrt(eigenvalues(i));
  return w;
}

HermitianEig hermitian_eig(const Mat& h, double rank_cutoff, double herm_tol) {
  if (h.rows() != h.cols())
    throw StructuralError("hermitian_eig: matrix is not square");
  const double scale = max_abs(h);
  const double asym = max_abs(h - h.adjoint());
  if (asym > herm_tol * std::max(scale, 1e-300)) {
    std::ostringstream os;
    os << "hermitian_eig: matrix is not Hermitian, max asymmetry " << asym
       << " exceeds " << herm_tol << " * " << scale;
    throw DataError(os.str());
  }

  HermitianEig out;
  out.rank_cutoff = rank_cutoff;
  const int n = static_cast<int>(h.rows());
  if (n == 0) {
    out.eigenvalues = RVec(0);
    out.eigenvectors = Mat(0, 0);
    return out;
  }

  Mat sym = 0.5 * (h + h.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(sym);
  if (solver.info() != Eigen::Success)
    throw ConsistencyError("hermitian_eig: eigensolver failed to converge");

  // Eigen returns ascending order; flip to descending.
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();

  canonicalize_degenerate_blocks(out.eigenvalues, out.eigenvectors,
                                 out.max_abs_eigenvalue());
  canonicalize_phases(out.eigenvectors);

  const double lam_max = out.eigenvalues(0);
  const double floor = std::numeric_limits<double>::min();
  const double cut = rank_cutoff * std::max(lam_max, floor);
  out.rank = 0;
  for (int i = 0; i < n; ++i)
    if (out.eigenvalues(i) > cut) ++out.rank;
  return out;
}

BoundednessResult constrained_sup(const HermitianEig& eig, const Vec& u,
                                  double range_tol, double scale_floor) {
  const double lam_min =
      eig.dim() == 0 ? 0.0 : eig.eigenvalues(eig.dim() - 1);
  if (lam_min < -eig.rank_cutoff * std::max(eig.max_abs_eigenvalue(), 1e-300)) {
    std::ostringstream os;
    os << "constrained_sup: constraint matrix is not PSD, most negative "
          "eigenvalue "
       << lam_min;
    throw DataError(os.str());
  }

  BoundednessResult res;
  const double unorm = std::max(u.norm(), scale_floor);
  const Vec defect = u - eig.project_range(u);
  if (defect.norm() > range_tol * unorm) {
    res.bounded = false;
    res.witness = defect / defect.norm();
    res.witness_kind = "null-direction";
    return res;
  }
  res.bounded = true;
  double value = 0.0;
  for (int i = 0; i < eig.rank; ++i) {
    const cplx proj = eig.eigenvectors.col(i).dot(u);
    value += std::norm(proj) / eig.eigenvalues(i);
  }
  res.value = value;
  if (value > 0.0) {
    res.witness = eig.pinv_apply(u) / std::sqrt(value);
    res.witness_kind = "optimizer";
  } else {
    res.witness = Vec::Zero(u.size());
    res.witness_kind = "optimizer";
  }
  return res;
}

BoundednessResult constrained_sup(const Mat& g, const Vec& u,
                                  const Tolerances& tol) {
  if (g.rows() != u.size())
    throw StructuralError("constrained_sup: dimension mismatch");
  return constrained_sup(hermitian_eig(g, tol.rank_cutoff), u, tol.range_tol);
}

double brute_force_sup(const Mat& g, const Vec& u, std::int64_t samples,
                       std::uint64_t seed) {
  if (g.rows() != g.cols() || g.rows() != u.size())
    throw StructuralError("brute_force_sup: dimension mismatch");
  if (max_abs(g) == 0.0)
    throw DataError("brute_force_sup: G = 0 has an empty constraint surface");

  // Draws alternate between raw Gaussian directions and directions that are
  // Gaussian in the metric of G (uniform over the constraint surface within
  // range(G)).  Raw draws keep kernel components in play; metric draws cover
  // badly conditioned Grams, where a raw direction almost never aligns with a
  // small eigenvalue.  Constraint and objective are always evaluated directly
  // from G and u, so every sample yields a true lower bound for the supremum
  // regardless of how the proposal was made.
  const HermitianEig eig = hermitian_eig(g);
  Mat surface_axes(g.rows(), 0);
  {
    int pos = 0;
    while (pos < eig.rank && eig.eigenvalues(pos) > 0.0) ++pos;
    surface_axes.resize(g.rows(), pos);
    for (int i = 0; i < pos; ++i)
      surface_axes.col(i) =
          eig.eigenvectors.col(i) / std::sqrt(eig.eigenvalues(i));
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const int n = static_cast<int>(g.rows());
  const int r = static_cast<int>(surface_axes.cols());
  Vec v(n), w(r);
  double best = 0.0;
  for (std::int64_t s = 0; s < samples; ++s) {
    if (s % 2 == 0 || r == 0) {
      for (int i = 0; i < n; ++i) v(i) = cplx(gauss(rng), gauss(rng));
    } else {
      for (int i = 0; i < r; ++i) w(i) = cplx(gauss(rng), gauss(rng));
      v.noalias() = surface_axes * w;
    }
    const double q = std::real(v.dot(g * v));
    if (!(q > 1e-300)) continue;  // direction (numerically) in the kernel
    const double obj = std::norm(u.dot(v)) / q;
    if (obj > best) best = obj;
  }
  return best;
}

}  // namespace gnslab
