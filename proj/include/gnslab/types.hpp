#ifndef GNSLAB_TYPES_HPP
#define GNSLAB_TYPES_HPP

#include <complex>
#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace gnslab {

using cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<cplx>;
using SpMatRow = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using SpVec = Eigen::SparseVector<cplx>;

// Shared tolerance knobs.  All thresholds are relative: each check scales its
// tolerance by the magnitude of the data it inspects.
struct Tolerances {
  double axiom = 1e-10;        // algebra axiom residuals, condition checks
  double rank_cutoff = 1e-10;  // eigenvalue cutoff for numerical rank
  double range_tol = 1e-8;     // range-membership residual for boundedness
  double residual = 1e-8;      // representation / report residual budget
};

}  // namespace gnslab

#endif
