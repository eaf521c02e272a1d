#include "gnslab/gns.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gnslab {

namespace {

double frobenius(const Mat& m) { return m.size() == 0 ? 0.0 : m.norm(); }

}  // namespace

GNSRep build_gns(const QuasiAlgebraSpec& spec, const Functional& omega,
                 const Tolerances& tol) {
  GNSRep rep;
  rep.model = &spec;
  rep.omega = omega;
  rep.gram = gram(spec, omega, tol);

  {
    const ConditionEntry l1 = check_L1(rep.gram, tol);
    if (l1.status == Status::Fails)
      throw PreconditionError("L1",
                              "build_gns: the Gram form is not positive "
                              "semidefinite; " + l1.note,
                              l1.witness);
    const ConditionEntry l2 = check_L2(spec, omega, tol);
    if (l2.status == Status::Fails)
      throw PreconditionError("L2", "build_gns: " + l2.note, l2.witness);
    const ConditionEntry l3 = check_L3_all(spec, omega, tol);
    if (l3.status == Status::Fails)
      throw PreconditionError("L3", "build_gns: " + l3.note, l3.witness);
  }

  rep.triples = triple_form(spec, omega);
  const HermitianEig& eig = rep.gram.eig;
  const int d = eig.rank;
  rep.quotient_dim = d;
  const Mat u_plus = eig.eigenvectors.leftCols(d);
  const RVec lam = eig.eigenvalues.head(d);
  rep.coord_map = lam.cwiseSqrt().asDiagonal() * u_plus.adjoint();
  rep.lift = u_plus * lam.cwiseSqrt().cwiseInverse().asDiagonal();

  // Well-definedness: operators must annihilate the null ideal, i.e.
  // T(f_p) n = 0 for every kernel vector n (each entry is omega(e_i*(f_p n))
  // which vanishes under (L.1)+(L.3) in exact arithmetic).
  const Mat& kernel = rep.gram.null_basis;
  if (kernel.cols() > 0) {
    double scale = std::max(eig.max_abs_eigenvalue(), 1e-300);
    double worst = 0.0;
    for (int p = 0; p < spec.ambient_dim(); ++p) {
      const Mat tp = rep.triples.t_matrix_basis(p);
      scale = std::max(scale, tp.size() ? tp.cwiseAbs().maxCoeff() : 0.0);
      const Mat img = tp * kernel;
      worst = std::max(worst, img.size() ? img.cwiseAbs().maxCoeff() : 0.0);
    }
    rep.welldef_residual = worst;
    if (worst > tol.residual * scale) {
      std::ostringstream os;
      os << "build_gns: a multiplication operator moves the null ideal out "
            "of itself (residual "
         << worst << " against scale " << scale
         << "); the quotient action is not well defined";
      throw ConsistencyError(os.str());
    }
  }
  return rep;
}

Mat represent(const GNSRep& rep, const Element& x) {
  const Vec xi = ambient_coords(*rep.model, x);
  return rep.lift.adjoint() * rep.triples.t_matrix(xi) * rep.lift;
}

GnsVerification verify_gns(const GNSRep& rep, const Tolerances& tol) {
  GnsVerification v;
  const QuasiAlgebraSpec& spec = *rep.model;
  const int m = spec.ambient_dim();
  const int k = spec.core_dim();

  std::vector<Mat> pis(m);
  double scale = 0.0;
  for (int p = 0; p < m; ++p) {
    const Mat tp = rep.triples.t_matrix_basis(p);
    pis[p] = rep.lift.adjoint() * tp * rep.lift;
    scale = std::max(scale, tp.size() ? tp.cwiseAbs().maxCoeff() : 0.0);

    // omega(e_i*(f_p e_j)) vs the quotient pairing
    // <pi(f_p) lambda(e_j), lambda(e_i)> = (coord_map^dagger pi coord_map)_ij.
    const Mat paired = rep.coord_map.adjoint() * pis[p] * rep.coord_map;
    const Mat diff = tp - paired;
    v.pairing_residual = std::max(
        v.pairing_residual, diff.size() ? diff.cwiseAbs().maxCoeff() : 0.0);

    // pi(f_p*) agrees with pi(f_p)^dagger.
    const Mat pistar = rep.lift.adjoint() *
                       rep.triples.t_matrix(spec.star_ambient.col(p)) *
                       rep.lift;
    v.star_residual =
        std::max(v.star_residual, frobenius(pistar - pis[p].adjoint()));

    v.operator_norms.push_back(operator_norm(rep, ambient_basis_element(spec, p)));
  }

  std::vector<Mat> pic(k);
  for (int i = 0; i < k; ++i)
    pic[i] = rep.lift.adjoint() *
             rep.triples.t_matrix(spec.inclusion.col(i)) * rep.lift;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      Mat prod = Mat::Zero(rep.quotient_dim, rep.quotient_dim);
      for (SpMatRow::InnerIterator it(spec.core.mult.flat(), i * k + j); it;
           ++it)
        prod += it.value() * pic[it.col()];
      v.homomorphism_residual =
          std::max(v.homomorphism_residual, frobenius(pic[i] * pic[j] - prod));
    }

  v.scale = std::max(scale, 1.0);
  v.holds = v.pairing_residual <= tol.residual * v.scale &&
            v.star_residual <= tol.residual * v.scale &&
            v.homomorphism_residual <= tol.residual * v.scale;
  return v;
}

Vec riesz_vector(const GNSRep& rep, const Tolerances& tol) {
  const QuasiAlgebraSpec& spec = *rep.model;
  const Vec u_h = (spec.inclusion.transpose() * rep.omega.weights).conjugate();
  const BoundednessResult hb =
      constrained_sup(rep.gram.eig, u_h, tol.range_tol);
  if (!hb.bounded)
    throw PreconditionError(
        "HB",
        "riesz_vector: the core restriction is not bounded against the Gram "
        "form; no representing vector exists",
        hb.witness);
  return rep.lift.adjoint() * u_h;
}

VectorFormReport verify_vector_form(const GNSRep& rep, const Vec& xi,
                                    const Tolerances& tol) {
  if (xi.size() != rep.quotient_dim)
    throw StructuralError("verify_vector_form: vector is not in the quotient");
  const QuasiAlgebraSpec& spec = *rep.model;
  VectorFormReport r;
  for (int p = 0; p < spec.ambient_dim(); ++p) {
    const Mat pi = rep.lift.adjoint() * rep.triples.t_matrix_basis(p) * rep.lift;
    const cplx form = xi.dot(pi * xi);  // <pi(f_p) xi, xi>
    r.residual = std::max(r.residual, std::abs(rep.omega.weights(p) - form));
  }
  r.scale = std::max(1.0, rep.omega.weights.size()
                              ? rep.omega.weights.cwiseAbs().maxCoeff()
                              : 0.0);
  r.holds = r.residual <= tol.residual * r.scale;
  return r;
}

int cyclic_span_dim(const GNSRep& rep, const Vec& xi, const Tolerances& tol) {
  if (xi.size() != rep.quotient_dim)
    throw StructuralError("cyclic_span_dim: vector is not in the quotient");
  if (rep.quotient_dim == 0) return 0;
  const QuasiAlgebraSpec& spec = *rep.model;
  const int k = spec.core_dim();
  Mat span(rep.quotient_dim, k + 1);
  span.col(0) = xi;
  for (int i = 0; i < k; ++i) {
    const Mat pi = rep.lift.adjoint() *
                   rep.triples.t_matrix(spec.inclusion.col(i)) * rep.lift;
    span.col(i + 1) = pi * xi;
  }
  const HermitianEig eig =
      hermitian_eig(span * span.adjoint(), tol.rank_cutoff);
  return eig.rank;
}

double operator_norm(const GNSRep& rep, const Element& x) {
  const Mat pi = represent(rep, x);
  if (pi.size() == 0) return 0.0;
  const HermitianEig eig = hermitian_eig(pi.adjoint() * pi, 1e-14);
  return std::sqrt(std::max(eig.eigenvalues(0), 0.0));
}

}  // namespace gnslab
