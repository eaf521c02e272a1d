#ifndef GNSLAB_GNS_HPP
#define GNSLAB_GNS_HPP

#include <vector>

#include "gnslab/functional.hpp"

namespace gnslab {

// Quotient representation of the core by the null ideal N = ker(G), carried
// in orthonormal coordinates:  lambda(a) = coord_map * alpha  is a vector in
// C^d, d = rank(G), with <lambda(a), lambda(b)> = beta^dagger G alpha.
// coord_map = Lambda_+^{1/2} U_+^dagger and lift = U_+ Lambda_+^{-1/2} is its
// right inverse on the range.  The model must outlive the representation.
struct GNSRep {
  const QuasiAlgebraSpec* model = nullptr;
  Functional omega;
  GramData gram;
  TripleForm triples;
  int quotient_dim = 0;
  Mat coord_map;  // d x k
  Mat lift;       // k x d
  double welldef_residual = 0.0;
};

// Quotient construction.  Refuses (PreconditionError) unless (L.1), (L.2)
// and (L.3) all hold; then verifies that every operator annihilates the null
// ideal (ConsistencyError above tolerance, recorded in welldef_residual).
GNSRep build_gns(const QuasiAlgebraSpec& spec, const Functional& omega,
                 const Tolerances& tol = {});

// d x d matrix of x acting on the quotient: lift^dagger T(x) lift.
// Linear in x; pi(core a) multiplies, pi(x*) = pi(x)^dagger.
Mat represent(const GNSRep& rep, const Element& x);

struct GnsVerification {
  // max |omega(e_i* (f_p e_j)) - <pi(f_p) lambda(e_j), lambda(e_i)>|
  double pairing_residual = 0.0;
  // max_p ||pi(f_p*) - pi(f_p)^dagger||_F
  double star_residual = 0.0;
  // max over core basis pairs ||pi(a)pi(b) - pi(ab)||_F
  double homomorphism_residual = 0.0;
  double scale = 1.0;
  bool holds = false;
  std::vector<double> operator_norms;  // ||pi(f_p)||_2 per ambient basis
};

GnsVerification verify_gns(const GNSRep& rep, const Tolerances& tol = {});

// Quotient vector xi with <lambda(a), xi> = omega(J a) for all core a.
// Requires the restriction of omega to the core to be bounded against the
// Gram form (PreconditionError with witness otherwise); the squared norm of
// the result equals that bound's value.
Vec riesz_vector(const GNSRep& rep, const Tolerances& tol = {});

struct VectorFormReport {
  double residual = 0.0;
  double scale = 1.0;
  bool holds = false;
};

// Checks omega(f_p) = <pi(f_p) xi, xi> over the ambient basis.  Meaningful
// when the model carries a unit and xi is the class of a cyclic vector.
VectorFormReport verify_vector_form(const GNSRep& rep, const Vec& xi,
                                    const Tolerances& tol = {});

// Rank of span{xi} + span{pi(J e_i) xi : core basis i}.
int cyclic_span_dim(const GNSRep& rep, const Vec& xi,
                    const Tolerances& tol = {});

double operator_norm(const GNSRep& rep, const Element& x);

}  // namespace gnslab

#endif
