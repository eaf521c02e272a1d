#ifndef GNSLAB_ALGEBRA_HPP
#define GNSLAB_ALGEBRA_HPP

#include <string>
#include <vector>

#include "gnslab/errors.hpp"
#include "gnslab/types.hpp"

namespace gnslab {

// Structure constants of a finite *-algebra: mult(i,j) is the coordinate
// vector of e_i e_j.  Stored sparsely (row (i*k + j) of a (k^2 x k) matrix)
// because the models of interest are diagonal or matrix-unit algebras whose
// tensors are overwhelmingly zero.
class MultTensor {
 public:
  struct Entry {
    int i, j, l;
    cplx value;
  };

  MultTensor() = default;
  MultTensor(int k, const std::vector<Entry>& entries);

  int dim() const { return k_; }
  const SpMatRow& flat() const { return data_; }

  // Sparse coordinate row of e_i e_j.
  SpVec row(int i, int j) const;
  bool row_empty(int i, int j) const;

  // Coordinates of (sum_i a_i e_i)(sum_j b_j e_j); bilinear.
  Vec product(const Vec& a, const Vec& b) const;

  // M with column j = coordinates of b e_j (left multiplication by b).
  Mat left_matrix(const Vec& b) const;

  std::vector<Entry> entries() const;

 private:
  int k_ = 0;
  SpMatRow data_;  // (k*k) x k
};

struct StarAlgebraSpec {
  int dim_core = 0;
  MultTensor mult;
  Mat star_core;  // involution acts as  xi -> star_core * conj(xi)
};

// A finite model of a quasi *-algebra (A, A0): an ambient involutive space A
// of dimension m, a *-algebra core A0 of dimension k, an inclusion J of the
// core into the ambient space, and the A0-bimodule actions on A.  Products of
// two general ambient elements are deliberately not representable.
struct QuasiAlgebraSpec {
  int dim_ambient = 0;
  StarAlgebraSpec core;
  Mat inclusion;     // m x k, injective
  Mat star_ambient;  // m x m, x -> star_ambient * conj(x)
  std::vector<SpMat> left_action;   // k matrices, L_i x = e_i . x
  std::vector<SpMat> right_action;  // k matrices, R_j x = x . e_j
  bool has_unit = false;
  Vec unit;  // ambient coordinates, present iff has_unit

  int ambient_dim() const { return dim_ambient; }
  int core_dim() const { return core.dim_core; }
  Vec embed(const Vec& core_coords) const { return inclusion * core_coords; }
};

enum class Space { Ambient, Core };

struct Element {
  Vec coords;
  Space space = Space::Ambient;
};

Element core_element(const Vec& coords);
Element ambient_element(const Vec& coords);
Element core_basis_element(const QuasiAlgebraSpec& spec, int i);
Element ambient_basis_element(const QuasiAlgebraSpec& spec, int p);
// Ambient coordinates of an element of either space.
Vec ambient_coords(const QuasiAlgebraSpec& spec, const Element& x);

struct Violation {
  std::string axiom;
  std::vector<int> indices;
  double residual = 0.0;
};

struct ValidationReport {
  bool passed = true;
  std::vector<Violation> violations;
  double tol = 0.0;    // absolute threshold actually applied
  double scale = 1.0;  // largest tensor magnitude the threshold was scaled by
};

// Checks associativity, involutivity of the star, and the anti-multiplicative
// law (xy)* = y* x* on the core basis.  Residuals are compared against
// tol * max(largest tensor magnitude, 1).
ValidationReport validate_star_algebra(const StarAlgebraSpec& spec,
                                       double tol = 1e-10);

// Core axioms plus the module laws binding the core to the ambient space:
//   J intertwines products:  J(e_i e_j) = L_i J(e_j) = R_j J(e_i)
//   actions are module maps: L_{e_i e_j} = L_i L_j,  R_{e_i e_j} = R_j R_i,
//                            L_i R_j = R_j L_i
//   the involution exchanges the actions: (e_i x)* = x* e_i*
//   the unit, when declared, lies in the core image and acts as identity.
// Throws StructuralError on shape mismatches or a non-injective inclusion.
ValidationReport validate_quasi_algebra(const QuasiAlgebraSpec& spec,
                                        double tol = 1e-10);

// Product of two core elements, computed in the core.
Element mult_core(const QuasiAlgebraSpec& spec, const Element& a,
                  const Element& b);

enum class Side { Left, Right };

// Module action of core element a on ambient element x: a.x or x.a.
Element act(const QuasiAlgebraSpec& spec, const Element& a, const Element& x,
            Side side);

// Involution in the element's own space.
Element star(const QuasiAlgebraSpec& spec, const Element& x);

// Adjoin a unit: A^e = A + C with (x,l)(a,m) = (xa + m x + l a, l m) and
// (x,l)* = (x*, conj l).  The first m (resp. k) coordinates embed the
// original spec; its tensors reappear bit for bit as sub-blocks.
QuasiAlgebraSpec unitize(const QuasiAlgebraSpec& spec);

}  // namespace gnslab

#endif
