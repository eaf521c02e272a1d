#ifndef GNSLAB_FUNCTIONAL_HPP
#define GNSLAB_FUNCTIONAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "gnslab/algebra.hpp"
#include "gnslab/spectral.hpp"
#include "gnslab/types.hpp"

namespace gnslab {

// A linear functional on the ambient space: omega(f_p) = weights(p), so
// omega(x) = weights . coords(x)  (plain transpose, no conjugation).
struct Functional {
  Vec weights;
};

cplx eval(const QuasiAlgebraSpec& spec, const Functional& omega,
          const Element& x);

// Sandwiched multiplication data: T(x)(i,j) = omega(e_i* (x e_j)), so that
// omega(b* (x a)) = beta^dagger T(x) alpha in core coordinates.  Row i of
// lstar holds the coefficients of y |-> omega(e_i* y); columns of T(x) only
// need the right action of e_j on x.  Keeps a pointer to the model, which
// must outlive the form.
struct TripleForm {
  const QuasiAlgebraSpec* spec = nullptr;
  Mat lstar;  // k x m

  Mat t_matrix(const Vec& ambient_xi) const;
  Mat t_matrix_basis(int p) const;
};

TripleForm triple_form(const QuasiAlgebraSpec& spec, const Functional& omega);

// Gram form of omega on the core: G(i,j) = omega(e_i* e_j), so that
// omega(a* b) = alpha^dagger G beta in core coordinates.  The eigensystem is
// taken of the Hermitian part; `herm_residual` records how non-Hermitian the
// raw matrix was (zero for hermitian functionals up to rounding).
struct GramData {
  Mat g;
  double herm_residual = 0.0;
  HermitianEig eig;
  Mat null_basis;  // orthonormal basis of the numerical kernel of G

  bool is_zero() const { return eig.max_abs_eigenvalue() == 0.0; }
};

GramData gram(const QuasiAlgebraSpec& spec, const Functional& omega,
              const Tolerances& tol = {});

// Quadratic form of the squared seminorm:  p_x(omega) = xi^dagger Q xi where
// xi are ambient coordinates of x and
//   p_x(omega) = sup { |omega(x* a)|^2 : a in core, omega(a* a) = 1 }.
// The identity holds on directions whose coupling vector u_xi = C xi lies in
// range(G); elsewhere the true supremum is infinite and l3_bound reports it.
// Also carries r with |omega(x*)| = |r^dagger xi| for the extended bound.
struct SeminormForm {
  Mat b;  // m x k, b(p,j) = omega(f_p . e_j)
  Mat c;  // k x m, conj(b^T star_ambient); u_xi = c * xi
  Vec r;  // star_ambient^T weights
  GramData gram;

  Vec coupling(const Vec& xi) const { return c * xi; }
  // Finite part of p_x; equals p_x exactly when coupling(xi) is in range(G).
  double p_value(const Vec& xi) const;
  // Q = C^dagger G^+ C, assembled on demand (m x m, exactly PSD).
  Mat q_matrix() const;
};

SeminormForm seminorm_form(const QuasiAlgebraSpec& spec,
                           const Functional& omega, const Tolerances& tol = {});

enum class Status { Holds, Fails, NotApplicable };

struct ConditionEntry {
  std::string name;
  Status status = Status::NotApplicable;
  std::optional<double> constant;
  Vec witness;
  std::string witness_kind;
  std::string note;
  double residual = 0.0;
};

struct ConditionReport {
  std::vector<ConditionEntry> entries;
  bool all_hold() const;
  const ConditionEntry* find(const std::string& name) const;
};

// (L.1): omega(a* a) >= 0 for all core a, i.e. the Gram form is PSD.
ConditionEntry check_L1(const GramData& gd, const Tolerances& tol = {});

// omega(x*) = conj(omega(x)) over the ambient basis.
ConditionEntry check_hermitian(const QuasiAlgebraSpec& spec,
                               const Functional& omega,
                               const Tolerances& tol = {});

// (L.2): omega(b* x* a) = conj(omega(a* x b)) over all basis triples.
ConditionEntry check_L2(const QuasiAlgebraSpec& spec, const Functional& omega,
                        const Tolerances& tol = {});

// (L.3) at a single element: boundedness of a |-> omega(x* a) against the
// Gram seminorm.  value = minimal gamma_x^2 = p_x(omega); the unbounded
// witness is a core direction in ker(G) with omega(x* a) != 0.
BoundednessResult l3_bound(const SeminormForm& form, const Vec& ambient_xi,
                           const Tolerances& tol = {});
BoundednessResult l3_bound(const QuasiAlgebraSpec& spec,
                           const Functional& omega, const Element& x,
                           const Tolerances& tol = {});

// (L.3) over the whole space (by linearity, over the ambient basis).
ConditionEntry check_L3_all(const QuasiAlgebraSpec& spec,
                            const Functional& omega,
                            const Tolerances& tol = {});

// Hilbert bound of the core restriction:
//   ||omega_0||_H = sup { |omega(J a)|^2 : omega(a* a) = 1 }.
// With a zero Gram form the supremum over the empty constraint follows the
// constrained_sup convention (0 when the core weights vanish, unbounded
// otherwise); the entry notes when that convention fired.
BoundednessResult hilbert_bound(const QuasiAlgebraSpec& spec,
                                const Functional& omega,
                                const Tolerances& tol = {});

// Extended Hilbert bound: least zeta with |omega(x*)| <= zeta p_x(omega)^{1/2}
// for every ambient x.  value = zeta_min^2 = r^dagger Q^+ r when r lies in
// range(Q).  Failure witnesses are unit directions xi with r^dagger xi != 0
// and either p_x = 0 ("kernel-objective") or p_x infinite ("range-defect").
BoundednessResult ehb_constant(const QuasiAlgebraSpec& spec,
                               const Functional& omega,
                               const Tolerances& tol = {});

// p_b(omega) = omega(b* b) for core b: the seminorm computed through the
// quadratic form must reproduce the Gram diagonal.
struct LemmaHBReport {
  double max_rel_err = 0.0;
  int checked = 0;
  bool ehb_bounded = false;
  bool hb_bounded = false;
  bool implication_ok = true;  // EHB bounded => HB bounded
  bool holds = true;
};

LemmaHBReport check_lemma_hb(const QuasiAlgebraSpec& spec,
                             const Functional& omega,
                             const Tolerances& tol = {});

// Admissibility constant of a core element b: least delta with
//   omega((b a)* (b a)) <= delta omega(a* a)  for all core a.
// Computed as the top eigenvalue of the Gram-whitened form; bounded iff
// ker(G) is invariant enough, i.e. ker(G) is contained in ker(H_b).
BoundednessResult adm_bound(const QuasiAlgebraSpec& spec,
                            const Functional& omega, const Element& b,
                            const Tolerances& tol = {});

// Aggregate report over {L1, hermitian, L2, L3, HB, EHB, ADM}.
ConditionReport condition_report(const QuasiAlgebraSpec& spec,
                                 const Functional& omega,
                                 const Tolerances& tol = {});

// L1 and L2 and L3.
bool is_representable(const QuasiAlgebraSpec& spec, const Functional& omega,
                      const Tolerances& tol = {});

std::string to_string(Status s);

}  // namespace gnslab

#endif
