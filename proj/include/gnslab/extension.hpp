#ifndef GNSLAB_EXTENSION_HPP
#define GNSLAB_EXTENSION_HPP

#include <optional>
#include <string>
#include <vector>

#include "gnslab/functional.hpp"
#include "gnslab/gns.hpp"

namespace gnslab {

enum class GammaPolicy { Minimal, Explicit };

// The canonical extension of omega to the unitized model:
//   omega_e((x, eta)) = omega(x) + eta * gamma.
// Owns copies of both models so reports stay self-contained.
struct ExtensionSpec {
  QuasiAlgebraSpec base;
  Functional base_omega;
  QuasiAlgebraSpec unitized;
  Functional omega_e;
  double gamma = 0.0;
  double minimal_gamma = 0.0;  // bound of the core restriction
  GammaPolicy policy = GammaPolicy::Minimal;
  bool below_minimum = false;  // explicit gamma under the minimum, forced
};

// Builds the extension.  Requires omega hermitian and its core restriction
// bounded (PreconditionError with witness otherwise).  Explicit gamma below
// the minimal value is a DataError unless allow_below_minimum; the escape
// hatch exists for regression tests of non-positive extensions.
ExtensionSpec extend_functional(const QuasiAlgebraSpec& spec,
                                const Functional& omega, GammaPolicy policy,
                                double gamma_value = 0.0,
                                bool allow_below_minimum = false,
                                const Tolerances& tol = {});

// PSD check of the unitized Gram form (condition (L.1) for omega_e).
ConditionEntry positivity_on_unitization(const ExtensionSpec& ext,
                                         const Tolerances& tol = {});

// Constants certifying that (x, eta) satisfies the extended boundedness
// inequality under omega_e:
//   |omega_e((x,eta)* (a,mu))|^2 <= Gamma * omega_e((a,mu)* (a,mu)).
struct ExtensionCertificate {
  double gamma_x = 0.0;  // minimal constant of x against the base Gram form
  double zeta = 0.0;     // minimal constant of omega(.*) against p
  double k_bound = 0.0;  // K = max{gamma_x + |eta| gamma^{1/2},
                         //         zeta gamma_x / gamma^{1/2} + |eta| gamma^{1/2}}
  double big_gamma = 0.0;  // max{2 K^2, |eta|^2 gamma}
  cplx eta;
  double gamma = 0.0;
};

ExtensionCertificate extension_certificate(const QuasiAlgebraSpec& spec,
                                           const Functional& omega,
                                           const Element& x, cplx eta,
                                           double gamma,
                                           const Tolerances& tol = {});

// (L.1) + (L.2) + (L.3) of omega_e on the unitized model.
ConditionReport check_extension_representable(const ExtensionSpec& ext,
                                              const Tolerances& tol = {});

// The bounded part of the unitized space: all (x, eta) whose coupling vector
// stays inside the range of the unitized Gram form.  Membership is the
// kernel of a linear defect map, so the basis spans the set exactly.
struct DomainDe {
  Mat basis;  // (m+1) x dim, orthonormal columns
  bool star_stable = false;
  bool contains_core = false;
  std::vector<BoundednessResult> adm_bounds;  // per unitized-core basis
  bool adm_all_bounded = false;
  bool is_quasi_algebra_with_unit = false;
  // Filled when the domain forms a quasi *-algebra with unit: the restricted
  // model in the orthonormal domain basis, the restricted functional, and
  // whether that restriction passes (L.1)-(L.3).
  std::optional<QuasiAlgebraSpec> restricted;
  Functional restricted_omega;
  bool restriction_valid = false;
  bool restriction_representable = false;

  int dim() const { return static_cast<int>(basis.cols()); }
};

DomainDe domain_De(const ExtensionSpec& ext, const Tolerances& tol = {});

// One characterization of representability, evaluated numerically.
struct ChainItem {
  std::string name;
  Status status = Status::NotApplicable;
  std::string note;
};

struct ChainReport {
  std::vector<ChainItem> items;  // fixed order, six entries
  double gamma = 0.0;
  Status ehb_base = Status::NotApplicable;
  Status ehb_unitized = Status::NotApplicable;
  bool implications_ok = true;
  std::vector<std::string> discrepancies;

  const ChainItem* find(const std::string& name) const;
};

// Evaluates the six equivalent characterizations of representability on a
// model/functional pair and cross-checks them: the one-directional
// implications must always hold; full equivalence is asserted only when the
// extended bound condition holds, and divergences are recorded as
// discrepancy entries otherwise.
ChainReport chain_report(const QuasiAlgebraSpec& spec, const Functional& omega,
                         GammaPolicy policy, double gamma_value = 0.0,
                         bool allow_below_minimum = false,
                         const Tolerances& tol = {});

}  // namespace gnslab

#endif
