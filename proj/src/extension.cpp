#include "gnslab/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/SVD>

namespace gnslab {

namespace {

// Orthonormal basis of ker(D) via full SVD.  D is a residual of a larger
// computation, so singular values are measured against the caller's scale,
// not against D's own largest one; a defect that is pure rounding noise must
// come out as the zero map.
Mat kernel_basis_of(const Mat& d, double rank_cutoff, double scale) {
  const int n = static_cast<int>(d.cols());
  Eigen::JacobiSVD<Mat> svd(d, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > rank_cutoff * std::max(scale, 1e-300)) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

int span_rank(const Mat& cols, double rank_cutoff) {
  if (cols.cols() == 0) return 0;
  return hermitian_eig(Mat(cols.adjoint() * cols), rank_cutoff).rank;
}

}  // namespace

ExtensionSpec extend_functional(const QuasiAlgebraSpec& spec,
                                const Functional& omega, GammaPolicy policy,
                                double gamma_value, bool allow_below_minimum,
                                const Tolerances& tol) {
  {
    const ConditionEntry herm = check_hermitian(spec, omega, tol);
    if (herm.status == Status::Fails)
      throw PreconditionError("hermitian",
                              "extend_functional: " + herm.note, herm.witness);
  }
  const BoundednessResult hb = hilbert_bound(spec, omega, tol);
  if (!hb.bounded)
    throw PreconditionError(
        "HB",
        "extend_functional: the core restriction is unbounded against the "
        "Gram form; no admissible gamma exists",
        hb.witness);

  ExtensionSpec ext;
  ext.base = spec;
  ext.base_omega = omega;
  ext.minimal_gamma = hb.value;
  ext.policy = policy;
  if (policy == GammaPolicy::Minimal) {
    ext.gamma = hb.value;
  } else {
    ext.gamma = gamma_value;
    const double slack = 1e-12 * std::max(1.0, ext.minimal_gamma);
    ext.below_minimum = gamma_value < ext.minimal_gamma - slack;
    if (ext.below_minimum && !allow_below_minimum) {
      std::ostringstream os;
      os << "extend_functional: gamma " << gamma_value
         << " is below the minimal admissible value " << ext.minimal_gamma;
      throw DataError(os.str());
    }
  }

  ext.unitized = unitize(spec);
  ext.omega_e.weights = Vec(spec.ambient_dim() + 1);
  ext.omega_e.weights.head(spec.ambient_dim()) = omega.weights;
  ext.omega_e.weights(spec.ambient_dim()) = ext.gamma;
  return ext;
}

ConditionEntry positivity_on_unitization(const ExtensionSpec& ext,
                                         const Tolerances& tol) {
  const GramData gd = gram(ext.unitized, ext.omega_e, tol);
  ConditionEntry e = check_L1(gd, tol);
  e.note = e.note.empty() ? "on the unitized core" : e.note;
  return e;
}

ExtensionCertificate extension_certificate(const QuasiAlgebraSpec& spec,
                                           const Functional& omega,
                                           const Element& x, cplx eta,
                                           double gamma,
                                           const Tolerances& tol) {
  if (gamma < 0.0)
    throw DataError("extension_certificate: gamma must be nonnegative");
  const SeminormForm form = seminorm_form(spec, omega, tol);

  const BoundednessResult l3 =
      l3_bound(form, ambient_coords(spec, x), tol);
  if (!l3.bounded)
    throw PreconditionError(
        "L3", "extension_certificate: x has no finite bound constant",
        l3.witness);

  const BoundednessResult ehb = ehb_constant(spec, omega, tol);
  if (!ehb.bounded)
    throw PreconditionError(
        "EHB",
        "extension_certificate: the extended bound condition fails; the "
        "certificate constants are undefined",
        ehb.witness);

  ExtensionCertificate cert;
  cert.eta = eta;
  cert.gamma = gamma;
  cert.gamma_x = std::sqrt(l3.value);
  cert.zeta = std::sqrt(ehb.value);
  const double sg = std::sqrt(gamma);
  const double first = cert.gamma_x + std::abs(eta) * sg;
  double second;
  if (gamma > 0.0) {
    second = cert.zeta * cert.gamma_x / sg + std::abs(eta) * sg;
  } else {
    // Degenerate gamma = 0 happens only for the zero functional, where the
    // numerator also vanishes.
    second = cert.zeta * cert.gamma_x == 0.0
                 ? 0.0
                 : std::numeric_limits<double>::infinity();
  }
  cert.k_bound = std::max(first, second);
  cert.big_gamma =
      std::max(2.0 * cert.k_bound * cert.k_bound,
               std::abs(eta) * std::abs(eta) * gamma);
  return cert;
}

ConditionReport check_extension_representable(const ExtensionSpec& ext,
                                              const Tolerances& tol) {
  ConditionReport report;
  const GramData gd = gram(ext.unitized, ext.omega_e, tol);
  report.entries.push_back(check_L1(gd, tol));
  report.entries.push_back(check_L2(ext.unitized, ext.omega_e, tol));
  report.entries.push_back(check_L3_all(ext.unitized, ext.omega_e, tol));
  return report;
}

DomainDe domain_De(const ExtensionSpec& ext, const Tolerances& tol) {
  {
    // Standing hypotheses live on the base model.
    const ConditionEntry herm = check_hermitian(ext.base, ext.base_omega, tol);
    if (herm.status == Status::Fails)
      throw PreconditionError("hermitian", "domain_De: " + herm.note,
                              herm.witness);
    const ConditionEntry l3 = check_L3_all(ext.base, ext.base_omega, tol);
    if (l3.status != Status::Holds)
      throw PreconditionError("L3",
                              "domain_De: the base functional fails the "
                              "per-element bound condition",
                              l3.witness);
    const BoundednessResult hb = hilbert_bound(ext.base, ext.base_omega, tol);
    if (!hb.bounded)
      throw PreconditionError(
          "HB", "domain_De: the base core restriction is unbounded",
          hb.witness);
  }

  const QuasiAlgebraSpec& uni = ext.unitized;
  const SeminormForm form = seminorm_form(uni, ext.omega_e, tol);
  const int n = uni.ambient_dim();
  const int kc = uni.core_dim();

  DomainDe dom;
  const Mat range = form.gram.eig.range_basis();
  const Mat defect = form.c - range * (range.adjoint() * form.c);
  const double cscale = form.c.size() ? form.c.cwiseAbs().maxCoeff() : 0.0;
  dom.basis = kernel_basis_of(defect, tol.rank_cutoff, cscale);

  // *-stability: the starred basis must span the same subspace.
  if (dom.dim() == 0) {
    dom.star_stable = true;
  } else {
    const Mat starred = uni.star_ambient * dom.basis.conjugate();
    Mat joint(n, 2 * dom.dim());
    joint << dom.basis, starred;
    dom.star_stable = span_rank(joint, tol.rank_cutoff) == dom.dim();
  }

  {
    dom.contains_core = true;
    for (int i = 0; i < kc; ++i) {
      const Vec res = defect * uni.inclusion.col(i);
      if (res.cwiseAbs().maxCoeff() > tol.range_tol * std::max(cscale, 1e-300))
        dom.contains_core = false;
    }
  }

  dom.adm_all_bounded = true;
  for (int i = 0; i < kc; ++i) {
    dom.adm_bounds.push_back(
        adm_bound(uni, ext.omega_e, core_basis_element(uni, i), tol));
    if (!dom.adm_bounds.back().bounded) dom.adm_all_bounded = false;
  }

  dom.is_quasi_algebra_with_unit =
      dom.star_stable && dom.adm_all_bounded && dom.contains_core;
  if (!dom.is_quasi_algebra_with_unit) return dom;

  // Restrict the unitized model to the domain, in the orthonormal basis B:
  // coordinates c represent the element B c.
  const Mat& b = dom.basis;
  const int r = dom.dim();
  QuasiAlgebraSpec sub;
  sub.dim_ambient = r;
  sub.core = uni.core;
  sub.inclusion = b.adjoint() * uni.inclusion;
  sub.star_ambient = b.adjoint() * uni.star_ambient * b.conjugate();
  double stability_residual = 0.0;
  auto project = [&](const SpMat& action) {
    const Mat full = action * b;
    const Mat reduced = b.adjoint() * full;
    // The domain must be invariant; anything outside span(B) is a violation
    // of the module-stability guarantee.
    const Mat out = full - b * reduced;
    stability_residual = std::max(
        stability_residual, out.size() ? out.cwiseAbs().maxCoeff() : 0.0);
    SpMat sp = reduced.sparseView();
    return sp;
  };
  for (int i = 0; i < kc; ++i) {
    sub.left_action.push_back(project(uni.left_action[i]));
    sub.right_action.push_back(project(uni.right_action[i]));
  }
  {
    const Mat sfull = uni.star_ambient * b.conjugate();
    const Mat out = sfull - b * (b.adjoint() * sfull);
    stability_residual = std::max(
        stability_residual, out.size() ? out.cwiseAbs().maxCoeff() : 0.0);
  }
  sub.has_unit = true;
  sub.unit = b.adjoint() * uni.unit;

  dom.restricted_omega.weights = b.transpose() * ext.omega_e.weights;
  const ValidationReport vr = validate_quasi_algebra(sub, tol.axiom);
  dom.restriction_valid =
      vr.passed && stability_residual <= tol.range_tol * std::max(1.0, vr.scale);
  dom.restricted = std::move(sub);
  dom.restriction_representable =
      is_representable(*dom.restricted, dom.restricted_omega, tol);
  return dom;
}

const ChainItem* ChainReport::find(const std::string& name) const {
  for (const auto& it : items)
    if (it.name == name) return &it;
  return nullptr;
}

ChainReport chain_report(const QuasiAlgebraSpec& spec, const Functional& omega,
                         GammaPolicy policy, double gamma_value,
                         bool allow_below_minimum, const Tolerances& tol) {
  const GramData gd = gram(spec, omega, tol);
  {
    const ConditionEntry l1 = check_L1(gd, tol);
    if (l1.status == Status::Fails)
      throw PreconditionError("L1",
                              "chain_report: the base Gram form is not "
                              "positive semidefinite",
                              l1.witness);
  }

  ChainReport rep;
  const bool herm =
      check_hermitian(spec, omega, tol).status == Status::Holds;
  const bool l2 = check_L2(spec, omega, tol).status == Status::Holds;
  const bool l3 = check_L3_all(spec, omega, tol).status == Status::Holds;
  const BoundednessResult hb = hilbert_bound(spec, omega, tol);
  rep.ehb_base = ehb_constant(spec, omega, tol).bounded ? Status::Holds
                                                        : Status::Fails;

  auto push = [&](const std::string& name, Status st,
                  const std::string& note = "") {
    rep.items.push_back({name, st, note});
  };
  const auto as_status = [](bool b) {
    return b ? Status::Holds : Status::Fails;
  };

  std::optional<ExtensionSpec> ext;
  std::string ext_note;
  try {
    ext = extend_functional(spec, omega, policy, gamma_value,
                            allow_below_minimum, tol);
    rep.gamma = ext->gamma;
  } catch (const Error& err) {
    ext_note = std::string("extension unavailable: ") + err.what();
  }

  // (i) the canonical extension is representable on the unitization.
  Status s1 = Status::NotApplicable;
  if (ext) s1 = as_status(check_extension_representable(*ext, tol).all_hold());
  push("extension-representable", s1, ext ? "" : ext_note);

  // (ii) omega is a vector functional through the unitized quotient, with
  // the class of the adjoined unit as the vector.
  Status s2 = Status::NotApplicable;
  std::string note2 = ext ? "" : ext_note;
  if (ext) {
    try {
      const GNSRep grep = build_gns(ext->unitized, ext->omega_e, tol);
      const Vec xi = grep.coord_map.col(ext->unitized.core_dim() - 1);
      VectorFormReport vf = verify_vector_form(grep, xi, tol);
      // The vector form must reproduce omega on the base slots; the adjoined
      // slot reads gamma by construction.
      s2 = as_status(vf.holds);
    } catch (const Error& err) {
      s2 = Status::NotApplicable;
      note2 = std::string("quotient unavailable: ") + err.what();
    }
  }
  push("vector-form", s2, note2);

  // (iii) hermitian, bounded core restriction, and a representing vector for
  // every slice a |-> omega(x* a).
  push("hermitian+hilbert-bounded+riesz",
       as_status(herm && hb.bounded && l3));

  // (iv) extensibility, probed at the minimal admissible gamma.
  Status s4 = Status::NotApplicable;
  std::string note4;
  if (policy == GammaPolicy::Minimal && ext) {
    s4 = s1;
    note4 = "same extension as the representability item";
  } else {
    try {
      const ExtensionSpec minimal =
          extend_functional(spec, omega, GammaPolicy::Minimal, 0.0, false, tol);
      s4 = as_status(check_extension_representable(minimal, tol).all_hold());
      note4 = "probed at the minimal gamma";
    } catch (const Error& err) {
      note4 = std::string("extension unavailable: ") + err.what();
    }
  }
  push("extensible-at-minimal-gamma", s4, note4);

  // (v) hermitian with per-element bound constants.
  push("hermitian+bound-constants", as_status(herm && l3));

  // (vi) hermitian and representable.
  push("hermitian+representable", as_status(herm && l2 && l3));

  if (ext) {
    try {
      rep.ehb_unitized = ehb_constant(ext->unitized, ext->omega_e, tol).bounded
                             ? Status::Holds
                             : Status::Fails;
    } catch (const Error&) {
      rep.ehb_unitized = Status::NotApplicable;  // unitized Gram not PSD
    }
    if (rep.ehb_base != rep.ehb_unitized)
      rep.discrepancies.push_back(
          "extended bound condition differs between the base core (" +
          to_string(rep.ehb_base) + ") and the unitized core (" +
          to_string(rep.ehb_unitized) + ")");
  }

  // One-directional implications hold unconditionally in the theory; check
  // them on the computed statuses.
  auto holds = [&](int i) { return rep.items[i].status == Status::Holds; };
  auto computed = [&](int i) { return rep.items[i].status != Status::NotApplicable; };
  if (computed(0) && computed(1) && holds(0) && !holds(1)) {
    rep.implications_ok = false;
    rep.discrepancies.push_back(
        "implication violated: extension representable but the vector form "
        "fails");
  }
  if (computed(1) && computed(2) && holds(1) && !holds(2)) {
    rep.implications_ok = false;
    rep.discrepancies.push_back(
        "implication violated: vector form holds but the riesz "
        "characterization fails");
  }

  const bool ehb_ok =
      rep.ehb_base == Status::Holds && rep.ehb_unitized == Status::Holds;
  bool any_hold = false, any_fail = false;
  for (const auto& it : rep.items) {
    if (it.status == Status::Holds) any_hold = true;
    if (it.status == Status::Fails) any_fail = true;
  }
  if (any_hold && any_fail) {
    std::string names;
    for (const auto& it : rep.items)
      if (it.status == Status::Fails) names += " " + it.name;
    if (ehb_ok) {
      rep.implications_ok = false;
      rep.discrepancies.push_back(
          "equivalence violated under the extended bound condition; failing "
          "items:" + names);
    } else {
      rep.discrepancies.push_back(
          "items disagree while the extended bound condition fails; failing "
          "items:" + names);
    }
  }
  return rep;
}

}  // namespace gnslab
