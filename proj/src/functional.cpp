#include "gnslab/functional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gnslab {

namespace {

Mat symmetrized(const Mat& g) { return 0.5 * (g + g.adjoint()); }

ConditionEntry not_applicable(const std::string& name,
                              const std::string& why) {
  ConditionEntry e;
  e.name = name;
  e.status = Status::NotApplicable;
  e.note = why;
  return e;
}

}  // namespace

std::string to_string(Status s) {
  switch (s) {
    case Status::Holds:
      return "holds";
    case Status::Fails:
      return "fails";
    default:
      return "not-applicable";
  }
}

cplx eval(const QuasiAlgebraSpec& spec, const Functional& omega,
          const Element& x) {
  if (omega.weights.size() != spec.ambient_dim())
    throw StructuralError("eval: weight vector length mismatch");
  const Vec xi = ambient_coords(spec, x);
  return omega.weights.transpose() * xi;
}

Mat TripleForm::t_matrix(const Vec& ambient_xi) const {
  const int k = spec->core_dim();
  const int m = spec->ambient_dim();
  Mat y(m, k);
  for (int j = 0; j < k; ++j) y.col(j) = spec->right_action[j] * ambient_xi;
  return lstar * y;
}

Mat TripleForm::t_matrix_basis(int p) const {
  const int k = spec->core_dim();
  const int m = spec->ambient_dim();
  SpMat y(m, k);
  std::vector<Eigen::Triplet<cplx>> trips;
  for (int j = 0; j < k; ++j)
    for (SpMat::InnerIterator it(spec->right_action[j], p); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), j, it.value());
  y.setFromTriplets(trips.begin(), trips.end());
  return lstar * y;
}

TripleForm triple_form(const QuasiAlgebraSpec& spec, const Functional& omega) {
  const int k = spec.core_dim();
  const int m = spec.ambient_dim();
  Mat vl(k, m);
  for (int s = 0; s < k; ++s)
    vl.row(s) = (spec.left_action[s].transpose() * omega.weights).transpose();
  TripleForm tf;
  tf.spec = &spec;
  tf.lstar = spec.core.star_core.transpose() * vl;
  return tf;
}

GramData gram(const QuasiAlgebraSpec& spec, const Functional& omega,
              const Tolerances& tol) {
  if (omega.weights.size() != spec.ambient_dim())
    throw StructuralError("gram: weight vector length mismatch");
  const int k = spec.core_dim();
  const Vec cw = spec.inclusion.transpose() * omega.weights;  // omega o J

  // g(s,t) = omega(J (e_s e_t)); then G = star_core^T g so that
  // G(i,j) = omega(e_i* e_j).
  SpMat gsparse(k, k);
  {
    std::vector<Eigen::Triplet<cplx>> trips;
    for (const auto& e : spec.core.mult.entries())
      trips.emplace_back(e.i, e.j, e.value * cw(e.l));
    gsparse.setFromTriplets(trips.begin(), trips.end());
  }
  GramData gd;
  gd.g = spec.core.star_core.transpose() * gsparse;
  gd.herm_residual =
      gd.g.size() == 0 ? 0.0 : (gd.g - gd.g.adjoint()).cwiseAbs().maxCoeff();
  gd.eig = hermitian_eig(symmetrized(gd.g), tol.rank_cutoff);
  gd.null_basis = gd.eig.kernel_basis();
  return gd;
}

ConditionEntry check_L1(const GramData& gd, const Tolerances& tol) {
  ConditionEntry e;
  e.name = "L1";
  const int k = gd.eig.dim();
  if (k == 0) {
    e.status = Status::Holds;
    return e;
  }
  const double lam_min = gd.eig.eigenvalues(k - 1);
  const double scale = std::max(gd.eig.max_abs_eigenvalue(), 1e-300);
  e.residual = std::max(0.0, -lam_min);
  if (lam_min >= -tol.axiom * scale) {
    e.status = Status::Holds;
  } else {
    e.status = Status::Fails;
    e.witness = gd.eig.eigenvectors.col(k - 1);
    e.witness_kind = "negative-direction";
    std::ostringstream os;
    os << "omega(a* a) = " << lam_min << " at the witness direction";
    e.note = os.str();
  }
  if (gd.herm_residual > tol.axiom * scale)
    e.note += (e.note.empty() ? "" : "; ") +
              std::string("gram form has a non-Hermitian part of magnitude ") +
              std::to_string(gd.herm_residual);
  return e;
}

ConditionEntry check_hermitian(const QuasiAlgebraSpec& spec,
                               const Functional& omega,
                               const Tolerances& tol) {
  ConditionEntry e;
  e.name = "hermitian";
  const Vec starred = spec.star_ambient.transpose() * omega.weights;
  const Vec diff = starred - omega.weights.conjugate();
  int worst = 0;
  e.residual = diff.size() == 0 ? 0.0 : diff.cwiseAbs().maxCoeff(&worst);
  const double scale = std::max(omega.weights.norm(), 1e-300);
  if (e.residual <= tol.axiom * scale) {
    e.status = Status::Holds;
  } else {
    e.status = Status::Fails;
    e.witness = Vec::Zero(spec.ambient_dim());
    e.witness(worst) = 1.0;
    e.witness_kind = "basis-element";
    std::ostringstream os;
    os << "omega(f_" << worst << "*) != conj(omega(f_" << worst
       << ")), residual " << e.residual;
    e.note = os.str();
  }
  return e;
}

ConditionEntry check_L2(const QuasiAlgebraSpec& spec, const Functional& omega,
                        const Tolerances& tol) {
  ConditionEntry e;
  e.name = "L2";
  const TripleForm tf = triple_form(spec, omega);
  const int m = spec.ambient_dim();
  double worst_res = 0.0, scale = 0.0;
  int wi = -1, wj = -1, wp = -1;
  for (int p = 0; p < m; ++p) {
    const Mat tp = tf.t_matrix_basis(p);
    const Mat tstar = tf.t_matrix(spec.star_ambient.col(p));
    scale = std::max(scale, tp.size() ? tp.cwiseAbs().maxCoeff() : 0.0);
    const Mat diff = tstar - tp.adjoint();
    for (int i = 0; i < diff.rows(); ++i)
      for (int j = 0; j < diff.cols(); ++j)
        if (std::abs(diff(i, j)) > worst_res) {
          worst_res = std::abs(diff(i, j));
          wi = i;
          wj = j;
          wp = p;
        }
  }
  e.residual = worst_res;
  if (worst_res <= tol.axiom * std::max(scale, 1e-300)) {
    e.status = Status::Holds;
  } else {
    e.status = Status::Fails;
    e.witness = Vec::Zero(m);
    e.witness(wp) = 1.0;
    e.witness_kind = "basis-triple";
    std::ostringstream os;
    os << "omega(b* x* a) != conj(omega(a* x b)) at a=e_" << wj << ", b=e_"
       << wi << ", x=f_" << wp << ", residual " << worst_res;
    e.note = os.str();
  }
  return e;
}

double SeminormForm::p_value(const Vec& xi) const {
  const Vec u = coupling(xi);
  const double p = std::real(u.dot(gram.eig.pinv_apply(u)));
  return std::max(p, 0.0);
}

Mat SeminormForm::q_matrix() const {
  const Mat w = gram.eig.pinv_sqrt_apply(c);
  return w.adjoint() * w;
}

SeminormForm seminorm_form(const QuasiAlgebraSpec& spec,
                           const Functional& omega, const Tolerances& tol) {
  SeminormForm form;
  form.gram = gram(spec, omega, tol);
  {
    const ConditionEntry l1 = check_L1(form.gram, tol);
    if (l1.status == Status::Fails)
      throw PreconditionError("L1",
                              "seminorm_form: the Gram form is not positive "
                              "semidefinite; " +
                                  l1.note,
                              l1.witness);
  }
  const int k = spec.core_dim();
  const int m = spec.ambient_dim();
  form.b = Mat(m, k);
  for (int j = 0; j < k; ++j)
    form.b.col(j) = spec.right_action[j].transpose() * omega.weights;
  form.c = (form.b.transpose() * spec.star_ambient).conjugate();
  form.r = spec.star_ambient.transpose() * omega.weights;
  return form;
}

BoundednessResult l3_bound(const SeminormForm& form, const Vec& ambient_xi,
                           const Tolerances& tol) {
  // The coupling vector is a product C xi, so its entries can be pure
  // cancellation noise; anchor the range test to the scale of C and xi.
  const double floor =
      (form.c.size() ? form.c.cwiseAbs().maxCoeff() : 0.0) * ambient_xi.norm();
  return constrained_sup(form.gram.eig, form.coupling(ambient_xi),
                         tol.range_tol, floor);
}

BoundednessResult l3_bound(const QuasiAlgebraSpec& spec,
                           const Functional& omega, const Element& x,
                           const Tolerances& tol) {
  const SeminormForm form = seminorm_form(spec, omega, tol);
  return l3_bound(form, ambient_coords(spec, x), tol);
}

ConditionEntry check_L3_all(const QuasiAlgebraSpec& spec,
                            const Functional& omega, const Tolerances& tol) {
  ConditionEntry e;
  e.name = "L3";
  SeminormForm form;
  try {
    form = seminorm_form(spec, omega, tol);
  } catch (const PreconditionError& pe) {
    return not_applicable("L3", "requires (L.1): " + std::string(pe.what()));
  }
  double max_p = 0.0;
  const double cscale = form.c.size() ? form.c.cwiseAbs().maxCoeff() : 0.0;
  for (int p = 0; p < spec.ambient_dim(); ++p) {
    const BoundednessResult r =
        constrained_sup(form.gram.eig, form.c.col(p), tol.range_tol, cscale);
    if (!r.bounded) {
      e.status = Status::Fails;
      e.witness = r.witness;
      e.witness_kind = "kernel-direction";
      std::ostringstream os;
      os << "a |-> omega(f_" << p
         << "* a) is unbounded against the Gram seminorm";
      e.note = os.str();
      return e;
    }
    max_p = std::max(max_p, r.value);
  }
  e.status = Status::Holds;
  e.constant = std::sqrt(max_p);  // largest minimal gamma_x over the basis
  return e;
}

BoundednessResult hilbert_bound(const QuasiAlgebraSpec& spec,
                                const Functional& omega,
                                const Tolerances& tol) {
  const GramData gd = gram(spec, omega, tol);
  {
    const ConditionEntry l1 = check_L1(gd, tol);
    if (l1.status == Status::Fails)
      throw PreconditionError("L1",
                              "hilbert_bound: the Gram form is not positive "
                              "semidefinite",
                              l1.witness);
  }
  const Vec u_h = (spec.inclusion.transpose() * omega.weights).conjugate();
  return constrained_sup(gd.eig, u_h, tol.range_tol);
}

BoundednessResult ehb_constant(const QuasiAlgebraSpec& spec,
                               const Functional& omega,
                               const Tolerances& tol) {
  const SeminormForm form = seminorm_form(spec, omega, tol);
  const Mat q = form.q_matrix();
  const HermitianEig eq = hermitian_eig(q, tol.rank_cutoff);
  BoundednessResult res = constrained_sup(eq, form.r, tol.range_tol);
  if (!res.bounded) {
    // Distinguish a genuinely violating direction (p_x = 0, omega(x*) != 0)
    // from one whose seminorm is infinite (coupling escapes range(G)).
    const double cscale = std::max(form.c.norm(), 1e-300);
    const Vec u = form.coupling(res.witness);
    res.witness_kind =
        u.norm() <= tol.range_tol * cscale ? "kernel-objective" : "range-defect";
  }
  return res;
}

LemmaHBReport check_lemma_hb(const QuasiAlgebraSpec& spec,
                             const Functional& omega, const Tolerances& tol) {
  const SeminormForm form = seminorm_form(spec, omega, tol);
  LemmaHBReport rep;
  const double scale = std::max(form.gram.eig.max_abs_eigenvalue(), 1e-300);
  for (int i = 0; i < spec.core_dim(); ++i) {
    const double gii = std::real(form.gram.g(i, i));
    if (gii <= tol.rank_cutoff * scale) continue;  // p_b = omega(b*b) = 0 case
    const double p = form.p_value(spec.inclusion.col(i));
    rep.max_rel_err = std::max(rep.max_rel_err, std::abs(p - gii) / gii);
    ++rep.checked;
  }
  const Vec u_h = (spec.inclusion.transpose() * omega.weights).conjugate();
  rep.hb_bounded =
      constrained_sup(form.gram.eig, u_h, tol.range_tol).bounded;
  rep.ehb_bounded = ehb_constant(spec, omega, tol).bounded;
  rep.implication_ok = !rep.ehb_bounded || rep.hb_bounded;
  rep.holds = rep.implication_ok && rep.max_rel_err <= 1e-9;
  return rep;
}

BoundednessResult adm_bound(const QuasiAlgebraSpec& spec,
                            const Functional& omega, const Element& b,
                            const Tolerances& tol) {
  if (b.space != Space::Core)
    throw StructuralError("adm_bound: b must carry the core tag");
  const GramData gd = gram(spec, omega, tol);
  {
    const ConditionEntry l1 = check_L1(gd, tol);
    if (l1.status == Status::Fails)
      throw PreconditionError(
          "L1", "adm_bound: the Gram form is not positive semidefinite",
          l1.witness);
  }
  const int k = spec.core_dim();
  const Mat mb = spec.core.mult.left_matrix(b.coords);
  const Mat gsym = symmetrized(gd.g);
  const Mat h = mb.adjoint() * gsym * mb;

  BoundednessResult res;
  // H is a double product, so residuals are measured against the scale the
  // factors would produce without cancellation, not against max|H| alone.
  const double mscale = mb.size() ? mb.cwiseAbs().maxCoeff() : 0.0;
  const double gscale = gsym.size() ? gsym.cwiseAbs().maxCoeff() : 0.0;
  const double hscale =
      std::max(h.size() ? h.cwiseAbs().maxCoeff() : 0.0,
               gscale * mscale * mscale);
  const Mat kernel = gd.eig.kernel_basis();
  for (int c = 0; c < kernel.cols(); ++c) {
    const Vec hn = h * kernel.col(c);
    if (hn.cwiseAbs().maxCoeff() > tol.range_tol * std::max(hscale, 1e-300)) {
      res.bounded = false;
      res.witness = kernel.col(c);
      res.witness_kind = "null-direction";
      return res;
    }
  }
  res.bounded = true;
  if (gd.eig.rank == 0 || hscale == 0.0) {
    res.value = 0.0;
    res.witness = Vec::Zero(k);
    res.witness_kind = "optimizer";
    return res;
  }
  const Mat w = gd.eig.pinv_sqrt_apply(Mat::Identity(k, k));
  const HermitianEig ea = hermitian_eig(w * h * w.adjoint(), tol.rank_cutoff);
  res.value = std::max(ea.eigenvalues(0), 0.0);
  res.witness = w.adjoint() * ea.eigenvectors.col(0);
  res.witness_kind = "optimizer";
  return res;
}

ConditionReport condition_report(const QuasiAlgebraSpec& spec,
                                 const Functional& omega,
                                 const Tolerances& tol) {
  ConditionReport report;
  const GramData gd = gram(spec, omega, tol);
  ConditionEntry l1 = check_L1(gd, tol);
  if (gd.is_zero()) {
    l1.note += (l1.note.empty() ? "" : "; ");
    l1.note += "gram form is identically zero; suprema over its constraint "
               "surface follow the empty-surface convention";
  }
  const bool l1_ok = l1.status == Status::Holds;
  report.entries.push_back(std::move(l1));
  report.entries.push_back(check_hermitian(spec, omega, tol));
  report.entries.push_back(check_L2(spec, omega, tol));

  if (!l1_ok) {
    for (const char* name : {"L3", "HB", "EHB", "ADM"})
      report.entries.push_back(not_applicable(name, "requires (L.1)"));
    return report;
  }

  report.entries.push_back(check_L3_all(spec, omega, tol));

  {
    ConditionEntry e;
    e.name = "HB";
    const BoundednessResult r = hilbert_bound(spec, omega, tol);
    e.status = r.bounded ? Status::Holds : Status::Fails;
    if (r.bounded)
      e.constant = r.value;
    e.witness = r.witness;
    e.witness_kind = r.witness_kind;
    if (gd.is_zero()) e.note = "gram form is zero; empty-surface convention";
    report.entries.push_back(std::move(e));
  }
  {
    ConditionEntry e;
    e.name = "EHB";
    const BoundednessResult r = ehb_constant(spec, omega, tol);
    e.status = r.bounded ? Status::Holds : Status::Fails;
    if (r.bounded) {
      e.constant = std::sqrt(r.value);
      std::ostringstream os;
      os << "zeta_min^2 = " << r.value;
      e.note = os.str();
    }
    e.witness = r.witness;
    e.witness_kind = r.witness_kind;
    report.entries.push_back(std::move(e));
  }
  {
    ConditionEntry e;
    e.name = "ADM";
    double max_delta = 0.0;
    bool all_bounded = true;
    for (int i = 0; i < spec.core_dim() && all_bounded; ++i) {
      const BoundednessResult r =
          adm_bound(spec, omega, core_basis_element(spec, i), tol);
      if (!r.bounded) {
        all_bounded = false;
        e.witness = r.witness;
        e.witness_kind = r.witness_kind;
        e.note = "left multiplication by e_" + std::to_string(i) +
                 " is unbounded against the Gram form";
      } else {
        max_delta = std::max(max_delta, r.value);
      }
    }
    e.status = all_bounded ? Status::Holds : Status::Fails;
    if (all_bounded) e.constant = max_delta;
    report.entries.push_back(std::move(e));
  }
  return report;
}

bool ConditionReport::all_hold() const {
  for (const auto& e : entries)
    if (e.status == Status::Fails) return false;
  return true;
}

const ConditionEntry* ConditionReport::find(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

bool is_representable(const QuasiAlgebraSpec& spec, const Functional& omega,
                      const Tolerances& tol) {
  const GramData gd = gram(spec, omega, tol);
  if (check_L1(gd, tol).status != Status::Holds) return false;
  if (check_L2(spec, omega, tol).status != Status::Holds) return false;
  return check_L3_all(spec, omega, tol).status == Status::Holds;
}

}  // namespace gnslab
