#include <cmath>
#include <random>

#include "doctest.h"
#include "gnslab/extension.hpp"
#include "gnslab/models.hpp"

using namespace gnslab;

namespace {

Vec random_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = cplx(gauss(rng), gauss(rng));
  return v;
}

// omega_e((x,eta)* (a,mu)) and omega_e((a,mu)* (a,mu)) via element algebra.
cplx pairing(const ExtensionSpec& ext, const Vec& xe, const Vec& ae) {
  const Element xs = star(ext.unitized, ambient_element(xe));
  const Element prod =
      act(ext.unitized, core_element(ae), xs, Side::Right);
  return eval(ext.unitized, ext.omega_e, prod);
}

double self_pairing(const ExtensionSpec& ext, const Vec& ae) {
  const Element as = star(ext.unitized, core_element(ae));
  const Element emb = ambient_element(ext.unitized.embed(as.coords));
  const Element prod = act(ext.unitized, core_element(ae), emb, Side::Right);
  return std::real(eval(ext.unitized, ext.omega_e, prod));
}

// One nilpotent core direction (e^2 = 0) inside a two-dimensional ambient
// space.  The Gram form vanishes identically, so any functional that is
// nonzero on the embedded core has an unbounded core restriction.
QuasiAlgebraSpec nilpotent_line() {
  QuasiAlgebraSpec s;
  s.dim_ambient = 2;
  s.core.dim_core = 1;
  s.core.mult = MultTensor(1, {});
  s.core.star_core = Mat::Identity(1, 1);
  s.star_ambient = Mat::Identity(2, 2);
  s.inclusion = Mat::Zero(2, 1);
  s.inclusion(0, 0) = 1.0;
  SpMat shift(2, 2);
  shift.insert(0, 1) = 1.0;
  s.left_action = {shift};
  s.right_action = {shift};
  return s;
}

}  // namespace

TEST_CASE("extension bookkeeping and the minimal value") {
  const ModelBundle b = model_two_points();
  const ExtensionSpec ext =
      extend_functional(b.spec, b.omega, GammaPolicy::Minimal);
  CHECK(ext.gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ext.minimal_gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(!ext.below_minimum);
  CHECK(ext.unitized.ambient_dim() == 3);
  CHECK(ext.omega_e.weights(2) == cplx(ext.gamma));
  // The extension restricts to omega on the embedded base.
  Vec x(2);
  x << cplx(0.3, 1.0), cplx(-2.0, 0.25);
  Vec xe = Vec::Zero(3);
  xe.head(2) = x;
  CHECK(eval(ext.unitized, ext.omega_e, ambient_element(xe)) ==
        eval(b.spec, b.omega, ambient_element(x)));

  SUBCASE("below the minimum is refused unless forced") {
    CHECK_THROWS_AS(
        extend_functional(b.spec, b.omega, GammaPolicy::Explicit, 0.5),
        DataError);
    const ExtensionSpec forced = extend_functional(
        b.spec, b.omega, GammaPolicy::Explicit, 0.5, true);
    CHECK(forced.below_minimum);
    CHECK(positivity_on_unitization(forced).status == Status::Fails);
  }

  SUBCASE("unbounded core restriction has no admissible gamma") {
    const QuasiAlgebraSpec nil = nilpotent_line();
    CHECK(validate_quasi_algebra(nil).passed);
    Functional omega;
    omega.weights = Vec(2);
    omega.weights << 1.0, 0.0;
    CHECK_THROWS_AS(extend_functional(nil, omega, GammaPolicy::Minimal),
                    PreconditionError);
  }
}

TEST_CASE("positivity at the minimal gamma across models") {
  for (const ModelBundle& b :
       {model_pointeval(-1, 1, 9), model_two_points(), model_ell2(4, 4),
        model_matrix_corner(3, 50, true)}) {
    const ExtensionSpec ext =
        extend_functional(b.spec, b.omega, GammaPolicy::Minimal);
    CHECK(positivity_on_unitization(ext).status == Status::Holds);
    // Hermiticity transfers to the extension.
    const ConditionEntry herm =
        check_hermitian(ext.unitized, ext.omega_e);
    CHECK(herm.status == Status::Holds);
    CHECK(herm.residual <= 1e-12);
  }
}

TEST_CASE("representability of the extension depends on gamma") {
  const ModelBundle b = model_two_points();

  const ExtensionSpec at_min =
      extend_functional(b.spec, b.omega, GammaPolicy::Explicit, 1.0);
  const ConditionReport r1 = check_extension_representable(at_min);
  CHECK(r1.find("L1")->status == Status::Holds);
  CHECK(r1.find("L2")->status == Status::Holds);
  CHECK(r1.find("L3")->status == Status::Fails);

  const ExtensionSpec above =
      extend_functional(b.spec, b.omega, GammaPolicy::Explicit, 2.0);
  CHECK(check_extension_representable(above).all_hold());

  const ExtensionSpec pe = extend_functional(
      model_pointeval(-1, 1, 9).spec, model_pointeval(-1, 1, 9).omega,
      GammaPolicy::Minimal);
  CHECK(check_extension_representable(pe).all_hold());
}

TEST_CASE("certificate constants: evaluation model closed forms") {
  const ModelBundle b = model_pointeval(-1, 1, 11);
  Vec x = Vec::Zero(11);
  x(5) = 1.0;  // the zero node

  SUBCASE("eta = 0") {
    const ExtensionCertificate c =
        extension_certificate(b.spec, b.omega, ambient_element(x), 0.0, 1.0);
    CHECK(c.gamma_x == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.zeta == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.k_bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.big_gamma == doctest::Approx(2.0).epsilon(1e-12));
  }

  SUBCASE("eta = 1") {
    const ExtensionCertificate c =
        extension_certificate(b.spec, b.omega, ambient_element(x), 1.0, 1.0);
    CHECK(c.k_bound == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.big_gamma == doctest::Approx(8.0).epsilon(1e-12));
  }

  SUBCASE("zero element") {
    const ExtensionCertificate c = extension_certificate(
        b.spec, b.omega, ambient_element(Vec(Vec::Zero(11))), 0.0, 1.0);
    CHECK(c.big_gamma == 0.0);
  }

  SUBCASE("gamma = 0 with a nonzero element diverges") {
    const ExtensionCertificate c =
        extension_certificate(b.spec, b.omega, ambient_element(x), 0.0, 0.0);
    CHECK(std::isinf(c.big_gamma));
  }

  SUBCASE("negative gamma is refused") {
    CHECK_THROWS_AS(extension_certificate(b.spec, b.omega,
                                          ambient_element(x), 0.0, -1.0),
                    DataError);
  }

  SUBCASE("without the extended bound the constants are undefined") {
    const ModelBundle tp = model_two_points();
    CHECK_THROWS_AS(
        extension_certificate(tp.spec, tp.omega,
                              ambient_element(Vec(Vec::Ones(2))), 0.0, 1.0),
        PreconditionError);
  }
}

TEST_CASE("certificate inequality holds on random pairs") {
  std::mt19937_64 rng(90210);
  for (int which = 0; which < 2; ++which) {
    const ModelBundle b = which == 0 ? model_pointeval(-1, 1, 9)
                                     : model_matrix_corner(4, 23, true);
    const ExtensionSpec ext =
        extend_functional(b.spec, b.omega, GammaPolicy::Minimal);
    const SeminormForm uni_form =
        seminorm_form(ext.unitized, ext.omega_e);
    const int m = b.spec.ambient_dim();
    const int k = b.spec.core_dim();
    for (int trial = 0; trial < 1500; ++trial) {
      Vec xe = random_vec(m + 1, rng);
      Vec ae = random_vec(k + 1, rng);
      if (trial % 3 == 0)  // push toward the degenerate part of the surface
        ae(k) = -ae.head(k).norm() / std::sqrt(ext.gamma);
      const ExtensionCertificate cert = extension_certificate(
          b.spec, b.omega, ambient_element(Vec(xe.head(m))), xe(m),
          ext.gamma);
      const double lhs = std::norm(pairing(ext, xe, ae));
      const double rhs = cert.big_gamma * self_pairing(ext, ae);
      const double scale = std::max({1.0, lhs, std::abs(rhs)});
      CHECK(rhs - lhs >= -1e-9 * scale);

      // The certificate dominates the exact minimal constant.
      if (trial % 50 == 0) {
        const BoundednessResult exact = l3_bound(uni_form, xe);
        REQUIRE(exact.bounded);
        CHECK(cert.big_gamma >=
              exact.value - 1e-9 * std::max(1.0, exact.value));
      }
    }
  }
}

TEST_CASE("domain of the extension: two-point model at the minimal gamma") {
  const ModelBundle b = model_two_points();
  const ExtensionSpec ext =
      extend_functional(b.spec, b.omega, GammaPolicy::Explicit, 1.0);
  const DomainDe dom = domain_De(ext);
  CHECK(dom.dim() == 2);
  CHECK(dom.star_stable);
  CHECK(dom.contains_core);
  CHECK(dom.adm_all_bounded);
  REQUIRE(dom.adm_bounds.size() == 2);
  for (const auto& a : dom.adm_bounds)
    CHECK(a.value == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(dom.is_quasi_algebra_with_unit);
  REQUIRE(dom.restricted.has_value());
  CHECK(dom.restricted->ambient_dim() == 2);
  CHECK(dom.restricted->core_dim() == 2);
  CHECK(dom.restriction_valid);
  CHECK(dom.restriction_representable);
  // Members of the domain vanish at the point the core cannot see, so the
  // bare indicator of that point stays outside.
  Vec outside = Vec::Zero(3);
  outside(1) = 1.0;
  const Vec proj = dom.basis * (dom.basis.adjoint() * outside);
  CHECK((proj - outside).norm() > 0.5);

  // The restricted functional evaluates like the extension on core images.
  for (int i = 0; i < 2; ++i) {
    const cplx via_restriction = eval(*dom.restricted, dom.restricted_omega,
                                      core_basis_element(*dom.restricted, i));
    const cplx via_extension =
        eval(ext.unitized, ext.omega_e, core_basis_element(ext.unitized, i));
    CHECK(std::abs(via_restriction - via_extension) < 1e-12);
  }
}

TEST_CASE("domain grows with gamma and fills the space when it can") {
  const ModelBundle b = model_two_points();
  const ExtensionSpec tight =
      extend_functional(b.spec, b.omega, GammaPolicy::Explicit, 1.0);
  const ExtensionSpec loose =
      extend_functional(b.spec, b.omega, GammaPolicy::Explicit, 2.0);
  CHECK(domain_De(tight).dim() == 2);
  CHECK(domain_De(loose).dim() == 3);

  const ModelBundle pe = model_pointeval(-1, 1, 9);
  const ExtensionSpec pe_ext =
      extend_functional(pe.spec, pe.omega, GammaPolicy::Minimal);
  const DomainDe pe_dom = domain_De(pe_ext);
  CHECK(pe_dom.dim() == pe.spec.ambient_dim() + 1);
  CHECK(pe_dom.restriction_representable);

  const ModelBundle el = model_ell2(4, 4);
  const ExtensionSpec el_ext =
      extend_functional(el.spec, el.omega, GammaPolicy::Explicit, 7.0);
  const DomainDe el_dom = domain_De(el_ext);
  CHECK(el_dom.dim() == 5);
  CHECK(el_dom.restriction_valid);
  CHECK(el_dom.restriction_representable);
}

TEST_CASE("extension refuses a non-hermitian functional") {
  ModelBundle nonherm = model_ell2(2, 2);
  nonherm.omega.weights << cplx(0, 1), 1.0;
  CHECK_THROWS_AS(
      extend_functional(nonherm.spec, nonherm.omega, GammaPolicy::Minimal),
      PreconditionError);
}

TEST_CASE("characterization chain: agreeing and disagreeing regimes") {
  SUBCASE("fully agreeing model") {
    const ModelBundle b = model_ell2(3, 3);
    const ChainReport rep =
        chain_report(b.spec, b.omega, GammaPolicy::Minimal);
    REQUIRE(rep.items.size() == 6);
    for (const auto& item : rep.items) CHECK(item.status == Status::Holds);
    CHECK(rep.ehb_base == Status::Holds);
    CHECK(rep.ehb_unitized == Status::Holds);
    CHECK(rep.implications_ok);
    CHECK(rep.discrepancies.empty());
  }

  SUBCASE("two-point model above the minimal gamma") {
    const ModelBundle b = model_two_points();
    const ChainReport rep =
        chain_report(b.spec, b.omega, GammaPolicy::Explicit, 2.0);
    CHECK(rep.gamma == 2.0);
    CHECK(rep.find("extension-representable")->status == Status::Holds);
    CHECK(rep.find("vector-form")->status == Status::Holds);
    CHECK(rep.find("hermitian+hilbert-bounded+riesz")->status ==
          Status::Holds);
    CHECK(rep.find("extensible-at-minimal-gamma")->status == Status::Fails);
    CHECK(rep.find("hermitian+bound-constants")->status == Status::Holds);
    CHECK(rep.find("hermitian+representable")->status == Status::Holds);
    CHECK(rep.ehb_base == Status::Fails);
    CHECK(rep.ehb_unitized == Status::Holds);
    CHECK(rep.implications_ok);
    CHECK(rep.discrepancies.size() == 2);
  }

  SUBCASE("two-point model at the minimal gamma") {
    const ModelBundle b = model_two_points();
    const ChainReport rep =
        chain_report(b.spec, b.omega, GammaPolicy::Minimal);
    CHECK(rep.find("extension-representable")->status == Status::Fails);
    CHECK(rep.find("extensible-at-minimal-gamma")->status == Status::Fails);
    CHECK(rep.find("hermitian+hilbert-bounded+riesz")->status ==
          Status::Holds);
    // At the minimal gamma the unit direction escapes the extended bound.
    CHECK(rep.ehb_unitized == Status::Fails);
    CHECK(rep.implications_ok);
    CHECK(!rep.discrepancies.empty());
  }
}
