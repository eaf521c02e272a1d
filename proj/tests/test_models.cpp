#include <cmath>
#include <cstdlib>
#include <functional>
#include <random>
#include <vector>

#include "doctest.h"
#include "gnslab/models.hpp"

using namespace gnslab;

namespace {

// Composite Simpson rule.  The tent and its square are piecewise polynomial
// of degree <= 2, so on panels aligned with the breakpoints the rule is exact
// and serves as an independent oracle for the closed-form moments.
double simpson(const std::function<double(double)>& f, double a, double b,
               int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return acc * h / 3.0;
}

double tent(double t, int n) {
  const double nn = n;
  const double d = nn + 1.0 / nn - std::abs(t);
  return std::max(0.0, std::min(1.0, nn * d));
}

}  // namespace

TEST_CASE("every built-in bundle satisfies the algebra axioms") {
  for (const ModelBundle& b :
       {model_ell2(6, 3), model_grid_integral(-1, 1, 9),
        model_pointeval(-1, 1, 9), model_two_points(),
        model_matrix_corner(4, 11, false), model_matrix_corner(4, 11, true),
        model_matrix_corner(2, 7, true)}) {
    CAPTURE(b.name);
    const ValidationReport rep = validate_quasi_algebra(b.spec, 1e-10);
    CHECK(rep.passed);
    CHECK(rep.violations.empty());
    CHECK(b.omega.weights.size() == b.spec.ambient_dim());
  }
}

TEST_CASE("tent moments: closed form against Simpson quadrature") {
  for (int n : {1, 2, 3, 7, 25}) {
    CAPTURE(n);
    const TentMoments tm = tent_moments(n);
    CHECK(tm.i1 ==
          doctest::Approx(2.0 * n + 1.0 / n).epsilon(1e-12));
    CHECK(tm.i2 ==
          doctest::Approx(2.0 * n + 2.0 / (3.0 * n)).epsilon(1e-12));

    // Integrate ramp/plateau/ramp separately so every panel is polynomial.
    const double r = n + 1.0 / double(n);
    const auto f1 = [n](double t) { return tent(t, n); };
    const auto f2 = [n](double t) { return tent(t, n) * tent(t, n); };
    const double i1 = simpson(f1, -r, -n, 64) + simpson(f1, -n, n, 64) +
                      simpson(f1, n, r, 64);
    const double i2 = simpson(f2, -r, -n, 64) + simpson(f2, -n, n, 64) +
                      simpson(f2, n, r, 64);
    CHECK(tm.i1 == doctest::Approx(i1).epsilon(1e-12));
    CHECK(tm.i2 == doctest::Approx(i2).epsilon(1e-12));
  }
  CHECK_THROWS_AS(tent_moments(0), DataError);
}

TEST_CASE("flat bump family: unit squared norm, growing integral") {
  double prev = 0.0;
  for (int n : {1, 2, 8, 50}) {
    const Sqrt2nValues v = sqrt2n_family(n);
    CHECK(v.norm2sq == 1.0);
    CHECK(v.norm1 == doctest::Approx(std::sqrt(2.0 * n)).epsilon(1e-12));
    const double ratio = v.norm1 * v.norm1 / v.norm2sq;
    CHECK(ratio == doctest::Approx(2.0 * n).epsilon(1e-12));
    CHECK(ratio > prev);
    prev = ratio;
  }
  CHECK_THROWS_AS(sqrt2n_family(0), DataError);
}

TEST_CASE("sequence model: parameters, unit, single-element bound") {
  CHECK_THROWS_AS(model_ell2(3, 4), DataError);
  CHECK_THROWS_AS(model_ell2(3, 0), DataError);
  CHECK(model_ell2(4, 4).spec.has_unit);
  CHECK(!model_ell2(4, 3).spec.has_unit);
  CHECK(model_ell2(4, 4).expected.at("EHB"));
  CHECK(!model_ell2(4, 3).expected.at("EHB"));

  // omega(x* a) over the unit sphere of the core: the supremum is the
  // squared norm of the leading core block of x.
  const ModelBundle b = model_ell2(5, 3);
  std::mt19937_64 rng(5150);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int t = 0; t < 25; ++t) {
    Vec x(5);
    for (int i = 0; i < 5; ++i) x(i) = cplx(gauss(rng), gauss(rng));
    const BoundednessResult l3 = l3_bound(b.spec, b.omega, ambient_element(x));
    REQUIRE(l3.bounded);
    CHECK(l3.value ==
          doctest::Approx(x.head(3).squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("grid models: node layout and truncation metadata") {
  CHECK_THROWS_AS(model_pointeval(0.5, 1.0, 5), DataError);
  CHECK_THROWS_AS(model_pointeval(-1.0, 1.0, 4), DataError);
  const ModelBundle pe = model_pointeval(-1, 1, 5);
  CHECK(pe.parameters.at("zero_node") == 2.0);
  CHECK(pe.omega.weights(2) == cplx(1.0));
  CHECK(pe.expected.at("EHB"));

  // The quadrature functional has a bounded core restriction at every
  // truncation; the flag records that the full model does not.
  const ModelBundle g9 = model_grid_integral(-1, 1, 9);
  CHECK(!g9.expected.at("HB"));
  const double hb9 = hilbert_bound(g9.spec, g9.omega).value;
  CHECK(hb9 == doctest::Approx(2.0 * 7.0 / 8.0).epsilon(1e-12));
  const double hb17 =
      hilbert_bound(model_grid_integral(-1, 1, 17).spec,
                    model_grid_integral(-1, 1, 17).omega)
          .value;
  CHECK(hb17 > hb9);
}

TEST_CASE("corner models: the expected flags match the computed conditions") {
  CHECK_THROWS_AS(model_matrix_corner(1, 0), DataError);
  for (bool in_core : {false, true}) {
    const ModelBundle b = model_matrix_corner(4, 9, in_core);
    CAPTURE(in_core);
    CHECK(b.expected.at("EHB") == in_core);
    CHECK(ehb_constant(b.spec, b.omega).bounded == in_core);
    CHECK(hilbert_bound(b.spec, b.omega).bounded);
    CHECK(is_representable(b.spec, b.omega));
  }
  // Distinct seeds give distinct functionals on the same algebra.
  const ModelBundle s1 = model_matrix_corner(3, 1, true);
  const ModelBundle s2 = model_matrix_corner(3, 2, true);
  CHECK((s1.omega.weights - s2.omega.weights).norm() > 1e-3);
  CHECK(s1.spec.inclusion == s2.spec.inclusion);
}

TEST_CASE("sweep: sequence family reproduces the harmonic ratio") {
  const std::vector<SweepRow> rows = sweep(SweepFamily::Ell2, {2, 10, 100});
  REQUIRE(rows.size() == 3);
  for (const SweepRow& row : rows) {
    CHECK(row.family == "ell2");
    CHECK(row.ehb_status == "holds");
    CHECK(row.ehb_zeta_sq == doctest::Approx(row.size).epsilon(1e-9));
    CHECK(row.hilbert_bound == doctest::Approx(row.size).epsilon(1e-9));
    CHECK(row.gamma_min == row.hilbert_bound);
    double h = 0.0, p = 0.0;
    for (int i = 1; i <= row.size; ++i) {
      h += 1.0 / i;
      p += 1.0 / (double(i) * i);
    }
    CHECK(row.canonical_ratio == doctest::Approx(h * h / p).epsilon(1e-9));
  }
  CHECK(rows[1].canonical_ratio ==
        doctest::Approx(5.53557469305).epsilon(1e-9));
}

TEST_CASE("sweep: closed-form families carry witnessed lower bounds") {
  std::vector<int> sizes;
  for (int n = 1; n <= 10; ++n) sizes.push_back(n);
  const std::vector<SweepRow> tent_rows = sweep(SweepFamily::Tent, sizes);
  double prev = 0.0;
  for (const SweepRow& row : tent_rows) {
    const TentMoments tm = tent_moments(row.size);
    CHECK(row.ehb_status == "n/a");
    CHECK(std::isnan(row.ehb_zeta_sq));
    CHECK(row.canonical_ratio ==
          doctest::Approx(tm.i1 * tm.i1 / tm.i2).epsilon(1e-12));
    CHECK(row.canonical_ratio > row.size);
    CHECK(row.canonical_ratio > prev);
    CHECK(row.hilbert_bound == row.canonical_ratio);
    prev = row.canonical_ratio;
  }

  const std::vector<SweepRow> bump_rows =
      sweep(SweepFamily::Sqrt2n, {1, 2, 8, 50});
  for (const SweepRow& row : bump_rows) {
    CHECK(row.ehb_status == "n/a");
    CHECK(row.canonical_ratio ==
          doctest::Approx(2.0 * row.size).epsilon(1e-12));
  }

  const std::vector<SweepRow> pe_rows =
      sweep(SweepFamily::Pointeval, {5, 9, 17});
  for (const SweepRow& row : pe_rows) {
    CHECK(row.ehb_status == "holds");
    CHECK(row.hilbert_bound == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(row.ehb_zeta_sq == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(row.canonical_ratio == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("sweep: order of sizes and worker count do not change rows") {
  const std::vector<SweepRow> forward = sweep(SweepFamily::Tent, {3, 5, 9});
  const std::vector<SweepRow> shuffled = sweep(SweepFamily::Tent, {9, 3, 5});
  REQUIRE(shuffled.size() == 3);
  CHECK(shuffled[0].canonical_ratio == forward[2].canonical_ratio);
  CHECK(shuffled[1].canonical_ratio == forward[0].canonical_ratio);
  CHECK(shuffled[2].canonical_ratio == forward[1].canonical_ratio);

  setenv("GNSLAB_THREADS", "1", 1);
  const std::vector<SweepRow> serial = sweep(SweepFamily::Tent, {3, 5, 9});
  unsetenv("GNSLAB_THREADS");
  for (size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].size == forward[i].size);
    CHECK(serial[i].canonical_ratio == forward[i].canonical_ratio);
    CHECK(serial[i].hilbert_bound == forward[i].hilbert_bound);
  }
}

TEST_CASE("family names parse and print consistently") {
  for (const std::string& name : {"ell2", "tent", "sqrt2n", "pointeval"})
    CHECK(family_name(parse_family(name)) == name);
  CHECK_THROWS_AS(parse_family("bogus"), ParseError);
}
