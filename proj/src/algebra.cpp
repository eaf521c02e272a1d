#include "gnslab/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace gnslab {

namespace {

double max_abs_dense(const Mat& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double max_abs_sparse(const SpMat& m) {
  double best = 0.0;
  for (int o = 0; o < m.outerSize(); ++o)
    for (SpMat::InnerIterator it(m, o); it; ++it)
      best = std::max(best, std::abs(it.value()));
  return best;
}

double max_abs_sparse(const SpMatRow& m) {
  double best = 0.0;
  for (int o = 0; o < m.outerSize(); ++o)
    for (SpMatRow::InnerIterator it(m, o); it; ++it)
      best = std::max(best, std::abs(it.value()));
  return best;
}

// Dense accumulator with a touched-index list so sparse triple products can
// be formed and reset in O(nnz) instead of O(k).
class Accum {
 public:
  explicit Accum(int n) : buf_(n, cplx(0.0)), used_(n, 0) {}

  void add(int i, cplx c) {
    if (!used_[i]) {
      used_[i] = 1;
      touched_.push_back(i);
    }
    buf_[i] += c;
  }

  double max_abs() const {
    double best = 0.0;
    for (int i : touched_) best = std::max(best, std::abs(buf_[i]));
    return best;
  }

  void reset() {
    for (int i : touched_) {
      buf_[i] = cplx(0.0);
      used_[i] = 0;
    }
    touched_.clear();
  }

 private:
  std::vector<cplx> buf_;
  std::vector<char> used_;
  std::vector<int> touched_;
};

void record(ValidationReport& report, const std::string& axiom,
            std::vector<int> indices, double residual, double tol) {
  if (residual > tol) {
    report.passed = false;
    report.violations.push_back({axiom, std::move(indices), residual});
  }
}

}  // namespace

MultTensor::MultTensor(int k, const std::vector<Entry>& entries) : k_(k) {
  if (k < 0) throw StructuralError("MultTensor: negative dimension");
  std::vector<Eigen::Triplet<cplx>> trips;
  trips.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.i < 0 || e.i >= k || e.j < 0 || e.j >= k || e.l < 0 || e.l >= k) {
      std::ostringstream os;
      os << "MultTensor: entry (" << e.i << "," << e.j << "," << e.l
         << ") out of range for dimension " << k;
      throw StructuralError(os.str());
    }
    trips.emplace_back(e.i * k + e.j, e.l, e.value);
  }
  data_.resize(std::max(k * k, 1), std::max(k, 1));
  data_.setFromTriplets(trips.begin(), trips.end());  // duplicates summed
  data_.prune([](int, int, const cplx& v) { return v != cplx(0.0); });
  data_.makeCompressed();
}

SpVec MultTensor::row(int i, int j) const {
  SpVec out(k_);
  for (SpMatRow::InnerIterator it(data_, i * k_ + j); it; ++it)
    out.insertBack(static_cast<int>(it.col())) = it.value();
  return out;
}

bool MultTensor::row_empty(int i, int j) const {
  return !SpMatRow::InnerIterator(data_, i * k_ + j);
}

Vec MultTensor::product(const Vec& a, const Vec& b) const {
  Vec out = Vec::Zero(k_);
  for (int i = 0; i < k_; ++i) {
    if (a(i) == cplx(0.0)) continue;
    for (int j = 0; j < k_; ++j) {
      const cplx c = a(i) * b(j);
      if (c == cplx(0.0)) continue;
      for (SpMatRow::InnerIterator it(data_, i * k_ + j); it; ++it)
        out(it.col()) += c * it.value();
    }
  }
  return out;
}

Mat MultTensor::left_matrix(const Vec& b) const {
  Mat out = Mat::Zero(k_, k_);
  for (int s = 0; s < k_; ++s) {
    if (b(s) == cplx(0.0)) continue;
    for (int j = 0; j < k_; ++j)
      for (SpMatRow::InnerIterator it(data_, s * k_ + j); it; ++it)
        out(it.col(), j) += b(s) * it.value();
  }
  return out;
}

std::vector<MultTensor::Entry> MultTensor::entries() const {
  std::vector<Entry> out;
  for (int r = 0; r < data_.outerSize(); ++r)
    for (SpMatRow::InnerIterator it(data_, r); it; ++it)
      out.push_back({r / k_, r % k_, static_cast<int>(it.col()), it.value()});
  return out;
}

Element core_element(const Vec& coords) { return {coords, Space::Core}; }
Element ambient_element(const Vec& coords) { return {coords, Space::Ambient}; }

Element core_basis_element(const QuasiAlgebraSpec& spec, int i) {
  Vec v = Vec::Zero(spec.core_dim());
  v(i) = 1.0;
  return {v, Space::Core};
}

Element ambient_basis_element(const QuasiAlgebraSpec& spec, int p) {
  Vec v = Vec::Zero(spec.ambient_dim());
  v(p) = 1.0;
  return {v, Space::Ambient};
}

Vec ambient_coords(const QuasiAlgebraSpec& spec, const Element& x) {
  if (x.space == Space::Ambient) {
    if (x.coords.size() != spec.ambient_dim())
      throw StructuralError("ambient_coords: coordinate length mismatch");
    return x.coords;
  }
  if (x.coords.size() != spec.core_dim())
    throw StructuralError("ambient_coords: coordinate length mismatch");
  return spec.embed(x.coords);
}

ValidationReport validate_star_algebra(const StarAlgebraSpec& spec,
                                       double tol) {
  const int k = spec.dim_core;
  if (spec.mult.dim() != k)
    throw StructuralError("validate_star_algebra: mult tensor dimension "
                          "disagrees with dim_core");
  if (spec.star_core.rows() != k || spec.star_core.cols() != k)
    throw StructuralError("validate_star_algebra: star_core is not k x k");

  ValidationReport report;
  report.scale = std::max({max_abs_sparse(spec.mult.flat()),
                           max_abs_dense(spec.star_core), 1.0});
  report.tol = tol * report.scale;

  // Associativity: (e_i e_j) e_l = e_i (e_j e_l).  Only triples where one of
  // the two sides can be nonzero need inspection.
  Accum acc(k);
  std::vector<char> in_pj(k, 0);
  for (int j = 0; j < k; ++j) {
    std::vector<int> pj, sj;
    for (int i = 0; i < k; ++i) {
      in_pj[i] = !spec.mult.row_empty(i, j);
      if (in_pj[i]) pj.push_back(i);
      if (!spec.mult.row_empty(j, i)) sj.push_back(i);
    }
    auto check_triple = [&](int i, int l) {
      // (e_i e_j) e_l - e_i (e_j e_l)
      for (SpMatRow::InnerIterator it(spec.mult.flat(), i * k + j); it; ++it)
        for (SpMatRow::InnerIterator jt(spec.mult.flat(),
                                        static_cast<int>(it.col()) * k + l);
             jt; ++jt)
          acc.add(static_cast<int>(jt.col()), it.value() * jt.value());
      for (SpMatRow::InnerIterator it(spec.mult.flat(), j * k + l); it; ++it)
        for (SpMatRow::InnerIterator jt(spec.mult.flat(),
                                        i * k + static_cast<int>(it.col()));
             jt; ++jt)
          acc.add(static_cast<int>(jt.col()), -it.value() * jt.value());
      record(report, "associativity", {i, j, l}, acc.max_abs(), report.tol);
      acc.reset();
    };
    for (int i : pj)
      for (int l = 0; l < k; ++l) check_triple(i, l);
    for (int l : sj)
      for (int i = 0; i < k; ++i)
        if (!in_pj[i]) check_triple(i, l);
  }

  // Involutivity: applying the star twice is the identity, i.e.
  // star_core * conj(star_core) = I.
  {
    const Mat twice = spec.star_core * spec.star_core.conjugate();
    const double res = max_abs_dense(twice - Mat::Identity(k, k));
    record(report, "involution", {}, res, report.tol);
  }

  // Anti-multiplicativity: (e_i e_j)* = e_j* e_i*.
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      Vec lhs = Vec::Zero(k);
      for (SpMatRow::InnerIterator it(spec.mult.flat(), i * k + j); it; ++it)
        lhs += std::conj(it.value()) * spec.star_core.col(it.col());
      const Vec rhs =
          spec.mult.product(spec.star_core.col(j), spec.star_core.col(i));
      const double res = (lhs - rhs).cwiseAbs().maxCoeff();
      record(report, "anti-multiplicativity", {i, j}, res, report.tol);
    }
  }

  return report;
}

ValidationReport validate_quasi_algebra(const QuasiAlgebraSpec& spec,
                                        double tol) {
  const int m = spec.dim_ambient;
  const int k = spec.core_dim();
  if (spec.inclusion.rows() != m || spec.inclusion.cols() != k)
    throw StructuralError("validate_quasi_algebra: inclusion is not m x k");
  if (spec.star_ambient.rows() != m || spec.star_ambient.cols() != m)
    throw StructuralError("validate_quasi_algebra: star_ambient is not m x m");
  if (static_cast<int>(spec.left_action.size()) != k ||
      static_cast<int>(spec.right_action.size()) != k)
    throw StructuralError(
        "validate_quasi_algebra: need one left and one right action matrix "
        "per core basis element");
  for (int i = 0; i < k; ++i)
    if (spec.left_action[i].rows() != m || spec.left_action[i].cols() != m ||
        spec.right_action[i].rows() != m || spec.right_action[i].cols() != m)
      throw StructuralError("validate_quasi_algebra: action matrix " +
                            std::to_string(i) + " is not m x m");
  if (spec.has_unit && spec.unit.size() != m)
    throw StructuralError("validate_quasi_algebra: unit coordinate length");

  ValidationReport report = validate_star_algebra(spec.core, tol);
  for (auto& v : report.violations) v.axiom = "core." + v.axiom;

  double scale = std::max(
      {report.scale, max_abs_dense(spec.inclusion),
       max_abs_dense(spec.star_ambient), spec.has_unit ? spec.unit.cwiseAbs().maxCoeff() : 0.0});
  for (const auto& a : spec.left_action)
    scale = std::max(scale, max_abs_sparse(a));
  for (const auto& a : spec.right_action)
    scale = std::max(scale, max_abs_sparse(a));
  report.scale = scale;
  report.tol = tol * scale;

  {
    Eigen::ColPivHouseholderQR<Mat> qr(spec.inclusion);
    if (qr.rank() < k)
      throw StructuralError(
          "validate_quasi_algebra: inclusion map is not injective");
  }

  // Star extension: star_ambient restricted to the core image agrees with
  // star_core, and is itself an involution.
  {
    const Mat res = spec.star_ambient * spec.inclusion.conjugate() -
                    spec.inclusion * spec.core.star_core;
    record(report, "inclusion-star", {}, max_abs_dense(res), report.tol);
    const Mat twice = spec.star_ambient * spec.star_ambient.conjugate();
    record(report, "ambient-involution", {},
           max_abs_dense(twice - Mat::Identity(m, m)), report.tol);
  }

  // J intertwines products: J(e_i e_j) = L_i J(e_j) = R_j J(e_i).
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      Vec jprod = Vec::Zero(m);
      for (SpMatRow::InnerIterator it(spec.core.mult.flat(), i * k + j); it;
           ++it)
        jprod += it.value() * spec.inclusion.col(it.col());
      const Vec left = spec.left_action[i] * spec.inclusion.col(j);
      const Vec right = spec.right_action[j] * spec.inclusion.col(i);
      record(report, "inclusion-product-left", {i, j},
             (jprod - left).cwiseAbs().maxCoeff(), report.tol);
      record(report, "inclusion-product-right", {i, j},
             (jprod - right).cwiseAbs().maxCoeff(), report.tol);
    }
  }

  // Module laws.
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      SpMat expect(m, m);
      for (SpMatRow::InnerIterator it(spec.core.mult.flat(), i * k + j); it;
           ++it) {
        expect += SpMat(it.value() * spec.left_action[it.col()]);
      }
      record(report, "module-left", {i, j},
             max_abs_sparse(SpMat(spec.left_action[i] * spec.left_action[j] -
                                  expect)),
             report.tol);
      SpMat expect_r(m, m);
      for (SpMatRow::InnerIterator it(spec.core.mult.flat(), i * k + j); it;
           ++it)
        expect_r += SpMat(it.value() * spec.right_action[it.col()]);
      record(report, "module-right", {i, j},
             max_abs_sparse(SpMat(spec.right_action[j] * spec.right_action[i] -
                                  expect_r)),
             report.tol);
      record(report, "module-commute", {i, j},
             max_abs_sparse(SpMat(spec.left_action[i] * spec.right_action[j] -
                                  spec.right_action[j] * spec.left_action[i])),
             report.tol);
    }
  }

  // Involution exchanges the actions: (e_i x)* = x* e_i*.
  for (int i = 0; i < k; ++i) {
    const Mat lhs = spec.star_ambient * Mat(spec.left_action[i].conjugate());
    SpMat rstar(m, m);
    for (int t = 0; t < k; ++t) {
      const cplx c = spec.core.star_core(t, i);
      if (c != cplx(0.0)) rstar += SpMat(c * spec.right_action[t]);
    }
    const Mat rhs = rstar * spec.star_ambient;
    record(report, "involution-action", {i}, max_abs_dense(lhs - rhs),
           report.tol);
  }

  if (spec.has_unit) {
    Eigen::ColPivHouseholderQR<Mat> qr(spec.inclusion);
    const Vec c = qr.solve(spec.unit);
    record(report, "unit-membership", {},
           (spec.inclusion * c - spec.unit).cwiseAbs().maxCoeff(), report.tol);
    SpMat lsum(m, m), rsum(m, m);
    for (int i = 0; i < k; ++i) {
      if (c(i) == cplx(0.0)) continue;
      lsum += SpMat(c(i) * spec.left_action[i]);
      rsum += SpMat(c(i) * spec.right_action[i]);
    }
    Mat id = Mat::Identity(m, m);
    record(report, "unit-left", {}, max_abs_dense(Mat(lsum) - id), report.tol);
    record(report, "unit-right", {}, max_abs_dense(Mat(rsum) - id),
           report.tol);
  }

  return report;
}

Element mult_core(const QuasiAlgebraSpec& spec, const Element& a,
                  const Element& b) {
  if (a.space != Space::Core || b.space != Space::Core)
    throw StructuralError("mult_core: both factors must carry the core tag");
  if (a.coords.size() != spec.core_dim() || b.coords.size() != spec.core_dim())
    throw StructuralError("mult_core: coordinate length mismatch");
  return {spec.core.mult.product(a.coords, b.coords), Space::Core};
}

Element act(const QuasiAlgebraSpec& spec, const Element& a, const Element& x,
            Side side) {
  if (a.space != Space::Core)
    throw StructuralError("act: the acting element must carry the core tag");
  if (x.space != Space::Ambient)
    throw StructuralError("act: the acted-on element must be ambient");
  if (a.coords.size() != spec.core_dim() ||
      x.coords.size() != spec.ambient_dim())
    throw StructuralError("act: coordinate length mismatch");
  Vec out = Vec::Zero(spec.ambient_dim());
  const auto& actions =
      side == Side::Left ? spec.left_action : spec.right_action;
  for (int i = 0; i < spec.core_dim(); ++i) {
    if (a.coords(i) == cplx(0.0)) continue;
    out += a.coords(i) * (actions[i] * x.coords);
  }
  return {out, Space::Ambient};
}

Element star(const QuasiAlgebraSpec& spec, const Element& x) {
  if (x.space == Space::Core) {
    if (x.coords.size() != spec.core_dim())
      throw StructuralError("star: coordinate length mismatch");
    return {spec.core.star_core * x.coords.conjugate(), Space::Core};
  }
  if (x.coords.size() != spec.ambient_dim())
    throw StructuralError("star: coordinate length mismatch");
  return {spec.star_ambient * x.coords.conjugate(), Space::Ambient};
}

QuasiAlgebraSpec unitize(const QuasiAlgebraSpec& spec) {
  if (spec.has_unit)
    std::cerr << "gnslab: warning: unitizing a model that already declares a "
                 "unit; the adjoined unit supersedes it\n";
  const int m = spec.dim_ambient;
  const int k = spec.core_dim();

  QuasiAlgebraSpec out;
  out.dim_ambient = m + 1;
  out.core.dim_core = k + 1;

  std::vector<MultTensor::Entry> entries;
  for (const auto& e : spec.core.mult.entries()) entries.push_back(e);
  for (int i = 0; i < k; ++i) {
    entries.push_back({i, k, i, cplx(1.0)});  // (a,0)(0,1) = (a,0)
    entries.push_back({k, i, i, cplx(1.0)});  // (0,1)(a,0) = (a,0)
  }
  entries.push_back({k, k, k, cplx(1.0)});
  out.core.mult = MultTensor(k + 1, entries);

  out.core.star_core = Mat::Zero(k + 1, k + 1);
  out.core.star_core.topLeftCorner(k, k) = spec.core.star_core;
  out.core.star_core(k, k) = 1.0;

  out.star_ambient = Mat::Zero(m + 1, m + 1);
  out.star_ambient.topLeftCorner(m, m) = spec.star_ambient;
  out.star_ambient(m, m) = 1.0;

  out.inclusion = Mat::Zero(m + 1, k + 1);
  out.inclusion.topLeftCorner(m, k) = spec.inclusion;
  out.inclusion(m, k) = 1.0;

  out.left_action.reserve(k + 1);
  out.right_action.reserve(k + 1);
  for (int i = 0; i < k; ++i) {
    std::vector<Eigen::Triplet<cplx>> lt, rt;
    for (int o = 0; o < spec.left_action[i].outerSize(); ++o)
      for (SpMat::InnerIterator it(spec.left_action[i], o); it; ++it)
        lt.emplace_back(static_cast<int>(it.row()),
                        static_cast<int>(it.col()), it.value());
    for (int o = 0; o < spec.right_action[i].outerSize(); ++o)
      for (SpMat::InnerIterator it(spec.right_action[i], o); it; ++it)
        rt.emplace_back(static_cast<int>(it.row()),
                        static_cast<int>(it.col()), it.value());
    // (e_i,0)(x,l) = (e_i x + l e_i, 0): the new last column carries J e_i.
    for (int p = 0; p < m; ++p) {
      const cplx c = spec.inclusion(p, i);
      if (c != cplx(0.0)) {
        lt.emplace_back(p, m, c);
        rt.emplace_back(p, m, c);
      }
    }
    SpMat li(m + 1, m + 1), ri(m + 1, m + 1);
    li.setFromTriplets(lt.begin(), lt.end());
    ri.setFromTriplets(rt.begin(), rt.end());
    out.left_action.push_back(std::move(li));
    out.right_action.push_back(std::move(ri));
  }
  SpMat id(m + 1, m + 1);
  id.setIdentity();
  out.left_action.push_back(id);
  out.right_action.push_back(id);

  out.has_unit = true;
  out.unit = Vec::Zero(m + 1);
  out.unit(m) = 1.0;
  return out;
}

}  // namespace gnslab
