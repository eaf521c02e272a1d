#include "gnslab/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace gnslab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Commutative pointwise model on m nodes whose core spans the indicator
// functions of `core_nodes`.
QuasiAlgebraSpec pointwise_spec(int m, const std::vector<int>& core_nodes) {
  const int k = static_cast<int>(core_nodes.size());
  QuasiAlgebraSpec spec;
  spec.dim_ambient = m;
  spec.core.dim_core = k;

  std::vector<MultTensor::Entry> entries;
  for (int i = 0; i < k; ++i) entries.push_back({i, i, i, cplx(1.0)});
  spec.core.mult = MultTensor(k, entries);
  spec.core.star_core = Mat::Identity(k, k);
  spec.star_ambient = Mat::Identity(m, m);

  spec.inclusion = Mat::Zero(m, k);
  for (int i = 0; i < k; ++i) spec.inclusion(core_nodes[i], i) = 1.0;

  for (int i = 0; i < k; ++i) {
    SpMat e(m, m);
    e.insert(core_nodes[i], core_nodes[i]) = 1.0;
    e.makeCompressed();
    spec.left_action.push_back(e);
    spec.right_action.push_back(e);
  }

  if (k == m) {
    spec.has_unit = true;
    spec.unit = Vec::Ones(m);
  }
  return spec;
}

std::map<std::string, bool> pointwise_flags(bool ehb) {
  return {{"L1", true},  {"L2", true},  {"hermitian", true},
          {"L3", true},  {"HB", true},  {"EHB", ehb}};
}

}  // namespace

ModelBundle model_ell2(int n, int k) {
  if (k < 1 || k > n)
    throw DataError("model_ell2: need 1 <= K <= N");
  std::vector<int> core(k);
  for (int i = 0; i < k; ++i) core[i] = i;
  ModelBundle b;
  b.spec = pointwise_spec(n, core);
  b.omega.weights = Vec::Ones(n);
  b.name = "ell2";
  b.parameters = {{"N", double(n)}, {"K", double(k)}};
  b.expected = pointwise_flags(k == n);
  return b;
}

ModelBundle model_grid_integral(double a, double b, int points) {
  if (!(a < b)) throw DataError("model_grid_integral: need a < b");
  if (points < 3) throw DataError("model_grid_integral: need points >= 3");
  std::vector<int> core(points - 2);
  for (int i = 0; i + 2 < points; ++i) core[i] = i + 1;
  const double h = (b - a) / (points - 1);
  ModelBundle bundle;
  bundle.spec = pointwise_spec(points, core);
  bundle.omega.weights = h * Vec::Ones(points);
  bundle.name = "grid_integral";
  bundle.parameters = {{"a", a}, {"b", b}, {"points", double(points)}};
  // The continuum integral on L1-cap-L2 is representable but not Hilbert
  // bounded; every finite truncation is (G is positive definite), and the
  // sweeps exhibit the divergence instead.
  bundle.expected = pointwise_flags(false);
  bundle.expected["HB"] = false;
  return bundle;
}

ModelBundle model_pointeval(double a, double b, int points) {
  if (!(a < b)) throw DataError("model_pointeval: need a < b");
  if (points < 3) throw DataError("model_pointeval: need points >= 3");
  const double h = (b - a) / (points - 1);
  int zero_node = -1;
  for (int i = 1; i + 1 < points; ++i)
    if (std::abs(a + i * h) <= 1e-9 * std::max({std::abs(a), std::abs(b), 1.0}))
      zero_node = i;
  if (zero_node < 0)
    throw DataError(
        "model_pointeval: the grid must contain 0 as a strictly interior "
        "node");
  std::vector<int> core(points - 2);
  for (int i = 0; i + 2 < points; ++i) core[i] = i + 1;
  ModelBundle bundle;
  bundle.spec = pointwise_spec(points, core);
  bundle.omega.weights = Vec::Zero(points);
  bundle.omega.weights(zero_node) = 1.0;
  bundle.name = "pointeval";
  bundle.parameters = {{"a", a},
                       {"b", b},
                       {"points", double(points)},
                       {"zero_node", double(zero_node)}};
  bundle.expected = pointwise_flags(true);
  return bundle;
}

ModelBundle model_two_points() {
  ModelBundle bundle;
  bundle.spec = pointwise_spec(2, {0});
  bundle.omega.weights = Vec::Ones(2);
  bundle.name = "two_points";
  bundle.expected = pointwise_flags(false);
  return bundle;
}

ModelBundle model_matrix_corner(int d, std::uint64_t seed,
                                bool states_in_core) {
  if (d < 2) throw DataError("model_matrix_corner: need d >= 2");
  const int m = d * d;
  const int c = d - 1;  // corner block size
  const int k = c * c;
  const auto aidx = [d](int r, int col) { return r * d + col; };
  const auto cidx = [c](int r, int col) { return r * c + col; };

  QuasiAlgebraSpec spec;
  spec.dim_ambient = m;
  spec.core.dim_core = k;

  // E_{rc} E_{r'c'} = [c == r'] E_{rc'}.
  std::vector<MultTensor::Entry> entries;
  for (int r = 0; r < c; ++r)
    for (int s = 0; s < c; ++s)
      for (int t = 0; t < c; ++t)
        entries.push_back({cidx(r, s), cidx(s, t), cidx(r, t), cplx(1.0)});
  spec.core.mult = MultTensor(k, entries);

  spec.core.star_core = Mat::Zero(k, k);
  for (int r = 0; r < c; ++r)
    for (int s = 0; s < c; ++s) spec.core.star_core(cidx(s, r), cidx(r, s)) = 1.0;
  spec.star_ambient = Mat::Zero(m, m);
  for (int r = 0; r < d; ++r)
    for (int s = 0; s < d; ++s) spec.star_ambient(aidx(s, r), aidx(r, s)) = 1.0;

  spec.inclusion = Mat::Zero(m, k);
  for (int r = 0; r < c; ++r)
    for (int s = 0; s < c; ++s) spec.inclusion(aidx(r, s), cidx(r, s)) = 1.0;

  for (int r = 0; r < c; ++r)
    for (int s = 0; s < c; ++s) {
      SpMat left(m, m), right(m, m);
      std::vector<Eigen::Triplet<cplx>> lt, rt;
      for (int t = 0; t < d; ++t) {
        lt.emplace_back(aidx(r, t), aidx(s, t), cplx(1.0));  // E_rs E_{s t}
        rt.emplace_back(aidx(t, s), aidx(t, r), cplx(1.0));  // E_{t r} E_rs
      }
      left.setFromTriplets(lt.begin(), lt.end());
      right.setFromTriplets(rt.begin(), rt.end());
      spec.left_action.push_back(std::move(left));
      spec.right_action.push_back(std::move(right));
    }

  ModelBundle bundle;
  bundle.spec = std::move(spec);
  bundle.name = "matrix_corner";
  bundle.parameters = {{"d", double(d)}, {"seed", double(seed)}};

  // omega(X) = sum_s c_s <X v_s, v_s>: positive combination of vector
  // states, so (L.1)-(L.3) and hermiticity hold by construction.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coeff(0.5, 2.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec w = Vec::Zero(m);
  for (int s = 0; s < d; ++s) {
    const double cs = coeff(rng);
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = cplx(gauss(rng), gauss(rng));
    if (states_in_core) v(d - 1) = 0.0;
    v /= v.norm();
    for (int r = 0; r < d; ++r)
      for (int col = 0; col < d; ++col)
        w(aidx(r, col)) += cs * std::conj(v(r)) * v(col);
  }
  bundle.omega.weights = w;
  bundle.expected = pointwise_flags(states_in_core);
  return bundle;
}

TentMoments tent_moments(int n) {
  if (n < 1) throw DataError("tent_moments: need n >= 1");
  const double nn = n;
  // Plateau of height 1 on [-n, n], linear ramps of width 1/n on both sides.
  return {2.0 * nn + 1.0 / nn, 2.0 * nn + 2.0 / (3.0 * nn)};
}

Sqrt2nValues sqrt2n_family(int n) {
  if (n < 1) throw DataError("sqrt2n_family: need n >= 1");
  return {std::sqrt(2.0 * n), 1.0};
}

SweepFamily parse_family(const std::string& name) {
  if (name == "ell2") return SweepFamily::Ell2;
  if (name == "tent") return SweepFamily::Tent;
  if (name == "sqrt2n") return SweepFamily::Sqrt2n;
  if (name == "pointeval") return SweepFamily::Pointeval;
  throw ParseError("unknown sweep family: " + name);
}

std::string family_name(SweepFamily family) {
  switch (family) {
    case SweepFamily::Ell2:
      return "ell2";
    case SweepFamily::Tent:
      return "tent";
    case SweepFamily::Sqrt2n:
      return "sqrt2n";
    default:
      return "pointeval";
  }
}

namespace {

SweepRow sweep_row(SweepFamily family, int size, const Tolerances& tol) {
  SweepRow row;
  row.family = family_name(family);
  row.size = size;
  switch (family) {
    case SweepFamily::Tent: {
      const TentMoments tm = tent_moments(size);
      const double ratio = tm.i1 * tm.i1 / tm.i2;
      // No finite Gram form: the ratio is the witnessed lower bound that
      // any admissible constant must exceed.
      row.hilbert_bound = ratio;
      row.ehb_status = "n/a";
      row.ehb_zeta_sq = kNaN;
      row.canonical_ratio = ratio;
      row.gamma_min = ratio;
      return row;
    }
    case SweepFamily::Sqrt2n: {
      const Sqrt2nValues v = sqrt2n_family(size);
      const double ratio = v.norm1 * v.norm1 / v.norm2sq;
      row.hilbert_bound = ratio;
      row.ehb_status = "n/a";
      row.ehb_zeta_sq = ratio;  // |omega(f*)|^2 over the unit squared norm
      row.canonical_ratio = ratio;
      row.gamma_min = ratio;
      return row;
    }
    case SweepFamily::Ell2: {
      const ModelBundle b = model_ell2(size, size);
      const BoundednessResult hb = hilbert_bound(b.spec, b.omega, tol);
      const BoundednessResult ehb = ehb_constant(b.spec, b.omega, tol);
      const SeminormForm form = seminorm_form(b.spec, b.omega, tol);
      Vec x(size);
      for (int i = 0; i < size; ++i) x(i) = 1.0 / (i + 1.0);
      const double px = form.p_value(x);
      const cplx wstar = eval(b.spec, b.omega,
                              star(b.spec, ambient_element(x)));
      row.hilbert_bound = hb.value;
      row.ehb_status = ehb.bounded ? "holds" : "fails";
      row.ehb_zeta_sq = ehb.bounded ? ehb.value : kNaN;
      row.canonical_ratio = std::norm(wstar) / px;
      row.gamma_min = hb.value;
      return row;
    }
    default: {
      const ModelBundle b = model_pointeval(-1.0, 1.0, size);
      const BoundednessResult hb = hilbert_bound(b.spec, b.omega, tol);
      const BoundednessResult ehb = ehb_constant(b.spec, b.omega, tol);
      const SeminormForm form = seminorm_form(b.spec, b.omega, tol);
      const int zero_node = static_cast<int>(b.parameters.at("zero_node"));
      Vec x = Vec::Zero(size);
      x(zero_node) = 1.0;
      const double px = form.p_value(x);
      const cplx wstar =
          eval(b.spec, b.omega, star(b.spec, ambient_element(x)));
      row.hilbert_bound = hb.value;
      row.ehb_status = ehb.bounded ? "holds" : "fails";
      row.ehb_zeta_sq = ehb.bounded ? ehb.value : kNaN;
      row.canonical_ratio = std::norm(wstar) / px;
      row.gamma_min = hb.value;
      return row;
    }
  }
}

int worker_cap() {
  if (const char* env = std::getenv("GNSLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

std::vector<SweepRow> sweep(SweepFamily family, const std::vector<int>& sizes,
                            const Tolerances& tol) {
  std::vector<SweepRow> rows(sizes.size());
  const int workers =
      std::max(1, std::min<int>(worker_cap(), static_cast<int>(sizes.size())));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto run = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= sizes.size()) return;
      try {
        rows[i] = sweep_row(family, sizes[i], tol);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (workers == 1) {
    run();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // The families built around a divergence argument must show it: strictly
  // increasing ratios along ascending sizes.
  if (family != SweepFamily::Pointeval &&
      std::is_sorted(sizes.begin(), sizes.end()) &&
      std::adjacent_find(sizes.begin(), sizes.end()) == sizes.end()) {
    for (size_t i = 1; i < rows.size(); ++i)
      if (!(rows[i].canonical_ratio > rows[i - 1].canonical_ratio)) {
        std::ostringstream os;
        os << "sweep: ratio failed to increase from size " << rows[i - 1].size
           << " to " << rows[i].size;
        throw ConsistencyError(os.str());
      }
  }
  return rows;
}

}  // namespace gnslab
