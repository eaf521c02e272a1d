#include "gnslab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace gnslab {

namespace {

Json cplx_json(cplx v) { return Json::array({v.real(), v.imag()}); }

cplx cplx_from(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ParseError(where + ": complex numbers must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json dense_json(const Mat& m) {
  Json out = Json::array();
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out.push_back(cplx_json(m(r, c)));
  return out;
}

Mat dense_from(const Json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows * cols) {
    std::ostringstream os;
    os << where << ": expected " << rows * cols
       << " row-major complex entries, got "
       << (j.is_array() ? std::to_string(j.size()) : std::string("non-array"));
    throw ParseError(os.str());
  }
  Mat out(rows, cols);
  int i = 0;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) out(r, c) = cplx_from(j[i++], where);
  return out;
}

Json vec_json(const Vec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(cplx_json(v(i)));
  return out;
}

Vec vec_from(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where + ": expected a list");
  Vec out(j.size());
  for (size_t i = 0; i < j.size(); ++i)
    out(static_cast<int>(i)) = cplx_from(j[i], where);
  return out;
}

Json sparse_json(const SpMat& m, int index) {
  Json out = Json::array();
  std::vector<std::tuple<int, int, cplx>> entries;
  for (int o = 0; o < m.outerSize(); ++o)
    for (SpMat::InnerIterator it(m, o); it; ++it)
      entries.emplace_back(static_cast<int>(it.row()),
                           static_cast<int>(it.col()), it.value());
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b));
  });
  for (const auto& [p, q, v] : entries)
    out.push_back(Json::array({index, p, q, v.real(), v.imag()}));
  return out;
}

int int_field(const Json& j, const char* name) {
  if (!j.contains(name) || !j[name].is_number_integer())
    throw ParseError(std::string("model: missing integer field '") + name +
                     "'");
  return j[name].get<int>();
}

Json status_json(Status s) { return to_string(s); }

Json entry_json(const ConditionEntry& e) {
  Json out{{"name", e.name},
           {"status", status_json(e.status)},
           {"residual", e.residual}};
  if (e.constant) out["constant"] = *e.constant;
  if (!e.note.empty()) out["note"] = e.note;
  if (e.witness.size() > 0) {
    out["witness"] = vec_json(e.witness);
    out["witness_kind"] = e.witness_kind;
  }
  return out;
}

double nan_to_null_guard(double v) { return v; }

Json number_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  return nan_to_null_guard(v);
}

}  // namespace

Json model_to_json(const QuasiAlgebraSpec& spec) {
  const int m = spec.ambient_dim();
  const int k = spec.core_dim();
  Json j;
  j["dim_ambient"] = m;
  j["dim_core"] = k;
  j["inclusion"] = dense_json(spec.inclusion);
  j["star_core"] = dense_json(spec.core.star_core);
  j["star_ambient"] = dense_json(spec.star_ambient);

  Json mult = Json::array();
  auto entries = spec.core.mult.entries();
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.i, a.j, a.l) < std::tie(b.i, b.j, b.l);
  });
  for (const auto& e : entries)
    mult.push_back(
        Json::array({e.i, e.j, e.l, e.value.real(), e.value.imag()}));
  j["mult"] = mult;

  Json left = Json::array(), right = Json::array();
  for (int i = 0; i < k; ++i) {
    for (auto& row : sparse_json(spec.left_action[i], i)) left.push_back(row);
    for (auto& row : sparse_json(spec.right_action[i], i))
      right.push_back(row);
  }
  j["left_action"] = left;
  j["right_action"] = right;
  if (spec.has_unit) j["unit"] = vec_json(spec.unit);
  return j;
}

QuasiAlgebraSpec model_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("model: top level must be an object");
  QuasiAlgebraSpec spec;
  spec.dim_ambient = int_field(j, "dim_ambient");
  spec.core.dim_core = int_field(j, "dim_core");
  const int m = spec.dim_ambient;
  const int k = spec.core.dim_core;
  if (m < 1 || k < 1)
    throw ParseError("model: dimensions must be positive");

  if (!j.contains("inclusion"))
    throw ParseError("model: missing field 'inclusion'");
  spec.inclusion = dense_from(j["inclusion"], m, k, "inclusion");
  if (!j.contains("star_core"))
    throw ParseError("model: missing field 'star_core'");
  spec.core.star_core = dense_from(j["star_core"], k, k, "star_core");
  if (!j.contains("star_ambient"))
    throw ParseError("model: missing field 'star_ambient'");
  spec.star_ambient = dense_from(j["star_ambient"], m, m, "star_ambient");

  if (!j.contains("mult") || !j["mult"].is_array())
    throw ParseError("model: missing sparse tensor 'mult'");
  std::vector<MultTensor::Entry> entries;
  for (const auto& row : j["mult"]) {
    if (!row.is_array() || row.size() != 5)
      throw ParseError("mult: entries must be [i, j, l, re, im]");
    entries.push_back({row[0].get<int>(), row[1].get<int>(),
                       row[2].get<int>(),
                       cplx(row[3].get<double>(), row[4].get<double>())});
  }
  try {
    spec.core.mult = MultTensor(k, entries);
  } catch (const StructuralError& err) {
    throw ParseError(std::string("mult: ") + err.what());
  }

  auto actions = [&](const char* name) {
    if (!j.contains(name) || !j[name].is_array())
      throw ParseError(std::string("model: missing sparse tensor '") + name +
                       "'");
    std::vector<std::vector<Eigen::Triplet<cplx>>> trips(k);
    for (const auto& row : j[name]) {
      if (!row.is_array() || row.size() != 5)
        throw ParseError(std::string(name) +
                         ": entries must be [i, p, q, re, im]");
      const int i = row[0].get<int>();
      const int p = row[1].get<int>();
      const int q = row[2].get<int>();
      if (i < 0 || i >= k || p < 0 || p >= m || q < 0 || q >= m)
        throw ParseError(std::string(name) + ": entry index out of range");
      trips[i].emplace_back(p, q,
                            cplx(row[3].get<double>(), row[4].get<double>()));
    }
    std::vector<SpMat> out;
    for (int i = 0; i < k; ++i) {
      SpMat a(m, m);
      a.setFromTriplets(trips[i].begin(), trips[i].end());
      out.push_back(std::move(a));
    }
    return out;
  };
  spec.left_action = actions("left_action");
  spec.right_action = actions("right_action");

  if (j.contains("unit")) {
    spec.has_unit = true;
    spec.unit = vec_from(j["unit"], "unit");
    if (spec.unit.size() != m)
      throw ParseError("unit: coordinate length disagrees with dim_ambient");
  }
  return spec;
}

Json functional_to_json(const Functional& omega) {
  return Json{{"weights", vec_json(omega.weights)}};
}

Functional functional_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("weights"))
    throw ParseError("functional: missing field 'weights'");
  return {vec_from(j["weights"], "weights")};
}

namespace {

Json parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open file: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& err) {
    throw ParseError(path + ": " + err.what());
  }
}

}  // namespace

QuasiAlgebraSpec load_model(const std::string& path) {
  return model_from_json(parse_file(path));
}

void save_model(const std::string& path, const QuasiAlgebraSpec& spec) {
  write_text(path, model_to_json(spec).dump(2) + "\n");
}

Functional load_functional(const std::string& path) {
  return functional_from_json(parse_file(path));
}

void save_functional(const std::string& path, const Functional& omega) {
  write_text(path, functional_to_json(omega).dump(2) + "\n");
}

Json validation_to_json(const ValidationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations)
    violations.push_back(Json{{"axiom", v.axiom},
                              {"indices", v.indices},
                              {"residual", v.residual}});
  return Json{{"passed", report.passed},
              {"tolerance", report.tol},
              {"scale", report.scale},
              {"violations", violations}};
}

Json boundedness_to_json(const BoundednessResult& r) {
  Json j{{"bounded", r.bounded}};
  if (r.bounded) j["value"] = r.value;
  if (r.witness.size() > 0) {
    j["witness"] = vec_json(r.witness);
    j["witness_kind"] = r.witness_kind;
  }
  return j;
}

Json condition_report_to_json(const ConditionReport& report) {
  Json entries = Json::array();
  for (const auto& e : report.entries) entries.push_back(entry_json(e));
  return Json{{"all_hold", report.all_hold()}, {"conditions", entries}};
}

Json gns_report_to_json(const GNSRep& rep, const GnsVerification& v) {
  return Json{{"quotient_dim", rep.quotient_dim},
              {"welldef_residual", rep.welldef_residual},
              {"closed", "trivially"},
              {"strongly_cyclic", "equals cyclic in finite dimension"},
              {"pairing_residual", v.pairing_residual},
              {"star_residual", v.star_residual},
              {"homomorphism_residual", v.homomorphism_residual},
              {"scale", v.scale},
              {"holds", v.holds},
              {"operator_norms", v.operator_norms}};
}

Json extension_report_to_json(const ExtensionSpec& ext,
                              const ConditionEntry& positivity,
                              const ConditionReport& representable) {
  return Json{
      {"gamma", ext.gamma},
      {"minimal_gamma", ext.minimal_gamma},
      {"policy", ext.policy == GammaPolicy::Minimal ? "minimal" : "explicit"},
      {"below_minimum", ext.below_minimum},
      {"positivity", entry_json(positivity)},
      {"representable", condition_report_to_json(representable)}};
}

Json domain_report_to_json(const DomainDe& dom) {
  Json adm = Json::array();
  for (const auto& b : dom.adm_bounds) adm.push_back(boundedness_to_json(b));
  Json basis = Json::array();
  for (int c = 0; c < dom.basis.cols(); ++c)
    basis.push_back(vec_json(dom.basis.col(c)));
  Json j{{"dim", dom.dim()},
         {"basis", basis},
         {"star_stable", dom.star_stable},
         {"contains_core", dom.contains_core},
         {"adm_bounds", adm},
         {"adm_all_bounded", dom.adm_all_bounded},
         {"is_quasi_algebra_with_unit", dom.is_quasi_algebra_with_unit}};
  if (dom.restricted) {
    j["restriction_valid"] = dom.restriction_valid;
    j["restriction_representable"] = dom.restriction_representable;
  }
  return j;
}

Json chain_report_to_json(const ChainReport& rep) {
  Json items = Json::array();
  for (const auto& it : rep.items) {
    Json e{{"name", it.name}, {"status", status_json(it.status)}};
    if (!it.note.empty()) e["note"] = it.note;
    items.push_back(e);
  }
  return Json{{"gamma", rep.gamma},
              {"items", items},
              {"ehb_base", status_json(rep.ehb_base)},
              {"ehb_unitized", status_json(rep.ehb_unitized)},
              {"implications_ok", rep.implications_ok},
              {"discrepancies", rep.discrepancies}};
}

Json sweep_to_json(const std::vector<SweepRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows)
    out.push_back(Json{{"family", r.family},
                       {"size", r.size},
                       {"hilbert_bound", number_or_null(r.hilbert_bound)},
                       {"ehb_status", r.ehb_status},
                       {"ehb_zeta_sq", number_or_null(r.ehb_zeta_sq)},
                       {"canonical_ratio", number_or_null(r.canonical_ratio)},
                       {"gamma_min", number_or_null(r.gamma_min)}});
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "family,size,hilbert_bound,ehb_status,ehb_zeta_sq,canonical_ratio,"
        "gamma_min\n";
  auto cell = [](double v) {
    return std::isnan(v) ? std::string() : format_double(v);
  };
  for (const auto& r : rows)
    os << r.family << ',' << r.size << ',' << cell(r.hilbert_bound) << ','
       << r.ehb_status << ',' << cell(r.ehb_zeta_sq) << ','
       << cell(r.canonical_ratio) << ',' << cell(r.gamma_min) << '\n';
  return os.str();
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-" || path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open output file: " + path);
  out << text;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace gnslab
