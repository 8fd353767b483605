#include "loopbank/serialize.hpp"

#include <charconv>
#include <string>
#include <system_error>
#include <vector>

namespace loopbank::serialize {

namespace {

json cx_to_json(const cx& v) { return json::array({v.real(), v.imag()}); }

cx cx_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw ValidationError("schema",
                          std::string(where) + ": complex entries are [re, im] pairs");
  return cx(j[0].get<double>(), j[1].get<double>());
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(cx_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat mat_from_json(const json& j, Eigen::Index rows, Eigen::Index cols,
                  const char* where) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows)
    throw ValidationError("schema",
                          std::string(where) + ": expected " + std::to_string(rows) +
                              " matrix rows");
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
      throw ValidationError("schema",
                            std::string(where) + ": expected " + std::to_string(cols) +
                                " entries per row");
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = cx_from_json(row[static_cast<std::size_t>(k)], where);
  }
  return m;
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(cx_to_json(v(i)));
  return out;
}

json poly_to_json(const cpoly::ScalarPoly& p) {
  json out = json::array();
  for (const cx& c : p.coeffs) out.push_back(cx_to_json(c));
  return out;
}

cpoly::ScalarPoly poly_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.empty())
    throw ValidationError("schema", std::string(where) +
                                        ": expected a nonempty coefficient array");
  cpoly::ScalarPoly p;
  p.coeffs.clear();
  for (const json& e : j) p.coeffs.push_back(cx_from_json(e, where));
  return p;
}

const json& field(const json& doc, const char* name) {
  auto it = doc.find(name);
  if (it == doc.end())
    throw ValidationError("schema", std::string("missing field \"") + name + "\"");
  return *it;
}

void require_version(const json& doc) {
  const json& v = field(doc, "schema_version");
  if (!v.is_string() || v.get<std::string>() != "1")
    throw ValidationError("schema", "unsupported schema_version");
}

int int_field(const json& doc, const char* name, int lo) {
  const json& v = field(doc, name);
  if (!v.is_number_integer())
    throw ValidationError("schema", std::string("field \"") + name + "\" must be an integer");
  const auto value = v.get<long long>();
  if (value < lo || value > 1024)
    throw ValidationError("schema", std::string("field \"") + name + "\" out of range");
  return static_cast<int>(value);
}

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

DocKind detect_kind(const json& doc) {
  if (!doc.is_object()) throw ValidationError("schema", "document must be a JSON object");
  if (doc.contains("coeffs")) return DocKind::loop;
  if (doc.contains("filters")) return DocKind::bank;
  if (doc.contains("m0")) return DocKind::lowpass;
  throw ValidationError("schema",
                        "document has none of \"coeffs\", \"filters\", \"m0\"");
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError("schema", e.what());
  }
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json to_json(const loop::PolyLoop& a) {
  json coeffs = json::array();
  for (int k = 0; k < a.genus(); ++k) coeffs.push_back(mat_to_json(a.body.coeff(k)));
  return json{{"schema_version", "1"},
              {"n", a.n()},
              {"genus", a.genus()},
              {"coeffs", std::move(coeffs)}};
}

json to_json(const filters::FilterBank& b) {
  json filters = json::array();
  for (const cpoly::ScalarPoly& m : b.filters) filters.push_back(poly_to_json(m));
  return json{{"schema_version", "1"}, {"n", b.n}, {"filters", std::move(filters)}};
}

json lowpass_to_json(const cpoly::ScalarPoly& m0, int n) {
  json doc{{"schema_version", "1"}, {"m0", poly_to_json(m0)}};
  if (n > 0) doc["n"] = n;
  return doc;
}

loop::PolyLoop loop_from_json(const json& doc, double tol, bool verify) {
  if (!doc.is_object()) throw ValidationError("schema", "document must be a JSON object");
  require_version(doc);
  const int n = int_field(doc, "n", 1);
  const int genus = int_field(doc, "genus", 1);
  const json& coeffs = field(doc, "coeffs");
  if (!coeffs.is_array() || static_cast<int>(coeffs.size()) != genus)
    throw ValidationError("schema", "\"coeffs\" must hold exactly genus matrices");
  std::vector<Mat> blocks;
  blocks.reserve(static_cast<std::size_t>(genus));
  for (const json& c : coeffs) blocks.push_back(mat_from_json(c, n, n, "coeffs"));
  cpoly::MatPoly body{std::move(blocks)};
  if (verify) return loop::certify_loop(body, tol);
  loop::PolyLoop a;
  a.body = std::move(body);
  return a;
}

filters::FilterBank bank_from_json(const json& doc, double tol, bool verify) {
  if (!doc.is_object()) throw ValidationError("schema", "document must be a JSON object");
  require_version(doc);
  const int n = int_field(doc, "n", 1);
  const json& filters_j = field(doc, "filters");
  if (!filters_j.is_array() || static_cast<int>(filters_j.size()) != n)
    throw ValidationError("schema", "\"filters\" must hold exactly n coefficient arrays");
  filters::FilterBank bank;
  bank.n = n;
  for (const json& f : filters_j) bank.filters.push_back(poly_from_json(f, "filters"));
  if (verify) {
    const filters::QmfReport rep = filters::check_qmf(bank, tol);
    if (!rep.pass)
      throw ValidationError("qmf", "filter bank fails the unitarity check (defect " +
                                       std::to_string(rep.defect) + ")");
  }
  return bank;
}

cpoly::ScalarPoly lowpass_from_json(const json& doc, int* n_out) {
  if (!doc.is_object()) throw ValidationError("schema", "document must be a JSON object");
  require_version(doc);
  if (n_out != nullptr) {
    *n_out = -1;
    if (doc.contains("n")) *n_out = int_field(doc, "n", 1);
  }
  return poly_from_json(field(doc, "m0"), "m0");
}

json to_json(const loop::Factorization& f) {
  json projections = json::array();
  for (const loop::ElementaryFactor& e : f.rank_one_factors)
    projections.push_back(mat_to_json(e.q));
  json degree_projections = json::array();
  for (const Mat& q : f.degree_projections) degree_projections.push_back(mat_to_json(q));
  return json{{"schema_version", "1"},
              {"n", static_cast<int>(f.constant.rows())},
              {"mcmillan_degree", static_cast<int>(f.rank_one_factors.size())},
              {"v", mat_to_json(f.constant)},
              {"projections", std::move(projections)},
              {"degree_projections", std::move(degree_projections)}};
}

json to_json(const cuntz::RepReport& rep) {
  json eigenvalues = json::array();
  for (const cx& v : rep.spec.raw) eigenvalues.push_back(cx_to_json(v));
  json clusters = json::array();
  for (const cuntz::EigenCluster& c : rep.spec.clusters)
    clusters.push_back(json{{"value", cx_to_json(c.value)},
                            {"multiplicity", c.multiplicity}});
  json fixed = json::array();
  for (const Mat& m : rep.fixed_basis) fixed.push_back(mat_to_json(m));
  json minimal = json::array();
  for (const cuntz::MinimalProjection& p : rep.minimal_projections)
    minimal.push_back(json{{"rank", p.rank},
                           {"cyclic_index", p.cyclic_index},
                           {"matrix", mat_to_json(p.p)}});
  json states = json::array();
  for (const cuntz::CuntzState& s : rep.states)
    states.push_back(json{{"k", s.k}, {"v", vec_to_json(s.v)}});

  json reduction{{"present", rep.reduction.present}};
  if (rep.reduction.present) {
    reduction["block_residual"] = rep.reduction.block_residual;
    reduction["eq4_residual"] = rep.reduction.eq4_residual;
    reduction["eq5_residual"] = rep.reduction.eq5_residual;
    if (rep.reduction.b) reduction["b"] = to_json(*rep.reduction.b);
    if (rep.reduction.modified_bank)
      reduction["modified_bank"] = to_json(*rep.reduction.modified_bank);
    if (rep.reduction.reduced_bank)
      reduction["reduced_bank"] = to_json(*rep.reduction.reduced_bank);
  }

  return json{{"schema_version", "1"},
              {"n", rep.n},
              {"genus", rep.g},
              {"corner_r", rep.r},
              {"lambda0", rep.lambda0},
              {"spectrum", json{{"eigenvalues", std::move(eigenvalues)},
                                {"clusters", std::move(clusters)},
                                {"spectral_radius", rep.spec.spectral_radius}}},
              {"multiplicity_one",
               json{{"algebraic", rep.mult_one_algebraic},
                    {"geometric", static_cast<int>(rep.fixed_basis.size())}}},
              {"fixed_basis", std::move(fixed)},
              {"irreducible", rep.irreducible},
              {"identity_overlap", rep.identity_overlap},
              {"fixed_set_algebra", rep.fixed_set_algebra},
              {"fixed_set_abelian", rep.fixed_set_abelian},
              {"decomposition", json{{"resolved", rep.decomposition_resolved},
                                     {"disjoint", rep.summands_disjoint},
                                     {"minimal_projections", std::move(minimal)}}},
              {"cuntz_states", std::move(states)},
              {"reduction", std::move(reduction)}};
}

json to_json(const cuntz::Intertwiner& iw) {
  json basis = json::array();
  for (const Mat& m : iw.basis) basis.push_back(mat_to_json(m));
  return json{{"schema_version", "1"},
              {"dimension", iw.dimension},
              {"verdict", iw.verdict},
              {"e00_scalar", cx_to_json(iw.e00_scalar)},
              {"e00_fixed", iw.e00_fixed},
              {"basis", std::move(basis)}};
}

json to_json(const cascade::SupportReport& rep) {
  return json{{"empty", rep.empty},
              {"lo", rep.lo},
              {"hi", rep.hi},
              {"coarse_hi", rep.coarse_hi},
              {"sharp_hi", rep.sharp_hi},
              {"tail_mass", rep.tail_mass}};
}

std::string family_csv(const cascade::SampledFunction& phi,
                       const std::vector<cascade::SampledFunction>& psis) {
  for (const cascade::SampledFunction& p : psis)
    if (p.values.size() != phi.values.size())
      throw ValidationError("shape", "family members live on different grids");

  std::string out = "x,phi_re,phi_im";
  for (std::size_t i = 0; i < psis.size(); ++i) {
    const std::string tag = "psi" + std::to_string(i + 1);
    out += "," + tag + "_re," + tag + "_im";
  }
  out += "\n";
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    out += fmt(phi.x_at(i));
    out += ',';
    out += fmt(phi.values[i].real());
    out += ',';
    out += fmt(phi.values[i].imag());
    for (const cascade::SampledFunction& p : psis) {
      out += ',';
      out += fmt(p.values[i].real());
      out += ',';
      out += fmt(p.values[i].imag());
    }
    out += '\n';
  }
  return out;
}

}  // namespace loopbank::serialize
