#include "urtu/params.hpp"

#include <fstream>
#include <sstream>

#include "urtu/errors.hpp"
#include "urtu/rng.hpp"
#include "urtu/version.hpp"

namespace urtu {

std::string ValidationReport::to_string() const {
  if (ok()) return "ok";
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.constraint;
    if (v.i >= 0) {
      os << " at (" << v.i;
      if (v.j >= 0) os << "," << v.j;
      os << ")";
    }
    os << "; ";
  }
  return os.str();
}

namespace {

void check_support(const Matrix& m, const char* name,
                   const DirectedNetwork& g,
                   std::vector<Violation>& out) {
  const Index n = g.node_count();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      const double v = m(i, j);
      const bool arc = g.has_arc(i, j);
      if (v < 0.0)
        out.push_back({std::string(name) + " negative", i, j});
      else if (v > 0.0 && !arc)
        out.push_back({std::string("support(") + name + ") outside graph", i, j});
      else if (v == 0.0 && arc)
        out.push_back({std::string(name) + " zero on arc", i, j});
    }
}

}  // namespace

ValidationReport validate(const UrtuParams& p, const DirectedNetwork& gr,
                          const DirectedNetwork& gt) {
  const Index n = gr.node_count();
  if (gt.node_count() != n || p.beta_u.rows() != n || p.beta_u.cols() != n ||
      p.beta_t.rows() != n || p.beta_t.cols() != n || p.gamma_u.rows() != n ||
      p.gamma_u.cols() != n || p.gamma_r.rows() != n || p.gamma_r.cols() != n ||
      p.delta_r.size() != n || p.delta_t.size() != n)
    throw ValidationError("validate: dimension mismatch");

  ValidationReport rep;
  check_support(p.beta_u, "beta_u", gr, rep.violations);
  check_support(p.beta_t, "beta_t", gr, rep.violations);
  check_support(p.gamma_u, "gamma_u", gt, rep.violations);
  check_support(p.gamma_r, "gamma_r", gt, rep.violations);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (p.beta_t(i, j) > p.beta_u(i, j))
        rep.violations.push_back({"beta_t > beta_u", i, j});
      if (p.gamma_r(i, j) > p.gamma_u(i, j))
        rep.violations.push_back({"gamma_r > gamma_u", i, j});
    }
  for (Index i = 0; i < n; ++i) {
    if (!(p.delta_r(i) > 0.0)) rep.violations.push_back({"delta_r <= 0", i});
    if (!(p.delta_t(i) > 0.0)) rep.violations.push_back({"delta_t <= 0", i});
  }
  return rep;
}

UrtuParams sample_random(const DirectedNetwork& gr, const DirectedNetwork& gt,
                         const SamplingRanges& rg, std::uint64_t seed) {
  if (gr.node_count() != gt.node_count())
    throw ValidationError("sample_random: network sizes differ");
  auto check_range = [](double lo, double hi, const char* name) {
    if (!(lo >= 0.0) || !(hi > lo))
      throw ValidationError(std::string("sample_random: bad range for ") +
                            name);
  };
  check_range(rg.beta_lo, rg.beta_hi, "beta");
  check_range(rg.gamma_lo, rg.gamma_hi, "gamma");
  check_range(rg.delta_lo, rg.delta_hi, "delta");

  const Index n = gr.node_count();
  Rng rng(seed);
  UrtuParams p;
  p.beta_u = Matrix::Zero(n, n);
  p.beta_t = Matrix::Zero(n, n);
  p.gamma_u = Matrix::Zero(n, n);
  p.gamma_r = Matrix::Zero(n, n);
  p.delta_r = Vector::Zero(n);
  p.delta_t = Vector::Zero(n);

  // Draw order is fixed: rumor rates over gr arcs, truth rates over gt arcs,
  // then the forgetting rates. Any change breaks seed reproducibility.
  if (rg.homogeneous) {
    const double bu = rng.uniform_in_open(rg.beta_lo, rg.beta_hi);
    const double bt = rng.uniform_open() * bu;
    const double gu = rng.uniform_in_open(rg.gamma_lo, rg.gamma_hi);
    const double gm = rng.uniform_open() * gu;
    const double dr = rng.uniform_in_open(rg.delta_lo, rg.delta_hi);
    const double dt = rng.uniform_in_open(rg.delta_lo, rg.delta_hi);
    for (const auto& [i, j] : gr.arcs()) {
      p.beta_u(i, j) = bu;
      p.beta_t(i, j) = bt;
    }
    for (const auto& [i, j] : gt.arcs()) {
      p.gamma_u(i, j) = gu;
      p.gamma_r(i, j) = gm;
    }
    p.delta_r.setConstant(dr);
    p.delta_t.setConstant(dt);
  } else {
    for (const auto& [i, j] : gr.arcs()) {
      p.beta_u(i, j) = rng.uniform_in_open(rg.beta_lo, rg.beta_hi);
      p.beta_t(i, j) = rng.uniform_open() * p.beta_u(i, j);
    }
    for (const auto& [i, j] : gt.arcs()) {
      p.gamma_u(i, j) = rng.uniform_in_open(rg.gamma_lo, rg.gamma_hi);
      p.gamma_r(i, j) = rng.uniform_open() * p.gamma_u(i, j);
    }
    for (Index i = 0; i < n; ++i)
      p.delta_r(i) = rng.uniform_in_open(rg.delta_lo, rg.delta_hi);
    for (Index i = 0; i < n; ++i)
      p.delta_t(i) = rng.uniform_in_open(rg.delta_lo, rg.delta_hi);
  }
  return p;
}

const char* to_string(RateKind kind) {
  return kind == RateKind::linear ? "linear" : "saturating";
}

RateKind rate_kind_from_string(const std::string& s) {
  if (s == "linear") return RateKind::linear;
  if (s == "saturating") return RateKind::saturating;
  throw ValidationError("unknown rate family: " + s);
}

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json entries = json::array();
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) entries.push_back({i, j, m(i, j)});
  return json{{"format", "triplets"}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j, Index n, const char* name) {
  Matrix m = Matrix::Zero(n, n);
  const std::string format = j.value("format", "triplets");
  if (format == "triplets") {
    for (const auto& e : j.at("entries")) {
      const Index i = e.at(0).get<Index>();
      const Index k = e.at(1).get<Index>();
      if (i < 0 || i >= n || k < 0 || k >= n)
        throw ParseError(std::string("params: index out of range in ") + name);
      m(i, k) = e.at(2).get<double>();
    }
  } else if (format == "dense") {
    const auto& rows = j.at("rows");
    if (static_cast<Index>(rows.size()) != n)
      throw ParseError(std::string("params: bad dense row count in ") + name);
    for (Index i = 0; i < n; ++i) {
      const auto& row = rows.at(i);
      if (static_cast<Index>(row.size()) != n)
        throw ParseError(std::string("params: bad dense row width in ") + name);
      for (Index k = 0; k < n; ++k) m(i, k) = row.at(k).get<double>();
    }
  } else {
    throw ParseError(std::string("params: unknown matrix format in ") + name);
  }
  return m;
}

Vector vector_from_json(const json& j, Index n, const char* name) {
  if (static_cast<Index>(j.size()) != n)
    throw ParseError(std::string("params: bad vector length in ") + name);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = j.at(i).get<double>();
  return v;
}

}  // namespace

nlohmann::json params_to_json(const ParamsFile& file) {
  const auto& p = file.params;
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["n"] = p.node_count();
  j["family"] = {{"kind", to_string(file.family)}};
  if (file.family == RateKind::saturating)
    j["family"]["c"] = file.saturation;
  if (file.seed) j["seed"] = *file.seed;
  j["beta_u"] = matrix_to_json(p.beta_u);
  j["beta_t"] = matrix_to_json(p.beta_t);
  j["gamma_u"] = matrix_to_json(p.gamma_u);
  j["gamma_r"] = matrix_to_json(p.gamma_r);
  j["delta_r"] = std::vector<double>(p.delta_r.begin(), p.delta_r.end());
  j["delta_t"] = std::vector<double>(p.delta_t.begin(), p.delta_t.end());
  return j;
}

ParamsFile params_from_json(const nlohmann::json& j) {
  ParamsFile file;
  const Index n = j.at("n").get<Index>();
  if (n < 1) throw ParseError("params: n must be >= 1");
  file.params.beta_u = matrix_from_json(j.at("beta_u"), n, "beta_u");
  file.params.beta_t = matrix_from_json(j.at("beta_t"), n, "beta_t");
  file.params.gamma_u = matrix_from_json(j.at("gamma_u"), n, "gamma_u");
  file.params.gamma_r = matrix_from_json(j.at("gamma_r"), n, "gamma_r");
  file.params.delta_r = vector_from_json(j.at("delta_r"), n, "delta_r");
  file.params.delta_t = vector_from_json(j.at("delta_t"), n, "delta_t");
  if (j.contains("family")) {
    file.family = rate_kind_from_string(j.at("family").at("kind"));
    file.saturation = j.at("family").value("c", 0.0);
  }
  if (j.contains("seed")) file.seed = j.at("seed").get<std::uint64_t>();
  return file;
}

ParamsFile load_params(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open params file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return params_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_params(const ParamsFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write params file: " + path);
  out << params_to_json(file).dump(2) << "\n";
  if (!out) throw Error("write failed: " + path);
}

}  // namespace urtu
