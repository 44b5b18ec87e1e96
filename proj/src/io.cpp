#include "spo/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <fstream>
#include <sstream>
#include <string_view>

namespace spo {

namespace {

void require(bool cond, const char* what) {
  if (!cond) throw FormatError(what);
}

void require(bool cond, const std::string& what) {
  if (!cond) throw FormatError(what);
}

double number(const Json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_number(), std::string("missing numeric field '") + key + "'");
  return j.at(key).get<double>();
}

int integer(const Json& j, const char* key) {
  require(j.contains(key) && j.at(key).is_number_integer(), std::string("missing integer field '") + key + "'");
  return j.at(key).get<int>();
}

}  // namespace

Json vec_to_json(const Vec& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vec vec_from_json(const Json& j) {
  require(j.is_array(), "expected a numeric array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), "expected a numeric array");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json mat_to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(vec_to_json(m.row(r).transpose()));
  return rows;
}

Mat mat_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "expected a non-empty array of rows");
  const Vec first = vec_from_json(j[0]);
  Mat m(static_cast<Eigen::Index>(j.size()), first.size());
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Vec row = vec_from_json(j[r]);
    require(row.size() == first.size(), "matrix rows differ in length");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

Json region_to_json(const FeasibleRegion& region) {
  Json j;
  j["kind"] = to_string(region.kind());
  j["dim"] = region.dim();
  switch (region.kind()) {
    case RegionKind::VertexPolytope: {
      Json vs = Json::array();
      for (const auto& v : region.vertices()) vs.push_back(vec_to_json(v));
      j["vertices"] = vs;
      break;
    }
    case RegionKind::UnitSimplex:
      break;
    case RegionKind::DagPathPolytope: {
      const Dag& dag = region.dag();
      j["nodes"] = dag.nodes;
      Json arcs = Json::array();
      for (const auto& a : dag.arcs) arcs.push_back({a.tail, a.head});
      j["arcs"] = arcs;
      j["source"] = dag.source;
      j["sink"] = dag.sink;
      break;
    }
    case RegionKind::LqBall:
      j["q"] = region.q();
      j["radius"] = region.radius();
      j["center"] = vec_to_json(region.center());
      break;
  }
  if (region.mu()) j["mu"] = *region.mu();
  return j;
}

FeasibleRegion region_from_json(const Json& j) {
  require(j.is_object() && j.contains("kind") && j["kind"].is_string(), "region descriptor needs a 'kind'");
  const std::string kind = j["kind"];
  auto check_dim = [&](const FeasibleRegion& r) {
    if (j.contains("dim")) require(integer(j, "dim") == r.dim(), "'dim' disagrees with the region data");
    return r;
  };
  if (kind == "vertex_polytope") {
    require(j.contains("vertices") && j["vertices"].is_array(), "vertex_polytope needs 'vertices'");
    std::vector<Vec> vs;
    for (const auto& v : j["vertices"]) vs.push_back(vec_from_json(v));
    return check_dim(FeasibleRegion::vertex_polytope(std::move(vs)));
  }
  if (kind == "unit_simplex") return FeasibleRegion::unit_simplex(integer(j, "dim"));
  if (kind == "dag_paths") {
    const Json& g = j.contains("dag") ? j["dag"] : j;
    Dag dag;
    dag.nodes = integer(g, "nodes");
    dag.source = integer(g, "source");
    dag.sink = integer(g, "sink");
    require(g.contains("arcs") && g["arcs"].is_array(), "dag_paths needs 'arcs'");
    for (const auto& a : g["arcs"]) {
      require(a.is_array() && a.size() == 2, "each arc is [tail, head]");
      dag.arcs.push_back({a[0].get<int>(), a[1].get<int>()});
    }
    return check_dim(FeasibleRegion::dag_paths(std::move(dag)));
  }
  std::optional<double> mu;
  if (j.contains("mu")) mu = number(j, "mu");
  if (kind == "lq_ball") {
    Vec center;
    if (j.contains("center")) {
      center = vec_from_json(j["center"]);
    } else {
      center = Vec::Zero(integer(j, "dim"));
    }
    const double q = j.contains("q") ? number(j, "q") : 2.0;
    return check_dim(FeasibleRegion::lq_ball(q, number(j, "radius"), center, mu));
  }
  if (kind == "interval") {
    const double lo = number(j, "lo"), hi = number(j, "hi");
    Vec c(1);
    c[0] = 0.5 * (lo + hi);
    return FeasibleRegion::lq_ball(2.0, 0.5 * (hi - lo), c, mu);
  }
  throw FormatError("unknown region kind '" + kind + "'");
}

Json cost_domain_to_json(const CostDomain& domain) {
  Json j;
  if (domain.kind == CostDomainKind::L2Ball) {
    j["kind"] = "l2_ball";
    j["radius"] = domain.ball_radius;
  } else {
    j["kind"] = "enumerated";
    Json ms = Json::array();
    for (const auto& m : domain.members) ms.push_back(vec_to_json(m));
    j["members"] = ms;
  }
  j["rho2"] = domain.rho2;
  j["rho_star"] = domain.rho_star;
  j["omega"] = domain.omega;
  return j;
}

CostDomain cost_domain_from_json(const FeasibleRegion& region, const Json& j) {
  require(j.is_object() && j.contains("kind") && j["kind"].is_string(), "cost domain needs a 'kind'");
  const std::string kind = j["kind"];
  if (kind == "l2_ball") return l2_cost_ball(region, number(j, "radius"));
  if (kind == "enumerated") {
    require(j.contains("members") && j["members"].is_array(), "enumerated cost domain needs 'members'");
    std::vector<Vec> ms;
    for (const auto& m : j["members"]) ms.push_back(vec_from_json(m));
    return enumerated_costs(region, std::move(ms));
  }
  throw FormatError("unknown cost domain kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

std::string sample_to_csv(const LabeledSample& sample) {
  sample.validate();
  std::string out;
  for (int j = 0; j < sample.p(); ++j) out += (j ? ",x" : "x") + std::to_string(j + 1);
  for (int j = 0; j < sample.d(); ++j) out += ",c" + std::to_string(j + 1);
  out += '\n';
  for (std::size_t i = 0; i < sample.n(); ++i) {
    for (int j = 0; j < sample.p(); ++j) out += (j ? "," : "") + format_double(sample.xs[i][j]);
    for (int j = 0; j < sample.d(); ++j) out += "," + format_double(sample.cs[i][j]);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

}  // namespace

LabeledSample sample_from_csv(const std::string& text, std::optional<int> p) {
  std::istringstream in(text);
  std::string line;
  LabeledSample sample;
  bool first = true;
  std::size_t lineno = 0;
  std::optional<std::size_t> width;  // column count fixed by the header
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto cells = split_csv_line(line);
    if (first) {
      first = false;
      if (!cells.empty() && !cells[0].empty() && (cells[0][0] == 'x' || cells[0][0] == 'X')) {
        int px = 0;
        for (const auto& c : cells)
          if (!c.empty() && (c[0] == 'x' || c[0] == 'X')) ++px;
        require(!p || *p == px, "header disagrees with the requested feature dimension");
        p = px;
        width = cells.size();
        continue;
      }
    }
    require(p.has_value(), "headerless CSV needs the feature dimension p");
    require(static_cast<int>(cells.size()) > *p, "CSV line " + std::to_string(lineno) + " has no cost columns");
    require(!width || cells.size() == *width,
            "CSV line " + std::to_string(lineno) + " does not match the header width");
    Vec x(*p), c(static_cast<Eigen::Index>(cells.size()) - *p);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      char* end = nullptr;
      const double v = std::strtod(cells[k].c_str(), &end);
      require(end && *end == '\0' && !cells[k].empty(), "bad number on CSV line " + std::to_string(lineno));
      if (static_cast<int>(k) < *p) {
        x[static_cast<Eigen::Index>(k)] = v;
      } else {
        c[static_cast<Eigen::Index>(k) - *p] = v;
      }
    }
    sample.xs.push_back(std::move(x));
    sample.cs.push_back(std::move(c));
  }
  try {
    sample.validate();
  } catch (const LossError& e) {
    throw FormatError(std::string("invalid sample: ") + e.what());
  }
  return sample;
}

Json sample_to_json(const LabeledSample& sample) {
  Json xs = Json::array(), cs = Json::array();
  for (const auto& x : sample.xs) xs.push_back(vec_to_json(x));
  for (const auto& c : sample.cs) cs.push_back(vec_to_json(c));
  return Json{{"xs", xs}, {"cs", cs}};
}

LabeledSample sample_from_json(const Json& j) {
  require(j.is_object() && j.contains("xs") && j.contains("cs"), "sample JSON needs 'xs' and 'cs'");
  LabeledSample s;
  for (const auto& x : j["xs"]) s.xs.push_back(vec_from_json(x));
  for (const auto& c : j["cs"]) s.cs.push_back(vec_from_json(c));
  try {
    s.validate();
  } catch (const LossError& e) {
    throw FormatError(std::string("invalid sample: ") + e.what());
  }
  return s;
}

LabeledSample read_sample_file(const std::string& path, std::optional<int> p) {
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") return sample_from_json(read_json_file(path));
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return sample_from_csv(buf.str(), p);
}

Json hypotheses_to_json(const FiniteHypothesisSet& set) {
  Json arr = Json::array();
  for (const auto& h : set.items) {
    if (h.is_linear()) {
      arr.push_back(mat_to_json(h.matrix()));
    } else {
      Json t = Json::array();
      for (const auto& o : h.outputs()) t.push_back(vec_to_json(o));
      arr.push_back(Json{{"table", t}});
    }
  }
  return arr;
}

FiniteHypothesisSet hypotheses_from_json(const Json& j) {
  require(j.is_array() && !j.empty(), "hypothesis set must be a non-empty JSON list");
  FiniteHypothesisSet set;
  for (const auto& h : j) {
    if (h.is_object()) {
      require(h.contains("table") && h["table"].is_array(), "table hypothesis needs 'table'");
      std::vector<Vec> outs;
      for (const auto& o : h["table"]) outs.push_back(vec_from_json(o));
      set.items.push_back(Hypothesis::table(std::move(outs)));
    } else {
      set.items.push_back(Hypothesis::linear(mat_from_json(h)));
    }
  }
  return set;
}

Json label_table_to_json(const LabelTable& table) {
  Json rows = Json::array();
  for (int i = 0; i < table.points; ++i) {
    Json row = Json::array();
    for (int h = 0; h < table.hypotheses; ++h) row.push_back(table.at(i, h));
    rows.push_back(row);
  }
  return Json{{"labels", rows}};
}

LabelTable label_table_from_json(const Json& j) {
  require(j.is_object() && j.contains("labels") && j["labels"].is_array(), "label table needs 'labels'");
  const Json& rows = j["labels"];
  LabelTable t;
  t.points = static_cast<int>(rows.size());
  t.hypotheses = rows.empty() ? 0 : static_cast<int>(rows[0].size());
  for (const auto& row : rows) {
    require(row.is_array() && static_cast<int>(row.size()) == t.hypotheses, "label table is not rectangular");
    for (const auto& v : row) {
      require(v.is_number_integer(), "labels must be integers");
      t.labels.push_back(v.get<int>());
    }
  }
  return t;
}

namespace {

template <class T>
void put(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <class T>
void get(const Json& j, const char* key, std::optional<T>& v) {
  if (j.contains(key) && !j[key].is_null()) {
    require(j[key].is_number(), std::string("field '") + key + "' must be numeric");
    v = j[key].get<T>();
  }
}

}  // namespace

Json bound_inputs_to_json(const BoundInputs& in) {
  Json j;
  j["n"] = in.n;
  j["delta"] = in.delta;
  j["omega"] = in.omega;
  j["empirical_risk"] = in.empirical_risk;
  put(j, "rho2_C", in.rho2_C);
  put(j, "mu", in.mu);
  put(j, "gamma", in.gamma);
  put(j, "gamma_bar", in.gamma_bar);
  put(j, "d_N", in.d_N);
  put(j, "card_S", in.card_S);
  put(j, "d", in.d);
  put(j, "p", in.p);
  put(j, "rho2_S", in.rho2_S);
  put(j, "rad_spo", in.rad_spo);
  put(j, "rad_spo_estimate", in.rad_spo_estimate);
  put(j, "rad_multi", in.rad_multi);
  put(j, "rad_multi_estimate", in.rad_multi_estimate);
  put(j, "margin_risk", in.margin_risk);
  return j;
}

BoundInputs bound_inputs_from_json(const Json& j) {
  require(j.is_object(), "bound inputs must be a JSON object");
  static const std::set<std::string_view> known{
      "n",      "delta", "omega", "empirical_risk", "rho2_C",  "mu",      "gamma",
      "gamma_bar", "d_N", "card_S", "d",            "p",       "rho2_S",  "rad_spo",
      "rad_spo_estimate", "rad_multi", "rad_multi_estimate", "margin_risk"};
  for (const auto& [key, value] : j.items())
    require(known.count(key) > 0, "unknown bound input '" + key + "'");
  BoundInputs in;
  require(j.contains("n") && j["n"].is_number_integer() && j["n"].get<long long>() >= 1, "'n' must be an integer >= 1");
  in.n = j["n"].get<std::size_t>();
  if (j.contains("delta")) in.delta = j["delta"].get<double>();
  if (j.contains("omega")) in.omega = j["omega"].get<double>();
  if (j.contains("empirical_risk")) in.empirical_risk = j["empirical_risk"].get<double>();
  get(j, "rho2_C", in.rho2_C);
  get(j, "mu", in.mu);
  get(j, "gamma", in.gamma);
  get(j, "gamma_bar", in.gamma_bar);
  get(j, "d_N", in.d_N);
  get(j, "card_S", in.card_S);
  get(j, "d", in.d);
  get(j, "p", in.p);
  get(j, "rho2_S", in.rho2_S);
  get(j, "rad_spo", in.rad_spo);
  get(j, "rad_spo_estimate", in.rad_spo_estimate);
  get(j, "rad_multi", in.rad_multi);
  get(j, "rad_multi_estimate", in.rad_multi_estimate);
  get(j, "margin_risk", in.margin_risk);
  return in;
}

Json bound_report_to_json(const BoundReport& report) {
  Json terms = Json::array();
  for (const auto& t : report.terms) terms.push_back(Json{{"name", t.name}, {"value", t.value}});
  return Json{{"theorem_id", report.theorem_id},
              {"variant", to_string(report.variant)},
              {"value", report.value},
              {"terms", terms},
              {"inputs", bound_inputs_to_json(report.inputs)}};
}

std::string bound_reports_to_csv(const std::vector<BoundReport>& reports) {
  std::string out = "theorem_id,variant,value,empirical_risk,complexity,deviation,uniformity,remainder\n";
  for (const auto& r : reports) {
    out += r.theorem_id + "," + to_string(r.variant) + "," + format_double(r.value);
    for (const char* name : {"empirical_risk", "complexity", "deviation", "uniformity", "remainder"})
      out += "," + format_double(r.term(name));
    out += '\n';
  }
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), "cannot write " + path);
  out << text;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  // Shortest of %.15g..%.17g that round-trips.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

}  // namespace spo
