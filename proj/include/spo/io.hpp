#pragma once

#include <string>

#include "json.hpp"

#include "spo/bounds.hpp"
#include "spo/complexity.hpp"
#include "spo/geometry.hpp"
#include "spo/losses.hpp"

namespace spo {

using Json = nlohmann::json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json mat_to_json(const Mat& m);
/// Row-major nested arrays; every row must have the same length.
Mat mat_from_json(const Json& j);

// Region descriptors: {"kind": "...", "dim": d, ...}. Kinds are
// vertex_polytope, unit_simplex, dag_paths, lq_ball (and the shorthand
// interval {"lo", "hi"}).
Json region_to_json(const FeasibleRegion& region);
FeasibleRegion region_from_json(const Json& j);

// Cost domains: {"kind": "l2_ball", "radius": r} or
// {"kind": "enumerated", "members": [[...], ...]}.
Json cost_domain_to_json(const CostDomain& domain);
CostDomain cost_domain_from_json(const FeasibleRegion& region, const Json& j);

// Samples. CSV has one row per observation, the p feature components then the
// d cost components, under a header x1..xp,c1..cd. Headerless input needs p.
std::string sample_to_csv(const LabeledSample& sample);
LabeledSample sample_from_csv(const std::string& text, std::optional<int> p = std::nullopt);
Json sample_to_json(const LabeledSample& sample);
LabeledSample sample_from_json(const Json& j);
/// Dispatches on the file extension (.json, otherwise CSV).
LabeledSample read_sample_file(const std::string& path, std::optional<int> p = std::nullopt);

// Hypothesis sets: a JSON list whose entries are d x p matrices (nested rows)
// or {"table": [[...], ...]} prediction tables.
Json hypotheses_to_json(const FiniteHypothesisSet& set);
FiniteHypothesisSet hypotheses_from_json(const Json& j);

// Label tables: {"labels": [[label of each hypothesis] per point]}.
Json label_table_to_json(const LabelTable& table);
LabelTable label_table_from_json(const Json& j);

Json bound_inputs_to_json(const BoundInputs& in);
BoundInputs bound_inputs_from_json(const Json& j);
Json bound_report_to_json(const BoundReport& report);
/// theorem_id,variant,value,empirical_risk,complexity,deviation,uniformity,remainder
std::string bound_reports_to_csv(const std::vector<BoundReport>& reports);

Json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

/// Shortest round-trip decimal for a double ("%.17g" trimmed).
std::string format_double(double x);

}  // namespace spo
