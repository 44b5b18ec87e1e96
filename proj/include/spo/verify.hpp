#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spo/io.hpp"

namespace spo {

/// Outcome of one property audit. `details` holds only seed-determined values
/// so the serialized report is reproducible byte for byte.
struct AuditResult {
  std::string name;
  bool passed = false;
  std::size_t samples = 0;
  Json details = Json::object();
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<AuditResult> audits;

  bool passed() const;
  Json to_json() const;
};

/// Sample sizes; the defaults match the documented property checks.
struct AuditSizes {
  std::size_t costs = 10000;          // random c per oracle / ordering check
  std::size_t feasible = 1000;        // random feasible w per region
  std::size_t pairs = 100000;         // Lipschitz pairs / triples
  std::size_t convexity = 10000;      // strong-convexity samples
  std::size_t dags = 200;             // random small DAGs
  std::size_t classes = 20;           // random finite classes (Massart)
  std::size_t mc_draws = 2000;        // Rademacher draws
};

AuditResult audit_oracle_optimality(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_dag_enumeration(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_lipschitz_like(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_margin_lipschitz(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_gap_bound(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_loss_ordering(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_strong_convexity(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_optimality_condition(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_binary_equivalence(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_multiclass_equivalence(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_massart_chain(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_natarajan_linear(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_closed_form_domination(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_bound_arithmetic(std::uint64_t seed, const AuditSizes& sizes = {});
AuditResult audit_bound_monotonicity(std::uint64_t seed, const AuditSizes& sizes = {});

/// Runs every audit in a fixed order.
VerifyReport verify_all(std::uint64_t seed, const AuditSizes& sizes = {});

}  // namespace spo
