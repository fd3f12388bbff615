#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "shockcert/analysis.hpp"
#include "shockcert/expr.hpp"
#include "shockcert/limits.hpp"

namespace shockcert {

enum class Verdict { Proved, ProvedConditional, NotProved };

std::string_view verdict_name(Verdict v);
std::optional<Verdict> verdict_from_name(std::string_view name);

struct CertStep {
  enum class Kind { Start, Rewrite, Check, Limit, Partition };
  Kind kind = Kind::Start;
  std::string label;  // chain name or check/limit/partition label

  // Start: expr. Rewrite: rule, path, expr = after.
  std::string rule;
  Path path;
  Expr expr;

  // Check.
  std::string predicate;
  std::vector<Expr> inputs;
  bool required = true;
  bool verdict = false;

  // Limit (expr is the function) and Partition (expr is the partitioned body).
  std::string var;
  ExtendedPoint point;
  LimitResult limit;
  double lo = 0.0, hi = 0.0;
  std::vector<Piece> pieces;
  bool partitioned = false;

  bool operator==(const CertStep&) const = default;
};

std::string_view step_kind_name(CertStep::Kind k);

struct Obligation {
  Expr expr;
  std::string relation;  // ">= 0", "!= 0", "== 0", "real", ...
  bool operator==(const Obligation&) const = default;
};

struct Witness {
  std::size_t obligation = 0;  // index into obligations
  std::map<std::string, double> point;
  double value = 0.0;
  bool operator==(const Witness&) const = default;
};

struct Certificate {
  std::string goal;
  std::string subject_kind;  // "system" or "limiter"
  std::string subject_name;
  std::string subject_text;  // printed definition, re-parsed by the checker
  AssumptionContext assumptions;
  std::vector<Fact> conditional_on;  // user-supplied or escalated facts
  std::vector<CertStep> steps;
  Verdict verdict = Verdict::NotProved;
  std::vector<Obligation> obligations;
  std::vector<Witness> witnesses;
  std::size_t step_count = 0;

  bool operator==(const Certificate&) const = default;
};

/// Stable text form: a JSON document whose steps are one record per line.
std::string serialize(const Certificate& c);
/// ParseError on malformed documents.
Certificate deserialize(std::string_view text);

}  // namespace shockcert
