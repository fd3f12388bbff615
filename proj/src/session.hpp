#pragma once

// Proof session shared by the provers and the certificate checker. A plan is
// written once against this interface; in Produce mode every call records a
// step, in Verify mode every call consumes the recorded step and recomputes it.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "shockcert/algebra.hpp"
#include "shockcert/analysis.hpp"
#include "shockcert/certificate.hpp"
#include "shockcert/rewrite.hpp"

namespace shockcert::detail {

struct ReplayFailure {
  std::size_t index;
  std::string reason;
};

enum class Tier { Fp, Field };

/// Predicates a check step may name. Unknown names evaluate to false.
bool evaluate_predicate(const std::string& predicate, const std::vector<Expr>& inputs, const AssumptionContext& ctx);

/// Residual obligations for a failed check.
std::vector<Obligation> obligations_for(const std::string& predicate, const std::vector<Expr>& inputs,
                                        const AssumptionContext& ctx);

bool sampleable(const std::string& relation);
/// True when `value` breaks the relation.
bool violates(const std::string& relation, double value);

class Session {
 public:
  /// Produce mode.
  explicit Session(const AssumptionContext& ctx);
  /// Verify mode over recorded steps.
  Session(const AssumptionContext& ctx, const std::vector<CertStep>& recorded);

  /// Start + rewrite chain: FP rules to normal form, then optionally one
  /// real-field normalization. Returns the chain's final expression.
  Expr chain(const std::string& label, const Expr& start, Tier tier);
  bool check(const std::string& label, const std::string& predicate, std::vector<Expr> inputs, bool required = true);
  LimitResult limit(const std::string& label, const Expr& e, const std::string& var, const ExtendedPoint& point);
  std::optional<std::vector<Piece>> partition(const std::string& label, const Expr& e, const std::string& var,
                                              double lo, double hi);

  /// Verify mode: every recorded step must have been consumed.
  void finish();

  const AssumptionContext& context() const { return ctx_; }
  bool all_passed() const { return all_passed_; }
  const std::vector<Obligation>& obligations() const { return obligations_; }
  std::vector<CertStep> take_steps() { return std::move(steps_); }
  std::size_t step_count() const { return step_count_; }

 private:
  const CertStep& expect(CertStep::Kind kind, const std::string& label);
  [[noreturn]] void fail(const std::string& reason) const;
  void record(CertStep step);

  AssumptionContext ctx_;
  RewriteOptions rewrite_;
  algebra::FieldOptions field_;
  const std::vector<CertStep>* recorded_ = nullptr;
  std::size_t cursor_ = 0;
  std::vector<CertStep> steps_;
  std::vector<Obligation> obligations_;
  bool all_passed_ = true;
  std::size_t step_count_ = 0;
};

}  // namespace shockcert::detail
