#include "session.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shockcert/limits.hpp"

namespace shockcert::detail {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

algebra::FieldOptions field_options(const AssumptionContext& ctx) {
  algebra::FieldOptions o;
  o.non_negative = [ctx](const Expr& e) { return is_non_negative(e, ctx); };
  return o;
}

std::optional<std::size_t> set_split(const std::string& predicate) {
  const std::string prefix = "set-equal/";
  if (predicate.rfind(prefix, 0) != 0) return std::nullopt;
  try {
    return static_cast<std::size_t>(std::stoul(predicate.substr(prefix.size())));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

// Elements of one side with no field-equal partner on the other.
std::vector<Expr> unmatched(const std::vector<Expr>& side, const std::vector<Expr>& other,
                            const algebra::FieldOptions& fo) {
  std::vector<Expr> out;
  for (const auto& a : side) {
    bool found = false;
    for (const auto& b : other) found = found || a == b || algebra::field_equal(a, b, fo);
    if (!found) out.push_back(a);
  }
  return out;
}

bool number_in(const Expr& e, double lo, double hi) { return e.is_number() && e.value() >= lo && e.value() <= hi; }

void real_obligations(const Expr& e, const AssumptionContext& ctx, std::vector<Obligation>& out) {
  if (e.kind() != Kind::Apply) return;
  for (const auto& o : e.operands()) real_obligations(o, ctx, out);
  if (e.op() == Op::Sqrt && !is_non_negative(e[0], ctx)) out.push_back({e[0], ">= 0"});
  if (e.op() == Op::Div && !is_non_zero(e[1], ctx)) out.push_back({e[1], "!= 0"});
}

}  // namespace

bool evaluate_predicate(const std::string& predicate, const std::vector<Expr>& in, const AssumptionContext& ctx) {
  auto arity = [&](std::size_t n) { return in.size() == n; };
  if (predicate == "real") return arity(1) && is_real(in[0], ctx);
  if (predicate == "non-negative") return arity(1) && is_non_negative(in[0], ctx);
  if (predicate == "distinct") return arity(2) && are_distinct(in[0], in[1], ctx);
  if (predicate == "field-equal") return arity(2) && algebra::field_equal(in[0], in[1], field_options(ctx));
  if (predicate == "zero") return arity(1) && in[0].is_number() && in[0].value() == 0.0;
  if (predicate == "cfl-range") return arity(1) && in[0].is_number() && in[0].value() > 0.0 && in[0].value() <= 1.0;
  if (predicate == "between")
    return arity(3) && in[1].is_number() && in[2].is_number() && number_in(in[0], in[1].value(), in[2].value());
  if (predicate == "at-most") return arity(2) && in[1].is_number() && number_in(in[0], -kInfinity, in[1].value());
  if (predicate == "partitioned") return false;
  if (auto split = set_split(predicate)) {
    if (*split == 0 || *split >= in.size()) return false;
    std::vector<Expr> a(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(*split));
    std::vector<Expr> b(in.begin() + static_cast<std::ptrdiff_t>(*split), in.end());
    auto fo = field_options(ctx);
    return unmatched(a, b, fo).empty() && unmatched(b, a, fo).empty();
  }
  return false;
}

std::vector<Obligation> obligations_for(const std::string& predicate, const std::vector<Expr>& in,
                                        const AssumptionContext& ctx) {
  std::vector<Obligation> out;
  if (in.empty()) return {{num(0.0), "unsatisfiable " + predicate}};
  if (predicate == "real") {
    real_obligations(in[0], ctx, out);
    if (out.empty()) out.push_back({in[0], "real"});
  } else if (predicate == "non-negative") {
    out.push_back({in[0], ">= 0"});
  } else if ((predicate == "distinct" || predicate == "field-equal") && in.size() == 2) {
    Expr diff = algebra::field_normalize(sub(in[0], in[1]), field_options(ctx));
    out.push_back({diff, predicate == "distinct" ? "!= 0" : "== 0"});
  } else if (predicate == "zero") {
    out.push_back({in[0], "== 0"});
  } else if (predicate == "cfl-range") {
    out.push_back({in[0], "in (0, 1]"});
  } else if (predicate == "between" && in.size() == 3) {
    out.push_back({in[0], "in [" + to_string(in[1]) + ", " + to_string(in[2]) + "]"});
  } else if (predicate == "at-most" && in.size() == 2) {
    out.push_back({in[0], "<= " + to_string(in[1])});
  } else if (predicate == "partitioned") {
    out.push_back({in[0], "piecewise smooth"});
  } else if (auto split = set_split(predicate); split && *split <= in.size()) {
    std::vector<Expr> a(in.begin(), in.begin() + static_cast<std::ptrdiff_t>(*split));
    std::vector<Expr> b(in.begin() + static_cast<std::ptrdiff_t>(*split), in.end());
    auto fo = field_options(ctx);
    for (const auto& e : unmatched(a, b, fo)) out.push_back({e, "matches a declared max speed"});
    for (const auto& e : unmatched(b, a, fo)) out.push_back({e, "matches an eigenvalue magnitude"});
  }
  if (out.empty()) out.push_back({in[0], "satisfies " + predicate});
  return out;
}

bool sampleable(const std::string& relation) {
  return relation == ">= 0" || relation == "!= 0" || relation == "== 0" || relation == "real";
}

bool violates(const std::string& relation, double v) {
  if (relation == "real") return std::isnan(v);
  if (std::isnan(v)) return false;
  if (relation == ">= 0") return v < 0.0;
  if (relation == "!= 0") return v == 0.0;
  if (relation == "== 0") return std::fabs(v) > 1e-9;
  return false;
}

Session::Session(const AssumptionContext& ctx) : ctx_(ctx), field_(field_options(ctx)) {
  rewrite_.non_zero = non_zero_oracle(ctx_);
}

Session::Session(const AssumptionContext& ctx, const std::vector<CertStep>& recorded) : Session(ctx) {
  recorded_ = &recorded;
}

void Session::fail(const std::string& reason) const { throw ReplayFailure{cursor_, reason}; }

const CertStep& Session::expect(CertStep::Kind kind, const std::string& label) {
  if (cursor_ >= recorded_->size())
    fail("certificate ends early; expected " + std::string(step_kind_name(kind)) + " '" + label + "'");
  const CertStep& s = (*recorded_)[cursor_];
  if (s.kind != kind || s.label != label)
    fail("expected " + std::string(step_kind_name(kind)) + " '" + label + "', found " +
         std::string(step_kind_name(s.kind)) + " '" + s.label + "'");
  return s;
}

void Session::record(CertStep step) {
  if (recorded_) {
    ++cursor_;
    return;
  }
  steps_.push_back(std::move(step));
}

Expr Session::chain(const std::string& label, const Expr& start, Tier tier) {
  if (!recorded_) {
    CertStep st;
    st.kind = CertStep::Kind::Start;
    st.label = label;
    st.expr = start;
    steps_.push_back(std::move(st));
    auto [end, trace] = traced_simplify(start, rewrite_);
    for (auto& st : trace) {
      CertStep r;
      r.kind = CertStep::Kind::Rewrite;
      r.label = label;
      r.rule = st.rule;
      r.path = st.path;
      r.expr = st.after;
      steps_.push_back(std::move(r));
    }
    step_count_ += trace.size();
    if (tier == Tier::Field) {
      Expr f = algebra::field_normalize(end, field_);
      if (!(f == end)) {
        CertStep r;
        r.kind = CertStep::Kind::Rewrite;
        r.label = label;
        r.rule = "field-normalize";
        r.expr = f;
        steps_.push_back(std::move(r));
        ++step_count_;
        end = f;
      }
    }
    return end;
  }

  const CertStep& s = expect(CertStep::Kind::Start, label);
  if (!(s.expr == start)) fail("start expression of '" + label + "' differs from the recomputed one");
  ++cursor_;
  Expr cur = start;
  bool field_done = false;
  while (cursor_ < recorded_->size()) {
    const CertStep& r = (*recorded_)[cursor_];
    if (r.kind != CertStep::Kind::Rewrite || r.label != label) break;
    if (field_done) fail("rewrite after field normalization in '" + label + "'");
    if (r.rule == "field-normalize") {
      if (tier != Tier::Field) fail("field normalization not allowed in '" + label + "'");
      if (!r.path.empty()) fail("field normalization must apply at the root");
      if (!(algebra::field_normalize(cur, field_) == r.expr)) fail("field normalization does not reproduce");
      field_done = true;
    } else {
      if (!rule_exactness(r.rule)) fail("unknown rule '" + r.rule + "'");
      try {
        if (!replay_step({r.rule, r.path, cur, r.expr}, rewrite_)) fail("rule '" + r.rule + "' does not reproduce");
      } catch (const ReplayFailure&) {
        throw;
      } catch (const std::exception& e) {
        fail("rule '" + r.rule + "' cannot be replayed: " + e.what());
      }
    }
    cur = r.expr;
    ++cursor_;
    ++step_count_;
  }
  return cur;
}

bool Session::check(const std::string& label, const std::string& predicate, std::vector<Expr> inputs,
                    bool required) {
  bool verdict = evaluate_predicate(predicate, inputs, ctx_);
  if (recorded_) {
    const CertStep& s = expect(CertStep::Kind::Check, label);
    if (s.predicate != predicate) fail("predicate differs: expected " + predicate);
    if (s.inputs != inputs) fail("inputs of check '" + label + "' differ from the recomputed ones");
    if (s.required != required) fail("required flag of check '" + label + "' differs");
    if (s.verdict != verdict) fail("verdict of check '" + label + "' does not reproduce");
  }
  if (!verdict && required) {
    all_passed_ = false;
    for (auto& o : obligations_for(predicate, inputs, ctx_))
      if (std::find(obligations_.begin(), obligations_.end(), o) == obligations_.end()) obligations_.push_back(o);
  }
  CertStep c;
  c.kind = CertStep::Kind::Check;
  c.label = label;
  c.predicate = predicate;
  c.inputs = std::move(inputs);
  c.required = required;
  c.verdict = verdict;
  record(std::move(c));
  ++step_count_;
  return verdict;
}

LimitResult Session::limit(const std::string& label, const Expr& e, const std::string& var,
                           const ExtendedPoint& point) {
  LimitResult res = evaluate_limit(e, var, point);
  if (recorded_) {
    const CertStep& s = expect(CertStep::Kind::Limit, label);
    if (!(s.expr == e) || s.var != var || !(s.point == point)) fail("limit '" + label + "' is posed differently");
    if (!(s.limit == res)) fail("limit '" + label + "' does not reproduce");
  }
  CertStep c;
  c.kind = CertStep::Kind::Limit;
  c.label = label;
  c.expr = e;
  c.var = var;
  c.point = point;
  c.limit = res;
  record(std::move(c));
  step_count_ += res.steps;
  return res;
}

std::optional<std::vector<Piece>> Session::partition(const std::string& label, const Expr& e,
                                                     const std::string& var, double lo, double hi) {
  auto pieces = shockcert::partition(e, var, lo, hi);
  if (recorded_) {
    const CertStep& s = expect(CertStep::Kind::Partition, label);
    if (!(s.expr == e) || s.var != var || s.lo != lo || s.hi != hi) fail("partition '" + label + "' is posed differently");
    if (s.partitioned != pieces.has_value() || (pieces && s.pieces != *pieces))
      fail("partition '" + label + "' does not reproduce");
  }
  CertStep c;
  c.kind = CertStep::Kind::Partition;
  c.label = label;
  c.expr = e;
  c.var = var;
  c.lo = lo;
  c.hi = hi;
  c.partitioned = pieces.has_value();
  if (pieces) c.pieces = *pieces;
  step_count_ += c.pieces.size();
  record(std::move(c));
  return pieces;
}

void Session::finish() {
  if (recorded_ && cursor_ != recorded_->size()) fail("unexpected extra step");
}

}  // namespace shockcert::detail
