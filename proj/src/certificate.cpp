#include "shockcert/certificate.hpp"

#include <sstream>

#include <json.hpp>

#include "shockcert/error.hpp"

namespace shockcert {

using json = nlohmann::ordered_json;

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Proved: return "Proved";
    case Verdict::ProvedConditional: return "ProvedConditional";
    case Verdict::NotProved: return "NotProved";
  }
  return "?";
}

std::optional<Verdict> verdict_from_name(std::string_view name) {
  if (name == "Proved") return Verdict::Proved;
  if (name == "ProvedConditional") return Verdict::ProvedConditional;
  if (name == "NotProved") return Verdict::NotProved;
  return std::nullopt;
}

std::string_view step_kind_name(CertStep::Kind k) {
  switch (k) {
    case CertStep::Kind::Start: return "start";
    case CertStep::Kind::Rewrite: return "rewrite";
    case CertStep::Kind::Check: return "check";
    case CertStep::Kind::Limit: return "limit";
    case CertStep::Kind::Partition: return "partition";
  }
  return "?";
}

namespace {

std::string num_text(double v) { return format_number(v); }

double text_num(const json& j) {
  Expr e = parse_expr(j.get<std::string>());
  if (!e.is_number()) throw ParseError("expected a number in certificate");
  return e.value();
}

json step_json(const CertStep& s, std::size_t index) {
  json j;
  j["i"] = index;
  j["kind"] = step_kind_name(s.kind);
  j["label"] = s.label;
  switch (s.kind) {
    case CertStep::Kind::Start: j["expr"] = to_string(s.expr); break;
    case CertStep::Kind::Rewrite:
      j["rule"] = s.rule;
      j["path"] = path_to_string(s.path);
      j["after"] = to_string(s.expr);
      break;
    case CertStep::Kind::Check: {
      j["predicate"] = s.predicate;
      j["required"] = s.required;
      json in = json::array();
      for (const auto& e : s.inputs) in.push_back(to_string(e));
      j["inputs"] = in;
      j["verdict"] = s.verdict;
      break;
    }
    case CertStep::Kind::Limit:
      j["expr"] = to_string(s.expr);
      j["var"] = s.var;
      j["point"] = s.point.to_string();
      j["method"] = s.limit.method;
      j["steps"] = s.limit.steps;
      j["indeterminate"] = s.limit.indeterminate;
      j["value"] = to_string(s.limit.value);
      break;
    case CertStep::Kind::Partition: {
      j["expr"] = to_string(s.expr);
      j["var"] = s.var;
      j["lo"] = num_text(s.lo);
      j["hi"] = num_text(s.hi);
      j["partitioned"] = s.partitioned;
      json ps = json::array();
      for (const auto& p : s.pieces) ps.push_back(json{{"lo", num_text(p.lo)}, {"hi", num_text(p.hi)}, {"body", to_string(p.body)}});
      j["pieces"] = ps;
      break;
    }
  }
  return j;
}

CertStep step_from_json(const json& j, std::size_t index) {
  if (j.at("i").get<std::size_t>() != index) throw ParseError("step index out of sequence at " + std::to_string(index));
  CertStep s;
  std::string kind = j.at("kind").get<std::string>();
  s.label = j.at("label").get<std::string>();
  if (kind == "start") {
    s.kind = CertStep::Kind::Start;
    s.expr = parse_expr(j.at("expr").get<std::string>());
  } else if (kind == "rewrite") {
    s.kind = CertStep::Kind::Rewrite;
    s.rule = j.at("rule").get<std::string>();
    s.path = path_from_string(j.at("path").get<std::string>());
    s.expr = parse_expr(j.at("after").get<std::string>());
  } else if (kind == "check") {
    s.kind = CertStep::Kind::Check;
    s.predicate = j.at("predicate").get<std::string>();
    s.required = j.at("required").get<bool>();
    for (const auto& e : j.at("inputs")) s.inputs.push_back(parse_expr(e.get<std::string>()));
    s.verdict = j.at("verdict").get<bool>();
  } else if (kind == "limit") {
    s.kind = CertStep::Kind::Limit;
    s.expr = parse_expr(j.at("expr").get<std::string>());
    s.var = j.at("var").get<std::string>();
    s.point = parse_extended_point(j.at("point").get<std::string>());
    s.limit.method = j.at("method").get<std::string>();
    s.limit.steps = j.at("steps").get<std::size_t>();
    s.limit.indeterminate = j.at("indeterminate").get<bool>();
    s.limit.value = parse_expr(j.at("value").get<std::string>());
  } else if (kind == "partition") {
    s.kind = CertStep::Kind::Partition;
    s.expr = parse_expr(j.at("expr").get<std::string>());
    s.var = j.at("var").get<std::string>();
    s.lo = text_num(j.at("lo"));
    s.hi = text_num(j.at("hi"));
    s.partitioned = j.at("partitioned").get<bool>();
    for (const auto& p : j.at("pieces")) s.pieces.push_back({text_num(p.at("lo")), text_num(p.at("hi")), parse_expr(p.at("body").get<std::string>())});
  } else {
    throw ParseError("unknown step kind '" + kind + "'");
  }
  return s;
}

json assumptions_json(const AssumptionContext& a) {
  json params = json::array();
  for (const auto& [p, v] : a.parameters) params.push_back(json{{"symbol", p}, {"value", num_text(v)}});
  json facts = json::array();
  for (const auto& f : a.facts) facts.push_back(to_string(f));
  return json{{"cons", a.cons_vars}, {"parameters", params}, {"facts", facts}};
}

AssumptionContext assumptions_from_json(const json& j) {
  AssumptionContext a;
  a.cons_vars = j.at("cons").get<std::vector<std::string>>();
  for (const auto& p : j.at("parameters")) a.parameters.emplace_back(p.at("symbol").get<std::string>(), text_num(p.at("value")));
  for (const auto& f : j.at("facts")) a.facts.push_back(parse_fact(f.get<std::string>()));
  return a;
}

}  // namespace

std::string serialize(const Certificate& c) {
  json head;
  head["format"] = "shockcert-certificate/1";
  head["goal"] = c.goal;
  head["subject"] = json{{"kind", c.subject_kind}, {"name", c.subject_name}, {"definition", c.subject_text}};
  head["assumptions"] = assumptions_json(c.assumptions);
  json cond = json::array();
  for (const auto& f : c.conditional_on) cond.push_back(to_string(f));
  head["conditional_on"] = cond;

  json tail;
  tail["verdict"] = verdict_name(c.verdict);
  json obs = json::array();
  for (const auto& o : c.obligations) obs.push_back(json{{"relation", o.relation}, {"expr", to_string(o.expr)}});
  tail["obligations"] = obs;
  json ws = json::array();
  for (const auto& w : c.witnesses) {
    json pt = json::object();
    for (const auto& [k, v] : w.point) pt[k] = num_text(v);
    ws.push_back(json{{"obligation", w.obligation}, {"point", pt}, {"value", num_text(w.value)}});
  }
  tail["witnesses"] = ws;
  tail["step_count"] = c.step_count;

  // Header and trailer pretty-printed; steps one per line so diffs stay local.
  std::string h = head.dump(2);
  std::string t = tail.dump(2);
  std::ostringstream out;
  out << h.substr(0, h.size() - 2) << ",\n  \"steps\": [";
  for (std::size_t i = 0; i < c.steps.size(); ++i) out << (i ? ",\n    " : "\n    ") << step_json(c.steps[i], i).dump();
  out << (c.steps.empty() ? "],\n" : "\n  ],\n");
  out << t.substr(2) << '\n';
  return out.str();
}

Certificate deserialize(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("certificate is not valid JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "shockcert-certificate/1") throw ParseError("unknown certificate format");
    Certificate c;
    c.goal = j.at("goal").get<std::string>();
    c.subject_kind = j.at("subject").at("kind").get<std::string>();
    c.subject_name = j.at("subject").at("name").get<std::string>();
    c.subject_text = j.at("subject").at("definition").get<std::string>();
    c.assumptions = assumptions_from_json(j.at("assumptions"));
    for (const auto& f : j.at("conditional_on")) c.conditional_on.push_back(parse_fact(f.get<std::string>()));
    const auto& steps = j.at("steps");
    for (std::size_t i = 0; i < steps.size(); ++i) c.steps.push_back(step_from_json(steps[i], i));
    auto v = verdict_from_name(j.at("verdict").get<std::string>());
    if (!v) throw ParseError("unknown verdict");
    c.verdict = *v;
    for (const auto& o : j.at("obligations"))
      c.obligations.push_back({parse_expr(o.at("expr").get<std::string>()), o.at("relation").get<std::string>()});
    for (const auto& w : j.at("witnesses")) {
      Witness wt;
      wt.obligation = w.at("obligation").get<std::size_t>();
      for (const auto& [k, v2] : w.at("point").items()) wt.point[k] = text_num(v2);
      wt.value = text_num(w.at("value"));
      c.witnesses.push_back(std::move(wt));
    }
    c.step_count = j.at("step_count").get<std::size_t>();
    return c;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("malformed certificate: ") + e.what());
  }
}

}  // namespace shockcert
