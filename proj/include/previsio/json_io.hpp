#pragma once

// JSON in and out. Rationals travel as "p/q" strings; plain JSON integers are
// accepted on input. Object keys keep their insertion order so reports are
// byte-for-byte reproducible.

#include <nlohmann/json.hpp>

#include <istream>
#include <string>

#include "previsio/checkers.hpp"
#include "previsio/conglomerability.hpp"
#include "previsio/document.hpp"
#include "previsio/envelopes.hpp"
#include "previsio/extensions.hpp"

namespace previsio {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void bad_json(const std::string& what) { throw Error(Errc::ParseError, what); }

inline Rational rational_of(const Json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(Integer(j.dump()));
  bad_json(where + ": expected a rational as \"p/q\"");
}

inline std::string string_of(const Json& j, const std::string& where) {
  if (!j.is_string()) bad_json(where + ": expected a string");
  return j.get<std::string>();
}

inline Json atom_list(const SpaceRef& s, const AtomSet& set) {
  Json out = Json::array();
  for (auto w : set.members()) out.push_back(s->atom(w));
  return out;
}

inline Json names(const std::vector<std::string>& v) {
  Json out = Json::array();
  for (const auto& s : v) out.push_back(s);
  return out;
}

}  // namespace detail

inline Json rational_json(const Rational& r) { return to_string(r); }

// ---------------------------------------------------------------- documents

inline Document document_from_json(const Json& j) {
  using detail::bad_json;
  if (!j.is_object()) bad_json("top level must be an object");
  if (!j.contains("atoms") || !j["atoms"].is_array()) bad_json("missing \"atoms\" array");
  std::vector<std::string> atoms;
  for (const auto& a : j["atoms"]) atoms.push_back(detail::string_of(a, "atoms"));
  Document d(PossibilitySpace::create(std::move(atoms)));
  const auto& s = d.space;

  if (j.contains("variables")) {
    if (!j["variables"].is_object()) bad_json("\"variables\" must be an object");
    for (const auto& [name, vals] : j["variables"].items()) {
      if (!vals.is_object()) bad_json("variable " + name + " must map atoms to values");
      std::vector<Rational> v(s->size(), Rational(0));
      std::vector<bool> seen(s->size(), false);
      for (const auto& [atom, val] : vals.items()) {
        auto i = s->index_of(atom);
        if (!i) bad_json("variable " + name + " uses unknown atom " + atom);
        v[*i] = detail::rational_of(val, "variable " + name);
        seen[*i] = true;
      }
      for (std::size_t w = 0; w < s->size(); ++w)
        if (!seen[w]) bad_json("variable " + name + " has no value on atom " + s->atom(w));
      d.add_variable(name, RandomVariable(s, std::move(v)));
    }
  }
  if (j.contains("events")) {
    if (!j["events"].is_object()) bad_json("\"events\" must be an object");
    for (const auto& [name, members] : j["events"].items()) {
      if (!members.is_array()) bad_json("event " + name + " must list atoms");
      std::vector<std::string> m;
      for (const auto& a : members) m.push_back(detail::string_of(a, "event " + name));
      d.add_event(name, Event::of_atoms(s, m));
    }
  }
  if (!j.contains("assessments") || !j["assessments"].is_array()) bad_json("missing \"assessments\" array");
  for (const auto& e : j["assessments"]) {
    if (!e.is_object() || !e.contains("var") || !e.contains("lower"))
      bad_json("each assessment needs \"var\" and \"lower\"");
    auto var = detail::string_of(e["var"], "var");
    auto given = e.contains("given") ? detail::string_of(e["given"], "given") : std::string("Omega");
    std::optional<Rational> upper;
    if (e.contains("upper") && !e["upper"].is_null()) upper = detail::rational_of(e["upper"], var + "|" + given);
    d.assess(var, given, detail::rational_of(e["lower"], var + "|" + given), upper);
  }
  for (const char* key : {"partition", "cells", "notes"}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_array()) bad_json(std::string("\"") + key + "\" must be an array");
    std::vector<std::string> v;
    for (const auto& x : j[key]) v.push_back(detail::string_of(x, key));
    if (std::string(key) == "partition") d.partition = v;
    else if (std::string(key) == "cells") d.cells = v;
    else d.notes = v;
  }
  for (const auto& n : d.partition) d.event(n);
  for (const auto& n : d.cells) d.event(n);
  return d;
}

inline Document parse_document(std::istream& in) {
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return document_from_json(j);
}

inline Document parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::ParseError, e.what());
  }
  return document_from_json(j);
}

inline Json to_json(const Document& d) {
  Json j;
  j["atoms"] = d.space->atoms();
  Json vars = Json::object();
  for (const auto& [name, v] : d.variables) {
    Json m = Json::object();
    for (std::size_t w = 0; w < d.space->size(); ++w) m[d.space->atom(w)] = rational_json(v[w]);
    vars[name] = std::move(m);
  }
  j["variables"] = std::move(vars);
  Json evs = Json::object();
  for (const auto& [name, e] : d.events) evs[name] = e.atom_names();
  j["events"] = std::move(evs);
  Json as = Json::array();
  for (const auto& e : d.assessment.entries()) {
    Json x;
    x["var"] = e.var_label;
    x["given"] = e.given_label;
    x["lower"] = rational_json(e.lower);
    if (e.upper) x["upper"] = rational_json(*e.upper);
    as.push_back(std::move(x));
  }
  j["assessments"] = std::move(as);
  if (!d.partition.empty()) j["partition"] = detail::names(d.partition);
  if (!d.cells.empty()) j["cells"] = detail::names(d.cells);
  if (!d.notes.empty()) j["notes"] = detail::names(d.notes);
  return j;
}

// ---------------------------------------------------------------- bets

inline Json to_json(const Bet& bet, const Assessment& a) {
  Json terms = Json::array();
  for (const auto& t : bet.terms) {
    const auto& e = a[t.entry];
    Json x;
    x["var"] = e.var_label;
    x["given"] = e.given_label;
    x["stake"] = rational_json(t.stake);
    x["side"] = side_name(t.side);
    x["prevision"] = prevision_name(t.prevision);
    terms.push_back(std::move(x));
  }
  auto g = gain(bet, a);
  Json values = Json::object();
  for (std::size_t w = 0; w < a.space()->size(); ++w) values[a.space()->atom(w)] = rational_json(g.values[w]);
  Json j;
  j["terms"] = std::move(terms);
  j["gain"] = std::move(values);
  j["conditioning"] = detail::atom_list(a.space(), g.conditioning);
  j["support"] = detail::atom_list(a.space(), g.support);
  j["sup"] = rational_json(g.sup());
  if (!g.support.empty()) j["supOnSupport"] = rational_json(g.sup_on_support());
  return j;
}

/// Reads the terms of a witness back against the assessment it indexes.
inline Bet bet_from_json(const Json& j, const Assessment& a) {
  using detail::bad_json;
  if (!j.is_object() || !j.contains("terms") || !j["terms"].is_array()) bad_json("a bet needs a \"terms\" array");
  Bet bet;
  for (const auto& t : j["terms"]) {
    auto var = detail::string_of(t.at("var"), "var");
    auto given = detail::string_of(t.at("given"), "given");
    auto idx = a.find_label(var, given);
    if (!idx) throw Error(Errc::UnassessedVariable, "bet refers to unassessed " + var + "|" + given);
    BetTerm term{*idx};
    term.stake = detail::rational_of(t.at("stake"), "stake");
    auto side = detail::string_of(t.at("side"), "side");
    if (side != "for" && side != "against") bad_json("side must be \"for\" or \"against\"");
    term.side = side == "for" ? Side::For : Side::Against;
    if (t.contains("prevision")) {
      auto p = detail::string_of(t["prevision"], "prevision");
      if (p != "lower" && p != "upper") bad_json("prevision must be \"lower\" or \"upper\"");
      term.prevision = p == "lower" ? Prevision::Lower : Prevision::Upper;
    }
    bet.terms.push_back(term);
  }
  return bet;
}

// ---------------------------------------------------------------- results

inline Json to_json(const LpStats& s) {
  Json j;
  j["solves"] = s.solves;
  j["maxPivots"] = s.max_pivots;
  return j;
}

inline Json to_json(const Verdict& v) {
  Json j;
  j["notion"] = notion_name(v.notion);
  j["passed"] = v.passed;
  if (v.witness && v.witness_source) j["witness"] = to_json(*v.witness, *v.witness_source);
  if (v.prerequisite_failure) j["prerequisiteFailure"] = *v.prerequisite_failure;
  if (v.centering_failure) j["centeringFailure"] = *v.centering_failure;
  if (v.self_indicator_failure) j["selfIndicatorFailure"] = *v.self_indicator_failure;
  if (v.scope) j["scope"] = *v.scope;
  j["lpCount"] = v.lp_count;
  return j;
}

inline Json to_json(const ConglomerabilityReport& r) {
  Json j;
  j["target"] = rational_json(r.target);
  Json cells = Json::object();
  for (const auto& [label, v] : r.per_cell) cells[label] = rational_json(v);
  j["perCell"] = std::move(cells);
  j["infCell"] = rational_json(r.inf_cell);
  j["supCell"] = rational_json(r.sup_cell);
  j["conglomerable"] = r.conglomerable;
  j["gap"] = rational_json(r.gap);
  j["axiom8"] = r.axiom_8;
  return j;
}

inline Json to_json(const ExtensionResult& r, const std::string& target) {
  Json j;
  j["target"] = target;
  j["lower"] = rational_json(r.lower);
  j["upper"] = rational_json(r.upper);
  return j;
}

/// {"vertices": [[p/q, ...], ...], "perEntryMin": {label: p/q}}.
inline Json to_json(const CredalSet& c, const Assessment& a) {
  Json verts = Json::array();
  for (const auto& p : c.vertices) {
    Json row = Json::array();
    for (const auto& x : p) row.push_back(rational_json(x));
    verts.push_back(std::move(row));
  }
  Json mins = Json::object();
  if (!c.vertices.empty()) {
    auto env = vertex_envelope(c, a);
    for (const auto& e : env.entries()) mins[e.label()] = rational_json(e.lower);
  }
  Json j;
  j["vertices"] = std::move(verts);
  j["perEntryMin"] = std::move(mins);
  return j;
}

}  // namespace previsio
