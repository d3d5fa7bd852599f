#pragma once

// An assessment together with the names it was written with: atoms,
// variables, events, and optional partition/cell lists. Name lookup: "0" is
// the zero variable, "Omega" the sure event, and every event or atom name
// doubles as its indicator variable.

#include <string>
#include <utility>
#include <vector>

#include "previsio/core.hpp"

namespace previsio {

struct Document {
  explicit Document(SpaceRef s) : space(s), assessment(std::move(s)) {}

  SpaceRef space;
  std::vector<std::pair<std::string, RandomVariable>> variables;
  std::vector<std::pair<std::string, Event>> events;
  Assessment assessment;
  std::vector<std::string> partition;  // event names
  std::vector<std::string> cells;      // event names used for conglomerability
  std::vector<std::string> notes;

  void add_variable(const std::string& name, RandomVariable v) {
    require_fresh(name);
    detail::require_same_space(space, v.space());
    variables.emplace_back(name, std::move(v));
  }

  void add_event(const std::string& name, Event e) {
    require_fresh(name);
    detail::require_same_space(space, e.space());
    events.emplace_back(name, std::move(e));
  }

  std::optional<Event> find_event(const std::string& name) const {
    if (name == "Omega") return Event::sure(space);
    for (const auto& [n, e] : events)
      if (n == name) return e;
    if (auto i = space->index_of(name)) return Event::of_indices(space, {*i});
    return std::nullopt;
  }

  Event event(const std::string& name) const {
    if (auto e = find_event(name)) return *e;
    throw Error(Errc::UnknownName, "no event named " + name);
  }

  RandomVariable variable(const std::string& name) const {
    if (name == "0") return RandomVariable::constant(space, Rational(0));
    for (const auto& [n, v] : variables)
      if (n == name) return v;
    if (auto e = find_event(name)) return RandomVariable::indicator(*e);
    throw Error(Errc::UnknownName, "no variable named " + name);
  }

  std::size_t assess(const std::string& var, const std::string& given, const Rational& lower,
                     std::optional<Rational> upper = std::nullopt) {
    auto b = event(given);
    if (b.is_impossible()) throw Error(Errc::ImpossibleConditioningEvent, "event " + given + " is impossible");
    return assessment.add(restrict(variable(var), b), lower, std::move(upper), var, given);
  }

  std::size_t assess_precise(const std::string& var, const std::string& given, const Rational& value) {
    return assess(var, given, value, value);
  }

  std::vector<Event> events_named(const std::vector<std::string>& names) const {
    std::vector<Event> out;
    for (const auto& n : names) out.push_back(event(n));
    return out;
  }

 private:
  void require_fresh(const std::string& name) {
    if (name.empty() || name == "0" || name == "Omega")
      throw Error(Errc::DuplicateEntry, "reserved name '" + name + "'");
    for (const auto& [n, v] : variables)
      if (n == name) throw Error(Errc::DuplicateEntry, "name " + name + " defined twice");
    for (const auto& [n, e] : events)
      if (n == name) throw Error(Errc::DuplicateEntry, "name " + name + " defined twice");
  }
};

}  // namespace previsio
