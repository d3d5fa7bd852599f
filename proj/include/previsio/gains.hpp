#pragma once

// Bets on assessed conditional variables and their gains.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "previsio/core.hpp"

namespace previsio {

/// Which bound of an entry a term refers to. An upper prevision UP(X|B) is
/// handled as the lower prevision -UP of -X|B.
enum class Prevision { Lower, Upper };
enum class Side { For, Against };

inline const char* side_name(Side s) { return s == Side::For ? "for" : "against"; }
inline const char* prevision_name(Prevision p) { return p == Prevision::Lower ? "lower" : "upper"; }

struct BetTerm {
  std::size_t entry;
  Prevision prevision = Prevision::Lower;
  Side side = Side::For;
  Rational stake;
};

struct Bet {
  std::vector<BetTerm> terms;

  std::size_t against_count() const {
    std::size_t n = 0;
    for (const auto& t : terms)
      if (t.side == Side::Against) ++n;
    return n;
  }
};

/// The lower-prevision element behind a term: the variable it buys and the price.
struct Element {
  std::size_t entry;
  Prevision prevision;
  AtomSet cond;
  std::vector<Rational> variable;  // X, or -X for an upper prevision
  Rational price;                  // LP, or -UP
  std::vector<Rational> gain;      // B (variable - price), zero off B
};

inline Element make_element(const Assessment& a, std::size_t entry, Prevision prev) {
  if (entry >= a.size()) throw Error(Errc::UnassessedVariable, "bet refers to entry " + std::to_string(entry));
  const auto& e = a[entry];
  Rational price;
  if (prev == Prevision::Lower) {
    price = e.lower;
  } else {
    if (!e.upper) throw Error(Errc::UnassessedVariable, "no upper prevision for " + e.label());
    price = -*e.upper;
  }
  const auto& cond = e.target.cond().members();
  const std::size_t n = a.space()->size();
  std::vector<Rational> var(n, Rational(0)), g(n, Rational(0));
  for (std::size_t w = 0; w < n; ++w) {
    if (!cond.contains(w)) continue;
    var[w] = prev == Prevision::Lower ? e.target.value(w) : Rational(-e.target.value(w));
    g[w] = var[w] - price;
  }
  return Element{entry, prev, cond, std::move(var), std::move(price), std::move(g)};
}

/// Every lower-prevision element of an assessment: one per lower bound, plus
/// one per upper bound when present.
inline std::vector<Element> elements_of(const Assessment& a) {
  std::vector<Element> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.push_back(make_element(a, i, Prevision::Lower));
    if (a[i].upper) out.push_back(make_element(a, i, Prevision::Upper));
  }
  return out;
}

struct GainTable {
  std::vector<Rational> values;
  AtomSet conditioning;  // union of the B_i over all terms
  AtomSet support;       // union of the B_i with nonzero stake
  std::uint64_t assessment_version = 0;

  bool has_conditioning() const { return !conditioning.empty(); }

  Rational sup_on(const AtomSet& where) const {
    auto atoms = where.members();
    if (atoms.empty()) throw Error(Errc::EmptyBet, "supremum over an empty event");
    Rational best = values[atoms.front()];
    for (auto w : atoms) best = std::max(best, values[w]);
    return best;
  }
  Rational inf_on(const AtomSet& where) const {
    auto atoms = where.members();
    if (atoms.empty()) throw Error(Errc::EmptyBet, "infimum over an empty event");
    Rational best = values[atoms.front()];
    for (auto w : atoms) best = std::min(best, values[w]);
    return best;
  }
  /// sup(G|B).
  Rational sup() const { return sup_on(conditioning); }
  /// sup(G|S); zero-stake terms do not enlarge S.
  Rational sup_on_support() const { return sup_on(support); }
};

namespace detail {

inline void check_bet(const Bet& bet) {
  if (bet.terms.empty()) throw Error(Errc::EmptyBet, "a bet needs at least one term");
  for (const auto& t : bet.terms)
    if (t.stake < 0) throw Error(Errc::EmptyBet, "stakes must be nonnegative");
}

inline Rational signed_stake(const BetTerm& t) { return t.side == Side::For ? t.stake : Rational(-t.stake); }

}  // namespace detail

/// G = sum over terms of +-s B (X - LP), with "against" terms negated.
inline GainTable gain(const Bet& bet, const Assessment& a) {
  detail::check_bet(bet);
  const std::size_t n = a.space()->size();
  GainTable t{std::vector<Rational>(n, Rational(0)), AtomSet(n), AtomSet(n), a.version()};
  for (const auto& term : bet.terms) {
    auto el = make_element(a, term.entry, term.prevision);
    t.conditioning = t.conditioning | el.cond;
    if (term.stake != 0) t.support = t.support | el.cond;
    Rational s = detail::signed_stake(term);
    for (std::size_t w = 0; w < n; ++w)
      if (el.gain[w] != 0) t.values[w] += s * el.gain[w];
  }
  return t;
}

/// A cached gain table is stale once its assessment has been re-priced.
inline bool is_current(const GainTable& t, const Assessment& a) { return t.assessment_version == a.version(); }

struct IncomeExpense {
  std::vector<Rational> income;
  std::vector<Rational> expense;
};

/// I collects the stakes times the variables, E the stakes times the prices;
/// G = I - E atom by atom.
inline IncomeExpense income_expense(const Bet& bet, const Assessment& a) {
  detail::check_bet(bet);
  const std::size_t n = a.space()->size();
  IncomeExpense out{std::vector<Rational>(n, Rational(0)), std::vector<Rational>(n, Rational(0))};
  for (const auto& term : bet.terms) {
    auto el = make_element(a, term.entry, term.prevision);
    Rational s = detail::signed_stake(term);
    for (auto w : el.cond.members()) {
      out.income[w] += s * el.variable[w];
      out.expense[w] += s * el.price;
    }
  }
  return out;
}

struct ConditionPredicates {
  Rational lambda0;  // inf(-I|B)
  bool sufficient_9;
  bool necessary_10;
  std::optional<bool> nested_12;  // empty when the meet of the B_i is impossible
};

inline ConditionPredicates condition_predicates(const Bet& bet, const Assessment& a) {
  auto ie = income_expense(bet, a);
  const std::size_t n = a.space()->size();
  AtomSet b(n), meet = AtomSet::full(n);
  for (const auto& term : bet.terms) {
    const auto& cond = a[term.entry].target.cond().members();
    b = b | cond;
    meet = meet & cond;
  }
  auto atoms = b.members();
  auto neg = [](const Rational& v) { return Rational(-v); };
  Rational inf_neg_i = neg(ie.income[atoms.front()]), sup_neg_i = inf_neg_i;
  Rational inf_neg_e = neg(ie.expense[atoms.front()]), sup_neg_e = inf_neg_e;
  for (auto w : atoms) {
    inf_neg_i = std::min(inf_neg_i, neg(ie.income[w]));
    sup_neg_i = std::max(sup_neg_i, neg(ie.income[w]));
    inf_neg_e = std::min(inf_neg_e, neg(ie.expense[w]));
    sup_neg_e = std::max(sup_neg_e, neg(ie.expense[w]));
  }
  ConditionPredicates p{inf_neg_i, inf_neg_i <= inf_neg_e, inf_neg_i <= sup_neg_e, std::nullopt};
  if (!meet.empty()) {
    Rational p_star = 0;
    for (const auto& term : bet.terms) {
      auto el = make_element(a, term.entry, term.prevision);
      p_star -= detail::signed_stake(term) * el.price;
    }
    p.nested_12 = p_star >= sup_neg_i;
  }
  return p;
}

}  // namespace previsio
