#pragma once

// Conglomerability over listed cells, and truncated versions of two
// non-conglomerable probabilities: de Finetti's random positive integer and
// Walley's mixture on the non-zero integers.
//
// Truncation keeps finitely many numbers as atoms and sends the rest to
// remainder atoms carrying the residual mass, so every generated assessment
// is a genuine probability on a finite space. The infinite-partition effects
// only show up as the gap between P(X) and the values on the listed cells.

#include "previsio/document.hpp"

namespace previsio {

struct ConglomerabilityReport {
  Rational target;  // mu(X)
  std::vector<std::pair<std::string, Rational>> per_cell;
  Rational inf_cell;
  Rational sup_cell;
  bool conglomerable = true;
  Rational gap = 0;    // distance of mu(X) from [inf_cell, sup_cell]
  bool axiom_8 = true;  // mu(X) >= inf_cell
};

/// Uses lower previsions: mu(X) = LP(X|Omega), mu(X|B) = LP(X|B).
inline ConglomerabilityReport check_conglomerability(const Assessment& a, const RandomVariable& x,
                                                     const std::vector<std::string>& labels,
                                                     const std::vector<Event>& cells) {
  if (cells.empty() || labels.size() != cells.size())
    throw Error(Errc::InvalidPartition, "cells and labels disagree or are empty");
  auto value = [&](const Event& b, const std::string& what) {
    auto idx = a.find(restrict(x, b));
    if (!idx) throw Error(Errc::MissingValues, "no value for " + what);
    return a[*idx].lower;
  };
  ConglomerabilityReport r;
  r.target = value(Event::sure(a.space()), "X|Omega");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    Rational v = value(cells[k], "X|" + labels[k]);
    if (k == 0 || v < r.inf_cell) r.inf_cell = v;
    if (k == 0 || v > r.sup_cell) r.sup_cell = v;
    r.per_cell.emplace_back(labels[k], v);
  }
  if (r.target < r.inf_cell) r.gap = r.inf_cell - r.target;
  if (r.target > r.sup_cell) r.gap = r.target - r.sup_cell;
  r.conglomerable = r.gap == 0;
  r.axiom_8 = r.target >= r.inf_cell;
  return r;
}

inline ConglomerabilityReport check_conglomerability(const Document& d, const std::string& var) {
  auto names = d.cells.empty() ? d.partition : d.cells;
  if (names.empty()) throw Error(Errc::MissingValues, "the document lists no cells");
  return check_conglomerability(d.assessment, d.variable(var), names, d.events_named(names));
}

/// A generated example and the mass function it was derived from.
struct Example {
  Document doc;
  std::vector<Rational> mass;
};

namespace detail {

inline SpaceRef numbered_space(std::vector<std::string> names) { return PossibilitySpace::create(std::move(names)); }

inline std::vector<std::size_t> indices_of(const SpaceRef& s, const std::vector<std::string>& names) {
  std::vector<std::size_t> out;
  for (const auto& n : names) out.push_back(*s->index_of(n));
  return out;
}

inline Rational mass_on(const std::vector<Rational>& p, const Event& e) {
  Rational s = 0;
  for (auto w : e.members().members()) s += p[w];
  return s;
}

inline Rational power_of_half(std::size_t k) { return Rational(1, Integer(1) << k); }

}  // namespace detail

/// A number drawn from the positive integers with every single number
/// getting probability 0. Cell B'_n holds h odd and k even numbers: odd
/// numbers 2j-1 and even numbers 2j for j in the n-th block of h (of k).
/// Numbers outside the listed cells collapse to rest_odd and rest_even, each
/// with mass 1/2.
inline Example definetti_example(std::size_t h, std::size_t k, std::size_t n_cells) {
  if (h == 0 || k == 0 || n_cells == 0) throw Error(Errc::InvalidArgument, "h, k and N must be positive");
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> cell_atoms(n_cells);
  std::vector<std::string> odd;
  for (std::size_t n = 1; n <= n_cells; ++n) {
    for (std::size_t j = (n - 1) * h + 1; j <= n * h; ++j) {
      cell_atoms[n - 1].push_back("n" + std::to_string(2 * j - 1));
      odd.push_back(cell_atoms[n - 1].back());
    }
    for (std::size_t j = (n - 1) * k + 1; j <= n * k; ++j) cell_atoms[n - 1].push_back("n" + std::to_string(2 * j));
    names.insert(names.end(), cell_atoms[n - 1].begin(), cell_atoms[n - 1].end());
  }
  names.push_back("rest_odd");
  names.push_back("rest_even");
  odd.push_back("rest_odd");
  auto s = detail::numbered_space(names);
  Example ex{Document(s), std::vector<Rational>(s->size(), Rational(0))};
  ex.mass[*s->index_of("rest_odd")] = Rational(1, 2);
  ex.mass[*s->index_of("rest_even")] = Rational(1, 2);
  auto& d = ex.doc;
  d.add_event("A", Event::of_indices(s, detail::indices_of(s, odd)));
  for (std::size_t n = 1; n <= n_cells; ++n) {
    d.add_event("B" + std::to_string(n), Event::of_indices(s, detail::indices_of(s, cell_atoms[n - 1])));
    d.partition.push_back("B" + std::to_string(n));
    d.cells.push_back("B" + std::to_string(n));
  }
  d.add_event("R", Event::of_atoms(s, {"rest_odd", "rest_even"}));
  d.partition.push_back("R");
  d.assess_precise("A", "Omega", Rational(1, 2));
  for (std::size_t n = 1; n <= n_cells; ++n)
    d.assess_precise("A", "B" + std::to_string(n), Rational(static_cast<long>(h), static_cast<long>(h + k)));
  auto r = d.event("R");
  d.assess_precise("A", "R", detail::mass_on(ex.mass, d.event("A") & r) / detail::mass_on(ex.mass, r));
  d.notes.push_back("definetti h=" + std::to_string(h) + " k=" + std::to_string(k) + " N=" + std::to_string(n_cells));
  d.notes.push_back("listed numbers have probability 0; rest_odd and rest_even carry 1/2 each");
  d.notes.push_back("A|R is Bayes-derived from the remainder masses");
  return ex;
}

/// P = (P+ + P-)/2 on the non-zero integers: P+(w_z) = 2^-z for z > 0, P-
/// puts all its mass on the negatives without charging any single one.
/// B_n = w_-n or w_n. Integers beyond N collapse to tail+ and tail-.
/// `structured` gives the form read by the sure-loss check: unconditional
/// entries plus, for every cell of {B_1..B_N, R}, the set H = {0, A, cell
/// indicators} given that cell.
inline Example walley666_example(std::size_t n_cells, bool structured = false) {
  if (n_cells == 0) throw Error(Errc::InvalidArgument, "N must be positive");
  std::vector<std::string> names;
  for (std::size_t n = 1; n <= n_cells; ++n) names.push_back("w" + std::to_string(n));
  for (std::size_t n = 1; n <= n_cells; ++n) names.push_back("w-" + std::to_string(n));
  names.push_back("tail+");
  names.push_back("tail-");
  auto s = detail::numbered_space(names);
  Example ex{Document(s), std::vector<Rational>(s->size(), Rational(0))};
  for (std::size_t n = 1; n <= n_cells; ++n) ex.mass[n - 1] = detail::power_of_half(n + 1);
  ex.mass[*s->index_of("tail+")] = detail::power_of_half(n_cells + 1);
  ex.mass[*s->index_of("tail-")] = Rational(1, 2);
  auto& d = ex.doc;
  std::vector<std::string> pos, neg;
  for (std::size_t n = 1; n <= n_cells; ++n) {
    pos.push_back("w" + std::to_string(n));
    neg.push_back("w-" + std::to_string(n));
  }
  pos.push_back("tail+");
  neg.push_back("tail-");
  d.add_event("A", Event::of_indices(s, detail::indices_of(s, pos)));
  d.add_event("B", Event::of_indices(s, detail::indices_of(s, neg)));
  std::vector<std::string> cell_names;
  for (std::size_t n = 1; n <= n_cells; ++n) {
    auto name = "B" + std::to_string(n);
    d.add_event(name, Event::of_atoms(s, {"w-" + std::to_string(n), "w" + std::to_string(n)}));
    cell_names.push_back(name);
    d.cells.push_back(name);
  }
  d.add_event("R", Event::of_atoms(s, {"tail+", "tail-"}));
  cell_names.push_back("R");
  d.partition = cell_names;

  auto p = [&](const std::string& var, const std::string& given) {
    auto x = d.variable(var);
    auto b = d.event(given);
    Rational num = 0;
    for (auto w : b.members().members()) num += ex.mass[w] * x[w];
    return num / detail::mass_on(ex.mass, b);
  };
  for (std::size_t w = 0; w < 2 * n_cells; ++w) d.assess_precise(s->atom(w), "Omega", ex.mass[w]);
  d.assess_precise("B", "Omega", p("B", "Omega"));
  d.assess_precise("A", "Omega", p("A", "Omega"));
  if (!structured) {
    for (std::size_t n = 1; n <= n_cells; ++n) {
      auto bn = "B" + std::to_string(n);
      d.assess_precise(bn, "Omega", p(bn, "Omega"));
      d.assess_precise("w" + std::to_string(n), bn, p("w" + std::to_string(n), bn));
      d.assess_precise("A", bn, p("A", bn));
    }
    d.assess_precise("A", "R", p("A", "R"));
  } else {
    for (const auto& cell : cell_names) {
      d.assess_precise("0", cell, Rational(0));
      d.assess_precise("A", cell, p("A", cell));
      for (const auto& other : cell_names) d.assess_precise(other, cell, p(other, cell));
    }
  }
  d.notes.push_back("walley666 N=" + std::to_string(n_cells) + (structured ? " structured" : ""));
  d.notes.push_back("tail+ carries 2^-(N+1), tail- carries 1/2; conditional values follow Bayes' rule");
  return ex;
}

}  // namespace previsio
