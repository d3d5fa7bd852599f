#pragma once

// Decision procedures for the consistency notions.
//
// Every notion asks whether some admissible bet has sup(G|S) < 0, S being the
// union of the conditioning events that carry a positive stake. A violating
// bet lives inside a region U that is a union of conditioning events. For a
// fixed U the question is one LP: stakes on every term whose conditioning
// event lies in U, stakes normalized, maximize eps with G + eps <= 0 on U.
// The bet found that way is a genuine violation because its own support lies
// in U, and every violation is found at U = S. When the notion is closed
// under dropping terms, it is enough to look at regions whose events overlap
// in a connected way, since G restricted to one component of S is the gain of
// the bet that keeps only that component's terms.

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "previsio/gains.hpp"
#include "previsio/lp.hpp"
#include "previsio/parallel.hpp"

namespace previsio {

enum class Notion {
  DfPreciseUnconditional,
  DfPreciseConditional,
  CoherenceUnconditional,
  WCoherence,
  Aul,
  Convex,
  CenteredConvex,
  BiCoherence,
  SeparateCoherence,
  WalleyAsl,
};

inline const char* notion_name(Notion n) {
  switch (n) {
    case Notion::DfPreciseUnconditional: return "df-unconditional";
    case Notion::DfPreciseConditional: return "df-conditional";
    case Notion::CoherenceUnconditional: return "coherence-unconditional";
    case Notion::WCoherence: return "w-coherence";
    case Notion::Aul: return "aul";
    case Notion::Convex: return "convex";
    case Notion::CenteredConvex: return "centered-convex";
    case Notion::BiCoherence: return "bi-coherence";
    case Notion::SeparateCoherence: return "separate-coherence";
    case Notion::WalleyAsl: return "walley-asl";
  }
  return "unknown";
}

struct LpStats {
  std::size_t solves = 0;
  std::size_t max_pivots = 0;

  void merge(const LpStats& o) {
    solves += o.solves;
    max_pivots = std::max(max_pivots, o.max_pivots);
  }
};

/// One round of the iterative support path: the terms it cleared and the mass
/// function that cleared them.
struct Layer {
  std::optional<BetTerm> against;
  std::vector<BetTerm> cleared;
  std::vector<Rational> mass;
};

struct Verdict {
  Notion notion;
  bool passed = true;
  std::optional<Bet> witness;
  std::shared_ptr<const Assessment> witness_source;  // the assessment the witness indexes
  std::optional<std::string> prerequisite_failure;
  std::optional<std::string> centering_failure;
  std::optional<std::string> self_indicator_failure;
  std::optional<std::string> scope;  // partition cell the verdict was decided on
  std::vector<Layer> certificate;
  std::size_t lp_count = 0;
  LpStats stats;

  /// Re-evaluates the witness from scratch.
  GainTable witness_gain() const { return gain(*witness, *witness_source); }
};

struct CheckOptions {
  bool fast = false;
  std::size_t threads = thread_count();
  /// Receives every LP before it is solved; forces sequential evaluation.
  std::function<void(const std::string&, const lp::LinearProgram&)> lp_sink;
};

namespace detail {

/// A bet term with its sign folded into the gain.
struct SignedTerm {
  BetTerm meta;
  AtomSet cond;
  std::vector<Rational> gain;
};

inline SignedTerm signed_term(const Element& el, Side side) {
  SignedTerm t{BetTerm{el.entry, el.prevision, side, Rational(0)}, el.cond, el.gain};
  if (side == Side::Against)
    for (auto& v : t.gain) v = -v;
  return t;
}

inline std::vector<SignedTerm> for_terms(const std::vector<Element>& els) {
  std::vector<SignedTerm> out;
  for (const auto& el : els) out.push_back(signed_term(el, Side::For));
  return out;
}

struct Job {
  AtomSet region;
  std::vector<std::size_t> terms;  // stakes >= 0, normalized
  std::optional<std::size_t> fixed;  // stake exactly 1, outside the normalization
  std::string tag;
};

class StatCounter {
 public:
  void record(const lp::SolveResult& r) {
    ++solves_;
    std::size_t p = r.stats.pivots, cur = max_pivots_.load();
    while (p > cur && !max_pivots_.compare_exchange_weak(cur, p)) {
    }
  }
  LpStats snapshot() const { return LpStats{solves_.load(), max_pivots_.load()}; }

 private:
  std::atomic<std::size_t> solves_{0};
  std::atomic<std::size_t> max_pivots_{0};
};

inline lp::SolveResult solve_counted(const lp::LinearProgram& prog, StatCounter& stats, const CheckOptions& opts,
                                     const std::string& tag) {
  if (opts.lp_sink) opts.lp_sink(tag, prog);
  auto r = lp::solve(prog);
  stats.record(r);
  return r;
}

/// Stakes of a violating bet for the job, or nothing when eps <= 0.
inline std::optional<std::vector<Rational>> violation_lp(const std::vector<SignedTerm>& terms, const Job& job,
                                                         StatCounter& stats, const CheckOptions& opts) {
  const std::size_t k = job.terms.size();
  lp::LinearProgram prog(k + 1);
  prog.set_free(k);
  std::vector<Rational> obj(k + 1, Rational(0));
  obj[k] = 1;
  prog.set_objective(std::move(obj), lp::Sense::Maximize);
  std::vector<Rational> norm(k + 1, Rational(1));
  norm[k] = 0;
  prog.add_constraint(std::move(norm), lp::Relation::Equal, Rational(1));
  for (auto w : job.region.members()) {
    std::vector<Rational> row(k + 1, Rational(0));
    for (std::size_t j = 0; j < k; ++j) row[j] = terms[job.terms[j]].gain[w];
    row[k] = 1;
    Rational rhs = job.fixed ? Rational(-terms[*job.fixed].gain[w]) : Rational(0);
    prog.add_constraint(std::move(row), lp::Relation::LessEqual, std::move(rhs));
  }
  auto r = solve_counted(prog, stats, opts, job.tag);
  if (!r.optimal()) throw Error(Errc::MalformedProgram, "violation LP did not reach an optimum");
  const auto& opt = r.as_optimal();
  if (opt.value <= 0) return std::nullopt;
  return std::vector<Rational>(opt.point.begin(), opt.point.begin() + static_cast<std::ptrdiff_t>(k));
}

inline Bet bet_from_stakes(const std::vector<SignedTerm>& terms, const Job& job, const std::vector<Rational>& stakes) {
  Bet bet;
  if (job.fixed) {
    auto t = terms[*job.fixed].meta;
    t.stake = 1;
    bet.terms.push_back(t);
  }
  for (std::size_t j = 0; j < job.terms.size(); ++j) {
    if (stakes[j] == 0) continue;
    auto t = terms[job.terms[j]].meta;
    t.stake = stakes[j];
    bet.terms.push_back(t);
  }
  return bet;
}

inline std::vector<AtomSet> distinct_conds(const std::vector<SignedTerm>& terms) {
  std::set<AtomSet> s;
  for (const auto& t : terms) s.insert(t.cond);
  return {s.begin(), s.end()};
}

/// Unions of events that contain `seed`; with `connected`, only unions reachable
/// by repeatedly adding an event that meets the current union.
inline std::vector<AtomSet> regions_from(const std::vector<AtomSet>& events, const AtomSet& seed, bool connected) {
  std::set<AtomSet> seen{seed};
  std::vector<AtomSet> frontier{seed};
  while (!frontier.empty()) {
    std::vector<AtomSet> next;
    for (const auto& u : frontier)
      for (const auto& e : events) {
        if (e.subset_of(u)) continue;
        if (connected && !e.intersects(u)) continue;
        auto v = u | e;
        if (seen.insert(v).second) next.push_back(v);
      }
    frontier = std::move(next);
  }
  return {seen.begin(), seen.end()};
}

inline std::vector<AtomSet> connected_regions(const std::vector<AtomSet>& events) {
  std::set<AtomSet> all;
  for (const auto& e : events)
    for (auto& r : regions_from(events, e, true)) all.insert(r);
  return {all.begin(), all.end()};
}

inline std::vector<std::size_t> closure(const std::vector<SignedTerm>& terms, const AtomSet& region, std::size_t limit) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < limit; ++i)
    if (terms[i].cond.subset_of(region)) out.push_back(i);
  return out;
}

inline std::string region_tag(const AtomSet& region) {
  std::string s = "region{";
  bool first = true;
  for (auto w : region.members()) {
    s += (first ? "" : ",") + std::to_string(w);
    first = false;
  }
  return s + "}";
}

/// Solves the jobs and turns the first (lowest-index) violation into a verdict.
inline Verdict run_jobs(Notion notion, const std::vector<SignedTerm>& terms, const std::vector<Job>& jobs,
                        std::shared_ptr<const Assessment> source, const CheckOptions& opts) {
  StatCounter stats;
  std::vector<std::optional<std::vector<Rational>>> found(jobs.size());
  std::size_t threads = opts.lp_sink ? 1 : opts.threads;
  auto hit = first_hit(
      jobs.size(),
      [&](std::size_t i) {
        found[i] = violation_lp(terms, jobs[i], stats, opts);
        return found[i].has_value();
      },
      threads);
  Verdict v{notion};
  v.witness_source = std::move(source);
  v.stats = stats.snapshot();
  if (hit) {
    v.passed = false;
    v.witness = bet_from_stakes(terms, jobs[*hit], *found[*hit]);
    v.lp_count = *hit + 1;
  } else {
    v.lp_count = jobs.size();
  }
  return v;
}

struct FastOutcome {
  std::vector<Layer> layers;
  std::optional<Job> failing;
};

/// Iterative support shrinking: repeatedly find a mass function on the union
/// of the active events under which every active term has nonnegative
/// expectation, with as many active events as possible getting positive
/// mass. Terms whose event gets mass cannot belong to a violating bet and are
/// cleared. If no event can get mass, the active terms admit a bet with G < 0
/// on their union.
inline FastOutcome fast_run(const std::vector<SignedTerm>& terms, std::vector<std::size_t> active, StatCounter& stats,
                            const CheckOptions& opts, const std::optional<BetTerm>& against) {
  FastOutcome out;
  const std::size_t n = terms.empty() ? 0 : terms.front().gain.size();
  while (!active.empty()) {
    AtomSet region(n);
    for (auto i : active) region = region | terms[i].cond;
    auto atoms = region.members();
    const std::size_t np = atoms.size(), k = active.size();
    lp::LinearProgram prog(np + k);
    std::vector<Rational> obj(np + k, Rational(0));
    for (std::size_t j = 0; j < k; ++j) {
      obj[np + j] = 1;
      prog.set_bounds(np + j, Rational(0), Rational(1));
    }
    prog.set_objective(std::move(obj), lp::Sense::Maximize);
    for (std::size_t j = 0; j < k; ++j) {
      const auto& t = terms[active[j]];
      std::vector<Rational> expect(np + k, Rational(0)), cap(np + k, Rational(0));
      for (std::size_t q = 0; q < np; ++q) {
        expect[q] = t.gain[atoms[q]];
        if (t.cond.contains(atoms[q])) cap[q] = -1;
      }
      cap[np + j] = 1;
      prog.add_constraint(std::move(expect), lp::Relation::GreaterEqual, Rational(0));
      prog.add_constraint(std::move(cap), lp::Relation::LessEqual, Rational(0));
    }
    auto r = solve_counted(prog, stats, opts, "fast" + region_tag(region));
    if (!r.optimal()) throw Error(Errc::MalformedProgram, "support LP did not reach an optimum");
    const auto& opt = r.as_optimal();
    if (opt.value == 0) {
      out.failing = Job{region, active, std::nullopt, "witness" + region_tag(region)};
      return out;
    }
    Layer layer{against, {}, std::vector<Rational>(n, Rational(0))};
    for (std::size_t q = 0; q < np; ++q) layer.mass[atoms[q]] = opt.point[q];
    std::vector<std::size_t> remaining;
    for (auto i : active) {
      Rational mass_on = 0;
      for (auto w : terms[i].cond.members()) mass_on += layer.mass[w];
      if (mass_on > 0)
        layer.cleared.push_back(terms[i].meta);
      else
        remaining.push_back(i);
    }
    out.layers.push_back(std::move(layer));
    active = std::move(remaining);
  }
  return out;
}

/// Runs the iterative path once per term list; the first list that fails
/// yields the witness.
inline Verdict run_fast(Notion notion, const std::vector<SignedTerm>& terms,
                        const std::vector<std::pair<std::vector<std::size_t>, std::optional<BetTerm>>>& lists,
                        std::shared_ptr<const Assessment> source, const CheckOptions& opts) {
  StatCounter stats;
  Verdict v{notion};
  v.witness_source = std::move(source);
  for (const auto& [active, against] : lists) {
    auto outcome = fast_run(terms, active, stats, opts, against);
    ++v.lp_count;
    if (outcome.failing) {
      auto stakes = violation_lp(terms, *outcome.failing, stats, opts);
      if (!stakes) throw Error(Errc::MalformedProgram, "support path failed without a violating bet");
      v.passed = false;
      v.witness = bet_from_stakes(terms, *outcome.failing, *stakes);
      v.certificate.clear();
      break;
    }
    for (auto& layer : outcome.layers) v.certificate.push_back(std::move(layer));
  }
  v.stats = stats.snapshot();
  return v;
}

inline void require_nonempty(const Assessment& a) {
  if (a.empty()) throw Error(Errc::EmptyAssessment, "the assessment has no entries");
}

inline void require_unconditional(const Assessment& a) {
  if (!a.all_unconditional())
    throw Error(Errc::ConditionalEntriesUnsupported, "this notion is defined for unconditional entries only");
}

inline void require_precise(const Assessment& a) {
  for (const auto& e : a.entries())
    if (!e.is_precise()) throw Error(Errc::NotPrecise, "entry " + e.label() + " is not precise");
}

inline std::vector<std::size_t> iota(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

/// Bets with "for" terms only.
inline Verdict for_only(Notion notion, const Assessment& a, const CheckOptions& opts) {
  require_nonempty(a);
  auto src = std::make_shared<const Assessment>(a);
  auto terms = for_terms(elements_of(a));
  if (opts.fast) return run_fast(notion, terms, {{iota(terms.size()), std::nullopt}}, src, opts);
  std::vector<Job> jobs;
  for (const auto& region : connected_regions(distinct_conds(terms)))
    jobs.push_back(Job{region, closure(terms, region, terms.size()), std::nullopt, region_tag(region)});
  return run_jobs(notion, terms, jobs, src, opts);
}

/// Bets with "for" terms and at most one "against" term.
inline Verdict one_against(Notion notion, const Assessment& a, const CheckOptions& opts) {
  require_nonempty(a);
  auto src = std::make_shared<const Assessment>(a);
  auto els = elements_of(a);
  auto terms = for_terms(els);
  const std::size_t m = terms.size();
  for (const auto& el : els) terms.push_back(signed_term(el, Side::Against));
  if (opts.fast) {
    std::vector<std::pair<std::vector<std::size_t>, std::optional<BetTerm>>> lists;
    for (std::size_t c = 0; c < m; ++c) {
      auto active = iota(m);
      active.push_back(m + c);
      lists.push_back({std::move(active), terms[m + c].meta});
    }
    return run_fast(notion, terms, lists, src, opts);
  }
  auto events = distinct_conds(terms);
  std::vector<Job> jobs;
  for (std::size_t c = 0; c < m; ++c)
    for (const auto& region : regions_from(events, terms[c].cond, true)) {
      auto js = closure(terms, region, m);
      js.push_back(m + c);
      jobs.push_back(Job{region, std::move(js), std::nullopt, "against" + std::to_string(c) + region_tag(region)});
    }
  return run_jobs(notion, terms, jobs, src, opts);
}

}  // namespace detail

/// Williams coherence: "for" terms plus at most one "against" term, gain
/// judged on the union of the conditioning events.
inline Verdict check_w_coherence(const Assessment& a, const CheckOptions& opts = {}) {
  return detail::one_against(Notion::WCoherence, a, opts);
}

/// Avoiding uniform loss: "for" terms only.
inline Verdict check_aul(const Assessment& a, const CheckOptions& opts = {}) {
  return detail::for_only(Notion::Aul, a, opts);
}

/// Precise conditional previsions: stakes of either sign. A precise entry
/// already supplies X - P and P - X as "for" terms.
inline Verdict check_df_precise_conditional(const Assessment& a, const CheckOptions& opts = {}) {
  detail::require_nonempty(a);
  detail::require_precise(a);
  return detail::for_only(Notion::DfPreciseConditional, a, opts);
}

inline Verdict check_df_precise_unconditional(const Assessment& a, const CheckOptions& opts = {}) {
  detail::require_nonempty(a);
  detail::require_precise(a);
  detail::require_unconditional(a);
  return detail::for_only(Notion::DfPreciseUnconditional, a, opts);
}

inline Verdict check_coherence_unconditional(const Assessment& a, const CheckOptions& opts = {}) {
  detail::require_nonempty(a);
  detail::require_unconditional(a);
  return detail::one_against(Notion::CoherenceUnconditional, a, opts);
}

/// At most two "against" terms on unconditional entries.
inline Verdict check_bi_coherence(const Assessment& a, const CheckOptions& opts = {}) {
  detail::require_nonempty(a);
  detail::require_unconditional(a);
  auto src = std::make_shared<const Assessment>(a);
  auto els = elements_of(a);
  auto terms = detail::for_terms(els);
  const std::size_t m = terms.size();
  for (const auto& el : els) terms.push_back(detail::signed_term(el, Side::Against));
  const AtomSet omega = AtomSet::full(a.space()->size());
  std::vector<std::pair<std::vector<std::size_t>, std::optional<BetTerm>>> lists;
  std::vector<detail::Job> jobs;
  for (std::size_t c1 = 0; c1 < m; ++c1)
    for (std::size_t c2 = c1; c2 < m; ++c2) {
      auto js = detail::iota(m);
      js.push_back(m + c1);
      if (c2 != c1) js.push_back(m + c2);
      lists.push_back({js, terms[m + c1].meta});
      jobs.push_back(detail::Job{omega, std::move(js), std::nullopt,
                                 "against" + std::to_string(c1) + "," + std::to_string(c2)});
    }
  if (opts.fast) return detail::run_fast(Notion::BiCoherence, terms, lists, src, opts);
  return detail::run_jobs(Notion::BiCoherence, terms, jobs, src, opts);
}

/// Convexity: one "against" term with stake exactly 1 and "for" stakes summing
/// to 1. Normalization ties the terms together, so every union of events that
/// contains the against event is probed.
inline Verdict check_convex(const Assessment& a, const CheckOptions& opts = {}) {
  detail::require_nonempty(a);
  auto src = std::make_shared<const Assessment>(a);
  auto els = elements_of(a);
  auto terms = detail::for_terms(els);
  const std::size_t m = terms.size();
  for (const auto& el : els) terms.push_back(detail::signed_term(el, Side::Against));
  auto events = detail::distinct_conds(terms);
  std::vector<detail::Job> jobs;
  for (std::size_t c = 0; c < m; ++c)
    for (const auto& region : detail::regions_from(events, terms[c].cond, false))
      jobs.push_back(detail::Job{region, detail::closure(terms, region, m), m + c,
                                 "against" + std::to_string(c) + detail::region_tag(region)});
  return detail::run_jobs(Notion::Convex, terms, jobs, src, opts);
}

/// Convexity plus LP(0|B) = 0 for every conditioning event B.
inline Verdict check_centered_convex(const Assessment& a, const CheckOptions& opts = {}) {
  detail::require_nonempty(a);
  std::optional<std::string> centering;
  for (const auto& b : a.conditioning_events()) {
    auto zero = ConditionalVariable(RandomVariable::constant(a.space(), Rational(0)), b);
    auto idx = a.find(zero);
    if (!idx) {
      auto names = b.atom_names();
      std::string ev;
      for (const auto& n : names) ev += (ev.empty() ? "" : ",") + n;
      throw Error(Errc::MissingZeroVariables, "0|{" + ev + "} is not assessed");
    }
    const auto& e = a[*idx];
    if (!centering && (e.lower != 0 || (e.upper && *e.upper != 0)))
      centering = "LP(" + e.label() + ") = " + to_string(e.lower) + ", expected 0/1";
  }
  auto v = check_convex(a, opts);
  v.notion = Notion::CenteredConvex;
  if (centering) {
    v.centering_failure = centering;
    v.passed = false;
  }
  return v;
}

/// Conditional lower previsions given the cells of a finite partition, each
/// cell holding unconditional variables read as LP(X|cell).
struct PartitionFamily {
  SpaceRef space;
  std::vector<std::string> labels;
  std::vector<Event> cells;
  std::vector<Assessment> per_cell;

  void validate() const {
    if (cells.empty()) throw Error(Errc::InvalidPartition, "a partition needs at least one cell");
    if (labels.size() != cells.size() || per_cell.size() != cells.size())
      throw Error(Errc::InvalidPartition, "cells, labels and assessments disagree in number");
    AtomSet seen(space->size());
    for (const auto& c : cells) {
      if (c.is_impossible()) throw Error(Errc::InvalidPartition, "a cell is impossible");
      if (c.members().intersects(seen)) throw Error(Errc::InvalidPartition, "cells overlap");
      seen = seen | c.members();
    }
    if (seen.count() != space->size()) throw Error(Errc::InvalidPartition, "cells do not cover every atom");
  }

  std::size_t cell_of(std::size_t atom) const {
    for (std::size_t k = 0; k < cells.size(); ++k)
      if (cells[k].contains(atom)) return k;
    throw Error(Errc::InvalidPartition, "atom outside every cell");
  }

  /// The conditional assessment {X|B : X in H(B)}.
  Assessment merged() const {
    Assessment out(space);
    append_to(out);
    return out;
  }

  /// Appends X|B entries; returns, per cell, the index of each cell entry.
  std::vector<std::vector<std::size_t>> append_to(Assessment& out) const {
    std::vector<std::vector<std::size_t>> idx(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k)
      for (const auto& e : per_cell[k].entries())
        idx[k].push_back(
            out.add(ConditionalVariable(e.target.variable(), cells[k]), e.lower, e.upper, e.var_label, labels[k]));
    return idx;
  }
};

/// An assessment split along a partition: unconditional part K plus the cells.
struct StructuredAssessment {
  Assessment unconditional;
  PartitionFamily family;
};

/// Entries conditioned on a cell go to that cell (read unconditionally, zero
/// off the cell); entries given the sure event form K unless the sure event is
/// itself the only cell.
inline StructuredAssessment split_by_partition(const Assessment& a, const std::vector<std::string>& labels,
                                               const std::vector<Event>& cells) {
  StructuredAssessment out{Assessment(a.space()), PartitionFamily{a.space(), labels, cells, {}}};
  for (std::size_t k = 0; k < cells.size(); ++k) out.family.per_cell.emplace_back(a.space());
  out.family.validate();
  for (const auto& e : a.entries()) {
    bool placed = false;
    for (std::size_t k = 0; k < cells.size() && !placed; ++k) {
      if (!(e.target.cond() == cells[k])) continue;
      out.family.per_cell[k].add(ConditionalVariable(e.target.variable(), Event::sure(a.space())), e.lower, e.upper,
                                 e.var_label, "Omega");
      placed = true;
    }
    if (placed) continue;
    if (!e.target.cond().is_sure())
      throw Error(Errc::InvalidPartition, "entry " + e.label() + " is conditioned on an event outside the partition");
    out.unconditional.add(e.target, e.lower, e.upper, e.var_label, e.given_label);
  }
  return out;
}

/// i) LP_B(B|B) = 1 and ii) each H(B) coherent as unconditional previsions.
inline Verdict check_separate_coherence(const PartitionFamily& family, const CheckOptions& opts = {}) {
  family.validate();
  Verdict v{Notion::SeparateCoherence};
  for (std::size_t k = 0; k < family.cells.size(); ++k) {
    auto self = ConditionalVariable(RandomVariable::indicator(family.cells[k]), Event::sure(family.space));
    auto idx = family.per_cell[k].find(self);
    if (!idx) throw Error(Errc::MissingSelfIndicator, "cell " + family.labels[k] + " lacks its own indicator");
    const auto& e = family.per_cell[k][*idx];
    if (e.lower != 1 && !v.self_indicator_failure) {
      v.self_indicator_failure = "LP(" + family.labels[k] + "|" + family.labels[k] + ") = " + to_string(e.lower);
      v.scope = family.labels[k];
      v.passed = false;
    }
  }
  if (!v.passed) return v;
  for (std::size_t k = 0; k < family.cells.size(); ++k) {
    auto cell = check_coherence_unconditional(family.per_cell[k], opts);
    v.lp_count += cell.lp_count;
    v.stats.merge(cell.stats);
    if (!cell.passed) {
      v.passed = false;
      v.witness = cell.witness;
      v.witness_source = cell.witness_source;
      v.scope = family.labels[k];
      break;
    }
  }
  return v;
}

/// Walley's avoiding sure loss on K plus a partition family with a common
/// label set H. Every conditional term enters through sum_B B(Y - LP(Y|B)).
inline Verdict check_walley_asl(const Assessment& k, const PartitionFamily& family, const CheckOptions& opts = {}) {
  family.validate();
  if (!k.all_unconditional()) throw Error(Errc::PrerequisiteFailed, "K must hold unconditional entries only");
  const std::size_t cells = family.cells.size();
  const std::size_t n = family.space->size();
  // Common label set.
  std::vector<std::string> h;
  for (const auto& e : family.per_cell[0].entries()) h.push_back(e.var_label);
  for (std::size_t c = 0; c < cells; ++c) {
    if (family.per_cell[c].size() != h.size())
      throw Error(Errc::PrerequisiteFailed, "cell " + family.labels[c] + " does not assess the common set H");
    for (const auto& lbl : h)
      if (!family.per_cell[c].find_label(lbl, "Omega"))
        throw Error(Errc::PrerequisiteFailed, "cell " + family.labels[c] + " lacks " + lbl);
  }
  auto value_in = [&](std::size_t c, const std::string& lbl) -> const AssessmentEntry& {
    return family.per_cell[c][*family.per_cell[c].find_label(lbl, "Omega")];
  };
  bool has_zero = false;
  for (const auto& lbl : h) {
    bool zero = true;
    for (std::size_t c = 0; c < cells && zero; ++c)
      for (auto w : family.cells[c].members().members())
        if (value_in(c, lbl).target.value(w) != 0) zero = false;
    has_zero = has_zero || zero;
  }
  if (!has_zero) throw Error(Errc::PrerequisiteFailed, "H must contain the zero variable");
  for (std::size_t c = 0; c < cells; ++c) {
    auto ind = ConditionalVariable(RandomVariable::indicator(family.cells[c]), Event::sure(family.space));
    if (!family.per_cell[c].find(ind))
      throw Error(Errc::PrerequisiteFailed, "H must contain the indicator of " + family.labels[c]);
  }

  Verdict v{Notion::WalleyAsl};
  if (!k.empty()) {
    auto ka = check_coherence_unconditional(k, opts);
    v.lp_count += ka.lp_count;
    v.stats.merge(ka.stats);
    if (!ka.passed) {
      v.passed = false;
      v.prerequisite_failure = "a) the unconditional part is not coherent";
      return v;
    }
  }
  auto sep = check_separate_coherence(family, opts);
  v.lp_count += sep.lp_count;
  v.stats.merge(sep.stats);
  if (!sep.passed) {
    v.passed = false;
    v.prerequisite_failure = "b) the partition family is not separately coherent";
    return v;
  }

  // Merged assessment that witnesses index into.
  auto merged = std::make_shared<Assessment>(family.space);
  for (const auto& e : k.entries()) merged->add(e.target, e.lower, e.upper, e.var_label, e.given_label);
  auto cell_index = family.append_to(*merged);

  struct Column {
    std::vector<BetTerm> terms;  // stake filled later
    std::vector<Rational> gain;
  };
  std::vector<Column> cols;
  for (const auto& el : elements_of(*merged)) {
    if (el.entry >= k.size()) break;
    cols.push_back(Column{{BetTerm{el.entry, el.prevision, Side::For, Rational(0)}}, el.gain});
  }
  for (std::size_t hi = 0; hi < h.size(); ++hi) {
    for (auto prev : {Prevision::Lower, Prevision::Upper}) {
      Column col{{}, std::vector<Rational>(n, Rational(0))};
      bool ok = true;
      for (std::size_t c = 0; c < cells && ok; ++c) {
        std::size_t entry = cell_index[c][*family.per_cell[c].find_label(h[hi], "Omega")];
        if (prev == Prevision::Upper && !(*merged)[entry].upper) {
          ok = false;
          break;
        }
        auto el = make_element(*merged, entry, prev);
        for (auto w : family.cells[c].members().members()) col.gain[w] = el.gain[w];
        col.terms.push_back(BetTerm{entry, prev, Side::For, Rational(0)});
      }
      if (ok) cols.push_back(std::move(col));
    }
  }

  detail::StatCounter stats;
  const std::size_t m = cols.size();
  lp::LinearProgram prog(m + 1);
  prog.set_free(m);
  std::vector<Rational> obj(m + 1, Rational(0));
  obj[m] = 1;
  prog.set_objective(std::move(obj), lp::Sense::Maximize);
  std::vector<Rational> norm(m + 1, Rational(1));
  norm[m] = 0;
  prog.add_constraint(std::move(norm), lp::Relation::Equal, Rational(1));
  for (std::size_t w = 0; w < n; ++w) {
    std::vector<Rational> row(m + 1, Rational(0));
    for (std::size_t j = 0; j < m; ++j) row[j] = cols[j].gain[w];
    row[m] = 1;
    prog.add_constraint(std::move(row), lp::Relation::LessEqual, Rational(0));
  }
  auto r = detail::solve_counted(prog, stats, opts, "asl");
  if (!r.optimal()) throw Error(Errc::MalformedProgram, "sure-loss LP did not reach an optimum");
  v.lp_count += 1;
  v.stats.merge(stats.snapshot());
  v.witness_source = merged;
  if (r.as_optimal().value > 0) {
    v.passed = false;
    Bet bet;
    for (std::size_t j = 0; j < m; ++j) {
      const auto& s = r.as_optimal().point[j];
      if (s == 0) continue;
      for (auto t : cols[j].terms) {
        t.stake = s;
        bet.terms.push_back(t);
      }
    }
    v.witness = std::move(bet);
  }
  return v;
}

}  // namespace previsio
