#pragma once

// Natural and upper extension of a W-coherent assessment to a new
// conditional variable, and sampled checks of the axioms A1-A4 on a
// structured domain.
//
// For a region U grown from B by events that overlap it, the best alpha is
// the sup over stakes s >= 0 on the terms inside U of min_B(X - sum s g),
// subject to sum s g < 0 on U \ B. The strict constraints are tested first
// (a cone LP with right-hand side -1); when they can be met, the closure of
// the feasible set has the same supremum, so the value LP may use <= 0.
// Skipping the cone test gives wrong answers: with D = {X1|{a,c}},
// X1 = (a:0, c:1), LP = 1, the closed program makes 0|{a} unbounded.

#include <map>
#include <mutex>

#include "previsio/checkers.hpp"

namespace previsio {

struct ExtensionResult {
  ConditionalVariable target;
  Rational lower;
  Rational upper;
  /// "For" stakes on base entries attaining the lower bound in the limit.
  std::optional<Bet> lower_bet;
};

namespace detail {

struct BoundOutcome {
  Rational value;
  Bet bet;
};

/// sup alpha over regions grown from b; throws BaseNotCoherent if unbounded.
inline BoundOutcome extension_bound(const std::vector<SignedTerm>& terms, const std::vector<Rational>& x,
                                    const AtomSet& b, StatCounter& stats, const CheckOptions& opts) {
  auto regions = regions_from(distinct_conds(terms), b, true);
  std::vector<std::optional<BoundOutcome>> found(regions.size());
  auto job = [&](std::size_t r) {
    const auto& region = regions[r];
    auto js = closure(terms, region, terms.size());
    auto rest = (region - b).members();
    const std::size_t k = js.size();
    auto row_on = [&](std::size_t w, std::size_t width) {
      std::vector<Rational> row(width, Rational(0));
      for (std::size_t j = 0; j < k; ++j) row[j] = terms[js[j]].gain[w];
      return row;
    };
    if (!rest.empty()) {
      lp::LinearProgram cone(k);
      for (auto w : rest) cone.add_constraint(row_on(w, k), lp::Relation::LessEqual, Rational(-1));
      if (!solve_counted(cone, stats, opts, "cone" + region_tag(region)).optimal()) return false;
    }
    lp::LinearProgram prog(k + 1);
    prog.set_free(k);
    std::vector<Rational> obj(k + 1, Rational(0));
    obj[k] = 1;
    prog.set_objective(std::move(obj), lp::Sense::Maximize);
    for (auto w : b.members()) {
      auto row = row_on(w, k + 1);
      row[k] = 1;
      prog.add_constraint(std::move(row), lp::Relation::LessEqual, x[w]);
    }
    for (auto w : rest) prog.add_constraint(row_on(w, k + 1), lp::Relation::LessEqual, Rational(0));
    auto res = solve_counted(prog, stats, opts, "extend" + region_tag(region));
    if (res.unbounded()) throw Error(Errc::BaseNotCoherent, "extension bound is unbounded");
    if (!res.optimal()) throw Error(Errc::MalformedProgram, "extension LP did not reach an optimum");
    const auto& opt = res.as_optimal();
    Bet bet;
    for (std::size_t j = 0; j < k; ++j)
      if (opt.point[j] != 0) {
        auto t = terms[js[j]].meta;
        t.stake = opt.point[j];
        bet.terms.push_back(t);
      }
    found[r] = BoundOutcome{opt.value, std::move(bet)};
    return false;
  };
  first_hit(regions.size(), job, opts.lp_sink ? 1 : opts.threads);
  std::optional<BoundOutcome> best;
  for (auto& f : found)
    if (f && (!best || f->value > best->value)) best = std::move(f);
  // The region b itself always has a feasible value LP.
  return std::move(*best);
}

}  // namespace detail

/// Natural and upper extension of one base assessment, with results cached
/// per conditional variable. The base is checked for W-coherence once.
class NaturalExtender {
 public:
  explicit NaturalExtender(Assessment base, CheckOptions opts = {}) : base_(std::move(base)), opts_(std::move(opts)) {
    if (!base_.empty() && !check_w_coherence(base_, opts_).passed)
      throw Error(Errc::BaseNotCoherent, "the base assessment is not W-coherent");
    els_ = elements_of(base_);
    terms_ = detail::for_terms(els_);
  }

  const Assessment& base() const { return base_; }
  LpStats stats() const { return stats_.snapshot(); }

  Rational lower(const ConditionalVariable& x) { return lower_outcome(x).value; }

  /// Largest beta keeping base + {x: beta} W-coherent. Adding x as a "for"
  /// term with price beta, next to base terms and at most one base term
  /// against, is a natural-extension question for -X.
  Rational upper(const ConditionalVariable& x) {
    detail::require_same_space(base_.space(), x.space());
    auto key = key_of(x);
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = upper_.find(key); it != upper_.end()) return it->second;
    }
    auto neg = negated(x);
    Rational best = -detail::extension_bound(terms_, neg, x.cond().members(), stats_, opts_).value;
    for (const auto& el : els_) {
      auto terms = terms_;
      terms.push_back(detail::signed_term(el, Side::Against));
      best = std::min(best, Rational(-detail::extension_bound(terms, neg, x.cond().members(), stats_, opts_).value));
    }
    std::lock_guard<std::mutex> lock(mu_);
    upper_.emplace(key, best);
    return best;
  }

  ExtensionResult extend(const ConditionalVariable& x) {
    auto lo = lower_outcome(x);
    std::optional<Bet> bet;
    if (!lo.bet.terms.empty()) bet = lo.bet;
    return ExtensionResult{x, lo.value, upper(x), std::move(bet)};
  }

 private:
  using Key = std::pair<AtomSet, std::vector<Rational>>;

  static Key key_of(const ConditionalVariable& x) { return {x.cond().members(), x.as_variable_on_cond().values()}; }

  static std::vector<Rational> negated(const ConditionalVariable& x) {
    std::vector<Rational> v = x.as_variable_on_cond().values();
    for (auto& r : v) r = -r;
    return v;
  }

  detail::BoundOutcome lower_outcome(const ConditionalVariable& x) {
    detail::require_same_space(base_.space(), x.space());
    auto key = key_of(x);
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (auto it = lower_.find(key); it != lower_.end()) return it->second;
    }
    auto out = detail::extension_bound(terms_, x.as_variable_on_cond().values(), x.cond().members(), stats_, opts_);
    std::lock_guard<std::mutex> lock(mu_);
    lower_.emplace(key, out);
    return out;
  }

  Assessment base_;
  CheckOptions opts_;
  std::vector<Element> els_;
  std::vector<detail::SignedTerm> terms_;
  detail::StatCounter stats_;
  std::mutex mu_;
  std::map<Key, detail::BoundOutcome> lower_;
  std::map<Key, Rational> upper_;
};

inline Rational natural_extension(const Assessment& a, const ConditionalVariable& x, const CheckOptions& opts = {}) {
  return NaturalExtender(a, opts).lower(x);
}

inline Rational upper_extension(const Assessment& a, const ConditionalVariable& x, const CheckOptions& opts = {}) {
  return NaturalExtender(a, opts).upper(x);
}

inline ExtensionResult extend(const Assessment& a, const ConditionalVariable& x, const CheckOptions& opts = {}) {
  return NaturalExtender(a, opts).extend(x);
}

// ------------------------------------------------------------ axioms A1-A4

/// The linear span of `basis` together with `events` (the sure event is
/// always added) as conditioning events.
struct StructuredDomain {
  SpaceRef space;
  std::vector<RandomVariable> basis;
  std::vector<Event> events;
};

struct AxiomOutcome {
  std::string axiom;
  bool passed = true;
  std::size_t samples = 0;
  std::optional<std::string> counterexample;
};

struct AxiomReport {
  std::vector<AxiomOutcome> axioms;

  bool passed() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const AxiomOutcome& o) { return o.passed; });
  }
};

using PrevisionFn = std::function<Rational(const ConditionalVariable&)>;

namespace detail {

/// Row-reduced basis for span membership tests.
class Span {
 public:
  explicit Span(const std::vector<RandomVariable>& vectors) {
    for (const auto& v : vectors) {
      auto r = reduce(v.values());
      auto pivot = std::find_if(r.begin(), r.end(), [](const Rational& q) { return q != 0; });
      if (pivot == r.end()) continue;
      std::size_t col = static_cast<std::size_t>(pivot - r.begin());
      Rational lead = r[col];
      for (auto& q : r) q /= lead;
      for (auto& row : rows_) {
        Rational f = row.first[col];
        if (f == 0) continue;
        for (std::size_t i = 0; i < r.size(); ++i) row.first[i] -= f * r[i];
      }
      rows_.push_back({std::move(r), col});
    }
  }

  bool contains(const RandomVariable& v) const {
    auto r = reduce(v.values());
    return std::all_of(r.begin(), r.end(), [](const Rational& q) { return q == 0; });
  }

 private:
  std::vector<Rational> reduce(std::vector<Rational> v) const {
    for (const auto& [row, col] : rows_) {
      Rational f = v[col];
      if (f == 0) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= f * row[i];
    }
    return v;
  }

  std::vector<std::pair<std::vector<Rational>, std::size_t>> rows_;
};

inline std::string describe(const ConditionalVariable& x) {
  std::string s = "(";
  const auto& names = x.space()->atoms();
  bool first = true;
  for (auto w : x.cond().members().members()) {
    s += (first ? "" : ", ") + names[w] + ":" + to_string(x.value(w));
    first = false;
  }
  return s + ")|{" + [&] {
    std::string e;
    for (const auto& n : x.cond().atom_names()) e += (e.empty() ? "" : ",") + n;
    return e;
  }() + "}";
}

}  // namespace detail

/// Samples the domain: basis vectors and their pairwise sums, each scaled by
/// -1, 0, 1/2, 1, 2, against every event. A2 uses the nonnegative scalings.
inline AxiomReport check_a1_a4(const StructuredDomain& d, const PrevisionFn& lp) {
  if (d.basis.empty()) throw Error(Errc::DomainNotClosed, "the domain has no basis variables");
  for (const auto& v : d.basis) detail::require_same_space(d.space, v.space());
  detail::Span span(d.basis);
  std::vector<Event> events;
  auto add_event = [&](const Event& e) {
    detail::require_same_space(d.space, e.space());
    if (e.is_impossible()) throw Error(Errc::ImpossibleConditioningEvent, "the domain lists an empty event");
    if (std::none_of(events.begin(), events.end(), [&](const Event& f) { return f == e; })) events.push_back(e);
  };
  add_event(Event::sure(d.space));
  for (const auto& e : d.events) add_event(e);

  std::vector<RandomVariable> seeds = d.basis;
  for (std::size_t i = 0; i < d.basis.size(); ++i)
    for (std::size_t j = i + 1; j < d.basis.size(); ++j) seeds.push_back(d.basis[i] + d.basis[j]);
  std::vector<RandomVariable> samples;
  for (const auto& g : seeds)
    for (const Rational& k : {Rational(-1), Rational(0), Rational(1, 2), Rational(1), Rational(2)})
      samples.push_back(g.scaled(k));
  auto in_domain = [&](const RandomVariable& v) {
    if (!span.contains(v)) throw Error(Errc::DomainNotClosed, "a sampled combination leaves the span of the basis");
    return v;
  };

  AxiomReport report{{{"A1"}, {"A2"}, {"A3"}, {"A4"}}};
  auto fail = [](AxiomOutcome& o, std::string what) {
    if (!o.passed) return;
    o.passed = false;
    o.counterexample = std::move(what);
  };
  for (const auto& b : events)
    for (const auto& x : samples) {
      auto cv = restrict(in_domain(x), b);
      Rational v = lp(cv), inf = cond_inf(cv);
      ++report.axioms[0].samples;
      if (v < inf) fail(report.axioms[0], "LP" + detail::describe(cv) + " = " + to_string(v) + " < inf " + to_string(inf));
    }
  for (const auto& b : events)
    for (const auto& x : seeds)
      for (const auto& sign : {Rational(1), Rational(-1)}) {
        auto base = restrict(x.scaled(sign), b);
        Rational v = lp(base);
        for (const Rational& k : {Rational(0), Rational(1, 2), Rational(2)}) {
          auto cv = restrict(in_domain(x.scaled(sign * k)), b);
          ++report.axioms[1].samples;
          if (lp(cv) != k * v)
            fail(report.axioms[1], "LP" + detail::describe(cv) + " = " + to_string(lp(cv)) + ", expected " +
                                       to_string(k) + " * " + to_string(v));
        }
      }
  std::vector<RandomVariable> signed_seeds;
  for (const auto& x : seeds) {
    signed_seeds.push_back(x);
    signed_seeds.push_back(-x);
  }
  for (const auto& b : events)
    for (std::size_t i = 0; i < signed_seeds.size(); ++i)
      for (std::size_t j = i; j < signed_seeds.size(); ++j) {
        const auto& x = signed_seeds[i];
        const auto& y = signed_seeds[j];
        auto sum = restrict(in_domain(x + y), b);
        Rational lhs = lp(sum), rhs = lp(restrict(x, b)) + lp(restrict(y, b));
        ++report.axioms[2].samples;
        if (lhs < rhs)
          fail(report.axioms[2], "LP" + detail::describe(sum) + " = " + to_string(lhs) + " < " + to_string(rhs));
      }
  for (const auto& a : events)
    for (const auto& b : events) {
      auto ab = a & b;
      if (ab.is_impossible()) continue;
      in_domain(RandomVariable::indicator(a));
      for (const auto& x : signed_seeds) {
        Rational c = lp(restrict(x, ab));
        auto v = in_domain(x.times(a) - RandomVariable::indicator(a).scaled(c));
        auto cv = restrict(v, b);
        Rational got = lp(cv);
        ++report.axioms[3].samples;
        if (got != 0)
          fail(report.axioms[3], "LP" + detail::describe(cv) + " = " + to_string(got) + ", expected 0/1");
      }
    }
  return report;
}

/// A1-A4 for the natural extension of a W-coherent base.
inline AxiomReport check_a1_a4(const StructuredDomain& d, NaturalExtender& ext) {
  return check_a1_a4(d, [&](const ConditionalVariable& x) { return ext.lower(x); });
}

}  // namespace previsio
