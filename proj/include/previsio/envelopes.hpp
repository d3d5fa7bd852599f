#pragma once

// Credal sets and envelopes in the positive-probability regime.
//
// The credal set of an assessment is {p : p >= 0, sum p = 1, sum p B (X - LP)
// >= 0 for every entry}, plus either P(B) >= delta or a filter that ignores a
// vertex with P(B) = 0 when evaluating entries given B. Vertices come from
// double description on the cone over the simplex: each constraint a.p >= c
// becomes (a - c).p >= 0.

#include <set>

#include "previsio/checkers.hpp"

namespace previsio {

inline constexpr std::size_t max_envelope_atoms = 8;

struct Positivity {
  enum class Mode { Delta, FilterZero };
  Mode mode = Mode::FilterZero;
  Rational delta = 0;
  /// Events required to get positive probability; all conditioning events
  /// of the assessment when absent.
  std::optional<std::vector<Event>> events;

  static Positivity at_least(Rational d) { return Positivity{Mode::Delta, std::move(d), std::nullopt}; }
  static Positivity filter_zero() { return Positivity{}; }
};

/// coeffs . p >= rhs
struct HalfSpace {
  std::vector<Rational> coeffs;
  Rational rhs;
  std::string label;
};

struct CredalSet {
  SpaceRef space;
  std::vector<std::vector<Rational>> vertices;
  std::vector<HalfSpace> constraints;
};

namespace detail {

inline Rational dot(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Rational mass_of(const std::vector<Rational>& p, const AtomSet& b) {
  Rational s = 0;
  for (auto w : b.members()) s += p[w];
  return s;
}

/// Extreme rays of {p >= 0 : h.p >= 0 for h in hs}, each scaled to sum 1.
inline std::vector<std::vector<Rational>> cone_vertices(std::size_t n, const std::vector<std::vector<Rational>>& hs) {
  struct Ray {
    std::vector<Rational> v;
    AtomSet tight;
  };
  const std::size_t total = n + hs.size();
  std::vector<Ray> rays;
  for (std::size_t i = 0; i < n; ++i) {
    Ray r{std::vector<Rational>(n, Rational(0)), AtomSet::full(total)};
    r.v[i] = 1;
    r.tight.erase(i);
    for (std::size_t k = n; k < total; ++k) r.tight.erase(k);
    rays.push_back(std::move(r));
  }
  for (std::size_t k = 0; k < hs.size(); ++k) {
    const std::size_t id = n + k;
    std::vector<Rational> val(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      val[i] = dot(hs[k], rays[i].v);
      if (val[i] > 0) pos.push_back(i);
      if (val[i] < 0) neg.push_back(i);
    }
    std::vector<Ray> next;
    for (std::size_t i = 0; i < rays.size(); ++i) {
      if (val[i] < 0) continue;
      next.push_back(rays[i]);
      if (val[i] == 0) next.back().tight.insert(id);
    }
    for (auto i : pos)
      for (auto j : neg) {
        auto common = rays[i].tight & rays[j].tight;
        bool adjacent = true;
        for (std::size_t q = 0; q < rays.size() && adjacent; ++q)
          if (q != i && q != j && common.subset_of(rays[q].tight)) adjacent = false;
        if (!adjacent) continue;
        Ray r{std::vector<Rational>(n), common};
        Rational sum = 0;
        for (std::size_t w = 0; w < n; ++w) sum += (r.v[w] = val[i] * rays[j].v[w] - val[j] * rays[i].v[w]);
        for (auto& x : r.v) x /= sum;
        r.tight.insert(id);
        next.push_back(std::move(r));
      }
    rays = std::move(next);
    if (rays.empty()) break;
  }
  std::set<std::vector<Rational>> out;
  for (auto& r : rays) out.insert(std::move(r.v));
  return {out.begin(), out.end()};
}

inline std::vector<AtomSet> required_events(const Assessment& a, const Positivity& pos) {
  std::vector<AtomSet> out;
  if (pos.events) {
    for (const auto& e : *pos.events) {
      require_same_space(a.space(), e.space());
      out.push_back(e.members());
    }
  } else {
    for (const auto& e : a.conditioning_events()) out.push_back(e.members());
  }
  return out;
}

}  // namespace detail

/// Vertices of the credal set. When no dominating prevision gives every
/// required event positive probability: EmptyCredalSet if the assessment is
/// not W-coherent, PositiveRegimeUnavailable if it is, since its dominating
/// previsions then need zero-probability conditioning events.
inline CredalSet credal_polytope(const Assessment& a, const Positivity& pos = {}) {
  const std::size_t n = a.space()->size();
  if (n > max_envelope_atoms)
    throw Error(Errc::DimensionTooLarge,
                std::to_string(n) + " atoms, at most " + std::to_string(max_envelope_atoms) + " supported");
  if (pos.mode == Positivity::Mode::Delta && pos.delta <= 0)
    throw Error(Errc::InvalidArgument, "delta must be positive");
  CredalSet c{a.space(), {}, {}};
  for (const auto& el : elements_of(a))
    c.constraints.push_back(HalfSpace{el.gain, Rational(0),
                                      a[el.entry].label() + (el.prevision == Prevision::Lower ? " lower" : " upper")});
  auto required = detail::required_events(a, pos);
  if (pos.mode == Positivity::Mode::Delta)
    for (const auto& b : required) {
      std::vector<Rational> ind(n, Rational(0));
      for (auto w : b.members()) ind[w] = 1;
      c.constraints.push_back(HalfSpace{std::move(ind), pos.delta, "P" + detail::region_tag(b).substr(6) + " >= delta"});
    }
  std::vector<std::vector<Rational>> hs;
  for (const auto& h : c.constraints) {
    auto row = h.coeffs;
    for (auto& v : row) v -= h.rhs;
    hs.push_back(std::move(row));
  }
  c.vertices = detail::cone_vertices(n, hs);
  // Under the filter a vertex with P(B) = 0 is skipped for entries given B
  // only; some point of the set gives every event positive probability iff
  // each event has a vertex that does.
  bool positive = !c.vertices.empty() && std::all_of(required.begin(), required.end(), [&](const AtomSet& b) {
    return std::any_of(c.vertices.begin(), c.vertices.end(),
                       [&](const std::vector<Rational>& v) { return detail::mass_of(v, b) > 0; });
  });
  if (!positive) {
    if (!a.empty() && check_w_coherence(a).passed)
      throw Error(Errc::PositiveRegimeUnavailable,
                  "the assessment is W-coherent but no dominating prevision gives every conditioning event positive "
                  "probability");
    throw Error(Errc::EmptyCredalSet, "no dominating prevision in the positive-probability regime");
  }
  return c;
}

/// P(X|B) under a mass function.
inline Rational conditional_expectation(const std::vector<Rational>& p, const ConditionalVariable& x) {
  Rational num = 0, den = 0;
  for (auto w : x.cond().members().members()) {
    num += p[w] * x.value(w);
    den += p[w];
  }
  if (den == 0) throw Error(Errc::ZeroProbabilityConditioning, "P(B) = 0 for a conditioning event");
  return num / den;
}

/// Per-entry minimum (and maximum, for entries with an upper prevision) over
/// the vertices giving the conditioning event positive probability.
inline Assessment vertex_envelope(const CredalSet& c, const Assessment& a) {
  detail::require_same_space(c.space, a.space());
  Assessment out(a.space());
  for (const auto& e : a.entries()) {
    std::optional<Rational> lo, hi;
    for (const auto& v : c.vertices) {
      if (detail::mass_of(v, e.target.cond().members()) == 0) continue;
      Rational p = conditional_expectation(v, e.target);
      if (!lo || p < *lo) lo = p;
      if (!hi || p > *hi) hi = p;
    }
    if (!lo) throw Error(Errc::ZeroProbabilityConditioning, "every vertex gives " + e.given_label + " probability 0");
    out.add(e.target, *lo, e.upper ? hi : std::nullopt, e.var_label, e.given_label);
  }
  return out;
}

/// Conditional variables with their labels; prices are not part of a domain.
struct DomainItem {
  ConditionalVariable target;
  std::string var_label;
  std::string given_label;
};

using Domain = std::vector<DomainItem>;

inline Domain domain_of(const Assessment& a) {
  Domain d;
  for (const auto& e : a.entries()) d.push_back(DomainItem{e.target, e.var_label, e.given_label});
  return d;
}

inline void require_probability(const SpaceRef& space, const std::vector<Rational>& p) {
  if (p.size() != space->size()) throw Error(Errc::InvalidArgument, "mass function has the wrong number of atoms");
  Rational sum = 0;
  for (const auto& v : p) {
    if (v < 0) throw Error(Errc::InvalidArgument, "negative mass");
    sum += v;
  }
  if (sum != 1) throw Error(Errc::InvalidArgument, "masses sum to " + to_string(sum));
}

/// The precise assessment P(X|B) on `domain` for a mass function.
inline Assessment prevision_from_mass(const SpaceRef& space, const std::vector<Rational>& p, const Domain& domain) {
  require_probability(space, p);
  Assessment out(space);
  for (const auto& d : domain) out.add_precise(d.target, conditional_expectation(p, d.target), d.var_label, d.given_label);
  return out;
}

/// Pointwise minimum of precise previsions over one domain, each checked for
/// dF-coherence.
inline Assessment lower_envelope(const std::vector<Assessment>& ps) {
  if (ps.empty()) throw Error(Errc::EmptyAssessment, "no previsions to envelope");
  const auto& first = ps.front();
  for (std::size_t k = 0; k < ps.size(); ++k) {
    const auto& p = ps[k];
    detail::require_same_space(first.space(), p.space());
    if (p.size() != first.size()) throw Error(Errc::MissingValues, "member " + std::to_string(k) + " has another domain");
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!(p[i].target == first[i].target))
        throw Error(Errc::MissingValues, "member " + std::to_string(k) + " has another domain");
    if (!p.all_precise() || !check_df_precise_conditional(p).passed)
      throw Error(Errc::MemberNotCoherent, "member " + std::to_string(k) + " is not a dF-coherent precise prevision");
  }
  Assessment out(first.space());
  for (std::size_t i = 0; i < first.size(); ++i) {
    Rational lo = first[i].lower;
    for (const auto& p : ps) lo = std::min(lo, p[i].lower);
    out.add(first[i].target, lo, std::nullopt, first[i].var_label, first[i].given_label);
  }
  return out;
}

inline Assessment lower_envelope(const SpaceRef& space, const std::vector<std::vector<Rational>>& masses,
                                 const Domain& domain) {
  std::vector<Assessment> ps;
  for (const auto& p : masses) ps.push_back(prevision_from_mass(space, p, domain));
  return lower_envelope(ps);
}

struct ConvexEnvelope {
  Assessment assessment;
  bool centered = true;
  /// min over P of alpha(P)/P(B), per conditioning event of the domain.
  std::vector<std::pair<Event, Rational>> shifts;
};

/// LP(X|B) = min over P of P(X|B) + alpha(P)/P(B).
inline ConvexEnvelope convex_envelope(const SpaceRef& space, const std::vector<std::vector<Rational>>& masses,
                                      const std::vector<Rational>& alpha, const Domain& domain) {
  if (masses.empty()) throw Error(Errc::EmptyAssessment, "no previsions to envelope");
  if (alpha.size() != masses.size()) throw Error(Errc::InvalidArgument, "one alpha per prevision is required");
  for (const auto& p : masses) require_probability(space, p);
  ConvexEnvelope out{Assessment(space), true, {}};
  for (const auto& d : domain) {
    std::optional<Rational> lo, shift;
    for (std::size_t k = 0; k < masses.size(); ++k) {
      Rational pb = detail::mass_of(masses[k], d.target.cond().members());
      if (pb == 0) throw Error(Errc::ZeroProbabilityConditioning, "P(" + d.given_label + ") = 0");
      Rational v = conditional_expectation(masses[k], d.target) + alpha[k] / pb;
      if (!lo || v < *lo) lo = v;
      if (!shift || alpha[k] / pb < *shift) shift = alpha[k] / pb;
    }
    out.assessment.add(d.target, *lo, std::nullopt, d.var_label, d.given_label);
    bool seen = std::any_of(out.shifts.begin(), out.shifts.end(),
                            [&](const auto& s) { return s.first == d.target.cond(); });
    if (!seen) {
      out.shifts.emplace_back(d.target.cond(), *shift);
      if (*shift != 0) out.centered = false;
    }
  }
  return out;
}

}  // namespace previsio
