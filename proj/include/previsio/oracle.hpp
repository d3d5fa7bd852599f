#pragma once

// Brute-force cross-checks for tiny assessments: stake grids searched
// directly through the gain table, next to the LP checkers. Only meant for a
// handful of atoms and entries; the grid grows as (k+1)^terms.

#include <functional>
#include <optional>
#include <vector>

#include "previsio/checkers.hpp"

namespace previsio {

namespace detail {

inline std::vector<std::vector<std::size_t>> against_choices(Notion n, std::size_t m) {
  std::vector<std::vector<std::size_t>> out;
  switch (n) {
    case Notion::Aul:
    case Notion::DfPreciseConditional:
    case Notion::DfPreciseUnconditional:
      out.push_back({});
      break;
    case Notion::WCoherence:
    case Notion::CoherenceUnconditional:
    case Notion::Convex:
    case Notion::CenteredConvex:
      for (std::size_t c = 0; c < m; ++c) out.push_back({c});
      break;
    case Notion::BiCoherence:
      for (std::size_t c1 = 0; c1 < m; ++c1)
        for (std::size_t c2 = c1; c2 < m; ++c2)
          out.push_back(c1 == c2 ? std::vector<std::size_t>{c1} : std::vector<std::size_t>{c1, c2});
      break;
    default:
      throw Error(Errc::InvalidArgument, std::string("no grid search for ") + notion_name(n));
  }
  return out;
}

/// Element gains scaled to a common denominator, as machine integers.
struct IntGains {
  std::vector<std::pair<std::size_t, Prevision>> els;
  std::vector<std::vector<long long>> gain;
  std::vector<std::vector<std::size_t>> cond;
};

inline IntGains int_gains(const Assessment& a) {
  IntGains out;
  std::vector<Element> els = elements_of(a);
  Integer scale = 1;
  for (const auto& el : els)
    for (const auto& g : el.gain) scale = boost::multiprecision::lcm(scale, Integer(boost::multiprecision::denominator(g)));
  for (const auto& el : els) {
    out.els.emplace_back(el.entry, el.prevision);
    std::vector<long long> row;
    for (const auto& g : el.gain) {
      Integer v = boost::multiprecision::numerator(g) * (scale / boost::multiprecision::denominator(g));
      if (abs(v) > Integer(1) << 40) throw Error(Errc::InvalidArgument, "gains too large for the grid search");
      row.push_back(v.convert_to<long long>());
    }
    out.gain.push_back(std::move(row));
    out.cond.push_back(el.cond.members());
  }
  return out;
}

/// Walks {0..k}^cols in odometer order, keeping the combined gain and the
/// number of active columns on each atom up to date. Stops at the first
/// stake vector whose gain is negative on its whole support.
inline std::optional<std::vector<long long>> odometer_search(const std::vector<std::vector<long long>>& cols,
                                                             const std::vector<std::vector<std::size_t>>& conds,
                                                             std::size_t atoms, long long k) {
  const std::size_t n = cols.size();
  std::vector<long long> s(n, 0), g(atoms, 0);
  std::vector<std::size_t> cover(atoms, 0);
  std::size_t active = 0;
  for (;;) {
    std::size_t i = 0;
    while (i < n && s[i] == k) {
      for (std::size_t w = 0; w < atoms; ++w) g[w] -= k * cols[i][w];
      for (auto w : conds[i]) --cover[w];
      --active;
      s[i++] = 0;
    }
    if (i == n) return std::nullopt;
    if (s[i]++ == 0) {
      for (auto w : conds[i]) ++cover[w];
      ++active;
    }
    for (std::size_t w = 0; w < atoms; ++w) g[w] += cols[i][w];
    bool hit = active > 0;
    for (std::size_t w = 0; w < atoms && hit; ++w)
      if (cover[w] > 0 && g[w] >= 0) hit = false;
    if (hit) return s;
  }
}

/// For stakes summing to k, plus every against column at stake k.
inline std::optional<std::vector<long long>> composition_search(const std::vector<std::vector<long long>>& cols,
                                                                const std::vector<std::vector<std::size_t>>& conds,
                                                                std::size_t atoms, std::size_t for_cols, long long k) {
  std::vector<long long> s(cols.size(), 0);
  for (std::size_t j = for_cols; j < cols.size(); ++j) s[j] = k;
  std::function<bool(std::size_t, long long)> rec = [&](std::size_t i, long long left) {
    if (i + 1 == for_cols || for_cols == 0) {
      if (for_cols > 0) s[i] = left;
      std::vector<long long> g(atoms, 0);
      std::vector<bool> cover(atoms, false);
      for (std::size_t j = 0; j < cols.size(); ++j) {
        if (s[j] == 0) continue;
        for (std::size_t w = 0; w < atoms; ++w) g[w] += s[j] * cols[j][w];
        for (auto w : conds[j]) cover[w] = true;
      }
      for (std::size_t w = 0; w < atoms; ++w)
        if (cover[w] && g[w] >= 0) return false;
      return true;
    }
    for (long long v = 0; v <= left; ++v) {
      s[i] = v;
      if (rec(i + 1, left - v)) return true;
    }
    return false;
  };
  if (rec(0, k)) return s;
  return std::nullopt;
}

}  // namespace detail

/// A bet with integer stakes in {0..k} and sup(G|S) < 0, or nothing. The
/// convex kinds fix the against stake to k and the for stakes to sum to k.
inline std::optional<Bet> grid_violation(const Assessment& a, Notion notion, long long k) {
  auto ig = detail::int_gains(a);
  const std::size_t m = ig.els.size(), atoms = a.space()->size();
  const bool convex = notion == Notion::Convex || notion == Notion::CenteredConvex;
  for (const auto& against : detail::against_choices(notion, m)) {
    auto cols = ig.gain;
    auto conds = ig.cond;
    for (auto c : against) {
      auto neg = ig.gain[c];
      for (auto& v : neg) v = -v;
      cols.push_back(std::move(neg));
      conds.push_back(ig.cond[c]);
    }
    auto s = convex ? detail::composition_search(cols, conds, atoms, m, k) : detail::odometer_search(cols, conds, atoms, k);
    if (!s) continue;
    Bet bet;
    for (std::size_t i = 0; i < s->size(); ++i) {
      if ((*s)[i] == 0) continue;
      const auto& el = ig.els[i < m ? i : against[i - m]];
      bet.terms.push_back(BetTerm{el.first, el.second, i < m ? Side::For : Side::Against, Rational((*s)[i])});
    }
    return bet;
  }
  return std::nullopt;
}

/// The grid {0..max_k} already holds every coarser grid; the convex kinds
/// refine k from 1 since their stakes must add up to k.
inline std::optional<Bet> search_violation(const Assessment& a, Notion notion, long long max_k = 6) {
  if (notion != Notion::Convex && notion != Notion::CenteredConvex) return grid_violation(a, notion, max_k);
  for (long long k = 1; k <= max_k; ++k)
    if (auto b = grid_violation(a, notion, k)) return b;
  return std::nullopt;
}

struct OracleRow {
  Notion notion;
  bool enumeration;          // passed by the subset-enumeration checker
  std::optional<bool> fast;  // passed by the iterative support path
  bool grid;                 // no violation found on the grid
  bool agree() const { return enumeration == grid && (!fast || *fast == enumeration); }
};

/// Runs every notion that applies to the assessment three ways.
inline std::vector<OracleRow> cross_check(const Assessment& a, long long max_k = 6, CheckOptions opts = {}) {
  std::vector<std::pair<Notion, std::function<Verdict(const Assessment&, const CheckOptions&)>>> notions{
      {Notion::WCoherence, check_w_coherence}, {Notion::Aul, check_aul}};
  if (a.all_unconditional()) notions.emplace_back(Notion::BiCoherence, check_bi_coherence);
  notions.emplace_back(Notion::Convex, check_convex);
  std::vector<OracleRow> out;
  for (const auto& [n, run] : notions) {
    OracleRow row{n, true, std::nullopt, true};
    try {
      opts.fast = false;
      row.enumeration = run(a, opts).passed;
    } catch (const Error&) {
      continue;  // prerequisites of the notion not met
    }
    if (n != Notion::Convex) {
      opts.fast = true;
      row.fast = run(a, opts).passed;
    }
    row.grid = !search_violation(a, n, n == Notion::Convex ? 8 : max_k);
    out.push_back(row);
  }
  return out;
}

}  // namespace previsio
