// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "previsio/previsio.hpp"
#include "support/instances.hpp"

using namespace previsio;
using oracle::Q;

namespace {

struct Criterion {
  int number;
  std::string title;
  bool ok = true;
  std::vector<std::string> failures;
  std::string summary;

  void require(bool cond, const std::string& what) {
    if (cond) return;
    ok = false;
    if (failures.size() < 5) failures.push_back(what);
  }
};

int run_cli(const std::string& args, std::string* out = nullptr) {
  std::string cmd = std::string(PREVISIO_BIN) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return -1;
  std::string text;
  std::array<char, 4096> buf;
  while (auto n = fread(buf.data(), 1, buf.size(), p)) text.append(buf.data(), n);
  int status = pclose(p);
  if (out) *out = text;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string str(const Rational& r) { return to_string(r); }

ConditionalVariable atom_indicator(const SpaceRef& s, std::size_t i) {
  return restrict(RandomVariable::indicator(Event::of_indices(s, {i})), Event::sure(s));
}

std::vector<Rational> to_rats(const std::vector<Q>& v) {
  std::vector<Rational> r;
  for (const auto& q : v) r.push_back(oracle::to_rat(q));
  return r;
}

ConditionalVariable to_cv(const SpaceRef& s, const std::vector<Q>& x, const std::vector<bool>& b) {
  std::vector<std::size_t> c;
  for (std::size_t w = 0; w < b.size(); ++w)
    if (b[w]) c.push_back(w);
  return restrict(RandomVariable(s, to_rats(x)), Event::of_indices(s, c));
}

Event to_event(const SpaceRef& s, const std::vector<bool>& b) {
  std::vector<std::size_t> c;
  for (std::size_t w = 0; w < b.size(); ++w)
    if (b[w]) c.push_back(w);
  return Event::of_indices(s, c);
}

/// The same assessment in the oracle's own representation.
oracle::Instance to_instance(const Assessment& a) {
  oracle::Instance inst{a.space()->size(), {}};
  for (const auto& e : a.entries()) {
    oracle::Entry o;
    for (std::size_t w = 0; w < inst.atoms; ++w) {
      o.x.push_back(oracle::from_rat(e.target.value(w)));
      o.cond.push_back(e.target.cond().contains(w));
    }
    o.lower = oracle::from_rat(e.lower);
    if (e.upper) o.upper = oracle::from_rat(*e.upper);
    inst.entries.push_back(std::move(o));
  }
  return inst;
}

Domain random_domain(oracle::Generator& gen, const SpaceRef& s, bool zeros) {
  const std::size_t n = s->size();
  Domain d;
  std::vector<Event> conds;
  for (long long k = gen.uniform(1, 4); k > 0; --k) {
    auto b = gen.uniform(0, 2) == 0 ? std::vector<bool>(n, true) : gen.nonempty_subset(n);
    auto ev = to_event(s, b);
    d.push_back({restrict(RandomVariable(s, to_rats(gen.values(n, -1, 3))), ev), "X" + std::to_string(d.size()),
                 "B" + std::to_string(d.size())});
    if (std::none_of(conds.begin(), conds.end(), [&](const Event& e) { return e == ev; })) conds.push_back(ev);
  }
  if (zeros)
    for (std::size_t k = 0; k < conds.size(); ++k)
      d.push_back({restrict(RandomVariable::constant(s, Rational(0)), conds[k]), "zero", "C" + std::to_string(k)});
  return d;
}

// ------------------------------------------------------------------ criteria

Criterion criterion_definetti() {
  Criterion c{1, "de Finetti h=1 k=2 N=8"};
  auto t0 = std::chrono::steady_clock::now();
  auto ex = definetti_example(1, 2, 8);
  auto v = check_df_precise_conditional(ex.doc.assessment);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  c.require(v.passed, "df-conditional failed");
  c.require(secs < 10, "took " + std::to_string(secs) + " s");

  auto rep = check_conglomerability(ex.doc, "A");
  c.require(rep.per_cell.size() == 8, "expected 8 cells");
  c.require(rep.inf_cell == Rational(1, 3) && rep.sup_cell == Rational(1, 3), "cell interval is not [1/3, 1/3]");
  c.require(rep.target == Rational(1, 2), "P(A) is " + str(rep.target));
  c.require(rep.gap == Rational(1, 6), "gap is " + str(rep.gap));

  std::string out;
  int code = run_cli("example definetti --h 1 --k 2 --n 8 | " + std::string(PREVISIO_BIN) +
                         " check --notion df-conditional",
                     &out);
  c.require(code == 0, "CLI check exited with " + std::to_string(code));
  c.summary = "passed in " + std::to_string(static_cast<int>(secs * 1000)) + " ms; cells [" + str(rep.inf_cell) + ", " +
              str(rep.sup_cell) + "] vs P(A)=" + str(rep.target) + ", gap " + str(rep.gap);
  return c;
}

Criterion criterion_bi_coherence() {
  Criterion c{2, "bi-coherence examples"};
  auto vacuous = [](std::size_t n) {
    auto s = oracle::space_for(n);
    Assessment a(s);
    for (std::size_t i = 0; i < n; ++i) a.add(atom_indicator(s, i), Rational(0), std::nullopt, s->atom(i));
    return a;
  };
  auto precise = [](const std::vector<Rational>& p) {
    auto s = oracle::space_for(p.size());
    Assessment a(s);
    for (std::size_t i = 0; i < p.size(); ++i) a.add_precise(atom_indicator(s, i), p[i], s->atom(i));
    return a;
  };
  c.require(check_bi_coherence(vacuous(3)).passed, "vacuous on 3 atoms rejected");
  auto v = check_bi_coherence(vacuous(2));
  c.require(!v.passed, "vacuous on 2 atoms accepted");
  if (!v.passed && v.witness) {
    Rational total = 0;
    for (const auto& t : v.witness->terms) total += t.stake;
    c.require(total == 1, "stakes not normalized");
    auto g = v.witness_gain();
    c.require(g.values == std::vector<Rational>{Rational(-1, 2), Rational(-1, 2)}, "gain is not -1/2 everywhere");
    // an independent evaluation of the same bet
    Rational at1 = 0, at2 = 0;
    for (const auto& t : v.witness->terms) {
      const auto& e = v.witness_source->operator[](t.entry);
      c.require(t.prevision == Prevision::Lower, "vacuous entries have no upper prevision");
      Rational sign = t.side == Side::For ? 1 : -1;
      at1 += sign * t.stake * (e.target.value(0) - e.lower);
      at2 += sign * t.stake * (e.target.value(1) - e.lower);
    }
    c.require(at1 == Rational(-1, 2) && at2 == Rational(-1, 2), "witness re-evaluation differs");
  } else {
    c.require(false, "no witness");
  }
  for (const auto& p : {std::vector<Rational>{Rational(2, 5), Rational(3, 5)},
                        std::vector<Rational>{Rational(1, 6), Rational(1, 2), Rational(1, 3)}}) {
    auto a = precise(p);
    c.require(check_df_precise_unconditional(a).passed, "precise assessment not dF-coherent");
    c.require(check_bi_coherence(a).passed, "dF-coherent precise assessment rejected");
  }
  c.summary = "3 atoms passes; 2 atoms fails with gain (-1/2, -1/2); precise on 2 and 3 atoms passes";
  return c;
}

Criterion criterion_walley() {
  Criterion c{3, "Walley mixture N=4"};
  auto ex = walley666_example(4);
  const auto& a = ex.doc.assessment;
  for (int n = 1; n <= 4; ++n) {
    auto bn = "B" + std::to_string(n);
    auto value = [&](const std::string& var) -> std::optional<Rational> {
      auto i = a.find_label(var, bn);
      if (!i) return std::nullopt;
      return a[*i].lower;
    };
    // Bayes from the mass function
    auto bayes = [&](const std::string& var) {
      auto x = ex.doc.variable(var);
      auto b = ex.doc.event(bn);
      Rational num = 0, den = 0;
      for (auto w : b.members().members()) {
        num += ex.mass[w] * x[w];
        den += ex.mass[w];
      }
      return num / den;
    };
    c.require(value("A") == Rational(1) && bayes("A") == 1, "P(A|" + bn + ") is not 1");
    auto wn = "w" + std::to_string(n);
    c.require(value(wn) == Rational(1) && bayes(wn) == 1, "P(" + wn + "|" + bn + ") is not 1");
  }
  c.require(check_aul(a).passed, "AUL failed");
  auto rep = check_conglomerability(ex.doc, "A");
  c.require(rep.inf_cell == 1, "assessed-cell inf is " + str(rep.inf_cell));
  c.require(rep.target == Rational(1, 2), "P(A) is " + str(rep.target));
  c.summary = "P(A|Bn) = P(wn|Bn) = 1; AUL passes; limit diagnostic: assessed-cell inf " + str(rep.inf_cell) +
              " vs P(A)=" + str(rep.target) + " (finite N shows no sure loss)";
  return c;
}

Criterion criterion_implications() {
  Criterion c{4, "implication chains, 200 instances"};
  oracle::Generator gen(4004);
  int df = 0, w = 0, sep = 0, asl = 0, violations = 0;
  auto check = [&](bool cond, const std::string& what) {
    if (!cond) ++violations;
    c.require(cond, what);
  };
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 3 + trial % 2;
    const std::size_t m = 1 + trial % 4;
    const auto tag = " (trial " + std::to_string(trial) + ")";

    // precise unconditional: dF => bi => coherent
    auto pi = gen.arbitrary(n, m, false, false);
    for (auto& e : pi.entries)
      if (gen.uniform(0, 1) == 0) e.upper = e.lower;
    auto p = oracle::to_assessment(pi);
    if (p.all_precise()) {
      bool d = check_df_precise_unconditional(p).passed;
      bool b = check_bi_coherence(p).passed;
      df += d;
      if (d) check(b, "dF without bi" + tag);
      if (b) check(check_coherence_unconditional(p).passed, "bi without coherence" + tag);
    } else {
      if (check_bi_coherence(p).passed) check(check_coherence_unconditional(p).passed, "bi without coherence" + tag);
    }

    // conditional: W => AUL
    auto ca = oracle::to_assessment(gen.arbitrary(n, m, true, trial % 3 != 0));
    bool wc = check_w_coherence(ca).passed;
    w += wc;
    if (wc) check(check_aul(ca).passed, "W without AUL" + tag);

    // Structured family over a two-cell partition; H(B) = {0, C1, C2, Y1, ...}.
    auto s = oracle::space_for(n);
    std::vector<Event> cells = n == 3 ? std::vector<Event>{Event::of_indices(s, {0}), Event::of_indices(s, {1, 2})}
                                      : std::vector<Event>{Event::of_indices(s, {0, 1}), Event::of_indices(s, {2, 3})};
    PartitionFamily f{s, {"C1", "C2"}, cells, {}};
    std::vector<std::vector<Rational>> ys;
    for (long long j = gen.uniform(1, 2); j > 0; --j) ys.push_back(to_rats(gen.values(n, -1, 3)));
    for (std::size_t k = 0; k < 2; ++k) {
      Assessment h(s);
      h.add(restrict(RandomVariable::constant(s, Rational(0)), Event::sure(s)), Rational(0), std::nullopt, "0");
      for (std::size_t j = 0; j < 2; ++j) {
        Rational self = j != k ? Rational(0) : gen.uniform(0, 7) == 0 ? Rational(1, 2) : Rational(1);
        h.add(restrict(RandomVariable::indicator(cells[j]), Event::sure(s)), self, std::nullopt, f.labels[j]);
      }
      for (std::size_t j = 0; j < ys.size(); ++j) {
        std::optional<Q> lo, hi;
        for (auto at : cells[k].members().members()) {
          Q v = oracle::from_rat(ys[j][at]);
          if (!lo || v < *lo) lo = v;
          if (!hi || v > *hi) hi = v;
        }
        h.add(restrict(RandomVariable(s, ys[j]), Event::sure(s)), oracle::to_rat(gen.price(*lo, *hi + Q(1, 2))),
              std::nullopt, "Y" + std::to_string(j));
      }
      f.per_cell.push_back(std::move(h));
    }
    bool sv = check_separate_coherence(f).passed;
    sep += sv;
    check(sv == check_w_coherence(f.merged()).passed, "separate and W disagree" + tag);

    // K: one or two unconditional lower previsions
    Assessment k(s);
    for (long long j = gen.uniform(1, 2); j > 0; --j) {
      auto x = gen.values(n, -1, 3);
      Q lo = *std::min_element(x.begin(), x.end()), hi = *std::max_element(x.begin(), x.end());
      k.add(restrict(RandomVariable(s, to_rats(x)), Event::sure(s)), oracle::to_rat(gen.price(lo, hi + Q(1, 2))),
            std::nullopt, "K" + std::to_string(j));
    }
    bool av = check_walley_asl(k, f).passed;
    asl += av;
    if (av) {
      Assessment merged = k;
      f.append_to(merged);
      check(check_aul(merged).passed, "ASL without AUL" + tag);
    }
  }
  c.require(df > 10 && w > 10 && sep > 10 && asl > 10, "too few passing instances to exercise the chains");
  c.require(sep < 200, "separate coherence never failed");
  c.summary = std::to_string(violations) + " violations; passing counts dF " + std::to_string(df) + ", W " +
              std::to_string(w) + ", separate " + std::to_string(sep) + ", ASL " + std::to_string(asl);
  return c;
}

Criterion criterion_envelopes() {
  Criterion c{5, "envelope round trip, 100 sets"};
  oracle::Generator gen(5005);
  std::size_t vertices = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 3 + trial % 3;
    const auto tag = " (trial " + std::to_string(trial) + ")";
    auto s = oracle::space_for(n);
    std::vector<std::vector<Rational>> ps;
    for (long long k = gen.uniform(2, 4); k > 0; --k) ps.push_back(to_rats(gen.positive_mass(n)));
    auto d = random_domain(gen, s, false);
    auto env = lower_envelope(s, ps, d);
    c.require(check_w_coherence(env).passed, "envelope not W-coherent" + tag);
    // direct minimum over the members
    for (std::size_t i = 0; i < d.size(); ++i) {
      std::optional<Rational> lo;
      for (const auto& p : ps) {
        Rational num = 0, den = 0;
        for (auto w : d[i].target.cond().members().members()) {
          num += p[w] * d[i].target.value(w);
          den += p[w];
        }
        if (!lo || num / den < *lo) lo = num / den;
      }
      c.require(env[i].lower == *lo, "envelope differs from the member minimum" + tag);
    }
    Rational delta = 1;
    for (const auto& p : ps)
      for (const auto& item : d) delta = std::min(delta, detail::mass_of(p, item.target.cond().members()));
    auto poly = credal_polytope(env, Positivity::at_least(delta));
    vertices += poly.vertices.size();
    auto back = vertex_envelope(poly, env);
    for (std::size_t i = 0; i < env.size(); ++i)
      c.require(back[i].lower == env[i].lower, "vertex minimum differs" + tag);
  }
  c.summary = "100/100 W-coherent, vertex minima exact (" + std::to_string(vertices) + " vertices)";
  return c;
}

Criterion criterion_natural_extension() {
  Criterion c{6, "natural extension, 50 bases"};
  oracle::Generator gen(6006);
  int product_checked = 0, grid_matches = 0, grid_total = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + trial % 2;
    const auto tag = " (trial " + std::to_string(trial) + ")";
    auto s = oracle::space_for(n);
    // D holds A|B, X|AB and sometimes one more random entry.
    std::vector<bool> b, a_ev(n), ab(n);
    bool any = false;
    while (!any) {
      b = gen.nonempty_subset(n);
      for (std::size_t w = 0; w < n; ++w) {
        a_ev[w] = gen.uniform(0, 1) == 1;
        ab[w] = a_ev[w] && b[w];
        any = any || ab[w];
      }
    }
    auto x = gen.values(n, 0, 3);
    std::vector<Q> ind(n), ax(n);
    for (std::size_t w = 0; w < n; ++w) {
      ind[w] = a_ev[w] ? 1 : 0;
      ax[w] = a_ev[w] ? x[w] : Q(0);
    }
    std::vector<oracle::Entry> dom{{ind, b, 0, std::nullopt}, {x, ab, 0, std::nullopt}};
    if (trial % 2 == 0) dom.push_back({gen.values(n, -1, 3), gen.nonempty_subset(n), 0, std::nullopt});
    std::vector<std::vector<Q>> ps;
    for (long long k = gen.uniform(1, 3); k > 0; --k) ps.push_back(gen.positive_mass(n));
    auto inst = oracle::envelope_instance(ps, dom);
    auto a = oracle::to_assessment(inst, s);
    c.require(check_w_coherence(a).passed, "base not W-coherent" + tag);

    NaturalExtender ext(a);
    for (std::size_t i = 0; i < a.size(); ++i) c.require(ext.lower(a[i].target) == a[i].lower, "LE != LP on D" + tag);

    auto probe = [&](const std::vector<Q>& xv, const std::vector<bool>& bv) {
      auto cv = to_cv(s, xv, bv);
      auto r = ext.extend(cv);
      c.require(r.lower <= cond_sup(cv), "LE above sup" + tag);
      Q grid = oracle::scaled_natural_extension(inst, xv, bv, 8, 16);
      c.require(oracle::to_rat(grid) <= r.lower, "grid above LE" + tag);
      ++grid_total;
      grid_matches += oracle::to_rat(grid) == r.lower;
      c.require(oracle::to_rat(grid) == r.lower,
                "grid " + str(oracle::to_rat(grid)) + " differs from LE " + str(r.lower) + tag);
      return r.lower;
    };
    probe(gen.values(n, -1, 3), gen.nonempty_subset(n));
    Rational le_ax = probe(ax, b);
    if (a[1].lower > 0) {
      ++product_checked;
      c.require(le_ax >= a[0].lower * a[1].lower, "product rule fails" + tag);
    }
  }
  c.require(product_checked >= 15, "product rule exercised only " + std::to_string(product_checked) + " times");
  c.summary = "LE = LP on D; grid matches LE " + std::to_string(grid_matches) + "/" + std::to_string(grid_total) +
              "; product rule checked on " + std::to_string(product_checked) + " bases";
  return c;
}

Criterion criterion_axioms() {
  Criterion c{7, "A1-A4 on a structured domain"};
  oracle::Generator gen(7007);
  std::size_t samples = 0;
  int bases = 0;
  for (int trial = 0; trial < 4; ++trial) {
    auto s = oracle::space_for(3);
    Assessment a(s);
    if (trial == 0) {
      a.add(to_cv(s, {1, 0, 0}, {true, true, true}), Rational(1, 4), std::nullopt, "A", "Omega");
      a.add(to_cv(s, {0, 2, 1}, {false, true, true}), Rational(5, 4), std::nullopt, "X", "BC");
    } else {
      std::vector<std::vector<Q>> ps{gen.positive_mass(3), gen.positive_mass(3)};
      a = oracle::to_assessment(oracle::envelope_instance(
                                    ps, {{gen.values(3, -1, 3), gen.nonempty_subset(3), 0, std::nullopt},
                                         {gen.values(3, -1, 3), std::vector<bool>(3, true), 0, std::nullopt}}),
                                s);
    }
    if (!check_w_coherence(a).passed) {
      c.require(false, "base not W-coherent");
      continue;
    }
    ++bases;
    NaturalExtender ext(a);
    StructuredDomain d{s,
                       {RandomVariable(s, {Rational(1), Rational(0), Rational(1)}),
                        RandomVariable(s, {Rational(0), Rational(2), Rational(1)}),
                        RandomVariable(s, {Rational(1), Rational(1), Rational(0)})},
                       {Event::of_indices(s, {0}), Event::of_indices(s, {1, 2}), Event::of_indices(s, {0, 1})}};
    auto report = check_a1_a4(d, ext);
    for (const auto& o : report.axioms) {
      c.require(o.passed, o.axiom + ": " + o.counterexample.value_or(""));
      c.require(o.samples > 0, o.axiom + " had no samples");
      samples += o.samples;
    }
  }
  c.summary = "A1-A4 hold on " + std::to_string(bases) + " bases, " + std::to_string(samples) + " samples";
  return c;
}

Criterion criterion_oracle_equivalence() {
  Criterion c{8, "oracle equivalence on small instances"};
  oracle::Kind kinds[] = {oracle::Kind::OneAgainst, oracle::Kind::ForOnly, oracle::Kind::TwoAgainst,
                          oracle::Kind::Convex};
  std::vector<std::pair<std::string, Assessment>> corpus;
  std::vector<std::filesystem::path> files;
  for (const auto& f : std::filesystem::directory_iterator(PREVISIO_DATA)) files.push_back(f.path());
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path);
    auto d = parse_document(in);
    if (d.space->size() <= 3 && d.assessment.size() <= 3) corpus.emplace_back(path.filename().string(), d.assessment);
  }
  const std::size_t from_files = corpus.size();
  oracle::Generator gen(8008);
  for (int trial = 0; trial < 120; ++trial) {
    auto inst = gen.arbitrary(2 + trial % 2, 1 + trial % 3, trial % 3 != 0, trial % 2 == 1);
    corpus.emplace_back("generated " + std::to_string(trial), oracle::to_assessment(inst));
  }
  int verdicts = 0, failures = 0;
  for (const auto& [name, a] : corpus) {
    auto inst = to_instance(a);
    std::vector<std::pair<Notion, oracle::Kind>> notions{{Notion::WCoherence, kinds[0]}, {Notion::Aul, kinds[1]}};
    if (a.all_unconditional()) notions.emplace_back(Notion::BiCoherence, kinds[2]);
    if (a.find(restrict(RandomVariable::constant(a.space(), Rational(0)), Event::sure(a.space()))))
      notions.emplace_back(Notion::Convex, kinds[3]);
    for (auto [n, kind] : notions) {
      auto run = [&](bool fast) {
        CheckOptions o;
        o.fast = fast;
        switch (n) {
          case Notion::WCoherence: return check_w_coherence(a, o);
          case Notion::Aul: return check_aul(a, o);
          case Notion::BiCoherence: return check_bi_coherence(a, o);
          default: return check_convex(a, o);
        }
      };
      Verdict slow = run(false);
      ++verdicts;
      failures += !slow.passed;
      if (n != Notion::Convex)
        c.require(run(true).passed == slow.passed, name + ": --fast disagrees on " + notion_name(n));
      bool grid = oracle::search_violation(inst, kind, n == Notion::Convex ? 8 : 6);
      c.require(grid == !slow.passed, name + ": grid disagrees on " + notion_name(n));
      bool lib_grid = search_violation(a, n, n == Notion::Convex ? 8 : 6).has_value();
      c.require(lib_grid == grid, name + ": the two grid searches disagree on " + notion_name(n));
    }
  }
  c.require(failures > 0 && failures < verdicts, "corpus does not mix passing and failing verdicts");
  c.summary = std::to_string(corpus.size()) + " instances (" + std::to_string(from_files) + " data files), " +
              std::to_string(verdicts) + " verdicts, " + std::to_string(failures) + " failing; all agree";
  return c;
}

Criterion criterion_convex() {
  Criterion c{9, "convex envelopes, 20 alpha assignments"};
  oracle::Generator gen(9009);
  int centered = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 2;
    const auto tag = " (trial " + std::to_string(trial) + ")";
    auto s = oracle::space_for(n);
    std::vector<std::vector<Rational>> ps;
    std::vector<Rational> alpha;
    for (long long k = gen.uniform(1, 3); k > 0; --k) {
      ps.push_back(to_rats(gen.positive_mass(n)));
      alpha.push_back(gen.uniform(0, 2) == 0 ? Rational(0) : Rational(gen.uniform(0, 4), gen.uniform(1, 3)));
    }
    auto d = random_domain(gen, s, true);
    auto ce = convex_envelope(s, ps, alpha, d);
    c.require(check_convex(ce.assessment).passed, "convex envelope rejected" + tag);
    bool direct = true;
    for (const auto& item : d) {
      std::optional<Rational> m;
      for (std::size_t k = 0; k < ps.size(); ++k) {
        Rational pb = 0;
        for (auto w : item.target.cond().members().members()) pb += ps[k][w];
        Rational r = alpha[k] / pb;
        if (!m || r < *m) m = r;
      }
      direct = direct && *m == 0;
    }
    c.require(ce.centered == direct, "centered flag differs from the direct test" + tag);
    c.require(check_centered_convex(ce.assessment).passed == direct, "centered-convex verdict differs" + tag);
    centered += direct;
  }
  c.summary = "20/20 convex; " + std::to_string(centered) + " centered, flag agrees every time";
  return c;
}

}  // namespace

int main() {
  std::vector<std::function<Criterion()>> all{
      criterion_definetti,   criterion_bi_coherence,     criterion_walley,
      criterion_implications, criterion_envelopes,       criterion_natural_extension,
      criterion_axioms,      criterion_oracle_equivalence, criterion_convex};
  int failed = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto& f = all[i];
    Criterion c{static_cast<int>(i + 1), "uncaught error"};
    auto t0 = std::chrono::steady_clock::now();
    try {
      c = f();
    } catch (const std::exception& e) {
      c.ok = false;
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (c.ok ? "[PASS] " : "[FAIL] ") << c.number << ". " << c.title;
    if (!c.summary.empty()) std::cout << ": " << c.summary;
    std::printf(" [%.1f s]\n", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    for (const auto& msg : c.failures) std::cout << "         " << msg << "\n";
    failed += !c.ok;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << "\n";
  return failed == 0 ? 0 : 1;
}
