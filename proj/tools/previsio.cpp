// previsio: command-line front end.
//
//   previsio check --notion NAME [-f FILE] [--fast] [--dump-lp] [--target VAR] [--timing]
//   previsio extend --target VAR[|EVENT] [-f FILE]
//   previsio envelope [--delta p/q | --filter-zero] [-f FILE]
//   previsio example definetti --h H --k K --n N
//   previsio example walley666 --n N [--structured]
//   previsio oracle [-f FILE] [--max-k K]
//
// Exit codes: 0 passed or done, 1 notion failed, 2 input or usage error.
// Reports go to standard output as JSON; diagnostics go to standard error.

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "previsio/previsio.hpp"

using namespace previsio;

namespace {

struct Input {
  std::string text;
  std::string digest;
};

Input read_input(const std::string& path) {
  std::ostringstream buf;
  if (path.empty() || path == "-") {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::ParseError, "cannot open " + path);
    buf << in.rdbuf();
  }
  Input out{buf.str(), {}};
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : out.text) h = (h ^ c) * 1099511628211ull;
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  out.digest = std::string("fnv1a64:") + hex;
  return out;
}

std::optional<Notion> notion_named(const std::string& s) {
  for (auto n : {Notion::DfPreciseUnconditional, Notion::DfPreciseConditional, Notion::CoherenceUnconditional,
                 Notion::WCoherence, Notion::Aul, Notion::Convex, Notion::CenteredConvex, Notion::BiCoherence,
                 Notion::SeparateCoherence, Notion::WalleyAsl})
    if (s == notion_name(n)) return n;
  return std::nullopt;
}

Verdict run_notion(Notion n, const Document& d, const CheckOptions& opts) {
  const auto& a = d.assessment;
  switch (n) {
    case Notion::DfPreciseUnconditional: return check_df_precise_unconditional(a, opts);
    case Notion::DfPreciseConditional: return check_df_precise_conditional(a, opts);
    case Notion::CoherenceUnconditional: return check_coherence_unconditional(a, opts);
    case Notion::WCoherence: return check_w_coherence(a, opts);
    case Notion::Aul: return check_aul(a, opts);
    case Notion::Convex: return check_convex(a, opts);
    case Notion::CenteredConvex: return check_centered_convex(a, opts);
    case Notion::BiCoherence: return check_bi_coherence(a, opts);
    case Notion::SeparateCoherence:
    case Notion::WalleyAsl: {
      if (d.partition.empty()) throw Error(Errc::InvalidPartition, "the input lists no \"partition\"");
      auto split = split_by_partition(a, d.partition, d.events_named(d.partition));
      if (n == Notion::SeparateCoherence) return check_separate_coherence(split.family, opts);
      return check_walley_asl(split.unconditional, split.family, opts);
    }
  }
  throw Error(Errc::InvalidArgument, "unknown notion");
}

ConditionalVariable target_of(const Document& d, const std::string& spec) {
  auto bar = spec.find('|');
  std::string var = spec.substr(0, bar);
  std::string given = bar == std::string::npos ? "Omega" : spec.substr(bar + 1);
  return restrict(d.variable(var), d.event(given));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consistency checks for conditional lower previsions"};
  app.require_subcommand(1);

  std::string file, notion_text, target, delta;
  bool fast = false, dump_lp = false, timing = false, filter_zero = false, structured = false;
  std::size_t h = 1, k = 1, n = 1;
  long long max_k = 6;

  auto* check = app.add_subcommand("check", "Decide a consistency notion");
  check->add_option("--notion", notion_text, "w-coherence, aul, df-conditional, df-unconditional, "
                                             "coherence-unconditional, convex, centered-convex, bi-coherence, "
                                             "separate-coherence, walley-asl, conglomerability")
      ->required();
  check->add_option("-f,--file", file, "Assessment JSON (standard input when absent)");
  check->add_flag("--fast", fast, "Iterative support path");
  check->add_flag("--dump-lp", dump_lp, "Print every LP to standard error");
  check->add_option("--target", target, "Variable for the conglomerability report (default A)");
  check->add_flag("--timing", timing, "Add wall time to the report");

  auto* ext = app.add_subcommand("extend", "Natural extension bounds");
  ext->add_option("--target", target, "VAR or VAR|EVENT")->required();
  ext->add_option("-f,--file", file, "Assessment JSON (standard input when absent)");
  ext->add_flag("--dump-lp", dump_lp, "Print every LP to standard error");
  ext->add_flag("--timing", timing, "Add wall time to the report");

  auto* env = app.add_subcommand("envelope", "Credal set vertices and per-entry minima");
  auto* delta_opt = env->add_option("--delta", delta, "Require P(B) >= delta for every conditioning event");
  auto* filter_opt = env->add_flag("--filter-zero", filter_zero, "Ignore vertices giving B probability 0 (default)");
  delta_opt->excludes(filter_opt);
  env->add_option("-f,--file", file, "Assessment JSON (standard input when absent)");
  env->add_flag("--timing", timing, "Add wall time to the report");

  auto* example = app.add_subcommand("example", "Generate a truncated example assessment");
  example->require_subcommand(1);
  auto* dfe = example->add_subcommand("definetti", "Random positive integer");
  dfe->set_help_flag("--help", "Print this help message and exit");
  dfe->add_option("--h", h, "Odd numbers per cell")->check(CLI::PositiveNumber);
  dfe->add_option("--k", k, "Even numbers per cell")->check(CLI::PositiveNumber);
  dfe->add_option("--n", n, "Number of listed cells")->check(CLI::PositiveNumber);
  auto* wal = example->add_subcommand("walley666", "Mixture on the non-zero integers");
  wal->add_option("--n", n, "Number of listed cells")->check(CLI::PositiveNumber);
  wal->add_flag("--structured", structured, "Partition form for walley-asl");

  auto* orc = app.add_subcommand("oracle", "Cross-check checkers, fast path and grid search");
  orc->add_option("-f,--file", file, "Assessment JSON (standard input when absent)");
  orc->add_option("--max-k", max_k, "Largest stake on the grid")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  }

  std::string command;
  for (int i = 1; i < argc; ++i) command += (i > 1 ? " " : "") + std::string(argv[i]);

  try {
    if (*example) {
      Example ex = *dfe ? definetti_example(h, k, n) : walley666_example(n, structured);
      std::cout << to_json(ex.doc).dump(2) << "\n";
      return 0;
    }

    auto t0 = std::chrono::steady_clock::now();
    auto input = read_input(file);
    Document doc = parse_document(input.text);
    CheckOptions opts;
    if (dump_lp)
      opts.lp_sink = [](const std::string& tag, const lp::LinearProgram& p) {
        std::cerr << "\\ " << tag << "\n" << p.to_text() << "\n";
      };

    Json out;
    out["command"] = command;
    out["inputDigest"] = input.digest;
    int code = 0;
    LpStats stats;

    if (*check) {
      opts.fast = fast;
      if (notion_text == "conglomerability") {
        auto rep = check_conglomerability(doc, target.empty() ? "A" : target);
        out["conglomerability"] = to_json(rep);
        code = rep.conglomerable ? 0 : 1;
      } else {
        auto notion = notion_named(notion_text);
        if (!notion) {
          std::cerr << "usage error: unknown notion " << notion_text << "\n";
          return 2;
        }
        auto v = run_notion(*notion, doc, opts);
        out["verdict"] = to_json(v);
        stats = v.stats;
        code = v.passed ? 0 : 1;
      }
    } else if (*ext) {
      NaturalExtender extender(doc.assessment, opts);
      auto r = extender.extend(target_of(doc, target));
      out["extension"] = to_json(r, target);
      stats = extender.stats();
    } else if (*env) {
      Positivity pos = delta.empty() ? Positivity::filter_zero() : Positivity::at_least(parse_rational(delta));
      try {
        auto c = credal_polytope(doc.assessment, pos);
        out["envelope"] = to_json(c, doc.assessment);
      } catch (const Error& e) {
        if (e.code() != Errc::EmptyCredalSet && e.code() != Errc::PositiveRegimeUnavailable) throw;
        Json err;
        err["error"] = errc_name(e.code());
        err["message"] = e.what();
        out["envelope"] = std::move(err);
        code = 1;
      }
    } else if (*orc) {
      Json rows = Json::array();
      bool agree = true;
      for (const auto& row : cross_check(doc.assessment, max_k, opts)) {
        Json r;
        r["notion"] = notion_name(row.notion);
        r["enumeration"] = row.enumeration;
        if (row.fast) r["fast"] = *row.fast;
        r["grid"] = row.grid;
        r["agree"] = row.agree();
        agree = agree && row.agree();
        rows.push_back(std::move(r));
      }
      out["oracle"] = std::move(rows);
      code = agree ? 0 : 1;
    }

    out["lpStats"] = to_json(stats);
    if (timing)
      out["wallTimeMs"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    std::cout << out.dump(2) << "\n";
    return code;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
