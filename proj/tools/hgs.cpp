#include "cli_config.hpp"

#include "hgs/error.hpp"
#include "hgs/operators.hpp"
#include "hgs/schatten.hpp"
#include "hgs/spaces.hpp"
#include "hgs/symbols.hpp"
#include "hgs/util.hpp"
#include "hgs/verify.hpp"
#include "hgs/weights.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace hgs;
using cli::CliConfig;
using cli::Format;

namespace {

struct Flags {
  std::string config_path;
  bool dump = false;
  std::string weight, symbol, p, N, basis, format, output, precision, suite;
  int depth = -1, threads = -1;
};

void apply_flags(CliConfig& c, const Flags& f) {
  if (!f.config_path.empty()) cli::load_ini_file(c, f.config_path);
  if (!f.weight.empty()) c.weight = f.weight;
  if (!f.symbol.empty()) c.symbol = f.symbol;
  if (!f.p.empty()) c.p_list = cli::parse_real_list(f.p, "p");
  if (!f.N.empty()) c.N_list = cli::parse_int_list(f.N, "N");
  if (!f.basis.empty()) {
    std::istringstream in("[sweep]\nbasis = " + f.basis + "\n");
    cli::load_ini(c, in, "--basis");
  }
  if (!f.precision.empty()) {
    std::istringstream in("[weights]\nprecision = " + f.precision + "\n");
    cli::load_ini(c, in, "--precision");
  }
  if (!f.format.empty()) c.format = cli::parse_format(f.format);
  if (!f.output.empty()) c.path = f.output;
  if (f.depth >= 0) c.depth = f.depth;
  if (f.threads >= 0) c.threads = f.threads;
  if (!f.suite.empty()) c.suites = {f.suite};
}

RadialWeight weight_of(const CliConfig& c) {
  auto w = RadialWeight::parse(c.weight);
  return c.precision == "extended" ? w.with_precision(Precision::extended) : w;
}

void emit(const CliConfig& c, const std::string& text) {
  if (c.path == "-" || c.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.path);
  if (!out) throw Error(ErrorKind::input, "cli", "cannot write '" + c.path + "'");
  out << text;
}

std::string json_text(const nlohmann::json& j) { return j.dump(2) + "\n"; }

int weights_report(const CliConfig& c) {
  const auto w = weight_of(c);
  const auto rep = condition_report(w, c.depth);
  if (c.format == Format::json) {
    nlohmann::json j = rep;
    emit(c, json_text(j));
    return 0;
  }
  std::ostringstream os;
  auto row = [&](const char* name, quad::Verdict v, double value) {
    if (c.format == Format::csv)
      os << name << ',' << to_string(v) << ',' << precise(value) << '\n';
    else
      os << name << ": " << to_string(v) << ' ' << shortest(value) << '\n';
  };
  if (c.format == Format::csv) os << "quantity,verdict,value\n";
  else os << "weight " << w.id() << '\n';
  row("doubling", rep.doubling.verdict, rep.doubling.sup_ratio);
  row("beta", rep.doubling.verdict, rep.doubling.beta_estimate);
  row("M1", rep.m1.verdict, rep.m1.value);
  row("M2", rep.m2.verdict, rep.m2.value);
  row("M3", rep.m3.verdict, rep.m3.value);
  row("M4", rep.m4.verdict, rep.m4.value);
  row("vg2", rep.vg2.kind, rep.vg2.value);
  emit(c, os.str());
  return 0;
}

int symbol_bnorm(const CliConfig& c) {
  const auto g = Symbol::parse(c.symbol);
  const int n_max = c.depth;
  std::vector<BNorm> norms;
  for (double p : c.p_list) norms.push_back(bnorm_blocks(g, p, n_max));
  std::ostringstream os;
  if (c.format == Format::json) {
    nlohmann::json j = {{"symbol", g.id()}, {"norms", norms}};
    emit(c, json_text(j));
    return 0;
  }
  if (c.format == Format::csv) os << "symbol,p,n_max,verdict,value,extrapolated\n";
  for (const auto& b : norms) {
    if (c.format == Format::csv)
      os << csv_field(g.id()) << ',' << format_p(b.p) << ',' << b.n_max << ',' << to_string(b.verdict) << ','
         << precise(b.value) << ',' << precise(b.extrapolated) << '\n';
    else
      os << "B(2," << format_p(b.p) << ") of " << g.id() << ": " << to_string(b.verdict) << ", partial "
         << shortest(b.value) << ", limit " << shortest(b.extrapolated) << '\n';
  }
  emit(c, os.str());
  return 0;
}

int symbol_blocks(const CliConfig& c) {
  const auto g = Symbol::parse(c.symbol);
  const auto prof = block_profile(g, c.depth);
  if (c.format == Format::json) {
    nlohmann::json j = prof;
    j["symbol"] = g.id();
    emit(c, json_text(j));
    return 0;
  }
  std::ostringstream os;
  if (c.format == Format::csv) os << "n,B_n\n";
  for (std::size_t n = 0; n < prof.B.size(); ++n)
    os << n << (c.format == Format::csv ? "," : "  ") << (c.format == Format::csv ? precise(prof.B[n]) : shortest(prof.B[n]))
       << '\n';
  emit(c, os.str());
  return 0;
}

int operator_matrix(const CliConfig& c) {
  const auto w = weight_of(c);
  const auto g = Symbol::parse(c.symbol);
  const int N = c.N_list.front();
  const auto m = hg_matrix(w, g, N, c.basis == "block" ? BasisKind::block : BasisKind::monomial,
                           HypothesisPolicy::stamp);
  if (!m.stamp.empty()) std::cerr << "operators: " << m.stamp << '\n';
  std::ostringstream os;
  if (c.format == Format::json) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.entries.rows(); ++j) {
      std::vector<double> r(static_cast<std::size_t>(m.entries.cols()));
      for (Eigen::Index n = 0; n < m.entries.cols(); ++n) r[static_cast<std::size_t>(n)] = m.entries(j, n);
      rows.push_back(r);
    }
    nlohmann::json j = {{"weight", m.weight_id}, {"symbol", m.symbol_id},         {"basis", m.basis},
                        {"N", m.N},              {"frobenius_sq", m.frobenius_sq}, {"row_tail_mass", m.row_tail_mass},
                        {"stamp", m.stamp},      {"entries", rows}};
    emit(c, json_text(j));
    return 0;
  }
  if (c.format == Format::csv) {
    os << "j,n,value\n";
    for (Eigen::Index n = 0; n < m.entries.cols(); ++n)
      for (Eigen::Index j = 0; j < m.entries.rows(); ++j) os << j << ',' << n << ',' << precise(m.entries(j, n)) << '\n';
  } else {
    os << "matrix " << m.entries.rows() << "x" << m.entries.cols() << " (" << m.basis << ") for " << m.symbol_id
       << " on " << m.weight_id << "\nfrobenius^2 " << shortest(m.frobenius_sq) << "\nrow-tail mass "
       << shortest(m.row_tail_mass) << '\n';
    if (!m.stamp.empty()) os << m.stamp << '\n';
  }
  emit(c, os.str());
  return 0;
}

int operator_schatten(const CliConfig& c) {
  const auto w = weight_of(c);
  const auto g = Symbol::parse(c.symbol);
  SweepOptions opt;
  opt.threads = c.worker_count();
  opt.tol = c.tol;
  const auto t = sweep(w, g, c.p_list, c.N_list, opt);
  if (!t.stamp.empty()) std::cerr << "schatten: " << t.stamp << '\n';
  if (c.format == Format::json) {
    nlohmann::json j = t;
    emit(c, json_text(j));
  } else if (c.format == Format::csv) {
    emit(c, sweep_csv({t}));
  } else {
    std::ostringstream os;
    os << t.symbol_id << " on " << t.weight_id << '\n';
    for (const auto& r : t.rows)
      os << "N=" << r.N << " p=" << format_p(r.p) << " S_p " << shortest(r.s_p) << " B " << shortest(r.b_norm)
         << " ratio " << shortest(r.ratio) << " change " << shortest(r.rel_change) << (r.monotone ? "" : " NOT MONOTONE")
         << '\n';
    emit(c, os.str());
  }
  return t.monotone_violations() == 0 ? 0 : 1;
}

int hilbert_norm(const CliConfig& c) {
  const auto w = weight_of(c);
  const auto rep = condition_report(w, c.depth);
  std::vector<std::pair<int, double>> tops;
  std::string stamp;
  for (int D = 4; D <= c.hilbert_D; D *= 2) {
    const auto m = hilbert_discretized(w, D, c.hilbert_D, HypothesisPolicy::stamp, &rep);
    stamp = m.stamp;
    tops.emplace_back(D, singular_values(m, c.tol.svd).top());
  }
  if (!stamp.empty()) std::cerr << "operators: " << stamp << '\n';
  std::vector<PhiProbe> probes;
  for (double r : c.probe_radii) probes.push_back(phi_probe(w, r));
  std::ostringstream os;
  if (c.format == Format::json) {
    nlohmann::json j = {{"weight", w.id()}, {"J", c.hilbert_D}, {"stamp", stamp}};
    for (const auto& [D, top] : tops) j["top"].push_back({{"D", D}, {"value", top}});
    for (const auto& p : probes)
      j["probes"].push_back({{"r", p.r},
                             {"ratio", std::isfinite(p.ratio) ? nlohmann::json(p.ratio) : nlohmann::json(nullptr)},
                             {"converged", p.converged}});
    emit(c, json_text(j));
    return 0;
  }
  if (c.format == Format::csv) {
    os << "kind,parameter,value\n";
    for (const auto& [D, top] : tops) os << "top," << D << ',' << precise(top) << '\n';
    for (const auto& p : probes) os << "probe," << precise(p.r) << ',' << precise(p.ratio) << '\n';
  } else {
    os << "Hilbert operator on " << w.id() << ", J=" << c.hilbert_D << '\n';
    for (const auto& [D, top] : tops) os << "D=" << D << " top singular value " << shortest(top) << '\n';
    for (const auto& p : probes)
      os << "probe r=" << shortest(p.r) << " ratio " << shortest(p.ratio) << (p.converged ? "" : " (not converged)")
         << '\n';
  }
  emit(c, os.str());
  return 0;
}

int run_verify(const CliConfig& c) {
  SpectrumCache cache;
  auto vc = c.verify_config();
  vc.cache = &cache;
  const auto report = verify::run(c.suite_list(), vc);
  if (c.format == Format::json) {
    nlohmann::json j;
    verify::to_json(j, report);
    emit(c, json_text(j));
  } else if (c.format == Format::csv) {
    emit(c, verify::to_csv(report));
  } else {
    emit(c, verify::to_plain(report));
  }
  return report.overall() == verify::Outcome::pass ? 0 : 1;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::nonconvergence:
    case ErrorKind::accuracy: return 3;
    default: return 2;
  }
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized Hilbert operators on weighted Dirichlet spaces"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--config", f.config_path, "INI file applied before flags");
  app.add_flag("--dump-config", f.dump, "Print the effective configuration and exit");
  app.add_option("--weight", f.weight, "std:<a> | bergman:<spec> | exp:<c>:<gamma> | table:<path>");
  app.add_option("--symbol", f.symbol, "log | pow:<b> | poly:<c0,c1,...> | blockw:<theta>");
  app.add_option("--p", f.p, "Comma-separated exponents, inf allowed");
  app.add_option("--N", f.N, "Comma-separated truncation sizes");
  app.add_option("--depth", f.depth, "Dyadic depth for condition and block evaluations");
  app.add_option("--basis", f.basis, "monomial | block");
  app.add_option("--threads", f.threads, "Worker count, 0 for available parallelism");
  app.add_option("--format", f.format, "plain | csv | json");
  app.add_option("--output", f.output, "Output path, - for stdout");
  app.add_option("--precision", f.precision, "standard | extended");
  app.fallthrough();

  auto* weights = app.add_subcommand("weights", "Weight conditions");
  weights->require_subcommand(1);
  auto* w_report = weights->add_subcommand("report", "Doubling and M1..M4, vg2");
  auto* symbol = app.add_subcommand("symbol", "Symbol block norms");
  symbol->require_subcommand(1);
  auto* s_bnorm = symbol->add_subcommand("bnorm", "B(2,p) norms by blocks");
  auto* s_blocks = symbol->add_subcommand("blocks", "Block profile B_n");
  auto* op = app.add_subcommand("operator", "Truncated H_g");
  op->require_subcommand(1);
  auto* o_matrix = op->add_subcommand("matrix", "Matrix of the first N");
  auto* o_schatten = op->add_subcommand("schatten", "S_p sweep over N");
  auto* hil = app.add_subcommand("hilbert", "Hilbert operator H");
  hil->require_subcommand(1);
  auto* h_norm = hil->add_subcommand("norm", "Discretized norm and probes");
  auto* ver = app.add_subcommand("verify", "Run verification suites");
  ver->add_option("suite", f.suite, "Suite id or all");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    CliConfig cfg;
    apply_flags(cfg, f);
    if (f.dump) {
      cli::write_ini(cfg, std::cout);
      return 0;
    }
    if (w_report->parsed()) return weights_report(cfg);
    if (s_bnorm->parsed()) return symbol_bnorm(cfg);
    if (s_blocks->parsed()) return symbol_blocks(cfg);
    if (o_matrix->parsed()) return operator_matrix(cfg);
    if (o_schatten->parsed()) return operator_schatten(cfg);
    if (h_norm->parsed()) return hilbert_norm(cfg);
    if (ver->parsed()) return run_verify(cfg);
    std::cerr << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
