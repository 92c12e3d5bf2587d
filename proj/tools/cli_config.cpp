#include "cli_config.hpp"

#include "hgs/error.hpp"
#include "hgs/util.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <thread>

namespace hgs::cli {

namespace {

template <class T>
std::string join(const std::vector<T>& v, std::string (*fmt)(T)) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
  return out;
}

std::string real_text(double x) { return shortest(x); }
std::string int_text(int x) { return std::to_string(x); }
std::string str_text(std::string s) { return s; }

using Setter = std::function<void(CliConfig&, const std::string&)>;
using Getter = std::function<std::string(const CliConfig&)>;

struct Key {
  Setter set;
  Getter get;
};

Key real_key(double CliConfig::*m, const char* what) {
  return {[m, what](CliConfig& c, const std::string& v) { c.*m = parse_real(v, what); },
          [m](const CliConfig& c) { return shortest(c.*m); }};
}

Key tol_key(double Tolerances::*m, const char* what) {
  return {[m, what](CliConfig& c, const std::string& v) { c.tol.*m = parse_real(v, what); },
          [m](const CliConfig& c) { return shortest(c.tol.*m); }};
}

Key int_key(int CliConfig::*m, const char* what) {
  return {[m, what](CliConfig& c, const std::string& v) { c.*m = parse_int(v, what); },
          [m](const CliConfig& c) { return std::to_string(c.*m); }};
}

Key string_key(std::string CliConfig::*m) {
  return {[m](CliConfig& c, const std::string& v) { c.*m = trim(v); }, [m](const CliConfig& c) { return c.*m; }};
}

// Section -> key -> accessor, in dump order.
const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>>& schema() {
  static const std::vector<std::pair<std::string, std::vector<std::pair<std::string, Key>>>> s = {
      {"weights",
       {{"weight", string_key(&CliConfig::weight)},
        {"precision",
         {[](CliConfig& c, const std::string& v) {
            const auto t = trim(v);
            if (t != "standard" && t != "extended")
              throw Error(ErrorKind::input, "config", "precision must be standard or extended, got '" + t + "'");
            c.precision = t;
          },
          [](const CliConfig& c) { return c.precision; }}}}},
      {"symbols", {{"symbol", string_key(&CliConfig::symbol)}}},
      {"sweep",
       {{"p", {[](CliConfig& c, const std::string& v) { c.p_list = parse_real_list(v, "p"); },
               [](const CliConfig& c) { return join(c.p_list, real_text); }}},
        {"N", {[](CliConfig& c, const std::string& v) { c.N_list = parse_int_list(v, "N"); },
               [](const CliConfig& c) { return join(c.N_list, int_text); }}},
        {"depth", int_key(&CliConfig::depth, "depth")},
        {"basis",
         {[](CliConfig& c, const std::string& v) {
            const auto t = trim(v);
            if (t != "monomial" && t != "block")
              throw Error(ErrorKind::input, "config", "basis must be monomial or block, got '" + t + "'");
            c.basis = t;
          },
          [](const CliConfig& c) { return c.basis; }}},
        {"threads", int_key(&CliConfig::threads, "threads")},
        {"suites", {[](CliConfig& c, const std::string& v) {
                      c.suites.clear();
                      for (const auto& s : split(v, ',')) c.suites.push_back(trim(s));
                    },
                    [](const CliConfig& c) { return join(c.suites, str_text); }}},
        {"verify_N", {[](CliConfig& c, const std::string& v) { c.verify_N = parse_int_list(v, "verify_N"); },
                      [](const CliConfig& c) { return join(c.verify_N, int_text); }}},
        {"hs_N", int_key(&CliConfig::hs_N, "hs_N")},
        {"hilbert_D", int_key(&CliConfig::hilbert_D, "hilbert_D")},
        {"probe_radii",
         {[](CliConfig& c, const std::string& v) { c.probe_radii = parse_real_list(v, "probe_radii"); },
          [](const CliConfig& c) { return join(c.probe_radii, real_text); }}}}},
      {"tolerances",
       {{"stabilization", tol_key(&Tolerances::stabilization, "stabilization")},
        {"spread", tol_key(&Tolerances::spread, "spread")},
        {"svd", tol_key(&Tolerances::svd, "svd")},
        {"frobenius", tol_key(&Tolerances::frobenius, "frobenius")},
        {"row_tail", tol_key(&Tolerances::row_tail, "row_tail")},
        {"lemma_bracket", real_key(&CliConfig::lemma_bracket, "lemma_bracket")},
        {"corpus_bracket", real_key(&CliConfig::corpus_bracket, "corpus_bracket")},
        {"hilbert_ceiling", real_key(&CliConfig::hilbert_ceiling, "hilbert_ceiling")},
        {"hilbert_stability", real_key(&CliConfig::hilbert_stability, "hilbert_stability")}}},
      {"output",
       {{"format", {[](CliConfig& c, const std::string& v) { c.format = parse_format(trim(v)); },
                    [](const CliConfig& c) { return std::string(to_string(c.format)); }}},
        {"path", string_key(&CliConfig::path)}}},
  };
  return s;
}

} // namespace

Format parse_format(const std::string& s) {
  if (s == "plain") return Format::plain;
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw Error(ErrorKind::input, "config", "format must be plain, csv or json, got '" + s + "'");
}

const char* to_string(Format f) noexcept {
  switch (f) {
    case Format::plain: return "plain";
    case Format::csv: return "csv";
    case Format::json: return "json";
  }
  return "plain";
}

std::vector<double> parse_real_list(const std::string& s, const char* what) {
  std::vector<double> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_real(part, what));
  if (out.empty()) throw Error(ErrorKind::input, "config", std::string("empty list for ") + what);
  return out;
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_int(part, what));
  if (out.empty()) throw Error(ErrorKind::input, "config", std::string("empty list for ") + what);
  return out;
}

int CliConfig::worker_count() const {
  if (threads > 0) return threads;
  return std::max(1u, std::thread::hardware_concurrency());
}

std::vector<std::string> CliConfig::suite_list() const {
  if (suites.size() == 1 && suites[0] == "all") return verify::suite_ids();
  return suites;
}

verify::Config CliConfig::verify_config() const {
  verify::Config v;
  v.threads = worker_count();
  v.depth = depth;
  v.tol = tol;
  v.p_list = p_list;
  v.N_list = verify_N;
  v.hs_N = hs_N;
  v.hilbert_D = hilbert_D;
  v.probe_radii = probe_radii;
  v.lemma_bracket = lemma_bracket;
  v.corpus_bracket = corpus_bracket;
  v.hilbert_ceiling = hilbert_ceiling;
  v.hilbert_stability = hilbert_stability;
  return v;
}

void load_ini(CliConfig& cfg, std::istream& in, const std::string& source) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::input, "config", source + ": " + e.message() + " at line " + std::to_string(e.line()));
  }
  for (const auto& [section, keys] : tree) {
    const auto& sch = schema();
    auto sit = std::find_if(sch.begin(), sch.end(), [&](const auto& s) { return s.first == section; });
    if (!keys.data().empty())
      throw Error(ErrorKind::input, "config", source + ": key '" + section + "' outside any section");
    if (sit == sch.end())
      throw Error(ErrorKind::input, "config", source + ": unknown section [" + section + "]");
    for (const auto& [key, value] : keys) {
      auto kit = std::find_if(sit->second.begin(), sit->second.end(), [&](const auto& k) { return k.first == key; });
      if (kit == sit->second.end())
        throw Error(ErrorKind::input, "config", source + ": unknown key '" + key + "' in [" + section + "]");
      kit->second.set(cfg, value.data());
    }
  }
}

void load_ini_file(CliConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::input, "config", "cannot open '" + path + "'");
  load_ini(cfg, in, path);
}

void write_ini(const CliConfig& cfg, std::ostream& out) {
  bool first = true;
  for (const auto& [section, keys] : schema()) {
    if (!first) out << '\n';
    first = false;
    out << '[' << section << "]\n";
    for (const auto& [key, k] : keys) out << key << " = " << k.get(cfg) << '\n';
  }
}

} // namespace hgs::cli
