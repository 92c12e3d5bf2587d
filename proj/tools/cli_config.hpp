#pragma once

// Settings shared by every command. Read from an INI file, then overridden
// by flags; written back by --dump-config.

#include "hgs/schatten.hpp"
#include "hgs/verify.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace hgs::cli {

enum class Format { plain, csv, json };

struct CliConfig {
  // [weights]
  std::string weight = "std:1";
  std::string precision = "standard";  // standard | extended
  // [symbols]
  std::string symbol = "pow:0.75";
  // [sweep]
  std::vector<double> p_list{1.0, 2.0, 4.0, INFINITY};
  std::vector<int> N_list{64, 256, 1024};
  int depth = 24;
  std::string basis = "monomial";
  int threads = 0;  // 0: available parallelism
  std::vector<std::string> suites{"all"};
  std::vector<int> verify_N{1024, 2048, 4096};
  int hs_N = 512;
  int hilbert_D = 64;
  std::vector<double> probe_radii{0.5, 0.9, 0.99, 0.999};
  // [tolerances]
  Tolerances tol{};
  double lemma_bracket = 16.0;
  double corpus_bracket = 10.0;
  double hilbert_ceiling = 10.0;
  double hilbert_stability = 0.05;
  // [output]
  Format format = Format::plain;
  std::string path = "-";

  int worker_count() const;
  verify::Config verify_config() const;
  std::vector<std::string> suite_list() const;

  bool operator==(const CliConfig&) const = default;
};

/// Applies the keys of an INI file on top of `cfg`. Unknown sections or keys
/// and malformed values throw Error(input).
void load_ini(CliConfig& cfg, std::istream& in, const std::string& source);
void load_ini_file(CliConfig& cfg, const std::string& path);
void write_ini(const CliConfig& cfg, std::ostream& out);

Format parse_format(const std::string& s);
const char* to_string(Format f) noexcept;

std::vector<double> parse_real_list(const std::string& s, const char* what);
std::vector<int> parse_int_list(const std::string& s, const char* what);

} // namespace hgs::cli
