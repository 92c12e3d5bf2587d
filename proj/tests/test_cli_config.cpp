#include "cli_config.hpp"

#include "hgs/error.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace hgs;
using cli::CliConfig;

namespace {

CliConfig from_text(const std::string& text) {
  CliConfig c;
  std::istringstream in(text);
  cli::load_ini(c, in, "test");
  return c;
}

} // namespace

TEST(CliConfig, DumpRoundTrip) {
  CliConfig c;
  c.weight = "bergman:std:-0.5";
  c.p_list = {0.5, 2.0, INFINITY};
  c.N_list = {64, 128};
  c.tol.stabilization = 0.015;
  c.tol.svd = 1e-13;
  c.format = cli::Format::csv;
  c.suites = {"hs-identity", "weight-lemmas"};
  c.probe_radii = {0.1, 0.3};
  std::ostringstream out;
  cli::write_ini(c, out);
  EXPECT_EQ(from_text(out.str()), c);

  std::ostringstream defaults;
  cli::write_ini(CliConfig{}, defaults);
  EXPECT_EQ(from_text(defaults.str()), CliConfig{});
}

TEST(CliConfig, SectionsAndOverrides) {
  const auto c = from_text("[weights]\nweight = std:0.5\n[sweep]\np = 1, inf\nN = 8,16\n[output]\nformat = json\n");
  EXPECT_EQ(c.weight, "std:0.5");
  ASSERT_EQ(c.p_list.size(), 2u);
  EXPECT_TRUE(std::isinf(c.p_list[1]));
  EXPECT_EQ(c.N_list, (std::vector<int>{8, 16}));
  EXPECT_EQ(c.format, cli::Format::json);
  EXPECT_EQ(c.symbol, CliConfig{}.symbol);
}

TEST(CliConfig, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(from_text("[weights]\nwieght = std:1\n"), Error);
  EXPECT_THROW(from_text("[plots]\nx = 1\n"), Error);
  EXPECT_THROW(from_text("weight = std:1\n"), Error);
  EXPECT_THROW(from_text("[sweep]\nN = 8,x\n"), Error);
  EXPECT_THROW(from_text("[output]\nformat = xml\n"), Error);
  EXPECT_THROW(from_text("[weights]\nprecision = quad\n"), Error);
  try {
    from_text("[tolerances]\nspred = 8\n");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::input);
    EXPECT_NE(std::string(e.what()).find("spred"), std::string::npos);
  }
}

TEST(CliConfig, VerifyConfigAndSuites) {
  CliConfig c;
  EXPECT_EQ(c.suite_list(), verify::suite_ids());
  c.threads = 3;
  c.verify_N = {256, 512};
  const auto v = c.verify_config();
  EXPECT_EQ(v.threads, 3);
  EXPECT_EQ(v.N_list, (std::vector<int>{256, 512}));
  EXPECT_GE(CliConfig{}.worker_count(), 1);
}
