#include <gtest/gtest.h>

#include <string>

#include "colmodel/config.hpp"

using namespace colmodel;

TEST(ParseConfig, HappyPath) {
  const auto spec = parse_config(
      "# indirect sweep\n"
      "model = indirect\n"
      "kappa = 0.2\n"
      "J = 0.5   # trailing comment\n"
      "axis1 = Omega 0 pi/2 16\n"
      "axis2 = T 0 10 11\n"
      "outputs = N coherences\n");
  EXPECT_EQ(spec.model, ModelKind::indirect);
  const auto& cfg = std::get<IndirectConfig>(spec.base);
  EXPECT_EQ(cfg.kappa.value(), 0.2);
  EXPECT_EQ(cfg.J.value(), 0.5);
  EXPECT_EQ(cfg.Omega.value(), 0.0);
  EXPECT_EQ(cfg.thermal.omega_ratio(), 5.0);
  ASSERT_TRUE(spec.axis1 && spec.axis2);
  EXPECT_EQ(spec.axis1->hi, half_pi);
  EXPECT_EQ(spec.axis2->steps, 11u);
  EXPECT_EQ(spec.outputs, (std::vector<std::string>{"N", "coherences"}));
  EXPECT_EQ(spec.fixed.size(), 2u);
}

TEST(ParseConfig, Defaults) {
  const auto spec = parse_config("", false);
  EXPECT_EQ(spec.model, ModelKind::direct);
  const auto& cfg = std::get<DirectConfig>(spec.base);
  EXPECT_EQ(cfg.J.value(), 0.3);
  EXPECT_EQ(cfg.Omega.value(), 0.0);
  EXPECT_EQ(cfg.thermal.temperature(), 0.0);
  EXPECT_EQ(cfg.stop, StopPolicy{});
  EXPECT_EQ(spec.oracle_steps, 6u);
}

TEST(ParseConfig, AxisEndsExactly) {
  Axis a{"T", 0.0, 10.0, 101};
  const auto v = a.values();
  ASSERT_EQ(v.size(), 101u);
  EXPECT_EQ(v.front(), 0.0);
  EXPECT_EQ(v.back(), 10.0);
  for (std::size_t i = 1; i < v.size(); ++i) EXPECT_GT(v[i], v[i - 1]);
}

namespace {

std::string error_of(const std::string& text, bool require_axis1 = false) {
  try {
    parse_config(text, require_axis1);
  } catch (const config_error& e) {
    return e.what();
  }
  return {};
}

std::size_t error_line(const std::string& text) {
  try {
    parse_config(text, false);
  } catch (const config_error& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST(ParseConfig, StrengthOutOfRangeNamesKeyAndRange) {
  const auto msg = error_of("J = 2.0\n");
  EXPECT_NE(msg.find("J"), std::string::npos);
  EXPECT_NE(msg.find("[0, pi/2]"), std::string::npos);
  EXPECT_EQ(error_line("model = direct\nJ = 2.0\n"), 2u);
}

TEST(ParseConfig, Rejections) {
  EXPECT_NE(error_of("axis1 = Omega 1 0.5 10\n"), "");
  EXPECT_NE(error_of("axis1 = Omega 0 1 1\n"), "");
  EXPECT_NE(error_of("axis1 = Omega 0 1\n"), "");
  EXPECT_NE(error_of("axis1 = Beta 0 1 4\n"), "");
  EXPECT_NE(error_of("J = 0.1\naxis1 = J 0 1 4\n"), "");
  EXPECT_NE(error_of("axis1 = T 0 1 4\naxis2 = T 0 2 4\n"), "");
  EXPECT_NE(error_of("axis2 = T 0 2 4\n"), "");
  EXPECT_NE(error_of("kappa = 0.1\n"), "");
  EXPECT_NE(error_of("axis1 = kappa 0 1 4\n"), "");
  EXPECT_NE(error_of("T = -1\n"), "");
  EXPECT_NE(error_of("omega_ratio = 0\n"), "");
  EXPECT_NE(error_of("model = sideways\n"), "");
  EXPECT_NE(error_of("Omega = abc\n"), "");
  EXPECT_NE(error_of("outputs = N spectra\n"), "");
  EXPECT_NE(error_of("n_max = 10\nsettle_window = 50\n"), "");
  EXPECT_NE(error_of("oracle_steps = 9\n"), "");
  EXPECT_NE(error_of("resolution = 0\n"), "");
  EXPECT_NE(error_of("search_lo = 1\nsearch_hi = 0.5\n"), "");
  EXPECT_NE(error_of("search = kappa\n"), "");
  EXPECT_NE(error_of("", true), "");
}

TEST(ParseConfig, SyntaxErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("J = 0.1\n\nfoo = 1\n"), 3u);
  EXPECT_EQ(error_line("J = 0.1\nJ = 0.2\n"), 2u);
  EXPECT_EQ(error_line("# c\njust words\n"), 2u);
  EXPECT_EQ(error_line("J =\n"), 1u);
}

TEST(ParseConfig, OverridesReplaceOrAppend) {
  auto entries = parse_entries("J = 0.1\nOmega = 0.2\n");
  apply_override(entries, "J=0.4");
  apply_override(entries, "T = 3");
  const auto spec = build_spec(entries, false);
  const auto& cfg = std::get<DirectConfig>(spec.base);
  EXPECT_EQ(cfg.J.value(), 0.4);
  EXPECT_EQ(cfg.Omega.value(), 0.2);
  EXPECT_EQ(cfg.thermal.temperature(), 3.0);
  EXPECT_THROW(apply_override(entries, "J"), config_error);
  EXPECT_THROW(apply_override(entries, "bogus=1"), config_error);
  EXPECT_THROW(apply_override(entries, "J="), config_error);
}
