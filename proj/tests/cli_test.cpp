#include <gtest/gtest.h>

#include <json.hpp>

#include "cli.hpp"

using nestfold::cli::parse_result;
using nestfold::cli::render;
using nestfold::cli::run;
using nestfold::cli::to_json;

namespace {

const std::vector<std::vector<std::string>> kJsonCommands = {
    {"spec", "validate", "--spec", "builtin:vicsek"},
    {"spec", "info", "--spec", "builtin:gasket"},
    {"glp", "--spec", "builtin:hexagon"},
    {"project", "--spec", "builtin:gasket", "--point", "4", "--order", "1"},
    {"walk", "gamma", "--spec", "builtin:gasket"},
    {"walk", "hitting", "--spec", "builtin:gasket", "--start", "0", "--horizon", "12"},
    {"walk", "quotient", "--spec", "builtin:gasket"},
    {"walk", "simulate", "--spec", "builtin:gasket", "--start", "0", "--seed", "5", "--count", "2000"},
};

}  // namespace

TEST(Cli, JsonRoundTrip) {
  for (const auto& argv : kJsonCommands) {
    const auto r = run(argv);
    EXPECT_EQ(r.exit_code, 0) << argv[0] << " " << r.error;
    const auto text = render(r);
    EXPECT_EQ(to_json(parse_result(text)), to_json(r)) << argv[0];
  }
}

TEST(Cli, RerunsAreByteIdentical) {
  for (const auto& argv : kJsonCommands) EXPECT_EQ(render(run(argv)), render(run(argv))) << argv[0];
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({"glp", "--spec", "builtin:gasket", "--bogus"}).exit_code, 2);
  EXPECT_EQ(run({"walk", "simulate", "--spec", "builtin:gasket", "--start", "0"}).exit_code, 2);
  EXPECT_EQ(run({"constants", "--spec", "builtin:gasket"}).exit_code, 2);
  EXPECT_EQ(run({"nonsense"}).exit_code, 2);
}

TEST(Cli, FloatingInputIsRejected) {
  const auto r = run({"project", "--spec", "builtin:gasket", "--point", "0.5", "--order", "1"});
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_FALSE(r.error.empty());
}

TEST(Cli, GlpVerdicts) {
  const auto no = run({"glp", "--spec", "builtin:snowflake"});
  EXPECT_EQ(no.exit_code, 0);
  EXPECT_FALSE(no.verdicts["glp"].get<bool>());
  EXPECT_EQ(no.report["conflict"]["labels"].size(), 2u);
  EXPECT_TRUE(run({"glp", "--spec", "builtin:gasket"}).verdicts["glp"].get<bool>());
}

TEST(Cli, SpecInfo) {
  const auto r = run({"spec", "info", "--spec", "builtin:gasket"});
  EXPECT_EQ(r.report["d_f_formula"], "log 3 / log 2");
  EXPECT_NEAR(r.report["d_f"].get<double>(), std::log(3.0) / std::log(2.0), 1e-12);
}

TEST(Cli, CsvCommands) {
  const auto r = run({"shells", "--spec", "builtin:gasket", "--point", "0", "--order", "0", "--n-max", "4"});
  EXPECT_EQ(r.exit_code, 0) << r.error;
  EXPECT_EQ(r.payload_kind, "csv");
  EXPECT_FALSE(r.payload.empty());
  EXPECT_EQ(render(r), r.payload);
}

TEST(Cli, QuickVerify) {
  const auto r = run({"verify", "--quick", "--spec", "builtin:gasket", "--seed", "7"});
  EXPECT_EQ(r.exit_code, 0) << render(r);
}
