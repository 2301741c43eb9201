// Copyright 2026 The mdiqkd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "mdiqkd/io.hpp"
#include "mdiqkd/session.hpp"

namespace {

using namespace mdiqkd;

std::string log_of(const RunConfig& c, unsigned workers) {
  std::ostringstream out;
  io::write_session(out, run_session(c, workers));
  return out.str();
}

TEST(SessionTest, MotherNoiseless) {
  RunConfig c;
  c.protocol = protocols::ProtocolId::Mother;
  c.n = 2;
  c.rounds = 1000;
  c.seed = 42;
  const auto res = run_session(c, 2);
  EXPECT_TRUE(res.report.key_agreement);
  EXPECT_EQ(res.report.raw_qber, 0.0);
  EXPECT_EQ(res.report.rounds_sifted, 1000U);
  EXPECT_EQ(res.report.sifted_key_bits, 2000U);
  EXPECT_FALSE(res.report.aborted);
  EXPECT_GT(res.report.final_key_length, 0U);
  EXPECT_EQ(res.alice_key, res.bob_key);
}

TEST(SessionTest, MotherWrapper) {
  const auto rep = run_mother_of_all_session(gf::FieldSpec(3), 500, 9);
  EXPECT_TRUE(rep.key_agreement);
  EXPECT_EQ(rep.n, 3U);
  EXPECT_THROW(run_mother_of_all_session(gf::FieldSpec(1), 0, 9), std::invalid_argument);
}

TEST(SessionTest, DeterministicAcrossRunsAndWorkers) {
  for (auto id : {protocols::ProtocolId::Mother, protocols::ProtocolId::MdiRrdpsLo, protocols::ProtocolId::NaiveChau15}) {
    RunConfig c;
    c.protocol = id;
    c.n = 2;
    c.rounds = 3000;
    c.seed = 7;
    c.channel = channel::ChannelModel::depolarizing(0.05);
    const auto one = log_of(c, 1);
    EXPECT_EQ(one, log_of(c, 1));
    EXPECT_EQ(one, log_of(c, 8));
    c.seed = 8;
    EXPECT_NE(one, log_of(c, 8));
  }
}

TEST(SessionTest, NaiveAttackReport) {
  RunConfig c;
  c.protocol = protocols::ProtocolId::NaiveChau15;
  c.n = 2;
  c.rounds = 4000;
  c.charlie = channel::CharlieKind::NaiveAttacker;
  const auto rep = run_session(c, 4).report;
  ASSERT_TRUE(rep.attacker_knowledge.has_value());
  EXPECT_EQ(*rep.attacker_knowledge, 1.0);
  EXPECT_EQ(*rep.qber_delta, 0.0);
}

TEST(SessionTest, NoiseSurvivesOrAborts) {
  RunConfig c;
  c.protocol = protocols::ProtocolId::MdiRrdps;
  c.n = 1;
  c.rounds = 20000;
  c.channel = channel::ChannelModel::depolarizing(0.03);
  const auto ok = run_session(c, 4).report;
  EXPECT_FALSE(ok.aborted);
  EXPECT_GT(ok.raw_qber, 0.0);
  EXPECT_TRUE(ok.key_agreement);

  c.channel = channel::ChannelModel::depolarizing(1.0);
  c.rounds = 2000;
  const auto bad = run_session(c, 4).report;
  EXPECT_NEAR(bad.raw_qber, 0.5, 0.05);
  EXPECT_FALSE(bad.key_agreement);
}

TEST(SessionTest, Validation) {
  RunConfig c;
  c.n = 9;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c.n = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = RunConfig{};
  c.sample_fraction = 0.0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = RunConfig{};
  c.rounds = 0;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = RunConfig{};
  c.charlie = channel::CharlieKind::NaiveAttacker;
  EXPECT_THROW(validate(c), std::invalid_argument);
  c = RunConfig{};
  c.n = 4;
  c.modulus = 0b10001;
  EXPECT_THROW(validate(c), std::invalid_argument);
  EXPECT_NO_THROW(validate(RunConfig{}));
}

TEST(SessionTest, ConfigParsing) {
  std::istringstream in(R"(
# comment line
protocol = mdi_rrdps_lo
n = 2          # trailing comment
rounds = 0x40
channel.kind = depolarizing
channel.p = 0.125
channel.legs = bob
charlie.kind = honest
seed = 12345
sample_fraction = 0.25
safety_margin = 16
out = run.jsonl
)");
  auto c = io::load_config(in);
  EXPECT_EQ(c.protocol, protocols::ProtocolId::MdiRrdpsLo);
  EXPECT_EQ(c.n, 2U);
  EXPECT_EQ(c.rounds, 64U);
  EXPECT_EQ(c.channel.kind, channel::ChannelKind::Depolarizing);
  EXPECT_EQ(c.channel.p, 0.125);
  EXPECT_FALSE(c.channel.legs.alice);
  EXPECT_TRUE(c.channel.legs.bob);
  EXPECT_EQ(c.seed, 12345U);
  EXPECT_EQ(c.sample_fraction, 0.25);
  EXPECT_EQ(c.safety_margin, 16U);
  EXPECT_EQ(c.output_path, "run.jsonl");

  io::apply_setting(c, "seed", "7");  // flags win over the file
  EXPECT_EQ(c.seed, 7U);

  EXPECT_THROW(io::apply_setting(c, "colour", "blue"), std::invalid_argument);
  EXPECT_THROW(io::apply_setting(c, "rounds", "-3"), std::invalid_argument);
  EXPECT_THROW(io::apply_setting(c, "channel.p", "0.1x"), std::invalid_argument);
  EXPECT_THROW(io::apply_setting(c, "channel.legs", "charlie"), std::invalid_argument);
  std::istringstream broken("protocol mother\n");
  EXPECT_THROW(io::load_config(broken), std::invalid_argument);
  EXPECT_THROW(io::load_config_file("/nonexistent/mdiqkd.cfg"), std::invalid_argument);
}

TEST(SessionTest, JsonRecords) {
  RunConfig c;
  c.rounds = 3;
  const auto res = run_session(c, 1);
  const auto round = io::to_json(res.records[0]);
  EXPECT_EQ(round["record"], "round");
  EXPECT_EQ(round["protocol"], "mother");
  EXPECT_EQ(round["round"], 0);
  EXPECT_TRUE(round.contains("alice_raw"));
  EXPECT_TRUE(round["announcement"].get<std::string>().starts_with("bell:"));
  const auto summary = io::to_json(res.report);
  EXPECT_EQ(summary["record"], "summary");
  EXPECT_EQ(summary["key_length_is_heuristic"], true);
  EXPECT_FALSE(summary.contains("attacker_knowledge"));
}

TEST(SessionTest, WorkerEnvironment) {
  ::setenv("MDIQKD_WORKERS", "3", 1);
  EXPECT_EQ(default_workers(), 3U);
  ::setenv("MDIQKD_WORKERS", "zero", 1);
  EXPECT_GE(default_workers(), 1U);
  ::unsetenv("MDIQKD_WORKERS");
}

}  // namespace
