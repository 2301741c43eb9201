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

// mdiqkd: run protocol sessions and the built-in verification suites.
//
//   mdiqkd run --protocol mother --n 2 --rounds 1000 --seed 7 --out log.jsonl
//   mdiqkd run --config session.cfg --p 0.05
//   mdiqkd selftest
//
// Exit status: 0 on success, 1 if a session aborts or a suite fails, 2 on usage errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "mdiqkd/io.hpp"
#include "mdiqkd/selftest.hpp"
#include "mdiqkd/session.hpp"

namespace {

int run_command(const std::string& config_path, const std::map<std::string, std::string>& flags) {
  using namespace mdiqkd;
  RunConfig config;
  if (!config_path.empty()) config = io::load_config_file(config_path);
  for (const auto& [key, value] : flags) io::apply_setting(config, key, value);
  validate(config);

  const SessionResult result = run_session(config, default_workers());
  if (config.output_path.empty()) {
    io::write_session(std::cout, result);
  } else {
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file '" + config.output_path + "'");
    io::write_session(out, result);
    std::cerr << io::to_json(result.report).dump(2) << '\n';
  }
  if (result.report.aborted) {
    std::cerr << "session aborted: " << result.report.abort_reason << '\n';
    return 1;
  }
  return 0;
}

int selftest_command(bool corrupt_modulus) {
  mdiqkd::selftest::Options options;
  // x^4 + 1 = (x + 1)^4 is reducible, so the axiom suite must fail.
  if (corrupt_modulus) options.axiom_field = mdiqkd::gf::FieldSpec::unchecked(4, 0b10001);
  bool all = true;
  for (const auto& r : mdiqkd::selftest::run(options)) {
    std::printf("%-48s %s  %7.3fs%s%s\n", r.name.c_str(), r.passed ? "PASS" : "FAIL", r.seconds,
                r.detail.empty() ? "" : "  ", r.detail.c_str());
    all = all && r.passed;
  }
  std::printf("%s\n", all ? "all suites passed" : "some suites FAILED");
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for qudit-based measurement-device-independent QKD"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one protocol session and write line-delimited JSON");
  std::string config_path;
  std::map<std::string, std::string> flags;
  run->add_option("--config", config_path, "key = value config file (flags override it)");
  const std::pair<const char*, const char*> flag_keys[] = {
      {"--protocol", "protocol"},   {"--n", "n"},
      {"--rounds", "rounds"},       {"--channel", "channel.kind"},
      {"--p", "channel.p"},         {"--legs", "channel.legs"},
      {"--charlie", "charlie.kind"}, {"--seed", "seed"},
      {"--sample-fraction", "sample_fraction"}, {"--modulus", "gf.modulus"},
      {"--out", "out"},
  };
  for (const auto& [flag, key] : flag_keys) {
    run->add_option_function<std::string>(
        flag, [&flags, key = std::string(key)](const std::string& v) { flags[key] = v; }, "sets " + std::string(key));
  }

  auto* self = app.add_subcommand("selftest", "Run the exhaustive small-N verification suites");
  bool corrupt = false;
  self->add_flag("--corrupt-modulus", corrupt, "Fault injection: use a reducible modulus for the axiom suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    if (run->parsed()) return run_command(config_path, flags);
    return selftest_command(corrupt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << '\n';
    return 1;
  }
}
