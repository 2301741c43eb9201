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

#pragma once

/// @file io.hpp
/// Line-delimited JSON output and the key = value config file format.
///
/// Round line:
///   {"record":"round","protocol":...,"round":r,"sifted":b,"alice_raw":v|null,
///    "bob_raw":v|null,"announcement":"..."}
/// Summary line: {"record":"summary", <SessionReport fields>,
///                "key_length_is_heuristic":true}

#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mdiqkd/session.hpp"

namespace mdiqkd::io {

using nlohmann::ordered_json;

inline ordered_json to_json(const protocols::RoundRecord& r) {
  ordered_json j;
  j["record"] = "round";
  j["protocol"] = std::string(protocols::to_string(r.protocol));
  j["round"] = r.round;
  j["sifted"] = r.sifted;
  j["alice_raw"] = r.alice_raw ? ordered_json(*r.alice_raw) : ordered_json(nullptr);
  j["bob_raw"] = r.bob_raw ? ordered_json(*r.bob_raw) : ordered_json(nullptr);
  j["announcement"] = r.announcement.to_string();
  return j;
}

inline ordered_json to_json(const SessionReport& rep) {
  ordered_json j;
  j["record"] = "summary";
  j["protocol"] = rep.protocol;
  j["n"] = rep.n;
  j["rounds_total"] = rep.rounds_total;
  j["rounds_lost"] = rep.rounds_lost;
  j["rounds_announced"] = rep.rounds_announced;
  j["projection_successes"] = rep.projection_successes;
  j["rounds_sifted"] = rep.rounds_sifted;
  j["sifted_key_bits"] = rep.sifted_key_bits;
  j["sifting_rate"] = rep.sifting_rate;
  j["projection_success_rate"] = rep.projection_success_rate;
  j["raw_qber"] = rep.raw_qber;
  j["symbol_error_rate"] = rep.symbol_error_rate;
  j["qber_estimate"] = rep.qber_estimate;
  j["qber_sample_size"] = rep.qber_sample_size;
  j["ec_leakage_bits"] = rep.ec_leakage_bits;
  j["ec_corrections"] = rep.ec_corrections;
  j["final_key_length"] = rep.final_key_length;
  j["key_length_is_heuristic"] = true;
  j["key_agreement"] = rep.key_agreement;
  j["aborted"] = rep.aborted;
  j["abort_reason"] = rep.abort_reason;
  if (rep.attacker_knowledge) j["attacker_knowledge"] = *rep.attacker_knowledge;
  if (rep.qber_baseline) j["qber_baseline"] = *rep.qber_baseline;
  if (rep.qber_delta) j["qber_delta"] = *rep.qber_delta;
  return j;
}

/// One round line per record, then the summary line.
inline void write_session(std::ostream& out, const SessionResult& res) {
  for (const auto& r : res.records) out << to_json(r).dump() << '\n';
  out << to_json(res.report).dump() << '\n';
}

/// Parses "key = value" lines; '#' starts a comment. Later keys win.
inline std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string{};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

inline channel::Legs parse_legs(const std::string& text) {
  if (text == "both" || text == "alice,bob" || text == "bob,alice") return {true, true};
  if (text == "alice") return {true, false};
  if (text == "bob") return {false, true};
  if (text == "none") return {false, false};
  throw std::invalid_argument("unknown channel legs '" + text + "' (expected both, alice, bob or none)");
}

/// Applies one configuration key to `c`. Used for both the file and the flags.
inline void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  auto as_double = [&] {
    std::size_t pos = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != value.size() || value.empty()) throw std::invalid_argument(key + ": not a number: '" + value + "'");
    return v;
  };
  auto as_uint = [&] {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(value, &pos, 0);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != value.size() || value.empty() || value[0] == '-') {
      throw std::invalid_argument(key + ": not a non-negative integer: '" + value + "'");
    }
    return static_cast<std::uint64_t>(v);
  };
  if (key == "protocol") {
    c.protocol = protocols::parse_protocol(value);
  } else if (key == "n") {
    c.n = static_cast<unsigned>(as_uint());
  } else if (key == "gf.modulus") {
    c.modulus = gf::parse_modulus(value);
  } else if (key == "rounds") {
    c.rounds = as_uint();
  } else if (key == "channel.kind") {
    c.channel.kind = channel::parse_channel_kind(value);
  } else if (key == "channel.p") {
    c.channel.p = as_double();
  } else if (key == "channel.legs") {
    c.channel.legs = parse_legs(value);
  } else if (key == "charlie.kind") {
    c.charlie = channel::parse_charlie_kind(value);
  } else if (key == "seed") {
    c.seed = as_uint();
  } else if (key == "sample_fraction") {
    c.sample_fraction = as_double();
  } else if (key == "safety_margin") {
    c.safety_margin = as_uint();
  } else if (key == "out") {
    c.output_path = value;
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

inline RunConfig load_config(std::istream& in, RunConfig base = {}) {
  for (const auto& [k, v] : parse_key_values(in)) apply_setting(base, k, v);
  return base;
}

inline RunConfig load_config_file(const std::string& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  return load_config(in, std::move(base));
}

}  // namespace mdiqkd::io
