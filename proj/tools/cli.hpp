// Copyright 2026 The encwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Command-line front end. Every command builds its whole result in memory
// and only then writes it, so a failing invocation leaves no output file.
//
// Exit codes: 0 success, 2 validation error, 3 resource cap exceeded.

#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "encwalk/fock.hpp"
#include "encwalk/protocol.hpp"
#include "encwalk/security.hpp"
#include "encwalk/walk.hpp"

namespace encwalk::cli {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kValidation = 2, kResource = 3 };

inline std::string format_double(double v) {
  if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

using Cell = std::variant<long long, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json summary = nlohmann::json::object();
  std::optional<nlohmann::json> attachment;  // e.g. a protocol transcript, JSON output only
  std::string attachment_name;
};

struct GlobalOptions {
  std::uint64_t seed = 1;
  std::string format = "csv";
  std::string out;
  std::string config;
  bool log2 = false;
  unsigned threads = 1;
};

inline std::string cell_text(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
  return std::get<std::string>(c);
}

inline nlohmann::json cell_json(const Cell& c) {
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return format_double(*d);
    return std::stod(format_double(*d));
  }
  return std::get<std::string>(c);
}

inline std::string render(const Table& t, const nlohmann::json& meta, const std::string& format) {
  std::ostringstream os;
  if (format == "json") {
    nlohmann::json doc;
    doc["meta"] = meta;
    doc["columns"] = t.columns;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
      nlohmann::json obj = nlohmann::json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = cell_json(r[i]);
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    if (!t.summary.empty()) doc["summary"] = t.summary;
    if (t.attachment) doc[t.attachment_name] = *t.attachment;
    os << doc.dump(2) << '\n';
    return os.str();
  }
  os << "# tool: encwalk " << meta.at("version").get<std::string>() << '\n';
  os << "# command: " << meta.at("command").get<std::string>() << '\n';
  os << "# seed: " << meta.at("seed").get<std::uint64_t>() << '\n';
  os << "# config: " << meta.at("config").dump() << '\n';
  for (const auto& [k, v] : t.summary.items()) os << "# " << k << ": " << v.dump() << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << cell_text(r[i]);
    os << '\n';
  }
  return os.str();
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

/// identity | bs50 | haar | haar:<seed> | path to a JSON matrix.
inline Interferometer resolve_unitary(const std::string& source, std::size_t m, std::uint64_t seed) {
  if (source == "identity") {
    if (m == 0) throw ValidationError("--unitary identity needs a mode count");
    return Interferometer::identity(m);
  }
  if (source == "bs50") return Interferometer::balanced_splitter();
  if (source == "haar" || source.rfind("haar:", 0) == 0) {
    std::uint64_t s = seed;
    if (source.size() > 5) {
      try {
        s = std::stoull(source.substr(5));
      } catch (const std::exception&) {
        throw ValidationError("bad haar seed in '" + source + "'");
      }
    }
    return haar_unitary(m, s);
  }
  nlohmann::json j = read_json_file(source);
  if (j.is_object() && j.contains("unitary")) j = j.at("unitary");
  return Interferometer(matrix_from_json(j));
}

/// line<N> | cycle<N> | path to a JSON walk spec. `steps` overrides the
/// file's step count when given.
inline WalkSpec resolve_walk(const std::string& source, const std::string& coin, std::optional<std::size_t> steps) {
  static const std::regex named(R"((line|cycle)(\d+))");
  std::smatch match;
  if (std::regex_match(source, match, named)) {
    if (coin != "hadamard") throw ValidationError("unknown coin '" + coin + "' (built-in: hadamard)");
    const auto n = static_cast<std::size_t>(std::stoul(match[2].str()));
    WalkGraph g = match[1].str() == "line" ? WalkGraph::line(n) : WalkGraph::cycle(n);
    return WalkSpec::uniform(std::move(g), hadamard_coin(), steps.value_or(0));
  }
  WalkSpec spec = walk_from_json(read_json_file(source));
  return steps ? spec.with_steps(*steps) : spec;
}

/// Expands --config JSON entries into flags placed right after the
/// subcommand. Keys the user passes explicitly are not injected.
inline std::vector<std::string> expand_config(const std::vector<std::string>& args,
                                              const std::vector<std::string>& subcommands) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const nlohmann::json cfg = read_json_file(path);
  if (!cfg.is_object()) throw ValidationError("config file must hold a JSON object");
  std::set<std::string> given;
  for (const auto& a : args) {
    if (a.rfind("--", 0) != 0) continue;
    const auto eq = a.find('=');
    given.insert(eq == std::string::npos ? a.substr(2) : a.substr(2, eq - 2));
  }
  std::vector<std::string> injected;
  for (const auto& [key, value] : cfg.items()) {
    if (key == "config" || key == "command" || given.count(key)) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) injected.push_back("--" + key);
      continue;
    }
    injected.push_back("--" + key);
    if (value.is_string()) {
      injected.push_back(value.get<std::string>());
    } else if (value.is_array()) {
      std::string joined;
      for (const auto& v : value) {
        if (!joined.empty()) joined += ',';
        joined += v.is_string() ? v.get<std::string>() : v.dump();
      }
      injected.push_back(joined);
    } else {
      injected.push_back(value.dump());
    }
  }
  std::vector<std::string> out;
  bool inserted = false;
  for (const auto& a : args) {
    out.push_back(a);
    if (!inserted && std::find(subcommands.begin(), subcommands.end(), a) != subcommands.end()) {
      out.insert(out.end(), injected.begin(), injected.end());
      inserted = true;
    }
  }
  return out;
}

inline std::vector<int> int_range(int lo, int hi, const char* what) {
  if (lo < 1 || hi < lo) throw ValidationError(std::string("bad ") + what + " range");
  std::vector<int> v;
  for (int x = lo; x <= hi; ++x) v.push_back(x);
  return v;
}

// ---- commands ---------------------------------------------------------------

struct SimulateOptions {
  std::optional<int> m;
  std::string input;
  std::string unitary;
  std::string walk;
  std::string coin = "hadamard";
  std::optional<std::size_t> t;
  std::uint64_t samples = 0;
  std::uint64_t max_states = kDefaultStateCap;
};

inline Table cmd_simulate(const SimulateOptions& o, const GlobalOptions& g) {
  const FockBasisState input = FockBasisState::parse(o.input);
  if (o.m && static_cast<std::size_t>(*o.m) != input.mode_count()) {
    throw ValidationError("--input has " + std::to_string(input.mode_count()) + " modes but --m is " +
                          std::to_string(*o.m));
  }
  if (!o.walk.empty() && !o.unitary.empty()) throw ValidationError("give either --unitary or --walk, not both");
  const EnumerationOptions eo{o.max_states, g.threads};
  OutputDistribution dist;
  if (!o.walk.empty()) {
    dist = walk_distribution(resolve_walk(o.walk, o.coin, o.t), input, eo);
  } else {
    const std::string src = o.unitary.empty() ? "identity" : o.unitary;
    dist = output_distribution(resolve_unitary(src, input.mode_count(), g.seed), input, eo);
  }
  Table t;
  if (o.samples == 0) {
    t.columns = {"state", "probability"};
    for (std::size_t i = 0; i < dist.size(); ++i) t.rows.push_back({dist.states[i].to_string(), dist.probabilities[i]});
    return t;
  }
  DistributionSampler sampler(std::move(dist));
  Rng rng(g.seed);
  const auto& d = sampler.distribution();
  std::vector<std::uint64_t> counts(d.size(), 0);
  for (std::uint64_t s = 0; s < o.samples; ++s) ++counts[sampler.sample_index(rng)];
  t.columns = {"state", "count", "frequency"};
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (counts[i] == 0) continue;
    t.rows.push_back({d.states[i].to_string(), static_cast<long long>(counts[i]),
                      static_cast<double>(counts[i]) / static_cast<double>(o.samples)});
  }
  t.summary["samples"] = o.samples;
  return t;
}

struct ProtocolOptions {
  std::optional<int> m;
  int d = 0;
  std::string input;
  std::string unitary = "haar";
  std::string rounds = "exact";
  bool redact_key = false;
  std::string transcript;
};

struct ProtocolOutput {
  Table table;
  nlohmann::json transcript;
};

inline ProtocolOutput cmd_protocol(const ProtocolOptions& o, const GlobalOptions& g) {
  const LogicalInput bits = LogicalInput::parse(o.input);
  if (o.m && static_cast<std::size_t>(*o.m) != bits.size()) {
    throw ValidationError("--input has " + std::to_string(bits.size()) + " bits but --m is " + std::to_string(*o.m));
  }
  if (o.d < 1) throw ValidationError("--d must be at least 1");
  const Interferometer u = resolve_unitary(o.unitary, bits.size(), g.seed);
  if (u.mode_count() != bits.size()) throw ValidationError("--unitary mode count differs from --input length");
  const OutputDistribution plain = output_distribution(u, bits.as_fock_state());

  ProtocolOutput res;
  Table& t = res.table;
  Rng rng(g.seed);
  if (o.rounds == "exact") {
    t.columns = {"k", "tv_distance"};
    double worst = 0.0;
    const PolarizedState encoded = encode_input(bits);
    for (int k = 0; k < o.d; ++k) {
      const PolarizationKey key(k, o.d);
      const double tv = total_variation(decrypt_measure(bob_evaluate(encrypt(encoded, key), u), key), plain);
      worst = std::max(worst, tv);
      t.rows.push_back({static_cast<long long>(k), tv});
    }
    t.summary["max_tv_distance"] = std::stod(format_double(worst));
    res.transcript = run_round(bits, o.d, u, rng).transcript.to_json(o.redact_key);
  } else {
    std::uint64_t n = 0;
    try {
      std::size_t used = 0;
      n = std::stoull(o.rounds, &used);
      if (used != o.rounds.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ValidationError("--rounds must be a positive integer or 'exact'");
    }
    if (n == 0) throw ValidationError("--rounds must be at least 1");
    std::vector<std::uint64_t> counts(plain.size(), 0);
    std::uint64_t outside = 0;
    for (std::uint64_t r = 0; r < n; ++r) {
      RoundResult rr = run_round(bits, o.d, u, rng);
      if (r == 0) res.transcript = rr.transcript.to_json(o.redact_key);
      const auto it = std::lower_bound(plain.states.begin(), plain.states.end(), rr.pattern);
      if (it != plain.states.end() && *it == rr.pattern) {
        ++counts[static_cast<std::size_t>(it - plain.states.begin())];
      } else {
        ++outside;
      }
    }
    t.columns = {"state", "plain_probability", "count", "frequency"};
    double tv = static_cast<double>(outside) / static_cast<double>(n);
    for (std::size_t i = 0; i < plain.size(); ++i) {
      const double f = static_cast<double>(counts[i]) / static_cast<double>(n);
      tv += std::abs(f - plain.probabilities[i]);
      t.rows.push_back({plain.states[i].to_string(), plain.probabilities[i], static_cast<long long>(counts[i]), f});
    }
    t.summary["rounds"] = n;
    t.summary["empirical_tv_distance"] = std::stod(format_double(0.5 * tv));
  }
  t.attachment = res.transcript;
  t.attachment_name = "transcript";
  return res;
}

struct HolevoCmdOptions {
  std::vector<int> m;
  std::vector<int> d;
  int max_m = 10;
};

inline Table cmd_holevo(const HolevoCmdOptions& o) {
  Table t;
  t.columns = {"m", "d", "chi_exact", "chi_asymptotic"};
  for (int m : o.m) {
    if (m < 1) throw ValidationError("--m must be at least 1");
    for (int d : o.d) {
      if (d < 1) throw ValidationError("--d must be at least 1");
      t.rows.push_back({static_cast<long long>(m), static_cast<long long>(d), holevo_exact(m, d, {.max_m = o.max_m}),
                        holevo_asymptotic(m)});
    }
  }
  return t;
}

struct OverlapOptions {
  int d = 1024;
  int m_max = 30;
};

inline Table cmd_overlap(const OverlapOptions& o, const GlobalOptions& g) {
  Table t;
  t.columns = {"m", "h", "log_overlap"};
  for (const auto& c : overlap_grid(o.m_max, o.d, g.log2)) {
    t.rows.push_back({static_cast<long long>(c.m), static_cast<long long>(c.h), c.log_overlap});
  }
  t.summary["log_base"] = g.log2 ? "2" : "e";
  return t;
}

struct RegionsOptions {
  int d_min = 1;
  int d_max = 64;
  int m_min = 1;
  int m_max = 100;
  std::vector<double> eps{0.5, 0.1, 0.01};
};

inline Table cmd_regions(const RegionsOptions& o) {
  Table t;
  t.columns = {"d", "m", "p_av", "epsilon_class"};
  for (const auto& c : confidence_regions(int_range(o.d_min, o.d_max, "d"), int_range(o.m_min, o.m_max, "m"), o.eps)) {
    t.rows.push_back({static_cast<long long>(c.d), static_cast<long long>(c.m), c.p_av,
                      c.epsilon ? format_double(*c.epsilon) : std::string("none")});
  }
  return t;
}

struct AttackOptions {
  int m = 0;
  int d = 0;
  std::uint64_t trials = 1000000;
  std::string input;
};

inline Table cmd_attack(const AttackOptions& o, const GlobalOptions& g) {
  if (o.m < 1) throw ValidationError("--m must be at least 1");
  if (o.d < 1) throw ValidationError("--d must be at least 1");
  if (o.trials < 1) throw ValidationError("--trials must be at least 1");
  const LogicalInput bits = o.input.empty() ? LogicalInput(std::vector<int>(static_cast<std::size_t>(o.m), 0))
                                            : LogicalInput::parse(o.input);
  const AttackResult r = random_attack_mc(o.m, o.d, bits, o.trials, g.seed, g.threads);
  Table t;
  t.columns = {"m", "d", "trials", "exact_rate", "exact_se", "complement_rate", "complement_se", "p_av", "guess_bound"};
  t.rows.push_back({static_cast<long long>(o.m), static_cast<long long>(o.d), static_cast<long long>(o.trials),
                    r.exact_rate(), r.exact_se(), r.complement_rate(), r.complement_se(), p_av(o.m, o.d),
                    guess_probability_bound(o.m)});
  return t;
}

// ---- driver -----------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  const std::vector<std::string> subcommands{"simulate", "protocol", "holevo", "overlap", "regions", "attack"};
  try {
    args = expand_config(args, subcommands);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }

  CLI::App app{"Encrypted boson sampling and quantum walk simulator", "encwalk"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", kVersion);

  GlobalOptions g;
  app.add_option("--seed", g.seed, "RNG seed (recorded in every output)")->capture_default_str();
  app.add_option("--format", g.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out, "output path (default: stdout)");
  app.add_option("--config", g.config, "JSON file of flag defaults");
  app.add_flag("--log2", g.log2, "base-2 logarithms in the overlap grid");
  app.add_option("--threads", g.threads, "worker threads")->capture_default_str()->check(CLI::Range(1U, 1024U));

  nlohmann::json config;
  auto record = [&](CLI::App* sub) {
    for (const CLI::Option* opt : sub->get_options()) {
      const std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
      if (name == "help" || name == "version" || name == "config") continue;
      if (opt->get_expected_min() == 0) {
        config[name] = opt->count() > 0 || (opt->get_default_str() == "true");
        continue;
      }
      const auto results = opt->count() > 0 ? opt->results() : std::vector<std::string>{};
      if (results.empty()) {
        config[name] = opt->get_default_str();
      } else if (opt->get_expected_max() > 1) {
        std::string joined;
        for (const auto& r : results) joined += (joined.empty() ? "" : ",") + r;
        config[name] = joined;
      } else {
        config[name] = results.back();
      }
    }
  };

  SimulateOptions sim;
  auto* c_sim = app.add_subcommand("simulate", "exact output distribution or samples of a network or walk");
  c_sim->add_option("--m", sim.m, "mode count (checked against --input)");
  c_sim->add_option("--input", sim.input, "input occupations, e.g. 0110 or 1,0,2")->required();
  c_sim->add_option("--unitary", sim.unitary, "identity | bs50 | haar[:seed] | matrix.json");
  c_sim->add_option("--walk", sim.walk, "line<N> | cycle<N> | walk.json");
  c_sim->add_option("--coin", sim.coin, "coin for built-in walks")->capture_default_str();
  c_sim->add_option("--t", sim.t, "walk steps");
  c_sim->add_option("--samples", sim.samples, "draw samples instead of the exact distribution")->capture_default_str();
  c_sim->add_option("--max-states", sim.max_states, "cap on enumerated configurations")->capture_default_str();

  ProtocolOptions proto;
  auto* c_proto = app.add_subcommand("protocol", "run the encrypted protocol and verify decryption");
  c_proto->add_option("--m", proto.m, "logical mode count (checked against --input)");
  c_proto->add_option("--d", proto.d, "key divisions")->required();
  c_proto->add_option("--input", proto.input, "logical input bits, e.g. 101")->required();
  c_proto->add_option("--unitary", proto.unitary, "identity | bs50 | haar[:seed] | matrix.json")->capture_default_str();
  c_proto->add_option("--rounds", proto.rounds, "'exact' or a number of sampled rounds")->capture_default_str();
  c_proto->add_flag("--redact-key", proto.redact_key, "omit the key (Bob's view of the transcript)");
  c_proto->add_option("--transcript", proto.transcript, "write one round's transcript JSON here");

  HolevoCmdOptions hol;
  auto* c_hol = app.add_subcommand("holevo", "exact and asymptotic Holevo quantity");
  c_hol->add_option("--m", hol.m, "photon counts (comma separated)")->required()->delimiter(',');
  c_hol->add_option("--d", hol.d, "key divisions (comma separated)")->required()->delimiter(',');
  c_hol->add_option("--max-m", hol.max_m, "exact-mode cap on m")->capture_default_str();

  OverlapOptions ovl;
  auto* c_ovl = app.add_subcommand("overlap", "average squared overlap grid over (m, h)");
  c_ovl->add_option("--d", ovl.d, "key divisions")->capture_default_str();
  c_ovl->add_option("--m-max", ovl.m_max, "largest m")->capture_default_str();

  RegionsOptions reg;
  auto* c_reg = app.add_subcommand("regions", "random-attack success p_av over (d, m) with eps classes");
  c_reg->add_option("--d-min", reg.d_min)->capture_default_str();
  c_reg->add_option("--d-max", reg.d_max)->capture_default_str();
  c_reg->add_option("--m-min", reg.m_min)->capture_default_str();
  c_reg->add_option("--m-max", reg.m_max)->capture_default_str();
  c_reg->add_option("--eps", reg.eps, "thresholds in (0, 1)")->delimiter(',')->capture_default_str();

  AttackOptions atk;
  auto* c_atk = app.add_subcommand("attack", "Monte Carlo random-basis attack");
  c_atk->add_option("--m", atk.m, "photons")->required();
  c_atk->add_option("--d", atk.d, "key divisions")->required();
  c_atk->add_option("--trials", atk.trials)->capture_default_str();
  c_atk->add_option("--input", atk.input, "Alice's bits (default all zero)");

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kValidation;
  }

  CLI::App* sub = app.get_subcommands().front();
  record(&app);
  record(sub);
  nlohmann::json meta{{"tool", "encwalk"}, {"version", kVersion}, {"command", sub->get_name()}, {"seed", g.seed},
                      {"config", config}};

  try {
    Table table;
    if (sub == c_sim) {
      table = cmd_simulate(sim, g);
    } else if (sub == c_proto) {
      ProtocolOutput po = cmd_protocol(proto, g);
      if (!proto.transcript.empty()) {
        std::ofstream tf(proto.transcript);
        if (!tf) throw ValidationError("cannot write '" + proto.transcript + "'");
        tf << po.transcript.dump(2) << '\n';
      }
      table = std::move(po.table);
    } else if (sub == c_hol) {
      table = cmd_holevo(hol);
    } else if (sub == c_ovl) {
      table = cmd_overlap(ovl, g);
    } else if (sub == c_reg) {
      table = cmd_regions(reg);
    } else {
      table = cmd_attack(atk, g);
    }
    const std::string text = render(table, meta, g.format);
    if (g.out.empty()) {
      out << text;
    } else {
      std::ofstream f(g.out, std::ios::binary);
      if (!f) throw ValidationError("cannot write '" + g.out + "'");
      f << text;
    }
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return kResource;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  }
  return kOk;
}

}  // namespace encwalk::cli
