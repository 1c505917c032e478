// Command-line surface for the QSAC simulator: key derivation, codeword
// encode/verify on serialized registers, attack channels, Monte-Carlo
// sweeps and the authenticated direct-communication demo.
//
// Exit codes: 0 success/authenticated, 1 verification failure,
// 2 usage or config error, 3 I/O or parse error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qsac/adversary.hpp"
#include "qsac/analysis.hpp"
#include "qsac/codec.hpp"
#include "qsac/keysched.hpp"
#include "qsac/qcore.hpp"
#include "qsac/qsdc.hpp"
#include "qsac/rng.hpp"

namespace {

using nlohmann::json;

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw qsac::ParseError("cannot open file for writing: " + path);
  out << text;
  if (!out) throw qsac::ParseError("failed writing file: " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qsac::ParseError("cannot open config file: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw qsac::ParseError("config file " + path + " is not valid JSON: " + e.what());
  }
}

void emit_report(const json& report, const std::string& out_path) {
  const std::string text = report.dump(2) + "\n";
  if (!out_path.empty()) write_text_file(out_path, text);
  std::cout << text;
}

std::string seed_hex(std::uint64_t v) {
  std::ostringstream os;
  os << "0x" << std::hex << v;
  return os.str();
}

// Either a computational basis string like "0101" or a named state.
qsac::StateVector parse_message_spec(const std::string& spec) {
  if (spec == "plus") {
    const qsac::BasisSymbol one[] = {qsac::BasisSymbol::Plus};
    return qsac::prepare_product(one);
  }
  if (spec == "bell") {
    qsac::StateVector state(2);
    state.apply_hadamard(1);
    state.apply_cnot(1, 2);
    return state;
  }
  if (spec.empty()) {
    throw std::invalid_argument("message spec is empty; give bits or a named state");
  }
  std::vector<qsac::BasisSymbol> symbols;
  symbols.reserve(spec.size());
  for (char c : spec) {
    if (c == '0') {
      symbols.push_back(qsac::BasisSymbol::Zero);
    } else if (c == '1') {
      symbols.push_back(qsac::BasisSymbol::One);
    } else {
      throw std::invalid_argument(
          std::string("message spec may only contain bits 0/1 or be 'plus'/'bell', got '") +
          c + "'");
    }
  }
  return qsac::prepare_product(symbols);
}

struct SweepList {
  std::string param;  // "j" or "n"
  std::vector<int> values;
};

struct ExperimentConfig {
  int n = 0;
  int m = 0;
  qsac::AttackSpec attack;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::optional<qsac::Key> key;
  std::optional<SweepList> sweep;
  std::string output_path;
};

int require_int_field(const json& j, const std::string& field, int min_value) {
  if (!j.contains(field) || !j[field].is_number_integer()) {
    throw std::invalid_argument("config field '" + field + "' must be an integer");
  }
  const auto v = j[field].get<long long>();
  if (v < min_value) {
    throw std::invalid_argument("config field '" + field + "' must be >= " +
                                std::to_string(min_value));
  }
  return static_cast<int>(v);
}

ExperimentConfig parse_experiment_config(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  ExperimentConfig cfg;
  cfg.n = require_int_field(j, "n", 1);
  cfg.m = require_int_field(j, "m", 1);

  if (!j.contains("attack")) throw std::invalid_argument("config field 'attack' is required");
  cfg.attack = qsac::attack_spec_from_json(j["attack"]);

  if (!j.contains("trials") || !j["trials"].is_number_integer() ||
      j["trials"].get<long long>() < 1) {
    throw std::invalid_argument("config field 'trials' must be an integer >= 1");
  }
  cfg.trials = j["trials"].get<std::uint64_t>();

  if (!j.contains("seed") || !j["seed"].is_number_integer()) {
    throw std::invalid_argument("config field 'seed' must be an integer");
  }
  cfg.seed = j["seed"].get<std::uint64_t>();

  if (j.contains("key")) {
    if (!j["key"].is_string()) {
      throw std::invalid_argument("config field 'key' must be a hex string");
    }
    try {
      cfg.key = qsac::Key::from_hex(j["key"].get<std::string>());
    } catch (const qsac::ParseError& e) {
      throw std::invalid_argument(std::string("config field 'key': ") + e.what());
    }
  }

  if (j.contains("sweep")) {
    const json& sweep = j["sweep"];
    if (!sweep.is_object() || sweep.size() != 1 ||
        (!sweep.contains("j") && !sweep.contains("n"))) {
      throw std::invalid_argument(
          "config field 'sweep' must be {\"j\": [...]} or {\"n\": [...]}");
    }
    SweepList list;
    list.param = sweep.contains("j") ? "j" : "n";
    const json& values = sweep[list.param];
    if (!values.is_array() || values.empty()) {
      throw std::invalid_argument("config field 'sweep." + list.param +
                                  "' must be a nonempty array");
    }
    for (const auto& v : values) {
      if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw std::invalid_argument("config field 'sweep." + list.param +
                                    "' must hold integers >= 1");
      }
      list.values.push_back(v.get<int>());
    }
    cfg.sweep = std::move(list);
  }

  if (j.contains("output_path")) {
    if (!j["output_path"].is_string()) {
      throw std::invalid_argument("config field 'output_path' must be a string");
    }
    cfg.output_path = j["output_path"].get<std::string>();
  }
  return cfg;
}

json verification_report(const qsac::QsacCodeword& codeword,
                         const qsac::VerificationOutcome& outcome, std::uint64_t seed) {
  json records = json::array();
  for (const qsac::MeasurementRecord& rec : outcome.records) {
    records.push_back({{"qubit", rec.qubit},
                       {"basis", rec.basis == qsac::Basis::Z ? "Z" : "X"},
                       {"outcome", rec.outcome}});
  }
  return json{{"authenticated", outcome.authenticated},
              {"mismatched_check_indices", outcome.mismatched_check_indices},
              {"records", std::move(records)},
              {"n", codeword.params.n},
              {"m", codeword.params.m},
              {"seed", seed}};
}

// ---- subcommand bodies ----------------------------------------------------

int cmd_keys_derive(const std::string& key_file, int n, int m,
                    const std::string& out_path) {
  const qsac::Key key = qsac::load_key_file(key_file);
  const qsac::SubKeys sub = qsac::derive_subkeys(key);
  json report{{"key_bits", key.bit_length},
              {"kq_seed", seed_hex(sub.kq_seed)},
              {"kt_seed", seed_hex(sub.kt_seed)}};
  if (n > 0) {
    const qsac::CheckString check = qsac::derive_check_string(sub, n);
    json symbols = json::array();
    for (const auto s : check.symbols) symbols.push_back(static_cast<int>(s));
    report["s_q"] = std::move(symbols);
    if (m > 0) {
      const qsac::TransformString transform = qsac::derive_transform_string(sub, n, m);
      report["s_t"] = transform.targets;
    }
  }
  emit_report(report, out_path);
  return 0;
}

int cmd_encode(const std::string& key_file, const std::string& message_spec, int n,
               const std::string& out_path) {
  const qsac::Key key = qsac::load_key_file(key_file);
  const qsac::StateVector message = parse_message_spec(message_spec);
  const qsac::QsacCodeword codeword = qsac::encode(message, key, n);
  qsac::write_codeword_file(codeword, out_path);
  emit_report(json{{"n", codeword.params.n},
                   {"m", codeword.params.m},
                   {"s_q_length", codeword.params.n},
                   {"s_t_length", codeword.params.total()},
                   {"codeword", out_path}},
              "");
  return 0;
}

int cmd_verify(const std::string& key_file, const std::string& codeword_file,
               std::uint64_t seed, const std::string& out_path) {
  const qsac::Key key = qsac::load_key_file(key_file);
  const qsac::QsacCodeword codeword = qsac::read_codeword_file(codeword_file);
  qsac::SplitMix64 rng(seed);
  const qsac::VerificationOutcome outcome = qsac::verify(codeword, key, rng);
  emit_report(verification_report(codeword, outcome, seed), out_path);
  return outcome.authenticated ? 0 : 1;
}

int cmd_attack(const std::string& codeword_file, const std::string& config_file,
               std::uint64_t seed, const std::string& out_path) {
  const qsac::AttackSpec spec = qsac::attack_spec_from_json(read_json_file(config_file));
  const qsac::QsacCodeword codeword = qsac::read_codeword_file(codeword_file);
  qsac::SplitMix64 rng(seed);

  qsac::TamperedCodeword tampered{codeword, spec};
  switch (spec.kind) {
    case qsac::AttackKind::PauliTamper:
      tampered = qsac::pauli_tamper(codeword, spec, rng);
      break;
    case qsac::AttackKind::InterceptResend: {
      const std::vector<int> positions =
          qsac::resolve_positions(spec.positions, codeword.params.total(), rng);
      tampered = qsac::intercept_resend(codeword, positions, rng);
      break;
    }
    default:
      throw std::invalid_argument(
          "attack kind " + qsac::to_string(spec.kind) +
          " is an experiment-level channel; use 'sweep' instead of 'attack'");
  }
  qsac::write_codeword_file(tampered.codeword, out_path);
  emit_report(json{{"applied", qsac::attack_spec_to_json(tampered.applied)},
                   {"codeword", out_path},
                   {"seed", seed}},
              "");
  return 0;
}

int cmd_sweep(const std::string& config_file, const std::string& key_file,
              const std::string& out_override, std::uint64_t trials_override) {
  ExperimentConfig cfg = parse_experiment_config(read_json_file(config_file));
  if (!key_file.empty()) cfg.key = qsac::load_key_file(key_file);
  if (!cfg.key) {
    throw std::invalid_argument("config field 'key' (hex) or --key-file is required");
  }
  if (trials_override > 0) cfg.trials = trials_override;

  struct Point {
    int n;
    int j;  // < 0 keeps the attack's own position spec
  };
  std::vector<Point> points;
  if (!cfg.sweep) {
    points.push_back({cfg.n, -1});
  } else if (cfg.sweep->param == "j") {
    for (int j : cfg.sweep->values) points.push_back({cfg.n, j});
  } else {
    for (int n : cfg.sweep->values) points.push_back({n, -1});
  }

  std::string csv = qsac::detection_csv_header();
  const qsac::StateVector message(cfg.m);  // |0...0>
  std::size_t index = 0;
  for (const Point& point : points) {
    qsac::AttackSpec attack = cfg.attack;
    if (point.j >= 0) attack.positions = qsac::PositionSpec::random(point.j);
    const qsac::QsacParams params{point.n, cfg.m};
    const std::uint64_t point_seed = cfg.seed + index * cfg.trials;
    const qsac::DetectionStats stats =
        qsac::mc_detection(attack, params, *cfg.key, message, cfg.trials, point_seed);
    csv += qsac::detection_csv_row(params, attack, stats);
    ++index;
  }

  const std::string out_path = out_override.empty() ? cfg.output_path : out_override;
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text_file(out_path, csv);
    std::cout << "wrote " << points.size() << " rows to " << out_path << "\n";
  }
  return 0;
}

qsac::QsacCodeword apply_qsdc_channel(const qsac::QsacCodeword& honest,
                                      const qsac::AttackSpec& spec,
                                      const qsac::BitString& bits, const qsac::Key& key,
                                      int n, qsac::SplitMix64& rng) {
  switch (spec.kind) {
    case qsac::AttackKind::PauliTamper:
      return qsac::pauli_tamper(honest, spec, rng).codeword;
    case qsac::AttackKind::InterceptResend: {
      const std::vector<int> positions =
          qsac::resolve_positions(spec.positions, honest.params.total(), rng);
      return qsac::intercept_resend(honest, positions, rng).codeword;
    }
    case qsac::AttackKind::CheckSubstitution: {
      const qsac::SubKeys sub = qsac::derive_subkeys(key);
      const qsac::CheckString check = qsac::derive_check_string(sub, n);
      const std::vector<int> positions =
          qsac::resolve_positions(spec.positions, check.length(), rng);
      const qsac::CheckString tampered =
          qsac::substitute_check_states(check, positions, rng);
      const qsac::StateVector joint = qsac::tensor_product(
          qsac::prepare_product(tampered.symbols), qsac::qsdc_message_state(bits));
      return qsac::encode_joint(joint, n, key);
    }
    case qsac::AttackKind::Impersonation: {
      const qsac::Key guessed =
          spec.guessed_key ? *spec.guessed_key
                           : qsac::Key::random(rng, static_cast<int>(key.bytes.size()));
      qsac::SplitMix64 send_rng(rng.next_u64());
      return qsac::qsdc_send(bits, guessed, n, send_rng);
    }
  }
  throw std::logic_error("unknown attack kind");
}

int cmd_qsdc(const std::string& key_file, const std::string& bits_text, int n,
             std::uint64_t seed, const std::string& attack_config, int repeat,
             const std::string& out_path, const std::string& transcript_path) {
  const qsac::Key key = qsac::load_key_file(key_file);
  const qsac::BitString bits = [&] {
    try {
      return qsac::parse_bit_string(bits_text);
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("--bits must be a string over {0,1}");
    }
  }();
  if (bits.empty() || bits.size() % 2 != 0) {
    throw std::invalid_argument("--bits must have even, nonzero length");
  }
  std::optional<qsac::AttackSpec> attack;
  if (!attack_config.empty()) {
    attack = qsac::attack_spec_from_json(read_json_file(attack_config));
  }

  const auto run_session = [&](std::uint64_t session_seed, qsac::Transcript* transcript)
      -> qsac::QsdcResult {
    qsac::SplitMix64 rng(session_seed);
    qsac::QsacCodeword codeword = qsac::qsdc_send(bits, key, n, rng, transcript);
    if (attack) {
      codeword = apply_qsdc_channel(codeword, *attack, bits, key, n, rng);
    }
    return qsac::qsdc_receive(codeword, key, rng, transcript);
  };

  if (repeat <= 1) {
    qsac::Transcript transcript(seed);
    const qsac::QsdcResult result = run_session(seed, &transcript);
    if (!transcript_path.empty()) {
      write_text_file(transcript_path, transcript.to_jsonl());
    }
    json report{{"authenticated", result.authenticated},
                {"sent_bits", bits_text},
                {"received_bits",
                 result.bits ? json(qsac::bit_string_to_text(*result.bits)) : json(nullptr)},
                {"transcript_path",
                 transcript_path.empty() ? json(nullptr) : json(transcript_path)},
                {"seed", seed}};
    if (attack) report["attack"] = qsac::attack_spec_to_json(*attack);
    emit_report(report, out_path);
    return result.authenticated ? 0 : 1;
  }

  int authenticated_count = 0;
  int recovered_count = 0;
  for (int i = 0; i < repeat; ++i) {
    const qsac::QsdcResult result = run_session(seed + static_cast<std::uint64_t>(i), nullptr);
    if (result.authenticated) {
      ++authenticated_count;
      if (result.bits && *result.bits == bits) ++recovered_count;
    }
  }
  const int aborts = repeat - authenticated_count;
  json report{{"repeat", repeat},
              {"authenticated_count", authenticated_count},
              {"recovered_count", recovered_count},
              {"abort_count", aborts},
              {"abort_rate", static_cast<double>(aborts) / repeat},
              {"sent_bits", bits_text},
              {"seed", seed}};
  if (attack) report["attack"] = qsac::attack_spec_to_json(*attack);
  emit_report(report, out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"QSAC: keyed CNOT-network authentication codes on a state-vector simulator"};
  app.require_subcommand(1);

  int exit_code = 0;

  // keys derive
  auto* keys = app.add_subcommand("keys", "key schedule inspection");
  keys->require_subcommand(1);
  auto* derive = keys->add_subcommand("derive", "derive sub-key seeds and strings");
  std::string kd_key_file, kd_out;
  int kd_n = 0, kd_m = 0;
  derive->add_option("--key-file", kd_key_file, "hex key file")->required();
  derive->add_option("--n", kd_n, "check string length to derive");
  derive->add_option("--m", kd_m, "message qubits (with --n, derives the transform string)");
  derive->add_option("--out", kd_out, "also write the JSON report here");
  derive->callback([&] { exit_code = cmd_keys_derive(kd_key_file, kd_n, kd_m, kd_out); });

  // encode
  auto* encode = app.add_subcommand("encode", "encode a message register into a codeword file");
  std::string en_key_file, en_message, en_out;
  int en_n = 0;
  encode->add_option("--key-file", en_key_file, "hex key file")->required();
  encode->add_option("--message", en_message, "basis bits like 0101, or 'plus'/'bell'")
      ->required();
  encode->add_option("--n", en_n, "number of check qubits")->required();
  encode->add_option("--out", en_out, "codeword output file")->required();
  encode->callback([&] { exit_code = cmd_encode(en_key_file, en_message, en_n, en_out); });

  // verify
  auto* verify = app.add_subcommand("verify", "verify a codeword file");
  std::string ve_key_file, ve_codeword, ve_out;
  std::uint64_t ve_seed = 0;
  verify->add_option("--key-file", ve_key_file, "hex key file")->required();
  verify->add_option("--codeword", ve_codeword, "codeword file")->required();
  verify->add_option("--seed", ve_seed, "measurement RNG seed")->required();
  verify->add_option("--out", ve_out, "also write the JSON report here");
  verify->callback([&] { exit_code = cmd_verify(ve_key_file, ve_codeword, ve_seed, ve_out); });

  // attack
  auto* attack = app.add_subcommand("attack", "apply a transit channel to a codeword file");
  std::string at_codeword, at_config, at_out;
  std::uint64_t at_seed = 0;
  attack->add_option("--codeword", at_codeword, "codeword file")->required();
  attack->add_option("--config", at_config, "attack spec JSON file")->required();
  attack->add_option("--seed", at_seed, "channel RNG seed")->required();
  attack->add_option("--out", at_out, "tampered codeword output file")->required();
  attack->callback([&] { exit_code = cmd_attack(at_codeword, at_config, at_seed, at_out); });

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a Monte-Carlo experiment sweep to CSV");
  std::string sw_config, sw_key_file, sw_out;
  std::uint64_t sw_trials = 0;
  sweep->add_option("--config", sw_config, "experiment config JSON file")->required();
  sweep->add_option("--key-file", sw_key_file, "hex key file (overrides config 'key')");
  sweep->add_option("--out", sw_out, "CSV output file (overrides config 'output_path')");
  sweep->add_option("--trials", sw_trials, "override config 'trials'");
  sweep->callback([&] { exit_code = cmd_sweep(sw_config, sw_key_file, sw_out, sw_trials); });

  // qsdc
  auto* qsdc = app.add_subcommand("qsdc", "authenticated direct-communication session(s)");
  std::string qs_key_file, qs_bits, qs_config, qs_out, qs_transcript;
  int qs_n = 0, qs_repeat = 1;
  std::uint64_t qs_seed = 0;
  qsdc->add_option("--key-file", qs_key_file, "hex key file")->required();
  qsdc->add_option("--bits", qs_bits, "even-length classical bit string")->required();
  qsdc->add_option("--n", qs_n, "number of check qubits")->required();
  qsdc->add_option("--seed", qs_seed, "session RNG seed")->required();
  qsdc->add_option("--config", qs_config, "optional channel attack spec JSON file");
  qsdc->add_option("--repeat", qs_repeat, "run this many seeded sessions and aggregate");
  qsdc->add_option("--out", qs_out, "also write the JSON report here");
  qsdc->add_option("--transcript", qs_transcript, "write the protocol transcript (JSONL)");
  qsdc->callback([&] {
    exit_code = cmd_qsdc(qs_key_file, qs_bits, qs_n, qs_seed, qs_config, qs_repeat, qs_out,
                         qs_transcript);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const qsac::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
