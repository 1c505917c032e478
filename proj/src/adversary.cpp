#include "qsac/adversary.hpp"

#include <algorithm>
#include <numeric>

namespace qsac {

namespace {

void check_positions(const std::vector<int>& positions, int register_size) {
  std::vector<int> sorted = positions;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] < 1 || sorted[i] > register_size) {
      throw std::out_of_range("attack position " + std::to_string(sorted[i]) +
                              " outside register of " + std::to_string(register_size) +
                              " qubits");
    }
    if (i > 0 && sorted[i] == sorted[i - 1]) {
      throw std::invalid_argument("attack positions must be distinct");
    }
  }
}

std::string pauli_name(Pauli p) {
  switch (p) {
    case Pauli::X: return "X";
    case Pauli::Y: return "Y";
    case Pauli::Z: return "Z";
  }
  return "?";
}

Pauli pauli_from_name(std::string_view name) {
  if (name == "X") return Pauli::X;
  if (name == "Y") return Pauli::Y;
  if (name == "Z") return Pauli::Z;
  throw std::invalid_argument("attack field 'pauli' must be one of X, Y, Z");
}

}  // namespace

std::string to_string(AttackKind kind) {
  switch (kind) {
    case AttackKind::PauliTamper: return "PauliTamper";
    case AttackKind::CheckSubstitution: return "CheckSubstitution";
    case AttackKind::InterceptResend: return "InterceptResend";
    case AttackKind::Impersonation: return "Impersonation";
  }
  return "?";
}

AttackKind attack_kind_from_string(std::string_view name) {
  if (name == "PauliTamper") return AttackKind::PauliTamper;
  if (name == "CheckSubstitution") return AttackKind::CheckSubstitution;
  if (name == "InterceptResend") return AttackKind::InterceptResend;
  if (name == "Impersonation") return AttackKind::Impersonation;
  throw std::invalid_argument("attack field 'kind' has unknown value '" +
                              std::string(name) + "'");
}

PositionSpec PositionSpec::at(std::vector<int> positions) {
  return PositionSpec{std::move(positions), std::nullopt};
}

PositionSpec PositionSpec::random(int count) {
  if (count < 0) throw std::invalid_argument("random position count must be >= 0");
  return PositionSpec{{}, count};
}

nlohmann::json attack_spec_to_json(const AttackSpec& spec) {
  nlohmann::json j;
  j["kind"] = to_string(spec.kind);
  if (spec.positions.is_random()) {
    j["positions"] = nlohmann::json{{"random", *spec.positions.random_count}};
  } else if (!spec.positions.fixed.empty()) {
    j["positions"] = spec.positions.fixed;
  }
  if (spec.pauli) j["pauli"] = pauli_name(*spec.pauli);
  if (spec.guessed_key) j["guessed_key"] = spec.guessed_key->to_hex();
  return j;
}

AttackSpec attack_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw std::invalid_argument("attack spec must be a JSON object");
  if (!j.contains("kind") || !j["kind"].is_string()) {
    throw std::invalid_argument("attack field 'kind' is required");
  }
  AttackSpec spec;
  spec.kind = attack_kind_from_string(j["kind"].get<std::string>());

  if (j.contains("positions")) {
    const nlohmann::json& pos = j["positions"];
    if (pos.is_array()) {
      std::vector<int> fixed;
      for (const auto& v : pos) {
        if (!v.is_number_integer()) {
          throw std::invalid_argument("attack field 'positions' must hold integers");
        }
        fixed.push_back(v.get<int>());
      }
      spec.positions = PositionSpec::at(std::move(fixed));
    } else if (pos.is_object() && pos.contains("random") &&
               pos["random"].is_number_integer()) {
      spec.positions = PositionSpec::random(pos["random"].get<int>());
    } else {
      throw std::invalid_argument(
          "attack field 'positions' must be an index array or {\"random\": j}");
    }
  }

  if (j.contains("pauli")) {
    if (!j["pauli"].is_string()) {
      throw std::invalid_argument("attack field 'pauli' must be a string");
    }
    spec.pauli = pauli_from_name(j["pauli"].get<std::string>());
  }
  if (spec.kind == AttackKind::PauliTamper && !spec.pauli) {
    throw std::invalid_argument("attack field 'pauli' is required for PauliTamper");
  }

  if (j.contains("guessed_key")) {
    if (!j["guessed_key"].is_string()) {
      throw std::invalid_argument("attack field 'guessed_key' must be a hex string");
    }
    try {
      spec.guessed_key = Key::from_hex(j["guessed_key"].get<std::string>());
    } catch (const ParseError& e) {
      throw std::invalid_argument(std::string("attack field 'guessed_key': ") + e.what());
    }
  }

  const bool needs_positions = spec.kind == AttackKind::PauliTamper ||
                               spec.kind == AttackKind::CheckSubstitution ||
                               spec.kind == AttackKind::InterceptResend;
  if (needs_positions && !j.contains("positions")) {
    throw std::invalid_argument("attack field 'positions' is required for " +
                                to_string(spec.kind));
  }
  return spec;
}

std::vector<int> resolve_positions(const PositionSpec& spec, int register_size,
                                   SplitMix64& rng) {
  if (register_size < 0) throw std::invalid_argument("register size must be >= 0");
  if (!spec.is_random()) {
    check_positions(spec.fixed, register_size);
    return spec.fixed;
  }
  const int j = *spec.random_count;
  if (j < 0 || j > register_size) {
    throw std::out_of_range("cannot draw " + std::to_string(j) + " positions from " +
                            std::to_string(register_size) + " qubits");
  }
  std::vector<int> pool(static_cast<std::size_t>(register_size));
  std::iota(pool.begin(), pool.end(), 1);
  for (int i = 0; i < j; ++i) {
    const auto pick = static_cast<std::size_t>(i) +
                      rng.next_below(static_cast<std::uint64_t>(register_size - i));
    std::swap(pool[static_cast<std::size_t>(i)], pool[pick]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + j);
  std::sort(out.begin(), out.end());
  return out;
}

TamperedCodeword pauli_tamper(const QsacCodeword& codeword, const AttackSpec& spec,
                              SplitMix64& rng) {
  if (spec.kind != AttackKind::PauliTamper || !spec.pauli) {
    throw std::invalid_argument("pauli_tamper needs a PauliTamper spec with a pauli");
  }
  const std::vector<int> positions =
      resolve_positions(spec.positions, codeword.params.total(), rng);
  TamperedCodeword out{codeword, spec};
  out.applied.positions = PositionSpec::at(positions);
  for (int p : positions) out.codeword.state.apply_pauli(*spec.pauli, p);
  return out;
}

CheckString substitute_check_states(const CheckString& check, int j, SplitMix64& rng) {
  if (j < 1 || j > check.length()) {
    throw std::out_of_range("substitution count " + std::to_string(j) +
                            " outside [1, " + std::to_string(check.length()) + "]");
  }
  return substitute_check_states(
      check, resolve_positions(PositionSpec::random(j), check.length(), rng), rng);
}

CheckString substitute_check_states(const CheckString& check,
                                    const std::vector<int>& positions, SplitMix64& rng) {
  check_positions(positions, check.length());
  CheckString out = check;
  for (int p : positions) {
    auto& sym = out.symbols[static_cast<std::size_t>(p - 1)];
    // uniform over the three other BB84 states
    const auto shift = 1 + rng.next_below(3);
    sym = static_cast<BasisSymbol>((static_cast<std::uint64_t>(sym) + shift) % 4);
  }
  return out;
}

TamperedCodeword intercept_resend(const QsacCodeword& codeword,
                                  const std::vector<int>& positions, SplitMix64& rng) {
  check_positions(positions, codeword.params.total());
  TamperedCodeword out{codeword,
                       AttackSpec{AttackKind::InterceptResend,
                                  PositionSpec::at(positions), std::nullopt, std::nullopt}};
  for (int p : positions) {
    const Basis basis = rng.next_below(2) ? Basis::X : Basis::Z;
    out.codeword.state.measure(p, basis, rng);
  }
  return out;
}

VerificationOutcome impersonate(const StateVector& message, const Key& guessed_key,
                                const Key& true_key, int num_check, SplitMix64& rng) {
  const QsacCodeword forged = encode(message, guessed_key, num_check);
  return verify(forged, true_key, rng);
}

}  // namespace qsac
