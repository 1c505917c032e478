#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsac/codec.hpp"
#include "qsac/keysched.hpp"
#include "qsac/qcore.hpp"
#include "qsac/rng.hpp"

namespace qsac {

enum class AttackKind { PauliTamper, CheckSubstitution, InterceptResend, Impersonation };

std::string to_string(AttackKind kind);
AttackKind attack_kind_from_string(std::string_view name);

// Either an explicit list of 1-based register positions or "j positions
// drawn uniformly without replacement".
struct PositionSpec {
  std::vector<int> fixed;
  std::optional<int> random_count;

  static PositionSpec at(std::vector<int> positions);
  static PositionSpec random(int count);

  bool is_random() const { return random_count.has_value(); }
  int count() const {
    return random_count ? *random_count : static_cast<int>(fixed.size());
  }

  friend bool operator==(const PositionSpec&, const PositionSpec&) = default;
};

// Declarative description of one adversary channel.
//
// JSON form: {"kind": "...", "positions": [...] | {"random": j},
//             "pauli": "X|Y|Z", "guessed_key": "<hex>"}
struct AttackSpec {
  AttackKind kind = AttackKind::PauliTamper;
  PositionSpec positions;
  std::optional<Pauli> pauli;       // PauliTamper only
  std::optional<Key> guessed_key;   // Impersonation; absent -> fresh random key per use

  // Count of affected qubits (check symbols for CheckSubstitution).
  int j() const { return positions.count(); }

  friend bool operator==(const AttackSpec&, const AttackSpec&) = default;
};

nlohmann::json attack_spec_to_json(const AttackSpec& spec);
AttackSpec attack_spec_from_json(const nlohmann::json& j);

struct TamperedCodeword {
  QsacCodeword codeword;
  AttackSpec applied;  // positions resolved to concrete indices
};

// Uniform sample of spec positions against a register of the given size;
// explicit lists are validated and passed through.
std::vector<int> resolve_positions(const PositionSpec& spec, int register_size,
                                   SplitMix64& rng);

// Applies the chosen Pauli at each resolved codeword position.
TamperedCodeword pauli_tamper(const QsacCodeword& codeword, const AttackSpec& spec,
                              SplitMix64& rng);

// Replaces the listed check symbols (or j random ones) with a uniform
// choice among the three other BB84 states. This operates at the
// decoded-check level; wrap the result with encode_joint to obtain the
// matching in-transit codeword.
CheckString substitute_check_states(const CheckString& check, int j, SplitMix64& rng);
CheckString substitute_check_states(const CheckString& check,
                                    const std::vector<int>& positions, SplitMix64& rng);

// Measures each listed qubit in a uniformly random basis and forwards the
// collapsed register.
TamperedCodeword intercept_resend(const QsacCodeword& codeword,
                                  const std::vector<int>& positions, SplitMix64& rng);

// Encode with a guessed key, verify with the true key.
VerificationOutcome impersonate(const StateVector& message, const Key& guessed_key,
                                const Key& true_key, int num_check, SplitMix64& rng);

}  // namespace qsac
