#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsac/codec.hpp"
#include "qsac/keysched.hpp"
#include "qsac/qcore.hpp"
#include "qsac/rng.hpp"

namespace qsac {

// Pauli operation on the first qubit of an EPR pair and the two classical
// bits it carries: I<->00, X<->01, Z<->10, iY<->11. The global phase of
// iY is dropped (unobservable).
enum class PauliOp : std::uint8_t { I = 0, X = 1, Z = 2, iY = 3 };

struct PauliCode {
  PauliOp op = PauliOp::I;
  std::uint8_t b0 = 0;
  std::uint8_t b1 = 0;
};

PauliCode pauli_code_from_bits(int b0, int b1);
PauliCode pauli_code_from_op(PauliOp op);

using BitString = std::vector<std::uint8_t>;

BitString parse_bit_string(std::string_view text);
std::string bit_string_to_text(const BitString& bits);

// Protocol trace: one record per step. The one-way property of the
// protocol is assertable on this log.
struct TranscriptRecord {
  std::string role;
  std::string action;
  nlohmann::json sizes;
  std::uint64_t seed = 0;
};

class Transcript {
 public:
  explicit Transcript(std::uint64_t session_seed) : session_seed_(session_seed) {}

  void log(std::string role, std::string action, nlohmann::json sizes);

  const std::vector<TranscriptRecord>& records() const { return records_; }
  std::uint64_t session_seed() const { return session_seed_; }

  // JSON lines, one record per line.
  std::string to_jsonl() const;

 private:
  std::uint64_t session_seed_;
  std::vector<TranscriptRecord> records_;
};

// The 2k-qubit message register before authentication: one |phi+> pair
// per bit pair with the mapped Pauli applied to its first qubit.
StateVector qsdc_message_state(const BitString& bits);

// Builds the message register and wraps it in a codeword. Both halves of
// every pair travel inside the single codeword.
QsacCodeword qsdc_send(const BitString& bits, const Key& key, int num_check,
                       SplitMix64& rng, Transcript* transcript = nullptr);

struct QsdcResult {
  bool authenticated = false;
  std::optional<BitString> bits;  // absent on abort
};

// Verifies, then Bell-measures each pair (CNOT within the pair, Hadamard
// on its first qubit, two Z measurements). On verification failure the
// session aborts and no bits are emitted.
QsdcResult qsdc_receive(const QsacCodeword& codeword, const Key& key, SplitMix64& rng,
                        Transcript* transcript = nullptr);

}  // namespace qsac
