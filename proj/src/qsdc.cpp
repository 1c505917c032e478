#include "qsac/qsdc.hpp"

#include <sstream>
#include <utility>

namespace qsac {

PauliCode pauli_code_from_bits(int b0, int b1) {
  if ((b0 != 0 && b0 != 1) || (b1 != 0 && b1 != 1)) {
    throw std::invalid_argument("pauli code bits must be 0 or 1");
  }
  return PauliCode{static_cast<PauliOp>((b0 << 1) | b1),
                   static_cast<std::uint8_t>(b0), static_cast<std::uint8_t>(b1)};
}

PauliCode pauli_code_from_op(PauliOp op) {
  const auto v = static_cast<int>(op);
  return PauliCode{op, static_cast<std::uint8_t>((v >> 1) & 1),
                   static_cast<std::uint8_t>(v & 1)};
}

BitString parse_bit_string(std::string_view text) {
  BitString bits;
  bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument(std::string("bit string may only contain 0 and 1, got '") +
                                  c + "'");
    }
    bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return bits;
}

std::string bit_string_to_text(const BitString& bits) {
  std::string out;
  out.reserve(bits.size());
  for (auto b : bits) out.push_back(b ? '1' : '0');
  return out;
}

void Transcript::log(std::string role, std::string action, nlohmann::json sizes) {
  records_.push_back(
      TranscriptRecord{std::move(role), std::move(action), std::move(sizes), session_seed_});
}

std::string Transcript::to_jsonl() const {
  std::ostringstream os;
  for (const TranscriptRecord& rec : records_) {
    nlohmann::json j;
    j["role"] = rec.role;
    j["action"] = rec.action;
    j["sizes"] = rec.sizes;
    j["seed"] = rec.seed;
    os << j.dump() << '\n';
  }
  return os.str();
}

StateVector qsdc_message_state(const BitString& bits) {
  if (bits.empty() || bits.size() % 2 != 0) {
    throw std::invalid_argument("message bit string must have even, nonzero length");
  }
  const int pairs = static_cast<int>(bits.size()) / 2;

  StateVector message(2 * pairs);
  for (int pair = 0; pair < pairs; ++pair) {
    const int first = 2 * pair + 1;
    message.apply_hadamard(first);
    message.apply_cnot(first, first + 1);

    const PauliCode code = pauli_code_from_bits(bits[2 * pair], bits[2 * pair + 1]);
    switch (code.op) {
      case PauliOp::I:
        break;
      case PauliOp::X:
        message.apply_pauli(Pauli::X, first);
        break;
      case PauliOp::Z:
        message.apply_pauli(Pauli::Z, first);
        break;
      case PauliOp::iY:
        message.apply_pauli(Pauli::Y, first);  // global phase i dropped
        break;
    }
  }
  return message;
}

QsacCodeword qsdc_send(const BitString& bits, const Key& key, int num_check,
                       SplitMix64& /*rng*/, Transcript* transcript) {
  StateVector message = qsdc_message_state(bits);
  const int pairs = message.num_qubits() / 2;
  if (transcript) {
    transcript->log("sender", "prepare_epr", {{"pairs", pairs}});
    transcript->log("sender", "encode_message", {{"bits", static_cast<int>(bits.size())}});
  }

  QsacCodeword codeword = encode(message, key, num_check);
  if (transcript) {
    transcript->log("sender", "qsac_encode",
                    {{"n", codeword.params.n}, {"m", codeword.params.m}});
    transcript->log("sender", "transmit_codeword",
                    {{"qubits", codeword.params.total()}});
  }
  return codeword;
}

QsdcResult qsdc_receive(const QsacCodeword& codeword, const Key& key, SplitMix64& rng,
                        Transcript* transcript) {
  if (codeword.params.m % 2 != 0) {
    throw std::invalid_argument("message register must hold whole EPR pairs");
  }
  VerificationOutcome outcome = verify(codeword, key, rng);
  if (transcript) {
    transcript->log("receiver", "qsac_verify",
                    {{"n", codeword.params.n},
                     {"m", codeword.params.m},
                     {"mismatches",
                      static_cast<int>(outcome.mismatched_check_indices.size())}});
  }
  if (!outcome.authenticated) {
    if (transcript) transcript->log("receiver", "abort", {});
    return QsdcResult{false, std::nullopt};
  }

  StateVector message = outcome.message_state;
  const int pairs = codeword.params.m / 2;
  BitString bits;
  bits.reserve(static_cast<std::size_t>(codeword.params.m));
  for (int pair = 0; pair < pairs; ++pair) {
    const int first = 2 * pair + 1;
    message.apply_cnot(first, first + 1);
    message.apply_hadamard(first);
    const int phase_bit = message.measure(first, Basis::Z, rng).outcome;
    const int parity_bit = message.measure(first + 1, Basis::Z, rng).outcome;
    bits.push_back(static_cast<std::uint8_t>(phase_bit));
    bits.push_back(static_cast<std::uint8_t>(parity_bit));
  }
  if (transcript) {
    transcript->log("receiver", "bell_measure", {{"pairs", pairs}});
  }
  return QsdcResult{true, std::move(bits)};
}

}  // namespace qsac
