#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qsac/qcore.hpp"
#include "qsac/rng.hpp"

namespace qsac {

// Pre-shared key: raw bytes plus the declared bit length (>= 8).
struct Key {
  std::vector<std::uint8_t> bytes;
  int bit_length = 0;

  static Key from_bytes(std::vector<std::uint8_t> bytes);
  static Key from_text(std::string_view text);

  // Key file payload: a single hex string, optional 0x prefix,
  // whitespace tolerated anywhere.
  static Key from_hex(std::string_view hex);

  static Key random(SplitMix64& rng, int num_bytes);

  std::string to_hex() const;

  friend bool operator==(const Key&, const Key&) = default;
};

Key load_key_file(const std::string& path);

// 64-bit seeds for the two sub-key streams. Domain separation (a 'Q' or
// 'T' tag byte folded into the hash) keeps them distinct for every key.
struct SubKeys {
  std::uint64_t kq_seed = 0;
  std::uint64_t kt_seed = 0;

  friend bool operator==(const SubKeys&, const SubKeys&) = default;
};

// S_Q: one quaternary symbol per check qubit.
struct CheckString {
  std::vector<BasisSymbol> symbols;

  int length() const { return static_cast<int>(symbols.size()); }

  friend bool operator==(const CheckString&, const CheckString&) = default;
};

// S_T: targets[i-1] is the (1-based) target of the CNOT whose control is
// qubit i. A self-target executes as the identity.
struct TransformString {
  std::vector<int> targets;

  int length() const { return static_cast<int>(targets.size()); }

  friend bool operator==(const TransformString&, const TransformString&) = default;
};

// FNV-1a over (key bytes || tag), bit-exact across platforms. Tag 0x51
// ('Q') yields kq_seed, 0x54 ('T') kt_seed. Each seed then drives an
// independent SplitMix64 stream, consumed on demand.
//
// Not a cryptographic key schedule; the derivation only has to be
// deterministic, well-diffused and reproducible for the simulator.
SubKeys derive_subkeys(const Key& key);

// Symbol i of S_Q is kq-stream output i mod 4.
CheckString derive_check_string(const SubKeys& sub, int n);

// Element i of S_T is (kt-stream output i mod (n+m)) + 1.
TransformString derive_transform_string(const SubKeys& sub, int n, int m,
                                        int max_qubits = StateVector::kDefaultMaxQubits);

}  // namespace qsac
