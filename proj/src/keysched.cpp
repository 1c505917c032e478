#include "qsac/keysched.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace qsac {

namespace {

constexpr std::uint64_t kFnvOffsetBasis = 0xcbf29ce484222325ull;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ull;
constexpr std::uint8_t kTagQ = 0x51;
constexpr std::uint8_t kTagT = 0x54;

std::uint64_t fnv1a64(const std::vector<std::uint8_t>& bytes, std::uint8_t tag) {
  std::uint64_t h = kFnvOffsetBasis;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= kFnvPrime;
  }
  h ^= tag;
  h *= kFnvPrime;
  return h;
}

int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

void validate(const Key& key) {
  if (key.bytes.empty() || key.bit_length < 8) {
    throw std::invalid_argument("key must carry at least 8 bits");
  }
}

}  // namespace

Key Key::from_bytes(std::vector<std::uint8_t> bytes) {
  Key key{std::move(bytes), 0};
  key.bit_length = static_cast<int>(key.bytes.size()) * 8;
  validate(key);
  return key;
}

Key Key::from_text(std::string_view text) {
  return from_bytes(std::vector<std::uint8_t>(text.begin(), text.end()));
}

Key Key::from_hex(std::string_view hex) {
  std::string digits;
  digits.reserve(hex.size());
  for (char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    digits.push_back(c);
  }
  if (digits.size() >= 2 && digits[0] == '0' && (digits[1] == 'x' || digits[1] == 'X')) {
    digits.erase(0, 2);
  }
  if (digits.empty()) throw ParseError("key hex string is empty");
  if (digits.size() % 2 != 0) {
    throw ParseError("key hex string has an odd number of digits");
  }
  std::vector<std::uint8_t> bytes;
  bytes.reserve(digits.size() / 2);
  for (std::size_t i = 0; i < digits.size(); i += 2) {
    const int hi = hex_nibble(digits[i]);
    const int lo = hex_nibble(digits[i + 1]);
    if (hi < 0 || lo < 0) {
      throw ParseError(std::string("invalid hex digit '") + digits[i + (hi < 0 ? 0 : 1)] +
                       "' in key");
    }
    bytes.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return from_bytes(std::move(bytes));
}

Key Key::random(SplitMix64& rng, int num_bytes) {
  if (num_bytes < 1) throw std::invalid_argument("key needs at least one byte");
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(num_bytes));
  for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.next_below(256));
  return from_bytes(std::move(bytes));
}

std::string Key::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

Key load_key_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open key file: " + path);
  std::ostringstream contents;
  contents << in.rdbuf();
  return Key::from_hex(contents.str());
}

SubKeys derive_subkeys(const Key& key) {
  validate(key);
  return SubKeys{fnv1a64(key.bytes, kTagQ), fnv1a64(key.bytes, kTagT)};
}

CheckString derive_check_string(const SubKeys& sub, int n) {
  if (n < 1) throw std::invalid_argument("check string length must be >= 1");
  SplitMix64 stream(sub.kq_seed);
  CheckString out;
  out.symbols.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.symbols.push_back(static_cast<BasisSymbol>(stream.next_u64() % 4));
  }
  return out;
}

TransformString derive_transform_string(const SubKeys& sub, int n, int m,
                                        int max_qubits) {
  if (n < 1 || m < 1) throw std::invalid_argument("need n >= 1 and m >= 1");
  const int total = n + m;
  const int cap = std::min(max_qubits, StateVector::kHardMaxQubits);
  if (total > cap) {
    throw std::invalid_argument("transform string of length " + std::to_string(total) +
                                " exceeds the cap of " + std::to_string(cap));
  }
  SplitMix64 stream(sub.kt_seed);
  TransformString out;
  out.targets.reserve(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i) {
    out.targets.push_back(static_cast<int>(stream.next_u64() % total) + 1);
  }
  return out;
}

}  // namespace qsac
