#include "qsac/codec.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>

namespace qsac {

namespace {

constexpr std::string_view kMagic = "QSAC1";

void check_network(const StateVector& psi, const TransformString& transform) {
  if (transform.length() != psi.num_qubits()) {
    throw std::invalid_argument("transform string length must equal the qubit count");
  }
}

void check_params(const QsacParams& params) {
  if (params.n < 1 || params.m < 1) {
    throw std::invalid_argument("codeword needs n >= 1 check and m >= 1 message qubits");
  }
}

std::vector<ProjectionTarget> check_targets(const CheckString& check) {
  std::vector<ProjectionTarget> targets;
  targets.reserve(check.symbols.size());
  for (int i = 1; i <= check.length(); ++i) {
    const BasisSymbol sym = check.symbols[static_cast<std::size_t>(i - 1)];
    targets.push_back(ProjectionTarget{i, basis_of(sym), expected_outcome(sym)});
  }
  return targets;
}

// After every check qubit has been measured (and X-measured ones rotated
// back to the Z basis), the register factorizes as |b_1..b_n> (x) |M>;
// slice out the message block.
StateVector extract_message(StateVector& joint, const std::vector<MeasurementRecord>& records,
                            int n, int m) {
  for (const MeasurementRecord& rec : records) {
    if (rec.basis == Basis::X) joint.apply_hadamard(rec.qubit);
  }
  std::size_t check_index = 0;
  for (const MeasurementRecord& rec : records) {
    check_index |= static_cast<std::size_t>(rec.outcome) << (n - rec.qubit);
  }
  const std::size_t block = check_index << m;
  std::vector<Amplitude> amps(std::size_t{1} << m);
  double norm = 0.0;
  for (std::size_t j = 0; j < amps.size(); ++j) {
    amps[j] = joint.amplitude(block | j);
    norm += std::norm(amps[j]);
  }
  if (std::abs(norm - 1.0) > tol::kStateNorm) {
    throw std::logic_error("message register extraction lost probability mass");
  }
  const double inv = 1.0 / std::sqrt(norm);
  for (Amplitude& a : amps) a *= inv;
  return StateVector(m, std::move(amps));
}

std::string_view trimmed(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) {
    line.remove_suffix(1);
  }
  while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) {
    line.remove_prefix(1);
  }
  return line;
}

int parse_header_int(std::string_view line, std::string_view field) {
  std::istringstream in{std::string(line)};
  std::string name;
  long value = 0;
  if (!(in >> name >> value) || name != field || !(in >> std::ws).eof()) {
    throw ParseError("expected codeword header line '" + std::string(field) + " <int>'");
  }
  if (value < 1 || value > StateVector::kHardMaxQubits) {
    throw ParseError("codeword header value out of range: " + std::string(line));
  }
  return static_cast<int>(value);
}

}  // namespace

void apply_forward_network(StateVector& psi, const TransformString& transform) {
  check_network(psi, transform);
  for (int i = 1; i <= transform.length(); ++i) {
    psi.apply_cnot(i, transform.targets[static_cast<std::size_t>(i - 1)]);
  }
}

void apply_reverse_network(StateVector& psi, const TransformString& transform) {
  check_network(psi, transform);
  for (int i = transform.length(); i >= 1; --i) {
    psi.apply_cnot(i, transform.targets[static_cast<std::size_t>(i - 1)]);
  }
}

QsacCodeword encode(const StateVector& message, const CheckString& check,
                    const TransformString& transform) {
  const QsacParams params{check.length(), message.num_qubits()};
  check_params(params);
  StateVector joint = tensor_product(prepare_product(check.symbols), message);
  apply_forward_network(joint, transform);
  return QsacCodeword{params, std::move(joint)};
}

QsacCodeword encode(const StateVector& message, const Key& key, int num_check) {
  const SubKeys sub = derive_subkeys(key);
  return encode(message, derive_check_string(sub, num_check),
                derive_transform_string(sub, num_check, message.num_qubits()));
}

QsacCodeword encode_joint(const StateVector& joint, int num_check,
                          const TransformString& transform) {
  const QsacParams params{num_check, joint.num_qubits() - num_check};
  check_params(params);
  StateVector state = joint;
  apply_forward_network(state, transform);
  return QsacCodeword{params, std::move(state)};
}

QsacCodeword encode_joint(const StateVector& joint, int num_check, const Key& key) {
  const SubKeys sub = derive_subkeys(key);
  return encode_joint(joint, num_check,
                      derive_transform_string(sub, num_check,
                                              joint.num_qubits() - num_check));
}

StateVector decode(const QsacCodeword& codeword, const TransformString& transform) {
  check_params(codeword.params);
  StateVector psi = codeword.state;
  apply_reverse_network(psi, transform);
  return psi;
}

StateVector decode(const QsacCodeword& codeword, const Key& key) {
  const SubKeys sub = derive_subkeys(key);
  return decode(codeword,
                derive_transform_string(sub, codeword.params.n, codeword.params.m));
}

VerificationOutcome verify(const QsacCodeword& codeword, const CheckString& check,
                           const TransformString& transform, SplitMix64& rng) {
  if (check.length() != codeword.params.n) {
    throw std::invalid_argument("check string length must equal the check register size");
  }
  StateVector psi = decode(codeword, transform);
  const int n = codeword.params.n;
  const int m = codeword.params.m;

  VerificationOutcome outcome{false, {}, {}, StateVector(1)};
  outcome.records.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    const BasisSymbol sym = check.symbols[static_cast<std::size_t>(i - 1)];
    const MeasurementRecord rec = psi.measure(i, basis_of(sym), rng);
    outcome.records.push_back(rec);
    if (rec.outcome != expected_outcome(sym)) {
      outcome.mismatched_check_indices.push_back(i);
    }
  }
  outcome.authenticated = outcome.mismatched_check_indices.empty();
  outcome.message_state = extract_message(psi, outcome.records, n, m);
  return outcome;
}

VerificationOutcome verify(const QsacCodeword& codeword, const Key& key,
                           SplitMix64& rng) {
  const SubKeys sub = derive_subkeys(key);
  return verify(codeword, derive_check_string(sub, codeword.params.n),
                derive_transform_string(sub, codeword.params.n, codeword.params.m), rng);
}

double exact_pass_probability(const QsacCodeword& codeword, const CheckString& check,
                              const TransformString& transform) {
  if (check.length() != codeword.params.n) {
    throw std::invalid_argument("check string length must equal the check register size");
  }
  const StateVector psi = decode(codeword, transform);
  return projection_probability(psi, check_targets(check));
}

double exact_pass_probability(const QsacCodeword& codeword, const Key& key) {
  const SubKeys sub = derive_subkeys(key);
  return exact_pass_probability(
      codeword, derive_check_string(sub, codeword.params.n),
      derive_transform_string(sub, codeword.params.n, codeword.params.m));
}

std::string write_codeword(const QsacCodeword& codeword) {
  check_params(codeword.params);
  std::ostringstream os;
  os << kMagic << '\n'
     << "n " << codeword.params.n << '\n'
     << "m " << codeword.params.m << '\n';
  dump_amplitudes(codeword.state, os);
  return os.str();
}

void write_codeword_file(const QsacCodeword& codeword, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << write_codeword(codeword);
  if (!out) throw ParseError("failed writing codeword file: " + path);
}

QsacCodeword read_codeword(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;

  if (!std::getline(in, line) || trimmed(line) != kMagic) {
    throw ParseError("missing codeword magic line");
  }
  if (!std::getline(in, line)) throw ParseError("truncated codeword header");
  const int n = parse_header_int(trimmed(line), "n");
  if (!std::getline(in, line)) throw ParseError("truncated codeword header");
  const int m = parse_header_int(trimmed(line), "m");

  const int total = n + m;
  if (total > StateVector::kHardMaxQubits) {
    throw ParseError("codeword dimensions exceed the register cap");
  }
  std::vector<Amplitude> amps(std::size_t{1} << total, Amplitude{0.0, 0.0});
  std::vector<bool> seen(amps.size(), false);

  while (std::getline(in, line)) {
    const std::string_view body = trimmed(line);
    if (body.empty()) continue;
    std::istringstream fields{std::string(body)};
    std::string bits, re, im;
    if (!(fields >> bits >> re >> im) || !(fields >> std::ws).eof()) {
      throw ParseError("malformed amplitude line: '" + std::string(body) + "'");
    }
    if (static_cast<int>(bits.size()) != total) {
      throw ParseError("amplitude index '" + bits + "' does not have " +
                       std::to_string(total) + " bits");
    }
    std::size_t index = 0;
    for (char c : bits) {
      if (c != '0' && c != '1') {
        throw ParseError("amplitude index '" + bits + "' is not binary");
      }
      index = (index << 1) | static_cast<std::size_t>(c - '0');
    }
    if (seen[index]) throw ParseError("duplicate amplitude index '" + bits + "'");
    seen[index] = true;
    amps[index] = Amplitude{parse_double(re), parse_double(im)};
  }

  try {
    StateVector state(total, std::move(amps));
    return QsacCodeword{QsacParams{n, m}, std::move(state)};
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid codeword state: ") + e.what());
  }
}

QsacCodeword read_codeword_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open codeword file: " + path);
  std::ostringstream contents;
  contents << in.rdbuf();
  return read_codeword(contents.str());
}

}  // namespace qsac
