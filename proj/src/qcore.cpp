#include "qsac/qcore.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <utility>

namespace qsac {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

int checked_register_size(int num_qubits, int max_qubits) {
  const int cap = std::min(max_qubits, StateVector::kHardMaxQubits);
  if (num_qubits < 1) {
    throw std::invalid_argument("state vector needs at least 1 qubit");
  }
  if (num_qubits > cap) {
    throw std::invalid_argument("state vector of " + std::to_string(num_qubits) +
                                " qubits exceeds the cap of " + std::to_string(cap));
  }
  return num_qubits;
}

double squared_norm_of(const std::vector<Amplitude>& amps) {
  double total = 0.0;
  for (const Amplitude& a : amps) total += std::norm(a);
  return total;
}

// In-place, unnormalized projection of one qubit onto a basis outcome.
// Z outcome b keeps the amplitudes whose qubit bit equals b; X outcomes
// use P+ = (I+X)/2 and P- = (I-X)/2.
void project_in_place(std::vector<Amplitude>& amps, std::size_t mask, Basis basis,
                      int outcome) {
  if (basis == Basis::Z) {
    const std::size_t keep = outcome ? mask : 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if ((i & mask) != keep) amps[i] = 0.0;
    }
  } else {
    const double sign = outcome ? -1.0 : 1.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
      if (i & mask) continue;
      const Amplitude v = 0.5 * (amps[i] + sign * amps[i | mask]);
      amps[i] = v;
      amps[i | mask] = sign * v;
    }
  }
}

}  // namespace

Basis basis_of(BasisSymbol s) {
  return (s == BasisSymbol::Zero || s == BasisSymbol::One) ? Basis::Z : Basis::X;
}

int expected_outcome(BasisSymbol s) {
  return (s == BasisSymbol::One || s == BasisSymbol::Minus) ? 1 : 0;
}

StateVector::StateVector(int num_qubits, int max_qubits)
    : num_qubits_(checked_register_size(num_qubits, max_qubits)),
      amps_(std::size_t{1} << num_qubits_, Amplitude{0.0, 0.0}) {
  amps_[0] = 1.0;
}

StateVector::StateVector(int num_qubits, std::vector<Amplitude> amplitudes, int max_qubits)
    : num_qubits_(checked_register_size(num_qubits, max_qubits)),
      amps_(std::move(amplitudes)) {
  if (amps_.size() != (std::size_t{1} << num_qubits_)) {
    throw std::invalid_argument("amplitude array length must be 2^num_qubits");
  }
  if (std::abs(squared_norm() - 1.0) > tol::kStateNorm) {
    throw std::invalid_argument("state vector is not normalized");
  }
}

double StateVector::squared_norm() const { return squared_norm_of(amps_); }

std::size_t StateVector::qubit_mask(int qubit) const {
  return std::size_t{1} << (num_qubits_ - qubit);
}

void StateVector::check_qubit(int qubit) const {
  if (qubit < 1 || qubit > num_qubits_) {
    throw std::out_of_range("qubit index " + std::to_string(qubit) +
                            " outside register of " + std::to_string(num_qubits_) +
                            " qubits");
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) return;  // identity by convention
  const std::size_t cmask = qubit_mask(control);
  const std::size_t tmask = qubit_mask(target);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & cmask) && !(i & tmask)) std::swap(amps_[i], amps_[i | tmask]);
  }
}

void StateVector::apply_pauli(Pauli p, int qubit) {
  check_qubit(qubit);
  const std::size_t mask = qubit_mask(qubit);
  switch (p) {
    case Pauli::X:
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (!(i & mask)) std::swap(amps_[i], amps_[i | mask]);
      }
      break;
    case Pauli::Y:
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) continue;
        const Amplitude a0 = amps_[i];
        const Amplitude a1 = amps_[i | mask];
        amps_[i] = Amplitude{0.0, -1.0} * a1;
        amps_[i | mask] = Amplitude{0.0, 1.0} * a0;
      }
      break;
    case Pauli::Z:
      for (std::size_t i = 0; i < amps_.size(); ++i) {
        if (i & mask) amps_[i] = -amps_[i];
      }
      break;
  }
}

void StateVector::apply_hadamard(int qubit) {
  check_qubit(qubit);
  const std::size_t mask = qubit_mask(qubit);
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if (i & mask) continue;
    const Amplitude a0 = amps_[i];
    const Amplitude a1 = amps_[i | mask];
    amps_[i] = (a0 + a1) * kInvSqrt2;
    amps_[i | mask] = (a0 - a1) * kInvSqrt2;
  }
}

MeasurementRecord StateVector::measure(int qubit, Basis basis, SplitMix64& rng) {
  check_qubit(qubit);
  const std::size_t mask = qubit_mask(qubit);

  std::vector<Amplitude> branch0 = amps_;
  project_in_place(branch0, mask, basis, 0);
  const double p0 = squared_norm_of(branch0);

  const int outcome = rng.next_double() < p0 ? 0 : 1;
  if (outcome == 0) {
    amps_ = std::move(branch0);
  } else {
    project_in_place(amps_, mask, basis, 1);
  }

  const double p = squared_norm_of(amps_);
  if (p < 1e-30) {
    throw std::logic_error("measure selected a zero-probability branch");
  }
  const double inv = 1.0 / std::sqrt(p);
  for (Amplitude& a : amps_) a *= inv;
  return MeasurementRecord{qubit, basis, outcome};
}

StateVector prepare_product(std::span<const BasisSymbol> symbols, int max_qubits) {
  if (symbols.empty()) {
    throw std::invalid_argument("prepare_product: empty symbol list");
  }
  const int n = checked_register_size(static_cast<int>(symbols.size()), max_qubits);
  std::vector<Amplitude> amps(std::size_t{1} << n, Amplitude{0.0, 0.0});
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    double value = 1.0;
    for (int q = 0; q < n; ++q) {
      const int bit = static_cast<int>((idx >> (n - 1 - q)) & 1u);
      switch (symbols[q]) {
        case BasisSymbol::Zero:
          if (bit) value = 0.0;
          break;
        case BasisSymbol::One:
          if (!bit) value = 0.0;
          break;
        case BasisSymbol::Plus:
          value *= kInvSqrt2;
          break;
        case BasisSymbol::Minus:
          value *= bit ? -kInvSqrt2 : kInvSqrt2;
          break;
      }
      if (value == 0.0) break;
    }
    amps[idx] = value;
  }
  return StateVector(n, std::move(amps), max_qubits);
}

StateVector tensor_product(const StateVector& a, const StateVector& b, int max_qubits) {
  const int n = checked_register_size(a.num_qubits() + b.num_qubits(), max_qubits);
  std::vector<Amplitude> amps(std::size_t{1} << n);
  const auto bs = b.amplitudes();
  const auto as = a.amplitudes();
  for (std::size_t i = 0; i < as.size(); ++i) {
    for (std::size_t j = 0; j < bs.size(); ++j) {
      amps[(i << b.num_qubits()) | j] = as[i] * bs[j];
    }
  }
  return StateVector(n, std::move(amps), max_qubits);
}

double projection_probability(const StateVector& state,
                              std::span<const ProjectionTarget> targets) {
  std::vector<int> seen;
  for (const ProjectionTarget& t : targets) {
    if (t.qubit < 1 || t.qubit > state.num_qubits()) {
      throw std::out_of_range("projection target qubit out of range");
    }
    if (std::find(seen.begin(), seen.end(), t.qubit) != seen.end()) {
      throw std::invalid_argument("duplicate projection target qubit");
    }
    seen.push_back(t.qubit);
  }
  std::vector<Amplitude> work(state.amplitudes().begin(), state.amplitudes().end());
  for (const ProjectionTarget& t : targets) {
    const std::size_t mask = std::size_t{1} << (state.num_qubits() - t.qubit);
    project_in_place(work, mask, t.basis, t.outcome);
  }
  return std::clamp(squared_norm_of(work), 0.0, 1.0);
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw std::invalid_argument("fidelity: qubit counts differ");
  }
  Amplitude inner{0.0, 0.0};
  const auto as = a.amplitudes();
  const auto bs = b.amplitudes();
  for (std::size_t i = 0; i < as.size(); ++i) inner += std::conj(as[i]) * bs[i];
  return std::clamp(std::norm(inner), 0.0, 1.0);
}

void dump_amplitudes(const StateVector& state, std::ostream& os) {
  const int n = state.num_qubits();
  const auto amps = state.amplitudes();
  std::string bits(n, '0');
  for (std::size_t idx = 0; idx < amps.size(); ++idx) {
    const Amplitude& a = amps[idx];
    if (a.real() == 0.0 && a.imag() == 0.0) continue;
    for (int q = 0; q < n; ++q) {
      bits[q] = ((idx >> (n - 1 - q)) & 1u) ? '1' : '0';
    }
    os << bits << ' ' << format_double(a.real()) << ' ' << format_double(a.imag())
       << '\n';
  }
}

std::string dump_amplitudes(const StateVector& state) {
  std::ostringstream os;
  dump_amplitudes(state, os);
  return os.str();
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

double parse_double(std::string_view token) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || token.empty()) {
    throw ParseError("malformed real number: '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace qsac
