#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsac/rng.hpp"

namespace qsac {

using Amplitude = std::complex<double>;

// All tolerance constants live here.
namespace tol {
inline constexpr double kNorm = 1e-9;       // norm drift allowed after any operation
inline constexpr double kStateNorm = 1e-6;  // accepted when constructing or parsing a state
inline constexpr double kFidelity = 1e-10;  // round-trip fidelity slack
inline constexpr double kExact = 1e-12;     // slack for exactly representable results
}  // namespace tol

// Thrown when text input (key files, codeword files, configs) is malformed.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Basis : std::uint8_t { Z, X };
enum class Pauli : std::uint8_t { X, Y, Z };

// One of |0>, |1>, |+>, |->. Symbols 0 and 1 live in the Z basis, 2 and 3
// in the X basis.
enum class BasisSymbol : std::uint8_t { Zero = 0, One = 1, Plus = 2, Minus = 3 };

Basis basis_of(BasisSymbol s);

// Measurement outcome that leaves the symbol's state invariant:
// |0>,|+> -> 0 and |1>,|-> -> 1 in their own bases.
int expected_outcome(BasisSymbol s);

struct MeasurementRecord {
  int qubit = 0;  // 1-based within the measured register
  Basis basis = Basis::Z;
  int outcome = 0;  // Z: 0/1 <-> |0>/|1>;  X: 0/1 <-> |+>/|->

  friend bool operator==(const MeasurementRecord&, const MeasurementRecord&) = default;
};

struct ProjectionTarget {
  int qubit = 0;
  Basis basis = Basis::Z;
  int outcome = 0;
};

// Dense state vector over num_qubits() qubits.
//
// Convention (fixed project-wide): qubit 1 is the leftmost symbol in ket
// strings and the most significant bit of the amplitude index. All qubit
// arguments are 1-based.
class StateVector {
 public:
  static constexpr int kDefaultMaxQubits = 20;
  static constexpr int kHardMaxQubits = 24;

  // |0...0> over num_qubits qubits.
  explicit StateVector(int num_qubits, int max_qubits = kDefaultMaxQubits);

  // Takes ownership of a 2^num_qubits amplitude array; it must already be
  // normalized to within tol::kStateNorm.
  StateVector(int num_qubits, std::vector<Amplitude> amplitudes,
              int max_qubits = kDefaultMaxQubits);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const Amplitude> amplitudes() const { return amps_; }
  Amplitude amplitude(std::size_t index) const { return amps_.at(index); }

  double squared_norm() const;

  // CNOT with 1-based control and target. control == target acts as the
  // identity (the convention every transform string relies on).
  void apply_cnot(int control, int target);

  void apply_pauli(Pauli p, int qubit);
  void apply_hadamard(int qubit);

  // Samples a Z- or X-basis measurement of one qubit with Born
  // probabilities and collapses the register. X-basis measurement is
  // projector arithmetic (Hadamard-conjugated Z), sharing its code path
  // with projection_probability.
  MeasurementRecord measure(int qubit, Basis basis, SplitMix64& rng);

  friend bool operator==(const StateVector&, const StateVector&) = default;

 private:
  std::size_t qubit_mask(int qubit) const;
  void check_qubit(int qubit) const;

  int num_qubits_;
  std::vector<Amplitude> amps_;
};

// Tensor product of the listed single-qubit states; element 0 of the list
// becomes qubit 1 (the most significant index bit).
StateVector prepare_product(std::span<const BasisSymbol> symbols,
                            int max_qubits = StateVector::kDefaultMaxQubits);

// a becomes the high-order register, b the low-order one.
StateVector tensor_product(const StateVector& a, const StateVector& b,
                           int max_qubits = StateVector::kDefaultMaxQubits);

// <psi|P|psi> where P projects every listed qubit onto its expected
// outcome. No state mutation; targets must name distinct qubits.
double projection_probability(const StateVector& state,
                              std::span<const ProjectionTarget> targets);

// |<a|b>|^2. Insensitive to global phase.
double fidelity(const StateVector& a, const StateVector& b);

// One line per nonzero amplitude: "index_bits real imag", index bits
// rendered qubit-1-first. Reals use shortest round-trip rendering.
void dump_amplitudes(const StateVector& state, std::ostream& os);
std::string dump_amplitudes(const StateVector& state);

// Shortest decimal rendering that parses back to the same double.
std::string format_double(double value);

// Strict full-token parse; throws ParseError on anything else.
double parse_double(std::string_view token);

}  // namespace qsac
