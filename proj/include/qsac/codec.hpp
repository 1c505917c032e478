#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "qsac/keysched.hpp"
#include "qsac/qcore.hpp"
#include "qsac/rng.hpp"

namespace qsac {

// Register layout of a codeword: n check qubits in positions 1..n,
// m message qubits in positions n+1..n+m.
struct QsacParams {
  int n = 0;  // check qubits (security parameter)
  int m = 0;  // message qubits

  int total() const { return n + m; }

  friend bool operator==(const QsacParams&, const QsacParams&) = default;
};

struct QsacCodeword {
  QsacParams params;
  StateVector state;

  friend bool operator==(const QsacCodeword&, const QsacCodeword&) = default;
};

struct VerificationOutcome {
  bool authenticated = false;
  std::vector<int> mismatched_check_indices;
  std::vector<MeasurementRecord> records;  // one per check qubit, in index order
  StateVector message_state;               // collapsed message register
};

// CNOT(i, targets[i-1]) for i = 1..L ascending.
void apply_forward_network(StateVector& psi, const TransformString& transform);

// CNOT(i, targets[i-1]) for i = L..1 descending: the exact inverse of the
// forward pass, since each CNOT is an involution.
void apply_reverse_network(StateVector& psi, const TransformString& transform);

// Prepare |C> from the check string, attach the message register and run
// the forward CNOT network over the joint state.
QsacCodeword encode(const StateVector& message, const CheckString& check,
                    const TransformString& transform);
QsacCodeword encode(const StateVector& message, const Key& key, int num_check);

// Wrap an already-formed (n+m)-qubit joint register, e.g. a synthetic
// |C''> (x) |M> built for substitution experiments.
QsacCodeword encode_joint(const StateVector& joint, int num_check,
                          const TransformString& transform);
QsacCodeword encode_joint(const StateVector& joint, int num_check, const Key& key);

StateVector decode(const QsacCodeword& codeword, const TransformString& transform);
StateVector decode(const QsacCodeword& codeword, const Key& key);

// Decode, then measure check qubits 1..n in the bases dictated by the
// check string, comparing each outcome to the prepared state. The
// collapsed message register is returned even on failure; abort policy
// belongs to the caller.
VerificationOutcome verify(const QsacCodeword& codeword, const CheckString& check,
                           const TransformString& transform, SplitMix64& rng);
VerificationOutcome verify(const QsacCodeword& codeword, const Key& key,
                           SplitMix64& rng);

// Exact, sampling-free acceptance probability: the projection of the
// decoded state onto all expected check outcomes.
double exact_pass_probability(const QsacCodeword& codeword, const CheckString& check,
                              const TransformString& transform);
double exact_pass_probability(const QsacCodeword& codeword, const Key& key);

// ---- text serialization -------------------------------------------------
//
//   QSAC1
//   n <int>
//   m <int>
//   <index_bits> <real> <imag>      (one line per nonzero amplitude)
//
// Reals use shortest round-trip rendering, so the format is lossless at
// double precision.

std::string write_codeword(const QsacCodeword& codeword);
void write_codeword_file(const QsacCodeword& codeword, const std::string& path);

QsacCodeword read_codeword(std::string_view text);
QsacCodeword read_codeword_file(const std::string& path);

}  // namespace qsac
