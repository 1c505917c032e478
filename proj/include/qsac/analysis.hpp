#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsac/adversary.hpp"
#include "qsac/codec.hpp"
#include "qsac/keysched.hpp"
#include "qsac/qcore.hpp"

namespace qsac {

// Closed forms of the detection analysis:
//   epsilon      = (1/3)^j        coincidence probability for j substituted
//                                 check symbols
//   p_collision  = 2^-n           |message space| / |codeword space|
//   p_pass       = p_collision + (1 - p_collision) * epsilon
//   epsilon_avalanche = (1/3)^(n/2), the avalanche-regime reference value
//                                 (reported, never asserted)
struct DetectionFormulas {
  int n = 0;
  int m = 0;
  int j = 0;
  double epsilon = 0.0;
  double p_collision = 0.0;
  double p_pass = 0.0;
  double epsilon_avalanche = 0.0;
};

DetectionFormulas formulas(int n, int m, int j);

// Conventional random-sampling strategy: (num_check / total) * 1/4 per
// interfered qubit, the side-by-side comparison baseline.
double random_sampling_baseline(int num_check, int total);

struct DetectionStats {
  std::uint64_t trials = 0;
  std::uint64_t passes = 0;
  double pass_rate = 0.0;
  double ci95_half_width = 0.0;  // 1.96 * sqrt(r(1-r)/trials)
  std::optional<double> predicted;
  std::uint64_t seed = 0;

  friend bool operator==(const DetectionStats&, const DetectionStats&) = default;
};

// Runs attack + verify once per trial with per-trial generator seeds
// seed + trial_index. The closed-form prediction is attached for
// CheckSubstitution attacks.
DetectionStats mc_detection(const AttackSpec& attack, const QsacParams& params,
                            const Key& key, const StateVector& message,
                            std::uint64_t trials, std::uint64_t seed);

struct AvalanchePoint {
  int position = 0;
  Pauli pauli = Pauli::X;
  double exact_pass_prob = 0.0;
  // Hamming distance between the honest and tampered decoded basis
  // strings; only defined when both decode to computational basis states.
  std::optional<int> hamming_spread;
};

struct AvalancheReport {
  std::optional<Key> key;
  int n = 0;
  int m = 0;
  CheckString check;
  TransformString transform;
  std::vector<AvalanchePoint> points;  // one per (position, pauli in {X, Z})
};

inline constexpr int kAvalancheScanMaxQubits = 12;

// Exhaustive tamper scan over every codeword position with X and Z, on
// the all-zero message register. classical_basis folds the derived check
// symbols into {0, 1}, which makes the decoded states basis states and
// the Hamming spread well defined.
AvalancheReport avalanche_scan(const Key& key, int n, int m, bool classical_basis = true);
AvalancheReport avalanche_scan(const CheckString& check, const TransformString& transform);

// The basis-state bit string of a register, if it is one (within
// tol::kNorm); phase is ignored.
std::optional<std::vector<int>> basis_bits(const StateVector& state);

int hamming_distance(const std::vector<int>& a, const std::vector<int>& b);

// ---- CSV schemas ---------------------------------------------------------

// "n,m,attack,j,trials,seed,pass_rate,ci95,predicted"
std::string detection_csv_header();
std::string detection_csv_row(const QsacParams& params, const AttackSpec& attack,
                              const DetectionStats& stats);

// "position,pauli,exact_pass_prob,hamming_spread"
std::string avalanche_csv(const AvalancheReport& report);

}  // namespace qsac
