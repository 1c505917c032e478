#include "qsac/analysis.hpp"

#include <cmath>
#include <sstream>

namespace qsac {

namespace {

bool run_one_trial(const AttackSpec& attack, const QsacCodeword& honest,
                   const CheckString& check, const TransformString& transform,
                   const StateVector& message, const Key& key, SplitMix64& rng) {
  switch (attack.kind) {
    case AttackKind::PauliTamper: {
      const TamperedCodeword tc = pauli_tamper(honest, attack, rng);
      return verify(tc.codeword, check, transform, rng).authenticated;
    }
    case AttackKind::CheckSubstitution: {
      const std::vector<int> positions =
          resolve_positions(attack.positions, check.length(), rng);
      const CheckString tampered = substitute_check_states(check, positions, rng);
      const StateVector joint =
          tensor_product(prepare_product(tampered.symbols), message);
      const QsacCodeword cw = encode_joint(joint, check.length(), transform);
      return verify(cw, check, transform, rng).authenticated;
    }
    case AttackKind::InterceptResend: {
      const std::vector<int> positions =
          resolve_positions(attack.positions, honest.params.total(), rng);
      const TamperedCodeword tc = intercept_resend(honest, positions, rng);
      return verify(tc.codeword, check, transform, rng).authenticated;
    }
    case AttackKind::Impersonation: {
      const Key guessed =
          attack.guessed_key ? *attack.guessed_key
                             : Key::random(rng, static_cast<int>(key.bytes.size()));
      return impersonate(message, guessed, key, honest.params.n, rng).authenticated;
    }
  }
  throw std::logic_error("unknown attack kind");
}

std::string csv_double(double v) { return format_double(v); }

// (1/3)^j by repeated multiplication, bit-exact across platforms.
double third_power(int j) {
  double v = 1.0;
  for (int i = 0; i < j; ++i) v *= 1.0 / 3.0;
  return v;
}

}  // namespace

DetectionFormulas formulas(int n, int m, int j) {
  if (n < 1 || m < 1 || j < 1) throw std::invalid_argument("need n, m, j >= 1");
  if (j > n) {
    throw std::invalid_argument("cannot modify " + std::to_string(j) + " of " +
                                std::to_string(n) + " check qubits");
  }
  DetectionFormulas f;
  f.n = n;
  f.m = m;
  f.j = j;
  f.epsilon = third_power(j);
  f.p_collision = std::ldexp(1.0, -n);  // 2^m / 2^(n+m)
  f.p_pass = f.p_collision + (1.0 - f.p_collision) * f.epsilon;
  f.epsilon_avalanche = std::pow(1.0 / 3.0, static_cast<double>(n) / 2.0);
  return f;
}

double random_sampling_baseline(int num_check, int total) {
  if (num_check < 1 || total < 1 || num_check > total) {
    throw std::invalid_argument("need 1 <= num_check <= total");
  }
  return (static_cast<double>(num_check) / static_cast<double>(total)) * 0.25;
}

DetectionStats mc_detection(const AttackSpec& attack, const QsacParams& params,
                            const Key& key, const StateVector& message,
                            std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  if (message.num_qubits() != params.m) {
    throw std::invalid_argument("message register size must equal params.m");
  }
  const SubKeys sub = derive_subkeys(key);
  const CheckString check = derive_check_string(sub, params.n);
  const TransformString transform = derive_transform_string(sub, params.n, params.m);
  const QsacCodeword honest = encode(message, check, transform);

  std::uint64_t passes = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    SplitMix64 rng(seed + t);
    if (run_one_trial(attack, honest, check, transform, message, key, rng)) ++passes;
  }

  DetectionStats stats;
  stats.trials = trials;
  stats.passes = passes;
  stats.pass_rate = static_cast<double>(passes) / static_cast<double>(trials);
  stats.ci95_half_width =
      1.96 * std::sqrt(stats.pass_rate * (1.0 - stats.pass_rate) /
                       static_cast<double>(trials));
  if (attack.kind == AttackKind::CheckSubstitution) {
    stats.predicted = third_power(attack.j());
  }
  stats.seed = seed;
  return stats;
}

std::optional<std::vector<int>> basis_bits(const StateVector& state) {
  const auto amps = state.amplitudes();
  std::size_t hit = amps.size();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (std::norm(amps[i]) > 0.5) {
      hit = i;
      break;
    }
  }
  if (hit == amps.size() || std::abs(std::norm(amps[hit]) - 1.0) > tol::kNorm) {
    return std::nullopt;
  }
  std::vector<int> bits(static_cast<std::size_t>(state.num_qubits()));
  for (int q = 0; q < state.num_qubits(); ++q) {
    bits[static_cast<std::size_t>(q)] =
        static_cast<int>((hit >> (state.num_qubits() - 1 - q)) & 1u);
  }
  return bits;
}

int hamming_distance(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("hamming_distance: length mismatch");
  }
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

AvalancheReport avalanche_scan(const CheckString& check, const TransformString& transform) {
  const int n = check.length();
  const int total = transform.length();
  const int m = total - n;
  if (n < 1 || m < 1) throw std::invalid_argument("scan needs n >= 1 and m >= 1");
  if (total > kAvalancheScanMaxQubits) {
    throw std::invalid_argument("scan budget is " +
                                std::to_string(kAvalancheScanMaxQubits) + " qubits");
  }

  AvalancheReport report{std::nullopt, n, m, check, transform, {}};
  const StateVector message(m);  // |0...0>
  const QsacCodeword honest = encode(message, check, transform);
  const std::optional<std::vector<int>> honest_bits =
      basis_bits(decode(honest, transform));

  for (int p = 1; p <= total; ++p) {
    for (const Pauli pauli : {Pauli::X, Pauli::Z}) {
      QsacCodeword tampered = honest;
      tampered.state.apply_pauli(pauli, p);
      AvalanchePoint point;
      point.position = p;
      point.pauli = pauli;
      point.exact_pass_prob = exact_pass_probability(tampered, check, transform);
      if (honest_bits) {
        if (const auto bits = basis_bits(decode(tampered, transform))) {
          point.hamming_spread = hamming_distance(*honest_bits, *bits);
        }
      }
      report.points.push_back(point);
    }
  }
  return report;
}

AvalancheReport avalanche_scan(const Key& key, int n, int m, bool classical_basis) {
  const SubKeys sub = derive_subkeys(key);
  CheckString check = derive_check_string(sub, n);
  if (classical_basis) {
    for (auto& sym : check.symbols) {
      sym = static_cast<BasisSymbol>(static_cast<int>(sym) & 1);
    }
  }
  AvalancheReport report = avalanche_scan(check, derive_transform_string(sub, n, m));
  report.key = key;
  return report;
}

std::string detection_csv_header() {
  return "n,m,attack,j,trials,seed,pass_rate,ci95,predicted\n";
}

std::string detection_csv_row(const QsacParams& params, const AttackSpec& attack,
                              const DetectionStats& stats) {
  std::ostringstream os;
  os << params.n << ',' << params.m << ',' << to_string(attack.kind) << ','
     << attack.j() << ',' << stats.trials << ',' << stats.seed << ','
     << csv_double(stats.pass_rate) << ',' << csv_double(stats.ci95_half_width) << ',';
  if (stats.predicted) os << csv_double(*stats.predicted);
  os << '\n';
  return os.str();
}

std::string avalanche_csv(const AvalancheReport& report) {
  std::ostringstream os;
  os << "position,pauli,exact_pass_prob,hamming_spread\n";
  for (const AvalanchePoint& point : report.points) {
    os << point.position << ',' << (point.pauli == Pauli::X ? 'X' : 'Z') << ','
       << csv_double(point.exact_pass_prob) << ',';
    if (point.hamming_spread) os << *point.hamming_spread;
    os << '\n';
  }
  return os.str();
}

}  // namespace qsac
