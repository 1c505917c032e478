#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "qsac/codec.hpp"
#include "qsac/keysched.hpp"
#include "qsac/qcore.hpp"
#include "support/matrix_oracle.hpp"
#include "support/testutil.hpp"

using namespace qsac;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

StateVector joint_reference(const CheckString& check, const StateVector& message) {
  return tensor_product(prepare_product(check.symbols), message);
}

}  // namespace

TEST_CASE("forward network follows the transform string in ascending order") {
  const TransformString transform{{3, 4, 1, 2}};
  SplitMix64 rng(1);
  StateVector state = testutil::random_state(rng, 4);

  StateVector manual = state;
  manual.apply_cnot(1, 3);
  manual.apply_cnot(2, 4);
  manual.apply_cnot(3, 1);
  manual.apply_cnot(4, 2);

  apply_forward_network(state, transform);
  CHECK(state == manual);
}

TEST_CASE("reverse network runs the same gates in descending order") {
  const TransformString transform{{3, 4, 1, 2}};
  SplitMix64 rng(2);
  StateVector state = testutil::random_state(rng, 4);

  StateVector manual = state;
  manual.apply_cnot(4, 2);
  manual.apply_cnot(3, 1);
  manual.apply_cnot(2, 4);
  manual.apply_cnot(1, 3);

  apply_reverse_network(state, transform);
  CHECK(state == manual);
}

TEST_CASE("an all-self-target network is the identity") {
  SplitMix64 rng(3);
  StateVector state = testutil::random_state(rng, 5);
  const StateVector before = state;
  apply_forward_network(state, testutil::identity_transform(5));
  CHECK(state == before);
}

TEST_CASE("golden codeword for the reference key") {
  const Key key = Key::from_text("QSAC-TEST-KEY");
  const SubKeys sub = derive_subkeys(key);

  // Frozen derivations for this key at n = 3, m = 1.
  const CheckString check = derive_check_string(sub, 3);
  CHECK(check.symbols == std::vector<BasisSymbol>{BasisSymbol::Minus, BasisSymbol::Zero,
                                                  BasisSymbol::One});
  const TransformString transform = derive_transform_string(sub, 3, 1);
  CHECK(transform.targets == std::vector<int>{2, 3, 2, 4});

  const StateVector message(1);  // |0>
  const QsacCodeword codeword = encode(message, key, 3);

  SUBCASE("amplitudes recomputed by the dense-matrix oracle") {
    oracle::Vec expected = oracle::kron(oracle::prepare(check.symbols), {1.0, 0.0});
    expected = oracle::forward_network(std::move(expected), transform);
    REQUIRE(expected.size() == codeword.state.dim());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      CAPTURE(i);
      CHECK(std::abs(codeword.state.amplitude(i) - expected[i]) < 1e-15);
    }
  }

  SUBCASE("frozen amplitude values") {
    CHECK(codeword.state.amplitude(0b0110).real() == kInvSqrt2);
    CHECK(codeword.state.amplitude(0b1100).real() == -kInvSqrt2);
    double mass = 0.0;
    for (std::size_t i = 0; i < codeword.state.dim(); ++i) {
      mass += std::norm(codeword.state.amplitude(i));
      if (i != 0b0110 && i != 0b1100) {
        CHECK(codeword.state.amplitude(i) == Amplitude{0.0, 0.0});
      }
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("serialized form matches the golden file") {
    const std::string golden = read_file(std::string(QSAC_GOLDEN_DIR) + "/codeword_n3_m1.txt");
    CHECK(write_codeword(codeword) == golden);
  }
}

TEST_CASE("decode inverts encode exactly") {
  SplitMix64 rng(7);
  for (int round = 0; round < 200; ++round) {
    const Key key = Key::random(rng, 4 + static_cast<int>(rng.next_below(13)));
    const int total = 2 + static_cast<int>(rng.next_below(9));  // n + m <= 10
    const int n = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(total - 1)));
    const int m = total - n;
    const StateVector message = testutil::random_state(rng, m);

    const SubKeys sub = derive_subkeys(key);
    const CheckString check = derive_check_string(sub, n);
    const TransformString transform = derive_transform_string(sub, n, m);

    const QsacCodeword codeword = encode(message, check, transform);
    CHECK(std::abs(codeword.state.squared_norm() - 1.0) <= tol::kNorm);

    const StateVector decoded = decode(codeword, key);
    CHECK(std::abs(decoded.squared_norm() - 1.0) <= tol::kNorm);
    CHECK(fidelity(decoded, joint_reference(check, message)) >= 1.0 - tol::kFidelity);
  }
}

TEST_CASE("wrong keys are statistically distinguishable") {
  SplitMix64 rng(11);
  double total_pass = 0.0;
  const int rounds = 100;
  for (int round = 0; round < rounds; ++round) {
    const Key key = Key::random(rng, 8);
    Key wrong = Key::random(rng, 8);
    if (wrong == key) continue;  // astronomically unlikely
    const StateVector message(2);
    const QsacCodeword codeword = encode(message, key, 6);
    total_pass += exact_pass_probability(codeword, wrong);
  }
  CHECK(total_pass / rounds <= 0.6);
}

TEST_CASE("honest round trip authenticates with certainty") {
  SplitMix64 rng(13);
  for (int round = 0; round < 50; ++round) {
    const Key key = Key::random(rng, 8);
    const int total = 2 + static_cast<int>(rng.next_below(9));
    const int n = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(total - 1)));
    const int m = total - n;
    const StateVector message = testutil::random_state(rng, m);
    const QsacCodeword codeword = encode(message, key, n);

    CHECK(exact_pass_probability(codeword, key) >= 1.0 - tol::kNorm);

    SplitMix64 verify_rng(1000 + static_cast<std::uint64_t>(round));
    const VerificationOutcome outcome = verify(codeword, key, verify_rng);
    CHECK(outcome.authenticated);
    CHECK(outcome.mismatched_check_indices.empty());
    REQUIRE(outcome.records.size() == static_cast<std::size_t>(n));
    CHECK(fidelity(outcome.message_state, message) >= 1.0 - tol::kFidelity);
  }
}

TEST_CASE("verification catches an orthogonal same-basis substitution always") {
  const Key key = Key::from_text("orthogonal-check");
  const int n = 4, m = 2;
  const SubKeys sub = derive_subkeys(key);
  const CheckString check = derive_check_string(sub, n);
  const TransformString transform = derive_transform_string(sub, n, m);
  const StateVector message(m);

  for (int i = 1; i <= n; ++i) {
    CheckString tampered = check;
    // flip within the same basis: 0<->1, +<->-
    auto& sym = tampered.symbols[static_cast<std::size_t>(i - 1)];
    sym = static_cast<BasisSymbol>(static_cast<int>(sym) ^ 1);

    const QsacCodeword cw = encode_joint(joint_reference(tampered, message), n, transform);
    CHECK(exact_pass_probability(cw, check, transform) == doctest::Approx(0.0));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      SplitMix64 rng(seed);
      const VerificationOutcome outcome = verify(cw, check, transform, rng);
      CHECK_FALSE(outcome.authenticated);
      REQUIRE(!outcome.mismatched_check_indices.empty());
      CHECK(outcome.mismatched_check_indices.front() == i);
    }
  }
}

TEST_CASE("a cross-basis substitution passes half the time") {
  const Key key = Key::from_text("cross-basis");
  const int n = 3, m = 1;
  const SubKeys sub = derive_subkeys(key);
  CheckString check = derive_check_string(sub, n);
  check.symbols[0] = BasisSymbol::Zero;  // expected |0>
  const TransformString transform = derive_transform_string(sub, n, m);
  const StateVector message(m);

  CheckString delivered = check;
  delivered.symbols[0] = BasisSymbol::Plus;  // delivered |+>
  const QsacCodeword cw = encode_joint(joint_reference(delivered, message), n, transform);

  CHECK(exact_pass_probability(cw, check, transform) == doctest::Approx(0.5));

  const int trials = 10000;
  int passes = 0;
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(40000 + static_cast<std::uint64_t>(t));
    if (verify(cw, check, transform, rng).authenticated) ++passes;
  }
  const double rate = static_cast<double>(passes) / trials;
  CHECK(std::abs(rate - 0.5) <= 0.02);
}

TEST_CASE("empirical pass rate tracks the exact projection oracle") {
  SplitMix64 rng(17);
  const Key key = Key::random(rng, 8);
  const int n = 4, m = 2;
  const StateVector message = testutil::random_state(rng, m);
  QsacCodeword tampered = encode(message, key, n);
  tampered.state.apply_pauli(Pauli::Y, 3);
  tampered.state.apply_hadamard(5);

  const double exact = exact_pass_probability(tampered, key);
  const int trials = 10000;
  int passes = 0;
  for (int t = 0; t < trials; ++t) {
    SplitMix64 verify_rng(90000 + static_cast<std::uint64_t>(t));
    if (verify(tampered, key, verify_rng).authenticated) ++passes;
  }
  const double rate = static_cast<double>(passes) / trials;
  CHECK(std::abs(rate - exact) <= testutil::three_sigma(exact, trials) + 1e-9);
}

TEST_CASE("codeword serialization round-trips losslessly") {
  SplitMix64 rng(19);
  for (int round = 0; round < 20; ++round) {
    const Key key = Key::random(rng, 8);
    const int total = 2 + static_cast<int>(rng.next_below(7));
    const int n = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(total - 1)));
    const StateVector message = testutil::random_state(rng, total - n);
    const QsacCodeword codeword = encode(message, key, n);

    const QsacCodeword parsed = read_codeword(write_codeword(codeword));
    CHECK(parsed.params == codeword.params);
    REQUIRE(parsed.state.dim() == codeword.state.dim());
    CHECK(parsed.state == codeword.state);
  }
}

TEST_CASE("malformed codeword text is rejected") {
  const Key key = Key::from_text("serialization");
  const QsacCodeword codeword = encode(StateVector(1), key, 2);
  const std::string good = write_codeword(codeword);

  CHECK_THROWS_AS(read_codeword(""), ParseError);
  CHECK_THROWS_AS(read_codeword("WRONG\nn 2\nm 1\n"), ParseError);
  CHECK_THROWS_AS(read_codeword("QSAC1\nn 2\n"), ParseError);  // truncated header
  CHECK_THROWS_AS(read_codeword("QSAC1\nn 2\nm x\n"), ParseError);
  CHECK_THROWS_AS(read_codeword("QSAC1\nn 0\nm 1\n"), ParseError);

  // truncated amplitude list no longer sums to 1
  const std::string truncated = good.substr(0, good.rfind("\n", good.size() - 2) + 1);
  CHECK_THROWS_AS(read_codeword(truncated), ParseError);

  // bad amplitude lines
  CHECK_THROWS_AS(read_codeword("QSAC1\nn 1\nm 1\n0 1 0\n"), ParseError);
  CHECK_THROWS_AS(read_codeword("QSAC1\nn 1\nm 1\n02 1 0\n"), ParseError);
  CHECK_THROWS_AS(read_codeword("QSAC1\nn 1\nm 1\n00 1 0\n00 0 0\n"), ParseError);
  CHECK_THROWS_AS(read_codeword("QSAC1\nn 1\nm 1\n00 1 0 9\n"), ParseError);
  CHECK_THROWS_AS(read_codeword("QSAC1\nn 1\nm 1\n00 0.5 0\n"), ParseError);  // norm
}

TEST_CASE("encode validates its dimensions") {
  const Key key = Key::from_text("bounds");
  CHECK_THROWS_AS(encode(StateVector(1), key, 0), std::invalid_argument);
  CHECK_THROWS_AS(encode(StateVector(10), key, 11), std::invalid_argument);
  const CheckString check{{BasisSymbol::Zero}};
  CHECK_THROWS_AS(encode(StateVector(2), check, TransformString{{1, 2}}),
                  std::invalid_argument);  // transform too short
}
