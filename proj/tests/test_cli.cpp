// Black-box tests of the command-line surface: each case invokes the real
// binary and asserts on exit codes, report contents and output files.
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include <json.hpp>

#include "qsac/codec.hpp"
#include "qsac/keysched.hpp"
#include "qsac/qcore.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// hex of the ASCII bytes "QSAC-TEST-KEY"
constexpr const char* kTestKeyHex = "515341432d544553542d4b4559";

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(QSAC_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[4096];
  std::size_t got = 0;
  while ((got = fread(buf, 1, sizeof(buf), pipe)) > 0) output.append(buf, got);
  const int status = pclose(pipe);
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.output = std::move(output);
  return result;
}

const fs::path& test_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("qsac-cli-tests-" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string path_of(const std::string& name) { return (test_dir() / name).string(); }

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  REQUIRE(out);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

const std::string& key_file() {
  static const std::string path = [] {
    const std::string p = path_of("key.hex");
    write_file(p, std::string(kTestKeyHex) + "\n");
    return p;
  }();
  return path;
}

json parse_report(const std::string& text) {
  return json::parse(text);
}

struct CsvRow {
  std::vector<std::string> fields;
};

std::vector<CsvRow> parse_csv(const std::string& text) {
  std::vector<CsvRow> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    CsvRow row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.fields.push_back(field);
    if (line.back() == ',') row.fields.push_back("");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("keys derive reports the frozen sub-key seeds") {
  const RunResult r = run_cli("keys derive --key-file " + key_file() + " --n 3 --m 1");
  REQUIRE(r.exit_code == 0);
  const json report = parse_report(r.output);
  CHECK(report["kq_seed"] == "0x145f6d74893398a1");
  CHECK(report["kt_seed"] == "0x145f707489339dba");
  CHECK(report["key_bits"] == 104);
  CHECK(report["s_q"] == json::array({3, 0, 1}));
  CHECK(report["s_t"] == json::array({2, 3, 2, 4}));
}

TEST_CASE("encode reproduces the golden codeword file") {
  const std::string out = path_of("golden.cw");
  const RunResult r = run_cli("encode --key-file " + key_file() +
                              " --message 0 --n 3 --out " + out);
  REQUIRE(r.exit_code == 0);
  const json report = parse_report(r.output);
  CHECK(report["n"] == 3);
  CHECK(report["m"] == 1);
  CHECK(report["s_q_length"] == 3);
  CHECK(report["s_t_length"] == 4);

  const std::string golden = read_file(std::string(QSAC_GOLDEN_DIR) + "/codeword_n3_m1.txt");
  CHECK(read_file(out) == golden);
}

TEST_CASE("encode rejects bad usage") {
  CHECK(run_cli("encode --key-file " + key_file() + " --message '' --n 3 --out " +
                path_of("x.cw"))
            .exit_code == 2);
  CHECK(run_cli("encode --key-file " + key_file() + " --message 0 --n 0 --out " +
                path_of("x.cw"))
            .exit_code == 2);
  CHECK(run_cli("encode --key-file " + key_file() + " --message 012 --n 3 --out " +
                path_of("x.cw"))
            .exit_code == 2);
  CHECK(run_cli("encode --key-file " + key_file() + " --message 0 --n 25 --out " +
                path_of("x.cw"))
            .exit_code == 2);
}

TEST_CASE("honest encode-verify pipeline authenticates") {
  const std::string cw = path_of("honest.cw");
  REQUIRE(run_cli("encode --key-file " + key_file() + " --message bell --n 4 --out " + cw)
              .exit_code == 0);
  const RunResult r =
      run_cli("verify --key-file " + key_file() + " --codeword " + cw + " --seed 9");
  CHECK(r.exit_code == 0);
  const json report = parse_report(r.output);
  CHECK(report["authenticated"] == true);
  CHECK(report["mismatched_check_indices"].empty());
  CHECK(report["records"].size() == 4);
}

TEST_CASE("a flipped amplitude sign is caught") {
  const std::string cw = path_of("flipped.cw");
  REQUIRE(run_cli("encode --key-file " + key_file() + " --message 0 --n 3 --out " + cw)
              .exit_code == 0);
  std::string text = read_file(cw);
  const auto pos = text.find("0110 0.7071067811865476");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 23, "0110 -0.7071067811865476");
  write_file(cw, text);

  // this file is the honest codeword with a relative sign flip, which the
  // exact projection oracle scores as certain rejection
  const qsac::QsacCodeword tampered = qsac::read_codeword_file(cw);
  const qsac::Key key = qsac::Key::from_hex(kTestKeyHex);
  CHECK(qsac::exact_pass_probability(tampered, key) == doctest::Approx(0.0));

  for (int seed = 0; seed < 5; ++seed) {
    const RunResult r = run_cli("verify --key-file " + key_file() + " --codeword " + cw +
                                " --seed " + std::to_string(seed));
    CHECK(r.exit_code == 1);
    CHECK(parse_report(r.output)["authenticated"] == false);
  }
}

TEST_CASE("malformed inputs exit with the parse-error status") {
  const std::string cw = path_of("trunc.cw");
  REQUIRE(run_cli("encode --key-file " + key_file() + " --message 0 --n 3 --out " + cw)
              .exit_code == 0);
  std::string text = read_file(cw);
  write_file(cw, text.substr(0, text.size() / 2));
  CHECK(run_cli("verify --key-file " + key_file() + " --codeword " + cw + " --seed 1")
            .exit_code == 3);

  const std::string bad_key = path_of("bad.hex");
  write_file(bad_key, "abc\n");  // odd digit count
  CHECK(run_cli("verify --key-file " + bad_key + " --codeword " + cw + " --seed 1")
            .exit_code == 3);
  CHECK(run_cli("verify --key-file " + key_file() + " --codeword " + path_of("nope.cw") +
                " --seed 1")
            .exit_code == 3);
}

TEST_CASE("attack applies a transit channel to a codeword file") {
  const std::string cw = path_of("attackee.cw");
  REQUIRE(run_cli("encode --key-file " + key_file() + " --message 0 --n 3 --out " + cw)
              .exit_code == 0);

  const std::string config = path_of("xflip.json");
  write_file(config, R"({"kind":"PauliTamper","positions":[1],"pauli":"X"})");
  const std::string out = path_of("attacked.cw");
  const RunResult r = run_cli("attack --codeword " + cw + " --config " + config +
                              " --seed 3 --out " + out);
  REQUIRE(r.exit_code == 0);

  // X on position 1 of the golden codeword never passes
  CHECK(run_cli("verify --key-file " + key_file() + " --codeword " + out + " --seed 11")
            .exit_code == 1);

  const std::string sub_config = path_of("sub.json");
  write_file(sub_config, R"({"kind":"CheckSubstitution","positions":{"random":1}})");
  CHECK(run_cli("attack --codeword " + cw + " --config " + sub_config + " --seed 3 --out " +
                path_of("x.cw"))
            .exit_code == 2);
}

TEST_CASE("substitution sweep reproduces the (1/3)^j law") {
  const std::string csv_path = path_of("sweep.csv");
  const std::string config = path_of("sweep.json");
  write_file(config, std::string(R"({
    "n": 8, "m": 2,
    "attack": {"kind": "CheckSubstitution", "positions": {"random": 1}},
    "trials": 30000,
    "seed": 424242,
    "key": ")") + kTestKeyHex + R"(",
    "sweep": {"j": [1, 2, 3]},
    "output_path": ")" + csv_path + R"("
  })");

  REQUIRE(run_cli("sweep --config " + config).exit_code == 0);
  const std::string csv = read_file(csv_path);
  const auto rows = parse_csv(csv);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].fields == std::vector<std::string>{"n", "m", "attack", "j", "trials", "seed",
                                                   "pass_rate", "ci95", "predicted"});
  const double expected[3] = {1.0 / 3.0, 1.0 / 9.0, 1.0 / 27.0};
  for (int i = 0; i < 3; ++i) {
    const CsvRow& row = rows[static_cast<std::size_t>(i + 1)];
    REQUIRE(row.fields.size() == 9);
    CHECK(row.fields[0] == "8");
    CHECK(row.fields[2] == "CheckSubstitution");
    CHECK(row.fields[3] == std::to_string(i + 1));
    const double rate = qsac::parse_double(row.fields[6]);
    const double ci95 = qsac::parse_double(row.fields[7]);
    const double predicted = qsac::parse_double(row.fields[8]);
    CHECK(std::abs(predicted - expected[i]) < 1e-12);
    CHECK(std::abs(rate - predicted) <= ci95);
  }

  SUBCASE("identical seeds give byte-identical CSV output") {
    fs::remove(csv_path);
    REQUIRE(run_cli("sweep --config " + config).exit_code == 0);
    CHECK(read_file(csv_path) == csv);
  }
}

TEST_CASE("impersonation acceptance falls with the check length") {
  const std::string csv_path = path_of("impersonation.csv");
  const std::string config = path_of("impersonation.json");
  write_file(config, std::string(R"({
    "n": 4, "m": 2,
    "attack": {"kind": "Impersonation"},
    "trials": 2000,
    "seed": 99,
    "key": ")") + kTestKeyHex + R"(",
    "sweep": {"n": [4, 8, 12]},
    "output_path": ")" + csv_path + R"("
  })");
  REQUIRE(run_cli("sweep --config " + config).exit_code == 0);
  const auto rows = parse_csv(read_file(csv_path));
  REQUIRE(rows.size() == 4);
  const double r4 = qsac::parse_double(rows[1].fields[6]);
  const double r8 = qsac::parse_double(rows[2].fields[6]);
  const double r12 = qsac::parse_double(rows[3].fields[6]);
  CHECK(r4 > r8);
  CHECK(r8 > r12);
  CHECK(rows[1].fields[8] == "");  // no closed-form prediction attached
}

TEST_CASE("sweep rejects invalid configs with a field diagnostic") {
  const std::string config = path_of("bad_trials.json");
  write_file(config, std::string(R"({
    "n": 4, "m": 1,
    "attack": {"kind": "CheckSubstitution", "positions": {"random": 1}},
    "trials": 0, "seed": 1, "key": ")") + kTestKeyHex + R"("})");
  const RunResult r = run_cli("sweep --config " + config);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("trials") != std::string::npos);

  const std::string not_json = path_of("not.json");
  write_file(not_json, "this is not json");
  CHECK(run_cli("sweep --config " + not_json).exit_code == 3);

  const std::string keyless = path_of("keyless.json");
  write_file(keyless, R"({
    "n": 4, "m": 1,
    "attack": {"kind": "CheckSubstitution", "positions": {"random": 1}},
    "trials": 10, "seed": 1})");
  const RunResult rk = run_cli("sweep --config " + keyless);
  CHECK(rk.exit_code == 2);
  CHECK(rk.output.find("key") != std::string::npos);
}

TEST_CASE("qsdc runs an honest authenticated session") {
  const std::string transcript_path = path_of("session.jsonl");
  const RunResult r = run_cli("qsdc --key-file " + key_file() +
                              " --bits 1001 --n 6 --seed 5 --transcript " + transcript_path);
  REQUIRE(r.exit_code == 0);
  const json report = parse_report(r.output);
  CHECK(report["authenticated"] == true);
  CHECK(report["sent_bits"] == "1001");
  CHECK(report["received_bits"] == "1001");
  CHECK(report["transcript_path"] == transcript_path);

  std::istringstream lines(read_file(transcript_path));
  std::string line;
  int transmissions = 0;
  while (std::getline(lines, line)) {
    const json rec = json::parse(line);
    if (rec["action"] == "transmit_codeword") ++transmissions;
  }
  CHECK(transmissions == 1);
}

TEST_CASE("qsdc under single-symbol substitution aborts about two thirds of sessions") {
  const std::string config = path_of("qsdc_attack.json");
  write_file(config, R"({"kind":"CheckSubstitution","positions":{"random":1}})");
  const RunResult r = run_cli("qsdc --key-file " + key_file() +
                              " --bits 10 --n 8 --seed 31337 --repeat 1000 --config " + config);
  REQUIRE(r.exit_code == 0);
  const json report = parse_report(r.output);
  CHECK(report["repeat"] == 1000);
  const double abort_rate = report["abort_rate"].get<double>();
  CHECK(std::abs(abort_rate - 2.0 / 3.0) <= 0.045);  // 3 sigma at 1000 sessions
}

TEST_CASE("qsdc usage errors") {
  CHECK(run_cli("qsdc --key-file " + key_file() + " --bits 101 --n 4 --seed 1").exit_code == 2);
  CHECK(run_cli("qsdc --key-file " + key_file() + " --bits 10a2 --n 4 --seed 1").exit_code == 2);
  CHECK(run_cli("qsdc --key-file " + key_file() + " --bits 10 --n 4").exit_code == 2);  // no seed
}

TEST_CASE("top-level usage errors") {
  CHECK(run_cli("").exit_code == 2);
  CHECK(run_cli("frobnicate").exit_code == 2);
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("verify --help").exit_code == 0);
}
