#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct run_result {
  int exit_code = -1;
  std::string output;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

run_result run_cli(const std::string& args) {
  const std::string tmp = "cli_test_output.tmp";
  const std::string cmd = std::string(STABOP_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
  const int status = std::system(cmd.c_str());
  run_result r;
  r.exit_code = WEXITSTATUS(status);
  r.output = slurp(tmp);
  std::remove(tmp.c_str());
  return r;
}

std::string golden(const std::string& name) {
  return slurp(std::string(STABOP_GOLDEN_DIR) + "/" + name);
}

void check_against_golden(const std::string& args, const std::string& golden_name) {
  const auto r = run_cli(args);
  CHECK(r.exit_code == 0);
  const std::string expected = golden(golden_name);
  REQUIRE(!expected.empty());
  CHECK(r.output == expected);
}

}  // namespace

TEST_CASE("golden outputs are frozen") {
  check_against_golden("spectrum -m S2xS3 --cutoff 6 --format csv",
                       "spectrum_s2xs3_cutoff6.csv");
  check_against_golden("describe -m S2xS3 --format json", "describe_s2xs3.json");
  check_against_golden("bounds -m S2xS3 --format json", "bounds_s2xs3.json");
  check_against_golden("nu -m \"S2(1/4)xS2(1)\" --format json", "nu_s2quarter_s2.json");
}

TEST_CASE("exit code contract") {
  CHECK(run_cli("describe -m S2xS3").exit_code == 0);
  CHECK(run_cli("").exit_code == 2);                       // missing subcommand
  CHECK(run_cli("describe").exit_code == 2);               // missing manifold
  CHECK(run_cli("describe -m T7").exit_code == 2);         // bad descriptor
  CHECK(run_cli("describe -m S2 --format yaml").exit_code == 2);
  CHECK(run_cli("nu -m S2 --no-such-flag").exit_code == 2);
  CHECK(run_cli("oracle -m S2xS3 --levels 1,0").exit_code == 2); // dim 5 rejected
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("verify --seed 3").exit_code == 0);
  CHECK(run_cli("verify --self-test-corrupt").exit_code == 1);
}

TEST_CASE("descriptor files parse identically to inline specs") {
  {
    std::ofstream out("cli_test_manifold.txt");
    out << "# two factors\n";
    out << "sphere 2 1/4\n";
    out << "sphere 2 1\n";
  }
  const auto from_file = run_cli("describe -m cli_test_manifold.txt --format json");
  const auto inline_form = run_cli("describe -m \"S2(1/4)xS2(1)\" --format json");
  CHECK(from_file.exit_code == 0);
  // reports differ only in the echoed manifold argument
  std::string a = from_file.output, b = inline_form.output;
  const auto strip = [](std::string& s) {
    const auto p = s.find("\"manifold\": \"");
    if (p != std::string::npos) s.erase(p, s.find('\n', p) - p);
  };
  strip(a);
  strip(b);
  CHECK(a == b);
  std::remove("cli_test_manifold.txt");
}

TEST_CASE("config file supplies defaults and flags override it") {
  {
    std::ofstream out("cli_test_config.json");
    out << "{\"manifold\": \"S2xS3\", \"cutoff\": \"3\", \"format\": \"csv\"}\n";
  }
  const auto r = run_cli("spectrum --config cli_test_config.json");
  CHECK(r.exit_code == 0);
  // cutoff 3 keeps totals 0, 2, 3 only
  CHECK(r.output.find("0;0,0;0,0,1") != std::string::npos);
  CHECK(r.output.find("0;1,0;3,3,4") != std::string::npos);
  CHECK(r.output.find(",5,") == std::string::npos);

  const auto r2 = run_cli("spectrum --config cli_test_config.json --cutoff 5");
  CHECK(r2.exit_code == 0);
  CHECK(r2.output.find("1;1,2;3,5,12") != std::string::npos);
  std::remove("cli_test_config.json");
}

TEST_CASE("sweep handles kernel transitions and empty grids") {
  const auto r = run_cli("sweep --family \"S2(@)xS2(1)\" --grid 1:3:3 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("1,S2(1)xS2(1),2,2,0") != std::string::npos);
  CHECK(r.output.find("2,S2(2)xS2(1),0,0,3") != std::string::npos);
  CHECK(r.output.find("violated") == std::string::npos);

  const auto empty = run_cli("sweep --family \"S2(@)xS2(1)\" --grid 1:3:0 --format csv");
  CHECK(empty.exit_code == 0);
  CHECK(empty.output.find("param,manifold") != std::string::npos);

  CHECK(run_cli("sweep --family \"S2xS2\" --grid 1:3:3").exit_code == 2); // no '@'
  CHECK(run_cli("sweep --family \"S2(@)\" --grid 1:2").exit_code == 2);   // bad grid
}

TEST_CASE("kernel subcommand reports the forced eigenvalue") {
  const auto r = run_cli("kernel -m S2xS3");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("kernel_dim       3") != std::string::npos);
  CHECK(r.output.find("kernel_lambda    2") != std::string::npos);
}

TEST_CASE("verify emits machine-readable results") {
  const auto r = run_cli("verify --seed 7 --format json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("\"pass\": true") != std::string::npos);
  CHECK(r.output.find("\"rows\"") != std::string::npos);
  CHECK(r.output.find("\"version\": \"0.1.0\"") != std::string::npos);
}

TEST_CASE("json sweep output is identical across thread counts") {
  const auto a =
      run_cli("sweep --family \"S2(@)xS3(1)\" --grid 1/4:4:6 --format json --threads 1");
  const auto b =
      run_cli("sweep --family \"S2(@)xS3(1)\" --grid 1/4:4:6 --format json --threads 4");
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(a.output == b.output);
}
