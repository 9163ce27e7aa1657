#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "qht/cli.hpp"
#include "qht/csv.hpp"
#include "qht/pair_file.hpp"

using namespace qht;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qht");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qht_cli_test_" + name);
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_sci(2.0) == "2.00000000000e+00");
  CHECK(format_sci(-0.0) == "0.00000000000e+00");
  CHECK(format_sci(std::log(4.0 / 3.0)) == "2.87682072452e-01");
  CHECK(format_sci(1e-300) == "1.00000000000e-300");
  std::ostringstream out;
  CsvWriter w(out, {"a", "b"});
  w.row({"1", "2"});
  CHECK(out.str() == "a,b\n1,2\n");
  CHECK_THROWS_AS(w.row({"1"}), Error);
}

TEST_CASE("divergence output") {
  const Run r = run({"divergence", "--pair", "bern_half_quarter", "--alpha", "1.5,2"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == "alpha,sandwiched,petz,q_star");
  CHECK(fields(ls[2])[0] == "2.00000000000e+00");
  CHECK(fields(ls[2])[1] == "2.87682072452e-01");

  const Run eq = run({"divergence", "--pair", "equal_qubit", "--alpha", "2"});
  REQUIRE(eq.code == 0);
  CHECK(std::abs(std::stod(fields(lines(eq.out)[1])[1])) <= 1e-13);
}

TEST_CASE("CSV headers of every subcommand") {
  CHECK(lines(run({"hoeffding", "--pair", "bern_half_quarter", "--r", "0.5"}).out)[0] ==
        "r,h_star,arg_alpha,truncation_bound,alpha_max");
  CHECK(lines(run({"cutoff", "--pair", "bern_half_quarter", "--kappa", "0.5"}).out)[0] ==
        "kappa,cutoff_rate,renyi_order,sandwiched_at_order");
  CHECK(lines(run({"exponent", "--pair", "bern_half_quarter", "--r", "0.5", "--n-schedule", "1,2"})
                  .out)[0] == "n,b_n,gap_to_h_star,engine");
  CHECK(lines(run({"np", "--pair", "qubit_tilted", "--r", "0.3", "--n-schedule", "2"}).out)[0] ==
        "n,log_budget,log_success,lambda_star,duality_gap,engine");
  CHECK(lines(run({"bin", "--pair", "qubit_tilted", "--k", "10", "--alpha", "2"}).out)[0] ==
        "k,bin_count,cardinality_bound,alpha,gap,gap_bound");
}

TEST_CASE("numeric fields use the fixed format") {
  const Run r = run({"hoeffding", "--pair", "bern_half_quarter", "--r", "0.5,0.7"});
  REQUIRE(r.code == 0);
  const auto ls = lines(r.out);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    for (const std::string& f : fields(ls[i])) {
      if (f == "inf") continue;
      CHECK(f.find('e') != std::string::npos);
      CHECK(format_sci(std::stod(f)) == f);
    }
  }
}

TEST_CASE("exit codes") {
  CHECK(run({"divergence", "--pair", "/nonexistent/pair.json", "--alpha", "2"}).code == kExitInput);
  CHECK(run({"divergence", "--pair", "bern_half_quarter"}).code == kExitInput);
  CHECK(run({"divergence", "--pair", "bern_half_quarter", "--alpha", "0.5"}).code == kExitInput);
  CHECK(run({"exponent", "--pair", "bern_half_quarter", "--r", "0.5", "--n-schedule", "2",
             "--engine", "sparse"})
            .code == kExitInput);

  const std::filesystem::path bad = temp_file("bad_trace.json");
  {
    std::ofstream f(bad);
    f << R"({"name": "bad", "dim": 2, "classical": {"p": [0.51, 0.5], "q": [0.5, 0.5]}})";
  }
  const Run trace = run({"divergence", "--pair", bad.string(), "--alpha", "2"});
  CHECK(trace.code == kExitInput);
  std::filesystem::remove(bad);

  const std::filesystem::path garbled = temp_file("garbled.json");
  {
    std::ofstream f(garbled);
    f << "{not json";
  }
  CHECK(run({"divergence", "--pair", garbled.string(), "--alpha", "2"}).code == kExitInput);
  std::filesystem::remove(garbled);

  const Run cap = run({"exponent", "--pair", "qubit_tilted", "--r", "0.5", "--n-schedule", "13",
                       "--engine", "dense"});
  CHECK(cap.code == kExitNumerical);
  CHECK(cap.err.find("DenseCapExceeded") != std::string::npos);

  CHECK(run({"check", "--suite", "cutoff"}).code == kExitOk);
}

TEST_CASE("pair files round trip bit-identically") {
  for (const std::string& name : builtin_fixture_names()) {
    const PairFile f = builtin_fixture(name);
    const std::string text = serialize_pair(f);
    CHECK(serialize_pair(parse_pair(text)) == text);
    const PairFile back = parse_pair(text);
    if (f.rho) {
      CHECK((*back.rho - *f.rho).cwiseAbs().maxCoeff() == 0.0);
      CHECK((*back.eta - *f.eta).cwiseAbs().maxCoeff() == 0.0);
    } else {
      CHECK(*back.p == *f.p);
      CHECK(*back.q == *f.q);
    }
  }
}

TEST_CASE("shipped fixture files equal the built-ins") {
  const std::filesystem::path dir(QHT_FIXTURE_DIR);
  for (const std::string& name : builtin_fixture_names()) {
    const std::filesystem::path p = dir / (name + ".json");
    REQUIRE(std::filesystem::exists(p));
    CHECK(serialize_pair(read_pair_file(p.string())) == serialize_pair(builtin_fixture(name)));
    const Run by_name = run({"divergence", "--pair", name, "--alpha", "1.5,3"});
    const Run by_path = run({"divergence", "--pair", p.string(), "--alpha", "1.5,3"});
    CHECK(by_name.out == by_path.out);
  }
}

TEST_CASE("output is deterministic and --out writes the same bytes") {
  const std::vector<std::string> args{"exponent", "--pair", "qubit_tilted", "--r", "0.5",
                                      "--n-schedule", "1,2,4"};
  const Run a = run(args);
  const Run b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  const std::filesystem::path out = temp_file("exponent.csv");
  std::vector<std::string> with_out = args;
  with_out.push_back("--out");
  with_out.push_back(out.string());
  const Run c = run(with_out);
  CHECK(c.code == 0);
  CHECK(c.out.empty());
  CHECK(slurp(out) == a.out);
  std::filesystem::remove(out);

  const Run s1 = run({"check", "--suite", "pinching", "--seed", "5"});
  const Run s2 = run({"check", "--suite", "pinching", "--seed", "5"});
  CHECK(s1.out == s2.out);
}

TEST_CASE("bits are a presentation choice") {
  const Run bits = run({"divergence", "--pair", "bern_half_quarter", "--alpha", "2", "--units", "bits"});
  REQUIRE(bits.code == 0);
  CHECK(std::abs(std::stod(fields(lines(bits.out)[1])[1]) - std::log2(4.0 / 3.0)) <= 1e-11);

  // One bit per copy equals ln 2 nats per copy.
  const Run hb = run({"hoeffding", "--pair", "qubit_tilted", "--r", "1", "--units", "bits"});
  const Run hn = run({"hoeffding", "--pair", "qubit_tilted", "--r", "0.69314718055994531"});
  REQUIRE(hb.code == 0);
  REQUIRE(hn.code == 0);
  const double h_bits = std::stod(fields(lines(hb.out)[1])[1]);
  const double h_nats = std::stod(fields(lines(hn.out)[1])[1]);
  CHECK(std::abs(h_bits * std::log(2.0) - h_nats) <= 1e-9);
  CHECK(run({"divergence", "--pair", "bern_half_quarter", "--alpha", "2", "--units", "bans"}).code ==
        kExitInput);
}
