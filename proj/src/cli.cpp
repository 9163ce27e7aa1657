#include "qht/cli.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qht/binning.hpp"
#include "qht/checks.hpp"
#include "qht/csv.hpp"
#include "qht/divergence.hpp"
#include "qht/exponents.hpp"
#include "qht/np_testing.hpp"
#include "qht/pair_file.hpp"

namespace qht {

namespace {

struct Config {
  std::string pair;
  std::vector<double> alphas;
  std::vector<double> rs;
  std::vector<double> kappas;
  int k = 10;
  std::vector<int> n_schedule;
  std::string engine = "auto";
  double tol = 1e-6;
  std::uint64_t seed = 1;
  std::string out;
  std::string suite = "all";
  std::string fixture;
  std::string units = "nats";

  // Rates are computed in nats; bits only change how they are read and printed.
  double per_nat() const { return units == "bits" ? 1.0 / std::log(2.0) : 1.0; }
  double to_nats(double rate) const { return rate / per_nat(); }
  std::string rate(double nats) const { return format_sci(nats * per_nat()); }
};

void check_tol(double tol) {
  if (!(tol > 0.0 && tol <= 1e-2)) {
    throw Error(ErrorKind::TolOutOfRange, "--tol must lie in (0, 1e-2]");
  }
}

void cmd_divergence(const Config& c, std::ostream& os) {
  const StatePair pair = load_pair(c.pair).state_pair();
  const SandwichEvaluator ev(pair);
  CsvWriter csv(os, {"alpha", "sandwiched", "petz", "q_star"});
  for (double a : c.alphas) {
    const double lq = ev.log_q_star(a);
    const std::string petz = a <= 2.0 ? c.rate(petz_renyi(pair, a)) : "";
    csv.row({format_sci(a), c.rate(std::max(a / (a - 1.0) * lq, 0.0)), petz,
             format_sci(std::exp(lq))});
  }
}

void cmd_hoeffding(const Config& c, std::ostream& os) {
  check_tol(c.tol);
  const StatePair pair = load_pair(c.pair).state_pair();
  CsvWriter csv(os, {"r", "h_star", "arg_alpha", "truncation_bound", "alpha_max"});
  for (double r : c.rs) {
    const HoeffdingResult h = hoeffding_anti_divergence(pair, c.to_nats(r), c.tol);
    csv.row({format_sci(r), c.rate(h.value), format_sci(h.arg_alpha), c.rate(h.truncation_bound),
             format_sci(h.alpha_max)});
  }
}

void cmd_cutoff(const Config& c, std::ostream& os) {
  check_tol(c.tol);
  const StatePair pair = load_pair(c.pair).state_pair();
  CsvWriter csv(os, {"kappa", "cutoff_rate", "renyi_order", "sandwiched_at_order"});
  for (double kappa : c.kappas) {
    const double rate = cutoff_rate(pair, kappa, c.tol);
    const double order = 1.0 / (1.0 - kappa);
    csv.row({format_sci(kappa), c.rate(rate), format_sci(order),
             c.rate(sandwiched_renyi(pair, order))});
  }
}

void cmd_exponent(const Config& c, std::ostream& os) {
  const PairFile file = load_pair(c.pair);
  const Engine engine = parse_engine(c.engine);
  if (c.rs.size() != 1) throw Error(ErrorKind::InvalidArgument, "exponent takes a single --r");
  const double r = c.to_nats(c.rs.front());
  ConvergenceReport rep;
  if (file.is_classical() && (engine == Engine::Auto || engine == Engine::Classical)) {
    rep = convergence_sweep(file.classical_pair(), r, c.n_schedule);
  } else {
    rep = convergence_sweep(file.state_pair(), r, c.n_schedule, engine);
  }
  CsvWriter csv(os, {"n", "b_n", "gap_to_h_star", "engine"});
  for (const ExponentRecord& rec : rep.records) {
    csv.row({std::to_string(rec.n), c.rate(rec.b_n), c.rate(std::abs(rec.b_n - rep.h_star)),
             to_string(rec.engine)});
  }
}

void cmd_np(const Config& c, std::ostream& os) {
  const PairFile file = load_pair(c.pair);
  const StatePair pair = file.state_pair();
  const Engine requested = parse_engine(c.engine);
  if (c.rs.size() != 1) throw Error(ErrorKind::InvalidArgument, "np takes a single --r");
  const double r = c.to_nats(c.rs.front());
  CsvWriter csv(os, {"n", "log_budget", "log_success", "lambda_star", "duality_gap", "engine"});
  for (int n : c.n_schedule) {
    const Engine e = resolve_engine(pair, n, requested);
    const double log_mu = -n * r;
    NPResult res;
    switch (e) {
      case Engine::Classical:
        res = np_classical(classical_from_commuting(pair.rho(), pair.eta()), n, log_mu);
        break;
      case Engine::Pinched:
        res = np_classical(pinched_classical(pair, n), 1, log_mu);
        break;
      default:
        res = np_dense(tensor_power(pair.rho(), n), tensor_power(pair.eta(), n), log_mu);
        break;
    }
    csv.row({std::to_string(n), format_sci(res.log_budget), format_sci(res.log_success),
             format_sci(res.lambda_star), format_sci(res.duality_gap), to_string(e)});
  }
}

void cmd_bin(const Config& c, std::ostream& os) {
  const StatePair pair = load_pair(c.pair).state_pair();
  const BinnedDensity b = bin_density(pair.eta(), c.k);
  CsvWriter csv(os, {"k", "bin_count", "cardinality_bound", "alpha", "gap", "gap_bound"});
  for (const BinningGap& g : binning_divergence_gap(pair, c.k, c.alphas)) {
    csv.row({std::to_string(c.k), std::to_string(b.bin_count()),
             format_sci(b.cardinality_bound()), format_sci(g.alpha), c.rate(g.gap),
             c.rate(std::log1p(1.0 / c.k))});
  }
}

bool cmd_check(const Config& c, std::ostream& os) {
  const std::vector<CheckResult> results = run_check_suite(c.suite, c.seed);
  CsvWriter csv(os, {"suite", "assertion", "status", "worst", "tolerance"});
  bool ok = true;
  for (const CheckResult& r : results) {
    ok = ok && r.passed;
    csv.row({r.suite, r.name, r.passed ? "PASS" : "FAIL", format_sci(r.worst),
             format_sci(r.tolerance)});
  }
  return ok;
}

void cmd_fixture(const Config& c, std::ostream& os) { os << serialize_pair(builtin_fixture(c.fixture)); }

void emit(const Config& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error(ErrorKind::InvalidArgument, "cannot write '" + c.out + "'");
  f << text;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum hypothesis-testing exponents: divergences, optimal tests, cutoff rates"};
  app.require_subcommand(1);
  Config c;

  auto add_pair = [&](CLI::App* sub) {
    sub->add_option("--pair", c.pair, "Pair file or built-in fixture name")->required();
    sub->add_option("--out", c.out, "Write output to this file");
    sub->add_option("--units", c.units, "Units of rates and divergences, input and output")
        ->check(CLI::IsMember({"nats", "bits"}));
  };

  auto* div = app.add_subcommand("divergence", "Sandwiched and Petz Renyi divergences");
  add_pair(div);
  div->add_option("--alpha", c.alphas, "Comma-separated alpha values")->delimiter(',')->required();

  auto* hoef = app.add_subcommand("hoeffding", "Hoeffding anti-divergence H*_r");
  add_pair(hoef);
  hoef->add_option("--r", c.rs, "Comma-separated rates")->delimiter(',')->required();
  hoef->add_option("--tol", c.tol, "Optimization tolerance in (0, 1e-2]");

  auto* cut = app.add_subcommand("cutoff", "Generalized cutoff rates");
  add_pair(cut);
  cut->add_option("--kappa", c.kappas, "Comma-separated kappa values in (0, 1)")
      ->delimiter(',')
      ->required();
  cut->add_option("--tol", c.tol, "Optimization tolerance in (0, 1e-2]");

  auto* expo = app.add_subcommand("exponent", "Finite-n strong-converse exponents b_n");
  add_pair(expo);
  expo->add_option("--r", c.rs, "Rate r")->required();
  expo->add_option("--n-schedule", c.n_schedule, "Comma-separated ascending n values")
      ->delimiter(',')
      ->required();
  expo->add_option("--engine", c.engine, "auto, dense, classical or pinched")
      ->check(CLI::IsMember({"auto", "dense", "classical", "pinched"}));

  auto* np = app.add_subcommand("np", "Optimal tests at budget e^{-nr} with duality audit");
  add_pair(np);
  np->add_option("--r", c.rs, "Rate r")->required();
  np->add_option("--n-schedule", c.n_schedule, "Comma-separated n values")
      ->delimiter(',')
      ->required();
  np->add_option("--engine", c.engine, "auto, dense, classical or pinched")
      ->check(CLI::IsMember({"auto", "dense", "classical", "pinched"}));

  auto* bin = app.add_subcommand("bin", "Spectral binning of eta and divergence gaps");
  add_pair(bin);
  bin->add_option("--k", c.k, "Binning parameter, a = 1 + 1/k")->check(CLI::PositiveNumber);
  c.alphas = {1.5, 2.0, 4.0};
  bin->add_option("--alpha", c.alphas, "Comma-separated alpha values")->delimiter(',');

  auto* check = app.add_subcommand("check", "Run property suites");
  check->add_option("--suite", c.suite, "dpi, binning, pinching, np_duality, exponents, cutoff or all");
  check->add_option("--seed", c.seed, "Random seed");
  check->add_option("--out", c.out, "Write the report to this file");

  auto* fix = app.add_subcommand("fixture", "Print a built-in fixture as a pair file");
  fix->add_option("--name", c.fixture, "Fixture name")->required();
  fix->add_option("--out", c.out, "Write to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    std::ostringstream buf;
    int code = kExitOk;
    if (div->parsed()) cmd_divergence(c, buf);
    else if (hoef->parsed()) cmd_hoeffding(c, buf);
    else if (cut->parsed()) cmd_cutoff(c, buf);
    else if (expo->parsed()) cmd_exponent(c, buf);
    else if (np->parsed()) cmd_np(c, buf);
    else if (bin->parsed()) cmd_bin(c, buf);
    else if (check->parsed()) code = cmd_check(c, buf) ? kExitOk : kExitSuiteFailure;
    else if (fix->parsed()) cmd_fixture(c, buf);
    emit(c, buf.str(), out);
    return code;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_input_error(e.kind()) ? kExitInput : kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace qht
