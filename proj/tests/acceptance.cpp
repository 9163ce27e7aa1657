// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "qht/binning.hpp"
#include "qht/divergence.hpp"
#include "qht/exponents.hpp"
#include "qht/np_testing.hpp"
#include "qht/pair_file.hpp"
#include "qht/sampling.hpp"
#include "qht/types_pinch.hpp"

using namespace qht;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;
};

void require(Outcome& o, bool ok, const std::string& what) {
  if (!ok) {
    o.passed = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += what;
  }
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

StatePair fixture(const std::string& name) { return builtin_fixture(name).state_pair(); }

std::vector<double> random_probs(Index d, Rng& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(static_cast<std::size_t>(d));
  double s = 0.0;
  for (double& x : p) s += (x = u(rng));
  for (double& x : p) x /= s;
  return p;
}

// 1. Strong-converse exponents of the Bernoulli pair approach H*_r.
Outcome bernoulli_convergence() {
  Outcome o;
  const ClassicalPair bern = builtin_fixture("bern_half_quarter").classical_pair();
  const double r = 0.5;
  const double h = hoeffding_anti_divergence(bern.to_state_pair(), r, 1e-8).value;
  double spread = 0.0;
  for (int ppd : {16, 32, 128}) {
    spread = std::max(spread,
                      std::abs(hoeffding_anti_divergence(bern.to_state_pair(), r, 1e-8, ppd).value - h));
  }
  require(o, spread <= 1e-6, "H* spread across grids " + fmt("%.3e", spread));

  const std::vector<int> schedule{50, 100, 200, 500, 1000};
  const ConvergenceReport rep = convergence_sweep(bern, r, schedule);
  const std::vector<double> gaps = rep.gaps();
  for (std::size_t i = 1; i < gaps.size(); ++i) {
    require(o, gaps[i] < gaps[i - 1], "gap not strictly decreasing at n=" + std::to_string(schedule[i]));
  }
  require(o, rep.final_gap <= 0.03, "final gap " + fmt("%.3e", rep.final_gap));
  require(o, rep.fitted_envelope_C <= 5.0, "envelope C " + fmt("%.3e", rep.fitted_envelope_C));
  o.detail = (o.passed ? "" : o.detail + "; ") + "H*=" + fmt("%.9f", h) + " final_gap=" +
             fmt("%.3e", rep.final_gap) + " C=" + fmt("%.3f", rep.fitted_envelope_C);
  return o;
}

// 2. Pinching loses at most K ln(n+1) of ln Q*_alpha.
Outcome pinched_sandwich() {
  Outcome o;
  const StatePair t = fixture("qubit_tilted");
  require(o, t.order_log() <= 1.5, "order_log " + fmt("%.3f", t.order_log()));
  double worst_low = 1e300, worst_high = -1e300;
  for (int n = 1; n <= 8; ++n) {
    const PinchedPair pp = pinched_pair_dense(t, n);
    const StatePair full(tensor_power(t.rho(), n), tensor_power(t.eta(), n));
    const double k = static_cast<double>(distinct_tensor_eigenvalues(t.eta(), n));
    for (double a : {1.5, 2.0, 3.0}) {
      const double diff = log_q_star(full, a) - log_q_star(pp.pair, a);
      worst_low = std::min(worst_low, diff);
      worst_high = std::max(worst_high, diff - k * std::log(n + 1.0));
    }
  }
  // Zero up to eigensolver rounding.
  require(o, worst_low >= -1e-12, "negative difference " + fmt("%.3e", worst_low));
  require(o, worst_high <= 1e-8, "upper bound exceeded by " + fmt("%.3e", worst_high));
  o.detail = (o.passed ? "" : o.detail + "; ") + "min_diff=" + fmt("%.3e", worst_low) +
             " max_excess=" + fmt("%.3e", worst_high);
  return o;
}

// 3. Spectral binning sandwich, divergence gap and bin count.
Outcome binning_bounds() {
  Outcome o;
  double worst_gap = -1e300;
  for (const char* name : {"qubit_tilted", "trit_skewed", "quart_mixed"}) {
    const StatePair p = fixture(name);
    for (int k : {10, 100}) {
      const BinnedDensity b = bin_density(p.eta(), k);
      const HermitianOperator lower = HermitianOperator::from_computed(b.original.matrix() / b.a);
      const HermitianOperator upper = HermitianOperator::from_computed(b.original.matrix() * b.a);
      require(o, loewner_leq(lower, b.binned.op(), 1e-9) && loewner_leq(b.binned.op(), upper, 1e-9),
              std::string("sandwich fails on ") + name);
      require(o, static_cast<double>(b.bin_count()) <= b.cardinality_bound(),
              std::string("bin count on ") + name);
      const std::vector<double> alphas{1.5, 2.0, 4.0};
      for (const BinningGap& g : binning_divergence_gap(p, k, alphas)) {
        worst_gap = std::max(worst_gap, g.gap - std::log1p(1.0 / k));
      }
    }
  }
  require(o, worst_gap <= 1e-9, "gap bound exceeded by " + fmt("%.3e", worst_gap));
  o.detail = (o.passed ? "" : o.detail + "; ") + "max(gap - ln(1+1/k))=" + fmt("%.3e", worst_gap);
  return o;
}

// 4. Strong duality of the dense solver and agreement with the classical one.
Outcome np_duality() {
  Outcome o;
  Rng rng(2024);
  std::uniform_real_distribution<double> lm(-4.0, -0.05);
  double worst_gap = 0.0, worst_budget = -1e300, worst_agree = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Index d = 2 + i % 5;
    const DensityOperator a = random_density(d, rng);
    const DensityOperator b = random_density(d, rng);
    const double log_mu = lm(rng);
    const NPResult r = np_dense(a, b, log_mu);
    worst_gap = std::max(worst_gap, r.duality_gap);
    worst_budget = std::max(worst_budget, r.log_type2 - log_mu);
  }
  struct Case {
    Index d;
    int n_max;
  };
  for (const Case c : {Case{2, 8}, Case{3, 5}}) {
    for (int rep = 0; rep < 3; ++rep) {
      const std::vector<double> p = random_probs(c.d, rng), q = random_probs(c.d, rng);
      const ClassicalPair cp = ClassicalPair::from_probabilities(p, q);
      const StatePair sp = cp.to_state_pair();
      for (int n = 1; n <= c.n_max; ++n) {
        const double log_mu = lm(rng) * n;
        const NPResult rc = np_classical(cp, n, log_mu);
        const NPResult rd = np_dense(tensor_power(sp.rho(), n), tensor_power(sp.eta(), n), log_mu);
        worst_agree = std::max(worst_agree, std::abs(rc.log_success - rd.log_success));
        worst_gap = std::max(worst_gap, std::max(rc.duality_gap, rd.duality_gap));
        worst_budget = std::max(worst_budget,
                                std::get<ClassicalTest>(rc.test).log_q_accepted() - log_mu);
        worst_budget = std::max(worst_budget, rd.log_type2 - log_mu);
      }
    }
  }
  require(o, worst_gap <= 1e-9, "duality gap " + fmt("%.3e", worst_gap));
  require(o, worst_agree <= 1e-9, "engine disagreement " + fmt("%.3e", worst_agree));
  // Budget feasibility up to the last bits of a log-domain sum.
  require(o, worst_budget <= 1e-12, "budget exceeded by " + fmt("%.3e", worst_budget));
  o.detail = (o.passed ? "" : o.detail + "; ") + "gap=" + fmt("%.3e", worst_gap) + " agree=" +
             fmt("%.3e", worst_agree) + " budget_excess=" + fmt("%.3e", worst_budget);
  return o;
}

// 5. Data processing for pinchings and the optimal-test surrogates.
Outcome dpi() {
  Outcome o;
  Rng rng(77);
  std::vector<double> alphas;
  for (int i = 0; i < 10; ++i) alphas.push_back(1.1 + 0.9 * i);
  double worst = -1e300;
  for (int i = 0; i < 20; ++i) {
    const Index d = 2 + i % 4;
    const StatePair p(random_density(d, rng), random_density(d, rng));
    const PinchingSpec spec = random_pinching(d, 1 + i % static_cast<int>(d), rng);
    const StatePair q(pinch(p.rho(), spec), pinch(p.eta(), spec));
    for (double a : alphas) worst = std::max(worst, sandwiched_renyi(q, a) - sandwiched_renyi(p, a));
  }
  require(o, worst <= 1e-9, "DPI violated by " + fmt("%.3e", worst));

  int surrogate_failures = 0;
  for (const std::string& name : builtin_fixture_names()) {
    const StatePair p = fixture(name);
    const Index d = p.dim();
    const PinchingSpec spec = random_pinching(d, std::min<int>(2, static_cast<int>(d)), rng);
    const DensityOperator tilde(HermitianOperator::from_computed(
        0.8 * p.eta().matrix() + 0.2 / static_cast<double>(d) * Matrix::Identity(d, d)));
    const double s = order_constant(p.eta(), tilde) + 1e-12;
    for (int n = 1; n <= 4; ++n) {
      if (!reverse_dpi_check(p, Channel(spec), n, -0.4 * n).holds()) ++surrogate_failures;
      if (!order_perturb_check(p.rho(), p.eta(), tilde, s, n, -0.4 * n).holds) ++surrogate_failures;
    }
  }
  require(o, surrogate_failures == 0, std::to_string(surrogate_failures) + " surrogate failures");
  o.detail = (o.passed ? "" : o.detail + "; ") + "max DPI excess=" + fmt("%.3e", worst);
  return o;
}

// 6. Cutoff rate equals D*_{1/(1-kappa)}.
Outcome cutoff_identity() {
  Outcome o;
  double worst = 0.0;
  for (const char* name : {"bern_half_quarter", "qubit_tilted"}) {
    const StatePair p = fixture(name);
    for (double kappa : {1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9}) {
      const double c = cutoff_rate(p, kappa, 1e-6);
      worst = std::max(worst, std::abs(c - sandwiched_renyi(p, 1.0 / (1.0 - kappa))));
    }
  }
  require(o, worst <= 1e-4, "identity off by " + fmt("%.3e", worst));
  const double half = cutoff_rate(fixture("bern_half_quarter"), 0.5, 1e-6);
  const double off = std::abs(half - std::log(4.0 / 3.0));
  require(o, off <= 1e-6, "ln(4/3) off by " + fmt("%.3e", off));
  o.detail = (o.passed ? "" : o.detail + "; ") + "max|C-D*|=" + fmt("%.3e", worst) +
             " |C_1/2-ln(4/3)|=" + fmt("%.3e", off);
  return o;
}

// 7. Equal states.
Outcome degenerate() {
  Outcome o;
  const StatePair eq = fixture("equal_qubit");
  double worst = 0.0;
  for (double a : {1.01, 1.5, 2.0, 10.0, 100.0}) worst = std::max(worst, std::abs(sandwiched_renyi(eq, a)));
  for (double r : {0.1, 0.5, 2.0}) {
    worst = std::max(worst, std::abs(hoeffding_anti_divergence(eq, r, 1e-6).value - r));
    for (int n : {1, 4, 10}) worst = std::max(worst, std::abs(finite_n_exponent(eq, n, r).b_n - r));
  }
  for (double kappa : {0.25, 0.5, 0.9}) worst = std::max(worst, std::abs(cutoff_rate(eq, kappa, 1e-6)));
  require(o, worst <= 1e-12, "deviation " + fmt("%.3e", worst));
  o.detail = (o.passed ? "" : o.detail + "; ") + "max deviation=" + fmt("%.3e", worst);
  return o;
}

// 8. cp-order index of random pinchings.
Outcome cp_index() {
  Outcome o;
  Rng rng(99);
  double worst = 0.0;
  for (int k : {2, 3, 4}) {
    for (Index d : {4, 5}) {
      const PinchingSpec spec = random_pinching(d, k, rng);
      worst = std::max(worst, cp_index_check(spec, 100, 1000 + static_cast<std::uint64_t>(k * 10 + d)));
    }
  }
  require(o, worst <= 1e-9, "violation " + fmt("%.3e", worst));
  o.detail = (o.passed ? "" : o.detail + "; ") + "max violation=" + fmt("%.3e", worst);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "classical strong-converse convergence", 10.0, bernoulli_convergence},
      {2, "pinched sandwich", 60.0, pinched_sandwich},
      {3, "binning bounds", 5.0, binning_bounds},
      {4, "NP duality and engine agreement", 30.0, np_duality},
      {5, "DPI and reverse-DPI surrogates", 30.0, dpi},
      {6, "cutoff identity", 10.0, cutoff_identity},
      {7, "equal-state identities", 1.0, degenerate},
      {8, "cp-order index", 5.0, cp_index},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.passed = false;
      o.detail += "; runtime over " + fmt("%.0f", c.budget_s) + " s";
    }
    if (!o.passed) ++failures;
    std::printf("%s [%d] %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
