#include "qht/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "qht/binning.hpp"
#include "qht/divergence.hpp"
#include "qht/exponents.hpp"
#include "qht/logmath.hpp"
#include "qht/np_testing.hpp"
#include "qht/pair_file.hpp"
#include "qht/sampling.hpp"
#include "qht/types_pinch.hpp"

namespace qht {

namespace {

const std::vector<double> kAlphaGrid{1.1, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 10.0, 32.0};

struct NamedPair {
  std::string name;
  StatePair pair;
};

std::vector<NamedPair> fixture_pairs() {
  std::vector<NamedPair> out;
  for (const std::string& name : builtin_fixture_names()) {
    out.push_back({name, builtin_fixture(name).state_pair()});
  }
  return out;
}

// Collects "worst value vs tolerance" assertions for one suite.
class Recorder {
 public:
  Recorder(std::string suite, std::vector<CheckResult>& out) : suite_(std::move(suite)), out_(out) {}

  // Passes when worst <= tol.
  void upper(const std::string& name, double worst, double tol) {
    CheckResult r;
    r.suite = suite_;
    r.name = name;
    r.worst = worst;
    r.tolerance = tol;
    r.passed = worst <= tol;
    std::ostringstream os;
    os.precision(3);
    os << "worst " << worst << " vs tol " << tol;
    r.detail = os.str();
    out_.push_back(std::move(r));
  }

  // Runs body; an exception fails the assertion instead of aborting the suite.
  void guarded(const std::string& name, double tol, const std::function<double()>& body) {
    try {
      upper(name, body(), tol);
    } catch (const std::exception& e) {
      CheckResult r;
      r.suite = suite_;
      r.name = name;
      r.passed = false;
      r.tolerance = tol;
      r.worst = std::numeric_limits<double>::infinity();
      r.detail = e.what();
      out_.push_back(std::move(r));
    }
  }

 private:
  std::string suite_;
  std::vector<CheckResult>& out_;
};

double sandwiched(const SandwichEvaluator& ev, double alpha) {
  return std::max(alpha / (alpha - 1.0) * ev.log_q_star(alpha), 0.0);
}

std::size_t distinct_count(const RealVector& v) {
  std::vector<double> vals(v.data(), v.data() + v.size());
  std::sort(vals.begin(), vals.end());
  std::size_t k = vals.empty() ? 0 : 1;
  for (std::size_t i = 1; i < vals.size(); ++i) {
    if (vals[i] - vals[i - 1] > kEigenvalueGroupTol * vals[i]) ++k;
  }
  return k;
}

void suite_dpi(std::vector<CheckResult>& out, std::uint64_t seed) {
  Recorder rec("dpi", out);
  const auto fixtures = fixture_pairs();
  Rng rng(seed);

  rec.guarded("sandwiched monotone in alpha", 1e-10, [&] {
    double worst = -1.0;
    for (const auto& f : fixtures) {
      worst = std::max(worst, sandwiched_curve(f.pair, kAlphaGrid).worst_decrease());
    }
    return worst;
  });
  rec.guarded("sandwiched below max-relative", 1e-9, [&] {
    double worst = -1.0;
    for (const auto& f : fixtures) {
      const SandwichEvaluator ev(f.pair);
      for (double a : kAlphaGrid) worst = std::max(worst, sandwiched(ev, a) - f.pair.order_log());
    }
    return worst;
  });
  rec.guarded("alpha=1024 within 0.01 of max-relative", 0.01, [&] {
    double worst = 0.0;
    for (const auto& f : fixtures) {
      if (f.pair.order_log() > 2.0) continue;
      worst = std::max(worst, f.pair.order_log() - sandwiched_renyi(f.pair, 1024.0));
    }
    return worst;
  });
  rec.guarded("pinching data processing", 1e-9, [&] {
    double worst = -1.0;
    for (const auto& f : fixtures) {
      const SandwichEvaluator ev(f.pair);
      for (int s = 0; s < 20; ++s) {
        const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(f.pair.dim()));
        const PinchingSpec spec = random_pinching(f.pair.dim(), k, rng);
        const SandwichEvaluator pinched(
            StatePair(pinch(f.pair.rho(), spec), pinch(f.pair.eta(), spec)));
        for (double a : kAlphaGrid) worst = std::max(worst, sandwiched(pinched, a) - sandwiched(ev, a));
      }
    }
    return worst;
  });
  rec.guarded("commuting pairs match the classical sum", 1e-10, [&] {
    const ClassicalPair cp = builtin_fixture("bern_half_quarter").classical_pair();
    const SandwichEvaluator ev(cp.to_state_pair());
    double worst = 0.0;
    for (double a : kAlphaGrid) {
      std::vector<double> terms;
      for (std::size_t i = 0; i < cp.n_outcomes(); ++i) {
        terms.push_back(a * cp.log_p()[i] + (1.0 - a) * cp.log_q()[i]);
      }
      const double classical = logsumexp(terms) / (a - 1.0);
      worst = std::max(worst, std::abs(classical - sandwiched(ev, a)));
    }
    return worst;
  });
  rec.guarded("Hoeffding bracket and dominance", 1e-9, [&] {
    double worst = 0.0;
    for (const auto& f : fixtures) {
      const HoeffdingSolver solver(f.pair, kMaxAlpha);
      const SandwichEvaluator ev(f.pair);
      for (double r : {0.05, 0.1, 0.2, 0.4, 0.8, 1.5}) {
        const double h = solver.solve(r, 1e-6).value;
        worst = std::max({worst, -h, h - r});
        if (r <= solver.umegaki()) worst = std::max(worst, std::abs(h));
        for (double a : kAlphaGrid) {
          worst = std::max(worst, (1.0 - 1.0 / a) * (r - sandwiched(ev, a)) - h);
        }
      }
    }
    return worst;
  });
  rec.guarded("reverse data processing (n <= 3)", 1e-9, [&] {
    double worst = -1.0;
    for (const auto& f : fixtures) {
      const int n_max = f.pair.dim() > 2 ? 2 : 3;
      for (int n = 1; n <= n_max; ++n) {
        const Channel dephase = PinchingSpec::computational(f.pair.dim());
        const Channel mix = random_pinching(f.pair.dim(), 2, rng);
        for (const Channel* ch : {&dephase, &mix}) {
          const ReverseDpiResult r = reverse_dpi_check(f.pair, *ch, n, -0.3 * n);
          worst = std::max(worst, r.success_processed - r.success_original);
        }
      }
    }
    return worst;
  });
  rec.guarded("order perturbation with binned eta (n <= 3)", 1e-9, [&] {
    double worst = -1.0;
    for (const auto& f : fixtures) {
      const BinnedDensity b = bin_density(f.pair.eta(), 10);
      const int n_max = f.pair.dim() > 2 ? 2 : 3;
      for (int n = 1; n <= n_max; ++n) {
        const OrderPerturbResult r = order_perturb_check(f.pair.rho(), f.pair.eta(), b.binned,
                                                         std::log(b.a), n, -0.4 * n);
        worst = std::max(worst, r.success_eta_tilde - r.success_eta);
      }
    }
    return worst;
  });
}

void suite_binning(std::vector<CheckResult>& out, std::uint64_t) {
  Recorder rec("binning", out);
  const auto fixtures = fixture_pairs();
  const std::vector<double> alphas{1.5, 2.0, 4.0};
  for (int k : {10, 100}) {
    const std::string tag = " (k=" + std::to_string(k) + ")";
    std::vector<DensityOperator> states;
    for (const auto& f : fixtures) {
      states.push_back(f.pair.rho());
      states.push_back(f.pair.eta());
    }
    rec.guarded("sandwich" + tag, 1e-9, [&] {
      double worst = 0.0;
      for (const auto& d : states) {
        const BinnedDensity b = bin_density(d, k);
        const Matrix lo = b.binned.matrix() - d.matrix() / b.a;
        const Matrix hi = b.a * d.matrix() - b.binned.matrix();
        worst = std::max(worst, -detail::eigvalsh_matrix(0.5 * (lo + lo.adjoint())).minCoeff());
        worst = std::max(worst, -detail::eigvalsh_matrix(0.5 * (hi + hi.adjoint())).minCoeff());
      }
      return worst;
    });
    rec.guarded("unit trace" + tag, 1e-9, [&] {
      double worst = 0.0;
      for (const auto& d : states) {
        worst = std::max(worst, std::abs(bin_density(d, k).binned.matrix().trace().real() - 1.0));
      }
      return worst;
    });
    rec.guarded("bin count over 2k/delta^2" + tag, 1.0, [&] {
      double worst = 0.0;
      for (const auto& d : states) {
        const BinnedDensity b = bin_density(d, k);
        worst = std::max(worst, static_cast<double>(b.bin_count()) / b.cardinality_bound());
      }
      return worst;
    });
    rec.guarded("idempotence" + tag, 1e-10, [&] {
      double worst = 0.0;
      for (const auto& d : states) {
        const BinnedDensity b = bin_density(d, k);
        const BinnedDensity bb = bin_density(b.binned, k);
        worst = std::max(worst, (bb.binned.matrix() - b.binned.matrix()).cwiseAbs().maxCoeff());
      }
      return worst;
    });
    rec.guarded("commutes with bin projectors" + tag, 1e-10, [&] {
      double worst = 0.0;
      for (const auto& d : states) {
        const BinnedDensity b = bin_density(d, k);
        for (const Bin& bin : b.bins) {
          worst = std::max(worst, commutator_norm(b.binned.matrix(), bin.projector.matrix()));
        }
      }
      return worst;
    });
    rec.guarded("divergence gap minus ln(1+1/k)" + tag, 1e-9, [&] {
      double worst = -1.0;
      for (const auto& f : fixtures) {
        for (const BinningGap& g : binning_divergence_gap(f.pair, k, alphas)) {
          worst = std::max(worst, g.gap - std::log1p(1.0 / k));
        }
      }
      return worst;
    });
  }
}

void suite_pinching(std::vector<CheckResult>& out, std::uint64_t seed) {
  Recorder rec("pinching", out);
  Rng rng(seed);
  rec.guarded("cp-order index K", 1e-9, [&] {
    double worst = 0.0;
    for (Index d = 2; d <= 5; ++d) {
      for (int k = 1; k <= std::min<int>(4, static_cast<int>(d)); ++k) {
        worst = std::max(worst, cp_index_check(random_pinching(d, k, rng), 100, rng()));
      }
    }
    return worst;
  });
  rec.guarded("type count within (n+1)^K", 0.0, [&] {
    double worst = -1.0;
    for (int k = 1; k <= 4; ++k) {
      for (int n : {1, 2, 3, 5, 10, 20}) {
        const double count = static_cast<double>(enumerate_types(k, n).size());
        worst = std::max(worst, count - std::pow(n + 1.0, k));
      }
    }
    return worst;
  });
  rec.guarded("type weights normalize", 1e-9, [&] {
    double worst = 0.0;
    for (const auto& f : fixture_pairs()) {
      const RealVector& ev = f.pair.eta().eigenvalues();
      std::vector<double> logs;
      for (Index i = 0; i < ev.size(); ++i) logs.push_back(std::log(ev(i)));
      for (int n : {1, 5, 20, 100}) {
        if (composition_count(static_cast<int>(logs.size()), n) > 2e5) continue;
        auto types = enumerate_types(static_cast<int>(logs.size()), n);
        weight_types(types, logs);
        std::vector<double> terms;
        for (const TypeClass& t : types) terms.push_back(t.log_multiplicity + t.log_eta_eigenvalue);
        worst = std::max(worst, std::abs(logsumexp(terms)));
      }
    }
    return worst;
  });
  for (const std::string name : {"qubit_tilted", "equal_qubit"}) {
    const StatePair pair = builtin_fixture(name).state_pair();
    rec.guarded("pinched sandwich " + name + " (n <= 6)", 1e-8, [&] {
      double worst = -1.0;
      for (int n = 1; n <= 6; ++n) {
        const PinchedPair pp = pinched_pair_dense(pair, n);
        const StatePair full(tensor_power(pair.rho(), n), tensor_power(pair.eta(), n));
        const SandwichEvaluator e_full(full);
        const SandwichEvaluator e_pinched(pp.pair);
        const double bound = static_cast<double>(pp.spec.size()) * std::log(n + 1.0);
        for (double a : {1.5, 2.0, 3.0}) {
          const double diff = e_full.log_q_star(a) - e_pinched.log_q_star(a);
          worst = std::max({worst, -diff, diff - bound});
        }
      }
      return worst;
    });
    rec.guarded("pinched pair commutes " + name, 1e-9, [&] {
      double worst = 0.0;
      for (int n = 1; n <= 6; ++n) {
        const PinchedPair pp = pinched_pair_dense(pair, n);
        worst = std::max(worst,
                         commutator_norm(pp.pair.rho().matrix(), pp.pair.eta().matrix()));
      }
      return worst;
    });
  }
}

void suite_np_duality(std::vector<CheckResult>& out, std::uint64_t seed) {
  Recorder rec("np_duality", out);
  Rng rng(seed);
  std::uniform_real_distribution<double> budget(-4.0, -0.05);
  rec.guarded("strong duality on random instances", 1e-9, [&] {
    double worst = 0.0;
    for (int i = 0; i < 30; ++i) {
      const Index d = 2 + static_cast<Index>(i % 5);
      const DensityOperator a = random_density(d, rng);
      const DensityOperator b = random_density(d, rng);
      worst = std::max(worst, np_dense(a, b, budget(rng)).duality_gap);
    }
    return worst;
  });
  rec.guarded("budget feasibility (log domain)", 1e-12, [&] {
    double worst = -1.0;
    for (int i = 0; i < 20; ++i) {
      const Index d = 2 + static_cast<Index>(i % 4);
      const double lm = budget(rng);
      const NPResult r = np_dense(random_density(d, rng), random_density(d, rng), lm);
      worst = std::max(worst, r.log_type2 - lm);
    }
    const ClassicalPair cp = builtin_fixture("bern_half_quarter").classical_pair();
    for (int n : {1, 5, 50, 500}) {
      const NPResult r = np_classical(cp, n, -0.5 * n);
      worst = std::max(worst, std::abs(r.log_type2 - r.log_budget));
    }
    return worst;
  });
  rec.guarded("budget monotonicity", 0.0, [&] {
    double worst = -1.0;
    for (const auto& f : fixture_pairs()) {
      double prev = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < 10; ++i) {
        const double lm = -3.0 + 0.3 * i;
        const double ls = np_dense(f.pair.rho(), f.pair.eta(), lm).log_success;
        worst = std::max(worst, prev - ls - 1e-12);
        prev = ls;
      }
    }
    return worst;
  });
  rec.guarded("classical and dense engines agree (n <= 6)", 1e-9, [&] {
    double worst = 0.0;
    std::vector<ClassicalPair> pairs{builtin_fixture("bern_half_quarter").classical_pair()};
    for (int i = 0; i < 2; ++i) {
      std::uniform_real_distribution<double> u(0.1, 1.0);
      std::vector<double> p(3), q(3);
      for (auto& x : p) x = u(rng);
      for (auto& x : q) x = u(rng);
      const double sp = p[0] + p[1] + p[2], sq = q[0] + q[1] + q[2];
      for (auto& x : p) x /= sp;
      for (auto& x : q) x /= sq;
      pairs.push_back(ClassicalPair::from_probabilities(p, q));
    }
    for (const ClassicalPair& cp : pairs) {
      const StatePair sp = cp.to_state_pair();
      for (int n = 1; n <= (cp.n_outcomes() > 2 ? 4 : 6); ++n) {
        const double lm = -0.3 * n;
        const double c = std::exp(np_classical(cp, n, lm).log_success);
        const double d =
            std::exp(np_dense(tensor_power(sp.rho(), n), tensor_power(sp.eta(), n), lm).log_success);
        worst = std::max(worst, std::abs(c - d));
      }
    }
    return worst;
  });
  rec.guarded("block-test soundness", 1e-12, [&] {
    double worst = -1.0;
    for (const auto& f : fixture_pairs()) {
      const double r = 0.2;
      for (int n0 : {1, 2}) {
        const DensityOperator rho0 = tensor_power(f.pair.rho(), n0);
        const DensityOperator eta0 = tensor_power(f.pair.eta(), n0);
        const NPResult np = np_dense(rho0, eta0, -r * n0);
        const TestOperator& t0 = std::get<TestOperator>(np.test);
        for (int n : {n0, 3, 7, 10}) {
          if (n < n0) continue;
          const BlockTest bt = block_test(t0, n0, n, r);
          const double eta_val = bt.log_value(eta0);
          worst = std::max(worst, eta_val - (-r * n) - bt.k * 1e-13);
          const double rho_val = bt.log_value(rho0);
          const double expected = bt.log_prefactor + bt.k * t0.log_expectation(rho0);
          worst = std::max(worst, std::abs(rho_val - expected));
        }
      }
    }
    return worst;
  });
}

void suite_exponents(std::vector<CheckResult>& out, std::uint64_t) {
  Recorder rec("exponents", out);
  const ClassicalPair bern = builtin_fixture("bern_half_quarter").classical_pair();
  const StatePair tilted = builtin_fixture("qubit_tilted").state_pair();
  const StatePair equal = builtin_fixture("equal_qubit").state_pair();

  rec.guarded("equal states give b_n = r", 1e-12, [&] {
    double worst = 0.0;
    for (int n = 1; n <= 10; ++n) {
      worst = std::max(worst, std::abs(finite_n_exponent(equal, n, 0.4).b_n - 0.4));
    }
    return worst;
  });
  rec.guarded("converse direction b_n >= H*_r - K ln(n+1)/n", 1e-6, [&] {
    double worst = -1.0;
    const std::vector<int> classical_n{1, 2, 5, 10, 50, 200};
    const ConvergenceReport cr = convergence_sweep(bern, 0.5, classical_n);
    for (const ExponentRecord& r : cr.records) {
      worst = std::max(worst, cr.h_star - 2.0 * std::log(r.n + 1.0) / r.n - r.b_n);
    }
    const double r_mid = 0.5 * (umegaki(tilted) + tilted.order_log());
    const std::vector<int> dense_n{1, 2, 4, 6, 8};
    const ConvergenceReport qr = convergence_sweep(tilted, r_mid, dense_n, Engine::Dense);
    const double k = static_cast<double>(distinct_count(tilted.eta().eigenvalues()));
    for (const ExponentRecord& r : qr.records) {
      worst = std::max(worst, qr.h_star - k * std::log(r.n + 1.0) / r.n - r.b_n);
    }
    return worst;
  });
  rec.guarded("achievability trend (classical)", 0.0, [&] {
    const std::vector<int> sched{50, 100, 200, 500};
    const auto gaps = convergence_sweep(bern, 0.5, sched).gaps();
    double worst = -1.0;
    for (std::size_t i = 1; i < gaps.size(); ++i) worst = std::max(worst, gaps[i] - gaps[i - 1]);
    return worst;
  });
  rec.guarded("H* scaling under tensor powers", 1e-8, [&] {
    double worst = 0.0;
    const StatePair bern_sp = bern.to_state_pair();
    for (const StatePair* p : {&tilted, &bern_sp}) {
      const double r = 0.5 * (umegaki(*p) + p->order_log());
      const double h1 = hoeffding_anti_divergence(*p, r, 1e-9).value;
      for (int n : {2, 3}) {
        const StatePair pn(tensor_power(p->rho(), n), tensor_power(p->eta(), n));
        const double hn = hoeffding_anti_divergence(pn, n * r, 1e-9).value;
        worst = std::max(worst, std::abs(hn - n * h1));
      }
    }
    return worst;
  });
  rec.guarded("no oscillation beyond the envelope", 1e-12, [&] {
    const std::vector<int> sched{20, 50, 100, 200, 500};
    const ConvergenceReport rep = convergence_sweep(bern, 0.5, sched);
    double worst = -1.0;
    for (std::size_t i = 0; i < rep.records.size(); ++i) {
      const int n = rep.records[i].n;
      const double env = rep.fitted_envelope_C * std::log(n + 1.0) / n;
      for (std::size_t j = i + 1; j < rep.records.size(); ++j) {
        worst = std::max(worst, rep.records[j].b_n - rep.records[i].b_n - env);
      }
    }
    return worst;
  });
}

void suite_cutoff(std::vector<CheckResult>& out, std::uint64_t) {
  Recorder rec("cutoff", out);
  for (const std::string name : {"bern_half_quarter", "qubit_tilted", "trit_skewed"}) {
    const StatePair pair = builtin_fixture(name).state_pair();
    rec.guarded("cutoff equals D*_{1/(1-kappa)} on " + name, 1e-4, [&] {
      double worst = 0.0;
      for (double kappa : {1.0 / 3.0, 0.5, 2.0 / 3.0, 0.9}) {
        const double c = cutoff_rate(pair, kappa, 1e-6);
        worst = std::max(worst, std::abs(c - sandwiched_renyi(pair, 1.0 / (1.0 - kappa))));
      }
      return worst;
    });
  }
  rec.guarded("cutoff vanishes for equal states", 1e-9, [&] {
    return std::abs(cutoff_rate(builtin_fixture("equal_qubit").state_pair(), 0.5, 1e-6));
  });
}

using SuiteFn = void (*)(std::vector<CheckResult>&, std::uint64_t);

const std::map<std::string, SuiteFn>& suites() {
  static const std::map<std::string, SuiteFn> table{
      {"dpi", suite_dpi},           {"binning", suite_binning},
      {"pinching", suite_pinching}, {"np_duality", suite_np_duality},
      {"exponents", suite_exponents}, {"cutoff", suite_cutoff},
  };
  return table;
}

}  // namespace

std::vector<std::string> check_suite_names() {
  return {"dpi", "binning", "pinching", "np_duality", "exponents", "cutoff"};
}

std::vector<CheckResult> run_check_suite(const std::string& suite, std::uint64_t seed) {
  std::vector<CheckResult> out;
  if (suite == "all") {
    for (const std::string& name : check_suite_names()) suites().at(name)(out, seed);
    return out;
  }
  const auto it = suites().find(suite);
  if (it == suites().end()) {
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "'");
  }
  it->second(out, seed);
  return out;
}

}  // namespace qht
