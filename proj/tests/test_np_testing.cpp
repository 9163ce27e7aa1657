#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "qht/logmath.hpp"
#include "qht/np_testing.hpp"
#include "qht/pair_file.hpp"
#include "qht/sampling.hpp"

using namespace qht;

namespace {

// Offline references: scipy linprog for the Bernoulli LP and scalar dual
// minimization (cross-checked by an SDP solver) for the qubit case.
constexpr double kBernN3Success = 0.5594490312430487;
constexpr double kTiltedN2Success = 0.9150552738123542;

ClassicalPair bern() {
  const std::vector<double> p{0.5, 0.5}, q{0.25, 0.75};
  return ClassicalPair::from_probabilities(p, q);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an exception");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("dense examples") {
  SUBCASE("equal states succeed with exactly the budget") {
    const DensityOperator a = DensityOperator::diagonal({0.4, 0.6});
    const NPResult r = np_dense(a, a, std::log(0.3));
    CHECK(std::exp(r.log_success) == doctest::Approx(0.3).epsilon(1e-10));
    CHECK(r.duality_gap <= 1e-9);
  }
  SUBCASE("Bernoulli at budget 1/4 accepts the likelier outcome") {
    const NPResult r = np_dense(DensityOperator::diagonal({0.5, 0.5}),
                                DensityOperator::diagonal({0.25, 0.75}), std::log(0.25));
    CHECK(std::exp(r.log_success) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(std::exp(r.log_type2) <= 0.25 + 1e-11);
  }
  SUBCASE("unit budget accepts everything") {
    const NPResult r = np_dense(DensityOperator::diagonal({0.5, 0.5}),
                                DensityOperator::diagonal({0.25, 0.75}), 0.0);
    CHECK(r.log_success == 0.0);
  }
  SUBCASE("quantum pair at n = 2") {
    const StatePair t = builtin_fixture("qubit_tilted").state_pair();
    const NPResult r = np_dense(tensor_power(t.rho(), 2), tensor_power(t.eta(), 2), -0.6);
    CHECK(std::abs(std::exp(r.log_success) - kTiltedN2Success) <= 1e-8);
    CHECK(r.duality_gap <= 1e-9);
    CHECK(r.log_type2 <= -0.6 + 1e-11);
  }
  CHECK(kind_of([] {
          np_dense(DensityOperator::maximally_mixed(2), DensityOperator::maximally_mixed(2), 0.1);
        }) == ErrorKind::InvalidArgument);
}

TEST_CASE("classical examples") {
  SUBCASE("Bernoulli n = 3 matches the LP reference") {
    const NPResult r = np_classical(bern(), 3, -1.5);
    CHECK(std::abs(std::exp(r.log_success) - kBernN3Success) <= 1e-10);
    CHECK(r.duality_gap <= 1e-9);
  }
  SUBCASE("identical distributions succeed with exactly the budget") {
    const std::vector<double> p{0.2, 0.3, 0.5};
    const ClassicalPair cp = ClassicalPair::from_probabilities(p, p);
    for (int n : {1, 5, 40}) {
      CHECK(np_classical(cp, n, -0.3 * n).log_success == doctest::Approx(-0.3 * n).epsilon(1e-10));
    }
  }
  SUBCASE("classical engine agrees with the dense engine") {
    const StatePair sp = bern().to_state_pair();
    for (int n : {1, 2, 3, 5, 8}) {
      for (double lm : {-0.1, -0.7, -2.0}) {
        const double c = np_classical(bern(), n, lm * n).log_success;
        const double d =
            np_dense(tensor_power(sp.rho(), n), tensor_power(sp.eta(), n), lm * n).log_success;
        CHECK(std::abs(c - d) <= 1e-9);
      }
    }
  }
  SUBCASE("type classes over likelihood-ratio groups") {
    const std::vector<double> p{0.25, 0.25, 0.5}, q{0.25, 0.25, 0.5};
    const LikelihoodTypes lt =
        classical_types(ClassicalPair::from_probabilities(p, q), 4);
    CHECK(lt.group_log_p.size() == 1);
    CHECK(lt.types.size() == 1);
  }
}

TEST_CASE("feasibility and monotonicity on random classical pairs") {
  Rng rng(41);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> p(3), q(3);
    for (int i = 0; i < 3; ++i) {
      p[i] = u(rng);
      q[i] = u(rng);
    }
    const double sp = p[0] + p[1] + p[2], sq = q[0] + q[1] + q[2];
    for (int i = 0; i < 3; ++i) {
      p[i] /= sp;
      q[i] /= sq;
    }
    const ClassicalPair cp = ClassicalPair::from_probabilities(p, q);
    double prev = -std::numeric_limits<double>::infinity();
    for (double lm : {-6.0, -3.0, -1.0, -0.2, 0.0}) {
      const NPResult r = np_classical(cp, 6, lm);
      const auto& test = std::get<ClassicalTest>(r.test);
      CHECK(test.log_q_accepted() <= lm + 1e-11);
      CHECK(r.log_success <= 0.0);
      CHECK(r.log_success >= lm - 1e-12);
      CHECK(r.log_success >= prev - 1e-12);
      prev = r.log_success;
    }
  }
}

TEST_CASE("feasibility and monotonicity on random quantum pairs") {
  Rng rng(43);
  for (int trial = 0; trial < 6; ++trial) {
    const DensityOperator a = random_density(3, rng);
    const DensityOperator b = random_density(3, rng);
    double prev = -std::numeric_limits<double>::infinity();
    for (double lm : {-3.0, -1.0, -0.3}) {
      const NPResult r = np_dense(a, b, lm);
      const auto& t = std::get<TestOperator>(r.test);
      CHECK(t.log_expectation(b) <= lm + 1e-10);
      CHECK(std::abs(t.log_expectation(a) - r.log_success) <= 1e-9);
      CHECK(r.duality_gap <= 1e-9);
      CHECK(r.log_success >= prev - 1e-12);
      prev = r.log_success;
    }
  }
}

TEST_CASE("scaling tests") {
  const TestOperator t(HermitianOperator::diagonal(Eigen::Vector2d(1.0, 0.25)));
  const TestOperator s = scale_test(t, -0.5);
  const DensityOperator d = DensityOperator::diagonal({0.5, 0.5});
  CHECK(s.log_expectation(d) == doctest::Approx(t.log_expectation(d) - 0.5).epsilon(1e-14));
  CHECK(kind_of([&] { scale_test(t, 0.1); }) == ErrorKind::PositiveLogFactor);
}

TEST_CASE("block tests") {
  const TestOperator t0(HermitianOperator::diagonal(Eigen::Vector2d(1.0, 0.0)));
  const BlockTest bt = block_test(t0, 3, 7, 0.2);
  CHECK(bt.k == 2);
  CHECK(bt.pad == 1);
  CHECK(bt.log_prefactor == doctest::Approx(-0.2).epsilon(1e-14));
  // (e^{-0.2})^{1} * x^2 at x = 0.5.
  CHECK(std::exp(bt.log_functional(std::log(0.5))) == doctest::Approx(std::exp(-0.2) * 0.25));
  CHECK(block_test(t0, 3, 9, 0.2).log_prefactor == 0.0);
  CHECK(kind_of([&] { block_test(t0, 4, 3, 0.2); }) == ErrorKind::BadBlockParams);
  CHECK(kind_of([&] { block_test(t0, 0, 3, 0.2); }) == ErrorKind::BadBlockParams);
  CHECK(kind_of([&] { block_test(t0, 1, 3, -1.0); }) == ErrorKind::BadBlockParams);
}

TEST_CASE("reverse data processing") {
  Rng rng(47);
  for (int trial = 0; trial < 5; ++trial) {
    const StatePair p(random_density(2, rng), random_density(2, rng));
    const PinchingSpec spec = random_pinching(2, 2, rng);
    for (int n : {1, 2, 3}) {
      CHECK(reverse_dpi_check(p, Channel(spec), n, -0.5 * n).holds());
    }
    const MixedUnitaryChannel mix({0.3, 0.7}, {Matrix::Identity(2, 2), random_unitary(2, rng)});
    CHECK(reverse_dpi_check(p, Channel(mix), 2, -1.0).holds());
  }
}

TEST_CASE("order perturbation") {
  const DensityOperator rho = DensityOperator::diagonal({0.6, 0.4});
  const DensityOperator eta = DensityOperator::diagonal({0.5, 0.5});
  const DensityOperator tilde = DensityOperator::diagonal({0.45, 0.55});
  const double s = std::log(0.5 / 0.45);
  for (int n : {1, 2, 3}) {
    const OrderPerturbResult r = order_perturb_check(rho, eta, tilde, s, n, -0.8 * n);
    CHECK(r.holds);
    CHECK(r.success_eta <= 1.0);
  }
  CHECK(kind_of([&] { order_perturb_check(rho, eta, tilde, 0.01, 1, -1.0); }) ==
        ErrorKind::OrderViolation);
}
