#include <cmath>
#include <vector>

#include "doctest.h"
#include "qht/binning.hpp"
#include "qht/pair_file.hpp"
#include "qht/sampling.hpp"

using namespace qht;

namespace {

bool sandwiched_by(const BinnedDensity& b, double tol) {
  const HermitianOperator lower = HermitianOperator::from_computed(b.original.matrix() / b.a);
  const HermitianOperator upper = HermitianOperator::from_computed(b.original.matrix() * b.a);
  return loewner_leq(lower, b.binned.op(), tol) && loewner_leq(b.binned.op(), upper, tol);
}

}  // namespace

TEST_CASE("single eigenvalue gives one bin") {
  const BinnedDensity b = bin_density(DensityOperator::maximally_mixed(2), 7);
  CHECK(b.bin_count() == 1);
  CHECK((b.binned.matrix() - b.original.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("three-level example with a merged bin") {
  const BinnedDensity b = bin_density(DensityOperator::diagonal({0.30, 0.31, 0.39}), 10);
  CHECK(b.a == doctest::Approx(1.1));
  CHECK(b.delta == doctest::Approx(0.30));
  REQUIRE(b.bin_count() == 2);
  const Matrix& m = b.binned.matrix();
  CHECK(m(0, 0).real() == doctest::Approx(0.305).epsilon(1e-14));
  CHECK(m(1, 1).real() == doctest::Approx(0.305).epsilon(1e-14));
  CHECK(m(2, 2).real() == doctest::Approx(0.39).epsilon(1e-14));
  CHECK(0.305 * 1.1 >= 0.31);
  CHECK(0.305 / 1.1 <= 0.30);
  CHECK(sandwiched_by(b, 1e-10));
}

TEST_CASE("two-level example: bins 0 and 14, output unchanged") {
  const BinnedDensity b = bin_density(DensityOperator::diagonal({0.2, 0.8}), 10);
  REQUIRE(b.bin_count() == 2);
  // 0.2 * 1.1^14 = 0.7595 <= 0.8 < 0.2 * 1.1^15 = 0.8354.
  CHECK(b.bins[0].index == 0);
  CHECK(b.bins[1].index == 14);
  CHECK((b.binned.matrix() - b.original.matrix()).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK(b.cardinality_bound() == doctest::Approx(500.0));
}

TEST_CASE("singular densities are rejected") {
  try {
    bin_density(DensityOperator::diagonal({1.0, 0.0}), 10);
    FAIL("expected SingularDensity");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SingularDensity);
  }
}

TEST_CASE("binning invariants on random states") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const Index dim = 2 + trial % 5;
    const DensityOperator d = random_density(dim, rng);
    for (int k : {1, 3, 10, 100}) {
      const BinnedDensity b = bin_density(d, k);
      CHECK(sandwiched_by(b, 1e-9));
      CHECK(std::abs(b.binned.matrix().trace().real() - 1.0) <= 1e-9);
      CHECK(static_cast<double>(b.bin_count()) <= b.cardinality_bound());

      Matrix sum = Matrix::Zero(dim, dim);
      int mult = 0;
      for (const Bin& bin : b.bins) {
        const Matrix& p = bin.projector.matrix();
        CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(commutator_norm(b.binned.matrix(), p) <= 1e-10);
        sum += p;
        mult += bin.multiplicity;
      }
      CHECK((sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= 1e-9);
      CHECK(mult == dim);

      const BinnedDensity again = bin_density(b.binned, k);
      CHECK((again.binned.matrix() - b.binned.matrix()).cwiseAbs().maxCoeff() <= 1e-10);
      CHECK(again.bin_count() == b.bin_count());
    }
  }
}

TEST_CASE("divergence gaps") {
  const std::vector<double> alphas{1.5, 2.0, 4.0};
  SUBCASE("equal states") {
    const StatePair p = builtin_fixture("equal_qubit").state_pair();
    for (int k : {1, 10, 100}) {
      for (const BinningGap& g : binning_divergence_gap(p, k, alphas)) {
        CHECK(g.gap <= std::log1p(1.0 / k) + 1e-9);
      }
    }
  }
  SUBCASE("qubit fixture at k = 100") {
    const StatePair p = builtin_fixture("qubit_tilted").state_pair();
    for (const BinningGap& g : binning_divergence_gap(p, 100, alphas)) {
      CHECK(g.gap <= std::log(1.01) + 1e-9);
    }
  }
  SUBCASE("k -> 10k shrinks the qubit gap at least fivefold") {
    const StatePair p = builtin_fixture("qubit_tilted").state_pair();
    auto max_gap = [&](int k) {
      double m = 0.0;
      for (const BinningGap& g : binning_divergence_gap(p, k, alphas)) m = std::max(m, g.gap);
      return m;
    };
    const double g10 = max_gap(10);
    const double g100 = max_gap(100);
    CHECK(g10 > 0.0);
    CHECK(g100 * 5.0 <= g10);
  }
  SUBCASE("three-level fixture against a reference value") {
    // Offline scipy evaluation with eta's spectrum replaced by (0.305, 0.305, 0.39).
    const StatePair p = builtin_fixture("trit_skewed").state_pair();
    const std::vector<double> a2{2.0};
    CHECK(std::abs(binning_divergence_gap(p, 10, a2)[0].gap - 0.0001834125151654875) <= 1e-12);
  }
  SUBCASE("random pairs") {
    Rng rng(23);
    for (int i = 0; i < 10; ++i) {
      const StatePair p(random_density(3, rng), random_density(3, rng));
      for (int k : {2, 10, 100}) {
        for (const BinningGap& g : binning_divergence_gap(p, k, alphas)) {
          CHECK(g.gap <= std::log1p(1.0 / k) + 1e-9);
        }
      }
    }
  }
}
