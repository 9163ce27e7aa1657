#include "qht/np_testing.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qht/logmath.hpp"

namespace qht {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void check_log_mu(double log_mu) {
  if (std::isnan(log_mu) || log_mu > 0.0) {
    throw Error(ErrorKind::InvalidArgument, "log budget " + num(log_mu) + " must be <= 0");
  }
}

// Spectral data of A - lambda B, with B's diagonal in that eigenbasis.
struct Split {
  Eigensystem es;
  RealVector b_diag;
  RealVector a_diag;
};

Split split_at(const Matrix& a, const Matrix& b, double lambda) {
  Split s;
  Matrix c = a - lambda * b;
  s.es = detail::eigh_matrix(0.5 * (c + c.adjoint()));
  const Matrix& v = s.es.vectors;
  s.b_diag = (v.adjoint() * b * v).diagonal().real();
  s.a_diag = (v.adjoint() * a * v).diagonal().real();
  return s;
}

double boundary_tol(double lambda) { return kBoundaryTol * std::max(1.0, lambda); }

// tr(B Pi_>(A - lambda B)). The sign test is strict so that the bisection
// pins lambda to rounding accuracy even when B has tiny weight on the boundary.
double beta_above(const Split& s) {
  double acc = 0.0;
  for (Index i = 0; i < s.es.values.size(); ++i) {
    if (s.es.values(i) > 0.0) acc += s.b_diag(i);
  }
  return acc;
}

double dual_value(const Split& s, double lambda, double mu) {
  double acc = lambda * mu;
  for (Index i = 0; i < s.es.values.size(); ++i) acc += std::max(s.es.values(i), 0.0);
  return acc;
}

double safe_log(double x) { return x > 0.0 ? std::log(x) : kNegInf; }

NPResult accept_all(const DensityOperator& a, double log_mu) {
  NPResult res;
  res.log_budget = log_mu;
  res.log_success = 0.0;
  res.lambda_star = 0.0;
  res.log_lambda_star = kNegInf;
  res.duality_gap = 0.0;
  res.log_type2 = 0.0;
  res.test = TestOperator(HermitianOperator::identity(a.dim()));
  return res;
}

}  // namespace

NPResult np_dense(const DensityOperator& a, const DensityOperator& b, double log_mu) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::DimMismatch, "np_dense operands differ in dimension");
  }
  check_log_mu(log_mu);
  if (log_mu == 0.0) return accept_all(a, log_mu);
  const double mu = std::exp(log_mu);
  const Matrix& am = a.matrix();
  const Matrix& bm = b.matrix();

  // Support of A alone already within budget: success 1 at lambda = 0.
  Split s0 = split_at(am, bm, 0.0);
  double lo = 0.0;
  double hi;
  if (beta_above(s0) <= mu) {
    hi = 0.0;
  } else {
    hi = b.min_eigenvalue() >= kFullRankTol ? std::exp(order_constant(a, b)) + 1.0 : 2.0;
    int doublings = 0;
    while (beta_above(split_at(am, bm, hi)) > mu) {
      lo = hi;
      hi *= 2.0;
      if (++doublings > 200) {
        throw Error(ErrorKind::BisectionFailure, "no finite multiplier meets the budget");
      }
    }
    for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (beta_above(split_at(am, bm, mid)) > mu) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
  }

  const double lambda = hi;
  const Split s = split_at(am, bm, lambda);
  const double tol = boundary_tol(lambda);
  double beta_gt = 0.0, beta_eq = 0.0, alpha_gt = 0.0, alpha_eq = 0.0;
  for (Index i = 0; i < s.es.values.size(); ++i) {
    const double c = s.es.values(i);
    if (c > tol) {
      beta_gt += s.b_diag(i);
      alpha_gt += s.a_diag(i);
    } else if (c >= -tol) {
      beta_eq += s.b_diag(i);
      alpha_eq += s.a_diag(i);
    }
  }
  double w = 0.0;
  if (beta_eq > 0.0) w = std::clamp((mu - beta_gt) / beta_eq, 0.0, 1.0);
  else if (alpha_eq > 0.0) w = 1.0;  // boundary directions outside the support of B are free

  Matrix t = Matrix::Zero(a.dim(), a.dim());
  for (Index i = 0; i < s.es.values.size(); ++i) {
    const double c = s.es.values(i);
    const double weight = c > tol ? 1.0 : (c >= -tol ? w : 0.0);
    if (weight > 0.0) t += weight * s.es.vectors.col(i) * s.es.vectors.col(i).adjoint();
  }
  const double primal = alpha_gt + w * alpha_eq;
  double dual = dual_value(s, lambda, mu);
  if (lo != hi) dual = std::min(dual, dual_value(split_at(am, bm, lo), lo, mu));

  NPResult res;
  res.log_budget = log_mu;
  res.log_success = safe_log(std::min(primal, 1.0));
  res.lambda_star = lambda;
  res.log_lambda_star = safe_log(lambda);
  res.duality_gap = std::abs(dual - primal);
  res.log_type2 = safe_log(beta_gt + w * beta_eq);
  res.test = TestOperator(HermitianOperator::from_computed(t));
  if (!(res.duality_gap <= kDualityTol)) {
    throw Error(ErrorKind::BisectionFailure,
                "duality gap " + num(res.duality_gap) + " exceeds 1e-9 at lambda " + num(lambda));
  }
  return res;
}

double ClassicalTest::log_q_accepted() const {
  if (accepts_all) return logsumexp(type_log_q);
  double acc = kNegInf;
  for (std::size_t i = 0; i < cut_index; ++i) acc = log_add(acc, type_log_q[sorted_type_ids[i]]);
  if (cut_index < sorted_type_ids.size() && boundary_weight > 0.0) {
    acc = log_add(acc, std::log(boundary_weight) + type_log_q[sorted_type_ids[cut_index]]);
  }
  return acc;
}

double ClassicalTest::log_p_accepted() const {
  if (accepts_all) return logsumexp(type_log_p);
  double acc = kNegInf;
  for (std::size_t i = 0; i < cut_index; ++i) acc = log_add(acc, type_log_p[sorted_type_ids[i]]);
  if (cut_index < sorted_type_ids.size() && boundary_weight > 0.0) {
    acc = log_add(acc, std::log(boundary_weight) + type_log_p[sorted_type_ids[cut_index]]);
  }
  return acc;
}

LikelihoodTypes classical_types(const ClassicalPair& pair, int n, std::size_t cap) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  const auto& lp = pair.log_p();
  const auto& lq = pair.log_q();
  std::vector<std::size_t> order(lp.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto llr = [&](std::size_t i) { return lp[i] - lq[i]; };
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return llr(x) > llr(y); });

  LikelihoodTypes out;
  double current = 0.0;
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    const std::size_t i = order[pos];
    const double l = llr(i);
    const bool same = pos > 0 && (l == current || std::abs(l - current) <= kLlrGroupTol);
    if (!same) {
      out.group_log_p.push_back(lp[i]);
      out.group_log_q.push_back(lq[i]);
      current = l;
    } else {
      out.group_log_p.back() = log_add(out.group_log_p.back(), lp[i]);
      out.group_log_q.back() = log_add(out.group_log_q.back(), lq[i]);
    }
  }
  out.types = enumerate_types(static_cast<int>(out.group_log_p.size()), n, cap);
  return out;
}

NPResult np_classical(const ClassicalPair& pair, int n, double log_mu, std::size_t cap) {
  check_log_mu(log_mu);
  const LikelihoodTypes lt = classical_types(pair, n, cap);
  const std::size_t count = lt.types.size();

  ClassicalTest test;
  test.type_log_p.resize(count);
  test.type_log_q.resize(count);
  std::vector<double> type_llr(count);
  for (std::size_t t = 0; t < count; ++t) {
    const auto& c = lt.types[t].counts;
    double sp = lt.types[t].log_multiplicity;
    double sq = lt.types[t].log_multiplicity;
    for (std::size_t g = 0; g < c.size(); ++g) {
      if (c[g] == 0) continue;
      sp += c[g] * lt.group_log_p[g];
      sq += c[g] * lt.group_log_q[g];
    }
    test.type_log_p[t] = sp;
    test.type_log_q[t] = sq;
    type_llr[t] = sp - sq;
  }
  test.sorted_type_ids.resize(count);
  std::iota(test.sorted_type_ids.begin(), test.sorted_type_ids.end(), std::size_t{0});
  std::stable_sort(test.sorted_type_ids.begin(), test.sorted_type_ids.end(),
                   [&](std::size_t x, std::size_t y) { return type_llr[x] > type_llr[y]; });

  NPResult res;
  res.log_budget = log_mu;

  double acc_q = kNegInf;
  double acc_p = kNegInf;
  std::size_t cut = 0;
  while (cut < count) {
    const std::size_t id = test.sorted_type_ids[cut];
    const double next = log_add(acc_q, test.type_log_q[id]);
    if (next > log_mu) break;
    acc_q = next;
    acc_p = log_add(acc_p, test.type_log_p[id]);
    ++cut;
  }
  test.cut_index = cut;

  if (cut == count) {
    test.accepts_all = true;
    res.log_success = std::min(acc_p, 0.0);
    res.lambda_star = 0.0;
    res.log_lambda_star = kNegInf;
    res.duality_gap = 0.0;
    res.log_type2 = acc_q;
    res.test = std::move(test);
    return res;
  }

  const std::size_t boundary = test.sorted_type_ids[cut];
  const double log_w = log_sub(log_mu, acc_q) - test.type_log_q[boundary];
  test.boundary_weight = std::clamp(std::exp(log_w), 0.0, 1.0);
  const double log_success =
      test.boundary_weight > 0.0 ? log_add(acc_p, std::log(test.boundary_weight) + test.type_log_p[boundary])
                                 : acc_p;
  res.log_success = std::min(log_success, 0.0);
  res.log_lambda_star = type_llr[boundary];
  res.lambda_star = std::exp(res.log_lambda_star);

  // Dual sum_t (P_t - lambda Q_t)_+ + lambda mu, evaluated relative to the primal
  // so that tiny masses at large n stay representable.
  const double ls = res.log_success;
  if (std::isfinite(ls) && std::isfinite(res.log_lambda_star)) {
    double rel = std::exp(res.log_lambda_star + log_mu - ls) - 1.0;
    for (std::size_t t = 0; t < count; ++t) {
      const double diff = std::exp(test.type_log_p[t] - ls) -
                          std::exp(res.log_lambda_star + test.type_log_q[t] - ls);
      if (diff > 0.0) rel += diff;
    }
    res.duality_gap = std::abs(rel) * std::exp(ls);
  }
  res.log_type2 = test.log_q_accepted();
  res.test = std::move(test);
  return res;
}

TestOperator scale_test(const TestOperator& t, double log_factor) {
  if (!(log_factor <= 0.0)) {
    throw Error(ErrorKind::PositiveLogFactor, "log factor " + num(log_factor) + " is positive");
  }
  return TestOperator(t.op(), t.log_scale() + log_factor);
}

double BlockTest::log_functional(double log_base) const {
  return log_prefactor + k * log_base;
}

double BlockTest::log_value(const DensityOperator& state_n0) const {
  return log_functional(t0.log_expectation(state_n0));
}

BlockTest block_test(const TestOperator& t0, int n0, int n, double r) {
  if (n0 < 1 || n < n0 || !(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::BadBlockParams, "need n >= n0 >= 1 and finite r >= 0 (n0=" +
                                               std::to_string(n0) + ", n=" + std::to_string(n) +
                                               ", r=" + num(r) + ")");
  }
  BlockTest bt{t0};
  bt.n0 = n0;
  bt.n = n;
  bt.k = n / n0;
  bt.pad = n - bt.k * n0;
  bt.r = r;
  bt.log_prefactor = bt.pad == 0 ? 0.0 : -r * bt.pad;
  return bt;
}

MixedUnitaryChannel::MixedUnitaryChannel(std::vector<double> weights, std::vector<Matrix> unitaries)
    : weights_(std::move(weights)), unitaries_(std::move(unitaries)) {
  if (weights_.empty() || weights_.size() != unitaries_.size()) {
    throw Error(ErrorKind::InvalidArgument, "mixed-unitary channel needs one weight per unitary");
  }
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0)) throw Error(ErrorKind::InvalidArgument, "negative channel weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    throw Error(ErrorKind::InvalidArgument, "channel weights sum to " + num(total));
  }
  const Index d = unitaries_.front().rows();
  for (const Matrix& u : unitaries_) {
    if (u.rows() != d || u.cols() != d) {
      throw Error(ErrorKind::DimMismatch, "channel unitaries differ in dimension");
    }
    const double err = (u.adjoint() * u - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (err > 1e-9) throw Error(ErrorKind::InvalidArgument, "channel operator is not unitary");
  }
}

Matrix MixedUnitaryChannel::apply(const Matrix& x) const {
  if (x.rows() != dim()) throw Error(ErrorKind::DimMismatch, "channel input dimension");
  Matrix out = Matrix::Zero(x.rows(), x.cols());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    out += weights_[i] * unitaries_[i] * x * unitaries_[i].adjoint();
  }
  return out;
}

DensityOperator apply_channel(const Channel& channel, const DensityOperator& d) {
  const Matrix out = std::visit([&](const auto& ch) { return ch.apply(d.matrix()); }, channel);
  return DensityOperator(HermitianOperator::from_computed(out));
}

ReverseDpiResult reverse_dpi_check(const StatePair& pair, const Channel& channel, int n,
                                   double log_mu, std::size_t cap) {
  const DensityOperator rho_c = apply_channel(channel, pair.rho());
  const DensityOperator eta_c = apply_channel(channel, pair.eta());
  const NPResult processed =
      np_dense(tensor_power(rho_c, n, cap), tensor_power(eta_c, n, cap), log_mu);
  const NPResult original =
      np_dense(tensor_power(pair.rho(), n, cap), tensor_power(pair.eta(), n, cap), log_mu);
  return {std::exp(processed.log_success), std::exp(original.log_success)};
}

OrderPerturbResult order_perturb_check(const DensityOperator& rho, const DensityOperator& eta,
                                       const DensityOperator& eta_tilde, double s, int n,
                                       double log_mu, std::size_t cap) {
  const Matrix scaled = std::exp(s) * eta_tilde.matrix();
  if (!loewner_leq(eta.op(), HermitianOperator::from_computed(scaled), 1e-9)) {
    throw Error(ErrorKind::OrderViolation, "eta <= e^s eta_tilde fails for s = " + num(s));
  }
  const DensityOperator rho_n = tensor_power(rho, n, cap);
  const NPResult with_eta =
      np_dense(rho_n, tensor_power(eta, n, cap), std::min(0.0, log_mu + n * s));
  const NPResult with_tilde = np_dense(rho_n, tensor_power(eta_tilde, n, cap), log_mu);
  OrderPerturbResult out;
  out.success_eta = std::exp(with_eta.log_success);
  out.success_eta_tilde = std::exp(with_tilde.log_success);
  out.holds = out.success_eta >= out.success_eta_tilde - 1e-9;
  return out;
}

}  // namespace qht
