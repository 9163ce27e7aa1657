#include "qht/types_pinch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include "qht/logmath.hpp"

namespace qht {

namespace {

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// Labels values by descending distinct value; neighbours in sorted order
// within `rel_tol` (relative) share a label.
std::vector<int> group_descending(const std::vector<double>& values, double rel_tol) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<int> labels(values.size(), 0);
  int label = 0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i > 0) {
      const double prev = values[order[i - 1]];
      const double cur = values[order[i]];
      if (prev - cur > rel_tol * std::max(std::abs(prev), std::abs(cur))) ++label;
    }
    labels[order[i]] = label;
  }
  return labels;
}

int label_count(const std::vector<int>& labels) {
  return labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
}

// Base-d digits of every index in [0, d^n), most significant first, matching
// the Kronecker ordering.
std::vector<std::vector<int>> tensor_digits(Index d, int n) {
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(d);
  std::vector<std::vector<int>> digits(total, std::vector<int>(static_cast<std::size_t>(n)));
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rest = idx;
    for (int l = n - 1; l >= 0; --l) {
      digits[idx][static_cast<std::size_t>(l)] = static_cast<int>(rest % static_cast<std::size_t>(d));
      rest /= static_cast<std::size_t>(d);
    }
  }
  return digits;
}

std::vector<double> tensor_values(const RealVector& v, const std::vector<std::vector<int>>& digits) {
  std::vector<double> out(digits.size());
  for (std::size_t i = 0; i < digits.size(); ++i) {
    double prod = 1.0;
    for (int dgt : digits[i]) prod *= v(dgt);
    out[i] = prod;
  }
  return out;
}

void require_cap(const StatePair& pair, int n, std::size_t cap) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  if (!fits_dense_cap(pair.dim(), n, cap)) {
    throw Error(ErrorKind::DenseCapExceeded, std::to_string(pair.dim()) + "^" +
                                                 std::to_string(n) + " exceeds dense cap " +
                                                 std::to_string(cap));
  }
}

}  // namespace

PinchingSpec::PinchingSpec(Matrix basis, std::vector<int> labels)
    : basis_(std::move(basis)), labels_(std::move(labels)) {
  count_ = static_cast<std::size_t>(label_count(labels_));
}

PinchingSpec::PinchingSpec(std::vector<HermitianOperator> projectors) {
  if (projectors.empty()) throw Error(ErrorKind::InvalidArgument, "pinching needs a projector");
  const Index d = projectors.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  std::vector<Matrix> columns;
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    const Matrix& p = projectors[j].matrix();
    if (p.rows() != d) throw Error(ErrorKind::DimMismatch, "projectors differ in dimension");
    const double idem = (p * p - p).cwiseAbs().maxCoeff();
    if (idem > kProjectorTol) {
      throw Error(ErrorKind::InvalidArgument,
                  "projector " + std::to_string(j) + " not idempotent (" + sci(idem) + ")");
    }
    for (std::size_t i = 0; i < j; ++i) {
      const double overlap = (projectors[i].matrix() * p).cwiseAbs().maxCoeff();
      if (overlap > kProjectorTol) {
        throw Error(ErrorKind::InvalidArgument, "projectors " + std::to_string(i) + " and " +
                                                    std::to_string(j) + " not orthogonal");
      }
    }
    sum += p;
  }
  const double completeness = (sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (completeness > kProjectorTol) {
    throw Error(ErrorKind::InvalidArgument, "projectors do not sum to identity (" +
                                                sci(completeness) + ")");
  }

  basis_ = Matrix(d, d);
  Index col = 0;
  for (std::size_t j = 0; j < projectors.size(); ++j) {
    const Eigensystem es = eigh(projectors[j]);
    for (Index i = 0; i < es.values.size() && es.values(i) > 0.5; ++i) {
      if (col >= d) throw Error(ErrorKind::InvalidArgument, "projector ranks exceed dimension");
      basis_.col(col++) = es.vectors.col(i);
      labels_.push_back(static_cast<int>(j));
    }
  }
  if (col != d) throw Error(ErrorKind::InvalidArgument, "projector ranks do not sum to dimension");
  count_ = projectors.size();
}

PinchingSpec PinchingSpec::from_basis(Matrix unitary, std::vector<int> labels) {
  const Index d = unitary.rows();
  if (unitary.cols() != d || static_cast<Index>(labels.size()) != d) {
    throw Error(ErrorKind::DimMismatch, "basis must be square with one label per column");
  }
  const double unit = (unitary.adjoint() * unitary - Matrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (unit > kProjectorTol) {
    throw Error(ErrorKind::InvalidArgument, "pinching basis is not unitary (" + sci(unit) + ")");
  }
  const int k = label_count(labels);
  std::vector<bool> used(static_cast<std::size_t>(std::max(k, 0)), false);
  for (int l : labels) {
    if (l < 0) throw Error(ErrorKind::InvalidArgument, "negative block label");
    used[static_cast<std::size_t>(l)] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw Error(ErrorKind::InvalidArgument, "block labels must cover 0..K-1");
  }
  return PinchingSpec(std::move(unitary), std::move(labels));
}

PinchingSpec PinchingSpec::computational(Index dim) {
  std::vector<int> labels(static_cast<std::size_t>(dim));
  std::iota(labels.begin(), labels.end(), 0);
  return PinchingSpec(Matrix::Identity(dim, dim), std::move(labels));
}

PinchingSpec PinchingSpec::trivial(Index dim) {
  return PinchingSpec(Matrix::Identity(dim, dim), std::vector<int>(static_cast<std::size_t>(dim), 0));
}

std::vector<HermitianOperator> PinchingSpec::projectors() const {
  std::vector<Matrix> acc(count_, Matrix::Zero(dim(), dim()));
  for (Index c = 0; c < dim(); ++c) {
    acc[static_cast<std::size_t>(labels_[static_cast<std::size_t>(c)])] +=
        basis_.col(c) * basis_.col(c).adjoint();
  }
  std::vector<HermitianOperator> out;
  out.reserve(count_);
  for (const Matrix& m : acc) out.push_back(HermitianOperator::from_computed(m));
  return out;
}

Matrix PinchingSpec::apply(const Matrix& x) const {
  if (x.rows() != dim() || x.cols() != dim()) {
    throw Error(ErrorKind::DimMismatch, "pinching of dim " + std::to_string(dim()) +
                                            " applied to dim " + std::to_string(x.rows()));
  }
  Matrix y = basis_.adjoint() * x * basis_;
  for (Index j = 0; j < dim(); ++j) {
    for (Index i = 0; i < dim(); ++i) {
      if (labels_[static_cast<std::size_t>(i)] != labels_[static_cast<std::size_t>(j)]) {
        y(i, j) = 0.0;
      }
    }
  }
  return basis_ * y * basis_.adjoint();
}

HermitianOperator pinch(const HermitianOperator& x, const PinchingSpec& spec) {
  return HermitianOperator::from_computed(spec.apply(x.matrix()));
}

DensityOperator pinch(const DensityOperator& x, const PinchingSpec& spec) {
  return DensityOperator(pinch(x.op(), spec));
}

double cp_violation(const PinchingSpec& spec, const HermitianOperator& x) {
  const Matrix y = static_cast<double>(spec.size()) * spec.apply(x.matrix()) - x.matrix();
  const RealVector ev = detail::eigvalsh_matrix(0.5 * (y + y.adjoint()));
  return std::max(0.0, -ev(ev.size() - 1));
}

double cp_index_check(const PinchingSpec& spec, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Index d = spec.dim();
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Matrix g(d, d);
    for (Index j = 0; j < d; ++j) {
      for (Index i = 0; i < d; ++i) g(i, j) = Complex(normal(rng), normal(rng));
    }
    Matrix x = g * g.adjoint();
    x /= x.trace().real();
    worst = std::max(worst, cp_violation(spec, HermitianOperator::from_computed(x)));
  }
  return worst;
}

int TypeClass::n() const { return std::accumulate(counts.begin(), counts.end(), 0); }

double composition_count(int K, int n) {
  if (K < 1 || n < 0) return 0.0;
  return std::round(std::exp(std::lgamma(n + K) - std::lgamma(n + 1) - std::lgamma(K)));
}

std::vector<TypeClass> enumerate_types(int K, int n, std::size_t cap) {
  if (K < 1 || n < 0) {
    throw Error(ErrorKind::InvalidArgument, "types need K >= 1 and n >= 0");
  }
  const double count = composition_count(K, n);
  if (count > static_cast<double>(cap)) {
    throw Error(ErrorKind::TypeCapExceeded, sci(count) + " types for K=" + std::to_string(K) +
                                                ", n=" + std::to_string(n) + " exceed cap " +
                                                std::to_string(cap));
  }
  std::vector<double> log_fact(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) log_fact[static_cast<std::size_t>(j)] = std::lgamma(j + 1.0);

  std::vector<TypeClass> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<int> counts(static_cast<std::size_t>(K), 0);
  // Lexicographic order: the first part runs from 0 up to n.
  auto recurse = [&](auto&& self, int pos, int remaining, double log_denom) -> void {
    if (pos == K - 1) {
      counts[static_cast<std::size_t>(pos)] = remaining;
      TypeClass t;
      t.counts = counts;
      t.log_multiplicity =
          log_fact[static_cast<std::size_t>(n)] - log_denom - log_fact[static_cast<std::size_t>(remaining)];
      out.push_back(std::move(t));
      return;
    }
    for (int j = 0; j <= remaining; ++j) {
      counts[static_cast<std::size_t>(pos)] = j;
      self(self, pos + 1, remaining - j, log_denom + log_fact[static_cast<std::size_t>(j)]);
    }
  };
  recurse(recurse, 0, n, 0.0);
  return out;
}

void weight_types(std::vector<TypeClass>& types, std::span<const double> log_weights) {
  for (TypeClass& t : types) {
    if (t.counts.size() != log_weights.size()) {
      throw Error(ErrorKind::DimMismatch, "type length differs from weight count");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < t.counts.size(); ++i) {
      if (t.counts[i] > 0) acc += t.counts[i] * log_weights[i];
    }
    t.log_eta_eigenvalue = acc;
  }
}

ClassicalPair::ClassicalPair(std::vector<double> log_p, std::vector<double> log_q)
    : log_p_(std::move(log_p)), log_q_(std::move(log_q)) {
  if (log_p_.empty() || log_p_.size() != log_q_.size()) {
    throw Error(ErrorKind::DimMismatch, "p and q must be non-empty and of equal length");
  }
  for (double lq : log_q_) {
    if (!std::isfinite(lq)) {
      throw Error(ErrorKind::InvalidDensity, "q must have full support");
    }
  }
  for (double lp : log_p_) {
    if (std::isnan(lp) || lp > 1e-12) {
      throw Error(ErrorKind::InvalidDensity, "p entries must be probabilities");
    }
  }
  const double zp = logsumexp(log_p_);
  const double zq = logsumexp(log_q_);
  if (std::abs(zp) > 1e-10 || std::abs(zq) > 1e-10) {
    throw Error(ErrorKind::InvalidDensity,
                "distributions must sum to 1 (log sums " + sci(zp) + ", " + sci(zq) + ")");
  }
}

ClassicalPair ClassicalPair::from_probabilities(std::span<const double> p,
                                                std::span<const double> q) {
  auto to_logs = [](std::span<const double> v) {
    std::vector<double> out;
    out.reserve(v.size());
    for (double x : v) {
      if (!(x >= 0.0)) throw Error(ErrorKind::InvalidDensity, "negative probability");
      out.push_back(x > 0.0 ? std::log(x) : kNegInf);
    }
    return out;
  };
  return ClassicalPair(to_logs(p), to_logs(q));
}

ClassicalPair ClassicalPair::from_logs(std::vector<double> log_p, std::vector<double> log_q) {
  return ClassicalPair(std::move(log_p), std::move(log_q));
}

std::vector<double> ClassicalPair::p() const {
  std::vector<double> out;
  for (double lp : log_p_) out.push_back(std::exp(lp));
  return out;
}

std::vector<double> ClassicalPair::q() const {
  std::vector<double> out;
  for (double lq : log_q_) out.push_back(std::exp(lq));
  return out;
}

StatePair ClassicalPair::to_state_pair() const {
  return StatePair(DensityOperator::diagonal(p()), DensityOperator::diagonal(q()));
}

PinchedPair pinched_pair_dense(const StatePair& pair, int n, std::size_t cap) {
  require_cap(pair, n, cap);
  const auto digits = tensor_digits(pair.dim(), n);
  const std::vector<int> labels =
      group_descending(tensor_values(pair.eta().eigenvalues(), digits), kEigenvalueGroupTol);

  Matrix basis = pair.eta().eigenvectors();
  for (int i = 1; i < n; ++i) basis = detail::kron(basis, pair.eta().eigenvectors());
  PinchingSpec spec = PinchingSpec::from_basis(std::move(basis), labels);

  DensityOperator rho_n = tensor_power(pair.rho(), n, cap);
  DensityOperator pinched = pinch(rho_n, spec);
  return PinchedPair{StatePair(std::move(pinched), tensor_power(pair.eta(), n, cap)),
                     std::move(spec)};
}

ClassicalPair pinched_classical(const StatePair& pair, int n, std::size_t cap) {
  require_cap(pair, n, cap);
  const auto digits = tensor_digits(pair.dim(), n);
  const std::vector<double> eta_vals = tensor_values(pair.eta().eigenvalues(), digits);
  const std::vector<int> labels = group_descending(eta_vals, kEigenvalueGroupTol);
  const int k = label_count(labels);

  const Matrix& v = pair.eta().eigenvectors();
  const Matrix rho_t = v.adjoint() * pair.rho().matrix() * v;

  std::vector<std::vector<std::size_t>> blocks(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    blocks[static_cast<std::size_t>(labels[i])].push_back(i);
  }

  std::vector<double> log_p;
  std::vector<double> log_q;
  log_p.reserve(labels.size());
  log_q.reserve(labels.size());
  for (const auto& idx : blocks) {
    const Index m = static_cast<Index>(idx.size());
    Matrix block(m, m);
    for (Index b = 0; b < m; ++b) {
      for (Index a = 0; a < m; ++a) {
        Complex prod(1.0, 0.0);
        const auto& da = digits[idx[static_cast<std::size_t>(a)]];
        const auto& db = digits[idx[static_cast<std::size_t>(b)]];
        for (int l = 0; l < n; ++l) {
          prod *= rho_t(da[static_cast<std::size_t>(l)], db[static_cast<std::size_t>(l)]);
        }
        block(a, b) = prod;
      }
    }
    const RealVector ev = detail::eigvalsh_matrix(0.5 * (block + block.adjoint()));
    double q_mean = 0.0;
    for (std::size_t i : idx) q_mean += eta_vals[i];
    q_mean /= static_cast<double>(m);
    for (Index i = 0; i < m; ++i) {
      const double p = ev(i);
      if (p < -static_cast<double>(n) * kNegativeEigenvalueTol) {
        throw Error(ErrorKind::InvalidDensity, "pinched block has negative eigenvalue " + sci(p));
      }
      log_p.push_back(p > 0.0 ? std::log(p) : kNegInf);
      log_q.push_back(std::log(q_mean));
    }
  }
  // Rounding in the per-entry products: renormalize the tiny residual.
  const double zp = logsumexp(log_p);
  const double zq = logsumexp(log_q);
  for (double& x : log_p) x -= zp;
  for (double& x : log_q) x -= zq;
  return ClassicalPair::from_logs(std::move(log_p), std::move(log_q));
}

ClassicalPair classical_from_commuting(const DensityOperator& rho, const DensityOperator& eta) {
  if (rho.dim() != eta.dim()) {
    throw Error(ErrorKind::DimMismatch, "commuting pair dimensions differ");
  }
  const double comm = commutator_norm(rho.matrix(), eta.matrix());
  if (comm > kCommuteTol) {
    throw Error(ErrorKind::NotCommuting, "commutator norm " + sci(comm) + " exceeds 1e-9");
  }
  // Diagonalize rho inside each eigenspace of eta; the result diagonalizes both.
  std::vector<double> eta_vals(eta.eigenvalues().data(),
                               eta.eigenvalues().data() + eta.eigenvalues().size());
  const std::vector<int> labels = group_descending(eta_vals, kEigenvalueGroupTol);
  const int k = label_count(labels);
  const Matrix rho_t = eta.eigenvectors().adjoint() * rho.matrix() * eta.eigenvectors();
  std::vector<double> p;
  std::vector<double> q;
  for (int g = 0; g < k; ++g) {
    std::vector<Index> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == g) idx.push_back(static_cast<Index>(i));
    }
    const Index m = static_cast<Index>(idx.size());
    Matrix block(m, m);
    double q_mean = 0.0;
    for (Index b = 0; b < m; ++b) {
      q_mean += eta_vals[static_cast<std::size_t>(idx[static_cast<std::size_t>(b)])];
      for (Index a = 0; a < m; ++a) {
        block(a, b) = rho_t(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(b)]);
      }
    }
    q_mean /= static_cast<double>(m);
    const RealVector ev = detail::eigvalsh_matrix(0.5 * (block + block.adjoint()));
    for (Index i = 0; i < m; ++i) {
      p.push_back(std::max(ev(i), 0.0));
      q.push_back(q_mean);
    }
  }
  const double sp = std::accumulate(p.begin(), p.end(), 0.0);
  const double sq = std::accumulate(q.begin(), q.end(), 0.0);
  for (double& x : p) x /= sp;
  for (double& x : q) x /= sq;
  return ClassicalPair::from_probabilities(p, q);
}

std::size_t distinct_tensor_eigenvalues(const DensityOperator& eta, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  // Distinct products are determined by the type over eta's distinct eigenvalues.
  std::vector<double> vals(eta.eigenvalues().data(),
                           eta.eigenvalues().data() + eta.eigenvalues().size());
  const std::vector<int> labels = group_descending(vals, kEigenvalueGroupTol);
  const int k = label_count(labels);
  std::vector<double> log_distinct(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    log_distinct[static_cast<std::size_t>(labels[i])] = std::log(vals[i]);
  }
  std::vector<TypeClass> types = enumerate_types(k, n);
  weight_types(types, log_distinct);
  std::vector<double> products;
  products.reserve(types.size());
  for (const TypeClass& t : types) products.push_back(std::exp(t.log_eta_eigenvalue));
  return static_cast<std::size_t>(label_count(group_descending(products, kEigenvalueGroupTol)));
}

}  // namespace qht
