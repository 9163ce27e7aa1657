#include "qht/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "golden.hpp"

namespace qht {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_sandwich_alpha(double alpha) {
  if (!(alpha > 1.0 && alpha <= kMaxAlpha)) {
    std::ostringstream os;
    os << "alpha = " << alpha << " outside (1, 1e6]";
    throw Error(ErrorKind::AlphaOutOfRange, os.str());
  }
}

void check_tol(double tol) {
  if (!(tol > 0.0 && tol <= 1e-2)) {
    std::ostringstream os;
    os << "tol = " << tol << " outside (0, 1e-2]";
    throw Error(ErrorKind::TolOutOfRange, os.str());
  }
}

Matrix in_basis(const Matrix& x, const Matrix& basis) {
  Matrix m = basis.adjoint() * x * basis;
  return 0.5 * (m + m.adjoint());
}

}  // namespace

SandwichEvaluator::SandwichEvaluator(const StatePair& pair)
    : eta_values_(pair.eta().eigenvalues()),
      rho_in_eta_basis_(in_basis(pair.rho().matrix(), pair.eta().eigenvectors())) {}

double SandwichEvaluator::log_q_star(double alpha) const {
  check_sandwich_alpha(alpha);
  const double s = (1.0 - alpha) / (2.0 * alpha);
  const Eigen::VectorXcd d =
      eta_values_.unaryExpr([s](double x) { return std::pow(x, s); }).cast<Complex>();
  Matrix m = d.asDiagonal() * rho_in_eta_basis_ * d.asDiagonal();
  const RealVector mu = detail::eigvalsh_matrix(m).cwiseMax(0.0);
  const double top = mu(0);
  double acc = 0.0;
  for (Index i = 0; i < mu.size(); ++i) {
    if (mu(i) > 0.0) acc += std::pow(mu(i) / top, alpha);
  }
  return std::log(top) + std::log(acc) / alpha;
}

double log_q_star(const StatePair& pair, double alpha) {
  return SandwichEvaluator(pair).log_q_star(alpha);
}

double q_star(const StatePair& pair, double alpha) { return std::exp(log_q_star(pair, alpha)); }

double sandwiched_renyi(const StatePair& pair, double alpha) {
  const double value = alpha / (alpha - 1.0) * log_q_star(pair, alpha);
  return std::max(value, 0.0);
}

double petz_renyi(const StatePair& pair, double alpha) {
  if (!((alpha > 0.0 && alpha < 1.0) || (alpha > 1.0 && alpha <= 2.0))) {
    std::ostringstream os;
    os << "Petz alpha = " << alpha << " outside (0,1) U (1,2]";
    throw Error(ErrorKind::AlphaOutOfRange, os.str());
  }
  const RealVector& p = pair.rho().eigenvalues();
  const RealVector& q = pair.eta().eigenvalues();
  const Matrix overlap = pair.rho().eigenvectors().adjoint() * pair.eta().eigenvectors();
  double acc = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) <= 0.0) continue;
    const double pa = std::pow(p(i), alpha);
    for (Index j = 0; j < q.size(); ++j) {
      acc += pa * std::pow(q(j), 1.0 - alpha) * std::norm(overlap(i, j));
    }
  }
  return std::max(std::log(acc) / (alpha - 1.0), 0.0);
}

double umegaki(const StatePair& pair) {
  const RealVector& p = pair.rho().eigenvalues();
  double entropy_term = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) entropy_term += p(i) * std::log(p(i));
  }
  const Matrix rho_eta = in_basis(pair.rho().matrix(), pair.eta().eigenvectors());
  const RealVector& q = pair.eta().eigenvalues();
  double cross_term = 0.0;
  for (Index j = 0; j < q.size(); ++j) cross_term += rho_eta(j, j).real() * std::log(q(j));
  return std::max(entropy_term - cross_term, 0.0);
}

double max_relative(const StatePair& pair) { return pair.order_log(); }

double DivergenceCurve::worst_decrease() const {
  double worst = -kInf;
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    worst = std::max(worst, values[i] - values[i + 1]);
  }
  return worst;
}

DivergenceCurve sandwiched_curve(const StatePair& pair, std::span<const double> alphas,
                                 std::string pair_id) {
  DivergenceCurve curve;
  curve.pair_id = std::move(pair_id);
  SandwichEvaluator eval(pair);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (i > 0 && !(alphas[i] > alphas[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "curve alphas must be strictly ascending");
    }
    const double a = alphas[i];
    curve.alphas.push_back(a);
    curve.values.push_back(std::max(a / (a - 1.0) * eval.log_q_star(a), 0.0));
  }
  return curve;
}

bool HoeffdingResult::at_limit() const { return std::isinf(arg_alpha); }

double hoeffding_alpha_max(double r, double tol) {
  return std::min(kMaxAlpha, std::max(64.0, r / tol));
}

HoeffdingSolver::HoeffdingSolver(const StatePair& pair, double alpha_cap, int points_per_decade)
    : eval_(pair),
      umegaki_(qht::umegaki(pair)),
      max_relative_(pair.order_log()),
      alpha_cap_(std::min(alpha_cap, kMaxAlpha)),
      points_per_decade_(points_per_decade) {
  if (points_per_decade_ < 1) {
    throw Error(ErrorKind::InvalidArgument, "points per decade must be positive");
  }
  if (!(alpha_cap_ > 1.0 + kMinAlphaExcess)) {
    throw Error(ErrorKind::AlphaOutOfRange, "alpha cap must exceed 1 + 1e-4");
  }
  const double u_min = std::log10(kMinAlphaExcess);
  const double u_max = std::log10(alpha_cap_ - 1.0);
  for (int i = 0;; ++i) {
    const double u = u_min + static_cast<double>(i) / points_per_decade_;
    if (u > u_max) break;
    grid_.push_back(u);
    log_q_.push_back(eval_.log_q_star(1.0 + std::pow(10.0, u)));
  }
}

double HoeffdingSolver::objective(double alpha, double r) const {
  return (alpha - 1.0) / alpha * r - eval_.log_q_star(alpha);
}

HoeffdingResult HoeffdingSolver::evaluate(double r, double alpha_max) const {
  HoeffdingResult res;
  res.r = r;
  res.alpha_max = alpha_max;
  if (r == 0.0 || r <= umegaki_) {
    res.value = 0.0;
    res.arg_alpha = 1.0;
    res.truncation_bound = 0.0;
    return res;
  }
  if (alpha_max > alpha_cap_ * (1.0 + 1e-12)) {
    throw Error(ErrorKind::InvalidArgument, "alpha_max exceeds the solver's alpha cap");
  }

  const double u_end = std::log10(alpha_max - 1.0);
  std::vector<double> us;
  std::vector<double> fs;
  for (std::size_t i = 0; i < grid_.size() && grid_[i] < u_end - 1e-12; ++i) {
    const double alpha = 1.0 + std::pow(10.0, grid_[i]);
    us.push_back(grid_[i]);
    fs.push_back((alpha - 1.0) / alpha * r - log_q_[i]);
  }
  const double log_q_end = eval_.log_q_star(alpha_max);
  us.push_back(u_end);
  fs.push_back((alpha_max - 1.0) / alpha_max * r - log_q_end);

  const std::size_t best = static_cast<std::size_t>(
      std::distance(fs.begin(), std::max_element(fs.begin(), fs.end())));
  const double lo = best == 0 ? std::log10(kMinAlphaExcess) - 8.0 : us[best - 1];
  const double hi = best + 1 == us.size() ? u_end : us[best + 1];
  auto f = [&](double u) { return objective(1.0 + std::pow(10.0, u), r); };
  auto [u_star, f_star] = detail::golden_maximize(f, lo, hi, 1e-11);

  double value = fs[best];
  double arg = 1.0 + std::pow(10.0, us[best]);
  if (f_star > value) {
    value = f_star;
    arg = 1.0 + std::pow(10.0, u_star);
  }
  // ln Q*_a -> D*_inf as a -> inf, so r - D*_inf is a limit value of the objective.
  const double limit = r - max_relative_;
  if (limit >= value) {
    value = limit;
    arg = kInf;
  }
  res.value = std::clamp(value, 0.0, r);
  res.arg_alpha = arg;
  // ln Q*_a is non-decreasing, so the objective beyond alpha_max is below
  // r - ln Q*_{alpha_max}, and also within r / alpha_max of the value at alpha_max.
  // In t = 1/alpha the objective is concave (ln Q*_a is a perspective of the
  // convex (a - 1) D*_a), so on t < 1/alpha_max it stays below the tangent,
  // whose slope is bounded by the secant to t = 2/alpha_max.
  const double f_end = fs.back();
  const double f_half = alpha_max / 2.0 > 1.0 + kMinAlphaExcess
                            ? objective(alpha_max / 2.0, r)
                            : -kInf;
  const double tangent = f_end + std::max(0.0, f_end - f_half);
  res.truncation_bound = std::min({r / alpha_max, std::max(0.0, r - log_q_end - res.value),
                                   std::max(0.0, tangent - res.value)});
  return res;
}

HoeffdingResult HoeffdingSolver::solve(double r, double tol) const {
  check_tol(tol);
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::InvalidArgument, "r must be a finite nonnegative rate");
  }
  const double alpha_max = std::min(hoeffding_alpha_max(r, tol), alpha_cap_);
  HoeffdingResult res = evaluate(r, alpha_max);
  if (res.truncation_bound > tol) {
    std::ostringstream os;
    os << "alpha truncation bound " << res.truncation_bound << " exceeds tol " << tol;
    throw Error(ErrorKind::ConvergenceFailure, os.str());
  }
  return res;
}

HoeffdingResult hoeffding_anti_divergence(const StatePair& pair, double r, double tol,
                                          int points_per_decade) {
  check_tol(tol);
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::InvalidArgument, "r must be a finite nonnegative rate");
  }
  HoeffdingSolver solver(pair, hoeffding_alpha_max(r, tol), points_per_decade);
  return solver.solve(r, tol);
}

double cutoff_rate(const StatePair& pair, double kappa, double tol) {
  if (!(kappa > 0.0 && kappa < 1.0)) {
    std::ostringstream os;
    os << "kappa = " << kappa << " outside (0, 1)";
    throw Error(ErrorKind::KappaOutOfRange, os.str());
  }
  check_tol(tol);
  HoeffdingSolver solver(pair, kMaxAlpha);
  auto g = [&](double r) {
    if (r <= 0.0) return 0.0;
    return r - solver.evaluate(r, hoeffding_alpha_max(r, tol)).value / kappa;
  };

  constexpr int kRPointsPerDecade = 32;
  const double r_hi = 4.0 * (pair.order_log() + 1.0);
  std::vector<double> rs{0.0};
  std::vector<double> gs{0.0};
  const double v_lo = std::log10(tol);
  const double v_hi = std::log10(r_hi);
  int i = 0;
  auto push_next = [&] {
    const double r = std::pow(10.0, v_lo + static_cast<double>(i++) / kRPointsPerDecade);
    rs.push_back(r);
    gs.push_back(g(r));
  };
  while (v_lo + static_cast<double>(i) / kRPointsPerDecade <= v_hi) push_next();
  // g is concave; a maximum on the last point means the peak lies further out.
  for (int extra = 0; extra < 8 * kRPointsPerDecade; ++extra) {
    const auto top = std::max_element(gs.begin(), gs.end());
    if (top + 1 != gs.end()) break;
    push_next();
  }

  const std::size_t best =
      static_cast<std::size_t>(std::distance(gs.begin(), std::max_element(gs.begin(), gs.end())));
  double value = gs[best];
  if (best > 0) {
    const double lo = rs[best - 1];
    const double hi = best + 1 < rs.size() ? rs[best + 1] : rs[best];
    auto [r_star, g_star] = detail::golden_maximize(g, lo, hi, 1e-10 * std::max(1.0, hi));
    value = std::max(value, g_star);
  }
  return std::max(value, 0.0);
}

}  // namespace qht
