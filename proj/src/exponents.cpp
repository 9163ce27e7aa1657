#include "qht/exponents.hpp"

#include <algorithm>
#include <cmath>

#include "qht/divergence.hpp"
#include "qht/np_testing.hpp"

namespace qht {

namespace {

void check_rate(double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorKind::InvalidArgument, "r must be a finite nonnegative rate");
  }
}

ExponentRecord make_record(int n, double r, double log_success, Engine engine) {
  ExponentRecord rec;
  rec.n = n;
  rec.r = r;
  rec.log_success = log_success;
  rec.b_n = -log_success / n;
  rec.engine = engine;
  return rec;
}

void check_schedule(std::span<const int> schedule) {
  if (schedule.empty()) throw Error(ErrorKind::InvalidArgument, "empty n schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    if (schedule[i] < 1 || (i > 0 && schedule[i] <= schedule[i - 1])) {
      throw Error(ErrorKind::InvalidArgument, "n schedule must be positive and strictly ascending");
    }
  }
}

void finish_report(ConvergenceReport& rep) {
  rep.fitted_envelope_C = 0.0;
  for (const ExponentRecord& rec : rep.records) {
    const double gap = std::abs(rec.b_n - rep.h_star);
    rep.fitted_envelope_C = std::max(rep.fitted_envelope_C, gap * rec.n / std::log(rec.n + 1.0));
  }
  rep.final_gap = std::abs(rep.records.back().b_n - rep.h_star);
}

}  // namespace

std::string to_string(Engine e) {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::Dense: return "dense";
    case Engine::Classical: return "classical";
    case Engine::Pinched: return "pinched";
  }
  return "auto";
}

Engine parse_engine(const std::string& s) {
  if (s == "auto") return Engine::Auto;
  if (s == "dense") return Engine::Dense;
  if (s == "classical") return Engine::Classical;
  if (s == "pinched") return Engine::Pinched;
  throw Error(ErrorKind::InvalidArgument, "unknown engine '" + s + "'");
}

Engine resolve_engine(const StatePair& pair, int n, Engine requested, std::size_t cap) {
  if (requested != Engine::Auto) return requested;
  if (commutator_norm(pair.rho().matrix(), pair.eta().matrix()) <= kCommuteTol) {
    return Engine::Classical;
  }
  if (fits_dense_cap(pair.dim(), n, cap)) return Engine::Dense;
  throw Error(ErrorKind::DenseCapExceeded, std::to_string(pair.dim()) + "^" + std::to_string(n) +
                                               " exceeds dense cap " + std::to_string(cap));
}

ExponentRecord finite_n_exponent(const StatePair& pair, int n, double r, Engine engine,
                                 std::size_t cap) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  check_rate(r);
  const Engine e = resolve_engine(pair, n, engine, cap);
  const double log_mu = -n * r;
  double log_success = 0.0;
  switch (e) {
    case Engine::Classical: {
      const ClassicalPair cp = classical_from_commuting(pair.rho(), pair.eta());
      log_success = np_classical(cp, n, log_mu).log_success;
      break;
    }
    case Engine::Dense:
      log_success = np_dense(tensor_power(pair.rho(), n, cap), tensor_power(pair.eta(), n, cap),
                             log_mu)
                        .log_success;
      break;
    case Engine::Pinched:
      log_success = np_classical(pinched_classical(pair, n, cap), 1, log_mu).log_success;
      break;
    case Engine::Auto:
      break;
  }
  return make_record(n, r, log_success, e);
}

ExponentRecord finite_n_exponent(const ClassicalPair& pair, int n, double r) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
  check_rate(r);
  return make_record(n, r, np_classical(pair, n, -n * r).log_success, Engine::Classical);
}

std::vector<double> ConvergenceReport::gaps() const {
  std::vector<double> out;
  for (const ExponentRecord& rec : records) out.push_back(std::abs(rec.b_n - h_star));
  return out;
}

ConvergenceReport convergence_sweep(const StatePair& pair, double r,
                                    std::span<const int> n_schedule, Engine engine,
                                    std::size_t cap) {
  check_schedule(n_schedule);
  check_rate(r);
  ConvergenceReport rep;
  rep.h_star = hoeffding_anti_divergence(pair, r, kSweepHoeffdingTol).value;
  for (int n : n_schedule) rep.records.push_back(finite_n_exponent(pair, n, r, engine, cap));
  finish_report(rep);
  return rep;
}

ConvergenceReport convergence_sweep(const ClassicalPair& pair, double r,
                                    std::span<const int> n_schedule) {
  check_schedule(n_schedule);
  check_rate(r);
  ConvergenceReport rep;
  rep.h_star = hoeffding_anti_divergence(pair.to_state_pair(), r, kSweepHoeffdingTol).value;
  for (int n : n_schedule) rep.records.push_back(finite_n_exponent(pair, n, r));
  finish_report(rep);
  return rep;
}

bool BrEstimate::contains(double value, double slack) const {
  return std::abs(value - estimate) <= uncertainty + slack;
}

BrEstimate b_r_estimate(const ConvergenceReport& report) {
  if (report.records.size() < 3) {
    throw Error(ErrorKind::InsufficientData,
                "need at least 3 records, got " + std::to_string(report.records.size()));
  }
  const int n_max = report.records.back().n;
  return {report.records.back().b_n,
          report.fitted_envelope_C * std::log(n_max + 1.0) / n_max};
}

}  // namespace qht
