#include "qht/pair_file.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace qht {

namespace {

using nlohmann::json;

[[noreturn]] void parse_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

Matrix matrix_from_json(const json& j, Index dim, const char* field) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim) {
    parse_error(std::string(field) + " must have " + std::to_string(dim) + " rows");
  }
  Matrix m(dim, dim);
  for (Index i = 0; i < dim; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
      parse_error(std::string(field) + " row " + std::to_string(i) + " must have " +
                  std::to_string(dim) + " entries");
    }
    for (Index c = 0; c < dim; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(i, c) = Complex(e.get<double>(), 0.0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        parse_error(std::string(field) + " entries must be [re, im] pairs");
      }
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(i, c).real(), m(i, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<double> vector_from_json(const json& j, Index dim, const char* field) {
  if (!j.is_array() || static_cast<Index>(j.size()) != dim) {
    parse_error(std::string("classical.") + field + " must have " + std::to_string(dim) +
                " entries");
  }
  std::vector<double> v;
  for (const json& e : j) {
    if (!e.is_number()) parse_error(std::string("classical.") + field + " must be numeric");
    v.push_back(e.get<double>());
  }
  return v;
}

void check_distribution(const std::vector<double>& v, const char* field) {
  double total = 0.0;
  for (double x : v) {
    if (!(x >= 0.0)) {
      throw Error(ErrorKind::InvalidDensity, std::string(field) + " has a negative entry");
    }
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os << field << " sums to " << total;
    throw Error(ErrorKind::InvalidDensity, os.str());
  }
}

Matrix dft(Index d) {
  Matrix f(d, d);
  for (Index j = 0; j < d; ++j) {
    for (Index k = 0; k < d; ++k) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(j * k) / static_cast<double>(d);
      f(j, k) = std::polar(1.0 / std::sqrt(static_cast<double>(d)), phase);
    }
  }
  return f;
}

Matrix rotated_diagonal(const std::vector<double>& diag) {
  const Index d = static_cast<Index>(diag.size());
  const Matrix f = dft(d);
  RealVector v = Eigen::Map<const RealVector>(diag.data(), d);
  Matrix m = f * v.cast<Complex>().asDiagonal() * f.adjoint();
  return 0.5 * (m + m.adjoint());
}

Matrix diagonal_matrix(const std::vector<double>& diag) {
  const Index d = static_cast<Index>(diag.size());
  Matrix m = Matrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
  return m;
}

PairFile matrix_fixture(std::string name, Matrix rho, Matrix eta) {
  PairFile f;
  f.name = std::move(name);
  f.dim = rho.rows();
  f.rho = std::move(rho);
  f.eta = std::move(eta);
  return f;
}

}  // namespace

StatePair PairFile::state_pair() const {
  if (is_classical()) return classical_pair().to_state_pair();
  return StatePair(DensityOperator::from_matrix(*rho), DensityOperator::from_matrix(*eta));
}

ClassicalPair PairFile::classical_pair() const {
  if (!is_classical()) {
    throw Error(ErrorKind::InvalidArgument, "pair '" + name + "' is not classical");
  }
  check_distribution(*p, "classical.p");
  check_distribution(*q, "classical.q");
  return ClassicalPair::from_probabilities(*p, *q);
}

PairFile parse_pair(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) parse_error("pair file must be a JSON object");
  PairFile f;
  f.name = j.value("name", std::string{});
  if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<long>() < 1) {
    parse_error("dim must be a positive integer");
  }
  f.dim = j["dim"].get<Index>();
  const bool has_matrices = j.contains("rho") || j.contains("eta");
  const bool has_classical = j.contains("classical");
  if (has_matrices == has_classical) {
    parse_error("exactly one of (rho, eta) or classical must be present");
  }
  if (has_matrices) {
    if (!j.contains("rho") || !j.contains("eta")) parse_error("both rho and eta are required");
    f.rho = matrix_from_json(j["rho"], f.dim, "rho");
    f.eta = matrix_from_json(j["eta"], f.dim, "eta");
  } else {
    const json& c = j["classical"];
    if (!c.is_object() || !c.contains("p") || !c.contains("q")) {
      parse_error("classical must hold p and q");
    }
    f.p = vector_from_json(c["p"], f.dim, "p");
    f.q = vector_from_json(c["q"], f.dim, "q");
  }
  return f;
}

std::string serialize_pair(const PairFile& file) {
  json j;
  j["name"] = file.name;
  j["dim"] = file.dim;
  if (file.is_classical()) {
    j["classical"] = {{"p", *file.p}, {"q", *file.q}};
  } else {
    j["rho"] = matrix_to_json(*file.rho);
    j["eta"] = matrix_to_json(*file.eta);
  }
  return j.dump(2) + "\n";
}

PairFile read_pair_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open pair file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_pair(buf.str());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ParseError) throw;
    throw Error(ErrorKind::ParseError, path + ": " + e.detail());
  }
}

void write_pair_file(const PairFile& file, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << serialize_pair(file);
}

std::vector<std::string> builtin_fixture_names() {
  return {"equal_qubit", "bern_half_quarter", "qubit_tilted", "trit_skewed", "quart_mixed"};
}

PairFile builtin_fixture(const std::string& name) {
  if (name == "equal_qubit") {
    Matrix m(2, 2);
    m << Complex(0.7, 0.0), Complex(0.1, -0.2), Complex(0.1, 0.2), Complex(0.3, 0.0);
    return matrix_fixture(name, m, m);
  }
  if (name == "bern_half_quarter") {
    PairFile f;
    f.name = name;
    f.dim = 2;
    f.p = std::vector<double>{0.5, 0.5};
    f.q = std::vector<double>{0.25, 0.75};
    return f;
  }
  if (name == "qubit_tilted") {
    const double t = std::numbers::pi / 8.0;
    Eigen::Vector2cd psi(std::cos(t), std::polar(std::sin(t), std::numbers::pi / 4.0));
    Matrix rho = 0.8 * psi * psi.adjoint() + 0.1 * Matrix::Identity(2, 2);
    rho = 0.5 * (rho + rho.adjoint());
    return matrix_fixture(name, rho, diagonal_matrix({0.51, 0.49}));
  }
  if (name == "trit_skewed") {
    return matrix_fixture(name, diagonal_matrix({0.5, 0.3, 0.2}),
                          rotated_diagonal({0.30, 0.31, 0.39}));
  }
  if (name == "quart_mixed") {
    return matrix_fixture(name, diagonal_matrix({0.4, 0.3, 0.2, 0.1}),
                          rotated_diagonal({0.1, 0.15, 0.35, 0.4}));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown fixture '" + name + "'");
}

PairFile load_pair(const std::string& name_or_path) {
  for (const std::string& n : builtin_fixture_names()) {
    if (n == name_or_path) return builtin_fixture(n);
  }
  return read_pair_file(name_or_path);
}

}  // namespace qht
