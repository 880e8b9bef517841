#include "qsi/statekit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qsi {

namespace {

constexpr double kLoadNormTolerance = 1e-6;

bool is_skippable(const std::string& line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string::npos || line[first] == '#';
}

}  // namespace

StateVector<double> parse_state(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;

  int n = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    std::istringstream header(line);
    std::string rest;
    if (!(header >> n) || (header >> rest))
      throw std::invalid_argument("state file line " + std::to_string(line_no) +
                                  ": expected qubit count, got '" + line + "'");
    break;
  }
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("state file: missing or out-of-range qubit count");

  const std::size_t dim = dimension_for(n);
  ComplexVector<double> amps(static_cast<Eigen::Index>(dim));
  std::size_t count = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_skippable(line)) continue;
    std::istringstream row(line);
    double re = 0.0;
    double im = 0.0;
    std::string rest;
    if (!(row >> re >> im) || (row >> rest))
      throw std::invalid_argument("state file line " + std::to_string(line_no) +
                                  ": expected 're im', got '" + line + "'");
    if (!std::isfinite(re) || !std::isfinite(im))
      throw std::invalid_argument("state file line " + std::to_string(line_no) +
                                  ": non-finite amplitude");
    if (count >= dim)
      throw std::invalid_argument("state file: more than " + std::to_string(dim) +
                                  " amplitudes for n=" + std::to_string(n));
    amps(static_cast<Eigen::Index>(count++)) = {re, im};
  }
  if (count != dim)
    throw std::invalid_argument("state file: expected " + std::to_string(dim) +
                                " amplitudes for n=" + std::to_string(n) + ", got " +
                                std::to_string(count));

  const double norm = amps.norm();
  if (norm == 0.0) throw std::invalid_argument("state file: zero vector");
  if (std::abs(norm - 1.0) > kLoadNormTolerance)
    throw std::invalid_argument("state file: norm " + std::to_string(norm) +
                                " deviates from 1 by more than 1e-6");
  return StateVector<double>::normalized(n, std::move(amps));
}

StateVector<double> load_state(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("failed reading state file '" + path.string() + "'");
  return parse_state(buffer.str());
}

void save_state(const std::filesystem::path& path, const StateVector<double>& state) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write state file '" + path.string() + "'");
  out << state.n_qubits() << '\n';
  char buf[96];
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g\n", state[i].real(), state[i].imag());
    out << buf;
  }
  if (!out) throw IoError("failed writing state file '" + path.string() + "'");
}

}  // namespace qsi
