#include <doctest.h>

#include <bit>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "qsi/statekit.hpp"

using namespace qsi;
using C = std::complex<double>;

namespace {

const double kPi = std::numbers::pi;

bool near(const Matrix2c<double>& a, const Matrix2c<double>& b, double tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace

TEST_SUITE("statekit") {

TEST_CASE("ghz3 has 1/sqrt2 at indices 0 and 7") {
  const auto s = make_named_state<double>(NamedState::ghz, 3);
  REQUIRE(s.dimension() == 8);
  for (std::size_t i = 0; i < 8; ++i) {
    const double want = (i == 0 || i == 7) ? 1.0 / std::sqrt(2.0) : 0.0;
    CHECK(std::abs(s[i] - C(want)) < 1e-15);
  }
}

TEST_CASE("w3 has 1/sqrt3 at indices 3, 5, 6") {
  const auto s = make_named_state<double>(NamedState::w, 3);
  for (std::size_t i = 0; i < 8; ++i) {
    const double want = (i == 3 || i == 5 || i == 6) ? 1.0 / std::sqrt(3.0) : 0.0;
    CHECK(std::abs(s[i] - C(want)) < 1e-15);
  }
}

TEST_CASE("product_v is the all-vertical basis state") {
  const auto s = make_named_state<double>(NamedState::product_v, 3);
  CHECK(s[0] == C(1.0));
  CHECK(s.amplitudes().tail(7).norm() == 0.0);
}

TEST_CASE("singlets") {
  const auto sym = make_named_state<double>(NamedState::singlet_sym, 2);
  CHECK(std::abs(sym[0] - C(1 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(sym[3] - C(1 / std::sqrt(2.0))) < 1e-15);
  const auto anti = make_named_state<double>(NamedState::singlet_anti, 2);
  CHECK(std::abs(anti[1] + anti[2]) < 1e-15);
  CHECK(std::abs(anti[1]) > 0.7);
}

TEST_CASE("named states are normalized with the right length for n up to 12") {
  for (auto name : {NamedState::ghz, NamedState::w, NamedState::product_v}) {
    for (int n = 2; n <= 12; ++n) {
      const auto s = make_named_state<double>(name, n);
      CHECK(s.dimension() == (std::size_t{1} << n));
      CHECK(std::abs(s.amplitudes().squaredNorm() - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("w state terms each carry exactly one vertical slot") {
  for (int n = 2; n <= 8; ++n) {
    const auto s = make_named_state<double>(NamedState::w, n);
    int nonzero = 0;
    for (std::size_t i = 0; i < s.dimension(); ++i) {
      if (std::abs(s[i]) == 0.0) continue;
      ++nonzero;
      CHECK(std::popcount(i) == n - 1);
    }
    CHECK(nonzero == n);
  }
}

TEST_CASE("unsupported named-state combinations are rejected") {
  CHECK_THROWS_AS(make_named_state<double>(NamedState::ghz, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_named_state<double>(NamedState::singlet_sym, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_named_state<double>(NamedState::singlet_anti, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_named_state<double>(NamedState::w, kMaxQubits + 1), std::invalid_argument);
}

TEST_CASE("state vector construction checks length and norm") {
  ComplexVector<double> a(3);
  a << 1, 0, 0;
  CHECK_THROWS_AS(StateVectord(2, a), std::invalid_argument);
  ComplexVector<double> b(4);
  b << 1, 1, 0, 0;
  CHECK_THROWS_AS(StateVectord(2, b), std::invalid_argument);
  const auto s = StateVectord::normalized(2, b);
  CHECK(std::abs(s.amplitudes().norm() - 1.0) < 1e-15);
  CHECK_THROWS_AS(StateVectord::normalized(2, ComplexVector<double>::Zero(4)), std::invalid_argument);
}

TEST_CASE("parse_state reads a Bell state") {
  const auto s = parse_state("# bell\n2\n0.7071067811865476 0\n0 0\n\n0 0\n0.7071067811865476 0\n");
  CHECK(s.n_qubits() == 2);
  CHECK(std::abs(s[0] - C(1 / std::sqrt(2.0))) < 1e-15);
  CHECK(std::abs(s[3] - C(1 / std::sqrt(2.0))) < 1e-15);
}

TEST_CASE("parse_state renormalizes small deviations and rejects large ones") {
  const auto s = parse_state("1\n1.0000004 0\n0 0\n");
  CHECK(s[0] == C(1.0));
  CHECK_THROWS_AS(parse_state("1\n0.9 0\n0 0\n"), std::invalid_argument);
}

TEST_CASE("parse_state rejects wrong length, malformed lines and zero vectors") {
  CHECK_THROWS_AS(parse_state("2\n1 0\n0 0\n0 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state("2\n1 0\n0 0\n0 0\n0 0\n0 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state("1\n1 zero\n0 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state("1\n1\n0 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state("1\n0 0\n0 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state("1\nnan 0\n0 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state("two\n1 0\n0 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_state(""), std::invalid_argument);
}

TEST_CASE("load_state reports unreadable files as I/O errors") {
  CHECK_THROWS_AS(load_state("/nonexistent/dir/state.txt"), IoError);
}

TEST_CASE("save_state and load_state round-trip exactly") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  ComplexVector<double> a(8);
  for (auto& x : a) x = C(g(rng), g(rng));
  const auto s = StateVectord::normalized(3, a);
  const auto path = std::filesystem::temp_directory_path() / "qsi_roundtrip_state.txt";
  save_state(path, s);
  const auto back = load_state(path);
  std::filesystem::remove(path);
  CHECK((back.amplitudes() - s.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("projector examples") {
  Matrix2c<double> vertical, horizontal, diagonal;
  vertical << 1, 0, 0, 0;
  horizontal << 0, 0, 0, 1;
  diagonal << 0.5, 0.5, 0.5, 0.5;
  CHECK(near(detector_projectors(DetectorSettingd("A", 0.0)).on.matrix, vertical, 1e-15));
  CHECK(near(detector_projectors(DetectorSettingd("A", kPi / 2)).on.matrix, horizontal, 1e-15));
  CHECK(near(detector_projectors(DetectorSettingd("A", kPi / 4)).on.matrix, diagonal, 1e-15));
  const auto p = detector_projectors(DetectorSettingd("A", 0.0));
  CHECK(p.on.outcome == 1);
  CHECK(p.off.outcome == 0);
  CHECK(&p[1] == &p.on);
}

TEST_CASE("projectors are complementary orthogonal idempotents for random settings") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> polar(0.0, kPi), azimuth(0.0, 2 * kPi);
  const Matrix2c<double> id = Matrix2c<double>::Identity();
  for (int trial = 0; trial < 200; ++trial) {
    const DetectorSettingd s("A", polar(rng), azimuth(rng));
    const auto p = detector_projectors(s);
    CHECK(near(p.off.matrix + p.on.matrix, id, 1e-12));
    CHECK(near(p.off.matrix * p.on.matrix, Matrix2c<double>::Zero(), 1e-12));
    for (const auto* q : {&p.off, &p.on}) {
      CHECK(near(q->matrix * q->matrix, q->matrix, 1e-12));
      CHECK(near(q->matrix.adjoint(), q->matrix, 1e-12));
      CHECK(std::abs(q->matrix.trace() - C(1.0)) <= 1e-12);
    }
    const auto shifted = detector_projectors(DetectorSettingd("A", s.polar + kPi, s.azimuth));
    CHECK(near(shifted.on.matrix, p.on.matrix, 1e-12));
    CHECK(near(shifted.off.matrix, p.off.matrix, 1e-12));
  }
}

TEST_CASE("detector settings must have finite angles") {
  CHECK_THROWS_AS(DetectorSettingd("A", std::nan("")), std::invalid_argument);
  CHECK_THROWS_AS(DetectorSettingd("A", 0.0, INFINITY), std::invalid_argument);
}

TEST_CASE("default labels") {
  CHECK(default_labels(3) == std::vector<std::string>{"A", "B", "C"});
  CHECK(default_label(25) == "Z");
  CHECK(default_label(26) == "Q26");
}

TEST_CASE("long double instantiation") {
  const auto s = make_named_state<long double>(NamedState::w, 4);
  CHECK(std::abs(s.amplitudes().squaredNorm() - 1.0L) < 1e-18L);
  const auto p = detector_projectors(DetectorSetting<long double>("A", 0.3L));
  CHECK((p.on.matrix * p.on.matrix - p.on.matrix).cwiseAbs().maxCoeff() < 1e-18L);
}

}  // TEST_SUITE
