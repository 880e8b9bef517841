#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "../support/oracles.hpp"
#include "qsi/born.hpp"

using namespace qsi;

namespace {

const double kPi = std::numbers::pi;

StateVectord from_oracle(const std::vector<oracle::cd>& a, int n) {
  ComplexVector<double> v(static_cast<Eigen::Index>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i) v(static_cast<Eigen::Index>(i)) = a[i];
  return StateVectord::normalized(n, v);
}

double sq(double x) { return x * x; }

std::vector<double> grid19() {
  std::vector<double> g;
  for (int i = 0; i < 19; ++i) g.push_back(kPi / 2 * i / 18.0);
  return g;
}

}  // namespace

TEST_SUITE("born") {

TEST_CASE("ghz3 joint table matches the closed forms") {
  const auto ghz = make_named_state<double>(NamedState::ghz, 3);
  for (double b : grid19())
    for (double c : grid19()) {
      const auto d = joint_distribution(ghz, equatorial_settings({0.0, b, c}));
      const double cb = sq(std::cos(b)), sb = sq(std::sin(b)), cc = sq(std::cos(c)), sc = sq(std::sin(c));
      CHECK(std::abs(d.probability({1, 1, 1}) - 0.5 * cb * cc) < 1e-12);
      CHECK(std::abs(d.probability({1, 1, 0}) - 0.5 * cb * sc) < 1e-12);
      CHECK(std::abs(d.probability({1, 0, 1}) - 0.5 * sb * cc) < 1e-12);
      CHECK(std::abs(d.probability({1, 0, 0}) - 0.5 * sb * sc) < 1e-12);
      CHECK(std::abs(d.probability({0, 1, 1}) - 0.5 * sb * sc) < 1e-12);
      CHECK(std::abs(d.probability({0, 1, 0}) - 0.5 * sb * cc) < 1e-12);
      CHECK(std::abs(d.probability({0, 0, 1}) - 0.5 * cb * sc) < 1e-12);
      CHECK(std::abs(d.probability({0, 0, 0}) - 0.5 * cb * cc) < 1e-12);
    }
}

TEST_CASE("ghz3 pairwise joints match the closed forms on a 19x19 grid") {
  const auto ghz = make_named_state<double>(NamedState::ghz, 3);
  for (double b : grid19())
    for (double c : grid19()) {
      const auto d = joint_distribution(ghz, equatorial_settings({0.0, b, c}));
      const auto ab = marginalize(d, ObserverSet{0, 1});
      const auto ac = marginalize(d, ObserverSet{0, 2});
      const auto bc = marginalize(d, ObserverSet{1, 2});
      const double cb = sq(std::cos(b)), sb = sq(std::sin(b)), cc = sq(std::cos(c)), sc = sq(std::sin(c));
      const double same = 0.5 * (cb * cc + sb * sc), diff = 0.5 * (cb * sc + sb * cc);
      const double want[12] = {0.5 * cb, 0.5 * sb, 0.5 * sb, 0.5 * cb,  // per pair: (1,1) (1,0) (0,1) (0,0)
                               0.5 * cc, 0.5 * sc, 0.5 * sc, 0.5 * cc,
                               same, diff, diff, same};
      CHECK(std::abs(ab[3] - want[0]) < 1e-12);
      CHECK(std::abs(ab[2] - want[1]) < 1e-12);
      CHECK(std::abs(ab[1] - want[2]) < 1e-12);
      CHECK(std::abs(ab[0] - want[3]) < 1e-12);
      CHECK(std::abs(ac[3] - want[4]) < 1e-12);
      CHECK(std::abs(ac[2] - want[5]) < 1e-12);
      CHECK(std::abs(ac[1] - want[6]) < 1e-12);
      CHECK(std::abs(ac[0] - want[7]) < 1e-12);
      CHECK(std::abs(bc[3] - want[8]) < 1e-12);
      CHECK(std::abs(bc[2] - want[9]) < 1e-12);
      CHECK(std::abs(bc[1] - want[10]) < 1e-12);
      CHECK(std::abs(bc[0] - want[11]) < 1e-12);
    }
}

TEST_CASE("w3 joint table matches the closed forms") {
  const auto w = make_named_state<double>(NamedState::w, 3);
  for (double b : grid19())
    for (double c : grid19()) {
      const auto d = joint_distribution(w, equatorial_settings({0.0, b, c}));
      const double cb = sq(std::cos(b)), sb = sq(std::sin(b)), cc = sq(std::cos(c)), sc = sq(std::sin(c));
      const double s2 = sq(std::sin(b + c)), c2 = sq(std::cos(b + c));
      CHECK(std::abs(d.probability({1, 1, 1}) - sb * sc / 3) < 1e-12);
      CHECK(std::abs(d.probability({1, 1, 0}) - sb * cc / 3) < 1e-12);
      CHECK(std::abs(d.probability({1, 0, 1}) - cb * sc / 3) < 1e-12);
      CHECK(std::abs(d.probability({1, 0, 0}) - cb * cc / 3) < 1e-12);
      CHECK(std::abs(d.probability({0, 1, 1}) - s2 / 3) < 1e-12);
      CHECK(std::abs(d.probability({0, 1, 0}) - c2 / 3) < 1e-12);
      CHECK(std::abs(d.probability({0, 0, 1}) - c2 / 3) < 1e-12);
      CHECK(std::abs(d.probability({0, 0, 0}) - s2 / 3) < 1e-12);
    }
}

TEST_CASE("product state: A never reads 0 at alpha = 0") {
  const auto p = make_named_state<double>(NamedState::product_v, 3);
  for (double b : grid19()) {
    const auto d = joint_distribution(p, equatorial_settings({0.0, b, 0.4}));
    for (int x : {0, 1})
      for (int y : {0, 1}) CHECK(d.probability({0, x, y}) < 1e-15);
  }
}

TEST_CASE("joint_distribution agrees with the Kronecker-product oracle") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> polar(0.0, kPi), azimuth(0.0, 2 * kPi);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 1 + trial % 6;
    const auto amps = oracle::random_amplitudes(rng, n);
    std::vector<double> th, ph;
    std::vector<DetectorSettingd> settings;
    for (int k = 0; k < n; ++k) {
      th.push_back(polar(rng));
      ph.push_back(trial % 2 ? azimuth(rng) : 0.0);
      settings.emplace_back(default_label(k), th.back(), ph.back());
    }
    const auto want = oracle::brute_joint(amps, th, ph);
    const auto got = joint_distribution(from_oracle(amps, n), settings);
    double sum = 0.0;
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(std::abs(got[i] - want[i]) < 1e-12);
      CHECK(got[i] >= 0.0);
      sum += got[i];
    }
    CHECK(std::abs(sum - 1.0) < 1e-10);
    CHECK(got.provenance() == Provenance::exact);
  }
}

TEST_CASE("joint_distribution rejects a mismatched observer count") {
  const auto ghz = make_named_state<double>(NamedState::ghz, 3);
  CHECK_THROWS_AS(joint_distribution(ghz, equatorial_settings({0.0, 0.1})), std::invalid_argument);
}

TEST_CASE("marginal examples") {
  const auto ghz = joint_distribution(make_named_state<double>(NamedState::ghz, 3),
                                      equatorial_settings({0.0, 0.3, 1.1}));
  const auto a = marginalize(ghz, ObserverSet{0});
  CHECK(std::abs(a[0] - 0.5) < 1e-15);
  CHECK(std::abs(a[1] - 0.5) < 1e-15);
  CHECK(a.observers() == std::vector<std::string>{"A"});

  const auto w = joint_distribution(make_named_state<double>(NamedState::w, 3),
                                    equatorial_settings({0.0, 0.3, 1.1}));
  const auto wa = marginalize(w, ObserverSet{0});
  CHECK(std::abs(wa.probability({1}) - 1.0 / 3) < 1e-15);
  CHECK(std::abs(wa.probability({0}) - 2.0 / 3) < 1e-15);

  const auto same = marginalize(w, ObserverSet::all(3));
  CHECK((same.probs() - w.probs()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(marginalize(w, ObserverSet{}), std::invalid_argument);
}

TEST_CASE("marginalization commutes exactly") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 4;
    const auto amps = oracle::random_amplitudes(rng, n);
    std::vector<DetectorSettingd> settings;
    for (int k = 0; k < n; ++k) settings.emplace_back(default_label(k), 0.37 * (k + 1) + 0.01 * trial);
    const auto d = joint_distribution(from_oracle(amps, n), settings);
    std::uniform_int_distribution<std::uint32_t> pick(1, (1u << n) - 1);
    const ObserverSet s(pick(rng));
    // T: a nonempty subset of S
    std::uint32_t t = s.mask & pick(rng);
    if (t == 0) t = s.mask & (~s.mask + 1);
    const auto direct = marginalize(d, ObserverSet(t));
    const auto via = marginalize(marginalize(d, s), [&] {
      // re-index T inside S
      std::uint32_t m = 0;
      int slot = 0;
      for (int k = 0; k < n; ++k)
        if (s.contains(k)) {
          if ((t >> k) & 1u) m |= 1u << slot;
          ++slot;
        }
      return ObserverSet(m);
    }());
    CHECK(direct.observers() == via.observers());
    CHECK((direct.probs() - via.probs()).cwiseAbs().maxCoeff() <= 1e-15);
    const auto ref = oracle::marginal(std::vector<double>(d.probs().data(), d.probs().data() + d.size()), n, t);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(direct[i] - ref[i]) < 1e-15);
  }
}

TEST_CASE("conditional examples") {
  const auto singlet = make_named_state<double>(NamedState::singlet_sym, 2);
  for (double a1 : {0.0, 0.2, 0.9})
    for (double b1 : {0.0, 0.3, 1.4}) {
      const auto d = joint_distribution(singlet, equatorial_settings({a1, b1}));
      const auto t = conditional(d, ObserverSet{0}, ObserverSet{1});
      CHECK(std::abs(*t.at(0, 0) - sq(std::cos(b1 - a1))) < 1e-12);
      CHECK(std::abs(*t.at(1, 1) - sq(std::cos(b1 - a1))) < 1e-12);
      // each joint probability is half the conditional
      CHECK(std::abs(d.probability({0, 0}) - 0.5 * *t.at(0, 0)) < 1e-12);
    }

  const double beta = 0.7;
  const auto p = joint_distribution(make_named_state<double>(NamedState::product_v, 3),
                                    equatorial_settings({0.0, beta, 0.2}));
  const auto t = conditional(p, ObserverSet{1}, ObserverSet{0});
  CHECK_FALSE(t.at(0, 0).has_value());
  REQUIRE(t.at(0, 1).has_value());
  CHECK(std::abs(*t.at(0, 1) - sq(std::sin(beta))) < 1e-12);
}

TEST_CASE("defined conditional columns sum to one") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto amps = oracle::random_amplitudes(rng, 3);
    const auto d = joint_distribution(from_oracle(amps, 3), equatorial_settings({0.1 * trial, 0.4, 1.3}));
    const auto t = conditional(d, ObserverSet{0, 2}, ObserverSet{1});
    for (std::size_t g = 0; g < 2; ++g)
      if (t.defined[g]) CHECK(std::abs(t.values.col(static_cast<Eigen::Index>(g)).sum() - 1.0) < 1e-10);
  }
  const auto d = joint_distribution(make_named_state<double>(NamedState::ghz, 3), equatorial_settings({0.0, 0.0, 0.0}));
  CHECK_THROWS_AS(conditional(d, ObserverSet{0, 1}, ObserverSet{1}), std::invalid_argument);
  CHECK_THROWS_AS(conditional(d, ObserverSet{}, ObserverSet{1}), std::invalid_argument);
}

TEST_CASE("post-measurement state examples") {
  const auto ghz = make_named_state<double>(NamedState::ghz, 3);
  const DetectorSettingd vertical("A", 0.0);
  const auto after = post_measurement_state(ghz, 0, vertical, 1);
  CHECK(std::abs(after[0] - oracle::cd(1.0)) < 1e-15);
  CHECK(after.amplitudes().tail(7).norm() < 1e-15);

  const auto p = make_named_state<double>(NamedState::product_v, 3);
  CHECK_THROWS_AS(post_measurement_state(p, 0, vertical, 0), std::invalid_argument);
  CHECK_THROWS_AS(post_measurement_state(p, 3, vertical, 1), std::invalid_argument);
  CHECK_THROWS_AS(post_measurement_state(p, 0, vertical, 2), std::invalid_argument);

  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = from_oracle(oracle::random_amplitudes(rng, 3), 3);
    const DetectorSettingd set("B", 0.1 * trial, 0.05 * trial);
    const int outcome = trial % 2;
    const auto once = post_measurement_state(s, 1, set, outcome);
    const auto twice = post_measurement_state(once, 1, set, outcome);
    CHECK((once.amplitudes() - twice.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("sequential measurement equals the joint table for every order") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> polar(0.0, kPi), azimuth(0.0, 2 * kPi);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4;
    const auto s = from_oracle(oracle::random_amplitudes(rng, n), n);
    std::vector<DetectorSettingd> settings;
    for (int k = 0; k < n; ++k) settings.emplace_back(default_label(k), polar(rng), azimuth(rng));
    const auto joint = joint_distribution(s, settings);
    std::vector<int> order(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
    do {
      const auto seq = sequential_distribution(s, settings, order);
      CHECK((seq.probs() - joint.probs()).cwiseAbs().maxCoeff() <= 1e-12);
    } while (std::next_permutation(order.begin(), order.end()));
  }
}

TEST_CASE("sequential examples") {
  const auto ghz = make_named_state<double>(NamedState::ghz, 3);
  const double b = 0.6, c = 1.2;
  const auto d = sequential_distribution(ghz, equatorial_settings({0.0, b, c}), {2, 1, 0});
  CHECK(std::abs(d.probability({1, 1, 1}) - 0.5 * sq(std::cos(b)) * sq(std::cos(c))) < 1e-12);
  CHECK(std::abs(d.probability({0, 1, 0}) - 0.5 * sq(std::sin(b)) * sq(std::cos(c))) < 1e-12);

  const auto singlet = make_named_state<double>(NamedState::singlet_sym, 2);
  for (const std::vector<int>& order : {std::vector<int>{0, 1}, std::vector<int>{1, 0}}) {
    const auto s = sequential_distribution(singlet, equatorial_settings({0.1, 0.5}), order);
    CHECK(std::abs(s.probability({1, 1}) - 0.5 * sq(std::cos(0.4))) < 1e-12);
    CHECK(std::abs(s.probability({0, 1}) - 0.5 * sq(std::sin(0.4))) < 1e-12);
  }
  CHECK_THROWS_AS(sequential_distribution(ghz, equatorial_settings({0.0, b, c}), {0, 0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sequential_distribution(ghz, equatorial_settings({0.0, b, c}), {0, 1}),
                  std::invalid_argument);
}

TEST_CASE("distributions validate their inputs") {
  RealVector<double> p(2);
  p << 0.5, 0.6;
  CHECK_THROWS_AS(OutcomeDistributiond({"A"}, p), std::invalid_argument);
  p << 1.2, -0.2;
  CHECK_THROWS_AS(OutcomeDistributiond({"A"}, p), std::invalid_argument);
  RealVector<double> q(3);
  q << 0.2, 0.3, 0.5;
  CHECK_THROWS_AS(OutcomeDistributiond({"A"}, q), std::invalid_argument);
  const auto e = OutcomeDistributiond::from_counts({"A"}, {9, 10});
  CHECK(e.provenance() == Provenance::empirical);
  CHECK(e.total_count() == 19);
  CHECK(e.index_of("A") == 0);
  CHECK_THROWS_AS(e.index_of("B"), std::invalid_argument);
  CHECK_THROWS_AS(e.probability({0, 1}), std::invalid_argument);
}

TEST_CASE("long double joint distribution") {
  const auto ghz = make_named_state<long double>(NamedState::ghz, 3);
  const auto d = joint_distribution(ghz, equatorial_settings<long double>({0.0L, 0.5L, 0.9L}));
  using std::cos;
  const long double want = 0.5L * cos(0.5L) * cos(0.5L) * cos(0.9L) * cos(0.9L);
  CHECK(std::abs(static_cast<double>(d.probability({1, 1, 1}) - want)) < 1e-17);
}

}  // TEST_SUITE
