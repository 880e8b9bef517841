#pragma once

// Monte Carlo detector records: N prepared copies, one row of n bits each.
//
// Sampling is reproducible bit-for-bit across platforms. The generator is
// std::mt19937_64 (fully specified by the standard); uniforms are formed
// as (x >> 11) * 2^-53 rather than through std::uniform_real_distribution,
// whose output is implementation-defined. Runs are drawn in chunks of
// kChunkRuns; chunk c uses the seed splitmix64(seed + c * golden_gamma), so
// chunks can be sampled independently and merged in any order.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qsi/born.hpp"
#include "qsi/statekit.hpp"

namespace qsi {

using BitMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct BitRecord {
  std::vector<std::string> observers;
  std::uint64_t seed = 0;
  /// Settings that produced the source distribution, if known.
  std::vector<DetectorSettingd> settings;
  /// rows = prepared copies, columns = observers; entries are 0 or 1
  BitMatrix runs;

  std::size_t n_runs() const { return static_cast<std::size_t>(runs.rows()); }
  int n_observers() const { return static_cast<int>(runs.cols()); }
};

inline constexpr std::size_t kChunkRuns = 1 << 16;
inline constexpr std::uint64_t kDefaultRuns = 100000;

std::uint64_t splitmix64(std::uint64_t x);

/// Seed of the generator for chunk `chunk` of a master seed.
std::uint64_t chunk_seed(std::uint64_t master, std::uint64_t chunk);

/// N i.i.d. joint outcomes by inverse CDF over the exact table.
BitRecord sample_runs(const OutcomeDistributiond& dist, std::uint64_t n_runs, std::uint64_t seed,
                      std::vector<DetectorSettingd> settings = {});

/// Relative frequencies of the rows; provenance is empirical.
OutcomeDistributiond empirical_distribution(const BitRecord& record);

/// Rows of `a` followed by rows of `b`; observers must match.
BitRecord concatenate(const BitRecord& a, const BitRecord& b);

/// Header "# observers=A,B,C seed=7", optional "# settings=p:a,p:a,...",
/// then one line of '0'/'1' characters per run.
void write_record(std::ostream& out, const BitRecord& record);
BitRecord read_record(std::istream& in);

/// 1/2 sum |p - q| over outcomes; observer lists must agree.
double total_variation(const OutcomeDistributiond& p, const OutcomeDistributiond& q);

struct ConvergenceRow {
  std::uint64_t n_runs = 0;
  double tv = 0.0;
  /// empirical minus exact, per observer pair in (0,1), (0,2), ..., order
  std::vector<double> distance_deviation;
  /// empirical minus exact, per observer triple
  std::vector<double> area_deviation;
};

std::vector<ConvergenceRow> convergence_report(const StateVectord& state,
                                               const std::vector<DetectorSettingd>& settings,
                                               const std::vector<std::uint64_t>& schedule,
                                               std::uint64_t seed);

}  // namespace qsi
