#include "qsi/bitstream.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qsi/entropy.hpp"
#include "qsi/infogeo.hpp"

namespace qsi {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

void sample_chunk(const std::vector<double>& cdf, std::size_t last_nonzero, std::uint64_t seed,
                  int n, std::size_t first_row, std::size_t rows, BitMatrix& out) {
  std::mt19937_64 gen(seed);
  const double total = cdf.back();
  for (std::size_t r = 0; r < rows; ++r) {
    const double u = to_unit(gen()) * total;
    auto idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
    if (idx > last_nonzero) idx = last_nonzero;
    const auto row = static_cast<Eigen::Index>(first_row + r);
    for (int k = 0; k < n; ++k)
      out(row, k) = static_cast<std::uint8_t>((idx >> (n - 1 - k)) & 1u);
  }
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) s += ',';
    s += items[i];
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += kGoldenGamma;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t chunk_seed(std::uint64_t master, std::uint64_t chunk) {
  return splitmix64(master + chunk * kGoldenGamma);
}

BitRecord sample_runs(const OutcomeDistributiond& dist, std::uint64_t n_runs, std::uint64_t seed,
                      std::vector<DetectorSettingd> settings) {
  if (dist.provenance() != Provenance::exact)
    throw std::invalid_argument("sample_runs: source distribution must be exact");
  if (n_runs < 1) throw std::invalid_argument("sample_runs: need at least one run");

  const int n = dist.n();
  std::vector<double> cdf(dist.size());
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    acc += dist[i];
    cdf[i] = acc;
    if (dist[i] > 0.0) last_nonzero = i;
  }

  BitRecord rec;
  rec.observers = dist.observers();
  rec.seed = seed;
  rec.settings = std::move(settings);
  rec.runs.resize(static_cast<Eigen::Index>(n_runs), n);

  const std::uint64_t chunks = (n_runs + kChunkRuns - 1) / kChunkRuns;
  auto run_chunks = [&](std::uint64_t begin, std::uint64_t step) {
    for (std::uint64_t c = begin; c < chunks; c += step) {
      const std::size_t first = c * kChunkRuns;
      const std::size_t rows = std::min<std::uint64_t>(kChunkRuns, n_runs - first);
      sample_chunk(cdf, last_nonzero, chunk_seed(seed, c), n, first, rows, rec.runs);
    }
  };

  const unsigned workers =
      static_cast<unsigned>(std::min<std::uint64_t>(std::max(1u, std::thread::hardware_concurrency()), chunks));
  if (workers <= 1) {
    run_chunks(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run_chunks, w, workers);
    for (auto& t : pool) t.join();
  }
  return rec;
}

OutcomeDistributiond empirical_distribution(const BitRecord& record) {
  const int n = record.n_observers();
  if (record.n_runs() < 1) throw std::invalid_argument("empirical_distribution: empty record");
  if (static_cast<int>(record.observers.size()) != n)
    throw std::invalid_argument("empirical_distribution: observer labels do not match columns");
  std::vector<std::uint64_t> counts(dimension_for(n), 0);
  for (Eigen::Index r = 0; r < record.runs.rows(); ++r) {
    std::size_t idx = 0;
    for (int k = 0; k < n; ++k) idx = (idx << 1) | (record.runs(r, k) & 1u);
    ++counts[idx];
  }
  return OutcomeDistributiond::from_counts(record.observers, std::move(counts));
}

BitRecord concatenate(const BitRecord& a, const BitRecord& b) {
  if (a.observers != b.observers)
    throw std::invalid_argument("concatenate: records have different observers");
  BitRecord out = a;
  out.runs.resize(a.runs.rows() + b.runs.rows(), a.runs.cols());
  out.runs << a.runs, b.runs;
  return out;
}

void write_record(std::ostream& out, const BitRecord& record) {
  out << "# observers=" << join(record.observers) << " seed=" << record.seed << '\n';
  if (!record.settings.empty()) {
    out << "# settings=";
    char buf[64];
    for (std::size_t i = 0; i < record.settings.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.17g:%.17g", i ? "," : "", record.settings[i].polar,
                    record.settings[i].azimuth);
      out << buf;
    }
    out << '\n';
  }
  std::string line(static_cast<std::size_t>(record.n_observers()), '0');
  for (Eigen::Index r = 0; r < record.runs.rows(); ++r) {
    for (int k = 0; k < record.n_observers(); ++k)
      line[static_cast<std::size_t>(k)] = record.runs(r, k) ? '1' : '0';
    out << line << '\n';
  }
}

BitRecord read_record(std::istream& in) {
  BitRecord rec;
  std::string line;
  bool have_header = false;
  std::vector<std::string> rows;
  std::vector<double> polar, azimuth;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream fields(line.substr(1));
      std::string field;
      while (fields >> field) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = field.substr(0, eq);
        const std::string value = field.substr(eq + 1);
        if (key == "observers") {
          rec.observers = split(value, ',');
          have_header = true;
        } else if (key == "seed") {
          rec.seed = std::stoull(value);
        } else if (key == "settings") {
          for (const auto& s : split(value, ',')) {
            const auto parts = split(s, ':');
            if (parts.size() != 2) throw std::invalid_argument("bit record: malformed settings");
            polar.push_back(std::stod(parts[0]));
            azimuth.push_back(std::stod(parts[1]));
          }
        }
      }
      continue;
    }
    rows.push_back(line);
  }
  if (!have_header || rec.observers.empty())
    throw std::invalid_argument("bit record: missing '# observers=' header");
  const int n = static_cast<int>(rec.observers.size());
  if (rows.empty()) throw std::invalid_argument("bit record: no runs");
  rec.runs.resize(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) != n)
      throw std::invalid_argument("bit record: row " + std::to_string(r + 1) + " has wrong width");
    for (int k = 0; k < n; ++k) {
      const char c = rows[r][static_cast<std::size_t>(k)];
      if (c != '0' && c != '1')
        throw std::invalid_argument("bit record: row " + std::to_string(r + 1) +
                                    " contains a character other than 0/1");
      rec.runs(static_cast<Eigen::Index>(r), k) = static_cast<std::uint8_t>(c - '0');
    }
  }
  if (!polar.empty()) {
    if (static_cast<int>(polar.size()) != n)
      throw std::invalid_argument("bit record: settings count does not match observers");
    for (int k = 0; k < n; ++k)
      rec.settings.emplace_back(rec.observers[static_cast<std::size_t>(k)],
                                polar[static_cast<std::size_t>(k)],
                                azimuth[static_cast<std::size_t>(k)]);
  }
  return rec;
}

double total_variation(const OutcomeDistributiond& p, const OutcomeDistributiond& q) {
  if (p.observers() != q.observers())
    throw std::invalid_argument("total_variation: distributions over different observers");
  return 0.5 * (p.probs() - q.probs()).cwiseAbs().sum();
}

std::vector<ConvergenceRow> convergence_report(const StateVectord& state,
                                               const std::vector<DetectorSettingd>& settings,
                                               const std::vector<std::uint64_t>& schedule,
                                               std::uint64_t seed) {
  for (std::size_t i = 1; i < schedule.size(); ++i)
    if (schedule[i] <= schedule[i - 1])
      throw std::invalid_argument("convergence_report: schedule must be increasing");

  const auto exact = joint_distribution(state, settings);
  const auto exact_table = build_entropy_table(exact);
  const int n = exact.n();

  std::vector<ConvergenceRow> rows;
  for (std::uint64_t n_runs : schedule) {
    const auto empirical = empirical_distribution(sample_runs(exact, n_runs, seed, settings));
    const auto table = build_entropy_table(empirical);
    ConvergenceRow row;
    row.n_runs = n_runs;
    row.tv = total_variation(empirical, exact);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        row.distance_deviation.push_back(distance(table, i, j) - distance(exact_table, i, j));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        for (int k = j + 1; k < n; ++k)
          row.area_deviation.push_back(area(table, i, j, k) - area(exact_table, i, j, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qsi
