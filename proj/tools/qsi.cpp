// qsi: information-geometry probes of multi-observer measurement records.
//
// Exit codes: 0 success, 1 invalid configuration, 2 I/O failure.
// Output goes to stdout unless --output is given or QSI_OUTPUT_DIR is set;
// relative paths are resolved against QSI_OUTPUT_DIR when it is set.

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qsi/bitstream.hpp"
#include "qsi/born.hpp"
#include "qsi/entropy.hpp"
#include "qsi/infogeo.hpp"
#include "qsi/report_io.hpp"
#include "qsi/scenarios.hpp"
#include "qsi/statekit.hpp"

namespace fs = std::filesystem;
using namespace qsi;

namespace {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Common {
  std::string state = "";
  std::vector<std::string> angles;
  std::vector<std::string> azimuths;
  bool degrees = false;
  std::string format = "json";
  std::string output;
  bool full_precision = false;

  NumberFormat number_format() const { return full_precision ? kFullPrecision : NumberFormat{}; }
  double to_radians(double v) const { return degrees ? v * std::numbers::pi / 180.0 : v; }
};

double parse_number(const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty())
    throw ConfigError("not a number: '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> v;
  for (const auto& p : split(text, ',')) v.push_back(parse_number(p));
  return v;
}

std::string single_token(const std::vector<std::string>& tokens, const char* what) {
  if (tokens.size() != 1) throw ConfigError(std::string(what) + ": expected one comma-separated list");
  return tokens.front();
}

StateVectord resolve_state(const std::string& arg) {
  static const std::regex named(R"((ghz|w|product)(\d+))");
  std::smatch m;
  if (std::regex_match(arg, m, named)) {
    const int n = std::stoi(m[2]);
    if (n < 2 || n > kMaxQubits) throw ConfigError("state '" + arg + "': qubit count out of range");
    const auto kind = m[1] == "ghz" ? NamedState::ghz : m[1] == "w" ? NamedState::w : NamedState::product_v;
    return make_named_state<double>(kind, n);
  }
  if (arg == "singlet-sym") return make_named_state<double>(NamedState::singlet_sym, 2);
  if (arg == "singlet-anti") return make_named_state<double>(NamedState::singlet_anti, 2);
  if (arg.empty()) throw ConfigError("--state is required");
  return load_state(arg);  // IoError if unreadable, invalid_argument if malformed
}

std::vector<DetectorSettingd> resolve_settings(const Common& c, int n) {
  const auto polar = parse_list(single_token(c.angles, "--angles"));
  if (static_cast<int>(polar.size()) != n)
    throw ConfigError("--angles: expected " + std::to_string(n) + " values, one per observer");
  std::vector<double> azimuth(static_cast<std::size_t>(n), 0.0);
  if (!c.azimuths.empty()) {
    azimuth = parse_list(single_token(c.azimuths, "--azimuths"));
    if (static_cast<int>(azimuth.size()) != n)
      throw ConfigError("--azimuths: expected " + std::to_string(n) + " values");
  }
  const auto labels = default_labels(n);
  std::vector<DetectorSettingd> settings;
  for (int k = 0; k < n; ++k) {
    const auto i = static_cast<std::size_t>(k);
    settings.emplace_back(labels[i], c.to_radians(polar[i]), c.to_radians(azimuth[i]));
  }
  return settings;
}

fs::path resolve_path(const std::string& path) {
  const char* dir = std::getenv("QSI_OUTPUT_DIR");
  fs::path p(path);
  if (dir && *dir && p.is_relative()) p = fs::path(dir) / p;
  return p;
}

std::ofstream open_for_write(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
  return out;
}

void emit(const Common& c, const std::string& command, const nlohmann::json& j,
          const std::function<void(std::ostream&)>& csv) {
  if (c.format != "json" && c.format != "csv") throw ConfigError("--format must be json or csv");
  std::ostringstream text;
  if (c.format == "json")
    text << j.dump(2) << '\n';
  else
    csv(text);

  std::optional<fs::path> target;
  if (!c.output.empty())
    target = resolve_path(c.output);
  else if (const char* dir = std::getenv("QSI_OUTPUT_DIR"); dir && *dir)
    target = fs::path(dir) / (command + "." + c.format);

  if (!target) {
    std::cout << text.str();
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return;
  }
  auto out = open_for_write(*target);
  out << text.str();
  if (!out.flush()) throw IoError("failed writing '" + target->string() + "'");
}

void add_common(CLI::App* cmd, Common& c, bool with_angles) {
  cmd->add_option("--state", c.state, "ghz<N>, w<N>, product<N>, singlet-sym, singlet-anti, or a state file");
  if (with_angles) {
    cmd->add_option("--angles", c.angles, "polar angles, comma-separated in observer order")->expected(1, -1);
    cmd->add_option("--azimuths", c.azimuths, "azimuthal angles, comma-separated (default 0)");
  }
  cmd->add_flag("--degrees", c.degrees, "angles are in degrees");
  cmd->add_option("--format", c.format, "json or csv")->capture_default_str();
  cmd->add_option("--output", c.output, "output file");
  cmd->add_flag("--full-precision", c.full_precision, "17 significant digits instead of 6");
}

// ---------------------------------------------------------------------------

void cmd_probe(const Common& c) {
  const auto state = resolve_state(c.state);
  const auto settings = resolve_settings(c, state.n_qubits());
  const auto table = build_entropy_table(joint_distribution(state, settings));
  const auto g = simplex_geometry(table);
  const auto fmt = c.number_format();
  emit(c, "probe", geometry_json(g, c.state, settings, fmt),
       [&](std::ostream& o) { write_geometry_csv(o, g, fmt); });
}

struct SweepOpts {
  int grid = kDefaultGrid;
  std::string field = "area_info";
  bool refine = false;
};

SurfaceField parse_field(const std::string& f) {
  if (f == "area_info") return SurfaceField::area_info;
  if (f == "area_euclid") return SurfaceField::area_euclid;
  if (f == "ratio") return SurfaceField::ratio;
  throw ConfigError("--field must be area_info, area_euclid or ratio");
}

void cmd_sweep(const Common& c, const SweepOpts& s) {
  const auto state = resolve_state(c.state);
  if (state.n_qubits() != 3) throw ConfigError("sweep: requires a three-observer state");
  if (s.grid < 5) throw ConfigError("--grid must be at least 5");
  const auto field = parse_field(s.field);
  const auto surface = sweep_surface(state, s.grid, c.state);
  auto critical = critical_points(surface, field);
  if (s.refine) {
    const double step = (std::numbers::pi / 2.0) / (s.grid - 1);
    const auto f = [&](double b, double g) {
      const auto row = sweep_point(state, b, g);
      return field == SurfaceField::area_info ? row.area_info
             : field == SurfaceField::area_euclid ? row.area_euclid : row.ratio;
    };
    for (auto& p : critical) p = refine_critical_point(f, p, step);
  }
  const auto fmt = c.number_format();
  emit(c, "sweep", sweep_json(surface, critical, fmt), [&](std::ostream& o) { write_sweep_csv(o, surface, fmt); });
}

struct ScanOpts {
  std::string delta = "0.01:0.5:4096";
  std::string preset;
};

void cmd_scan(const Common& c, const ScanOpts& s) {
  std::string state_name = c.state.empty() ? "singlet-sym" : c.state;
  std::optional<StateVectord> state;
  if (!s.preset.empty()) {
    if (!c.state.empty()) throw ConfigError("--preset and --state are exclusive");
    auto p = make_preset(parse_preset(s.preset));
    state_name = p.name;
    state = p.state;
  } else {
    state = resolve_state(state_name);
  }
  const auto parts = split(s.delta, ':');
  if (parts.size() != 3) throw ConfigError("--delta must be lo:hi:steps");
  const double lo = c.to_radians(parse_number(parts[0]));
  const double hi = c.to_radians(parse_number(parts[1]));
  int steps = 0;
  if (auto [p, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), steps);
      ec != std::errc{} || p != parts[2].data() + parts[2].size())
    throw ConfigError("--delta: steps must be an integer");
  const auto scan = scan_delta(*state, lo, hi, steps);
  const auto fmt = c.number_format();
  auto j = scan_json(scan, fmt);
  j["state"] = state_name;
  emit(c, "scan", j, [&](std::ostream& o) { write_scan_csv(o, scan, fmt); });
}

void cmd_quad(const Common& c, const std::string& preset) {
  std::string name = c.state;
  std::optional<StateVectord> state;
  QuadSettings q;
  if (!preset.empty()) {
    if (!c.state.empty() || !c.angles.empty())
      throw ConfigError("--preset fixes both the state and the angles");
    auto p = make_preset(parse_preset(preset));
    name = p.name;
    state = p.state;
    q = p.settings;
  } else {
    state = resolve_state(c.state);
    const auto a = parse_list(single_token(c.angles, "--angles"));
    if (a.size() != 4) throw ConfigError("--angles: expected a1,a2,b1,b2");
    q = {c.to_radians(a[0]), c.to_radians(a[1]), c.to_radians(a[2]), c.to_radians(a[3])};
  }
  if (state->n_qubits() != 2) throw ConfigError("quad: requires a two-observer state");
  const auto row = quadrilateral(*state, q);
  SearchResult r{q, row.check.margin, 0, row};
  const auto fmt = c.number_format();
  auto j = search_json(r, name, "fixed", fmt);
  j["kind"] = "quad";
  j.erase("evaluations");
  emit(c, "quad", j, [&](std::ostream& o) { write_search_csv(o, r, fmt); });
}

struct SearchOpts {
  std::string param = "symmetric";
  std::string initial;
  std::size_t budget = 10000;
};

void cmd_search(const Common& c, const SearchOpts& s) {
  const auto state = resolve_state(c.state);
  if (state.n_qubits() != 2) throw ConfigError("search: requires a two-observer state");
  Parameterization param;
  if (s.param == "symmetric")
    param = Parameterization::symmetric_delta;
  else if (s.param == "free")
    param = Parameterization::free;
  else
    throw ConfigError("--param must be symmetric or free");
  std::vector<double> initial;
  if (!s.initial.empty())
    for (double v : parse_list(s.initial)) initial.push_back(c.to_radians(v));
  if (!initial.empty() && initial.size() != (param == Parameterization::free ? 3u : 1u))
    throw ConfigError("--initial: wrong number of values for this parameterization");
  if (s.budget < 1) throw ConfigError("--budget must be at least 1");
  const auto r = search_violation(state, param, initial, s.budget);
  const auto fmt = c.number_format();
  emit(c, "search", search_json(r, c.state, s.param, fmt), [&](std::ostream& o) { write_search_csv(o, r, fmt); });
}

struct SampleOpts {
  std::uint64_t n_runs = kDefaultRuns;
  std::uint64_t seed = 1;
  std::string record;
  std::string schedule;
};

void cmd_sample(const Common& c, const SampleOpts& s) {
  const auto state = resolve_state(c.state);
  const auto settings = resolve_settings(c, state.n_qubits());
  const auto fmt = c.number_format();
  if (s.n_runs < 1) throw ConfigError("-N must be at least 1");

  if (!s.schedule.empty()) {
    std::vector<std::uint64_t> schedule;
    for (const auto& p : split(s.schedule, ',')) {
      std::uint64_t v = 0;
      auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), v);
      if (ec != std::errc{} || ptr != p.data() + p.size() || v == 0)
        throw ConfigError("--schedule: expected positive integers");
      schedule.push_back(v);
    }
    const auto rows = convergence_report(state, settings, schedule, s.seed);
    const auto labels = default_labels(state.n_qubits());
    auto j = convergence_json(rows, labels, fmt);
    j["state"] = c.state;
    j["seed"] = s.seed;
    emit(c, "convergence", j, [&](std::ostream& o) { write_convergence_csv(o, rows, labels, fmt); });
    return;
  }

  const auto exact = joint_distribution(state, settings);
  const auto rec = sample_runs(exact, s.n_runs, s.seed, settings);
  if (!s.record.empty()) {
    const auto path = resolve_path(s.record);
    auto out = open_for_write(path);
    write_record(out, rec);
    if (!out.flush()) throw IoError("failed writing '" + path.string() + "'");
  }
  emit(c, "sample", sample_json(rec, exact, c.state, fmt),
       [&](std::ostream& o) { write_sample_csv(o, rec, exact, fmt); });
}

std::array<std::array<DetectorSettingd, 2>, 3> resolve_octa_settings(const Common& c) {
  // "A:0,0.3 B:0.2,0.5 C:0.1,0.4" as one or several tokens
  std::vector<std::string> groups;
  for (const auto& t : c.angles) {
    std::istringstream in(t);
    std::string g;
    while (in >> g) groups.push_back(g);
  }
  if (groups.size() != 3) throw ConfigError("octa --angles: expected three groups like A:0,0.3");
  const auto labels = default_labels(3);
  std::array<std::array<DetectorSettingd, 2>, 3> settings;
  std::array<bool, 3> seen{};
  for (const auto& g : groups) {
    const auto colon = g.find(':');
    if (colon == std::string::npos) throw ConfigError("octa --angles: missing ':' in '" + g + "'");
    const auto label = g.substr(0, colon);
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end()) throw ConfigError("octa --angles: unknown observer '" + label + "'");
    const auto o = static_cast<std::size_t>(it - labels.begin());
    if (seen[o]) throw ConfigError("octa --angles: observer '" + label + "' given twice");
    seen[o] = true;
    const auto a = parse_list(g.substr(colon + 1));
    if (a.size() != 2) throw ConfigError("octa --angles: observer '" + label + "' needs two angles");
    for (std::size_t s = 0; s < 2; ++s) settings[o][s] = DetectorSettingd(label, c.to_radians(a[s]));
  }
  return settings;
}

void cmd_octa(const Common& c) {
  const auto state = resolve_state(c.state);
  if (state.n_qubits() != 3) throw ConfigError("octa: requires a three-observer state");
  if (!c.azimuths.empty()) throw ConfigError("octa: --azimuths is not supported");
  const auto r = octahedron_report(state, resolve_octa_settings(c));
  const auto fmt = c.number_format();
  emit(c, "octa", octahedron_json(r, c.state, fmt), [&](std::ostream& o) { write_octahedron_csv(o, r, fmt); });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Information-geometry probes of multi-observer measurement records"};
  app.require_subcommand(1);

  Common probe_c, sweep_c, scan_c, quad_c, search_c, sample_c, octa_c;
  SweepOpts sweep_o;
  ScanOpts scan_o;
  std::string quad_preset;
  SearchOpts search_o;
  SampleOpts sample_o;

  auto* probe = app.add_subcommand("probe", "distances, areas and volumes at one setting per observer");
  add_common(probe, probe_c, true);

  auto* sweep = app.add_subcommand("sweep", "three-observer area surface over (beta, gamma), alpha = 0");
  add_common(sweep, sweep_c, false);
  sweep->add_option("--grid", sweep_o.grid, "points per axis over [0, pi/2]")->capture_default_str();
  sweep->add_option("--field", sweep_o.field, "surface used for critical points")->capture_default_str();
  sweep->add_flag("--refine", sweep_o.refine, "refine critical points by local re-gridding");

  auto* scan = app.add_subcommand("scan", "path-inequality margin along the chain (0, 2d, d, 3d)");
  add_common(scan, scan_c, false);
  scan->add_option("--delta", scan_o.delta, "lo:hi:steps")->capture_default_str();
  scan->add_option("--preset", scan_o.preset, "schumacher-symmetric or schumacher-original (state only)");

  auto* quad = app.add_subcommand("quad", "one quadrilateral: --angles a1,a2,b1,b2 or --preset");
  add_common(quad, quad_c, true);
  quad->add_option("--preset", quad_preset, "schumacher-symmetric or schumacher-original");

  auto* search = app.add_subcommand("search", "maximize the path-inequality margin over detector angles");
  add_common(search, search_c, false);
  search->add_option("--param", search_o.param, "symmetric or free")->capture_default_str();
  search->add_option("--initial", search_o.initial, "starting point: delta, or a2,b1,b2");
  search->add_option("--budget", search_o.budget, "objective evaluations")->capture_default_str();

  auto* sample = app.add_subcommand("sample", "seeded measurement runs and their empirical table");
  add_common(sample, sample_c, true);
  sample->add_option("-N,--runs", sample_o.n_runs, "number of runs")->capture_default_str();
  sample->add_option("--seed", sample_o.seed, "master seed")->capture_default_str();
  sample->add_option("--record", sample_o.record, "write the raw bit record here");
  sample->add_option("--schedule", sample_o.schedule, "comma-separated N values: convergence report");

  auto* octa = app.add_subcommand("octa", "two settings per observer: octahedron of six vertices");
  add_common(octa, octa_c, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*probe) cmd_probe(probe_c);
    else if (*sweep) cmd_sweep(sweep_c, sweep_o);
    else if (*scan) cmd_scan(scan_c, scan_o);
    else if (*quad) cmd_quad(quad_c, quad_preset);
    else if (*search) cmd_search(search_c, search_o);
    else if (*sample) cmd_sample(sample_c, sample_o);
    else if (*octa) cmd_octa(octa_c);
  } catch (const IoError& e) {
    std::cerr << "qsi: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qsi: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
