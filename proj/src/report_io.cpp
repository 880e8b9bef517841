#include "qsi/report_io.hpp"

#include <cstdio>
#include <ostream>
#include <string>

namespace qsi {

using nlohmann::json;

namespace {

std::string outcome_string(std::size_t index, int n) {
  std::string s(static_cast<std::size_t>(n), '0');
  for (int k = 0; k < n; ++k)
    if ((index >> (n - 1 - k)) & 1u) s[static_cast<std::size_t>(k)] = '1';
  return s;
}

std::vector<int> members_of(std::uint32_t mask, int n) {
  std::vector<int> m;
  for (int k = 0; k < n; ++k)
    if ((mask >> k) & 1u) m.push_back(k);
  return m;
}

json label_list(const std::vector<std::string>& labels, const std::vector<int>& members) {
  json arr = json::array();
  for (int m : members) arr.push_back(labels[static_cast<std::size_t>(m)]);
  return arr;
}

template <std::size_t N>
std::vector<int> to_vec(const std::array<int, N>& a) {
  return {a.begin(), a.end()};
}

json face_json(const FaceReport<double>& f, const std::vector<std::string>& labels, NumberFormat fmt) {
  const auto v = to_vec(f.vertices);
  return {{"vertices", label_list(labels, v)},
          {"lengths", {rounded(f.lengths[0], fmt), rounded(f.lengths[1], fmt), rounded(f.lengths[2], fmt)}},
          {"area_info", rounded(f.info_area, fmt)},
          {"area_euclid", rounded(f.euclid.defined ? f.euclid.area : 0.0, fmt)},
          {"euclid_defined", f.euclid.defined},
          {"deficit", rounded(f.euclid.deficit, fmt)},
          {"ratio", rounded(f.ratio, fmt)}};
}

struct CsvLong {
  std::ostream& out;
  NumberFormat fmt;
  void header() { out << "quantity,vertices,value\n"; }
  void row(const char* quantity, const std::string& vertices, double value) {
    out << quantity << ',' << vertices << ',' << format_number(value, fmt) << '\n';
  }
};

void face_csv(CsvLong& csv, const FaceReport<double>& f, const std::vector<std::string>& labels) {
  const auto key = join_labels(labels, to_vec(f.vertices));
  csv.row("area_info", key, f.info_area);
  csv.row("area_euclid", key, f.euclid.defined ? f.euclid.area : 0.0);
  csv.row("euclid_defined", key, f.euclid.defined ? 1.0 : 0.0);
  csv.row("deficit", key, f.euclid.deficit);
  csv.row("ratio", key, f.ratio);
}

}  // namespace

std::string format_number(double value, NumberFormat fmt) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", fmt.digits, value);
  return buf;
}

double rounded(double value, NumberFormat fmt) { return std::stod(format_number(value, fmt)); }

std::string join_labels(const std::vector<std::string>& labels, const std::vector<int>& members) {
  std::string s;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) s += '-';
    s += labels[static_cast<std::size_t>(members[i])];
  }
  return s;
}

json settings_json(const std::vector<DetectorSettingd>& settings, NumberFormat fmt) {
  json arr = json::array();
  for (const auto& s : settings)
    arr.push_back({{"observer", s.observer},
                   {"polar", rounded(s.polar, fmt)},
                   {"azimuth", rounded(s.azimuth, fmt)}});
  return arr;
}

json distribution_json(const OutcomeDistributiond& dist, NumberFormat fmt) {
  json probs = json::object();
  for (std::size_t i = 0; i < dist.size(); ++i)
    probs[outcome_string(i, dist.n())] = rounded(dist[i], fmt);
  json j = {{"observers", dist.observers()},
            {"provenance", dist.provenance() == Provenance::exact ? "exact" : "empirical"},
            {"probabilities", probs}};
  if (dist.provenance() == Provenance::empirical) {
    json counts = json::object();
    for (std::size_t i = 0; i < dist.size(); ++i) counts[outcome_string(i, dist.n())] = dist.counts()[i];
    j["counts"] = counts;
    j["total"] = dist.total_count();
  }
  return j;
}

json geometry_json(const SimplexGeometry<double>& g, const std::string& state_name,
                   const std::vector<DetectorSettingd>& settings, NumberFormat fmt) {
  const int n = static_cast<int>(g.labels.size());
  json entropies = json::object();
  for (std::uint32_t mask = 1; mask < g.entropies.size(); ++mask)
    entropies[join_labels(g.labels, members_of(mask, n))] = rounded(g.entropies[mask], fmt);

  json edges = json::array();
  for (const auto& e : g.edges)
    edges.push_back({{"vertices", label_list(g.labels, {e.u, e.v})}, {"distance", rounded(e.length, fmt)}});
  json faces = json::array();
  for (const auto& f : g.faces) faces.push_back(face_json(f, g.labels, fmt));
  json volumes = json::array();
  for (const auto& v : g.volumes)
    volumes.push_back({{"vertices", label_list(g.labels, to_vec(v.vertices))},
                       {"volume", rounded(v.volume, fmt)},
                       {"volume_printed_form", rounded(v.printed_form, fmt)}});

  return {{"schema_version", kSchemaVersion},
          {"kind", "probe"},
          {"state", state_name},
          {"observers", g.labels},
          {"settings", settings_json(settings, fmt)},
          {"entropies", entropies},
          {"edges", edges},
          {"faces", faces},
          {"volumes", volumes},
          {"top_volume", rounded(g.top_volume, fmt)}};
}

void write_geometry_csv(std::ostream& out, const SimplexGeometry<double>& g, NumberFormat fmt) {
  const int n = static_cast<int>(g.labels.size());
  CsvLong csv{out, fmt};
  csv.header();
  for (std::uint32_t mask = 1; mask < g.entropies.size(); ++mask)
    csv.row("entropy", join_labels(g.labels, members_of(mask, n)), g.entropies[mask]);
  for (const auto& e : g.edges) csv.row("distance", join_labels(g.labels, {e.u, e.v}), e.length);
  for (const auto& f : g.faces) face_csv(csv, f, g.labels);
  for (const auto& v : g.volumes) {
    const auto key = join_labels(g.labels, to_vec(v.vertices));
    csv.row("volume", key, v.volume);
    csv.row("volume_printed_form", key, v.printed_form);
  }
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) all[static_cast<std::size_t>(k)] = k;
  csv.row("top_volume", join_labels(g.labels, all), g.top_volume);
}

json octahedron_json(const OctahedronReport<double>& r, const std::string& state_name, NumberFormat fmt) {
  const std::vector<std::string> labels(r.vertex_labels.begin(), r.vertex_labels.end());
  json settings = json::array();
  for (int o = 0; o < 3; ++o)
    for (int s = 0; s < 2; ++s) {
      const auto& d = r.settings[static_cast<std::size_t>(o)][static_cast<std::size_t>(s)];
      settings.push_back({{"vertex", labels[static_cast<std::size_t>(2 * o + s)]},
                          {"polar", rounded(d.polar, fmt)},
                          {"azimuth", rounded(d.azimuth, fmt)}});
    }
  json edges = json::array();
  for (const auto& e : r.edges)
    edges.push_back({{"vertices", label_list(labels, {e.u, e.v})}, {"distance", rounded(e.length, fmt)}});
  json faces = json::array();
  for (std::size_t i = 0; i < r.faces.size(); ++i) {
    auto f = face_json(r.faces[i], labels, fmt);
    const auto& v = r.face_embedding[i];
    f["embeddable_plane"] = v.embeddable;
    f["euclidean"] = v.euclidean;
    f["min_dim"] = v.min_dim;
    faces.push_back(f);
  }
  json paths = json::array();
  for (const auto& p : r.path_checks) {
    json path = json::array();
    for (const auto& e : p.path) path.push_back(label_list(labels, {e.u, e.v}));
    paths.push_back({{"direct", label_list(labels, {p.direct.u, p.direct.v})},
                     {"path", path},
                     {"margin", rounded(p.check.margin, fmt)},
                     {"violated", p.check.violated}});
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "octahedron"},
          {"state", state_name},
          {"vertices", labels},
          {"settings", settings},
          {"edges", edges},
          {"faces", faces},
          {"path_checks", paths},
          {"full_embedding", r.full_embedding}};
}

void write_octahedron_csv(std::ostream& out, const OctahedronReport<double>& r, NumberFormat fmt) {
  const std::vector<std::string> labels(r.vertex_labels.begin(), r.vertex_labels.end());
  CsvLong csv{out, fmt};
  csv.header();
  for (const auto& e : r.edges) csv.row("distance", join_labels(labels, {e.u, e.v}), e.length);
  for (std::size_t i = 0; i < r.faces.size(); ++i) {
    face_csv(csv, r.faces[i], labels);
    csv.row("embeddable_plane", join_labels(labels, to_vec(r.faces[i].vertices)),
            r.face_embedding[i].embeddable ? 1.0 : 0.0);
  }
  for (const auto& p : r.path_checks) {
    const auto key = join_labels(labels, {p.direct.u, p.direct.v});
    csv.row("path_margin", key, p.check.margin);
    csv.row("path_violated", key, p.check.violated ? 1.0 : 0.0);
  }
}

json sweep_json(const Surface& s, const std::vector<CriticalPoint>& critical, NumberFormat fmt) {
  json rows = json::array();
  for (const auto& r : s.rows)
    rows.push_back({rounded(r.beta, fmt), rounded(r.gamma, fmt), rounded(r.d_ab, fmt),
                    rounded(r.d_ac, fmt), rounded(r.d_bc, fmt), rounded(r.area_info, fmt),
                    rounded(r.area_euclid, fmt), r.euclid_defined ? 1 : 0, rounded(r.ratio, fmt)});
  json crit = json::array();
  for (const auto& c : critical)
    crit.push_back({{"beta", rounded(c.beta, fmt)},
                    {"gamma", rounded(c.gamma, fmt)},
                    {"value", rounded(c.value, fmt)},
                    {"kind", to_string(c.kind)}});
  return {{"schema_version", kSchemaVersion},
          {"kind", "sweep"},
          {"state", s.state_name},
          {"alpha", 0},
          {"grid_n", s.grid_n},
          {"columns", {"beta", "gamma", "d_ab", "d_ac", "d_bc", "area_info", "area_euclid",
                       "euclid_defined", "ratio"}},
          {"rows", rows},
          {"critical_points", crit}};
}

void write_sweep_csv(std::ostream& out, const Surface& s, NumberFormat fmt) {
  out << "beta,gamma,d_ab,d_ac,d_bc,area_info,area_euclid,euclid_defined,ratio\n";
  for (const auto& r : s.rows) {
    out << format_number(r.beta, fmt) << ',' << format_number(r.gamma, fmt) << ','
        << format_number(r.d_ab, fmt) << ',' << format_number(r.d_ac, fmt) << ','
        << format_number(r.d_bc, fmt) << ',' << format_number(r.area_info, fmt) << ','
        << format_number(r.area_euclid, fmt) << ',' << (r.euclid_defined ? 1 : 0) << ','
        << format_number(r.ratio, fmt) << '\n';
  }
}

json quad_row_json(const ViolationScanRow& row, NumberFormat fmt) {
  return {{"delta", rounded(row.delta, fmt)},
          {"d_a1b1", rounded(row.d_a1b1, fmt)},
          {"d_a1b2", rounded(row.d_a1b2, fmt)},
          {"d_a2b1", rounded(row.d_a2b1, fmt)},
          {"d_a2b2", rounded(row.d_a2b2, fmt)},
          {"path_sum", rounded(row.path_sum, fmt)},
          {"margin", rounded(row.check.margin, fmt)},
          {"violated", row.check.violated}};
}

json scan_json(const DeltaScan& scan, NumberFormat fmt) {
  json rows = json::array();
  for (const auto& r : scan.rows) rows.push_back(quad_row_json(r, fmt));
  return {{"schema_version", kSchemaVersion},
          {"kind", "scan"},
          {"rows", rows},
          {"best", quad_row_json(scan.rows[scan.best], fmt)},
          {"best_index", scan.best},
          {"best_at_boundary", scan.best_at_boundary}};
}

void write_scan_csv(std::ostream& out, const DeltaScan& scan, NumberFormat fmt) {
  out << "delta,d_a1b1,d_a1b2,d_a2b1,d_a2b2,path_sum,margin,violated\n";
  for (const auto& r : scan.rows)
    out << format_number(r.delta, fmt) << ',' << format_number(r.d_a1b1, fmt) << ','
        << format_number(r.d_a1b2, fmt) << ',' << format_number(r.d_a2b1, fmt) << ','
        << format_number(r.d_a2b2, fmt) << ',' << format_number(r.path_sum, fmt) << ','
        << format_number(r.check.margin, fmt) << ',' << (r.check.violated ? 1 : 0) << '\n';
}

json search_json(const SearchResult& r, const std::string& state_name,
                 const std::string& parameterization, NumberFormat fmt) {
  return {{"schema_version", kSchemaVersion},
          {"kind", "search"},
          {"state", state_name},
          {"parameterization", parameterization},
          {"settings",
           {{"a1", rounded(r.settings.a1, fmt)},
            {"a2", rounded(r.settings.a2, fmt)},
            {"b1", rounded(r.settings.b1, fmt)},
            {"b2", rounded(r.settings.b2, fmt)}}},
          {"margin", rounded(r.margin, fmt)},
          {"evaluations", r.evaluations},
          {"quadrilateral", quad_row_json(r.row, fmt)}};
}

void write_search_csv(std::ostream& out, const SearchResult& r, NumberFormat fmt) {
  out << "a1,a2,b1,b2,d_a1b1,d_a1b2,d_a2b1,d_a2b2,path_sum,margin,violated,evaluations\n";
  out << format_number(r.settings.a1, fmt) << ',' << format_number(r.settings.a2, fmt) << ','
      << format_number(r.settings.b1, fmt) << ',' << format_number(r.settings.b2, fmt) << ','
      << format_number(r.row.d_a1b1, fmt) << ',' << format_number(r.row.d_a1b2, fmt) << ','
      << format_number(r.row.d_a2b1, fmt) << ',' << format_number(r.row.d_a2b2, fmt) << ','
      << format_number(r.row.path_sum, fmt) << ',' << format_number(r.margin, fmt) << ','
      << (r.row.check.violated ? 1 : 0) << ',' << r.evaluations << '\n';
}

json sample_json(const BitRecord& rec, const OutcomeDistributiond& exact,
                 const std::string& state_name, NumberFormat fmt) {
  const auto empirical = empirical_distribution(rec);
  return {{"schema_version", kSchemaVersion},
          {"kind", "sample"},
          {"state", state_name},
          {"seed", rec.seed},
          {"n_runs", rec.n_runs()},
          {"settings", settings_json(rec.settings, fmt)},
          {"empirical", distribution_json(empirical, fmt)},
          {"exact", distribution_json(exact, fmt)},
          {"tv", rounded(total_variation(empirical, exact), fmt)}};
}

void write_sample_csv(std::ostream& out, const BitRecord& rec, const OutcomeDistributiond& exact,
                      NumberFormat fmt) {
  const auto empirical = empirical_distribution(rec);
  out << "outcome,count,empirical,exact\n";
  for (std::size_t i = 0; i < empirical.size(); ++i)
    out << outcome_string(i, empirical.n()) << ',' << empirical.counts()[i] << ','
        << format_number(empirical[i], fmt) << ',' << format_number(exact[i], fmt) << '\n';
}

namespace {

std::vector<std::string> deviation_columns(const std::vector<std::string>& obs) {
  const int n = static_cast<int>(obs.size());
  std::vector<std::string> cols;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) cols.push_back("d_dev_" + join_labels(obs, {i, j}));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) cols.push_back("a_dev_" + join_labels(obs, {i, j, k}));
  return cols;
}

}  // namespace

json convergence_json(const std::vector<ConvergenceRow>& rows, const std::vector<std::string>& observers,
                      NumberFormat fmt) {
  json arr = json::array();
  for (const auto& r : rows) {
    json row = {{"n_runs", r.n_runs}, {"tv", rounded(r.tv, fmt)}};
    json d = json::array();
    for (double v : r.distance_deviation) d.push_back(rounded(v, fmt));
    json a = json::array();
    for (double v : r.area_deviation) a.push_back(rounded(v, fmt));
    row["distance_deviation"] = d;
    row["area_deviation"] = a;
    arr.push_back(row);
  }
  return {{"schema_version", kSchemaVersion},
          {"kind", "convergence"},
          {"observers", observers},
          {"columns", deviation_columns(observers)},
          {"rows", arr}};
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows,
                           const std::vector<std::string>& observers, NumberFormat fmt) {
  out << "n_runs,tv";
  for (const auto& c : deviation_columns(observers)) out << ',' << c;
  out << '\n';
  for (const auto& r : rows) {
    out << r.n_runs << ',' << format_number(r.tv, fmt);
    for (double v : r.distance_deviation) out << ',' << format_number(v, fmt);
    for (double v : r.area_deviation) out << ',' << format_number(v, fmt);
    out << '\n';
  }
}

}  // namespace qsi
