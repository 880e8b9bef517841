#pragma once

// JSON and CSV renderings of the reports. Every number goes through
// format_number, so the two formats carry identical values.
//
// CSV schemas
//   geometry / octahedron (long form): quantity,vertices,value
//     vertices are observer labels joined with '-', e.g. "A-B" or "A1-B2-C1"
//   sweep:  beta,gamma,d_ab,d_ac,d_bc,area_info,area_euclid,euclid_defined,ratio
//   scan:   delta,d_a1b1,d_a1b2,d_a2b1,d_a2b2,path_sum,margin,violated
//   sample: outcome,count,empirical,exact
//   convergence: n_runs,tv,d_dev_<pair>...,a_dev_<triple>...

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "qsi/bitstream.hpp"
#include "qsi/born.hpp"
#include "qsi/infogeo.hpp"
#include "qsi/scenarios.hpp"

namespace qsi {

inline constexpr int kSchemaVersion = 1;

struct NumberFormat {
  int digits = 6;
};

inline constexpr NumberFormat kFullPrecision{17};

std::string format_number(double value, NumberFormat fmt = {});
/// The double that `format_number` text parses back to.
double rounded(double value, NumberFormat fmt = {});

std::string join_labels(const std::vector<std::string>& labels, const std::vector<int>& members);

nlohmann::json settings_json(const std::vector<DetectorSettingd>& settings, NumberFormat fmt);
nlohmann::json distribution_json(const OutcomeDistributiond& dist, NumberFormat fmt);

nlohmann::json geometry_json(const SimplexGeometry<double>& g, const std::string& state_name,
                             const std::vector<DetectorSettingd>& settings, NumberFormat fmt);
void write_geometry_csv(std::ostream& out, const SimplexGeometry<double>& g, NumberFormat fmt);

nlohmann::json octahedron_json(const OctahedronReport<double>& r, const std::string& state_name,
                               NumberFormat fmt);
void write_octahedron_csv(std::ostream& out, const OctahedronReport<double>& r, NumberFormat fmt);

nlohmann::json sweep_json(const Surface& s, const std::vector<CriticalPoint>& critical,
                          NumberFormat fmt);
void write_sweep_csv(std::ostream& out, const Surface& s, NumberFormat fmt);

nlohmann::json scan_json(const DeltaScan& scan, NumberFormat fmt);
void write_scan_csv(std::ostream& out, const DeltaScan& scan, NumberFormat fmt);

nlohmann::json quad_row_json(const ViolationScanRow& row, NumberFormat fmt);
nlohmann::json search_json(const SearchResult& r, const std::string& state_name,
                           const std::string& parameterization, NumberFormat fmt);
void write_search_csv(std::ostream& out, const SearchResult& r, NumberFormat fmt);

nlohmann::json sample_json(const BitRecord& rec, const OutcomeDistributiond& exact,
                           const std::string& state_name, NumberFormat fmt);
void write_sample_csv(std::ostream& out, const BitRecord& rec, const OutcomeDistributiond& exact,
                      NumberFormat fmt);

nlohmann::json convergence_json(const std::vector<ConvergenceRow>& rows,
                                const std::vector<std::string>& observers, NumberFormat fmt);
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows,
                           const std::vector<std::string>& observers, NumberFormat fmt);

}  // namespace qsi
