#ifndef LENGTHLAB_REPORT_HPP
#define LENGTHLAB_REPORT_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lengthlab/conjugacy.hpp"
#include "lengthlab/cut_locus.hpp"
#include "lengthlab/fans.hpp"
#include "lengthlab/rauch.hpp"

namespace lengthlab {

// One row of the radius table.
std::string radius_csv_header();
std::string radius_csv_row(const std::string& space,
                           const std::string& point_id, double eta,
                           const RadiusReport& r);

// JSON-lines records (one compact object per line).
std::string verdict_jsonl(const std::string& space, const std::string& subject,
                          const ConjugacyVerdict& v);
std::string audit_jsonl(const std::string& space, const std::string& audit,
                        bool ok, const std::map<std::string, double>& metrics,
                        const std::string& note);

// SVG figures. Model points are drawn in orthographic (x, y) projection.
std::string svg_comparison_bridge(const ComparisonBridge& cb);
// Fans are drawn for spaces whose first chart is planar; other geometries
// use the same orthographic projection of their evaluation points.
std::string svg_fan(const ChartComplex& X, const PolyCurve& C, const Fan& fan);

// Everything needed to reproduce a run byte-for-byte.
struct RunManifest {
  std::string command;
  std::uint64_t space_hash = 0;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 1234;
  std::string version = "lengthlab 1.0";

  std::string to_json() const;
  std::uint64_t hash() const;
};

}  // namespace lengthlab

#endif
