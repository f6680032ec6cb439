#include "lengthlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "lengthlab/spacefile.hpp"

namespace lengthlab {

namespace {

// Fixed-precision formatting so identical inputs produce identical bytes.
std::string num(double v, int prec = 9) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string radius_csv_header() {
  return "space,point,horizon,eta,first_inj,unique_inj,min_rad,sym_inj,"
         "ult_inj,ult_conj,schedule_hash,caveats";
}

std::string radius_csv_row(const std::string& space,
                           const std::string& point_id, double eta,
                           const RadiusReport& r) {
  std::ostringstream os;
  os << csv_field(space) << ',' << csv_field(point_id) << ','
     << num(r.horizon) << ',' << num(eta) << ','
     << r.first_inj.str_at_horizon(r.horizon) << ','
     << r.unique_inj.str_at_horizon(r.horizon) << ','
     << r.min_rad.str_at_horizon(r.horizon) << ','
     << r.sym_inj.str_at_horizon(r.horizon) << ','
     << r.ult_inj.str_at_horizon(r.horizon) << ','
     << r.ult_conj.str_at_horizon(r.horizon) << ',' << r.schedule_hash << ','
     << csv_field(r.caveats);
  return os.str();
}

std::string verdict_jsonl(const std::string& space, const std::string& subject,
                          const ConjugacyVerdict& v) {
  nlohmann::ordered_json j;
  j["record"] = "verdict";
  j["space"] = space;
  j["subject"] = subject;
  j["kind"] = to_string(v.kind);
  if (v.kind == VerdictKind::ultimate) j["sub_kind"] = to_string(v.sub_kind);
  j["levels_completed"] = v.levels_completed;
  j["enumeration_caveat"] = v.enumeration_caveat;
  nlohmann::ordered_json ws = nlohmann::ordered_json::array();
  for (const auto& w : v.witnesses) {
    nlohmann::ordered_json jw;
    jw["level"] = w.level;
    jw["d_sigma"] = w.d_sigma;
    jw["d_gamma"] = w.d_gamma;
    ws.push_back(jw);
  }
  j["witnesses"] = ws;
  if (!v.note.empty()) j["note"] = v.note;
  return j.dump();
}

std::string audit_jsonl(const std::string& space, const std::string& audit,
                        bool ok, const std::map<std::string, double>& metrics,
                        const std::string& note) {
  nlohmann::ordered_json j;
  j["record"] = "audit";
  j["space"] = space;
  j["audit"] = audit;
  j["ok"] = ok;
  nlohmann::ordered_json m;
  for (const auto& [k, v] : metrics) m[k] = v;
  j["metrics"] = m;
  if (!note.empty()) j["note"] = note;
  return j.dump();
}

namespace {

struct Viewport {
  double minx = 0, miny = 0, scale = 1;
  double width = 640, height = 420, margin = 30;

  void fit(const std::vector<Vec3>& pts) {
    if (pts.empty()) return;
    double maxx = pts[0].x, maxy = pts[0].y;
    minx = pts[0].x;
    miny = pts[0].y;
    for (const auto& p : pts) {
      minx = std::min(minx, p.x);
      maxx = std::max(maxx, p.x);
      miny = std::min(miny, p.y);
      maxy = std::max(maxy, p.y);
    }
    double sx = (width - 2 * margin) / std::max(maxx - minx, 1e-9);
    double sy = (height - 2 * margin) / std::max(maxy - miny, 1e-9);
    scale = std::min(sx, sy);
  }
  double X(double x) const { return margin + (x - minx) * scale; }
  // SVG y grows downward; flip so the drawing is right-side up.
  double Y(double y) const { return height - margin - (y - miny) * scale; }
};

void svg_polyline(std::ostringstream& os, const Viewport& vp,
                  const std::vector<Vec3>& pts, const std::string& color,
                  double width, bool dashed = false) {
  os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\""
     << width << "\"";
  if (dashed) os << " stroke-dasharray=\"4,3\"";
  os << " points=\"";
  for (const auto& p : pts) os << num(vp.X(p.x), 6) << ',' << num(vp.Y(p.y), 6) << ' ';
  os << "\"/>\n";
}

void svg_line(std::ostringstream& os, const Viewport& vp, const Vec3& a,
              const Vec3& b, const std::string& color, double width,
              bool dashed = false) {
  svg_polyline(os, vp, {a, b}, color, width, dashed);
}

std::string svg_open(double w, double h) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << ' ' << h
     << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return os.str();
}

}  // namespace

std::string svg_comparison_bridge(const ComparisonBridge& cb) {
  std::vector<Vec3> g, s, all;
  for (const auto& p : cb.deck_gamma) g.push_back(p.x);
  for (const auto& p : cb.deck_sigma) s.push_back(p.x);
  all = g;
  all.insert(all.end(), s.begin(), s.end());

  Viewport vp;
  vp.fit(all);
  std::ostringstream os;
  os << svg_open(vp.width, vp.height);
  // struts: transverse sides solid, diagonals dashed
  size_t n = std::min(g.size(), s.size());
  for (size_t j = 0; j + 1 < n; ++j)
    svg_line(os, vp, g[j], s[j + 1], "#bbbbbb", 0.8, true);
  for (size_t j = 0; j < n; ++j)
    svg_line(os, vp, g[j], s[j], "#888888", 1.0);
  svg_polyline(os, vp, g, "#1f77b4", 2.0);
  svg_polyline(os, vp, s, "#d62728", 2.0);
  for (size_t j = 0; j < g.size(); ++j) {
    os << "<circle cx=\"" << num(vp.X(g[j].x), 6) << "\" cy=\""
       << num(vp.Y(g[j].y), 6) << "\" r=\"2.5\" fill=\"#1f77b4\"/>\n";
    if (j >= 1 && j <= cb.angle_sum_gamma.size())
      os << "<text x=\"" << num(vp.X(g[j].x) + 4, 6) << "\" y=\""
         << num(vp.Y(g[j].y) - 4, 6) << "\" font-size=\"9\" fill=\"#1f77b4\">"
         << num(cb.angle_sum_gamma[j - 1], 4) << "</text>\n";
  }
  for (size_t j = 0; j < s.size(); ++j) {
    os << "<circle cx=\"" << num(vp.X(s[j].x), 6) << "\" cy=\""
       << num(vp.Y(s[j].y), 6) << "\" r=\"2.5\" fill=\"#d62728\"/>\n";
    if (j >= 1 && j <= cb.angle_sum_sigma.size())
      os << "<text x=\"" << num(vp.X(s[j].x) + 4, 6) << "\" y=\""
         << num(vp.Y(s[j].y) + 10, 6) << "\" font-size=\"9\" fill=\"#d62728\">"
         << num(cb.angle_sum_sigma[j - 1], 4) << "</text>\n";
  }
  os << "<text x=\"8\" y=\"14\" font-size=\"11\" fill=\"#333333\">"
     << "comparison bridge, kappa=" << num(cb.kappa, 4)
     << ", max side error=" << num(cb.max_side_error, 3) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string svg_fan(const ChartComplex& X, const PolyCurve& C, const Fan& fan) {
  (void)X;
  auto curve_pts = [](const GeodesicPath& gpath, int m) {
    std::vector<Vec3> pts;
    for (int i = 0; i <= m; ++i)
      pts.push_back(gpath.eval(static_cast<double>(i) / m).c);
    return pts;
  };
  std::vector<Vec3> base;
  for (const auto& p : C.samples()) base.push_back(p.c);

  std::vector<std::vector<Vec3>> sig;
  for (const auto& gpath : fan.sigmas)
    if (gpath.length() > 1e-12) sig.push_back(curve_pts(gpath, 24));

  std::vector<Vec3> all = base;
  for (const auto& pl : sig) all.insert(all.end(), pl.begin(), pl.end());
  Viewport vp;
  vp.fit(all);
  std::ostringstream os;
  os << svg_open(vp.width, vp.height);
  for (size_t i = 0; i < sig.size(); ++i) {
    // shade from light to dark along the fan
    int shade = 210 - static_cast<int>(150.0 * (i + 1) / sig.size());
    std::ostringstream col;
    col << "rgb(" << shade << ',' << shade << ",230)";
    svg_polyline(os, vp, sig[i], col.str(), 1.0);
  }
  svg_polyline(os, vp, base, "#d62728", 2.0);
  os << "<text x=\"8\" y=\"14\" font-size=\"11\" fill=\"#333333\">fan: "
     << fan.sigmas.size() << " geodesics, status=" << to_string(fan.status)
     << ", limsup length=" << num(fan.limsup_length, 5) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["record"] = "manifest";
  j["version"] = version;
  j["command"] = command;
  j["space_hash"] = space_hash;
  j["seed"] = seed;
  nlohmann::ordered_json p;
  for (const auto& [k, v] : parameters) p[k] = v;
  j["parameters"] = p;
  return j.dump();
}

std::uint64_t RunManifest::hash() const { return text_hash(to_json()); }

}  // namespace lengthlab
