#include "lengthlab/spacefile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lengthlab/geodesic.hpp"

namespace lengthlab {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  size_t b = s.find_last_not_of(" \t\r\n");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

Vec3 parse_vec(const std::string& s) {
  Vec3 v{0, 0, 0};
  std::istringstream is(s);
  char comma;
  if (!(is >> v.x)) throw std::invalid_argument("bad coordinate: " + s);
  if (is >> comma >> v.y) is >> comma >> v.z;
  return v;
}

// chart:x,y,z
SpacePoint parse_space_point(const std::string& s) {
  size_t colon = s.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("expected chart:x,y,z in " + s);
  SpacePoint p;
  p.chart = std::stoi(s.substr(0, colon));
  p.c = parse_vec(s.substr(colon + 1));
  return p;
}

// chart:a;via;b
ArcSide parse_arc_side(const std::string& s) {
  size_t colon = s.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("expected chart:a;via;b in " + s);
  ArcSide side;
  side.chart = std::stoi(s.substr(0, colon));
  std::string rest = s.substr(colon + 1);
  std::vector<std::string> parts;
  size_t pos = 0;
  while (true) {
    size_t semi = rest.find(';', pos);
    parts.push_back(rest.substr(pos, semi - pos));
    if (semi == std::string::npos) break;
    pos = semi + 1;
  }
  if (parts.size() != 3)
    throw std::invalid_argument("arc side needs a;via;b in " + s);
  side.a = parse_vec(parts[0]);
  side.via = parse_vec(parts[1]);
  side.b = parse_vec(parts[2]);
  return side;
}

void add_chart(ChartComplex& X, const std::string& value) {
  auto toks = split_ws(value);
  if (toks.empty()) throw std::invalid_argument("empty chart spec");
  const std::string& kind = toks[0];
  if (kind == "segment") {
    X.charts.push_back(std::make_unique<SegmentChart>(std::stod(toks.at(1))));
  } else if (kind == "flat_disk") {
    X.charts.push_back(std::make_unique<FlatChart>(std::stod(toks.at(1))));
  } else if (kind == "flat_polygon") {
    std::vector<Vec3> poly;
    for (size_t i = 1; i < toks.size(); ++i) poly.push_back(parse_vec(toks[i]));
    X.charts.push_back(std::make_unique<FlatChart>(std::move(poly)));
  } else if (kind == "sphere") {
    std::vector<Vec3> normals;
    for (size_t i = 1; i < toks.size(); ++i) {
      std::string t = toks[i];
      t.erase(std::remove(t.begin(), t.end(), '['), t.end());
      t.erase(std::remove(t.begin(), t.end(), ']'), t.end());
      if (!t.empty()) normals.push_back(parse_vec(t));
    }
    X.charts.push_back(std::make_unique<SphereChart>(std::move(normals)));
  } else {
    throw std::invalid_argument("unknown chart kind: " + kind);
  }
}

}  // namespace

catalog::SpacePtr parse_space_text(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::string catalog_name;
  std::map<std::string, double> params;
  auto X = std::make_shared<ChartComplex>();
  bool explicit_any = false;

  while (std::getline(is, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("expected key = value: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));

    if (key == "catalog") {
      catalog_name = value;
    } else if (key.rfind("param ", 0) == 0) {
      params[trim(key.substr(6))] = std::stod(value);
    } else if (key == "name") {
      X->name = value;
      explicit_any = true;
    } else if (key == "chart") {
      add_chart(*X, value);
      explicit_any = true;
    } else if (key == "point_gluing") {
      PointGluing g;
      for (auto& tok : split_ws(value)) g.reps.push_back(parse_space_point(tok));
      X->points.push_back(std::move(g));
      explicit_any = true;
    } else if (key == "arc_gluing") {
      ArcGluing g;
      for (auto& tok : split_ws(value)) g.sides.push_back(parse_arc_side(tok));
      X->arcs.push_back(std::move(g));
      explicit_any = true;
    } else if (key == "eta") {
      X->eta = std::stod(value);
      explicit_any = true;
    } else if (key == "delta_witness") {
      X->delta_witness = std::stod(value);
      explicit_any = true;
    } else if (key == "cba_kappa") {
      X->cba_kappa = std::stod(value);
      explicit_any = true;
    } else {
      throw std::invalid_argument("unknown key: " + key);
    }
  }

  if (!catalog_name.empty()) {
    if (explicit_any)
      throw std::invalid_argument(
          "a definition is either a catalog reference or explicit, not both");
    return catalog::build_by_name(catalog_name, params);
  }
  if (!explicit_any) throw std::invalid_argument("empty space definition");
  if (X->charts.empty()) throw std::invalid_argument("no charts defined");
  X->finalize();
  return X;
}

catalog::SpacePtr load_space_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open space file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_space_text(ss.str());
}

catalog::SpacePtr resolve_space(const std::string& name_or_path) {
  try {
    return catalog::build_by_name(name_or_path, {});
  } catch (const std::invalid_argument&) {
    return load_space_file(name_or_path);
  }
}

std::string describe_space(const ChartComplex& X) {
  std::ostringstream os;
  os << "space: " << X.name << "\n";
  os << "charts: " << X.num_charts() << "\n";
  for (int i = 0; i < X.num_charts(); ++i) {
    const Chart& ch = X.chart(i);
    os << "  [" << i << "] dim=" << ch.dim() << " curvature=" << ch.curvature()
       << " diameter=" << ch.diameter() << "\n";
  }
  os << "arc gluings: " << X.arcs.size() << "\n";
  os << "point gluings: " << X.points.size() << "\n";
  os << "interface nodes: " << X.nodes().size() << "\n";
  os << "eta: " << X.eta << "\n";
  os << "delta_witness: " << X.delta_witness << "\n";
  if (X.cba_kappa)
    os << "curvature bound (declared): " << *X.cba_kappa << "\n";
  else
    os << "curvature bound (declared): none\n";
  return os.str();
}

std::uint64_t text_hash(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

SpaceValidation validate_space(const ChartComplex& X, int n_triples,
                               int n_segments, std::uint64_t seed) {
  SpaceValidation v;
  Rng rng(seed);
  for (int i = 0; i < n_triples; ++i) {
    SpacePoint a = X.sample_point(rng);
    SpacePoint b = X.sample_point(rng);
    SpacePoint c = X.sample_point(rng);
    double ab = distance(X, a, b).d;
    double bc = distance(X, b, c).d;
    double ac = distance(X, a, c).d;
    // distances carry the interface-net refinement tolerance
    double slack = 1e-6 * (1 + ab + bc + ac);
    if (ac > ab + bc + slack) {
      v.ok = false;
      std::ostringstream os;
      os << "triangle inequality violated by " << ac - ab - bc
         << " on sampled triple " << i;
      v.issues.push_back(os.str());
    }
    if (std::fabs(distance(X, b, a).d - ab) > slack) {
      v.ok = false;
      v.issues.push_back("sampled symmetry violation");
    }
  }
  if (X.delta_witness > 0) {
    v.witness_validated =
        uniform_minimizing_radius(X, X.delta_witness, n_segments, rng);
    if (v.witness_validated < X.delta_witness * (1 - 1e-9)) {
      v.ok = false;
      std::ostringstream os;
      os << "declared witness " << X.delta_witness
         << " not validated; sampled segments only minimize up to "
         << v.witness_validated;
      v.issues.push_back(os.str());
    }
  }
  return v;
}

}  // namespace lengthlab
