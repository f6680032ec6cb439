// lengthlab: command-line front end for the geodesic-space laboratory.
//
// Exit codes: 0 pass / certificate produced, 1 malformed input,
// 2 theorem-violation finding, 3 inconclusive.

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "lengthlab/catalog.hpp"
#include "lengthlab/conjugacy.hpp"
#include "lengthlab/cut_locus.hpp"
#include "lengthlab/fans.hpp"
#include "lengthlab/rauch.hpp"
#include "lengthlab/report.hpp"
#include "lengthlab/spacefile.hpp"

using namespace lengthlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitViolation = 2;
constexpr int kExitInconclusive = 3;

struct SpaceArg {
  std::string name_or_path;
  std::vector<std::string> params;  // key=value overrides (catalog names only)

  catalog::SpacePtr build() const {
    if (!params.empty()) {
      std::map<std::string, double> p;
      for (const auto& kv : params) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos)
          throw std::invalid_argument("expected key=value: " + kv);
        p[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
      }
      return catalog::build_by_name(name_or_path, p);
    }
    return resolve_space(name_or_path);
  }

  // Hash of the definition: the file text when a file, otherwise the
  // normalized catalog reference.
  std::uint64_t hash() const {
    std::ifstream f(name_or_path);
    if (f) {
      std::stringstream ss;
      ss << f.rdbuf();
      return text_hash(ss.str());
    }
    std::string t = "catalog=" + name_or_path;
    for (const auto& kv : params) t += ";" + kv;
    return text_hash(t);
  }

  void add_to(CLI::App* cmd) {
    cmd->add_option("--space", name_or_path, "catalog name or space file")
        ->required();
    cmd->add_option("--param", params, "space parameter key=value");
  }
};

Vec3 parse_vec(const std::string& s) {
  Vec3 v{0, 0, 0};
  std::istringstream is(s);
  char comma;
  if (!(is >> v.x)) throw std::invalid_argument("bad coordinate: " + s);
  if (is >> comma >> v.y) is >> comma >> v.z;
  return v;
}

// "p1"/"p2"/... -> glued point representative; "chart:x,y,z" -> explicit;
// "x,y,z" -> chart 0.
SpacePoint parse_point(const ChartComplex& X, const std::string& s) {
  if (s.size() >= 2 && s[0] == 'p' &&
      s.find_first_not_of("0123456789", 1) == std::string::npos) {
    size_t k = std::stoul(s.substr(1));
    if (k >= 1 && k <= X.points.size()) return X.points[k - 1].reps[0];
    throw std::invalid_argument("space has no glued point " + s);
  }
  size_t colon = s.find(':');
  SpacePoint p;
  if (colon == std::string::npos) {
    p.chart = 0;
    p.c = parse_vec(s);
  } else {
    p.chart = std::stoi(s.substr(0, colon));
    p.c = parse_vec(s.substr(colon + 1));
  }
  if (p.chart < 0 || p.chart >= X.num_charts())
    throw std::invalid_argument("chart index out of range in " + s);
  return p;
}

std::vector<SpacePoint> load_polyline_fixture(const ChartComplex& X,
                                              const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open fixture: " + path);
  std::vector<SpacePoint> pts;
  std::string line;
  while (std::getline(f, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) pts.push_back(parse_point(X, tok));
  }
  if (pts.size() < 2)
    throw std::invalid_argument("fixture needs >= 2 points: " + path);
  return pts;
}

// Rows separated by blank lines; each row one point per whitespace token.
HomotopyGrid load_grid_fixture(const ChartComplex& X, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::invalid_argument("cannot open fixture: " + path);
  HomotopyGrid H;
  std::vector<SpacePoint> row;
  std::string line;
  while (std::getline(f, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream is(line);
    std::string tok;
    bool any = false;
    while (is >> tok) {
      row.push_back(parse_point(X, tok));
      any = true;
    }
    if (!any && !row.empty()) {
      H.rows.push_back(std::move(row));
      row.clear();
    }
  }
  if (!row.empty()) H.rows.push_back(std::move(row));
  if (H.rows.empty()) throw std::invalid_argument("empty grid fixture");
  return H;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw std::invalid_argument("cannot write: " + path);
  f << content;
}

struct ScheduleArgs {
  double r1 = 0.05, tau1 = 0.1;
  int levels = 3, n = 16;
  std::uint64_t seed = 1234;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--r1", r1, "first perturbation radius");
    cmd->add_option("--tau1", tau1, "first closeness threshold");
    cmd->add_option("--levels", levels, "shrink levels");
    cmd->add_option("--n", n, "perturbations per level");
    cmd->add_option("--seed", seed, "random seed");
  }
  ShrinkSchedule make() const {
    ShrinkSchedule s = ShrinkSchedule::standard(r1, tau1, levels, n);
    s.seed = seed;
    return s;
  }
};

void maybe_manifest(const std::string& path, const std::string& command,
                    const SpaceArg& sp,
                    const std::map<std::string, std::string>& params,
                    std::uint64_t seed) {
  if (path.empty()) return;
  RunManifest m;
  m.command = command;
  m.space_hash = sp.hash();
  m.parameters = params;
  m.seed = seed;
  write_file(path, m.to_json() + "\n");
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(9);
  os << v;
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "lengthlab: geodesics, conjugate points, cut loci, injectivity radii "
      "and comparison audits on glued constant-curvature surfaces"};
  app.require_subcommand(1);

  // ---- space ----
  auto* c_space = app.add_subcommand("space", "describe or validate a space");
  SpaceArg sp_space;
  sp_space.add_to(c_space);
  bool validate = false;
  int v_triples = 64, v_segments = 32;
  std::uint64_t v_seed = 1234;
  c_space->add_flag("--validate", validate, "sampled metric-axiom checks");
  c_space->add_option("--triples", v_triples, "triples for validation");
  c_space->add_option("--segments", v_segments, "segments for the witness");
  c_space->add_option("--seed", v_seed, "random seed");

  // ---- dist ----
  auto* c_dist = app.add_subcommand("dist", "distance between two points");
  SpaceArg sp_dist;
  sp_dist.add_to(c_dist);
  std::string d_from, d_to;
  double d_tol = 1e-7;
  c_dist->add_option("--from", d_from)->required();
  c_dist->add_option("--to", d_to)->required();
  c_dist->add_option("--tol", d_tol, "refinement tolerance");

  // ---- geodesics ----
  auto* c_geo = app.add_subcommand("geodesics",
                                   "enumerate geodesics between two points");
  SpaceArg sp_geo;
  sp_geo.add_to(c_geo);
  std::string g_from, g_to, g_csv;
  double g_lmax = 3.0;
  int g_m = 16;
  c_geo->add_option("--from", g_from)->required();
  c_geo->add_option("--to", g_to)->required();
  c_geo->add_option("--lmax", g_lmax, "length bound");
  c_geo->add_option("--samples", g_m, "samples per path in the dump");
  c_geo->add_option("--csv", g_csv, "write the geodesic dump here");

  // ---- conj ----
  auto* c_conj = app.add_subcommand(
      "conj", "conjugacy detectors along a minimizing geodesic");
  SpaceArg sp_conj;
  sp_conj.add_to(c_conj);
  std::string cj_from, cj_to, cj_detector = "ultimate", cj_jsonl, cj_manifest;
  ScheduleArgs cj_sched;
  c_conj->add_option("--from", cj_from)->required();
  c_conj->add_option("--to", cj_to)->required();
  c_conj->add_option("--detector", cj_detector,
                     "one_sided|symmetric|unreachable|ultimate");
  cj_sched.add_to(c_conj);
  c_conj->add_option("--jsonl", cj_jsonl, "append the verdict record here");
  c_conj->add_option("--manifest", cj_manifest, "write the run manifest here");

  // ---- radii ----
  auto* c_rad =
      app.add_subcommand("radii", "all radius variants at a base point");
  SpaceArg sp_rad;
  sp_rad.add_to(c_rad);
  std::string r_point, r_csv, r_manifest;
  double r_horizon = 3.0;
  int r_dirs = 8;
  ScheduleArgs r_sched;
  c_rad->add_option("--point", r_point)->required();
  c_rad->add_option("--horizon", r_horizon, "scan horizon");
  c_rad->add_option("--dirs", r_dirs, "scan directions");
  r_sched.add_to(c_rad);
  c_rad->add_option("--csv", r_csv, "write the radius table here");
  c_rad->add_option("--manifest", r_manifest, "write the run manifest here");

  // ---- klingenberg ----
  auto* c_kling = app.add_subcommand(
      "klingenberg", "pair or closed geodesic realizing the minimal radius");
  SpaceArg sp_kling;
  sp_kling.add_to(c_kling);
  double k_lmax = 4.0, k_r0 = -1, k_chord = -1;
  int k_base = 8;
  ScheduleArgs k_sched;
  c_kling->add_option("--lmax", k_lmax, "scan horizon");
  c_kling->add_option("--base", k_base, "sampled base points");
  c_kling->add_option("--r0", k_r0, "circle_chord arc parameter");
  c_kling->add_option("--chord", k_chord, "circle_chord chord length");
  k_sched.add_to(c_kling);

  // ---- rauch ----
  auto* c_rauch = app.add_subcommand(
      "rauch", "comparison certificates and the conjugate-length bound audit");
  SpaceArg sp_rauch;
  sp_rauch.add_to(c_rauch);
  double ra_kappa = 0, ra_horizon = 3.0;
  int ra_n = 20, ra_triangles = 40, ra_pairs = 6;
  std::string ra_jsonl, ra_manifest;
  ScheduleArgs ra_sched;
  ra_sched.n = 8;
  ra_sched.levels = 2;
  c_rauch->add_option("--kappa", ra_kappa, "curvature bound to audit")
      ->required();
  c_rauch->add_option("--geodesics", ra_n, "geodesics for the bound audit");
  c_rauch->add_option("--horizon", ra_horizon, "length cap when D_kappa=inf");
  c_rauch->add_option("--triangles", ra_triangles, "triangles for the tests");
  c_rauch->add_option("--pairs", ra_pairs, "point pairs per triangle");
  ra_sched.add_to(c_rauch);
  c_rauch->add_option("--jsonl", ra_jsonl, "append audit records here");
  c_rauch->add_option("--manifest", ra_manifest, "write the run manifest");

  // ---- fan ----
  auto* c_fan =
      app.add_subcommand("fan", "unfold the fan of a polyline fixture");
  SpaceArg sp_fan;
  sp_fan.add_to(c_fan);
  std::string f_curve, f_svg, f_jsonl;
  double f_bound = 0, f_step = -1, f_budget = -1;
  c_fan->add_option("--curve", f_curve, "polyline fixture file")->required();
  c_fan->add_option("--ult-bound", f_bound, "working conjugacy bound")
      ->required();
  c_fan->add_option("--step", f_step, "fan step (default L/32)");
  c_fan->add_option("--budget", f_budget, "continuity budget (default 6*step)");
  c_fan->add_option("--svg", f_svg, "write the fan figure here");
  c_fan->add_option("--jsonl", f_jsonl, "append the audit record here");

  // ---- homotopy ----
  auto* c_hom = app.add_subcommand(
      "homotopy", "two-fan audit of a null-homotopy grid fixture");
  SpaceArg sp_hom;
  sp_hom.add_to(c_hom);
  std::string h_loop, h_grid, h_jsonl;
  double h_bound = 0;
  c_hom->add_option("--loop", h_loop, "closed-curve polyline fixture")
      ->required();
  c_hom->add_option("--grid", h_grid, "homotopy grid fixture")->required();
  c_hom->add_option("--ult-bound", h_bound, "working conjugacy bound")
      ->required();
  c_hom->add_option("--jsonl", h_jsonl, "append the audit record here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_space) {
      auto X = sp_space.build();
      std::cout << describe_space(*X);
      if (!validate) return kExitOk;
      auto v = validate_space(*X, v_triples, v_segments, v_seed);
      for (const auto& issue : v.issues) std::cout << "issue: " << issue << "\n";
      std::cout << (v.ok ? "validation: ok" : "validation: FAILED")
                << " (witness validated to " << fmt(v.witness_validated)
                << ")\n";
      return v.ok ? kExitOk : kExitViolation;
    }

    if (*c_dist) {
      auto X = sp_dist.build();
      auto res = distance(*X, parse_point(*X, d_from), parse_point(*X, d_to),
                          d_tol);
      std::cout << fmt(res.d) << "\n";
      return kExitOk;
    }

    if (*c_geo) {
      auto X = sp_geo.build();
      auto gs = enumerate_geodesics(*X, parse_point(*X, g_from),
                                    parse_point(*X, g_to), g_lmax);
      std::ostringstream csv;
      csv << "space,path,length,m,samples\n";
      for (size_t i = 0; i < gs.size(); ++i) {
        std::cout << "geodesic " << i << ": length " << fmt(gs[i].length())
                  << "\n";
        csv << X->name << ',' << i << ',' << fmt(gs[i].length()) << ','
            << g_m << ',';
        for (int j = 0; j <= g_m; ++j) {
          SpacePoint q = gs[i].eval(static_cast<double>(j) / g_m);
          csv << q.chart << '|' << fmt(q.c.x) << '|' << fmt(q.c.y) << '|'
              << fmt(q.c.z) << (j < g_m ? " " : "");
        }
        csv << "\n";
      }
      if (!g_csv.empty()) write_file(g_csv, csv.str());
      std::cout << gs.size() << " geodesics within length " << fmt(g_lmax)
                << "\n";
      return kExitOk;
    }

    if (*c_conj) {
      auto X = sp_conj.build();
      GeodesicPath g = distance(*X, parse_point(*X, cj_from),
                                parse_point(*X, cj_to))
                           .path;
      ShrinkSchedule s = cj_sched.make();
      ConjugacyVerdict v;
      if (cj_detector == "one_sided")
        v = detect_one_sided(*X, g, s);
      else if (cj_detector == "symmetric")
        v = detect_symmetric(*X, g, s);
      else if (cj_detector == "unreachable")
        v = detect_unreachable(*X, g, s);
      else if (cj_detector == "ultimate")
        v = detect_ultimate(*X, g, s);
      else
        throw std::invalid_argument("unknown detector: " + cj_detector);
      std::string rec = verdict_jsonl(X->name, cj_from + "->" + cj_to, v);
      std::cout << rec << "\n";
      if (!cj_jsonl.empty()) {
        std::ofstream f(cj_jsonl, std::ios::app);
        f << rec << "\n";
      }
      maybe_manifest(cj_manifest, "conj", sp_conj,
                     {{"from", cj_from},
                      {"to", cj_to},
                      {"detector", cj_detector},
                      {"r1", fmt(cj_sched.r1)},
                      {"tau1", fmt(cj_sched.tau1)},
                      {"levels", std::to_string(cj_sched.levels)},
                      {"n", std::to_string(cj_sched.n)}},
                     cj_sched.seed);
      return v.kind == VerdictKind::inconclusive ? kExitInconclusive : kExitOk;
    }

    if (*c_rad) {
      auto X = sp_rad.build();
      SpacePoint p = parse_point(*X, r_point);
      RadiusReport rep =
          radius_report(*X, p, r_horizon, r_sched.make(), r_dirs);
      std::string table = radius_csv_header() + "\n" +
                          radius_csv_row(X->name, r_point, X->eta, rep) + "\n";
      std::cout << table;
      if (!r_csv.empty()) write_file(r_csv, table);
      maybe_manifest(r_manifest, "radii", sp_rad,
                     {{"point", r_point},
                      {"horizon", fmt(r_horizon)},
                      {"dirs", std::to_string(r_dirs)},
                      {"r1", fmt(r_sched.r1)},
                      {"tau1", fmt(r_sched.tau1)},
                      {"levels", std::to_string(r_sched.levels)},
                      {"n", std::to_string(r_sched.n)}},
                     r_sched.seed);
      auto chain = check_radius_chain(*X, rep);
      for (const auto& viol : chain.violations)
        std::cout << "chain violation: " << viol << "\n";
      return chain.ok ? kExitOk : kExitViolation;
    }

    if (*c_kling) {
      if (k_r0 > 0) sp_kling.params.push_back("r0=" + fmt(k_r0));
      if (k_chord > 0) sp_kling.params.push_back("chord=" + fmt(k_chord));
      auto X = sp_kling.build();
      KlingenbergResult res = klingenberg_search(*X, k_lmax, k_sched.make(),
                                                 k_base, k_sched.seed);
      if (res.ultimate_branch) {
        std::cout << "ultimate pair at distance " << fmt(res.min_rad) << "\n";
      } else {
        std::cout << "closed geodesic of length " << fmt(res.loop.length())
                  << " (min_rad " << fmt(res.min_rad) << ")\n";
      }
      if (!res.note.empty()) std::cout << "note: " << res.note << "\n";
      return res.caveat ? kExitInconclusive : kExitOk;
    }

    if (*c_rauch) {
      auto X = sp_rauch.build();
      auto cat = cat_triangle_test(*X, ra_kappa, ra_triangles, ra_pairs,
                                   ra_sched.seed);
      auto ang = angle_comparison_test(*X, ra_kappa, ra_triangles,
                                       ra_sched.seed);
      auto bound = rauch_conjugate_bound_audit(*X, ra_kappa, ra_sched.make(),
                                               ra_n, ra_horizon,
                                               ra_sched.seed);
      std::vector<std::string> recs;
      recs.push_back(audit_jsonl(
          X->name, "cat_triangle_test", cat.certified,
          {{"n_checked", (double)cat.n_checked},
           {"worst_violation", cat.worst_violation}},
          cat.counterexample));
      recs.push_back(audit_jsonl(
          X->name, "angle_comparison_test", ang.certified,
          {{"n_checked", (double)ang.n_checked},
           {"worst_violation", ang.worst_violation}},
          ang.counterexample));
      recs.push_back(audit_jsonl(
          X->name, "conjugate_length_bound", bound.n_symmetric == 0,
          {{"n_tested", (double)bound.n_tested},
           {"n_symmetric", (double)bound.n_symmetric},
           {"n_inconclusive", (double)bound.n_inconclusive}},
          bound.notes.empty() ? "" : bound.notes.front()));
      for (const auto& rec : recs) std::cout << rec << "\n";
      if (!ra_jsonl.empty()) {
        std::ofstream f(ra_jsonl, std::ios::app);
        for (const auto& rec : recs) f << rec << "\n";
      }
      maybe_manifest(ra_manifest, "rauch", sp_rauch,
                     {{"kappa", fmt(ra_kappa)},
                      {"geodesics", std::to_string(ra_n)},
                      {"horizon", fmt(ra_horizon)},
                      {"triangles", std::to_string(ra_triangles)},
                      {"pairs", std::to_string(ra_pairs)}},
                     ra_sched.seed);
      // A symmetric verdict below the bound, or a failed comparison test on
      // a space declaring this curvature bound, contradicts the theory.
      bool declared = X->cba_kappa && *X->cba_kappa <= ra_kappa + 1e-12;
      if (bound.n_symmetric > 0) return kExitViolation;
      if (declared && (!cat.certified || !ang.certified)) return kExitViolation;
      if (bound.n_inconclusive > 0 && bound.n_tested == bound.n_inconclusive)
        return kExitInconclusive;
      return kExitOk;
    }

    if (*c_fan) {
      auto X = sp_fan.build();
      PolyCurve C(*X, load_polyline_fixture(*X, f_curve));
      Fan fan = build_fan(*X, C, f_bound, f_budget, f_step);
      auto chk = fan_length_check(C, fan);
      std::string rec = audit_jsonl(
          X->name, "fan", chk.ok,
          {{"base_length", fan.base_length},
           {"limsup_length", fan.limsup_length},
           {"worst_excess", chk.worst_excess},
           {"step", fan.step},
           {"n_geodesics", (double)fan.sigmas.size()}},
          to_string(fan.status));
      std::cout << rec << "\n";
      if (!f_jsonl.empty()) {
        std::ofstream f(f_jsonl, std::ios::app);
        f << rec << "\n";
      }
      if (!f_svg.empty()) write_file(f_svg, svg_fan(*X, C, fan));
      if (!chk.ok) return kExitViolation;
      return fan.status == FanStatus::continuity_break ? kExitInconclusive
                                                       : kExitOk;
    }

    if (*c_hom) {
      auto X = sp_hom.build();
      auto loop_pts = load_polyline_fixture(*X, h_loop);
      GeodesicPath c;
      c.space = X.get();
      // the audited loop: a single polyline leg inside one chart
      for (const auto& q : loop_pts)
        if (q.chart != loop_pts[0].chart)
          throw std::invalid_argument(
              "loop fixture must stay inside one chart");
      c.leg_chart = {loop_pts[0].chart};
      c.legs.resize(1);
      for (const auto& q : loop_pts) c.legs[0].push_back(q.c);
      HomotopyGrid H = load_grid_fixture(*X, h_grid);
      auto rep = long_homotopy_audit(*X, c, H, h_bound);
      std::string rec = audit_jsonl(
          X->name, "long_homotopy",
          rep.status != HomotopyAuditStatus::bound_violation,
          {{"max_row_length", rep.max_row_length},
           {"break_t", (double)rep.break_t}},
          std::string(to_string(rep.status)) +
              (rep.note.empty() ? "" : "; " + rep.note));
      std::cout << rec << "\n";
      if (!h_jsonl.empty()) {
        std::ofstream f(h_jsonl, std::ios::app);
        f << rec << "\n";
      }
      switch (rep.status) {
        case HomotopyAuditStatus::grid_invalid:
          return kExitBadInput;
        case HomotopyAuditStatus::bound_violation:
          return kExitViolation;
        default:
          return kExitOk;
      }
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitOk;
}
