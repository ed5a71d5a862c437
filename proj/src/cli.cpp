#include "mpeckit/cli.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mpeckit/error.hpp"
#include "mpeckit/geometry.hpp"
#include "mpeckit/penalty.hpp"
#include "mpeckit/regularity.hpp"
#include "mpeckit/sensitivity.hpp"

namespace mpeckit {

using json = nlohmann::ordered_json;

namespace {

json rat(const Rational& r) { return r.to_string(); }

json vec(const Vector& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(rat(e));
  return a;
}

json mat(const Matrix& m) {
  json a = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i)));
  return a;
}

json vecs(const std::vector<Vector>& vs) {
  json a = json::array();
  for (const auto& v : vs) a.push_back(vec(v));
  return a;
}

// Index sets are reported 1-based.
json idx(const IndexSet& s) {
  json a = json::array();
  for (std::size_t i : s) a.push_back(i + 1);
  return a;
}

std::vector<std::string> variable_names(const MpecInstance& inst) {
  std::vector<std::string> names;
  for (std::size_t k = 0; k < inst.n(); ++k) {
    names.push_back(inst.n() == 1 ? "x" : "x" + std::to_string(k + 1));
  }
  for (std::size_t k = 0; k < inst.m(); ++k) {
    names.push_back(inst.m() == 1 ? "y" : "y" + std::to_string(k + 1));
  }
  return names;
}

json solution_set(const ViSolutionSet& s) {
  json r;
  json sols = json::array();
  for (const auto& sol : s.solutions) {
    json o;
    o["y"] = vec(sol.y);
    o["activeSet"] = idx(sol.active);
    o["multiplier"] = vec(sol.lambda);
    sols.push_back(std::move(o));
  }
  r["count"] = s.solutions.size();
  r["solutions"] = std::move(sols);
  r["exhaustive"] = s.exhaustive;
  json cont = json::array();
  for (const auto& c : s.continua) {
    json o;
    o["particular"] = vec(c.particular);
    o["directions"] = vecs(c.directions);
    o["pattern"] = idx(c.pattern);
    cont.push_back(std::move(o));
  }
  r["continua"] = std::move(cont);
  json irr = json::array();
  for (const auto& root : s.irrational) {
    json o;
    o["interval"] = {rat(root.lo), rat(root.hi)};
    o["source"] = root.source;
    o["verified"] = false;
    irr.push_back(std::move(o));
  }
  r["irrationalRoots"] = std::move(irr);
  return r;
}

json cone_json(const PolyhedralCone& c) {
  json o;
  o["inequalities"] = vecs(c.inequalities);
  o["equalities"] = vecs(c.equalities);
  return o;
}

json bstationarity_json(const BStationarity& bs) {
  json r;
  r["verdict"] = bs.stationary ? "Stationary" : "DescentDirection";
  if (!bs.stationary) {
    r["direction"] = vec(bs.direction);
    r["value"] = rat(bs.value);
    r["piece"] = *bs.piece;
  }
  json pv = json::array();
  for (const auto& v : bs.piece_values) pv.push_back(rat(v));
  r["pieceMinima"] = std::move(pv);
  return r;
}

std::string render_scalar(const json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

bool is_flat(const json& j) {
  return std::all_of(j.begin(), j.end(), [](const json& e) {
    return !e.is_structured() ||
           (e.is_array() && std::all_of(e.begin(), e.end(),
                                        [](const json& f) { return !f.is_structured(); }));
  });
}

std::string inline_array(const json& j) {
  std::string s = "(";
  bool first = true;
  for (const auto& e : j) {
    if (!first) s += ", ";
    first = false;
    s += e.is_array() ? inline_array(e) : render_scalar(e);
  }
  return s + ")";
}

void render_text(const json& j, int indent, std::ostream& os) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  for (auto it = j.begin(); it != j.end(); ++it) {
    const json& v = it.value();
    os << pad << it.key() << ":";
    if (v.is_object()) {
      os << "\n";
      render_text(v, indent + 2, os);
    } else if (v.is_array() && is_flat(v)) {
      os << " " << (v.empty() ? std::string("(none)") : inline_array(v)) << "\n";
    } else if (v.is_array()) {
      os << "\n";
      std::size_t k = 0;
      for (const auto& e : v) {
        os << pad << "  [" << ++k << "]";
        if (e.is_object()) {
          os << "\n";
          render_text(e, indent + 4, os);
        } else {
          os << " " << (e.is_array() ? inline_array(e) : render_scalar(e)) << "\n";
        }
      }
    } else {
      os << " " << render_scalar(v) << "\n";
    }
  }
}

std::vector<Rational> parse_list(const std::string& text) {
  const Vector v = parse_vector(text);
  return {v.begin(), v.end()};
}

struct Options {
  std::string format = "json";
  std::size_t cap = kDefaultEnumerationCap;
  std::string file;
  std::string x, point, lambda, dx, rho;
  std::string mode = "branch";
  std::string crcq_radius = "1/8";
  std::size_t crcq_samples = 5;
  std::string radius = "1/2";
  std::string step = "1/16";
};

Point parse_point(const MpecInstance& inst, const std::string& text) {
  return inst.split(parse_vector(text));
}

json run_command(const std::string& cmd, const Options& o, const MpecInstance& inst,
                 json& inputs, json& warnings) {
  json r;
  const std::size_t cap = o.cap;
  if (cmd == "lower-solve") {
    const Vector x = parse_vector(o.x);
    inputs["x"] = vec(x);
    r = solution_set(solve_lower(inst, x, cap));
    if (!inst.is_affine()) {
      warnings.push_back("polynomial lower level: candidate enumeration, exhaustive=false");
    }
  } else if (cmd == "kkt") {
    const Point p = parse_point(inst, o.point);
    const Vector lambda = parse_vector(o.lambda);
    inputs["point"] = vec(p.z());
    inputs["lambda"] = vec(lambda);
    const KktReport rep = check_kkt(inst, p.x, p.y, lambda);
    r["verdict"] = rep.valid() ? "Valid" : "Violations";
    json v = json::array();
    for (const auto& viol : rep.violations) {
      json e;
      e["relation"] = viol.relation;
      e["index"] = viol.index + 1;
      e["residual"] = rat(viol.residual);
      v.push_back(std::move(e));
    }
    r["violations"] = std::move(v);
  } else if (cmd == "multipliers") {
    const Point p = parse_point(inst, o.point);
    inputs["point"] = vec(p.z());
    const MultiplierPolytope mp = multiplier_set(inst, p);
    r["activeSet"] = idx(mp.active);
    r["bounded"] = mp.bounded;
    r["empty"] = mp.is_empty();
    r["vertices"] = vecs(mp.vertices);
    json hf;
    hf["A"] = mat(mp.h_form.A);
    hf["b"] = vec(mp.h_form.b);
    hf["Aeq"] = mat(mp.h_form.Aeq);
    hf["beq"] = vec(mp.h_form.beq);
    r["hForm"] = std::move(hf);
    if (mp.bounded && !mp.vertices.empty()) {
      const ScocFamily fam = scoc_family(inst, p, mp);
      json f = json::array();
      for (std::size_t t = 0; t < fam.sets.size(); ++t) {
        json e;
        e["J"] = idx(fam.sets[t]);
        e["witness"] = vec(fam.witnesses[t]);
        f.push_back(std::move(e));
      }
      r["scocFamily"] = std::move(f);
    }
  } else if (cmd == "cq") {
    const Point p = parse_point(inst, o.point);
    const Rational radius = Rational::parse(o.crcq_radius);
    inputs["point"] = vec(p.z());
    inputs["crcqRadius"] = rat(radius);
    inputs["crcqSamples"] = o.crcq_samples;
    const CqReport rep = check_cq(inst, p, radius, o.crcq_samples);
    json mf;
    mf["verdict"] = rep.mfcq.holds ? "Holds" : "Fails";
    if (rep.mfcq.holds) {
      mf["v"] = vec(rep.mfcq.v);
      mf["t"] = rat(rep.mfcq.t);
    }
    r["mfcq"] = std::move(mf);
    json li;
    li["verdict"] = rep.licq.holds ? "Holds" : "Fails";
    li["rank"] = rep.licq.rank;
    li["activeCount"] = rep.licq.active_count;
    r["licq"] = std::move(li);
    json cr;
    cr["verdict"] = rep.crcq.falsified ? "Falsified" : "NotFalsified";
    cr["sampleCount"] = rep.crcq.sample_count;
    if (rep.crcq.falsified) {
      cr["J"] = idx(rep.crcq.J);
      cr["referencePoint"] = vec(rep.crcq.reference_point);
      cr["samplePoint"] = vec(rep.crcq.sample_point);
      cr["referenceRank"] = rep.crcq.reference_rank;
      cr["sampleRank"] = rep.crcq.sample_rank;
    }
    r["crcq"] = std::move(cr);
    r["convexityWarning"] = rep.convexity_warning;
  } else if (cmd == "scoc") {
    const Point p = parse_point(inst, o.point);
    inputs["point"] = vec(p.z());
    const ScocVerdict v = check_scoc(inst, p);
    r["verdict"] = v.holds ? "Holds" : "Fails";
    if (v.holds) r["sign"] = v.sign;
    if (!v.holds) {
      r["reason"] = v.reason;
      r["offendingJ"] = idx(*v.offending);
    }
    json ms = json::array();
    for (const auto& sm : v.matrices) {
      json e;
      e["J"] = idx(sm.J);
      e["witness"] = vec(sm.witness);
      e["matrix"] = mat(sm.a);
      e["detSign"] = sm.det_sign;
      ms.push_back(std::move(e));
    }
    r["matrices"] = std::move(ms);
    const ReducedScocVerdict red = check_scoc_reduced(inst, p);
    json rd;
    if (red.applicable) {
      rd["verdict"] = "Equivalent";
      rd["reducedMatrix"] = mat(red.reduced);
      rd["detSign"] = red.det_sign;
      rd["nonsingular"] = red.nonsingular;
    } else {
      rd["verdict"] = "NotApplicable";
      rd["reason"] = red.reason;
    }
    r["reduced"] = std::move(rd);
  } else if (cmd == "sensitivity") {
    const Point p = parse_point(inst, o.point);
    const Vector dx = parse_vector(o.dx);
    inputs["point"] = vec(p.z());
    inputs["dx"] = vec(dx);
    const auto crit = critical_multipliers(inst, p, dx);
    r["criticalMultipliers"] = vecs(crit);
    json per = json::array();
    for (const auto& lambda : crit) {
      const DirectionalDerivative d = solve_directional_avi(inst, p, lambda, dx, cap);
      json e;
      e["lambda"] = vec(lambda);
      e["solutions"] = vecs(d.solutions);
      e["unique"] = d.unique;
      per.push_back(std::move(e));
    }
    r["perMultiplier"] = std::move(per);
    const DirectionalDerivative d = directional_derivative(inst, p, dx, cap);
    r["dy"] = vec(d.dy);
    r["reducedDirectionalDerivative"] = rat(reduced_directional_derivative(inst, p, dx, cap));
  } else if (cmd == "frechet") {
    const Point p = parse_point(inst, o.point);
    inputs["point"] = vec(p.z());
    const FrechetResult fr = frechet_test(inst, p, cap);
    r["verdict"] = fr.differentiable ? "FDifferentiable" : "NotFDifferentiable";
    if (fr.differentiable) {
      r["jacobian"] = mat(fr.jacobian);
    } else {
      r["witness"] = vec(fr.witness);
      r["reason"] = fr.reason;
    }
    warnings.push_back("finite test over +/-e_k and pairwise sums");
  } else if (cmd == "stationarity") {
    const Point p = parse_point(inst, o.point);
    inputs["point"] = vec(p.z());
    inputs["mode"] = o.mode;
    if (o.mode == "branch") {
      r = bstationarity_json(bstationarity_check(inst, p, cap));
      const LocalMinCertificate lm = local_min_certificate(inst, p, cap);
      json c;
      c["verdict"] = lm.local_minimum ? "LocalMinimum" : "Inconclusive";
      c["reason"] = lm.reason;
      r["localMinCertificate"] = std::move(c);
    } else if (o.mode == "imp") {
      const ImpStationarity s = imp_stationarity_check(inst, p, cap);
      r["verdict"] = s.stationary ? "Stationary" : "DescentDirection";
      if (!s.stationary) {
        r["witness"] = vec(s.witness);
        r["value"] = rat(s.value);
      }
      json t = json::array();
      for (const auto& [d, v] : s.tested) {
        json e;
        e["dx"] = vec(d);
        e["value"] = rat(v);
        t.push_back(std::move(e));
      }
      r["tested"] = std::move(t);
      if (s.branch_stationary) {
        r["branchVerdict"] = *s.branch_stationary ? "Stationary" : "DescentDirection";
      }
    } else {
      throw Error(ErrorKind::InvalidArgument, "--mode must be imp or branch");
    }
  } else if (cmd == "tangent") {
    const Point p = parse_point(inst, o.point);
    inputs["point"] = vec(p.z());
    const ConeUnion cu = tangent_cone(inst, p, cap);
    r["generators"] = vecs(cu.generators());
    json pieces = json::array();
    for (const auto& piece : cu.pieces) {
      json e;
      e["branch"] = piece.branch_id;
      e["mask"] = piece.mask;
      e["exact"] = piece.exact;
      e["exactness"] = piece.exactness;
      e["cone"] = cone_json(piece.cone);
      e["generators"] = vecs(piece.generators);
      e["trusted"] = vecs(piece.trusted);
      if (!piece.evidence.empty()) {
        json ev = json::array();
        for (const auto& g : piece.evidence) {
          json x;
          x["direction"] = vec(g.direction);
          x["realized"] = g.realized;
          x["error"] = rat(g.error);
          ev.push_back(std::move(x));
        }
        e["evidence"] = std::move(ev);
        warnings.push_back("tangent piece of branch " + std::to_string(piece.branch_id) +
                           " is unverified; only sampled generators are trusted");
      }
      pieces.push_back(std::move(e));
    }
    r["pieces"] = std::move(pieces);
  } else if (cmd == "branches") {
    const auto names = variable_names(inst);
    const auto brs = enumerate_branches(inst, cap);
    json list = json::array();
    for (const auto& br : brs) {
      json e;
      e["id"] = br.id;
      e["mask"] = br.mask;
      e["gActive"] = idx(br.g_active);
      e["linear"] = br.linear;
      json eq = json::array(), in = json::array();
      for (const auto& p : br.equalities) eq.push_back(p.to_string(names) + " = 0");
      for (const auto& p : br.inequalities) in.push_back(p.to_string(names) + " <= 0");
      e["equalities"] = std::move(eq);
      e["inequalities"] = std::move(in);
      list.push_back(std::move(e));
    }
    r["branches"] = std::move(list);
    if (inst.is_affine() && convex_quadratic(inst.objective())) {
      const BranchMinimizers bm = branch_minimizers(inst, cap);
      json c = json::array();
      for (const auto& cand : bm.candidates) {
        json e;
        e["branch"] = cand.branch_id;
        e["point"] = vec(cand.z);
        e["objective"] = rat(cand.value);
        c.push_back(std::move(e));
      }
      r["branchMinimizers"] = std::move(c);
      if (bm.best) r["bestCandidate"] = vec(bm.candidates[*bm.best].z);
    }
  } else if (cmd == "penalty") {
    const Point p = parse_point(inst, o.point);
    const auto rhos = parse_list(o.rho);
    const Rational radius = Rational::parse(o.radius);
    const Rational step = Rational::parse(o.step);
    inputs["point"] = vec(p.z());
    inputs["rho"] = vec(Vector(rhos.begin(), rhos.end()));
    inputs["radius"] = rat(radius);
    inputs["step"] = rat(step);
    const PenaltyScanReport rep = empirical_exactness_scan(inst, p, rhos, radius, step, cap);
    r["referenceValue"] = rat(rep.reference_value);
    r["gridPoints"] = rep.grid_points;
    json rows = json::array();
    for (const auto& row : rep.rows) {
      json e;
      e["rho"] = rat(row.rho);
      e["gridMin"] = rat(row.grid_min);
      e["argmin"] = vec(row.argmin);
      e["matchesReference"] = row.matches_reference;
      rows.push_back(std::move(e));
    }
    r["scan"] = std::move(rows);
    r["empiricalRhoBar"] = rep.empirical_rho ? json(rat(*rep.empirical_rho)) : json(nullptr);
    r["residual"] = rep.residual_note;
  }
  return r;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"First-order MPEC analysis toolkit", "mpeckit"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--enum-cap", o.cap, "Enumeration cap for complementarity patterns");
  app.set_version_flag("--version", kToolVersion);

  struct Command {
    const char* name;
    const char* help;
    std::vector<std::pair<const char*, std::string*>> required;
  };
  const std::vector<Command> commands = {
      {"lower-solve", "Solve the lower-level VI at x", {{"--x", &o.x}}},
      {"kkt", "Check the lower-level KKT system", {{"--point", &o.point}, {"--lambda", &o.lambda}}},
      {"multipliers", "Multiplier polytope and SCOC index family", {{"--point", &o.point}}},
      {"cq", "MFCQ, LICQ and sampled CRCQ", {{"--point", &o.point}}},
      {"scoc", "Strong coherent orientation condition", {{"--point", &o.point}}},
      {"sensitivity", "Directional derivative of the solution map", {{"--point", &o.point}, {"--dx", &o.dx}}},
      {"frechet", "Frechet differentiability test", {{"--point", &o.point}}},
      {"stationarity", "Stationarity test", {{"--point", &o.point}}},
      {"tangent", "Tangent cone of the feasible set", {{"--point", &o.point}}},
      {"branches", "Branch decomposition of the feasible set", {}},
      {"penalty", "Empirical exact-penalty scan", {{"--point", &o.point}, {"--rho", &o.rho}}},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& s : commands) {
    CLI::App* sub = app.add_subcommand(s.name, s.help);
    sub->fallthrough();
    sub->add_option("file", o.file, "Instance file")->required();
    for (const auto& [flag, target] : s.required) {
      sub->add_option(flag, *target)->required()->allow_extra_args(false);
    }
    subs[s.name] = sub;
  }
  subs["cq"]->add_option("--crcq-radius", o.crcq_radius, "CRCQ sampling radius");
  subs["cq"]->add_option("--crcq-samples", o.crcq_samples, "CRCQ samples per axis");
  subs["stationarity"]->add_option("--mode", o.mode, "imp or branch")
      ->check(CLI::IsMember({"imp", "branch"}));
  subs["penalty"]->add_option("--radius", o.radius, "Grid radius");
  subs["penalty"]->add_option("--step", o.step, "Grid step");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::string cmd;
  for (const auto& [name, sub] : subs) {
    if (sub->parsed()) cmd = name;
  }

  try {
    const MpecInstance inst = load_instance(o.file);
    json report;
    report["reportVersion"] = kReportVersion;
    report["tool"] = kToolVersion;
    report["instance"] = inst.name();
    report["command"] = cmd;
    json inputs;
    inputs["file"] = o.file;
    inputs["enumCap"] = o.cap;
    json warnings = json::array();
    if (convexity_warning(inst)) {
      warnings.push_back("some g_i is not convex in y; results are reported with this caveat");
    }
    json results = run_command(cmd, o, inst, inputs, warnings);
    report["inputs"] = std::move(inputs);
    report["results"] = std::move(results);
    report["warnings"] = std::move(warnings);
    if (o.format == "json") {
      out << report.dump(2) << "\n";
    } else {
      render_text(report, 0, out);
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_assumption_violation(e.kind()) ? 3 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace mpeckit
