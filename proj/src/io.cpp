#include "concave2d/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>
#include <memory>

namespace concave2d {

namespace {

Json vec_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }

Vec2 vec_from(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw IoError("expected a 2-element array");
  return {j[0].get<double>(), j[1].get<double>()};
}

struct FileCloser {
  void operator()(std::FILE* f) const { std::fclose(f); }
};

std::unique_ptr<std::FILE, FileCloser> open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "w"));
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  return f;
}

}  // namespace

Json domain_spec_to_json(const DomainSpec& spec) {
  Json j;
  j["kind"] = spec.kind();
  if (const auto* e = std::get_if<EllipseSpec>(&spec.shape)) {
    j["p"] = e->p;
    j["q"] = e->q;
  } else if (const auto* f = std::get_if<PolarFourierSpec>(&spec.shape)) {
    j["r0"] = f->r0;
    j["cos"] = f->cos_coeffs;
    j["sin"] = f->sin_coeffs;
  } else {
    Json pts = Json::array();
    for (const auto& p : std::get<SampledSpec>(spec.shape).points) pts.push_back(vec_json(p));
    j["points"] = std::move(pts);
  }
  j["transform"] = {{"scale", spec.transform.scale},
                    {"rotation", spec.transform.rotation},
                    {"center", vec_json(spec.transform.center)}};
  return j;
}

DomainSpec domain_spec_from_json(const Json& j) {
  try {
    DomainSpec spec;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ellipse") {
      spec.shape = EllipseSpec{j.at("p").get<double>(), j.at("q").get<double>()};
    } else if (kind == "polar-fourier") {
      PolarFourierSpec f;
      f.r0 = j.at("r0").get<double>();
      f.cos_coeffs = j.value("cos", std::vector<double>{});
      f.sin_coeffs = j.value("sin", std::vector<double>{});
      spec.shape = std::move(f);
    } else if (kind == "sampled") {
      SampledSpec s;
      for (const auto& p : j.at("points")) s.points.push_back(vec_from(p));
      spec.shape = std::move(s);
    } else {
      throw IoError("unknown domain kind '" + kind + "'");
    }
    if (j.contains("transform")) {
      const auto& t = j["transform"];
      spec.transform.scale = t.value("scale", 1.0);
      spec.transform.rotation = t.value("rotation", 0.0);
      if (t.contains("center")) spec.transform.center = vec_from(t["center"]);
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed domain spec: ") + e.what());
  }
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

DomainSpec read_domain_spec(const std::filesystem::path& path) { return domain_spec_from_json(read_json(path)); }

namespace {

void dump_to(std::string& out, const Json& j, int depth) {
  auto newline = [&](int d) {
    out += '\n';
    out.append(static_cast<std::size_t>(2 * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += ": ";
        dump_to(out, value, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // short numeric arrays (points, vectors) stay on one line
      const bool flat = j.size() <= 4 && std::all_of(j.begin(), j.end(), [](const Json& v) { return v.is_primitive(); });
      out += '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat ? ", " : ",";
        if (!flat) newline(depth + 1);
        dump_to(out, j[i], depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      // keep it a float on re-parse
      if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const Json& j) {
  std::string out;
  dump_to(out, j, 0);
  out += '\n';
  return out;
}

void write_json(const std::filesystem::path& path, const Json& j) {
  auto f = open_out(path);
  const std::string s = dump_json(j);
  if (std::fwrite(s.data(), 1, s.size(), f.get()) != s.size()) throw IoError("short write to " + path.string());
}

// ---------------------------------------------------------------------------

Json ellipse_json(const TangentEllipse& e) {
  return {{"a", e.a}, {"b", e.b}, {"c", e.c}, {"h", e.h}, {"k", e.k},
          {"A", e.area}, {"K_E", e.curvature}, {"dKE_ds", e.curvature_ds}};
}

Json cpc_json(const CpcPoint& p) {
  return {{"A_p", p.parabola.A},
          {"B_p", p.parabola.B},
          {"contained", p.containment.contained},
          {"violation", p.containment.max_violation}};
}

Json point_json(const CecResult& cec, const CpcPoint& cpc) {
  Json j;
  j["t"] = cec.t;
  j["K"] = cec.jet.curvature;
  j["dK_ds"] = cec.jet.curvature_ds;
  j["feasible"] = cec.feasible;
  j["margin"] = std::isfinite(cec.margin) ? Json(cec.margin) : Json(nullptr);
  j["ellipse"] = cec.best_ellipse ? ellipse_json(*cec.best_ellipse) : Json(nullptr);
  j["cpc"] = cpc_json(cpc);
  return j;
}

Json cec_report_json(const CecDomainReport& cec, const CpcDomainReport& cpc) {
  Json j;
  j["schema"] = 1;
  j["all_feasible"] = cec.all_feasible();
  j["min_margin"] = std::isfinite(cec.min_margin) ? Json(cec.min_margin) : Json(nullptr);
  j["not_certified"] = cec.not_certified;
  Json pts = Json::array();
  for (std::size_t i = 0; i < cec.points.size(); ++i) pts.push_back(point_json(cec.points[i], cpc.points.at(i)));
  j["points"] = std::move(pts);
  return j;
}

Json cpc_report_json(const CpcDomainReport& cpc) {
  Json j;
  j["schema"] = 1;
  j["holds"] = cpc.holds();
  j["max_violation"] = cpc.max_violation;
  j["violated"] = cpc.violated;
  Json pts = Json::array();
  for (const auto& p : cpc.points)
    pts.push_back({{"t", p.t}, {"K", p.jet.curvature}, {"dK_ds", p.jet.curvature_ds}, {"cpc", cpc_json(p)}});
  j["points"] = std::move(pts);
  return j;
}

Json solution_metadata_json(const GridSolution& sol) {
  return {{"schema", 1},
          {"h", sol.h},
          {"nonlinearity", {{"family", sol.f.family()}, {"c", sol.f.c}, {"k", sol.f.k}}},
          {"unknowns", sol.unknowns()},
          {"iterations", sol.iterations},
          {"update_norm", sol.update_norm},
          {"residual", sol.residual},
          {"max_u", sol.max_u},
          {"positive", sol.positive},
          {"f_positive", sol.f_positive}};
}

void write_solution_csv(const std::filesystem::path& path, const GridSolution& sol) {
  auto f = open_out(path);
  std::fprintf(f.get(), "x,y,u\n");
  for (int node : sol.node_of)
    std::fprintf(f.get(), "%.17g,%.17g,%.17g\n", sol.x(node % sol.nx), sol.y(node / sol.nx), sol.values[node]);
}

void write_field_csv(const std::filesystem::path& path, const HessianField& field) {
  auto f = open_out(path);
  std::fprintf(f.get(), "x,y,u,lambda_min,lambda_max\n");
  for (const auto& n : field.nodes)
    std::fprintf(f.get(), "%.17g,%.17g,%.17g,%.17g,%.17g\n", n.point.x(), n.point.y(), n.u, n.eig.lmin, n.eig.lmax);
}

Json concavity_report_json(const ConcavityReport& rep) {
  Json j;
  j["schema"] = 1;
  j["verdict"] = to_string(rep.verdict.verdict);
  j["tol"] = rep.tol;
  j["tol_b"] = rep.tol_b;
  j["max_lambda_max"] = rep.verdict.max_lmax;
  j["worst_point"] = vec_json(rep.verdict.point);
  j["worst_direction"] = vec_json(rep.verdict.direction);
  j["evaluable_nodes"] = rep.field.nodes.size();
  j["strongly_concave"] = rep.strongly_concave;
  if (rep.sqrt_check)
    j["sqrt_concavity"] = {{"concave", rep.sqrt_check->concave},
                           {"max_lambda_max", rep.sqrt_check->max_lmax},
                           {"worst_point", vec_json(rep.sqrt_check->point)},
                           {"nodes", rep.sqrt_check->nodes}};
  else
    j["sqrt_concavity"] = nullptr;
  Json claim = Json::array();
  for (const auto& p : rep.claim.points)
    claim.push_back({{"t", p.t}, {"u_nu", p.normal_derivative}, {"bound", p.bound}, {"pass", p.pass}});
  j["claim"] = {{"all_pass", rep.claim.all_pass()}, {"points", std::move(claim)}};
  j["theorem2"] = {{"status", to_string(rep.theorem2.status)},
                   {"boundary_max", rep.theorem2.boundary_max},
                   {"interior_max", rep.theorem2.interior_max},
                   {"f_hypothesis", rep.theorem2.f_hypothesis}};
  return j;
}

Json verification_json(const PerturbedDomain& pd, const PerturbationVerification& v) {
  const auto& d = v.distances;
  return {{"t_p", pd.t_p},
          {"c", pd.c},
          {"a", pd.a},
          {"convex", v.convex},
          {"min_curvature", v.min_curvature},
          {"contains_base", v.contains_base},
          {"containment_violation", v.containment_violation},
          {"cpc_violated_at_tp", v.cpc_violated_at_tp},
          {"cpc_violation", v.cpc_violation},
          {"cec_feasible", v.cec_feasible},
          {"cec_min_margin", v.cec_min_margin},
          {"distances", {{"sup", d.sup}, {"holder", d.holder}, {"gamma", d.gamma}}}};
}

// ---------------------------------------------------------------------------

void RunConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw IoError(std::string("config: ") + name + " must be positive");
  };
  if (grid_h) positive(*grid_h, "grid_h");
  positive(tol_fix, "tol_fix");
  positive(search.tol_margin, "tol_margin");
  positive(search.tol_contain, "tol_contain");
  if (tol) positive(*tol, "tol");
  if (tol_b) positive(*tol_b, "tol_b");
  if (max_iter < 1) throw IoError("config: max_iter must be at least 1");
  if (points < 1) throw IoError("config: points must be at least 1");
  if (!(gamma > 0.0 && gamma < 1.0)) throw IoError("config: gamma must lie in (0, 1)");
  for (double c : this->c) positive(c, "c");
  if (amplitude) positive(*amplitude, "amplitude");
  if (f_c < 0.0 || f_k < 1) throw IoError("config: nonlinearity needs c >= 0 and k >= 1");
  if (!(epsilon_fraction > 0.0 && epsilon_fraction < 1.0)) throw IoError("config: epsilon_fraction must lie in (0, 1)");
}

Json run_config_to_json(const RunConfig& cfg) {
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  const auto& s = cfg.search;
  return {{"schema", 1},
          {"command", cfg.command},
          {"domain", cfg.domain},
          {"output_dir", cfg.output_dir},
          {"grid_h", opt(cfg.grid_h)},
          {"tol_fix", cfg.tol_fix},
          {"max_iter", cfg.max_iter},
          {"tol", opt(cfg.tol)},
          {"tol_b", opt(cfg.tol_b)},
          {"points", cfg.points},
          {"gamma", cfg.gamma},
          {"c", cfg.c},
          {"amplitude", opt(cfg.amplitude)},
          {"t_p", cfg.t_p},
          {"f", {{"c", cfg.f_c}, {"k", cfg.f_k}}},
          {"epsilon_fraction", cfg.epsilon_fraction},
          {"search",
           {{"grid_curvature", s.grid_curvature},
            {"grid_curvature_ds", s.grid_curvature_ds},
            {"grid_area", s.grid_area},
            {"refine_iterations", s.refine_iterations},
            {"tol_margin", s.tol_margin},
            {"tol_contain", s.tol_contain},
            {"contain_samples", s.contain_samples},
            {"area_max_factor", s.area_max_factor},
            {"curvature_ds_factor", s.curvature_ds_factor}}},
          {"deterministic", cfg.deterministic}};
}

RunConfig run_config_from_json(const Json& j) {
  try {
    RunConfig cfg;
    auto opt = [&](const char* key, std::optional<double>& out) {
      if (j.contains(key) && !j[key].is_null()) out = j[key].get<double>();
    };
    cfg.command = j.value("command", cfg.command);
    cfg.domain = j.value("domain", cfg.domain);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    opt("grid_h", cfg.grid_h);
    cfg.tol_fix = j.value("tol_fix", cfg.tol_fix);
    cfg.max_iter = j.value("max_iter", cfg.max_iter);
    opt("tol", cfg.tol);
    opt("tol_b", cfg.tol_b);
    cfg.points = j.value("points", cfg.points);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.c = j.value("c", cfg.c);
    opt("amplitude", cfg.amplitude);
    cfg.t_p = j.value("t_p", cfg.t_p);
    if (j.contains("f")) {
      cfg.f_c = j["f"].value("c", cfg.f_c);
      cfg.f_k = j["f"].value("k", cfg.f_k);
    }
    cfg.epsilon_fraction = j.value("epsilon_fraction", cfg.epsilon_fraction);
    if (j.contains("search")) {
      const auto& s = j["search"];
      auto& o = cfg.search;
      o.grid_curvature = s.value("grid_curvature", o.grid_curvature);
      o.grid_curvature_ds = s.value("grid_curvature_ds", o.grid_curvature_ds);
      o.grid_area = s.value("grid_area", o.grid_area);
      o.refine_iterations = s.value("refine_iterations", o.refine_iterations);
      o.tol_margin = s.value("tol_margin", o.tol_margin);
      o.tol_contain = s.value("tol_contain", o.tol_contain);
      o.contain_samples = s.value("contain_samples", o.contain_samples);
      o.area_max_factor = s.value("area_max_factor", o.area_max_factor);
      o.curvature_ds_factor = s.value("curvature_ds_factor", o.curvature_ds_factor);
    }
    cfg.deterministic = true;  // always on
    cfg.validate();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed config: ") + e.what());
  }
}

}  // namespace concave2d
