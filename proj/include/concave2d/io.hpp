#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "concave2d/concavity.hpp"
#include "concave2d/contact.hpp"
#include "concave2d/geometry.hpp"
#include "concave2d/pde.hpp"
#include "concave2d/perturb.hpp"

namespace concave2d {

using Json = nlohmann::ordered_json;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Domain specs:
//   {"kind": "ellipse", "p": 2, "q": 1}
//   {"kind": "polar-fourier", "r0": 1, "cos": [0, 0, 0.05], "sin": []}
//   {"kind": "sampled", "points": [[x, y], ...]}
// each optionally with "transform": {"scale": s, "rotation": radians, "center": [x, y]}.
Json domain_spec_to_json(const DomainSpec& spec);
DomainSpec domain_spec_from_json(const Json& j);
DomainSpec read_domain_spec(const std::filesystem::path& path);

/// Indented JSON with every float printed to 17 significant digits.
std::string dump_json(const Json& j);
Json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const Json& j);

Json ellipse_json(const TangentEllipse& e);
Json cpc_json(const CpcPoint& p);
/// Per-point fragment {t, K, dK_ds, feasible, margin, ellipse, cpc}.
Json point_json(const CecResult& cec, const CpcPoint& cpc);
Json cec_report_json(const CecDomainReport& cec, const CpcDomainReport& cpc);
Json cpc_report_json(const CpcDomainReport& cpc);

Json solution_metadata_json(const GridSolution& sol);
/// Rows x,y,u for interior nodes.
void write_solution_csv(const std::filesystem::path& path, const GridSolution& sol);
/// Rows x,y,u,lambda_min,lambda_max for evaluable nodes.
void write_field_csv(const std::filesystem::path& path, const HessianField& field);
Json concavity_report_json(const ConcavityReport& rep);
Json verification_json(const PerturbedDomain& pd, const PerturbationVerification& v);

struct RunConfig {
  std::string command;
  std::string domain;      // path of the domain-spec file
  std::string output_dir = "out";
  std::optional<double> grid_h;  // default 1/64, 1/128 for demo-nonconcave
  double tol_fix = 1e-10;
  int max_iter = 200;
  std::optional<double> tol;    // concavity tolerance, default 5 h
  std::optional<double> tol_b;  // boundary tolerance, default 10 h
  int points = 16;
  double gamma = 0.5;
  std::vector<double> c = {0.2, 0.1, 0.05};
  std::optional<double> amplitude;  // default: auto
  double t_p = 0.0;
  double f_c = 0.0;
  int f_k = 1;
  double epsilon_fraction = 0.02;
  CecSearchConfig search;
  bool deterministic = true;

  void validate() const;
  double grid_h_or(double fallback) const { return grid_h.value_or(fallback); }
};

Json run_config_to_json(const RunConfig& cfg);
RunConfig run_config_from_json(const Json& j);

}  // namespace concave2d
