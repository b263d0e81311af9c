#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "langevin_bounds/bounds.hpp"
#include "langevin_bounds/planner.hpp"
#include "langevin_bounds/simulator.hpp"
#include "langevin_bounds/target_model.hpp"

namespace lbound::report {

using Json = nlohmann::json;

// Density block of a run config:
//   {"family": "exp_power", "beta": 2.0}
//   {"family": "custom", "b": 1.5, "samples": "logpi.csv"}
struct DensitySpec {
  std::string family = "exp_power";
  double beta = 2.0;
  std::optional<double> b;
  std::string samples;
};

struct RunConfig {
  DensitySpec density;
  std::optional<double> y;
  std::optional<double> s;  // empty means "auto"
  std::optional<double> t;
  std::optional<double> epsilon;
  std::string mode = "hitting";  // hitting | tv | tv-unreflected
  std::string axis;              // sweep axis: y | beta | epsilon | t
  std::vector<double> grid;
  sim::SimConfig sim;
  double grid_max = 50.0;
  int grid_n = 5001;
  std::string csv;
  std::string out_dir;
};

// Parses a config document. Unknown keys and ill-typed values raise
// ErrorKind::Config. Missing keys keep the defaults already in `base`.
RunConfig parse_config(const Json& doc, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});
Json to_json(const RunConfig& cfg);

// Relative custom-density sample paths resolve against `base_dir`.
TargetDensity build_density(const DensitySpec& spec,
                            const std::filesystem::path& base_dir = {});

BoundMode parse_mode(const std::string& mode);
SweepAxis parse_axis(const std::string& axis);

// 17 significant digits, enough to round-trip a double.
std::string format_double(double v);
std::string csv_field(const std::string& s);

Json to_json(const HittingBoundResult& r);
Json to_json(const TvBoundResult& r);
Json to_json(const PlanResult& r);
Json to_json(const CheckReport& r);
Json to_json(const FeasibleSRange& r);
Json to_json(const sim::DominationCheck& c);

// t,survival,std_err,n_censored
void write_survival_csv(std::ostream& os, const sim::EmpiricalSurvival& s);
// axis,value,s_star,t_real,t_int,bound,status
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);
// y_input,y_eff,s,b,t,raw,bound,capped
void write_hitting_csv(std::ostream& os, const HittingBoundResult& r);
// process,y,s,b,t,head_term,tail_term,quad_abs_err,raw_total,total,capped
void write_tv_csv(std::ostream& os, const TvBoundResult& r);

const char* version_string() noexcept;

}  // namespace lbound::report
