#include "langevin_bounds/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "langevin_bounds/bounds.hpp"
#include "langevin_bounds/planner.hpp"
#include "langevin_bounds/report.hpp"
#include "langevin_bounds/simulator.hpp"

namespace lbound::cli {

namespace {

using report::Json;
using report::RunConfig;

constexpr double kDefaultEpsilon = 0.01;

// Raw command-line values; only options that were given override the config.
struct Flags {
  std::string config;
  double beta = 0.0;
  std::string density_csv;
  double b = 0.0;
  double y = 0.0;
  std::string s;
  double t = 0.0;
  double epsilon = 0.0;
  std::string mode;
  std::string axis;
  std::vector<double> grid;
  double dt = 0.0;
  double horizon = 0.0;
  std::size_t n_paths = 0;
  std::uint64_t seed = 0;
  bool no_bridge = false;
  unsigned workers = 0;
  double grid_max = 0.0;
  int grid_n = 0;
  std::string csv;
  std::string out_dir;
};

struct Options {
  CLI::Option* config = nullptr;
  CLI::Option* beta = nullptr;
  CLI::Option* density_csv = nullptr;
  CLI::Option* b = nullptr;
  CLI::Option* y = nullptr;
  CLI::Option* s = nullptr;
  CLI::Option* t = nullptr;
  CLI::Option* epsilon = nullptr;
  CLI::Option* mode = nullptr;
  CLI::Option* axis = nullptr;
  CLI::Option* grid = nullptr;
  CLI::Option* dt = nullptr;
  CLI::Option* horizon = nullptr;
  CLI::Option* n_paths = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* no_bridge = nullptr;
  CLI::Option* workers = nullptr;
  CLI::Option* grid_max = nullptr;
  CLI::Option* grid_n = nullptr;
  CLI::Option* csv = nullptr;
  CLI::Option* out_dir = nullptr;
};

Options add_options(CLI::App* app, Flags& f) {
  Options o;
  o.config = app->add_option("--config", f.config, "JSON run config; flags override it");
  o.beta = app->add_option("--beta", f.beta, "exponential-power density exp(-|x|^beta)");
  o.density_csv = app->add_option("--density-csv", f.density_csv,
                                  "two-column CSV (x, log density) for a custom density");
  o.b = app->add_option("--b", f.b, "declared drift floor of a custom density");
  o.y = app->add_option("--y", f.y, "start state");
  o.s = app->add_option("--s", f.s, "pgf argument s, or 'auto'");
  o.t = app->add_option("--t", f.t, "time");
  o.epsilon = app->add_option("--epsilon", f.epsilon, "target accuracy");
  o.mode = app->add_option("--mode", f.mode, "hitting | tv | tv-unreflected");
  o.axis = app->add_option("--axis", f.axis, "sweep axis: y | beta | epsilon | t");
  o.grid = app->add_option("--grid", f.grid, "sweep grid values")->delimiter(',');
  o.dt = app->add_option("--dt", f.dt, "Euler step");
  o.horizon = app->add_option("--horizon", f.horizon, "simulated time horizon");
  o.n_paths = app->add_option("--n-paths", f.n_paths, "Monte Carlo paths");
  o.seed = app->add_option("--seed", f.seed, "RNG seed");
  o.no_bridge = app->add_flag("--no-bridge", f.no_bridge,
                              "disable Brownian-bridge crossing correction");
  o.workers = app->add_option("--workers", f.workers, "worker threads (0 = all cores)");
  o.grid_max = app->add_option("--grid-max", f.grid_max, "check-a1 grid upper end");
  o.grid_n = app->add_option("--grid-n", f.grid_n, "check-a1 grid points");
  o.csv = app->add_option("--csv", f.csv, "CSV output path");
  o.out_dir = app->add_option("--out-dir", f.out_dir, "output directory (validate)");
  return o;
}

RunConfig resolve_config(const Options& o, const Flags& f, RunConfig cfg) {
  if (o.config->count() > 0) {
    cfg = report::load_config(f.config, std::move(cfg));
  }
  if (o.density_csv->count() > 0 || o.b->count() > 0) {
    if (o.beta->count() > 0) {
      throw Error(ErrorKind::Config, "--beta cannot be combined with --density-csv/--b");
    }
    if (o.density_csv->count() > 0) cfg.density.samples = f.density_csv;
    if (o.b->count() > 0) cfg.density.b = f.b;
    cfg.density.family = "custom";
  }
  if (o.beta->count() > 0) {
    cfg.density = {};
    cfg.density.beta = f.beta;
  }
  if (o.y->count() > 0) cfg.y = f.y;
  if (o.s->count() > 0) {
    if (f.s == "auto") {
      cfg.s.reset();
    } else {
      try {
        std::size_t used = 0;
        cfg.s = std::stod(f.s, &used);
        if (used != f.s.size()) throw std::invalid_argument(f.s);
      } catch (const std::exception&) {
        throw Error(ErrorKind::Config, "--s must be a number or 'auto'");
      }
    }
  }
  if (o.t->count() > 0) cfg.t = f.t;
  if (o.epsilon->count() > 0) cfg.epsilon = f.epsilon;
  if (o.mode->count() > 0) {
    report::parse_mode(f.mode);
    cfg.mode = f.mode;
  }
  if (o.axis->count() > 0) cfg.axis = f.axis;
  if (o.grid->count() > 0) cfg.grid = f.grid;
  if (o.dt->count() > 0) cfg.sim.dt = f.dt;
  if (o.horizon->count() > 0) cfg.sim.horizon = f.horizon;
  if (o.n_paths->count() > 0) cfg.sim.n_paths = f.n_paths;
  if (o.seed->count() > 0) cfg.sim.seed = f.seed;
  if (o.no_bridge->count() > 0) cfg.sim.bridge_correction = !f.no_bridge;
  if (o.workers->count() > 0) cfg.sim.workers = f.workers;
  if (o.grid_max->count() > 0) cfg.grid_max = f.grid_max;
  if (o.grid_n->count() > 0) cfg.grid_n = f.grid_n;
  if (o.csv->count() > 0) cfg.csv = f.csv;
  if (o.out_dir->count() > 0) cfg.out_dir = f.out_dir;
  return cfg;
}

double require(const std::optional<double>& v, const char* name) {
  if (!v) {
    throw Error(ErrorKind::Config, std::string("missing required parameter '") + name + "'");
  }
  return *v;
}

Json envelope(const char* command, const RunConfig& cfg) {
  Json j;
  j["command"] = command;
  j["version"] = report::version_string();
  j["density"] = report::to_json(cfg)["density"];
  return j;
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream os(path, std::ios::binary);
  if (!os) {
    throw Error(ErrorKind::Io, "cannot write " + path);
  }
  os << contents;
}

PlanRequest plan_request(const RunConfig& cfg, const TargetDensity& d) {
  return PlanRequest{.density = d,
                     .y = require(cfg.y, "y"),
                     .epsilon = cfg.epsilon.value_or(kDefaultEpsilon),
                     .mode = report::parse_mode(cfg.mode),
                     .fixed_s = cfg.s};
}

int cmd_bound(const RunConfig& cfg, std::ostream& out) {
  const TargetDensity d = report::build_density(cfg.density);
  const double y = require(cfg.y, "y");
  const double t = require(cfg.t, "t");
  const BoundMode mode = report::parse_mode(cfg.mode);
  double s = 0.0;
  if (cfg.s) {
    s = *cfg.s;
  } else {
    PlanRequest req = plan_request(cfg, d);
    s = optimize_s(req).s_star;
  }
  Json j = envelope("bound", cfg);
  j["mode"] = cfg.mode;
  std::ostringstream csv;
  if (mode == BoundMode::HittingTail) {
    const HittingBoundResult r = hitting_tail_bound(d, y, s, t);
    j["result"] = report::to_json(r);
    report::write_hitting_csv(csv, r);
  } else {
    const TvBoundResult r = cfg.mode == "tv-unreflected" ? tv_bound_unreflected(d, y, s, t)
                                                         : tv_bound(d, y, s, t);
    j["result"] = report::to_json(r);
    report::write_tv_csv(csv, r);
  }
  out << j.dump(2) << '\n';
  if (!cfg.csv.empty()) {
    write_file(cfg.csv, csv.str());
  }
  return kOk;
}

int cmd_plan(const RunConfig& cfg, std::ostream& out) {
  const TargetDensity d = report::build_density(cfg.density);
  const PlanRequest req = plan_request(cfg, d);
  const PlanResult result = plan(req);
  Json j = envelope("plan", cfg);
  j["mode"] = cfg.mode;
  j["y"] = req.y;
  j["epsilon"] = req.epsilon;
  j["s_policy"] = req.fixed_s ? "fixed" : "optimize";
  j["result"] = report::to_json(result);
  out << j.dump(2) << '\n';
  if (!cfg.csv.empty()) {
    std::vector<SweepRow> rows;
    if (!cfg.axis.empty() && !cfg.grid.empty()) {
      rows = sweep(req, report::parse_axis(cfg.axis), cfg.grid);
    } else {
      const double eps[] = {req.epsilon};
      rows = sweep(req, SweepAxis::Epsilon, eps);
    }
    std::ostringstream csv;
    report::write_sweep_csv(csv, rows);
    write_file(cfg.csv, csv.str());
  }
  return kOk;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  if (cfg.axis.empty() || cfg.grid.empty()) {
    throw Error(ErrorKind::Config, "sweep needs --axis and --grid");
  }
  const TargetDensity d = report::build_density(cfg.density);
  PlanRequest req = plan_request(cfg, d);
  const std::vector<SweepRow> rows = sweep(req, report::parse_axis(cfg.axis), cfg.grid);
  std::ostringstream csv;
  report::write_sweep_csv(csv, rows);
  if (cfg.csv.empty()) {
    out << csv.str();
  } else {
    write_file(cfg.csv, csv.str());
  }
  return kOk;
}

int cmd_check_a1(const RunConfig& cfg, std::ostream& out) {
  const TargetDensity d = report::build_density(cfg.density);
  const CheckReport r = check_a1(d, cfg.grid_max, cfg.grid_n);
  Json j = envelope("check-a1", cfg);
  j["report"] = report::to_json(r);
  out << j.dump(2) << '\n';
  return r.all_pass() ? kOk : kA1Violation;
}

struct CheckLine {
  std::string name;
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

int cmd_validate(RunConfig cfg, std::ostream& out) {
  if (!cfg.y) cfg.y = 2.0;
  const TargetDensity d = report::build_density(cfg.density);
  const double y = *cfg.y;
  double s = 0.0;
  if (cfg.s) {
    s = *cfg.s;
  } else {
    PlanRequest req = plan_request(cfg, d);
    req.mode = BoundMode::HittingTail;
    s = optimize_s(req).s_star;
  }
  const PgfComponents comp = components(s, d.b());
  const std::filesystem::path dir = cfg.out_dir.empty() ? "validate_out" : cfg.out_dir;
  std::filesystem::create_directories(dir);

  std::vector<CheckLine> lines;
  Json checks = Json::array();

  const auto pgf_check = [&](const char* name, const sim::PgfEstimate& est, double formula) {
    const bool ok = std::abs(est.estimate - formula) <= 3.0 * est.std_err;
    lines.push_back({name, ok,
                     "estimate=" + fmt(est.estimate) + " formula=" + fmt(formula) +
                         " std_err=" + fmt(est.std_err)});
    checks.push_back({{"name", name},
                      {"pass", ok},
                      {"estimate", est.estimate},
                      {"std_err", est.std_err},
                      {"formula", formula}});
  };
  pgf_check("bm_exit_pgf", sim::simulate_bm_exit_pgf(s, 0.0, cfg.sim),
            pgf_bm_exit(0.0, comp));
  pgf_check("drift_passage_pgf", sim::simulate_drift_passage_pgf(s, 1.0, d.b(), cfg.sim),
            pgf_drift_passage(1.0, comp));

  const auto domination_line = [&](const char* name, const sim::DominationCheck& c) {
    std::string detail = std::to_string(c.times.size()) + " times";
    if (c.first_failure) {
      detail += ", first failure at t=" + fmt(*c.first_failure);
    }
    lines.push_back({name, c.all_pass, detail});
    Json j = report::to_json(c);
    j["name"] = name;
    checks.push_back(j);
  };

  const sim::EmpiricalSurvival hitting = sim::simulate_hitting(d, y, cfg.sim);
  {
    std::vector<double> curve;
    for (double t : hitting.times) curve.push_back(hitting_tail_bound(d, y, s, t).bound);
    domination_line("hitting_domination", sim::check_domination(hitting, curve));
    std::ofstream os(dir / "hitting_survival.csv", std::ios::binary);
    report::write_survival_csv(os, hitting);
  }

  Json flagged = {{"hitting", hitting.n_flagged}};
  if (std::abs(y) >= 1.0) {
    const double y_tv = std::abs(y);
    const sim::CouplingRunStats coupling = sim::simulate_anticoupled_pair(d, y, cfg.sim);
    const auto& surv = coupling.coupling_times;
    std::vector<double> tv_curve;
    const TvCoefficient coef = tv_coefficient(d, y_tv, comp);
    for (double t : surv.times) {
      tv_curve.push_back(std::min(1.0, coef.total() * std::pow(s, -t)));
    }
    domination_line("coupling_tv_domination", sim::check_domination(surv, tv_curve));
    const std::vector<double> pathwise =
        sim::pathwise_hitting_bound(d, y, s, coupling.partner_starts, surv.times);
    domination_line("coupling_pathwise_domination", sim::check_domination(surv, pathwise));

    const double steps = std::max<double>(1.0, static_cast<double>(coupling.checked_steps));
    const double rate = static_cast<double>(coupling.ordering_violations) / steps;
    const bool order_ok = rate < 1e-4;
    lines.push_back({"ordering_preservation", order_ok,
                     "violations=" + std::to_string(coupling.ordering_violations) +
                         " rate=" + fmt(rate) +
                         " max=" + fmt(coupling.max_violation_magnitude)});
    checks.push_back({{"name", "ordering_preservation"},
                      {"pass", order_ok},
                      {"violations", coupling.ordering_violations},
                      {"checked_steps", coupling.checked_steps},
                      {"max_violation_magnitude", coupling.max_violation_magnitude}});
    flagged["coupling"] = surv.n_flagged;
    std::ofstream os(dir / "coupling_survival.csv", std::ios::binary);
    report::write_survival_csv(os, surv);
  } else {
    lines.push_back({"coupling_tv_domination", true, "skipped: |y| < 1"});
  }

  Json manifest = envelope("validate", cfg);
  manifest["config"] = report::to_json(cfg);
  manifest["seed"] = cfg.sim.seed;
  manifest["s"] = s;
  manifest["flagged_paths"] = flagged;
  manifest["checks"] = checks;
  write_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");

  bool all_pass = true;
  out << std::left << std::setw(30) << "check" << std::setw(8) << "status" << "detail\n";
  for (const auto& l : lines) {
    all_pass = all_pass && l.pass;
    out << std::left << std::setw(30) << l.name << std::setw(8) << (l.pass ? "PASS" : "FAIL")
        << l.detail << '\n';
  }
  out << "s=" << fmt(s) << " outputs in " << dir.string() << '\n';
  return all_pass ? kOk : kValidationFailed;
}

}  // namespace

int exit_code_for(ErrorKind kind) noexcept {
  if (is_infeasible_s(kind)) return kInfeasibleS;
  switch (kind) {
    case ErrorKind::TailDivergence: return kTailDivergence;
    case ErrorKind::SimulationFailure:
    case ErrorKind::IncreaseHorizon: return kSimulationFailure;
    case ErrorKind::A1Violation: return kA1Violation;
    default: return kUsage;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified hitting-time and total-variation bounds for symmetric "
               "Langevin diffusions",
               "lbound"};
  app.require_subcommand(1);
  app.set_version_flag("--version", report::version_string());

  struct Sub {
    CLI::App* app;
    Flags flags;
    Options opts;
  };
  std::vector<std::unique_ptr<Sub>> subs;
  const auto add = [&](const char* name, const char* help) {
    auto sub = std::make_unique<Sub>();
    sub->app = app.add_subcommand(name, help);
    sub->opts = add_options(sub->app, sub->flags);
    subs.push_back(std::move(sub));
    return subs.back().get();
  };
  Sub* bound = add("bound", "evaluate the hitting-time or total-variation bound at t");
  Sub* plan_cmd = add("plan", "minimal time to reach epsilon, optionally optimizing s");
  Sub* sweep_cmd = add("sweep", "plan over a grid of y, beta, epsilon or t");
  Sub* validate = add("validate", "Monte Carlo checks of the bounds");
  Sub* check = add("check-a1", "check the density assumptions on a grid");

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    for (const auto& sub : subs) {
      if (!sub->app->parsed()) continue;
      const RunConfig cfg = resolve_config(sub->opts, sub->flags, RunConfig{});
      if (sub.get() == bound) return cmd_bound(cfg, out);
      if (sub.get() == plan_cmd) return cmd_plan(cfg, out);
      if (sub.get() == sweep_cmd) return cmd_sweep(cfg, out);
      if (sub.get() == validate) return cmd_validate(cfg, out);
      if (sub.get() == check) return cmd_check_a1(cfg, out);
    }
  } catch (const Error& e) {
    err << "lbound: " << to_string(e.kind()) << ": " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "lbound: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace lbound::cli
