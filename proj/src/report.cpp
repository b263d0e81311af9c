#include "langevin_bounds/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "langevin_bounds/error.hpp"

#ifndef LBOUND_VERSION_STRING
#define LBOUND_VERSION_STRING "0.1.0"
#endif

namespace lbound::report {

namespace {

[[noreturn]] void config_error(const std::string& msg) {
  throw Error(ErrorKind::Config, msg);
}

void reject_unknown(const Json& obj, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!obj.is_object()) {
    config_error(where + " must be a JSON object");
  }
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      config_error("unknown key '" + key + "' in " + where);
    }
  }
}

double get_number(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number()) {
    config_error(where + "." + key + " must be a number");
  }
  return v.get<double>();
}

std::string get_string(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_string()) {
    config_error(where + "." + key + " must be a string");
  }
  return v.get<std::string>();
}

template <class Int>
Int get_unsigned(const Json& obj, const char* key, const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_number_integer() ||
      (!v.is_number_unsigned() && v.get<long long>() < 0)) {
    config_error(where + "." + key + " must be a non-negative integer");
  }
  return v.get<Int>();
}

std::vector<double> get_number_list(const Json& obj, const char* key,
                                    const std::string& where) {
  const Json& v = obj.at(key);
  if (!v.is_array()) {
    config_error(where + "." + key + " must be an array of numbers");
  }
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) {
      config_error(where + "." + key + " must be an array of numbers");
    }
    out.push_back(e.get<double>());
  }
  return out;
}

Json number_or_null(double v) {
  return std::isfinite(v) ? Json(v) : Json(nullptr);
}

}  // namespace

RunConfig parse_config(const Json& doc, RunConfig cfg) {
  reject_unknown(doc, {"density", "y", "s", "t", "epsilon", "mode", "sweep", "sim",
                       "check", "output"},
                 "config");
  if (doc.contains("density")) {
    const Json& d = doc["density"];
    reject_unknown(d, {"family", "beta", "b", "samples"}, "density");
    DensitySpec spec;
    spec.family = d.contains("family") ? get_string(d, "family", "density") : "exp_power";
    if (spec.family == "exp_power") {
      if (d.contains("b") || d.contains("samples")) {
        config_error("density.b and density.samples only apply to family 'custom'");
      }
      if (d.contains("beta")) {
        spec.beta = get_number(d, "beta", "density");
      }
    } else if (spec.family == "custom") {
      if (d.contains("beta")) {
        config_error("density.beta only applies to family 'exp_power'");
      }
      if (!d.contains("b") || !d.contains("samples")) {
        config_error("custom density needs 'b' and 'samples'");
      }
      spec.b = get_number(d, "b", "density");
      spec.samples = get_string(d, "samples", "density");
    } else {
      config_error("density.family must be 'exp_power' or 'custom'");
    }
    cfg.density = spec;
  }
  if (doc.contains("y")) cfg.y = get_number(doc, "y", "config");
  if (doc.contains("t")) cfg.t = get_number(doc, "t", "config");
  if (doc.contains("epsilon")) cfg.epsilon = get_number(doc, "epsilon", "config");
  if (doc.contains("s")) {
    const Json& s = doc["s"];
    if (s.is_string() && s.get<std::string>() == "auto") {
      cfg.s.reset();
    } else if (s.is_number()) {
      cfg.s = s.get<double>();
    } else {
      config_error("config.s must be a number or \"auto\"");
    }
  }
  if (doc.contains("mode")) {
    cfg.mode = get_string(doc, "mode", "config");
    if (cfg.mode != "hitting" && cfg.mode != "tv" && cfg.mode != "tv-unreflected") {
      config_error("config.mode must be hitting, tv or tv-unreflected");
    }
  }
  if (doc.contains("sweep")) {
    const Json& sw = doc["sweep"];
    reject_unknown(sw, {"axis", "grid"}, "sweep");
    if (sw.contains("axis")) {
      cfg.axis = get_string(sw, "axis", "sweep");
      parse_axis(cfg.axis);
    }
    if (sw.contains("grid")) cfg.grid = get_number_list(sw, "grid", "sweep");
  }
  if (doc.contains("sim")) {
    const Json& sm = doc["sim"];
    reject_unknown(sm, {"dt", "horizon", "n_paths", "seed", "bridge_correction",
                        "workers", "extra_times"},
                   "sim");
    if (sm.contains("dt")) cfg.sim.dt = get_number(sm, "dt", "sim");
    if (sm.contains("horizon")) cfg.sim.horizon = get_number(sm, "horizon", "sim");
    if (sm.contains("n_paths")) cfg.sim.n_paths = get_unsigned<std::size_t>(sm, "n_paths", "sim");
    if (sm.contains("seed")) cfg.sim.seed = get_unsigned<std::uint64_t>(sm, "seed", "sim");
    if (sm.contains("workers")) cfg.sim.workers = get_unsigned<unsigned>(sm, "workers", "sim");
    if (sm.contains("bridge_correction")) {
      if (!sm["bridge_correction"].is_boolean()) {
        config_error("sim.bridge_correction must be a boolean");
      }
      cfg.sim.bridge_correction = sm["bridge_correction"].get<bool>();
    }
    if (sm.contains("extra_times")) {
      cfg.sim.extra_times = get_number_list(sm, "extra_times", "sim");
    }
  }
  if (doc.contains("check")) {
    const Json& ck = doc["check"];
    reject_unknown(ck, {"grid_max", "grid_n"}, "check");
    if (ck.contains("grid_max")) cfg.grid_max = get_number(ck, "grid_max", "check");
    if (ck.contains("grid_n")) cfg.grid_n = get_unsigned<int>(ck, "grid_n", "check");
  }
  if (doc.contains("output")) {
    const Json& out = doc["output"];
    reject_unknown(out, {"csv", "dir"}, "output");
    if (out.contains("csv")) cfg.csv = get_string(out, "csv", "output");
    if (out.contains("dir")) cfg.out_dir = get_string(out, "dir", "output");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorKind::Io, "cannot open config file: " + path.string());
  }
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    config_error(path.string() + ": " + e.what());
  }
  RunConfig cfg = parse_config(doc, std::move(base));
  // Sample paths in the file are relative to the file.
  if (cfg.density.family == "custom" && !cfg.density.samples.empty()) {
    const std::filesystem::path samples(cfg.density.samples);
    if (samples.is_relative()) {
      cfg.density.samples = (path.parent_path() / samples).string();
    }
  }
  return cfg;
}

Json to_json(const RunConfig& cfg) {
  Json density;
  density["family"] = cfg.density.family;
  if (cfg.density.family == "custom") {
    density["b"] = cfg.density.b.value_or(0.0);
    density["samples"] = cfg.density.samples;
  } else {
    density["beta"] = cfg.density.beta;
  }
  Json doc;
  doc["density"] = density;
  if (cfg.y) doc["y"] = *cfg.y;
  doc["s"] = cfg.s ? Json(*cfg.s) : Json("auto");
  if (cfg.t) doc["t"] = *cfg.t;
  if (cfg.epsilon) doc["epsilon"] = *cfg.epsilon;
  doc["mode"] = cfg.mode;
  if (!cfg.axis.empty() || !cfg.grid.empty()) {
    doc["sweep"] = {{"axis", cfg.axis}, {"grid", cfg.grid}};
  }
  doc["sim"] = {{"dt", cfg.sim.dt},
                {"horizon", cfg.sim.horizon},
                {"n_paths", cfg.sim.n_paths},
                {"seed", cfg.sim.seed},
                {"bridge_correction", cfg.sim.bridge_correction},
                {"workers", cfg.sim.workers},
                {"extra_times", cfg.sim.extra_times}};
  doc["check"] = {{"grid_max", cfg.grid_max}, {"grid_n", cfg.grid_n}};
  Json out = Json::object();
  if (!cfg.csv.empty()) out["csv"] = cfg.csv;
  if (!cfg.out_dir.empty()) out["dir"] = cfg.out_dir;
  doc["output"] = out;
  return doc;
}

TargetDensity build_density(const DensitySpec& spec,
                            const std::filesystem::path& base_dir) {
  if (spec.family == "exp_power") {
    return make_exponential_power(spec.beta);
  }
  if (spec.family == "custom") {
    if (!spec.b) {
      config_error("custom density needs a drift floor b");
    }
    std::filesystem::path samples(spec.samples);
    if (samples.is_relative() && !base_dir.empty()) {
      samples = base_dir / samples;
    }
    return load_custom_density_csv(samples, *spec.b);
  }
  config_error("unknown density family '" + spec.family + "'");
}

BoundMode parse_mode(const std::string& mode) {
  if (mode == "hitting") return BoundMode::HittingTail;
  if (mode == "tv" || mode == "tv-unreflected") return BoundMode::TotalVariation;
  config_error("mode must be hitting, tv or tv-unreflected (got '" + mode + "')");
}

SweepAxis parse_axis(const std::string& axis) {
  if (axis == "y") return SweepAxis::Y;
  if (axis == "beta") return SweepAxis::Beta;
  if (axis == "epsilon") return SweepAxis::Epsilon;
  if (axis == "t") return SweepAxis::T;
  config_error("sweep axis must be y, beta, epsilon or t (got '" + axis + "')");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

Json to_json(const HittingBoundResult& r) {
  return {{"y_input", r.y_input}, {"y_eff", r.y_eff}, {"s", r.s},
          {"b", r.b},             {"t", r.t},         {"raw", r.raw},
          {"bound", r.bound},     {"capped", r.capped}};
}

Json to_json(const TvBoundResult& r) {
  return {{"process", r.process == Process::Reflected ? "reflected" : "unreflected"},
          {"y", r.y},
          {"s", r.s},
          {"b", r.b},
          {"t", r.t},
          {"head_term", r.head_term},
          {"tail_term", r.tail_term},
          {"quad_abs_err", r.quad_abs_err},
          {"raw_total", r.raw_total},
          {"total", r.total},
          {"capped", r.capped}};
}

Json to_json(const FeasibleSRange& r) {
  return {{"s_lo", r.s_lo}, {"s_hi", r.s_hi}, {"binding", to_string(r.binding)}};
}

Json to_json(const PlanResult& r) {
  return {{"s_star", r.s_star},
          {"t_min_real", r.t_min_real},
          {"t_min_int", r.t_min_int},
          {"bound_at_t_min_int", r.bound_at_t_min_int},
          {"feasible_range", to_json(r.feasible_range)}};
}

Json to_json(const CheckReport& r) {
  const auto cond = [](const ConditionResult& c) {
    Json j = {{"name", c.name}, {"pass", c.pass}, {"worst_margin", c.worst_margin}};
    j["worst_x"] = c.worst_x ? Json(*c.worst_x) : Json(nullptr);
    return j;
  };
  return {{"analytic", r.analytic},
          {"pass", r.all_pass()},
          {"conditions", {cond(r.symmetry), cond(r.sign), cond(r.floor)}}};
}

Json to_json(const sim::DominationCheck& c) {
  Json failures = Json::array();
  for (std::size_t i = 0; i < c.times.size(); ++i) {
    if (!c.pass[i]) {
      failures.push_back({{"t", c.times[i]},
                          {"empirical", c.empirical[i]},
                          {"std_err", c.std_err[i]},
                          {"bound", number_or_null(c.bound[i])}});
    }
  }
  Json j = {{"pass", c.all_pass}, {"n_times", c.times.size()}, {"failures", failures}};
  j["first_failure"] = c.first_failure ? Json(*c.first_failure) : Json(nullptr);
  return j;
}

void write_survival_csv(std::ostream& os, const sim::EmpiricalSurvival& s) {
  os << "t,survival,std_err,n_censored\n";
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    os << format_double(s.times[i]) << ',' << format_double(s.survival[i]) << ','
       << format_double(s.std_err[i]) << ',' << s.n_censored << '\n';
  }
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "axis,value,s_star,t_real,t_int,bound,status\n";
  for (const auto& r : rows) {
    os << to_string(r.axis) << ',' << format_double(r.value) << ','
       << format_double(r.s_star) << ',' << format_double(r.t_real) << ','
       << r.t_int << ',' << format_double(r.bound) << ',' << csv_field(r.status)
       << '\n';
  }
}

void write_hitting_csv(std::ostream& os, const HittingBoundResult& r) {
  os << "y_input,y_eff,s,b,t,raw,bound,capped\n"
     << format_double(r.y_input) << ',' << format_double(r.y_eff) << ','
     << format_double(r.s) << ',' << format_double(r.b) << ','
     << format_double(r.t) << ',' << format_double(r.raw) << ','
     << format_double(r.bound) << ',' << (r.capped ? "true" : "false") << '\n';
}

void write_tv_csv(std::ostream& os, const TvBoundResult& r) {
  os << "process,y,s,b,t,head_term,tail_term,quad_abs_err,raw_total,total,capped\n"
     << (r.process == Process::Reflected ? "reflected" : "unreflected") << ','
     << format_double(r.y) << ',' << format_double(r.s) << ','
     << format_double(r.b) << ',' << format_double(r.t) << ','
     << format_double(r.head_term) << ',' << format_double(r.tail_term) << ','
     << format_double(r.quad_abs_err) << ',' << format_double(r.raw_total) << ','
     << format_double(r.total) << ',' << (r.capped ? "true" : "false") << '\n';
}

const char* version_string() noexcept { return LBOUND_VERSION_STRING; }

}  // namespace lbound::report
