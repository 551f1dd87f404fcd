#include "deph/cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "deph/correlations.hpp"
#include "deph/dephasing.hpp"
#include "deph/parallel.hpp"
#include "deph/spectral.hpp"

namespace deph::cli {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
  json meta;
};

void write_csv(const Table& table, std::ostream& out) {
  out << "# meta: " << table.meta.dump() << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    out << (i ? "," : "") << table.columns[i];
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      if (row[i].is_number()) {
        out << fmt17(row[i].get<double>());
      } else {
        out << row[i].get<std::string>();
      }
    }
    out << "\n";
  }
}

void write_json(const Table& table, std::ostream& out) {
  json doc;
  doc["meta"] = table.meta;
  doc["rows"] = table.rows;
  out << doc.dump() << "\n";
}

json range_meta(const RangeSpec& r) {
  return json{{"min", r.min}, {"max", r.max}, {"count", r.count}, {"log", r.log}};
}

Environment make_environment(const RunConfig& config) {
  if (!config.tab_path.empty())
    return Environment{load_tabulated_csv(config.tab_path), config.temperature};
  return Environment{OhmicSpectrum{config.s, 1.0}, config.temperature};
}

double eval_rate(const Environment& env, double t, const QuadratureSpec& q) {
  if (const auto* o = std::get_if<OhmicSpectrum>(&env.spectrum);
      o != nullptr && env.temperature == 0.0) {
    return o->omega_c * dephasing_rate_zero_T(o->s, o->omega_c * t);
  }
  return dephasing_rate_numeric(env, t, q);
}

json base_meta(const RunConfig& config) {
  json meta;
  meta["version"] = kVersion;
  meta["command"] = config.command;
  meta["tolerances"] = {{"relative", config.quad.relative_tolerance},
                        {"absolute", config.quad.absolute_tolerance}};
  meta["temperature"] = config.temperature;
  meta["omega_c"] = config.omega_c_scale;
  json grids = json::object();
  if (config.t_grid) grids["t"] = range_meta(*config.t_grid);
  if (config.s_grid) grids["s"] = range_meta(*config.s_grid);
  if (config.c_grid) grids["c"] = range_meta(*config.c_grid);
  if (!config.temperatures.empty()) grids["temperatures"] = config.temperatures;
  meta["grids"] = grids;
  return meta;
}

Table build_rate(const RunConfig& config) {
  const Environment env = make_environment(config);
  const auto times = expand_range(*config.t_grid);
  const double w = config.omega_c_scale;
  std::vector<double> rates(times.size());
  parallel_for(static_cast<int>(times.size()), config.threads, [&](int i) {
    rates[static_cast<std::size_t>(i)] = eval_rate(env, times[static_cast<std::size_t>(i)], config.quad);
  });
  Table table;
  table.columns = {"t(1/omega_c)", "gamma(omega_c)"};
  for (std::size_t i = 0; i < times.size(); ++i)
    table.rows.push_back({times[i] / w, rates[i] * w});
  table.meta = base_meta(config);
  return table;
}

Table build_factor(const RunConfig& config) {
  const Environment env = make_environment(config);
  const auto times = expand_range(*config.t_grid);
  const double w = config.omega_c_scale;
  std::vector<double> factors(times.size());
  parallel_for(static_cast<int>(times.size()), config.threads, [&](int i) {
    factors[static_cast<std::size_t>(i)] =
        dephasing_factor(env, times[static_cast<std::size_t>(i)], config.quad);
  });
  Table table;
  table.columns = {"t(1/omega_c)", "lambda", "coherence"};
  for (std::size_t i = 0; i < times.size(); ++i)
    table.rows.push_back({times[i] / w, factors[i], std::exp(-factors[i])});
  table.meta = base_meta(config);
  return table;
}

Table build_scrit(const RunConfig& config) {
  std::vector<double> values(config.temperatures.size());
  parallel_for(static_cast<int>(config.temperatures.size()), config.threads, [&](int i) {
    values[static_cast<std::size_t>(i)] = find_s_crit(config.temperatures[static_cast<std::size_t>(i)]);
  });
  Table table;
  table.columns = {"T(omega_c)", "s_crit"};
  for (std::size_t i = 0; i < values.size(); ++i)
    table.rows.push_back({config.temperatures[i], values[i]});
  table.meta = base_meta(config);
  return table;
}

Table build_convexity(const RunConfig& config) {
  Table table;
  table.meta = base_meta(config);
  table.meta["omega_range"] = {config.omega_range.lo, config.omega_range.hi};
  if (config.find_threshold) {
    const double s_star = convexity_threshold_s(config.temperature, config.omega_range);
    table.columns = {"T(omega_c)", "s_threshold"};
    table.rows.push_back({config.temperature, s_star});
    return table;
  }
  std::vector<double> s_values;
  if (config.s_grid) {
    s_values = expand_range(*config.s_grid);
  } else if (!config.tab_path.empty()) {
    s_values = {std::numeric_limits<double>::quiet_NaN()};  // single tabulated verdict
  } else {
    s_values = {config.s};
  }
  struct Verdict {
    bool convex;
    double omega;
  };
  std::vector<Verdict> verdicts(s_values.size());
  parallel_for(static_cast<int>(s_values.size()), config.threads, [&](int i) {
    const auto idx = static_cast<std::size_t>(i);
    Environment env = !config.tab_path.empty()
                          ? make_environment(config)
                          : Environment{OhmicSpectrum{s_values[idx], 1.0}, config.temperature};
    const auto res = is_convex(env, config.omega_range, config.n_grid);
    verdicts[idx] = {res.convex, res.first_nonconvex_omega.value_or(0.0)};
  });
  table.columns = {"s", "status", "first_nonconvex_omega(omega_c)"};
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    const json s_cell = std::isnan(s_values[i]) ? json("tabulated") : json(s_values[i]);
    table.rows.push_back(
        {s_cell, verdicts[i].convex ? "convex" : "nonconvex", verdicts[i].omega});
  }
  return table;
}

Table build_discord(const RunConfig& config) {
  const Environment env = make_environment(config);
  const auto times = expand_range(*config.t_grid);
  const double w = config.omega_c_scale;
  const BellDiagonalParams state{config.c};
  std::vector<double> factors(times.size());
  parallel_for(static_cast<int>(times.size()), config.threads, [&](int i) {
    factors[static_cast<std::size_t>(i)] =
        dephasing_factor(env, times[static_cast<std::size_t>(i)], config.quad);
  });
  Table table;
  table.columns = {"t(1/omega_c)", "mutual_information(bits)", "classical(bits)",
                   "discord(bits)"};
  for (std::size_t i = 0; i < times.size(); ++i) {
    table.rows.push_back({times[i] / w, mutual_information(state, factors[i]),
                          classical_correlations(state, factors[i]),
                          discord(state, factors[i])});
  }
  table.meta = base_meta(config);
  table.meta["c"] = config.c;
  if (!times.empty() && times.back() > 0.0 && std::abs(config.c) > 0.0) {
    const auto transition = transition_time(env, state, times.back());
    switch (transition.status) {
      case TransitionStatus::Found:
        table.meta["transition_time"] = transition.time / w;
        break;
      case TransitionStatus::None:
        table.meta["transition_time"] = "none";
        break;
      case TransitionStatus::Indeterminate:
        table.meta["transition_time"] = "indeterminate";
        break;
    }
  }
  return table;
}

Table build_landscape(const RunConfig& config) {
  const auto s_values = expand_range(*config.s_grid);
  const auto t_values = expand_range(*config.t_grid);
  const auto map = transition_landscape(config.temperature, config.c, s_values, t_values,
                                        config.threads);
  const double w = config.omega_c_scale;
  Table table;
  table.columns = {"s", "t(1/omega_c)", "phase"};
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    for (std::size_t k = 0; k < t_values.size(); ++k) {
      const PhaseLabel label = map.labels[i * t_values.size() + k];
      const char* name = label == PhaseLabel::Classical  ? "classical"
                         : label == PhaseLabel::Quantum ? "quantum"
                                                        : "boundary";
      table.rows.push_back({s_values[i], t_values[k] / w, name});
    }
  }
  table.meta = base_meta(config);
  table.meta["c"] = config.c;
  return table;
}

Table build_frozen_region(const RunConfig& config) {
  const auto s_values = expand_range(*config.s_grid);
  const auto region = frozen_region(config.temperature, s_values, config.threads);
  Table table;
  table.columns = {"s", "c_star", "status"};
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    table.rows.push_back({region.s_grid[i], region.boundary_c[i],
                          region.empty_flag[i] ? "diverges" : "bounded"});
  }
  table.meta = base_meta(config);
  return table;
}

Table build_backflow(const RunConfig& config) {
  const Environment env = make_environment(config);
  const auto report = negative_rate_report(env, config.t_max, config.n_grid);
  const double w = config.omega_c_scale;
  Table table;
  table.columns = {"t_start(1/omega_c)", "t_end(1/omega_c)"};
  for (const auto& [a, b] : report.intervals) table.rows.push_back({a / w, b / w});
  table.meta = base_meta(config);
  table.meta["non_markovian"] = report.non_markovian;
  table.meta["backflow_measure"] = report.backflow_measure;
  table.meta["n_intervals"] = report.intervals.size();
  table.meta["t_max"] = config.t_max;
  return table;
}

Table build_table(const RunConfig& config) {
  if (config.command == "rate") return build_rate(config);
  if (config.command == "factor") return build_factor(config);
  if (config.command == "scrit") return build_scrit(config);
  if (config.command == "convexity") return build_convexity(config);
  if (config.command == "discord") return build_discord(config);
  if (config.command == "landscape") return build_landscape(config);
  if (config.command == "frozen-region") return build_frozen_region(config);
  if (config.command == "backflow") return build_backflow(config);
  throw std::invalid_argument("unknown command: " + config.command);
}

}  // namespace

RangeSpec parse_range(const std::string& text) {
  RangeSpec range;
  std::string body = text;
  if (body.rfind("log:", 0) == 0) {
    range.log = true;
    body = body.substr(4);
  }
  std::vector<std::string> parts;
  std::istringstream in(body);
  std::string item;
  while (std::getline(in, item, ':')) parts.push_back(item);
  if (parts.size() != 3)
    throw std::invalid_argument("range spec must be [log:]min:max:count, got '" + text + "'");
  try {
    std::size_t used = 0;
    range.min = std::stod(parts[0], &used);
    if (used != parts[0].size()) throw std::invalid_argument("");
    range.max = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("");
    range.count = std::stoi(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("");
  } catch (const std::exception&) {
    throw std::invalid_argument("range spec has non-numeric fields: '" + text + "'");
  }
  return range;
}

std::vector<double> expand_range(const RangeSpec& range) {
  if (range.count < 1) throw std::invalid_argument("range count must be >= 1");
  if (!(range.min <= range.max)) throw std::invalid_argument("range requires min <= max");
  if (range.log && !(range.min > 0.0))
    throw std::invalid_argument("log range requires min > 0");
  std::vector<double> values(static_cast<std::size_t>(range.count));
  if (range.count == 1) {
    values[0] = range.min;
    return values;
  }
  for (int i = 0; i < range.count; ++i) {
    const double f = static_cast<double>(i) / (range.count - 1);
    values[static_cast<std::size_t>(i)] =
        range.log ? range.min * std::pow(range.max / range.min, f)
                  : range.min + (range.max - range.min) * f;
  }
  values.back() = range.max;
  return values;
}

std::vector<std::string> validate(const RunConfig& config) {
  std::vector<std::string> diags;
  const auto& cmd = config.command;
  const bool known = cmd == "rate" || cmd == "factor" || cmd == "scrit" || cmd == "convexity" ||
                     cmd == "discord" || cmd == "landscape" || cmd == "frozen-region" ||
                     cmd == "backflow";
  if (!known) {
    diags.push_back("unknown command '" + cmd + "'");
    return diags;
  }

  const bool needs_spectrum =
      cmd == "rate" || cmd == "factor" || cmd == "discord" || cmd == "backflow";
  if (needs_spectrum && config.tab_path.empty() && std::isnan(config.s))
    diags.push_back("missing spectrum: provide --s or --tab for command '" + cmd + "'");
  if (!std::isnan(config.s) && !(config.s > 0.0)) diags.push_back("s must be > 0");
  if (!(config.temperature >= 0.0)) diags.push_back("temperature must be >= 0");

  const bool needs_c = cmd == "discord" || cmd == "landscape";
  if (needs_c && std::isnan(config.c))
    diags.push_back("missing required parameter c for command '" + cmd + "'");
  if (!std::isnan(config.c) && !(std::abs(config.c) < 1.0)) diags.push_back("|c| must be < 1");

  auto check_range = [&diags](const std::optional<RangeSpec>& r, const char* name,
                              bool required) {
    if (!r) {
      if (required) diags.push_back(std::string("missing required grid --") + name);
      return;
    }
    if (r->count < 1) diags.push_back(std::string(name) + " grid count must be >= 1");
    if (!(r->min <= r->max)) diags.push_back(std::string(name) + " grid requires min <= max");
    if (r->log && !(r->min > 0.0))
      diags.push_back(std::string(name) + " log grid requires min > 0");
  };
  check_range(config.t_grid, "t", cmd == "rate" || cmd == "factor" || cmd == "discord" ||
                                      cmd == "landscape");
  check_range(config.s_grid, "s-grid", cmd == "landscape" || cmd == "frozen-region");
  check_range(config.c_grid, "c-grid", false);
  if ((cmd == "rate" || cmd == "factor" || cmd == "discord" || cmd == "landscape") &&
      config.t_grid && config.t_grid->min < 0.0)
    diags.push_back("t grid must start at >= 0");

  if (cmd == "scrit" && config.temperatures.empty())
    diags.push_back("missing required list --temperatures for command 'scrit'");
  for (const double temp : config.temperatures) {
    if (!(temp >= 0.0)) {
      diags.push_back("temperatures must all be >= 0");
      break;
    }
  }
  if (cmd == "convexity" && !config.find_threshold && config.s_grid == std::nullopt &&
      std::isnan(config.s) && config.tab_path.empty())
    diags.push_back("convexity needs --s, --s-grid, --tab or --find-threshold");

  if (!(config.t_max > 0.0)) diags.push_back("t-max must be > 0");
  if (config.n_grid < 16) diags.push_back("n-grid must be >= 16");
  if (!(config.omega_range.lo > 0.0) || !(config.omega_range.lo < config.omega_range.hi))
    diags.push_back("omega-range requires 0 < lo < hi");
  if (!(config.quad.relative_tolerance > 0.0)) diags.push_back("tol-rel must be > 0");
  if (!(config.quad.absolute_tolerance > 0.0)) diags.push_back("tol-abs must be > 0");
  if (config.output_format != "csv" && config.output_format != "json")
    diags.push_back("output format must be csv or json");
  if (config.threads < 1) diags.push_back("threads must be >= 1");
  if (!(config.omega_c_scale > 0.0)) diags.push_back("omega-c must be > 0");
  return diags;
}

int run(const RunConfig& config, std::ostream* out_override) {
  const auto diags = validate(config);
  if (!diags.empty()) {
    for (const auto& d : diags) std::cerr << "error: " << d << "\n";
    return kExitParse;
  }

  Table table;
  try {
    table = build_table(config);
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::runtime_error& e) {
    // spectrum-file problems are I/O, everything else numerical
    const std::string what = e.what();
    std::cerr << "error: " << what << "\n";
    return what.rfind("load_tabulated_csv", 0) == 0 ? kExitIo : kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }

  std::ofstream file;
  std::ostream* out = out_override;
  if (out == nullptr) {
    if (config.output_path == "-") {
      out = &std::cout;
    } else {
      file.open(config.output_path, std::ios::binary);
      if (!file) {
        std::cerr << "error: cannot open output file " << config.output_path << "\n";
        return kExitIo;
      }
      out = &file;
    }
  }
  if (config.output_format == "json") {
    write_json(table, *out);
  } else {
    write_csv(table, *out);
  }
  out->flush();
  if (!*out) {
    std::cerr << "error: write failure on " << config.output_path << "\n";
    return kExitIo;
  }
  return 0;
}

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Exact pure-dephasing dynamics, non-Markovianity and two-qubit discord "
               "for Ohmic-class reservoirs (reduced units: hbar = k_B = omega_c = 1)"};
  app.require_subcommand(1);
  app.fallthrough();  // lets global options like --config appear after the subcommand
  app.set_config("--config", "", "flat key=value config file; flags override");

  RunConfig cfg;
  std::string t_spec, s_grid_spec, c_grid_spec, omega_range_spec;

  auto add_output = [&](CLI::App* sub) {
    sub->configurable();  // allow [subcommand] sections in --config files
    sub->add_option("--output", cfg.output_format, "output format: csv or json");
    sub->add_option("--out", cfg.output_path, "output path, - for stdout");
    sub->add_option("--tol-rel", cfg.quad.relative_tolerance, "quadrature relative tolerance");
    sub->add_option("--tol-abs", cfg.quad.absolute_tolerance, "quadrature absolute tolerance");
    sub->add_option("--threads", cfg.threads, "worker threads for sweeps");
    sub->add_option("--omega-c", cfg.omega_c_scale,
                    "physical cutoff frequency for unit conversion on output");
  };
  auto add_spectrum = [&](CLI::App* sub) {
    sub->add_option("--s", cfg.s, "Ohmicity exponent");
    sub->add_option("--tab", cfg.tab_path, "tabulated spectrum CSV (omega,J)");
    sub->add_option("--T", cfg.temperature, "temperature (units of omega_c)");
  };

  auto* rate = app.add_subcommand("rate", "dephasing rate gamma(t)");
  add_spectrum(rate);
  rate->add_option("--t", t_spec, "time grid [log:]min:max:count")->required();
  add_output(rate);

  auto* factor = app.add_subcommand("factor", "dephasing factor Lambda(t) and coherence");
  add_spectrum(factor);
  factor->add_option("--t", t_spec, "time grid [log:]min:max:count")->required();
  add_output(factor);

  auto* scrit = app.add_subcommand("scrit", "critical Ohmicity s_crit(T)");
  scrit->add_option("--temperatures", cfg.temperatures, "comma-separated temperature list")
      ->required()
      ->delimiter(',');
  add_output(scrit);

  auto* convexity = app.add_subcommand("convexity", "convexity analysis of g(omega,T)");
  add_spectrum(convexity);
  convexity->add_option("--s-grid", s_grid_spec, "Ohmicity grid [log:]min:max:count");
  convexity->add_flag("--find-threshold", cfg.find_threshold,
                      "bisect the convex/non-convex threshold s*");
  convexity->add_option("--omega-range", omega_range_spec, "assessment range lo:hi");
  convexity->add_option("--n-grid", cfg.n_grid, "grid points for the convexity scan");
  add_output(convexity);

  auto* discord_cmd = app.add_subcommand("discord", "correlation trajectories I, C, Q");
  add_spectrum(discord_cmd);
  discord_cmd->add_option("--c", cfg.c, "Bell-diagonal state parameter, |c| < 1");
  discord_cmd->add_option("--t", t_spec, "time grid [log:]min:max:count")->required();
  add_output(discord_cmd);

  auto* landscape = app.add_subcommand("landscape", "classical/quantum decoherence phase map");
  landscape->add_option("--T", cfg.temperature, "temperature (units of omega_c)");
  landscape->add_option("--c", cfg.c, "Bell-diagonal state parameter, |c| < 1");
  landscape->add_option("--s-grid", s_grid_spec, "Ohmicity grid")->required();
  landscape->add_option("--t-grid", t_spec, "time grid")->required();
  add_output(landscape);

  auto* frozen = app.add_subcommand("frozen-region", "frozen-discord boundary c*(s)");
  frozen->add_option("--T", cfg.temperature, "temperature (units of omega_c)");
  frozen->add_option("--s-grid", s_grid_spec, "Ohmicity grid")->required();
  add_output(frozen);

  auto* backflow = app.add_subcommand("backflow", "negative-rate intervals and backflow measure");
  add_spectrum(backflow);
  backflow->add_option("--t-max", cfg.t_max, "scan horizon");
  backflow->add_option("--n-grid", cfg.n_grid, "scan grid points");
  add_output(backflow);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitParse;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (!t_spec.empty()) cfg.t_grid = parse_range(t_spec);
    if (!s_grid_spec.empty()) cfg.s_grid = parse_range(s_grid_spec);
    if (!c_grid_spec.empty()) cfg.c_grid = parse_range(c_grid_spec);
    if (!omega_range_spec.empty()) {
      const auto pos = omega_range_spec.find(':');
      if (pos == std::string::npos)
        throw std::invalid_argument("omega-range must be lo:hi");
      cfg.omega_range = {std::stod(omega_range_spec.substr(0, pos)),
                         std::stod(omega_range_spec.substr(pos + 1))};
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  }
  return run(cfg);
}

}  // namespace deph::cli
