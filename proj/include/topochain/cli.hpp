#pragma once

// Command-line front end: configuration ingestion, experiment orchestration
// and bit-stable CSV/JSON emission. Exit codes: 0 success, 2 validation,
// 3 numerical, 4 I/O.

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "topochain/config.hpp"
#include "topochain/io.hpp"
#include "topochain/topochain.hpp"

namespace topochain::cli {

constexpr std::size_t kGridCap = 4096;

struct GridSpec {
  std::size_t nk = 0;
  std::size_t ntheta = 0;
};

/// Parses "N" or "NxM" with per-axis cap enforcement.
inline GridSpec parse_grid(const std::string& text, std::size_t def_nk,
                           std::size_t def_ntheta) {
  if (text.empty()) return {def_nk, def_ntheta};
  GridSpec g;
  const auto cross = text.find('x');
  try {
    if (cross == std::string::npos) {
      g.nk = g.ntheta = std::stoul(text);
    } else {
      g.nk = std::stoul(text.substr(0, cross));
      g.ntheta = std::stoul(text.substr(cross + 1));
    }
  } catch (const std::exception&) {
    throw ValidationError("grid: expected N or NxM, got '" + text + "'");
  }
  if (g.nk == 0 || g.ntheta == 0 || g.nk > kGridCap || g.ntheta > kGridCap)
    throw ValidationError("grid: axes must be in [1, " + std::to_string(kGridCap) + "]");
  return g;
}

struct Options {
  LatticeParams params;
  std::string config_path;
  std::string grid_text;
  std::string out_dir = ".";
  std::string unit = "je";
  double ep = 0.0;
  double drive_amp = 0.1;
  std::size_t drive_site = 0;
  bool theta_given = false;
  bool kappa_given = false;
  bool delta_c_given = false;
};

namespace detail {

/// Converts every energy-like field into units of Je (so Je becomes 1).
/// In "raw" mode the values pass through untouched.
inline void normalize_units(Options& o) {
  if (o.unit == "raw") return;
  if (o.unit != "je") throw ValidationError("unit: expected 'je' or 'raw'");
  const double je = o.params.Je;
  if (!(je > 0.0)) throw ValidationError("unit je: Je must be > 0");
  o.params.J /= je;
  o.params.delta /= je;
  o.params.DeltaC /= je;
  o.params.kappa /= je;
  o.params.Je = 1.0;
  if (o.params.g0) *o.params.g0 /= std::sqrt(je);
  if (o.params.DeltaQ) *o.params.DeltaQ /= je;
  o.ep /= je;
  o.drive_amp /= je;
}

inline std::filesystem::path out_path(const Options& o, const std::string& name) {
  return std::filesystem::path(o.out_dir) / name;
}

inline void emit(const Options& o, const std::string& name, const std::string& content) {
  atomic_write(out_path(o, name), content);
  std::cout << "wrote " << out_path(o, name).string() << "\n";
}

inline std::string trace_csv(const ReflectionTrace& t, const char* phase_col) {
  CsvBuilder csv({"theta", "re_r", "im_r", phase_col});
  for (std::size_t k = 0; k < t.theta_grid.size(); ++k)
    csv.row({t.theta_grid[k], t.r_values[k].real(), t.r_values[k].imag(),
             t.unwrapped_phase[k]});
  return csv.str();
}

}  // namespace detail

inline int cmd_spectrum(const Options& o, std::size_t ntheta_points) {
  auto grid = uniform_theta_grid(ntheta_points);
  auto spectrum = open_spectrum(o.params, grid);
  CsvBuilder csv({"theta", "level_index", "energy", "is_edge"});
  for (std::size_t t = 0; t < grid.size(); ++t)
    for (std::size_t k = 0; k < spectrum.energies[t].size(); ++k)
      csv.row({grid[t], k, spectrum.energies[t][k],
               spectrum.edge_flags[t][k] ? 1 : 0});

  const double theta = o.theta_given ? o.params.theta : std::numbers::pi / 2.0;
  CsvBuilder profiles({"state", "site", "probability"});
  try {
    auto states = identify_edge_states(o.params, theta);
    for (std::size_t s = 0; s < states.profiles.size(); ++s)
      for (std::size_t j = 0; j < states.profiles[s].site_probabilities.size(); ++j)
        profiles.row({s, j, states.profiles[s].site_probabilities[j]});
  } catch (const NumericalError&) {
    // no in-gap state at the profile theta: emit the header only
  }
  detail::emit(o, "spectrum.csv", csv.str());
  detail::emit(o, "edge_profiles.csv", profiles.str());
  return 0;
}

inline int cmd_chern(const Options& o) {
  GridSpec grid = parse_grid(o.grid_text, 256, 256);
  if (grid.nk < 32 || grid.ntheta < 32)
    throw ValidationError("chern: grid must be at least 32x32");
  const int analytic = chern_analytic(o.params);
  const auto solid = chern_solid_angle(o.params, grid.nk, grid.ntheta);
  const auto link = chern_gauge_link(o.params, 32, 32);
  const bool agree = analytic == solid.rounded && analytic == link.rounded;
  JsonBuilder json;
  json.field("analytic", analytic)
      .field("solid_angle", solid.value)
      .field("solid_angle_rounded", solid.rounded)
      .field("solid_angle_error", solid.quantization_error)
      .field("gauge_link", link.value)
      .field("gauge_link_rounded", link.rounded)
      .field("gauge_link_error", link.quantization_error)
      .field("agreement", agree)
      .field("grid_nk", grid.nk)
      .field("grid_ntheta", grid.ntheta);
  detail::emit(o, "chern.json", json.str());
  return 0;
}

inline int cmd_steady(const Options& o) {
  const double theta = o.theta_given ? o.params.theta : 2.0 * std::numbers::pi / 3.0;
  const double kappa = o.kappa_given ? o.params.kappa : 0.1;
  const double delta_c = o.delta_c_given ? o.params.DeltaC : 0.5;
  auto p = o.params.with_theta(theta);
  auto drive = DriveConfig::single_site(p.L, o.drive_site, Complex{o.drive_amp, 0.0},
                                        kappa, delta_c);
  auto state = steady_state(p, drive);
  CsvBuilder csv({"site", "photon_number"});
  for (std::size_t j = 0; j < p.L; ++j) csv.row({j, state.photon_numbers[j]});
  detail::emit(o, "occupation.csv", csv.str());
  return 0;
}

inline int cmd_wind(const Options& o) {
  GridSpec grid = parse_grid(o.grid_text, 256, 256);
  const double kappa = o.kappa_given ? o.params.kappa : 0.1;
  const double delta_c = o.delta_c_given ? o.params.DeltaC : 0.0;
  if (!(kappa > 0.0)) throw ValidationError("wind: kappa must be > 0");
  auto trace = reflection_trace(o.params, kappa, delta_c, grid.ntheta);
  JsonBuilder json;
  json.field("winding", trace.winding)
      .field("residual", trace.winding_residual)
      .field("max_step", trace.max_step)
      .field("grid", trace.theta_grid.size() - 1);
  detail::emit(o, "wind_trace.csv", detail::trace_csv(trace, "phase_unwrapped"));
  detail::emit(o, "wind.json", json.str());
  return 0;
}

inline int cmd_pump(const Options& o) {
  GridSpec grid = parse_grid(o.grid_text, 256, 256);
  auto trace = pump_trace(o.params, o.ep, grid.ntheta);
  const int chern = chern_analytic(o.params);
  JsonBuilder json;
  json.field("Q", trace.winding)
      .field("chern", chern)
      .field("equal", trace.winding == chern)
      .field("residual", trace.winding_residual)
      .field("Ep", o.ep)
      .field("grid", trace.theta_grid.size() - 1);
  detail::emit(o, "pump_trace.csv", detail::trace_csv(trace, "phase"));
  detail::emit(o, "pump.json", json.str());
  return 0;
}

inline int cmd_green_verify(const Options& o) {
  GridSpec grid = parse_grid(o.grid_text, 64, 64);
  const std::size_t l_max = o.params.L >= 12 ? o.params.L : 60;
  auto round_even = [](std::size_t n) { return std::max<std::size_t>(4, n - n % 2); };
  const std::vector<std::size_t> sweep = {round_even(l_max / 3),
                                          round_even(2 * l_max / 3), round_even(l_max)};

  std::vector<double> max_dev;
  for (std::size_t l : sweep) {
    LatticeParams p = o.params;
    p.L = l;
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.ntheta; ++k) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) /
                           static_cast<double>(grid.ntheta);
      auto q = p.with_theta(theta);
      worst = std::max(worst, std::abs(reflection_closed(q, o.ep) -
                                       reflection_fisher_lee(q, o.ep + q.DeltaC)));
    }
    max_dev.push_back(worst);
  }
  const bool monotone = max_dev[0] >= max_dev[1] && max_dev[1] >= max_dev[2];

  LatticeParams p = o.params;
  p.L = sweep.back();
  auto closed = trace_winding(
      [&](double theta) { return reflection_closed(p.with_theta(theta), o.ep); },
      grid.ntheta);
  auto fisher = trace_winding(
      [&](double theta) {
        return reflection_fisher_lee(p.with_theta(theta), o.ep + p.DeltaC);
      },
      grid.ntheta);

  JsonBuilder json;
  json.field("Ep", o.ep)
      .field("grid", grid.ntheta)
      .field("L_sweep", sweep)
      .field("max_deviation", max_dev)
      .field("monotone_decreasing", monotone)
      .field("winding_closed", closed.winding)
      .field("winding_fisher_lee", fisher.winding);
  detail::emit(o, "green_closed.csv", detail::trace_csv(closed, "phase"));
  detail::emit(o, "green_fisher_lee.csv", detail::trace_csv(fisher, "phase"));
  detail::emit(o, "green_verify.json", json.str());
  return 0;
}

/// Builds the option set shared by every subcommand.
inline void add_common_options(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "flat key/value JSON parameter file");
  sub->add_option("--J", o.params.J, "mean hopping");
  sub->add_option("--delta", o.params.delta, "hopping imbalance");
  sub->add_option("--Je", o.params.Je, "qubit-assisted hopping rate");
  sub->add_option("--L", o.params.L, "number of resonators (even, >= 4)");
  auto* theta = sub->add_option("--theta", o.params.theta, "mixing angle");
  auto* kappa = sub->add_option("--kappa", o.params.kappa, "uniform cavity decay");
  auto* delta_c = sub->add_option("--delta-c", o.params.DeltaC, "cavity detuning");
  sub->add_option("--ep", o.ep, "in-gap probe energy");
  sub->add_option("--grid", o.grid_text, "grid points, N or NxM");
  sub->add_option("--out", o.out_dir, "output directory");
  sub->add_option("--unit", o.unit, "je (default) or raw");
  sub->parse_complete_callback([&o, theta, kappa, delta_c] {
    o.theta_given = theta->count() > 0;
    o.kappa_given = kappa->count() > 0;
    o.delta_c_given = delta_c->count() > 0;
  });
}

/// Re-reads params so a config file provides defaults the flags override.
inline void merge_config_file(const CLI::App* sub, Options& o) {
  if (o.config_path.empty()) return;
  LatticeParams file = params_from_file(o.config_path);
  auto keep = [&](const char* flag) { return sub->count(flag) > 0; };
  if (!keep("--J")) o.params.J = file.J;
  if (!keep("--delta")) o.params.delta = file.delta;
  if (!keep("--Je")) o.params.Je = file.Je;
  if (!keep("--L")) o.params.L = file.L;
  if (!keep("--theta")) {
    o.params.theta = file.theta;
  }
  if (!keep("--kappa")) o.params.kappa = file.kappa;
  if (!keep("--delta-c")) o.params.DeltaC = file.DeltaC;
  if (file.g0) o.params.g0 = file.g0;
  if (file.DeltaQ) o.params.DeltaQ = file.DeltaQ;
}

inline int run(std::vector<std::string> args) {
  CLI::App app{"one-dimensional circuit-QED chain as a synthetic Chern insulator"};
  app.require_subcommand(1);

  Options o;
  std::size_t spectrum_points = 201;

  auto* spectrum = app.add_subcommand("spectrum", "open-boundary spectrum vs theta");
  spectrum->add_option("--theta-points", spectrum_points, "theta samples over [0, 2pi]");
  auto* chern = app.add_subcommand("chern", "chern number three ways");
  auto* steady = app.add_subcommand("steady", "driven-dissipative occupation map");
  steady->add_option("--drive-site", o.drive_site, "driven resonator index");
  steady->add_option("--drive-amp", o.drive_amp, "drive amplitude");
  auto* wind = app.add_subcommand("wind", "input-output reflection winding");
  auto* pump = app.add_subcommand("pump", "pumped charge vs chern number");
  auto* green = app.add_subcommand("green-verify", "closed form vs finite-lattice green function");
  for (CLI::App* sub : {spectrum, chern, steady, wind, pump, green})
    add_common_options(sub, o);

  std::reverse(args.begin(), args.end());  // CLI11 consumes from the back
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    merge_config_file(sub, o);
    detail::normalize_units(o);
    o.params.theta = wrap_angle(o.params.theta);
    o.params.validate();
    if (!std::isfinite(o.ep) || !std::isfinite(o.drive_amp))
      throw ValidationError("options: all physical values must be finite");

    if (sub == spectrum) {
      if (spectrum_points < 2 || spectrum_points > kGridCap)
        throw ValidationError("spectrum: theta-points must be in [2, 4096]");
      return cmd_spectrum(o, spectrum_points);
    }
    if (sub == chern) return cmd_chern(o);
    if (sub == steady) return cmd_steady(o);
    if (sub == wind) return cmd_wind(o);
    if (sub == pump) return cmd_pump(o);
    return cmd_green_verify(o);
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace topochain::cli
