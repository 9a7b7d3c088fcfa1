// Copyright 2026 The omegaturn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/studies.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "core/geomech.hpp"
#include "core/io.hpp"
#include "core/multileg.hpp"
#include "core/parallel.hpp"
#include "core/trajectory.hpp"

namespace omegaturn {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

json provenance_json(const RunConfig& cfg) {
  return {{"tool_version", kToolVersion}, {"config_hash", cfg.hash()}};
}

json design_json(const TwoWaveDesign& d) {
  return json::parse(design_to_json(d));
}

json certificate_json(const FeasibilityCertificate& cert) {
  return {{"max_abs_joint_deg", rad2deg(cert.max_abs_joint)},
          {"collision_free", cert.collision_free},
          {"within_limits", cert.within_limits}};
}

void ensure_dir(const fs::path& out) {
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) throw IoError("cannot create output directory: " + out.string());
}

// Overhead-view outline of every link at one sample.
void draw_chain(SvgWriter& svg, const Se2& pose, const JointVector& shape,
                const ChainGeometry& geom, const std::string& color,
                double opacity) {
  const auto links = forward_kinematics(shape, geom);
  const double hl = 0.5 * geom.link_length;
  const double hw = 0.5 * geom.link_width;
  for (const auto& link : links) {
    const Eigen::Vector2d ax(std::cos(link.heading), std::sin(link.heading));
    const Eigen::Vector2d ay(-ax.y(), ax.x());
    std::vector<Eigen::Vector2d> quad = {
        pose.apply(link.center + hl * ax + hw * ay),
        pose.apply(link.center - hl * ax + hw * ay),
        pose.apply(link.center - hl * ax - hw * ay),
        pose.apply(link.center + hl * ax - hw * ay)};
    svg.polygon(quad, color, opacity);
  }
}

std::string phase_color(double fraction) {
  // Blue (start) to red (end).
  const int r = int(40 + 215 * fraction);
  const int g = 60;
  const int b = int(255 - 215 * fraction);
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

void save_timelapse_svg(const fs::path& path, const Trajectory& traj,
                        const ChainGeometry& geom, const RunConfig& cfg,
                        int snapshots = 9) {
  double min_x = 1e9, min_y = 1e9, max_x = -1e9, max_y = -1e9;
  for (const auto& s : traj.samples) {
    min_x = std::min(min_x, s.pose.position.x());
    max_x = std::max(max_x, s.pose.position.x());
    min_y = std::min(min_y, s.pose.position.y());
    max_y = std::max(max_y, s.pose.position.y());
  }
  const double bl = geom.body_length();
  min_x -= bl;
  max_x += bl;
  min_y -= bl;
  max_y += bl;
  const double span = std::max(max_x - min_x, max_y - min_y);

  SvgWriter svg(720, 720, Provenance{cfg.hash()});
  svg.set_view(min_x, min_y, min_x + span, min_y + span);

  std::vector<Eigen::Vector2d> path_pts;
  for (const auto& s : traj.samples) path_pts.push_back(s.pose.position);
  svg.polyline(path_pts, "#999999", 1.0);

  const int last_cycle_begin =
      traj.steps_per_cycle * std::max(0, traj.cycles - 1);
  for (int k = 0; k < snapshots; ++k) {
    const size_t idx =
        std::min(traj.samples.size() - 1,
                 size_t(last_cycle_begin + k * traj.steps_per_cycle / (snapshots - 1)));
    const double f = double(k) / (snapshots - 1);
    draw_chain(svg, traj.samples[idx].pose, traj.samples[idx].shape, geom,
               phase_color(f), 0.55);
  }
  svg.save(path);
}

}  // namespace

OptimizationReport optimize_seeded(const TwoWaveDesign& family,
                                   const RunConfig& cfg,
                                   const ChainGeometry& geom) {
  OptimizationReport best;
  bool have = false;
  std::string last_error = "no seeds";
  for (double gamma : cfg.seeds.gammas) {
    for (double psi : cfg.seeds.psis) {
      TwoWaveDesign init = family;
      init.forward_profile = {cfg.seeds.gain, gamma, 0.0};
      init.turning_profile = {cfg.seeds.gain, 1.0, 0.0};
      init.psi = psi;
      try {
        OptimizationReport rep = optimize(init, cfg.optimizer, geom, cfg.friction);
        if (!have || rep.objective_deg > best.objective_deg) {
          best = rep;
          have = true;
        }
      } catch (const NoFeasibleStartError& e) {
        last_error = e.what();
      }
    }
  }
  if (!have) throw NoFeasibleStartError(last_error);
  return best;
}

void run_simulate(const RunConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const Trajectory traj =
      integrate_gait(cfg.gait, cfg.geometry, cfg.friction,
                     cfg.simulate.steps_per_cycle, cfg.simulate.cycles);
  const TurnMetrics metrics = turn_metrics(traj, cfg.geometry);
  const FeasibilityCertificate cert =
      check_design_feasibility(cfg.gait, cfg.geometry);

  std::vector<std::string> header = {"t_s", "x_m", "y_m", "heading_deg"};
  for (int i = 1; i <= cfg.geometry.num_joints; ++i) {
    header.push_back("theta_" + std::to_string(i) + "_deg");
  }
  CsvWriter csv(Provenance{cfg.hash()}, header);
  for (const auto& s : traj.samples) {
    std::vector<double> row = {s.t, s.pose.position.x(), s.pose.position.y(),
                               rad2deg(s.pose.heading)};
    for (int i = 0; i < s.shape.size(); ++i) row.push_back(rad2deg(s.shape[i]));
    csv.row_values(row);
  }
  csv.save(out / "trajectory.csv");

  json j;
  j["provenance"] = provenance_json(cfg);
  j["design"] = design_json(cfg.gait);
  j["metrics"] = {{"angular_displacement_deg_per_cycle", metrics.angular_displacement_deg},
                  {"swept_area_bl2", metrics.swept_area_bl2},
                  {"translation_drift_bl", metrics.translation_drift_bl}};
  j["feasibility"] = certificate_json(cert);
  write_text_file(out / "metrics.json", j.dump(2) + "\n");

  // Machine-readable trajectory: one record per sample, joint angles in
  // radians, pose heading unwrapped.
  json tj;
  tj["provenance"] = provenance_json(cfg);
  tj["period_s"] = traj.period;
  tj["steps_per_cycle"] = traj.steps_per_cycle;
  tj["cycles"] = traj.cycles;
  tj["samples"] = json::array();
  for (const auto& s : traj.samples) {
    json joints = json::array();
    for (int i = 0; i < s.shape.size(); ++i) joints.push_back(s.shape[i]);
    tj["samples"].push_back({{"t_s", s.t},
                             {"x_m", s.pose.position.x()},
                             {"y_m", s.pose.position.y()},
                             {"heading_rad", s.pose.heading},
                             {"joints_rad", joints}});
  }
  write_text_file(out / "trajectory.json", tj.dump() + "\n");

  save_timelapse_svg(out / "timelapse.svg", traj, cfg.geometry, cfg);
}

std::vector<SweepPoint> sweep_study(const RunConfig& cfg) {
  std::vector<SweepPoint> points;
  for (double value : cfg.sweep.values) {
    SweepPoint pt;
    pt.value = value;
    ChainGeometry geom = cfg.geometry;
    TwoWaveDesign family = cfg.gait;
    if (cfg.sweep.parameter == "k_o") {
      family.k_o = value;
    } else if (cfg.sweep.parameter == "theta_max") {
      family.theta_max = deg2rad(value);
    } else if (cfg.sweep.parameter == "k_f") {
      family.k_f = value;
      if (cfg.sweep.k_o_tracks_k_f) family.k_o = value;
    } else if (cfg.sweep.parameter == "num_joints") {
      geom.num_joints = int(std::lround(value));
    }
    try {
      if (cfg.sweep.optimize_each) {
        const OptimizationReport rep = optimize_seeded(family, cfg, geom);
        pt.design = rep.best;
        pt.objective_deg = rep.objective_deg;
      } else {
        pt.design = family;
        pt.objective_deg = 0.0;
      }
      const Trajectory traj =
          integrate_gait(pt.design, geom, cfg.friction,
                         cfg.simulate.steps_per_cycle, cfg.simulate.cycles);
      pt.metrics = turn_metrics(traj, geom);
      pt.certificate = check_design_feasibility(pt.design, geom);
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
    points.push_back(std::move(pt));
  }
  return points;
}

void run_sweep(const RunConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const auto points = sweep_study(cfg);

  CsvWriter csv(Provenance{cfg.hash()},
                {"parameter", "value", "angular_displacement_deg", "swept_area_bl2",
                 "translation_drift_bl", "area_per_deg", "max_abs_joint_deg",
                 "collision_free", "ok", "error"});
  for (const auto& pt : points) {
    const double per_deg =
        std::abs(pt.metrics.angular_displacement_deg) > 1e-9
            ? pt.metrics.swept_area_bl2 / std::abs(pt.metrics.angular_displacement_deg)
            : 0.0;
    csv.row({cfg.sweep.parameter, CsvWriter::format(pt.value),
             CsvWriter::format(pt.metrics.angular_displacement_deg),
             CsvWriter::format(pt.metrics.swept_area_bl2),
             CsvWriter::format(pt.metrics.translation_drift_bl),
             CsvWriter::format(per_deg),
             CsvWriter::format(rad2deg(pt.certificate.max_abs_joint)),
             pt.certificate.collision_free ? "1" : "0", pt.ok ? "1" : "0",
             pt.error});
  }
  csv.save(out / "sweep.csv");

  json j;
  j["provenance"] = provenance_json(cfg);
  j["parameter"] = cfg.sweep.parameter;
  j["points"] = json::array();
  for (const auto& pt : points) {
    json p = {{"value", pt.value},
              {"ok", pt.ok},
              {"angular_displacement_deg", pt.metrics.angular_displacement_deg},
              {"swept_area_bl2", pt.metrics.swept_area_bl2},
              {"objective_deg", pt.objective_deg}};
    if (pt.ok) {
      p["design"] = design_json(pt.design);
      p["feasibility"] = certificate_json(pt.certificate);
    } else {
      p["error"] = pt.error;
    }
    j["points"].push_back(p);
  }
  write_text_file(out / "designs.json", j.dump(2) + "\n");

  // Simple line plot of turning against the swept parameter.
  double vmin = 1e9, vmax = -1e9, amax = 1.0;
  std::vector<Eigen::Vector2d> line;
  for (const auto& pt : points) {
    if (!pt.ok) continue;
    vmin = std::min(vmin, pt.value);
    vmax = std::max(vmax, pt.value);
    amax = std::max(amax, std::abs(pt.metrics.angular_displacement_deg));
    line.push_back({pt.value, pt.metrics.angular_displacement_deg});
  }
  if (!line.empty()) {
    SvgWriter svg(640, 420, Provenance{cfg.hash()});
    svg.set_view(vmin - 0.1 * (vmax - vmin + 1e-9) - 0.01, -5.0,
                 vmax + 0.1 * (vmax - vmin + 1e-9) + 0.01, amax * 1.15);
    svg.polyline(line, "#bb3311", 2.0);
    for (const auto& p : line) svg.circle(p.x(), p.y(), (vmax - vmin + 0.02) * 0.012, "#bb3311");
    svg.text(vmin, amax * 1.08, "angular displacement (deg/cycle) vs " + cfg.sweep.parameter, 14);
    svg.save(out / "sweep.svg");
  }

  // Overhead time-lapse per sweep point.
  for (const auto& pt : points) {
    if (!pt.ok) continue;
    ChainGeometry geom = cfg.geometry;
    if (cfg.sweep.parameter == "num_joints") {
      geom.num_joints = int(std::lround(pt.value));
    }
    const Trajectory traj = integrate_gait(pt.design, geom, cfg.friction, 200, 1);
    save_timelapse_svg(out / ("timelapse_" + cfg.sweep.parameter + "_" +
                              CsvWriter::format(pt.value) + ".svg"),
                       traj, geom, cfg);
  }
}

void run_height(const RunConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const FeasibilitySpec spec{cfg.gait.theta_max, 0.0};
  const int n = cfg.geometry.num_joints;

  for (const std::string& space : cfg.height.spaces) {
    ShapeGrid grid;
    Embedding embed;
    std::vector<Eigen::Vector2d> path_pts;
    const int P = 256;
    if (space == "tau_o_amp_o") {
      grid.u = {"tau_o", 0.0, kTwoPi, cfg.height.grid_cells, true};
      grid.v = {"amp_o", 0.0, 1.2 * cfg.gait.theta_max, cfg.height.grid_cells, false};
      embed = embed_tau_o_amp_o(cfg.gait, n);
      for (int i = 0; i <= P; ++i) {
        const double tau = kTwoPi * i / P;
        path_pts.push_back({tau, cfg.gait.turning_profile.value(tau)});
      }
    } else if (space == "tau_f_amp_f") {
      grid.u = {"tau_f", 0.0, kTwoPi, cfg.height.grid_cells, true};
      grid.v = {"amp_f", -1.2 * cfg.gait.theta_max, 1.2 * cfg.gait.theta_max,
                cfg.height.grid_cells, false};
      embed = embed_tau_f_amp_f(cfg.gait, n);
      for (int i = 0; i <= P; ++i) {
        const double tau = kTwoPi * i / P;
        path_pts.push_back({tau, cfg.gait.forward_profile.value(tau)});
      }
    } else {
      grid.u = {"tau_f", 0.0, kTwoPi, cfg.height.grid_cells, true};
      grid.v = {"tau_o", 0.0, kTwoPi, cfg.height.grid_cells, true};
      embed = embed_tau_f_tau_o(cfg.gait, n);
      for (int i = 0; i <= P; ++i) {
        const double tau = kTwoPi * i / P;
        path_pts.push_back({tau, tau + cfg.gait.psi});
      }
    }

    const ConnectionField field =
        reduced_connection(grid, embed, cfg.friction, cfg.geometry, spec);
    const HeightField hf = height_function(field, BodyRow::kRotational);

    CsvWriter csv(Provenance{cfg.hash()},
                  {"row", "col", grid.u.name, grid.v.name, "value", "feasible"});
    for (int iv = 0; iv < grid.v.cells; ++iv) {
      for (int iu = 0; iu < grid.u.cells; ++iu) {
        const int idx = grid.index(iu, iv);
        csv.row_values({double(iv), double(iu), grid.u.coord(iu), grid.v.coord(iv),
                        hf.mask[idx] ? hf.values[idx] : 0.0,
                        double(hf.mask[idx])});
      }
    }
    csv.save(out / ("height_" + space + ".csv"));

    // Heatmap with the gait path overlaid.
    double max_abs = 1e-12;
    for (int i = 0; i < grid.num_nodes(); ++i) {
      if (hf.mask[i]) max_abs = std::max(max_abs, std::abs(hf.values[i]));
    }
    SvgWriter svg(720, 720, Provenance{cfg.hash()});
    svg.set_view(grid.u.lower, grid.v.lower, grid.u.upper, grid.v.upper);
    const double du = grid.u.spacing();
    const double dv = grid.v.spacing();
    for (int iv = 0; iv < grid.v.cells; ++iv) {
      for (int iu = 0; iu < grid.u.cells; ++iu) {
        const int idx = grid.index(iu, iv);
        const std::string color =
            hf.mask[idx] ? diverging_color(hf.values[idx], max_abs) : "#000000";
        svg.rect(grid.u.coord(iu) - 0.5 * du, grid.v.coord(iv) - 0.5 * dv, du, dv,
                 color);
      }
    }
    // Wrap the path into the fundamental domain for display.
    std::vector<Eigen::Vector2d> seg;
    for (auto p : path_pts) {
      if (grid.u.periodic) p.x() = wrap_to_2pi(p.x());
      if (grid.v.periodic) p.y() = wrap_to_2pi(p.y());
      if (!seg.empty() && ((seg.back() - p).norm() > kPi)) {
        svg.polyline(seg, "#1133bb", 2.5);
        seg.clear();
      }
      seg.push_back(p);
    }
    svg.polyline(seg, "#1133bb", 2.5);
    svg.text(grid.u.lower + 0.05, grid.v.upper - 0.07 * (grid.v.upper - grid.v.lower),
             "rotational height function: " + space, 15);
    svg.save(out / ("height_" + space + ".svg"));
  }
}

void run_optimize(const RunConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const OptimizationReport rep = optimize_seeded(cfg.gait, cfg, cfg.geometry);

  json j;
  j["provenance"] = provenance_json(cfg);
  j["best"] = design_json(rep.best);
  j["objective_deg_per_cycle"] = rep.objective_deg;
  j["objective_trace"] = rep.objective_trace;
  j["outer_iterations"] = rep.outer_iterations;
  j["feasibility"] = certificate_json(rep.certificate);
  write_text_file(out / "report.json", j.dump(2) + "\n");
  write_text_file(out / "design.json", design_to_json(rep.best) + "\n");

  CsvWriter csv(Provenance{cfg.hash()}, {"outer_iteration", "objective_deg"});
  for (size_t i = 0; i < rep.objective_trace.size(); ++i) {
    csv.row_values({double(i + 1), rep.objective_trace[i]});
  }
  csv.save(out / "trace.csv");
}

std::vector<CompliantCell> compliant_study(const RunConfig& cfg) {
  std::vector<CompliantCell> cells;
  CompliantRunConfig run;
  run.contact_stiffness = cfg.pegboard.contact_stiffness;
  run.steps_per_cycle = cfg.pegboard.steps_per_cycle;
  run.cycles = cfg.pegboard.cycles;

  struct Task {
    double spacing;
    int trial;
    bool compliant;
  };
  std::vector<Task> tasks;
  for (double spacing : cfg.pegboard.spacing_bl) {
    for (int trial = 0; trial < cfg.pegboard.trials; ++trial) {
      tasks.push_back({spacing, trial, true});
      tasks.push_back({spacing, trial, false});
    }
  }
  cells.resize(tasks.size());
  parallel_for(int(tasks.size()), [&](int i) {
    const Task& task = tasks[i];
    PegBoard board;
    board.spacing_bl = task.spacing;
    board.peg_radius = cfg.pegboard.peg_radius;
    // Uniform origin offset within one lattice cell, seeded per trial.
    std::mt19937_64 rng(cfg.seed * 1000 + uint64_t(task.trial));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double pitch = board.pitch(cfg.geometry);
    board.origin = {pitch * unif(rng), pitch * unif(rng)};

    CompliantRunConfig local = run;
    local.compliant = task.compliant;
    const auto [traj, metrics] =
        simulate_compliant(cfg.gait, board, cfg.pegboard.admittance, cfg.geometry,
                           cfg.friction, local);
    cells[i] = {task.spacing, task.trial, task.compliant,
                metrics.angular_displacement_deg, metrics.swept_area_bl2};
  });
  return cells;
}

void run_compliant(const RunConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const auto cells = compliant_study(cfg);

  CsvWriter csv(Provenance{cfg.hash()},
                {"spacing_bl", "trial", "mode", "angular_displacement_deg",
                 "swept_area_bl2"});
  for (const auto& c : cells) {
    csv.row({CsvWriter::format(c.spacing_bl), std::to_string(c.trial),
             c.compliant ? "compliant" : "open_loop",
             CsvWriter::format(c.angular_displacement_deg),
             CsvWriter::format(c.swept_area_bl2)});
  }
  csv.save(out / "compliant_trials.csv");

  json summary;
  summary["provenance"] = provenance_json(cfg);
  summary["design"] = design_json(cfg.gait);
  summary["spacings"] = json::array();
  for (double spacing : cfg.pegboard.spacing_bl) {
    auto stats = [&](bool compliant) {
      double sum = 0.0, sq = 0.0;
      int n = 0;
      for (const auto& c : cells) {
        if (c.spacing_bl != spacing || c.compliant != compliant) continue;
        sum += c.angular_displacement_deg;
        sq += c.angular_displacement_deg * c.angular_displacement_deg;
        ++n;
      }
      const double mean = n ? sum / n : 0.0;
      const double var = n ? std::max(0.0, sq / n - mean * mean) : 0.0;
      return std::pair{mean, std::sqrt(var)};
    };
    const auto [cm, cs] = stats(true);
    const auto [om, os] = stats(false);
    summary["spacings"].push_back({{"spacing_bl", spacing},
                                   {"compliant_mean_deg", cm},
                                   {"compliant_std_deg", cs},
                                   {"open_loop_mean_deg", om},
                                   {"open_loop_std_deg", os},
                                   {"mean_ratio", om != 0.0 ? cm / om : 0.0}});
  }

  // Contact-stiffness sensitivity at the first spacing, first trial.
  summary["k_c_sensitivity"] = json::array();
  if (!cfg.pegboard.spacing_bl.empty()) {
    for (double scale : {0.5, 1.0, 2.0}) {
      PegBoard board;
      board.spacing_bl = cfg.pegboard.spacing_bl.front();
      board.peg_radius = cfg.pegboard.peg_radius;
      std::mt19937_64 rng(cfg.seed * 1000);
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      const double pitch = board.pitch(cfg.geometry);
      board.origin = {pitch * unif(rng), pitch * unif(rng)};
      CompliantRunConfig run;
      run.contact_stiffness = scale * cfg.pegboard.contact_stiffness;
      run.steps_per_cycle = cfg.pegboard.steps_per_cycle;
      run.cycles = cfg.pegboard.cycles;
      run.compliant = true;
      const auto [traj, metrics] =
          simulate_compliant(cfg.gait, board, cfg.pegboard.admittance,
                             cfg.geometry, cfg.friction, run);
      summary["k_c_sensitivity"].push_back(
          {{"contact_stiffness", run.contact_stiffness},
           {"angular_displacement_deg", metrics.angular_displacement_deg}});
    }
  }
  write_text_file(out / "compliant_summary.json", summary.dump(2) + "\n");

  // Representative run: first spacing, first trial, compliant.
  if (!cfg.pegboard.spacing_bl.empty()) {
    PegBoard board;
    board.spacing_bl = cfg.pegboard.spacing_bl.front();
    board.peg_radius = cfg.pegboard.peg_radius;
    std::mt19937_64 rng(cfg.seed * 1000);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const double pitch = board.pitch(cfg.geometry);
    board.origin = {pitch * unif(rng), pitch * unif(rng)};
    CompliantRunConfig rep;
    rep.contact_stiffness = cfg.pegboard.contact_stiffness;
    rep.steps_per_cycle = cfg.pegboard.steps_per_cycle;
    rep.cycles = cfg.pegboard.cycles;
    rep.compliant = true;
    const auto [traj, metrics] =
        simulate_compliant(cfg.gait, board, cfg.pegboard.admittance, cfg.geometry,
                           cfg.friction, rep);

    double min_x = 1e9, min_y = 1e9, max_x = -1e9, max_y = -1e9;
    for (const auto& s : traj.samples) {
      min_x = std::min(min_x, s.pose.position.x());
      max_x = std::max(max_x, s.pose.position.x());
      min_y = std::min(min_y, s.pose.position.y());
      max_y = std::max(max_y, s.pose.position.y());
    }
    const double bl = cfg.geometry.body_length();
    min_x -= bl;
    max_x += bl;
    min_y -= bl;
    max_y += bl;
    const double span = std::max(max_x - min_x, max_y - min_y);

    SvgWriter svg(720, 720, Provenance{cfg.hash()});
    svg.set_view(min_x, min_y, min_x + span, min_y + span);
    for (const auto& peg :
         board.pegs_near({min_x + span / 2, min_y + span / 2}, span, cfg.geometry)) {
      svg.circle(peg.x(), peg.y(), board.peg_radius, "#888888");
    }
    std::vector<Eigen::Vector2d> path_pts;
    for (const auto& s : traj.samples) path_pts.push_back(s.pose.position);
    svg.polyline(path_pts, "#999999", 1.0);
    const int snapshots = 7;
    for (int k = 0; k < snapshots; ++k) {
      const size_t idx = std::min(traj.samples.size() - 1,
                                  size_t(k) * (traj.samples.size() - 1) / (snapshots - 1));
      draw_chain(svg, traj.samples[idx].pose, traj.samples[idx].shape, cfg.geometry,
                 phase_color(double(k) / (snapshots - 1)), 0.5);
    }
    svg.save(out / "compliant.svg");
  }
}

void run_multileg(const RunConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  const MultilegGeometry& geom = cfg.multileg.geometry;

  // Height field over (phi, w3).
  const HeightField hf =
      multileg_height_function(geom, cfg.multileg.w3_max, cfg.multileg.grid_cells);
  CsvWriter field_csv(Provenance{cfg.hash()},
                      {"row", "col", "phi", "w3", "value", "feasible"});
  for (int iv = 0; iv < hf.grid.v.cells; ++iv) {
    for (int iu = 0; iu < hf.grid.u.cells; ++iu) {
      const int idx = hf.grid.index(iu, iv);
      field_csv.row_values({double(iv), double(iu), hf.grid.u.coord(iu),
                            hf.grid.v.coord(iv),
                            hf.mask[idx] ? hf.values[idx] : 0.0,
                            double(hf.mask[idx])});
    }
  }
  field_csv.save(out / "multileg_field.csv");

  double max_abs = 1e-12;
  for (int i = 0; i < hf.grid.num_nodes(); ++i) {
    if (hf.mask[i]) max_abs = std::max(max_abs, std::abs(hf.values[i]));
  }
  SvgWriter field_svg(720, 720, Provenance{cfg.hash()});
  field_svg.set_view(hf.grid.u.lower, hf.grid.v.lower, hf.grid.u.upper,
                     hf.grid.v.upper);
  for (int iv = 0; iv < hf.grid.v.cells; ++iv) {
    for (int iu = 0; iu < hf.grid.u.cells; ++iu) {
      const int idx = hf.grid.index(iu, iv);
      field_svg.rect(hf.grid.u.coord(iu) - 0.5 * hf.grid.u.spacing(),
                     hf.grid.v.coord(iv) - 0.5 * hf.grid.v.spacing(),
                     hf.grid.u.spacing(), hf.grid.v.spacing(),
                     hf.mask[idx] ? diverging_color(hf.values[idx], max_abs)
                                  : "#000000");
    }
  }
  // Overlay the largest-amplitude sinusoidal gait path.
  if (!cfg.multileg.a3_values.empty()) {
    const double a3 = cfg.multileg.a3_values.back();
    std::vector<Eigen::Vector2d> path_pts;
    for (int i = 0; i <= 256; ++i) {
      const double phi = kTwoPi * i / 256;
      path_pts.push_back({phi, a3 * std::sin(phi)});
    }
    field_svg.polyline(path_pts, "#1133bb", 2.5);
  }
  field_svg.save(out / "multileg_field.svg");

  // A3 sweep.
  CsvWriter sweep_csv(Provenance{cfg.hash()},
                      {"a3_deg", "angular_displacement_deg", "ok", "error"});
  json summary;
  summary["provenance"] = provenance_json(cfg);
  summary["a3_sweep"] = json::array();
  for (double a3 : cfg.multileg.a3_values) {
    try {
      const double turn =
          multileg_turn_deg(a3, cfg.multileg.omega, geom,
                            cfg.multileg.steps_per_cycle, cfg.multileg.cycles);
      sweep_csv.row({CsvWriter::format(rad2deg(a3)), CsvWriter::format(turn), "1", ""});
      summary["a3_sweep"].push_back(
          {{"a3_deg", rad2deg(a3)}, {"angular_displacement_deg", turn}});
    } catch (const std::exception& e) {
      sweep_csv.row({CsvWriter::format(rad2deg(a3)), "0", "0", e.what()});
    }
  }
  sweep_csv.save(out / "a3_sweep.csv");
  write_text_file(out / "multileg_summary.json", summary.dump(2) + "\n");

  // Overhead snapshots of the strongest turn.
  if (!cfg.multileg.a3_values.empty()) {
    const double a3 = cfg.multileg.a3_values.back();
    const Trajectory traj =
        multileg_turn_trajectory(a3, cfg.multileg.omega, geom,
                                 cfg.multileg.steps_per_cycle, 1);
    double min_x = 1e9, min_y = 1e9, max_x = -1e9, max_y = -1e9;
    for (const auto& s : traj.samples) {
      min_x = std::min(min_x, s.pose.position.x());
      max_x = std::max(max_x, s.pose.position.x());
      min_y = std::min(min_y, s.pose.position.y());
      max_y = std::max(max_y, s.pose.position.y());
    }
    const double bl = geom.body_length();
    min_x -= bl;
    max_x += bl;
    min_y -= bl;
    max_y += bl;
    const double span = std::max(max_x - min_x, max_y - min_y);

    SvgWriter svg(720, 720, Provenance{cfg.hash()});
    svg.set_view(min_x, min_y, min_x + span, min_y + span);
    const ChainGeometry chain = geom.body_chain();
    const int snapshots = 5;
    for (int k = 0; k < snapshots; ++k) {
      const size_t idx = std::min(traj.samples.size() - 1,
                                  size_t(k) * (traj.samples.size() - 1) / (snapshots - 1));
      const auto& sample = traj.samples[idx];
      draw_chain(svg, sample.pose, sample.shape, chain,
                 phase_color(double(k) / (snapshots - 1)), 0.5);
      // Feet of this sample.
      const double phi = wrap_to_2pi(kTwoPi * cfg.multileg.omega * sample.t);
      const double w3 = a3 * std::sin(kTwoPi * cfg.multileg.omega * sample.t);
      const auto legs = multileg_configuration({phi, w3}, geom);
      for (const auto& side : {legs.left, legs.right}) {
        for (const auto& leg : side) {
          svg.circle(sample.pose.apply(leg.foot).x(), sample.pose.apply(leg.foot).y(),
                     geom.leg_length * 0.18,
                     leg.stance ? "#222222" : "#bbbbbb");
        }
      }
    }
    svg.save(out / "multileg.svg");
  }
}

void run_report(const RunConfig& cfg, const fs::path& out) {
  ensure_dir(out);
  CsvWriter csv(Provenance{cfg.hash()}, {"study", "metric", "value"});
  json j;
  j["provenance"] = provenance_json(cfg);

  auto has = [&](const char* name) { return fs::exists(out / name); };

  if (has("sweep.csv")) {
    // Recompute the headline numbers from the machine-readable JSON.
    std::ifstream in(out / "designs.json");
    if (in) {
      json doc = json::parse(in, nullptr, false);
      if (!doc.is_discarded() && doc.contains("points")) {
        double best_val = 0.0, best_turn = -1e9;
        for (const auto& p : doc["points"]) {
          if (!p.value("ok", false)) continue;
          const double turn = p.value("angular_displacement_deg", 0.0);
          if (turn > best_turn) {
            best_turn = turn;
            best_val = p.value("value", 0.0);
          }
        }
        csv.row({"sweep", "argmax_" + doc.value("parameter", std::string("value")),
                 CsvWriter::format(best_val)});
        csv.row({"sweep", "max_angular_displacement_deg", CsvWriter::format(best_turn)});
        j["sweep"] = {{"argmax_value", best_val},
                      {"max_angular_displacement_deg", best_turn}};
      }
    }
  }
  if (has("compliant_summary.json")) {
    std::ifstream in(out / "compliant_summary.json");
    json doc = json::parse(in, nullptr, false);
    if (!doc.is_discarded() && doc.contains("spacings")) {
      for (const auto& s : doc["spacings"]) {
        csv.row({"compliant",
                 "mean_ratio_at_" + CsvWriter::format(s.value("spacing_bl", 0.0)),
                 CsvWriter::format(s.value("mean_ratio", 0.0))});
      }
      j["compliant"] = doc["spacings"];
    }
  }
  if (has("multileg_summary.json")) {
    std::ifstream in(out / "multileg_summary.json");
    json doc = json::parse(in, nullptr, false);
    if (!doc.is_discarded() && doc.contains("a3_sweep") && !doc["a3_sweep"].empty()) {
      const auto& last = doc["a3_sweep"].back();
      csv.row({"multileg", "turn_at_max_a3_deg",
               CsvWriter::format(last.value("angular_displacement_deg", 0.0))});
      j["multileg"] = doc["a3_sweep"];
    }
  }
  if (has("metrics.json")) {
    std::ifstream in(out / "metrics.json");
    json doc = json::parse(in, nullptr, false);
    if (!doc.is_discarded() && doc.contains("metrics")) {
      csv.row({"simulate", "angular_displacement_deg",
               CsvWriter::format(
                   doc["metrics"].value("angular_displacement_deg_per_cycle", 0.0))});
      j["simulate"] = doc["metrics"];
    }
  }
  csv.save(out / "summary.csv");
  write_text_file(out / "summary.json", j.dump(2) + "\n");
}

}  // namespace omegaturn
