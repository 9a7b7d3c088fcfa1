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

#include "core/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include "core/parallel.hpp"

namespace omegaturn {

void OptimizerConfig::validate() const {
  if (grid_cells < 8) throw std::invalid_argument("grid_cells must be >= 8");
  if (phase_samples < 8) throw std::invalid_argument("phase_samples must be >= 8");
  if (!(tol_deg > 0.0)) throw std::invalid_argument("tol_deg must be > 0");
  if (max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
  if (coarse_points < 3) throw std::invalid_argument("coarse_points must be >= 3");
  if (top_candidates < 1) throw std::invalid_argument("top_candidates must be >= 1");
  if (!(max_gain > 0.0) || !(max_bias >= 0.0)) {
    throw std::invalid_argument("parameter bounds must be positive");
  }
}

double turning_objective(const TwoWaveDesign& design, const ChainGeometry& geom,
                         const FrictionModel& model, const OptimizerConfig& cfg) {
  const FeasibilityCertificate cert =
      check_design_feasibility(design, geom, cfg.phase_samples);
  if (!cert.ok()) return kInfeasiblePenalty;
  try {
    const Trajectory traj =
        integrate_gait(design, geom, model, cfg.objective_steps, 1);
    return angular_displacement_deg(traj);
  } catch (const std::exception&) {
    return kInfeasiblePenalty;
  }
}

namespace {

// A candidate parameter tuple for one sweep, with its height-function score.
struct Candidate {
  std::vector<double> params;
  double score = kInfeasiblePenalty;
  bool local = false;  // came from the incumbent-centered refinement
};

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Deterministic ranking: score descending, lexicographic tuple on ties.
void rank_candidates(std::vector<Candidate>& cands) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return lex_less(a.params, b.params);
  });
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  return out;
}

// One hierarchical sweep over one profile function. The field over the
// function's sub-shape space is built once; candidate paths are scored by
// the rotational surface integral, the grid is refined once around the
// incumbent, and the top candidates are re-scored by direct simulation.
class Sweep {
 public:
  Sweep(const TwoWaveDesign& base, const OptimizerConfig& cfg,
        const ChainGeometry& geom, const FrictionModel& model)
      : base_(base), cfg_(cfg), geom_(geom), model_(model) {}
  virtual ~Sweep() = default;

  virtual ShapeGrid grid() const = 0;
  virtual Embedding embedding() const = 0;
  // Parameter boxes swept for this function.
  virtual std::vector<std::pair<double, double>> bounds() const = 0;
  // Whether a parameter is an angle on the circle (refinement wraps).
  virtual std::vector<bool> circular() const = 0;
  // The incumbent design's value of this function's parameters.
  virtual std::vector<double> current_params() const = 0;
  virtual GaitPath path(const std::vector<double>& params) const = 0;
  virtual TwoWaveDesign apply(const std::vector<double>& params) const = 0;

  // Runs the sweep; returns the improved design or the unchanged base.
  // outer_round tightens the incumbent-centered refinement so later rounds
  // polish at finer parameter resolution.
  std::pair<TwoWaveDesign, double> run(double current_objective,
                                       bool* any_feasible_candidate,
                                       int outer_round) {
    const Embedding embed = embedding();
    const FeasibilitySpec spec{base_.theta_max, 0.0};
    const ConnectionField field =
        reduced_connection(grid(), embed, model_, geom_, spec);
    const HeightField hf = height_function(field, BodyRow::kRotational);

    const auto boxes = bounds();
    std::vector<Candidate> cands = enumerate(boxes);
    score(cands, hf, field);
    rank_candidates(cands);

    const double shrink = std::pow(0.55, outer_round);

    // Refine once around the best-scoring coarse candidate, and around the
    // incumbent design so the sweep can always walk locally even where the
    // surface-integral guide is biased.
    auto refine_around = [&](const std::vector<double>& center, bool local,
                             double width_scale) {
      std::vector<std::pair<double, double>> tight(boxes.size());
      const auto is_circ = circular();
      for (size_t p = 0; p < boxes.size(); ++p) {
        const double step = width_scale * (boxes[p].second - boxes[p].first) /
                            std::max(1, cfg_.coarse_points - 1);
        tight[p] = {center[p] - step, center[p] + step};
        if (!is_circ[p]) {
          tight[p].first = std::max(tight[p].first, boxes[p].first);
          tight[p].second = std::min(tight[p].second, boxes[p].second);
        }
      }
      std::vector<Candidate> refined = enumerate(tight);
      for (auto& c : refined) c.local = local;
      score(refined, hf, field);
      cands.insert(cands.end(), refined.begin(), refined.end());
    };
    if (!cands.empty() && cands.front().score > kInfeasiblePenalty / 2) {
      refine_around(cands.front().params, false, 1.0);
    }
    refine_around(current_params(), true, shrink);
    rank_candidates(cands);

    // Simulation acceptance: the top-scored candidates overall plus the
    // best-scored incumbent-local ones.
    std::vector<int> picks;
    for (int i = 0; i < int(cands.size()) && int(picks.size()) < cfg_.top_candidates;
         ++i) {
      picks.push_back(i);
    }
    int local_added = 0;
    for (int i = 0; i < int(cands.size()) && local_added < 3; ++i) {
      if (!cands[i].local) continue;
      if (std::find(picks.begin(), picks.end(), i) == picks.end()) {
        picks.push_back(i);
      }
      ++local_added;
    }

    const int top = int(picks.size());
    std::vector<double> sim(top, kInfeasiblePenalty);
    std::vector<TwoWaveDesign> designs(top, base_);
    parallel_for(top, [&](int i) {
      const Candidate& c = cands[picks[i]];
      if (c.score <= kInfeasiblePenalty / 2) return;
      designs[i] = apply(c.params);
      sim[i] = turning_objective(designs[i], geom_, model_, cfg_);
    });

    int best = -1;
    for (int i = 0; i < top; ++i) {
      if (sim[i] > kInfeasiblePenalty / 2) *any_feasible_candidate = true;
      if (sim[i] > current_objective && (best < 0 || sim[i] > sim[best])) {
        best = i;
      }
    }
    if (best < 0) return {base_, current_objective};
    return {designs[best], sim[best]};
  }

 protected:
  std::vector<Candidate> enumerate(
      const std::vector<std::pair<double, double>>& boxes) const {
    std::vector<Candidate> out;
    std::vector<std::vector<double>> values;
    size_t total = 1;
    const int points =
        boxes.size() == 1 ? 3 * cfg_.coarse_points : cfg_.coarse_points;
    for (const auto& b : boxes) {
      values.push_back(linspace(b.first, b.second, points));
      total *= values.back().size();
    }
    out.reserve(total);
    std::vector<size_t> idx(boxes.size(), 0);
    for (size_t flat = 0; flat < total; ++flat) {
      Candidate c;
      size_t rem = flat;
      c.params.resize(boxes.size());
      for (size_t p = 0; p < boxes.size(); ++p) {
        c.params[p] = values[p][rem % values[p].size()];
        rem /= values[p].size();
      }
      out.push_back(std::move(c));
    }
    return out;
  }

  void score(std::vector<Candidate>& cands, const HeightField& hf,
             const ConnectionField& field) const {
    parallel_for(int(cands.size()), [&](int i) {
      const GaitPath p = path(cands[i].params);
      if (!path_on_feasible_cells(field.grid, field.mask, p)) {
        cands[i].score = kInfeasiblePenalty;
        return;
      }
      cands[i].score = surface_integral(hf, p);
    });
  }

  const TwoWaveDesign base_;
  const OptimizerConfig cfg_;
  const ChainGeometry geom_;
  const FrictionModel model_;
};

// f2 sweep: (a_o, phi_o) over the (tau_o, A_o) cylinder.
class TurningProfileSweep : public Sweep {
 public:
  using Sweep::Sweep;

  ShapeGrid grid() const override {
    ShapeGrid g;
    g.u = {"tau_o", 0.0, kTwoPi, cfg_.grid_cells, true};
    g.v = {"amp_o", 0.0, std::min(2.0 * cfg_.max_gain, 2.2 * base_.theta_max),
           cfg_.grid_cells, false};
    return g;
  }
  Embedding embedding() const override {
    return embed_tau_o_amp_o(base_, geom_.num_joints);
  }
  std::vector<std::pair<double, double>> bounds() const override {
    return {{0.0, std::min(cfg_.max_gain, 1.1 * base_.theta_max)}, {0.0, kTwoPi}};
  }
  std::vector<bool> circular() const override { return {false, true}; }
  std::vector<double> current_params() const override {
    return {base_.turning_profile.gain, wrap_to_2pi(base_.turning_profile.phase)};
  }
  GaitPath path(const std::vector<double>& p) const override {
    const double gain = p[0], phase = p[1];
    return sample_path(
        [gain, phase](double s) {
          const double tau = kTwoPi * s;
          return Eigen::Vector2d(tau, gain * (1.0 + std::sin(tau + phase)));
        },
        cfg_.path_samples);
  }
  TwoWaveDesign apply(const std::vector<double>& p) const override {
    TwoWaveDesign d = base_;
    d.turning_profile.gain = p[0];
    d.turning_profile.phase = wrap_to_pi(p[1]);
    return d;
  }
};

// f1 sweep: (a_f, gamma, phi_f) over the (tau_f, A_f) cylinder.
class ForwardProfileSweep : public Sweep {
 public:
  using Sweep::Sweep;

  ShapeGrid grid() const override {
    ShapeGrid g;
    const double amp_hi = std::min(3.0 * cfg_.max_gain, 2.2 * base_.theta_max);
    g.u = {"tau_f", 0.0, kTwoPi, cfg_.grid_cells, true};
    g.v = {"amp_f", -amp_hi, amp_hi, cfg_.grid_cells, false};
    return g;
  }
  Embedding embedding() const override {
    return embed_tau_f_amp_f(base_, geom_.num_joints);
  }
  std::vector<std::pair<double, double>> bounds() const override {
    return {{0.0, std::min(cfg_.max_gain, 1.1 * base_.theta_max)},
            {0.0, cfg_.max_bias},
            {0.0, kTwoPi}};
  }
  std::vector<bool> circular() const override { return {false, false, true}; }
  std::vector<double> current_params() const override {
    return {base_.forward_profile.gain, base_.forward_profile.bias,
            wrap_to_2pi(base_.forward_profile.phase)};
  }
  GaitPath path(const std::vector<double>& p) const override {
    const double gain = p[0], bias = p[1], phase = p[2];
    return sample_path(
        [gain, bias, phase](double s) {
          const double tau = kTwoPi * s;
          return Eigen::Vector2d(tau, gain * (bias + std::sin(tau + phase)));
        },
        cfg_.path_samples);
  }
  TwoWaveDesign apply(const std::vector<double>& p) const override {
    TwoWaveDesign d = base_;
    d.forward_profile.gain = p[0];
    d.forward_profile.bias = p[1];
    d.forward_profile.phase = wrap_to_pi(p[2]);
    return d;
  }
};

// f3 sweep: psi over the (tau_f, tau_o) torus.
class PhaseLagSweep : public Sweep {
 public:
  using Sweep::Sweep;

  ShapeGrid grid() const override {
    ShapeGrid g;
    g.u = {"tau_f", 0.0, kTwoPi, cfg_.grid_cells, true};
    g.v = {"tau_o", 0.0, kTwoPi, cfg_.grid_cells, true};
    return g;
  }
  Embedding embedding() const override {
    return embed_tau_f_tau_o(base_, geom_.num_joints);
  }
  std::vector<std::pair<double, double>> bounds() const override {
    return {{0.0, kTwoPi}};
  }
  std::vector<bool> circular() const override { return {true}; }
  std::vector<double> current_params() const override {
    return {wrap_to_2pi(base_.psi)};
  }
  GaitPath path(const std::vector<double>& p) const override {
    const double psi = p[0];
    return sample_path(
        [psi](double s) {
          const double tau = kTwoPi * s;
          return Eigen::Vector2d(tau, tau + psi);
        },
        cfg_.path_samples);
  }
  TwoWaveDesign apply(const std::vector<double>& p) const override {
    TwoWaveDesign d = base_;
    d.psi = wrap_to_pi(p[0]);
    return d;
  }
};

}  // namespace

OptimizationReport optimize(const TwoWaveDesign& initial,
                            const OptimizerConfig& cfg,
                            const ChainGeometry& geom,
                            const FrictionModel& model) {
  cfg.validate();
  initial.validate();

  OptimizationReport report;
  report.best = initial;
  report.objective_deg = turning_objective(initial, geom, model, cfg);

  bool any_feasible = report.objective_deg > kInfeasiblePenalty / 2;
  int quiet_rounds = 0;
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    const double before = report.objective_deg;

    {
      TurningProfileSweep sweep(report.best, cfg, geom, model);
      std::tie(report.best, report.objective_deg) =
          sweep.run(report.objective_deg, &any_feasible, outer);
    }
    {
      ForwardProfileSweep sweep(report.best, cfg, geom, model);
      std::tie(report.best, report.objective_deg) =
          sweep.run(report.objective_deg, &any_feasible, outer);
    }
    {
      PhaseLagSweep sweep(report.best, cfg, geom, model);
      std::tie(report.best, report.objective_deg) =
          sweep.run(report.objective_deg, &any_feasible, outer);
    }

    report.outer_iterations = outer + 1;
    report.objective_trace.push_back(report.objective_deg);
    if (outer == 0 && !any_feasible) {
      throw NoFeasibleStartError(
          "no feasible design among the initial design and first-sweep candidates");
    }
    // The refinement window tightens each round, so require two consecutive
    // below-tolerance rounds before declaring convergence.
    if (report.objective_deg > kInfeasiblePenalty / 2 &&
        report.objective_deg - before < cfg.tol_deg) {
      if (++quiet_rounds >= 2) break;
    } else {
      quiet_rounds = 0;
    }
  }

  report.certificate = check_design_feasibility(report.best, geom, cfg.phase_samples);
  return report;
}

}  // namespace omegaturn
