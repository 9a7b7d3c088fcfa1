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

#include "core/geomech.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/parallel.hpp"

namespace omegaturn {

double GridAxis::spacing() const {
  return periodic ? (upper - lower) / cells : (upper - lower) / (cells - 1);
}

double GridAxis::coord(int i) const { return lower + i * spacing(); }

void GridAxis::validate() const {
  if (cells < 8) throw std::invalid_argument("grid axis needs >= 8 cells");
  if (!(upper > lower)) throw std::invalid_argument("grid axis bounds inverted");
  if (periodic && std::abs((upper - lower) - kTwoPi) > 1e-12) {
    throw std::invalid_argument("periodic axes must span [0, 2*pi)");
  }
}

void ShapeGrid::validate() const {
  u.validate();
  v.validate();
}

Embedding embed_tau_o_amp_o(const TwoWaveDesign& d, int n) {
  Embedding e;
  e.shape = [d, n](double tau_o, double amp_o) {
    return reduced_shape(amp_o, tau_o, d, n);
  };
  e.jacobian = [d, n](double tau_o, double amp_o) {
    Eigen::MatrixXd jac(n, 2);
    const double tau_f = tau_o - d.psi;
    const double amp_f = d.forward_profile.value(tau_f);
    const double damp_f = d.forward_profile.derivative(tau_f);
    for (int i = 1; i <= n; ++i) {
      const double arg_f = tau_f + kTwoPi * d.k_f * i / n;
      const double arg_o = tau_o + kTwoPi * d.k_o * i / n;
      jac(i - 1, 0) = damp_f * std::sin(arg_f) + amp_f * std::cos(arg_f) +
                      amp_o * std::cos(arg_o);
      jac(i - 1, 1) = std::sin(arg_o);
    }
    return jac;
  };
  return e;
}

Embedding embed_tau_f_amp_f(const TwoWaveDesign& d, int n) {
  Embedding e;
  e.shape = [d, n](double tau_f, double amp_f) {
    JointVector theta(n);
    const double tau_o = tau_f + d.psi;
    const double amp_o = d.turning_profile.value(tau_o);
    for (int i = 1; i <= n; ++i) {
      theta[i - 1] = amp_f * std::sin(tau_f + kTwoPi * d.k_f * i / n) +
                     amp_o * std::sin(tau_o + kTwoPi * d.k_o * i / n);
    }
    return theta;
  };
  e.jacobian = [d, n](double tau_f, double amp_f) {
    Eigen::MatrixXd jac(n, 2);
    const double tau_o = tau_f + d.psi;
    const double amp_o = d.turning_profile.value(tau_o);
    const double damp_o = d.turning_profile.derivative(tau_o);
    for (int i = 1; i <= n; ++i) {
      const double arg_f = tau_f + kTwoPi * d.k_f * i / n;
      const double arg_o = tau_o + kTwoPi * d.k_o * i / n;
      jac(i - 1, 0) = amp_f * std::cos(arg_f) + damp_o * std::sin(arg_o) +
                      amp_o * std::cos(arg_o);
      jac(i - 1, 1) = std::sin(arg_f);
    }
    return jac;
  };
  return e;
}

Embedding embed_tau_f_tau_o(const TwoWaveDesign& d, int n) {
  Embedding e;
  e.shape = [d, n](double tau_f, double tau_o) {
    JointVector theta(n);
    const double amp_f = d.forward_profile.value(tau_f);
    const double amp_o = d.turning_profile.value(tau_o);
    for (int i = 1; i <= n; ++i) {
      theta[i - 1] = amp_f * std::sin(tau_f + kTwoPi * d.k_f * i / n) +
                     amp_o * std::sin(tau_o + kTwoPi * d.k_o * i / n);
    }
    return theta;
  };
  e.jacobian = [d, n](double tau_f, double tau_o) {
    Eigen::MatrixXd jac(n, 2);
    const double amp_f = d.forward_profile.value(tau_f);
    const double damp_f = d.forward_profile.derivative(tau_f);
    const double amp_o = d.turning_profile.value(tau_o);
    const double damp_o = d.turning_profile.derivative(tau_o);
    for (int i = 1; i <= n; ++i) {
      const double arg_f = tau_f + kTwoPi * d.k_f * i / n;
      const double arg_o = tau_o + kTwoPi * d.k_o * i / n;
      jac(i - 1, 0) = damp_f * std::sin(arg_f) + amp_f * std::cos(arg_f);
      jac(i - 1, 1) = damp_o * std::sin(arg_o) + amp_o * std::cos(arg_o);
    }
    return jac;
  };
  return e;
}

Embedding embed_geometric(double k, int n) {
  Embedding e;
  e.shape = [k, n](double r1, double r2) {
    return geometric_basis_shape({r1, r2}, k, n);
  };
  e.jacobian = [k, n](double, double) {
    Eigen::MatrixXd jac(n, 2);
    for (int i = 1; i <= n; ++i) {
      jac(i - 1, 0) = std::sin(kTwoPi * k * i / n);
      jac(i - 1, 1) = std::cos(kTwoPi * k * i / n);
    }
    return jac;
  };
  return e;
}

FeasibilityMask build_feasibility_mask(const ShapeGrid& grid,
                                       const Embedding& embed,
                                       const FeasibilitySpec& spec,
                                       const ChainGeometry& geom) {
  grid.validate();
  FeasibilityMask mask(grid.num_nodes(), 0);
  parallel_for(grid.v.cells, [&](int iv) {
    const double v = grid.v.coord(iv);
    for (int iu = 0; iu < grid.u.cells; ++iu) {
      const JointVector theta = embed.shape(grid.u.coord(iu), v);
      mask[grid.index(iu, iv)] = is_feasible(theta, spec, geom) ? 1 : 0;
    }
  });
  return mask;
}

ConnectionField reduced_connection(const ShapeGrid& grid, const Embedding& embed,
                                   const FrictionModel& model,
                                   const ChainGeometry& geom,
                                   const FeasibilitySpec& spec) {
  grid.validate();
  ConnectionField field;
  field.grid = grid;
  field.mask = build_feasibility_mask(grid, embed, spec, geom);
  field.cells.assign(grid.num_nodes(), Eigen::Matrix<double, 3, 2>::Zero());

  parallel_for(grid.v.cells, [&](int iv) {
    const double v = grid.v.coord(iv);
    for (int iu = 0; iu < grid.u.cells; ++iu) {
      const int idx = grid.index(iu, iv);
      if (!field.mask[idx]) continue;
      const double u = grid.u.coord(iu);
      const JointVector theta = embed.shape(u, v);
      const Eigen::MatrixXd jac = embed.jacobian(u, v);
      const DragSampler sampler = make_drag_sampler(theta, model, geom);
      Eigen::Matrix<double, 3, 2> reduced;
      for (int c = 0; c < 2; ++c) {
        try {
          reduced.col(c) = solve_balance(sampler.problem(jac.col(c)));
        } catch (const NonConvergenceError& e) {
          throw NonConvergenceError("reduced connection cell (" +
                                        std::to_string(iu) + ", " +
                                        std::to_string(iv) + "): " + e.what(),
                                    e.residual());
        }
      }
      field.cells[idx] = reduced;
    }
  });
  return field;
}

namespace {

// One-dimensional derivative stencil along a grid axis with mask handling:
// central where both neighbors exist, one-sided otherwise, NaN when neither.
double masked_derivative(const ConnectionField& field, BodyRow row, int comp,
                         int iu, int iv, int axis) {
  const ShapeGrid& g = field.grid;
  const GridAxis& ax = (axis == 0) ? g.u : g.v;
  const int i = (axis == 0) ? iu : iv;
  const int count = ax.cells;

  auto at = [&](int j) -> std::pair<bool, double> {
    int jj = j;
    if (ax.periodic) {
      jj = ((j % count) + count) % count;
    } else if (j < 0 || j >= count) {
      return {false, 0.0};
    }
    const int idx = (axis == 0) ? g.index(jj, iv) : g.index(iu, jj);
    if (!field.mask[idx]) return {false, 0.0};
    return {true, field.cells[idx](int(row), comp)};
  };

  const auto [ok_m, f_m] = at(i - 1);
  const auto [ok_p, f_p] = at(i + 1);
  const auto [ok_0, f_0] = at(i);
  const double h = ax.spacing();
  if (ok_m && ok_p) return (f_p - f_m) / (2.0 * h);
  if (ok_p && ok_0) return (f_p - f_0) / h;
  if (ok_m && ok_0) return (f_0 - f_m) / h;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

HeightField height_function(const ConnectionField& field, BodyRow row) {
  HeightField hf;
  hf.grid = field.grid;
  hf.mask.assign(field.grid.num_nodes(), 0);
  hf.values.assign(field.grid.num_nodes(), 0.0);

  for (int iv = 0; iv < field.grid.v.cells; ++iv) {
    for (int iu = 0; iu < field.grid.u.cells; ++iu) {
      const int idx = field.grid.index(iu, iv);
      if (!field.mask[idx]) continue;
      // curl = d(A_v)/du - d(A_u)/dv for the chosen row.
      const double dAv_du = masked_derivative(field, row, 1, iu, iv, 0);
      const double dAu_dv = masked_derivative(field, row, 0, iu, iv, 1);
      if (std::isnan(dAv_du) || std::isnan(dAu_dv)) continue;
      hf.values[idx] = dAv_du - dAu_dv;
      hf.mask[idx] = 1;
    }
  }
  return hf;
}

GaitPath sample_path(const std::function<Eigen::Vector2d(double s)>& fn,
                     int samples) {
  GaitPath path;
  path.points.reserve(samples + 1);
  for (int i = 0; i <= samples; ++i) {
    path.points.push_back(fn(double(i) / samples));
  }
  return path;
}

Eigen::Vector3d line_integral(const GaitPath& path, const Embedding& embed,
                              const FrictionModel& model,
                              const ChainGeometry& geom,
                              const FeasibilitySpec& spec) {
  if (path.points.size() < 2) return Eigen::Vector3d::Zero();

  std::vector<Eigen::Matrix<double, 3, 2>> conn(path.points.size());
  parallel_for(int(path.points.size()), [&](int i) {
    const Eigen::Vector2d& p = path.points[i];
    const JointVector theta = embed.shape(p.x(), p.y());
    if (!is_feasible(theta, spec, geom)) {
      throw InfeasiblePathError("path sample " + std::to_string(i) +
                                " violates the feasibility spec");
    }
    const Eigen::MatrixXd jac = embed.jacobian(p.x(), p.y());
    const DragSampler sampler = make_drag_sampler(theta, model, geom);
    Eigen::Matrix<double, 3, 2> reduced;
    reduced.col(0) = solve_balance(sampler.problem(jac.col(0)));
    reduced.col(1) = solve_balance(sampler.problem(jac.col(1)));
    conn[i] = reduced;
  });

  Eigen::Vector3d total = Eigen::Vector3d::Zero();
  for (size_t i = 0; i + 1 < path.points.size(); ++i) {
    const Eigen::Vector2d dr = path.points[i + 1] - path.points[i];
    total += 0.5 * (conn[i] + conn[i + 1]) * dr;
  }
  return total;
}

namespace {

// Appends the closure route for paths that wind periodic axes, working on
// the universal cover. Cylinder paths close through the zero line of the
// linear axis; torus paths close through the corner.
std::vector<Eigen::Vector2d> closed_cover_path(const ShapeGrid& grid,
                                               const GaitPath& path) {
  std::vector<Eigen::Vector2d> pts = path.points;
  if (pts.size() < 2) return pts;
  const Eigen::Vector2d first = pts.front();
  const Eigen::Vector2d last = pts.back();

  const double span_u = grid.u.upper - grid.u.lower;
  const double span_v = grid.v.upper - grid.v.lower;
  const double wu = grid.u.periodic ? std::round((last.x() - first.x()) / span_u) : 0.0;
  const double wv = grid.v.periodic ? std::round((last.y() - first.y()) / span_v) : 0.0;

  if (wu == 0.0 && wv == 0.0) {
    if ((last - first).norm() > 1e-9) pts.push_back(first);
    return pts;
  }
  if (grid.u.periodic && !grid.v.periodic && wu != 0.0) {
    // Cylinder: down to the v = 0 line, back along it, and up to the start.
    pts.push_back({last.x(), 0.0});
    pts.push_back({first.x(), 0.0});
    pts.push_back(first);
    return pts;
  }
  if (!grid.u.periodic && grid.v.periodic && wv != 0.0) {
    pts.push_back({0.0, last.y()});
    pts.push_back({0.0, first.y()});
    pts.push_back(first);
    return pts;
  }
  // Torus: an L through the corner.
  pts.push_back({last.x(), first.y() + wv * span_v});
  pts.push_back(first + Eigen::Vector2d(0.0, wv * span_v));
  pts.push_back({first.x(), first.y()});
  return pts;
}

}  // namespace

std::vector<double> winding_numbers(const ShapeGrid& grid, const GaitPath& path) {
  std::vector<double> wind(grid.num_nodes(), 0.0);
  const auto pts = closed_cover_path(grid, path);
  if (pts.size() < 3) return wind;

  double min_x = pts[0].x(), max_x = pts[0].x();
  double min_y = pts[0].y(), max_y = pts[0].y();
  for (const auto& p : pts) {
    min_x = std::min(min_x, p.x());
    max_x = std::max(max_x, p.x());
    min_y = std::min(min_y, p.y());
    max_y = std::max(max_y, p.y());
  }

  const double span_u = grid.u.upper - grid.u.lower;
  const double span_v = grid.v.upper - grid.v.lower;
  // Lattice shifts that can place a node inside the path's bounding box.
  int ku_lo = 0, ku_hi = 0, kv_lo = 0, kv_hi = 0;
  if (grid.u.periodic) {
    ku_lo = int(std::floor((min_x - grid.u.upper) / span_u));
    ku_hi = int(std::ceil((max_x - grid.u.lower) / span_u));
  }
  if (grid.v.periodic) {
    kv_lo = int(std::floor((min_y - grid.v.upper) / span_v));
    kv_hi = int(std::ceil((max_y - grid.v.lower) / span_v));
  }

  struct Crossing {
    double x;
    int sign;
  };

  for (int iv = 0; iv < grid.v.cells; ++iv) {
    for (int kv = kv_lo; kv <= kv_hi; ++kv) {
      const double y = grid.v.coord(iv) + kv * span_v;
      if (y < min_y || y > max_y) continue;

      std::vector<Crossing> crossings;
      for (size_t s = 0; s + 1 < pts.size(); ++s) {
        const Eigen::Vector2d& a = pts[s];
        const Eigen::Vector2d& b = pts[s + 1];
        if (a.y() <= y && b.y() > y) {
          const double t = (y - a.y()) / (b.y() - a.y());
          crossings.push_back({a.x() + t * (b.x() - a.x()), +1});
        } else if (b.y() <= y && a.y() > y) {
          const double t = (y - b.y()) / (a.y() - b.y());
          crossings.push_back({b.x() + t * (a.x() - b.x()), -1});
        }
      }
      if (crossings.empty()) continue;
      std::sort(crossings.begin(), crossings.end(),
                [](const Crossing& a, const Crossing& b) { return a.x < b.x; });
      // suffix[i] = net sign of crossings at x >= crossings[i].x
      std::vector<int> suffix(crossings.size() + 1, 0);
      for (int i = int(crossings.size()) - 1; i >= 0; --i) {
        suffix[i] = suffix[i + 1] + crossings[i].sign;
      }

      for (int iu = 0; iu < grid.u.cells; ++iu) {
        for (int ku = ku_lo; ku <= ku_hi; ++ku) {
          const double x = grid.u.coord(iu) + ku * span_u;
          // Winding about (x, y) = net signed crossings of the ray x' > x.
          size_t lo = 0, hi = crossings.size();
          while (lo < hi) {
            const size_t mid = (lo + hi) / 2;
            if (crossings[mid].x > x) {
              hi = mid;
            } else {
              lo = mid + 1;
            }
          }
          wind[grid.index(iu, iv)] += suffix[lo];
        }
      }
    }
  }
  return wind;
}

double surface_integral(const HeightField& hf, const GaitPath& path) {
  const auto wind = winding_numbers(hf.grid, path);
  const double area = hf.grid.u.spacing() * hf.grid.v.spacing();
  double total = 0.0;
  for (int iv = 0; iv < hf.grid.v.cells; ++iv) {
    const double wv =
        (!hf.grid.v.periodic && (iv == 0 || iv == hf.grid.v.cells - 1)) ? 0.5 : 1.0;
    for (int iu = 0; iu < hf.grid.u.cells; ++iu) {
      const int idx = hf.grid.index(iu, iv);
      if (!hf.mask[idx] || wind[idx] == 0.0) continue;
      const double wu =
          (!hf.grid.u.periodic && (iu == 0 || iu == hf.grid.u.cells - 1)) ? 0.5 : 1.0;
      total += hf.values[idx] * wind[idx] * area * wu * wv;
    }
  }
  return total;
}

bool path_on_feasible_cells(const ShapeGrid& grid, const FeasibilityMask& mask,
                            const GaitPath& path) {
  auto fold = [](double x, const GridAxis& ax) {
    if (!ax.periodic) return x;
    const double span = ax.upper - ax.lower;
    double w = std::fmod(x - ax.lower, span);
    if (w < 0.0) w += span;
    return ax.lower + w;
  };
  for (const auto& p : path.points) {
    const double x = fold(p.x(), grid.u);
    const double y = fold(p.y(), grid.v);
    int iu = int(std::lround((x - grid.u.lower) / grid.u.spacing()));
    int iv = int(std::lround((y - grid.v.lower) / grid.v.spacing()));
    if (grid.u.periodic) iu %= grid.u.cells;
    if (grid.v.periodic) iv %= grid.v.cells;
    iu = std::clamp(iu, 0, grid.u.cells - 1);
    iv = std::clamp(iv, 0, grid.v.cells - 1);
    if (!mask[grid.index(iu, iv)]) return false;
  }
  return true;
}

}  // namespace omegaturn
