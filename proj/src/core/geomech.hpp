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

// Shape-space machinery: grids over 2D sub-shape spaces, reduced connection
// fields, height functions (curl of a connection row), line integrals along
// gait paths, and winding-number surface integrals.
//
// A 2D embedding maps grid coordinates (u, v) to a full joint shape along
// with the exact derivative d(theta)/d(u, v); the reduced 3x2 connection at
// a cell is the body-velocity solve at a unit rate along each coordinate.
// The curl of one row of that field over the grid is the height function:
// its surface integral over the region enclosed by a closed gait path
// approximates the body displacement the path generates per cycle.

#ifndef OMEGATURN_CORE_GEOMECH_HPP_
#define OMEGATURN_CORE_GEOMECH_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/chain.hpp"
#include "core/drag.hpp"
#include "core/gait.hpp"

namespace omegaturn {

struct GridAxis {
  std::string name;
  double lower = 0.0;
  double upper = kTwoPi;
  int cells = 129;      // sample nodes along the axis
  bool periodic = false;  // periodic axes span [0, 2*pi)

  double coord(int i) const;
  double spacing() const;
  void validate() const;
};

struct ShapeGrid {
  GridAxis u;
  GridAxis v;

  int num_nodes() const { return u.cells * v.cells; }
  int index(int iu, int iv) const { return iv * u.cells + iu; }
  void validate() const;
};

// Joint shape and its derivative at a point of a 2D sub-shape space.
struct Embedding {
  std::function<JointVector(double u, double v)> shape;
  // N x 2 matrix: columns are d(theta)/du and d(theta)/dv.
  std::function<Eigen::MatrixXd(double u, double v)> jacobian;
};

// Embeddings for the three sub-shape spaces of the two-wave family.
Embedding embed_tau_o_amp_o(const TwoWaveDesign& d, int num_joints);  // (tau_o, A_o)
Embedding embed_tau_f_amp_f(const TwoWaveDesign& d, int num_joints);  // (tau_f, A_f)
Embedding embed_tau_f_tau_o(const TwoWaveDesign& d, int num_joints);  // (tau_f, tau_o)
// Sine/cosine mode mixing space (r1, r2) at spatial frequency k.
Embedding embed_geometric(double k, int num_joints);

using FeasibilityMask = std::vector<uint8_t>;  // 1 = feasible, per node

FeasibilityMask build_feasibility_mask(const ShapeGrid& grid,
                                       const Embedding& embed,
                                       const FeasibilitySpec& spec,
                                       const ChainGeometry& geom);

struct ConnectionField {
  ShapeGrid grid;
  FeasibilityMask mask;
  // Per node, row-major 3x2 reduced connection (body rows x grid columns);
  // entries are untouched wherever the mask is infeasible.
  std::vector<Eigen::Matrix<double, 3, 2>> cells;
};

enum class BodyRow { kForward = 0, kLateral = 1, kRotational = 2 };

ConnectionField reduced_connection(const ShapeGrid& grid, const Embedding& embed,
                                   const FrictionModel& model,
                                   const ChainGeometry& geom,
                                   const FeasibilitySpec& spec);

struct HeightField {
  ShapeGrid grid;
  FeasibilityMask mask;           // nodes where the curl exists
  std::vector<double> values;     // per node
};

// Curl of the chosen row by central differences; one-sided at mask and
// non-periodic boundaries, masked where no feasible neighbors exist.
HeightField height_function(const ConnectionField& field, BodyRow row);

// Closed path in a 2D sub-shape space, sampled over one cycle.
struct GaitPath {
  std::vector<Eigen::Vector2d> points;
};

// Samples a closed path from a parametric function over [0, 1).
GaitPath sample_path(const std::function<Eigen::Vector2d(double s)>& fn,
                     int samples);

// Trapezoidal line integral of the reduced connection along the path; the
// connection is evaluated directly (no grid interpolation). Throws
// InfeasiblePathError when a sample violates the feasibility spec.
Eigen::Vector3d line_integral(const GaitPath& path, const Embedding& embed,
                              const FrictionModel& model,
                              const ChainGeometry& geom,
                              const FeasibilitySpec& spec);

// Winding-number surface integral of a height field over the region the
// path encloses. Periodic axes are handled on the universal cover; paths
// that wind a periodic axis are closed by a documented convention: through
// the zero line of the linear axis for cylinder spaces, and through the
// corner for torus spaces.
double surface_integral(const HeightField& hf, const GaitPath& path);

// Per-node winding numbers of the path (exposed for tests and plots).
std::vector<double> winding_numbers(const ShapeGrid& grid,
                                    const GaitPath& path);

// True iff every path sample lands on a feasible grid node region.
bool path_on_feasible_cells(const ShapeGrid& grid, const FeasibilityMask& mask,
                            const GaitPath& path);

}  // namespace omegaturn

#endif  // OMEGATURN_CORE_GEOMECH_HPP_
