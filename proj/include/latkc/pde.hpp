#pragma once

// Parametric elliptic model problem on the unit square:
//   -div(a(x, y) grad u) = f  in (0,1)^2,  u = 0 on the boundary,
//   a(x, y) = 1/2 + 1/2 sum_j j^-2 y_j sin(j pi x_1) sin(j pi x_2),  y in [-1/2, 1/2]^s,
// discretised with P1 triangles, and the lattice / kernel cubature study of
// E[G(u)] with G(v) = integral of v over the square.

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "latkc/kernel.hpp"
#include "latkc/points.hpp"

namespace latkc::pde {

/// a(x, y); throws InvalidArgument if y is outside [-1/2, 1/2]^s.
double diffusion_coeff(double x1, double x2, std::span<const double> y);

/// Maps a cubature node t in [0,1]^s to the parameter y = t - 1/2.
std::vector<double> to_parameter(std::span<const double> t);

/// Euler-Maclaurin corrected partial sum; |error| < 1e-12 for x >= 1.05.
double riemann_zeta(double x);

/// POD weights gamma_u = (|u|! prod_{j in u} b_j / sqrt(2 zeta(2 lambda) / (2 pi^2)^lambda))^{2/(1+lambda)},
/// b_j = (1 - zeta(2)/2)^-1 j^-2, lambda = 1 / (2 - 2 delta), returned as
/// Gamma_l = (l!)^{2/(1+lambda)} and gt_j = (b_j / sqrt(...))^{2/(1+lambda)}.
CoordinateWeights pod_weights_uq(std::size_t s, double delta);

/// Uniform triangulation of [0,1]^2 with 2^level cells per side; every
/// cell (i, j) is split along the diagonal (i, j)-(i+1, j+1).
class Mesh {
 public:
  explicit Mesh(int level);

  int level() const noexcept { return level_; }
  std::size_t cells_per_side() const noexcept { return m_; }
  double h() const noexcept { return 1.0 / static_cast<double>(m_); }
  std::size_t num_nodes() const noexcept { return (m_ + 1) * (m_ + 1); }
  std::size_t num_interior() const noexcept { return (m_ - 1) * (m_ - 1); }
  std::size_t node(std::size_t i, std::size_t j) const noexcept { return j * (m_ + 1) + i; }
  std::array<double, 2> coords(std::size_t node) const noexcept;
  bool on_boundary(std::size_t node) const noexcept;
  /// Interior unknown index of a node, or -1 for boundary nodes.
  std::ptrdiff_t dof(std::size_t node) const noexcept { return dof_[node]; }
  const std::vector<std::array<std::size_t, 3>>& triangles() const noexcept { return triangles_; }

 private:
  int level_;
  std::size_t m_;
  std::vector<std::ptrdiff_t> dof_;
  std::vector<std::array<std::size_t, 3>> triangles_;
};

using ScalarField = std::function<double(double, double)>;

/// P1 Galerkin solution with zero Dirichlet data, returned at all nodes.
/// The coefficient and the source are sampled at element centroids; the
/// sparse system is solved by a simplicial Cholesky factorisation.
std::vector<double> solve_pde(const Mesh& mesh, const ScalarField& coefficient,
                              const ScalarField& source);
std::vector<double> solve_pde(std::span<const double> y, const Mesh& mesh, const ScalarField& source);

/// Exact integral of the piecewise-linear interpolant of nodal values u.
double qoi(std::span<const double> u, const Mesh& mesh);

enum class UqMethod { Equal, Kernel };
const char* to_string(UqMethod m) noexcept;
UqMethod parse_uq_method(const std::string& name);

struct UqConfig {
  std::size_t s = 1;
  int mesh_level = 4;
  std::vector<std::uint64_t> schedule;  // powers of two
  std::size_t shifts = 8;               // R
  std::uint64_t seed = 0;
  double delta = 0.05;
  std::uint64_t n_ref = 4096;
  std::vector<UqMethod> methods{UqMethod::Equal, UqMethod::Kernel};
  unsigned jobs = 1;
  /// Replaces the R sampled shifts when set (used to pin shifts in tests).
  std::optional<std::vector<Shift>> explicit_shifts;
};

struct UqRow {
  UqMethod method;
  std::uint64_t n;
  double rms_error;  // sqrt(mean_r (Q_r - Q_ref)^2)
  double wce;        // sqrt(mean_r e_r^2)
};

struct UqResult {
  std::vector<UqRow> rows;
  /// Reference value per entry of `methods` (n_ref points, zero shift).
  std::vector<double> reference;
};

/// Source term f(x) = x_1.
double default_source(double x1, double x2);

/// Runs the study: reference rules on the unshifted n_ref lattice, then for
/// every n and shift the equal-weight and kernel cubature (alpha = 1, POD
/// weights from `pod_weights_uq`) estimates of E[G(u)].
UqResult run_uq_experiment(const UqConfig& cfg, const GeneratingVector& gv);

}  // namespace latkc::pde
