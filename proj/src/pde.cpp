#include "latkc/pde.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <thread>

#include "latkc/cubature.hpp"
#include "latkc/error.hpp"

namespace latkc::pde {

double diffusion_coeff(double x1, double x2, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t j = 0; j < y.size(); ++j) {
    if (!(y[j] >= -0.5 && y[j] <= 0.5)) {
      throw InvalidArgument("diffusion_coeff: parameter y[" + std::to_string(j) +
                            "] outside [-1/2, 1/2]");
    }
    const double jj = static_cast<double>(j + 1);
    acc += y[j] / (jj * jj) * std::sin(jj * std::numbers::pi * x1) * std::sin(jj * std::numbers::pi * x2);
  }
  return 0.5 + 0.5 * acc;
}

std::vector<double> to_parameter(std::span<const double> t) {
  std::vector<double> y(t.size());
  for (std::size_t j = 0; j < t.size(); ++j) y[j] = t[j] - 0.5;
  return y;
}

double riemann_zeta(double x) {
  if (!(x > 1.0)) throw InvalidArgument("riemann_zeta: argument must exceed 1");
  constexpr int kTerms = 16;
  // B_2, B_4, ..., B_14
  constexpr long double kB2j[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30,
                                  5.0L / 66, -691.0L / 2730, 7.0L / 6};
  const long double s = x;
  long double acc = 0.0L;
  for (int k = kTerms - 1; k >= 1; --k) acc += std::pow(static_cast<long double>(k), -s);
  const long double n = kTerms;
  acc += std::pow(n, 1.0L - s) / (s - 1.0L) + 0.5L * std::pow(n, -s);
  // Tail: sum_j B_2j / (2j)! * s (s+1) ... (s+2j-2) * N^{-s-2j+1}
  long double rising = s;        // s (s+1) ... (s + 2j - 2)
  long double fact = 2.0L;       // (2j)!
  long double power = std::pow(n, -s - 1.0L);
  for (int j = 1; j <= 7; ++j) {
    acc += kB2j[j - 1] / fact * rising * power;
    rising *= (s + 2 * j - 1) * (s + 2 * j);
    fact *= static_cast<long double>((2 * j + 1) * (2 * j + 2));
    power /= n * n;
  }
  return static_cast<double>(acc);
}

CoordinateWeights pod_weights_uq(std::size_t s, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("pod_weights_uq: delta must be in (0,1)");
  if (s == 0) throw InvalidArgument("pod_weights_uq: s must be positive");
  const double lambda = 1.0 / (2.0 - 2.0 * delta);
  const double p = 2.0 / (1.0 + lambda);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  const double norm = std::sqrt(2.0 * riemann_zeta(2.0 * lambda) / std::pow(2.0 * pi2, lambda));
  const double b_scale = 1.0 / (1.0 - pi2 / 12.0);
  std::vector<double> gamma_tilde(s);
  for (std::size_t j = 0; j < s; ++j) {
    const double jj = static_cast<double>(j + 1);
    gamma_tilde[j] = std::pow(b_scale / (jj * jj) / norm, p);
  }
  std::vector<double> order(s + 1);
  order[0] = 1.0;
  for (std::size_t l = 1; l <= s; ++l) order[l] = order[l - 1] * std::pow(static_cast<double>(l), p);
  return CoordinateWeights::pod(std::move(order), std::move(gamma_tilde));
}

Mesh::Mesh(int level) : level_(level) {
  if (level < 1 || level > 12) throw InvalidArgument("mesh level must be in 1..12");
  m_ = std::size_t{1} << level;
  dof_.assign(num_nodes(), -1);
  std::ptrdiff_t next = 0;
  for (std::size_t j = 1; j < m_; ++j) {
    for (std::size_t i = 1; i < m_; ++i) dof_[node(i, j)] = next++;
  }
  triangles_.reserve(2 * m_ * m_);
  for (std::size_t j = 0; j < m_; ++j) {
    for (std::size_t i = 0; i < m_; ++i) {
      triangles_.push_back({node(i, j), node(i + 1, j), node(i + 1, j + 1)});
      triangles_.push_back({node(i, j), node(i + 1, j + 1), node(i, j + 1)});
    }
  }
}

std::array<double, 2> Mesh::coords(std::size_t nd) const noexcept {
  const std::size_t i = nd % (m_ + 1);
  const std::size_t j = nd / (m_ + 1);
  return {static_cast<double>(i) * h(), static_cast<double>(j) * h()};
}

bool Mesh::on_boundary(std::size_t nd) const noexcept { return dof_[nd] < 0; }

std::vector<double> solve_pde(const Mesh& mesh, const ScalarField& coefficient,
                              const ScalarField& source) {
  const auto dofs = static_cast<Eigen::Index>(mesh.num_interior());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.triangles().size() * 9);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(dofs);

  for (const auto& tri : mesh.triangles()) {
    std::array<std::array<double, 2>, 3> p{mesh.coords(tri[0]), mesh.coords(tri[1]),
                                           mesh.coords(tri[2])};
    const double det = (p[1][0] - p[0][0]) * (p[2][1] - p[0][1]) -
                       (p[2][0] - p[0][0]) * (p[1][1] - p[0][1]);
    const double area = 0.5 * std::abs(det);
    std::array<std::array<double, 2>, 3> grad{};
    for (int a = 0; a < 3; ++a) {
      const auto& q1 = p[(a + 1) % 3];
      const auto& q2 = p[(a + 2) % 3];
      grad[a] = {(q1[1] - q2[1]) / det, (q2[0] - q1[0]) / det};
    }
    const double cx = (p[0][0] + p[1][0] + p[2][0]) / 3.0;
    const double cy = (p[0][1] + p[1][1] + p[2][1]) / 3.0;
    const double a_c = coefficient(cx, cy);
    if (!(a_c > 0.0)) throw NumericalError("solve_pde: diffusion coefficient is not positive");
    const double f_c = source(cx, cy);
    for (int a = 0; a < 3; ++a) {
      const auto row = mesh.dof(tri[a]);
      if (row < 0) continue;
      rhs[row] += f_c * area / 3.0;
      for (int b = 0; b < 3; ++b) {
        const auto col = mesh.dof(tri[b]);
        if (col < 0) continue;
        const double kab = a_c * area * (grad[a][0] * grad[b][0] + grad[a][1] * grad[b][1]);
        triplets.emplace_back(row, col, kab);
      }
    }
  }
  Eigen::SparseMatrix<double> stiffness(dofs, dofs);
  stiffness.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> chol(stiffness);
  if (chol.info() != Eigen::Success) {
    throw NumericalError("solve_pde: stiffness matrix is not positive definite");
  }
  const Eigen::VectorXd interior = chol.solve(rhs);
  std::vector<double> u(mesh.num_nodes(), 0.0);
  for (std::size_t nd = 0; nd < u.size(); ++nd) {
    if (const auto d = mesh.dof(nd); d >= 0) u[nd] = interior[d];
  }
  return u;
}

std::vector<double> solve_pde(std::span<const double> y, const Mesh& mesh, const ScalarField& source) {
  const std::vector<double> param(y.begin(), y.end());
  // Validates y once; the per-element calls below cannot fail afterwards.
  diffusion_coeff(0.5, 0.5, param);
  return solve_pde(
      mesh, [&param](double x1, double x2) { return diffusion_coeff(x1, x2, param); }, source);
}

double qoi(std::span<const double> u, const Mesh& mesh) {
  if (u.size() != mesh.num_nodes()) {
    throw InvalidArgument("qoi: " + std::to_string(u.size()) + " nodal values for a mesh with " +
                          std::to_string(mesh.num_nodes()) + " nodes");
  }
  // Every triangle has area h^2 / 2.
  const double area = 0.5 * mesh.h() * mesh.h();
  CompensatedSum<double> acc;
  for (const auto& tri : mesh.triangles()) acc.add(u[tri[0]] + u[tri[1]] + u[tri[2]]);
  return acc.value() * area / 3.0;
}

const char* to_string(UqMethod m) noexcept { return m == UqMethod::Equal ? "equal" : "kernel"; }

UqMethod parse_uq_method(const std::string& name) {
  if (name == "equal" || name == "qmc") return UqMethod::Equal;
  if (name == "kernel") return UqMethod::Kernel;
  throw InvalidArgument("unknown pde-uq method '" + name + "' (expected equal or kernel)");
}

double default_source(double x1, double /*x2*/) { return x1; }

namespace {

/// G(u(., y(t_k))) for every row of the point set.
std::vector<double> qoi_at_nodes(const PointSet& ps, const Mesh& mesh, unsigned jobs) {
  std::vector<double> g(ps.n());
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t k = begin; k < ps.n(); k += step) {
      const auto y = to_parameter(ps.row(k));
      g[k] = qoi(solve_pde(y, mesh, default_source), mesh);
    }
  };
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(work, t, jobs);
    for (auto& t : threads) t.join();
  }
  return g;
}

PointSet subsample(const PointSet& ps, std::size_t stride) {
  const std::size_t n = ps.n() / stride;
  std::vector<double> nodes;
  nodes.reserve(n * ps.s());
  for (std::size_t k = 0; k < n; ++k) {
    const auto row = ps.row(k * stride);
    nodes.insert(nodes.end(), row.begin(), row.end());
  }
  return PointSet(n, ps.s(), std::move(nodes), ps.provenance());
}

std::vector<double> subsample(const std::vector<double>& v, std::size_t stride) {
  std::vector<double> out(v.size() / stride);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = v[k * stride];
  return out;
}

struct Estimate {
  double value;
  double wce_squared;
};

Estimate estimate(UqMethod method, const KernelSpec& spec, const PointSet& ps,
                  std::span<const double> g, unsigned jobs) {
  if (method == UqMethod::Equal) {
    const auto rule = CubatureRule<double>::equal(ps);
    const double e = wce_equal<double>(spec, ps);
    return {apply_rule(rule, g), e * e};
  }
  const auto gram = assemble_gram<double>(spec, ps, AssemblyOptions{jobs});
  const auto rule = solve_optimal_weights(gram);
  const double e = wce_optimal(rule);
  return {apply_rule(rule, g), e * e};
}

}  // namespace

UqResult run_uq_experiment(const UqConfig& cfg, const GeneratingVector& gv) {
  if (cfg.schedule.empty()) throw InvalidArgument("pde-uq: empty n schedule");
  if (cfg.methods.empty()) throw InvalidArgument("pde-uq: no methods selected");
  if (gv.s() < cfg.s) throw InvalidArgument("pde-uq: generating vector has too few components");
  const std::uint64_t n_max = *std::max_element(cfg.schedule.begin(), cfg.schedule.end());
  for (auto n : cfg.schedule) {
    if (!std::has_single_bit(n)) throw InvalidArgument("pde-uq: schedule entries must be powers of two");
  }
  if (!std::has_single_bit(cfg.n_ref)) throw InvalidArgument("pde-uq: n_ref must be a power of two");

  const Mesh mesh(cfg.mesh_level);
  const KernelSpec spec(1, pod_weights_uq(cfg.s, cfg.delta));
  const GeneratingVector base = gv.truncated(cfg.s);

  std::vector<Shift> shifts;
  if (cfg.explicit_shifts) {
    shifts = *cfg.explicit_shifts;
  } else {
    if (cfg.shifts == 0) throw InvalidArgument("pde-uq: need at least one random shift");
    for (std::size_t r = 0; r < cfg.shifts; ++r) shifts.push_back(sample_shift(cfg.seed + r, cfg.s));
  }

  UqResult result;
  const PointSet ref_points = generate_lattice(base.reduced(cfg.n_ref));
  const auto ref_g = qoi_at_nodes(ref_points, mesh, cfg.jobs);
  for (auto method : cfg.methods) {
    result.reference.push_back(estimate(method, spec, ref_points, ref_g, cfg.jobs).value);
  }

  // sums[n index][method index]
  std::vector<std::vector<double>> err_sq(cfg.schedule.size(), std::vector<double>(cfg.methods.size()));
  std::vector<std::vector<double>> wce_sq = err_sq;
  const PointSet lattice_max = generate_lattice(base.reduced(n_max));
  for (const auto& shift : shifts) {
    // Extensible lattice: the n-point set is every (n_max / n)-th row.
    const PointSet shifted = apply_shift(lattice_max, shift);
    const auto g_all = qoi_at_nodes(shifted, mesh, cfg.jobs);
    for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
      const std::size_t stride = n_max / cfg.schedule[i];
      const PointSet ps = subsample(shifted, stride);
      const auto g = subsample(g_all, stride);
      for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
        const auto est = estimate(cfg.methods[m], spec, ps, g, cfg.jobs);
        const double diff = est.value - result.reference[m];
        err_sq[i][m] += diff * diff;
        wce_sq[i][m] += est.wce_squared;
      }
    }
  }
  const double r = static_cast<double>(shifts.size());
  for (std::size_t m = 0; m < cfg.methods.size(); ++m) {
    for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
      result.rows.push_back(
          {cfg.methods[m], cfg.schedule[i], std::sqrt(err_sq[i][m] / r), std::sqrt(wce_sq[i][m] / r)});
    }
  }
  return result;
}

}  // namespace latkc::pde
