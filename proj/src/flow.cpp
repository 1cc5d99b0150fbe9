#include "liftham/flow.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

#include "liftham/errors.hpp"

namespace liftham {

double energy_drift(const std::vector<std::complex<double>>& energies) {
  if (energies.empty()) return 0.0;
  const std::complex<double> h0 = energies.front();
  double worst = 0.0;
  for (const std::complex<double>& e : energies) worst = std::max(worst, std::abs(e - h0));
  return worst / std::max(std::abs(h0), 1e-12);
}

namespace {

using Vec = std::vector<std::complex<double>>;

bool is_finite(const std::complex<double>& v) {
  return std::isfinite(v.real()) && std::isfinite(v.imag());
}

Vec axpy(const Vec& y, double h, const Vec& k) {
  Vec out(y.size());
  for (size_t i = 0; i < y.size(); ++i) out[i] = y[i] + h * k[i];
  return out;
}

}  // namespace

Trajectory integrate(const HamiltonianSystem& sys,
                     const std::map<Coord, std::complex<double>>& initial,
                     const IntegratorConfig& cfg) {
  SolvedField solved = solve_hamiltonian_field(sys);
  const CoordSystem& ch = sys.chart;
  const std::vector<Coord> fiber = ch.fiber_coordinates();

  std::vector<Expr> rhs;
  rhs.reserve(fiber.size());
  for (const Coord& c : fiber) rhs.push_back(solved.field.component(c));

  for (const auto& [c, v] : initial) {
    (void)v;
    if (c.is_time() || !ch.contains(c))
      throw ChartMismatch("initial state sets '" + c.name() +
                          "'; expected fiber coordinates of the chart");
  }
  Vec y;
  y.reserve(fiber.size());
  for (const Coord& c : fiber) {
    auto it = initial.find(c);
    if (it != initial.end()) {
      y.push_back(it->second);
    } else {
      auto partner = initial.find(c.conjugate());
      y.push_back(partner != initial.end() ? std::conj(partner->second)
                                           : std::complex<double>(0.0, 0.0));
    }
  }

  if (!(cfg.dt > 0.0)) throw EngineError("invalid_arguments", "dt must be positive");
  const long long steps = std::llround((cfg.t_end - cfg.t_start) / cfg.dt);
  if (steps < 0) throw EngineError("invalid_arguments", "t_end precedes t_start");

  auto at_point = [&](double t, const Vec& v) {
    std::map<Coord, std::complex<double>> pt;
    pt.emplace(Coord::time(), std::complex<double>(t, 0.0));
    for (size_t i = 0; i < fiber.size(); ++i) pt.emplace(fiber[i], v[i]);
    return pt;
  };
  auto eval_rhs = [&](double t, const Vec& v) {
    auto pt = at_point(t, v);
    Vec out(fiber.size());
    for (size_t i = 0; i < fiber.size(); ++i) out[i] = eval_numeric(rhs[i], pt);
    return out;
  };

  Trajectory traj;
  traj.layout.push_back(Coord::time());
  traj.layout.insert(traj.layout.end(), fiber.begin(), fiber.end());
  traj.states.reserve(static_cast<size_t>(steps) + 1);
  traj.energies.reserve(static_cast<size_t>(steps) + 1);

  for (long long j = 0; j <= steps; ++j) {
    const double t = cfg.t_start + static_cast<double>(j) * cfg.dt;
    for (const std::complex<double>& v : y)
      if (!is_finite(v)) throw NonFiniteState(static_cast<std::size_t>(j));
    auto pt = at_point(t, y);
    traj.states.push_back(pt);
    traj.energies.push_back(eval_numeric(solved.lifted_hamiltonian, pt));
    if (j == steps) break;

    if (cfg.method == Method::Euler) {
      y = axpy(y, cfg.dt, eval_rhs(t, y));
    } else {
      Vec k1 = eval_rhs(t, y);
      Vec k2 = eval_rhs(t + cfg.dt / 2.0, axpy(y, cfg.dt / 2.0, k1));
      Vec k3 = eval_rhs(t + cfg.dt / 2.0, axpy(y, cfg.dt / 2.0, k2));
      Vec k4 = eval_rhs(t + cfg.dt, axpy(y, cfg.dt, k3));
      for (size_t i = 0; i < y.size(); ++i)
        y[i] += (cfg.dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
  }
  traj.energy_drift = energy_drift(traj.energies);
  return traj;
}

}  // namespace liftham
