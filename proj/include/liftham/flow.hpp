#pragma once

#include <complex>
#include <map>
#include <vector>

#include "liftham/hamilton.hpp"

namespace liftham {

enum class Method { RK4, Euler };

struct IntegratorConfig {
  Method method = Method::RK4;
  double dt = 1e-2;
  double t_start = 0.0;
  double t_end = 1.0;
};

struct Trajectory {
  std::vector<Coord> layout;  // t followed by the fiber coordinates
  std::vector<std::map<Coord, std::complex<double>>> states;  // t included in each
  std::vector<std::complex<double>> energies;  // lifted H along the flow
  double energy_drift = 0.0;
};

// max_j |H_j - H_0| / max(|H_0|, 1e-12)
double energy_drift(const std::vector<std::complex<double>>& energies);

// Fixed-step flow of the solved Hamiltonian field. The step count is
// llround((t_end - t_start)/dt) and time advances exactly as
// t_j = t_start + j*dt. Initial fiber values default to the conjugate of
// their partner when only one of z/zb is given, else to 0; z and zb evolve
// independently. Throws NonFiniteState when a state stops being finite.
Trajectory integrate(const HamiltonianSystem& sys,
                     const std::map<Coord, std::complex<double>>& initial,
                     const IntegratorConfig& cfg);

}  // namespace liftham
