#pragma once

#include "threadsplit/metric.hpp"
#include "threadsplit/residual.hpp"
#include "threadsplit/structure.hpp"

namespace threadsplit {

struct EinsteinSet {
  Mat3 G_ij;
  Vec3 G_i0;
  Jet G_00;
  Mat3 Gbar_ij;
};

// Closed split forms: G_ij from the spatial data, G_i0 = R_i0, G_00 from
// Phi^2 R-bar, Theta, sigma and omega.
EinsteinSet einstein_split(const SplitPoint& sp);
// G_ij = R_ij - (R/2) gbar_ij, G_i0 = R_i0, G_00 = R_00 + Phi^2 R/2.
EinsteinSet einstein_from_ricci(const RicciSet& ricci, const Mat3& ricci_sym, const FrameData& frame);
ResidualBlock einstein_residuals(const EinsteinSet& split, const EinsteinSet& from_ricci);

// Threading-frame stress-energy components.
struct StressEnergy {
  Jet T00;
  Vec3 Ti0;
  Mat3 Tij;
};

struct FluidSplit {
  Jet rho;
  Jet p;
  Vec3 q;
  Mat3 pi;
};

// mode = from_efe: T = (G + Lambda g) / (8 pi G_N); otherwise the explicit
// fluid from the spec (validated: pi must be gbar-trace-free).
StressEnergy stress_energy(const MetricSpec& spec, const SplitPoint& sp, const EinsteinSet& G);
FluidSplit fluid_split(const StressEnergy& T, const FrameData& frame);
StressEnergy stress_from_fluid(const FluidSplit& f, const FrameData& frame);

struct EfeInput {
  const SplitPoint& sp;
  const EinsteinSet& G;
  const StressEnergy& T;
  const FluidSplit& fluid;
  double lambda;
  double newton_g;
};

// Per-equation residual components, kept so other modules can compare.
struct EfeResiduals {
  Mat3 sefe;         // spatial block, lhs - rhs
  Vec3 mefe_a;       // mixed block
  Vec3 mefe_b;       // mixed block, divergence form
  Jet tefe;          // temporal block
  Jet trace;         // trace of the spatial block
  Jet raychaudhuri;
};

EfeResiduals efe_components(const EfeInput& in);
// Geometric side of the divergence form of the mixed equations.
Vec3 mefe_divergence_lhs(const SplitPoint& sp);

ResidualBlock efe_residuals(const EfeInput& in);

struct ConservationValues {
  Jet energy;           // (div T)(d_0)
  Vec3 momentum;        // (div T)(delta_i)
  Jet energy_fluid;     // energy law in fluid variables
  Vec3 momentum_fluid;  // momentum law in fluid variables
};

ConservationValues conservation_values(const SplitPoint& sp, const StressEnergy& T, const FluidSplit& fluid);
ResidualBlock conservation_residuals(const SplitPoint& sp, const StressEnergy& T, const FluidSplit& fluid);

}  // namespace threadsplit
