#pragma once

#include <map>
#include <string>

#include "threadsplit/efe.hpp"
#include "threadsplit/metric.hpp"
#include "threadsplit/residual.hpp"
#include "threadsplit/structure.hpp"

namespace threadsplit {

// Conformal-Newtonian almost-FLRW metric
//   ds^2 = a^2 { -(1 + 2A) dx0^2 + (1 - 2B) delta_ij dx^i dx^j }.
struct AlmostFlrw {
  std::string a = "1";
  std::string A = "0";
  std::string B = "0";
  bool perfect_fluid = false;  // forces B = A
  double lambda = 0.0;
  double newton_g = 1.0;
  // Explicit perfect fluid; empty means mode = from_efe.
  std::string rho;
  std::string p;
};

// Spec text consumable by load_spec, with a [cosmology] section.
std::string build_metric_text(const AlmostFlrw& c);
MetricSpec build_metric(const AlmostFlrw& c);

// Closed forms evaluated by substitution from the jets of a, A and B, keyed
// by name (e.g. "9.6b", "C7"). Each value is the largest component at the point.
struct ClosedFormSet {
  double hubble = 0.0;       // a'/a
  double hubble_prime = 0.0;
  std::map<std::string, double> max_error;  // against the general engine
  std::map<std::string, std::pair<double, double>> worst;  // closed form, engine
};

ClosedFormSet closed_forms(const CosmologyHint& hint, const MetricSpec& spec, const SplitPoint& sp);

// Closed-form comparisons, shear-free/umbilic properties, the perturbed field
// equations and, when A = B = 0 at the point, the Friedmann equations.
ResidualBlock cosmology_residuals(const MetricSpec& spec, const SplitPoint& sp, const EinsteinSet& G,
                                  const FluidSplit& fluid, const EfeResiduals& efe);

// H^2 - (8 pi G/3) a^2 rho and H' + (4 pi G/3) a^2 (rho + 3p), H = a'/a.
std::pair<double, double> friedmann_residuals(double a, double hubble, double hubble_prime, double rho, double p,
                                              double newton_g);

}  // namespace threadsplit
