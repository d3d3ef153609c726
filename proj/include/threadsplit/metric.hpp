#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "threadsplit/expr.hpp"
#include "threadsplit/jet.hpp"
#include "threadsplit/jet_linalg.hpp"

namespace threadsplit {

// Spatial index i in code is 0..2 and stands for the coordinate x^(i+1).
using Vec3 = std::array<Jet, 3>;
using Mat3 = std::array<Vec3, 3>;
using Point = std::array<double, kDim>;

enum class MatterMode { FromEfe, Explicit };

struct ExplicitMatter {
  Expr rho;
  Expr p;
  std::array<Expr, 3> q;
  std::array<std::array<Expr, 3>, 3> pi;  // symmetric, filled both ways
};

// Optional [cosmology] section: the almost-FLRW ingredients a(x0), A, B the
// metric was built from. When present, `verify` also runs the cosmo checks.
struct CosmologyHint {
  Expr a;
  Expr A;
  Expr B;
  bool perfect_fluid = false;
};

struct MetricSpec {
  Expr phi;
  std::array<Expr, 3> xi;
  std::array<std::array<Expr, 3>, 3> g;  // symmetric, filled both ways
  ParamTable params;
  MatterMode mode = MatterMode::FromEfe;
  ExplicitMatter matter;
  double lambda = 0.0;
  double newton_g = 1.0;
  std::optional<CosmologyHint> cosmology;
};

// Parses the spec-file format described in docs/conventions.md.
// Errors: Syntax, UnboundIdentifier, MissingKey, DuplicateKey, Input.
MetricSpec load_spec(std::string_view text);
MetricSpec load_spec_file(const std::string& path);

struct FrameData {
  Point point{};
  int order = kMaxOrder;
  Jet phi;
  Vec3 xi;
  Mat3 g;
  Vec3 A;         // A_i = -xi_i / phi^2
  Mat3 gbar;      // g_ij + phi^2 A_i A_j
  Mat3 gbar_inv;  // jet-valued inverse
};

FrameData eval_frame(const MetricSpec& spec, const Point& point, int order = kMaxOrder);

// delta_i f = d_i f - A_i d_0 f at the jet level; i is 0..2.
Jet delta(const FrameData& frame, const Jet& f, int i);
// (delta_1 f, delta_2 f, delta_3 f, d_0 f) at the point.
std::array<double, 4> delta_derivative(const FrameData& frame, const Jet& f);

struct KinematicSet {
  Mat3 omega;      // omega_ij, antisymmetric
  Vec3 c;
  Vec3 a;
  Jet psi;
  Mat3 theta;      // Theta_ij
  Jet theta_trace; // Theta
  Mat3 sigma;
  Mat3 K;          // K_ij = Theta_ij + phi^2 omega_ij
  Mat3 K_mixed;    // K^h_j = gbar^{hl} K_lj, stored [h][j]
  Mat3 theta_mixed;  // Theta^h_j
  Mat3 omega_mixed;  // omega^h_j = gbar^{hl} omega_lj
  Vec3 b;
  Vec3 b_up;
  Jet sigma2;
  Jet omega2;
  Jet b2;
};

KinematicSet compute_kinematics(const FrameData& frame);

// Index gymnastics with gbar.
Vec3 raise(const FrameData& frame, const Vec3& v);
Mat3 raise_first(const FrameData& frame, const Mat3& m);
Jet contract(const FrameData& frame, const Mat3& m);  // gbar^{ij} m_ij
Jet full_contract(const FrameData& frame, const Mat3& x, const Mat3& y);  // x_hk y^hk

}  // namespace threadsplit
