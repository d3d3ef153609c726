#pragma once

#include <array>
#include <vector>

#include "threadsplit/metric.hpp"
#include "threadsplit/residual.hpp"
#include "threadsplit/structure.hpp"

namespace threadsplit {

// Direct 4D computation in the coordinate basis. Shares nothing with the
// split modules except the evaluated metric jets in FrameData.

using Vec4 = std::array<Jet, 4>;
using Mat4 = std::array<Vec4, 4>;

struct Metric4 {
  Mat4 g;      // g_00 = -Phi^2, g_0i = xi_i, g_ij
  Mat4 g_inv;
};

Metric4 assemble_metric4(const FrameData& frame);

struct Riemann4 {
  std::array<Mat4, 4> gamma;  // gamma[a][b][c] = Gamma^a_{bc}
  std::vector<Jet> riemann;   // R^a_{bcd}, flat index ((a*4+b)*4+c)*4+d
  std::vector<Jet> lower;     // R_{abcd} = g_ae R^e_{bcd}
  Mat4 ricci;                 // R_bd = R^c_{bcd}
  Jet scalar;
  Mat4 einstein;

  const Jet& R(int a, int b, int c, int d) const { return riemann[((a * 4 + b) * 4 + c) * 4 + d]; }
  const Jet& Rlow(int a, int b, int c, int d) const { return lower[((a * 4 + b) * 4 + c) * 4 + d]; }
};

Riemann4 riemann4(const Metric4& m);

struct OracleProjection {
  FullCurvature full;
  RicciSet ricci;
  Mat3 G_ij;
  Vec3 G_i0;
  Jet G_00;
};

// Components on {d_0, delta_i = d_i - A_i d_0}, laid out like the split side.
OracleProjection project_frame(const Riemann4& r, const FrameData& frame);

// Coordinate covariant divergence nabla^a T_ab of a symmetric T_ab.
Vec4 divergence4(const Mat4& T, const Metric4& m, const Riemann4& r);

// Coordinate T_ab from its threading-frame components T_00, T_i0, T_ij.
Mat4 coordinate_tensor(const Jet& t00, const Vec3& ti0, const Mat3& tij, const FrameData& frame);

// (div T)(d_0) and (div T)(delta_i) from the coordinate divergence.
std::array<double, 4> frame_divergence(const Vec4& div, const FrameData& frame);

// Inverse check, first Bianchi, pair symmetries, contracted Bianchi.
ResidualBlock oracle_self_checks(const Metric4& m, const Riemann4& r);

}  // namespace threadsplit
