#pragma once

#include "threadsplit/metric.hpp"
#include "threadsplit/residual.hpp"
#include "threadsplit/spatial.hpp"

namespace threadsplit {

// Covariant derivatives of the kinematic tensors that the structure
// equations, Ricci split and field equations keep reusing.
struct KinematicDerivatives {
  SpatialTensor dK;      // K_{ij|k}, (i, j, k)
  SpatialTensor K0;      // K_{ij|0}
  SpatialTensor dTheta;  // Theta_{ij|k}
  SpatialTensor Theta0;  // Theta_{ij|0}
  SpatialTensor dOmega;  // omega_{ij|k}
  SpatialTensor omega0;  // omega_{ij|0}
  SpatialTensor db;      // b_{i|k}, (i, k)
  Vec3 dtheta_trace;     // Theta_{|i}
  Jet theta_trace0;      // Theta_{|0}
  Jet b_div;             // b^k_{|k}
};

KinematicDerivatives kinematic_derivatives(const FrameData& frame, const KinematicSet& kin, const ConnectionSet& conn);

// Everything the split side knows at one point.
struct SplitPoint {
  FrameData frame;
  KinematicSet kin;
  ConnectionSet conn;
  SpatialCurvature curv;
  KinematicDerivatives der;
};

SplitPoint make_split_point(const MetricSpec& spec, const Point& point, int order = kMaxOrder);

// Spatial covariant derivative along the split connection.
SpatialTensor spatial_d(const SplitPoint& sp, const SpatialTensor& t);
// Temporal covariant derivative.
SpatialTensor temporal_d(const SplitPoint& sp, const SpatialTensor& t);

enum class CurvatureSource { SplitK, SplitTheta, Oracle };

// Type (0,4) components of the 4D curvature in the threading frame.
struct FullCurvature {
  CurvatureSource source = CurvatureSource::SplitK;
  SpatialTensor iljk{"dddd"};  // R_{iljk}
  SpatialTensor i0jk{"ddd"};   // R_{i0jk}, (i, j, k)
  SpatialTensor il0k{"ddd"};   // R_{il0k}, (i, l, k)
  SpatialTensor i00k{"dd"};    // R_{i00k}, (i, k)
};

// Mixed components R^h_{ijk}, R^0_{ijk}, R^h_{i0k}, R^0_{i0k}.
struct MixedCurvature {
  SpatialTensor h_ijk{"uddd"};
  SpatialTensor zero_ijk{"ddd"};
  SpatialTensor h_i0k{"udd"};
  SpatialTensor zero_i0k{"dd"};
};

FullCurvature curvature_from_split(const SplitPoint& sp, CurvatureSource form);
MixedCurvature raise_curvature(const FullCurvature& fc, const FrameData& frame);

// K-form vs Theta-form, mixed forms, symmetries of R.
ResidualBlock structure_residuals(const SplitPoint& sp, const FullCurvature& k_form, const FullCurvature& theta_form);
// Identities for R-bar and the kinematic tensors that follow from the
// symmetries of R; vorticity-free forms when omega vanishes at the point.
ResidualBlock curvature_identity_residuals(const SplitPoint& sp, const FullCurvature& k_form);

enum class RicciForm { Via56, Via57 };

struct RicciSet {
  CurvatureSource source = CurvatureSource::SplitK;
  Mat3 ricci;  // R_ij = Ric(delta_j, delta_i), unsymmetrized for split forms
  Vec3 r_i0;   // R_i0 = Ric(d_0, delta_i)
  Jet r_00;
  Jet scalar;
};

RicciSet ricci_split(const SplitPoint& sp, RicciForm form);
// Symmetric assembly of R_ij.
Mat3 ricci_symmetric(const SplitPoint& sp);
// R_i0 as a divergence of K.
Vec3 ricci_i0_divergence(const SplitPoint& sp);

ResidualBlock ricci_residuals(const SplitPoint& sp, const RicciSet& via56, const RicciSet& via57);

double max_abs_value(const SpatialTensor& t);

}  // namespace threadsplit
