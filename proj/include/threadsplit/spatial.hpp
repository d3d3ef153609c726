#pragma once

#include <array>
#include <initializer_list>
#include <string>
#include <vector>

#include "threadsplit/metric.hpp"
#include "threadsplit/residual.hpp"

namespace threadsplit {

// Components of a spatial tensor in the threading frame. The valence string
// has one letter per slot: 'u' for an upper index, 'd' for a lower one.
class SpatialTensor {
 public:
  SpatialTensor() = default;
  explicit SpatialTensor(std::string valence);

  static SpatialTensor scalar(const Jet& f);
  static SpatialTensor covector(const Vec3& v);
  static SpatialTensor vector(const Vec3& v);
  // m[i][j] with the given two-letter valence.
  static SpatialTensor matrix(const Mat3& m, std::string valence);

  const std::string& valence() const { return valence_; }
  int rank() const { return static_cast<int>(valence_.size()); }
  int size() const { return static_cast<int>(data_.size()); }

  Jet& operator()(std::initializer_list<int> idx) { return data_[offset(idx.begin())]; }
  const Jet& operator()(std::initializer_list<int> idx) const { return data_[offset(idx.begin())]; }
  Jet& at(const int* idx) { return data_[offset(idx)]; }
  const Jet& at(const int* idx) const { return data_[offset(idx)]; }
  Jet& flat(int n) { return data_[n]; }
  const Jet& flat(int n) const { return data_[n]; }

  // Multi-index of flat slot n (rank entries written to idx).
  void unflatten(int n, int* idx) const;

 private:
  int offset(const int* idx) const;
  std::string valence_;
  std::vector<Jet> data_ = std::vector<Jet>(1);
};

struct ConnectionSet {
  std::array<Mat3, 3> gamma;    // gamma[k][i][j] = Gamma-bar^k_{ij}
  std::array<Mat3, 3> dgamma0;  // d/dx^0 of the above
};

ConnectionSet spatial_connection(const FrameData& frame);

enum class CovariantKind { Spatial, Temporal };

// Spatial: appends one lower index k (T_{...|k}); temporal: same valence
// (T_{...|0}), with K^j_h in place of the connection.
SpatialTensor covariant_derivative(const SpatialTensor& t, const ConnectionSet& conn, const KinematicSet& kin,
                                   const FrameData& frame, CovariantKind kind);

struct SpatialCurvature {
  SpatialTensor rbar;       // R-bar^h_{ijk}, "uddd" (h, i, j, k)
  SpatialTensor rbar0;      // R-bar^h_{i0k}, "udd" (h, i, k)
  SpatialTensor rbar_low;   // R-bar_{iljk} = gbar_lh R-bar^h_{ijk}, (i, l, j, k)
  SpatialTensor rbar0_low;  // R-bar_{il0k} = gbar_lh R-bar^h_{i0k}, (i, l, k)
  Mat3 ricci;               // R-bar_ij, symmetrized
  Jet scalar;               // R-bar
  Mat3 einstein;            // G-bar_ij
};

SpatialCurvature spatial_curvature(const ConnectionSet& conn, const KinematicSet& kin, const FrameData& frame);

// Metricity, trace-free shear, alternative kinematic forms.
ResidualBlock kinematic_residuals(const FrameData& frame, const KinematicSet& kin, const ConnectionSet& conn);

// Vorticity identities, antisymmetry of R-bar_{il0k}, the expansion constraint and
// the three Bianchi identities of the spatial connection. Needs order 3.
ResidualBlock bianchi_residuals(const SpatialCurvature& curv, const ConnectionSet& conn, const KinematicSet& kin,
                                const FrameData& frame);

double max_abs_value(const Mat3& m);

}  // namespace threadsplit
