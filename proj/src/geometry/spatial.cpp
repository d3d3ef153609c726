#include <cmath>

#include "threadsplit/error.hpp"
#include "threadsplit/spatial.hpp"

namespace threadsplit {

namespace {

int power3(int r) {
  int n = 1;
  for (int i = 0; i < r; ++i) n *= 3;
  return n;
}

// Cyclic rotations of (i, j, k).
template <class F>
Jet cyclic(int i, int j, int k, F&& f) {
  return f(i, j, k) + f(j, k, i) + f(k, i, j);
}

}  // namespace

SpatialTensor::SpatialTensor(std::string valence)
    : valence_(std::move(valence)), data_(static_cast<std::size_t>(power3(static_cast<int>(valence_.size())))) {
  for (char c : valence_) {
    if (c != 'u' && c != 'd') throw Error(ErrorKind::Input, "valence letters must be 'u' or 'd'");
  }
}

SpatialTensor SpatialTensor::scalar(const Jet& f) {
  SpatialTensor t("");
  t.data_[0] = f;
  return t;
}

SpatialTensor SpatialTensor::covector(const Vec3& v) {
  SpatialTensor t("d");
  for (int i = 0; i < 3; ++i) t.data_[i] = v[i];
  return t;
}

SpatialTensor SpatialTensor::vector(const Vec3& v) {
  SpatialTensor t("u");
  for (int i = 0; i < 3; ++i) t.data_[i] = v[i];
  return t;
}

SpatialTensor SpatialTensor::matrix(const Mat3& m, std::string valence) {
  SpatialTensor t(std::move(valence));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) t.data_[3 * i + j] = m[i][j];
  }
  return t;
}

int SpatialTensor::offset(const int* idx) const {
  int n = 0;
  for (int s = 0; s < rank(); ++s) n = 3 * n + idx[s];
  return n;
}

void SpatialTensor::unflatten(int n, int* idx) const {
  for (int s = rank() - 1; s >= 0; --s) {
    idx[s] = n % 3;
    n /= 3;
  }
}

ConnectionSet spatial_connection(const FrameData& frame) {
  if (frame.order < 2) throw Error(ErrorKind::OrderExhausted, "the spatial connection needs jet order >= 2");
  // dg[h][i][j] = delta_h gbar_ij
  std::array<Mat3, 3> dg;
  for (int h = 0; h < 3; ++h) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        dg[h][i][j] = delta(frame, frame.gbar[i][j], h);
        dg[h][j][i] = dg[h][i][j];
      }
    }
  }
  ConnectionSet conn;
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        Jet s;
        for (int h = 0; h < 3; ++h) s += frame.gbar_inv[k][h] * (dg[i][h][j] + dg[j][h][i] - dg[h][i][j]);
        conn.gamma[k][i][j] = 0.5 * s;
        conn.gamma[k][j][i] = conn.gamma[k][i][j];
        conn.dgamma0[k][i][j] = conn.gamma[k][i][j].derivative(0);
        conn.dgamma0[k][j][i] = conn.dgamma0[k][i][j];
      }
    }
  }
  return conn;
}

SpatialTensor covariant_derivative(const SpatialTensor& t, const ConnectionSet& conn, const KinematicSet& kin,
                                   const FrameData& frame, CovariantKind kind) {
  const int r = t.rank();
  const bool spatial = kind == CovariantKind::Spatial;
  SpatialTensor out(spatial ? t.valence() + "d" : t.valence());
  int idx[8];
  for (int n = 0; n < out.size(); ++n) {
    out.unflatten(n, idx);
    const int k = spatial ? idx[r] : -1;
    const Jet& base = t.at(idx);
    Jet v = spatial ? delta(frame, base, k) : base.derivative(0);
    for (int s = 0; s < r; ++s) {
      const int orig = idx[s];
      const bool upper = t.valence()[s] == 'u';
      for (int h = 0; h < 3; ++h) {
        idx[s] = h;
        const Jet& th = t.at(idx);
        if (spatial) {
          if (upper) {
            v += th * conn.gamma[orig][h][k];
          } else {
            v -= th * conn.gamma[h][orig][k];
          }
        } else {
          if (upper) {
            v += th * kin.K_mixed[orig][h];
          } else {
            v -= th * kin.K_mixed[h][orig];
          }
        }
      }
      idx[s] = orig;
    }
    out.flat(n) = v;
  }
  return out;
}

SpatialCurvature spatial_curvature(const ConnectionSet& conn, const KinematicSet& kin, const FrameData& frame) {
  SpatialCurvature c;
  c.rbar = SpatialTensor("uddd");
  for (int h = 0; h < 3; ++h) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          Jet v = delta(frame, conn.gamma[h][i][j], k) - delta(frame, conn.gamma[h][i][k], j);
          for (int l = 0; l < 3; ++l) {
            v += conn.gamma[l][i][j] * conn.gamma[h][l][k] - conn.gamma[l][i][k] * conn.gamma[h][l][j];
          }
          v -= 2.0 * kin.K_mixed[h][i] * kin.omega[j][k];
          c.rbar({h, i, j, k}) = v;
        }
      }
    }
  }
  const SpatialTensor dK = covariant_derivative(SpatialTensor::matrix(kin.K_mixed, "ud"), conn, kin, frame,
                                                CovariantKind::Spatial);
  c.rbar0 = SpatialTensor("udd");
  for (int h = 0; h < 3; ++h) {
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) {
        c.rbar0({h, i, k}) = dK({h, i, k}) - conn.dgamma0[h][i][k] + kin.K_mixed[h][i] * kin.a[k];
      }
    }
  }
  c.rbar_low = SpatialTensor("dddd");
  c.rbar0_low = SpatialTensor("ddd");
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      for (int k = 0; k < 3; ++k) {
        Jet s0;
        for (int h = 0; h < 3; ++h) s0 += frame.gbar[l][h] * c.rbar0({h, i, k});
        c.rbar0_low({i, l, k}) = s0;
        for (int j = 0; j < 3; ++j) {
          Jet s;
          for (int h = 0; h < 3; ++h) s += frame.gbar[l][h] * c.rbar({h, i, j, k});
          c.rbar_low({i, l, j, k}) = s;
        }
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Jet s;
      for (int k = 0; k < 3; ++k) s += c.rbar({k, i, j, k}) + c.rbar({k, j, i, k});
      c.ricci[i][j] = 0.5 * s;
    }
  }
  c.scalar = contract(frame, c.ricci);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) c.einstein[i][j] = c.ricci[i][j] - 0.5 * c.scalar * frame.gbar[i][j];
  }
  return c;
}

double max_abs_value(const Mat3& m) {
  double v = 0.0;
  for (const auto& row : m) {
    for (const auto& x : row) v = std::fmax(v, std::fabs(x.value()));
  }
  return v;
}

ResidualBlock kinematic_residuals(const FrameData& frame, const KinematicSet& kin, const ConnectionSet& conn) {
  ResidualBlock out;
  const Jet phi2 = frame.phi * frame.phi;
  const Jet inv_phi2 = reciprocal(phi2);

  const SpatialTensor g = SpatialTensor::matrix(frame.gbar, "dd");
  const SpatialTensor gk = covariant_derivative(g, conn, kin, frame, CovariantKind::Spatial);
  const SpatialTensor g0 = covariant_derivative(g, conn, kin, frame, CovariantKind::Temporal);
  MaxAbs spatial_metricity, temporal_metricity;
  for (int n = 0; n < gk.size(); ++n) spatial_metricity.add(gk.flat(n).value());
  for (int n = 0; n < g0.size(); ++n) temporal_metricity.add(g0.flat(n).value());
  out.record("metricity.spatial", spatial_metricity.value());
  out.record("metricity.temporal", temporal_metricity.value());

  out.record("kinematics.trace-free", contract(frame, kin.sigma).value());

  MaxAbs omega_alt, a_alt, b_sum, k_def, gamma_sym;
  double k_skew = 0.0;
  for (int i = 0; i < 3; ++i) {
    const Jet a_form = inv_phi2 * (frame.xi[i].derivative(0) - 2.0 * kin.psi * frame.xi[i]);
    a_alt.add(kin.a[i].value() - a_form.value());
    b_sum.add(kin.b[i].value() - kin.a[i].value() - kin.c[i].value());
    for (int j = 0; j < 3; ++j) {
      const Jet w = inv_phi2 * (kin.c[i] * frame.xi[j] - kin.c[j] * frame.xi[i] +
                                0.5 * (delta(frame, frame.xi[i], j) - delta(frame, frame.xi[j], i)));
      omega_alt.add(kin.omega[i][j].value() - w.value());
      k_def.add(kin.K[i][j].value() - kin.theta[i][j].value() - (phi2 * kin.omega[i][j]).value());
      k_skew = std::fmax(k_skew, std::fabs(kin.K[i][j].value() - kin.K[j][i].value()));
      for (int k = 0; k < 3; ++k) gamma_sym.add(conn.gamma[k][i][j].value() - conn.gamma[k][j][i].value());
    }
  }
  out.record("kinematics.omega-alt", omega_alt.value());
  out.record("kinematics.a-alt", a_alt.value());
  out.record("kinematics.b", b_sum.value());
  out.record("kinematics.2.13", k_def.value());
  out.record("kinematics.K-symmetry", k_skew - 2.0 * phi2.value() * max_abs_value(kin.omega));
  out.record("connection.symmetry", gamma_sym.value());
  return out;
}

ResidualBlock bianchi_residuals(const SpatialCurvature& curv, const ConnectionSet& conn, const KinematicSet& kin,
                                const FrameData& frame) {
  if (frame.order < 3) throw Error(ErrorKind::OrderExhausted, "Bianchi residuals need jet order 3");
  ResidualBlock out;
  const Mat3& w = kin.omega;
  const bool integrable = max_abs_value(w) < 1e-12;

  // Vorticity identities.
  MaxAbs v8a, v8b;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const Jet lhs = w[i][j].derivative(0);
      const Jet rhs = 0.5 * (delta(frame, kin.a[i], j) - delta(frame, kin.a[j], i));
      v8a.add(lhs.value() - rhs.value());
      for (int k = 0; k < 3; ++k) {
        const Jet s = cyclic(i, j, k, [&](int p, int q, int r) {
          return delta(frame, w[p][q], r) - w[p][q] * kin.a[r];
        });
        v8b.add(s.value());
      }
    }
  }
  out.record("vorticity.2.8a", v8a.value());
  out.record("vorticity.2.8b", v8b.value());

  // Antisymmetry of R-bar_{il0k}, its trace R-bar^i_{i0k} = 0, and the expansion constraint.
  MaxAbs v34, trace0, v36;
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      for (int k = 0; k < 3; ++k) v34.add(curv.rbar0_low({i, l, k}).value() + curv.rbar0_low({l, i, k}).value());
    }
  }
  for (int k = 0; k < 3; ++k) {
    Jet tr, dgam;
    for (int i = 0; i < 3; ++i) {
      tr += curv.rbar0({i, i, k});
      dgam += conn.dgamma0[i][i][k];
    }
    trace0.add(tr.value());
    const Jet lhs = delta(frame, kin.theta_trace, k);
    v36.add(lhs.value() - (dgam - kin.theta_trace * kin.a[k]).value());
  }
  out.record("bianchi.3.4", v34.value());
  out.record("bianchi.3.4-trace", trace0.value());
  out.record("constraint.3.6", v36.value());

  // First Bianchi identity.
  MaxAbs v313;
  for (int h = 0; h < 3; ++h) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
          const Jet s = cyclic(i, j, k, [&](int p, int q, int r) {
            return curv.rbar({h, p, q, r}) + 2.0 * kin.K_mixed[h][p] * w[q][r];
          });
          v313.add(s.value());
        }
      }
    }
  }
  out.record("bianchi.3.13", v313.value());

  // Second Bianchi identity: the torsion term carries R-bar^l_{h0i} itself, with factor 2.
  const SpatialTensor dR = covariant_derivative(curv.rbar, conn, kin, frame, CovariantKind::Spatial);
  const SpatialTensor dR0 = covariant_derivative(curv.rbar0, conn, kin, frame, CovariantKind::Spatial);
  const SpatialTensor tR = covariant_derivative(curv.rbar, conn, kin, frame, CovariantKind::Temporal);
  MaxAbs v314, p314, v315, v317, v316;
  for (int l = 0; l < 3; ++l) {
    for (int h = 0; h < 3; ++h) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          for (int k = 0; k < 3; ++k) {
            const Jet s = cyclic(i, j, k, [&](int p, int q, int r) {
              return dR({l, h, p, q, r}) + 2.0 * curv.rbar0({l, h, p}) * w[q][r];
            });
            v314.add(s.value());
            const Jet ref_form = cyclic(i, j, k, [&](int p, int q, int r) {
              return dR({l, h, p, q, r}) + dR0({l, h, p, r}) * w[q][r];
            });
            p314.add(ref_form.value());
            if (integrable) {
              v316.add(cyclic(i, j, k, [&](int p, int q, int r) { return dR({l, h, p, q, r}); }).value());
            }
          }
          // Mixed Bianchi identity with free indices l, h, i, j.
          Jet s = tR({l, h, i, j}) + dR0({l, h, i, j}) - dR0({l, h, j, i}) + kin.a[j] * curv.rbar0({l, h, i}) -
                  kin.a[i] * curv.rbar0({l, h, j});
          Jet s17 = s;
          for (int k = 0; k < 3; ++k) {
            s += curv.rbar({l, h, i, k}) * kin.K_mixed[k][j] - curv.rbar({l, h, j, k}) * kin.K_mixed[k][i];
            s17 += curv.rbar({l, h, i, k}) * kin.theta_mixed[k][j] - curv.rbar({l, h, j, k}) * kin.theta_mixed[k][i];
          }
          v315.add(s.value());
          if (integrable) v317.add(s17.value());
        }
      }
    }
  }
  out.record("bianchi.3.14", v314.value());
  out.record("paper.3.14", p314.value(), ResidualKind::Probe);
  out.record("bianchi.3.15", v315.value());

  if (integrable) {
    // First Bianchi sums with K = Theta, and the vorticity-free curvature forms.
    MaxAbs first, forms;
    const SpatialTensor dTheta = covariant_derivative(SpatialTensor::matrix(kin.theta_mixed, "ud"), conn, kin, frame,
                                                      CovariantKind::Spatial);
    for (int l = 0; l < 3; ++l) {
      for (int i = 0; i < 3; ++i) {
        forms.add(kin.K_mixed[l][i].value() - kin.theta_mixed[l][i].value());
        for (int k = 0; k < 3; ++k) {
          const Jet r0 = dTheta({l, i, k}) - conn.dgamma0[l][i][k] + kin.theta_mixed[l][i] * kin.a[k];
          forms.add(curv.rbar0({l, i, k}).value() - r0.value());
          for (int j = 0; j < 3; ++j) {
            first.add(cyclic(i, j, k, [&](int p, int q, int r) { return curv.rbar({l, p, q, r}); }).value());
            Jet r = delta(frame, conn.gamma[l][i][j], k) - delta(frame, conn.gamma[l][i][k], j);
            for (int m = 0; m < 3; ++m) {
              r += conn.gamma[m][i][j] * conn.gamma[l][m][k] - conn.gamma[m][i][k] * conn.gamma[l][m][j];
            }
            forms.add(curv.rbar({l, i, j, k}).value() - r.value());
          }
        }
      }
    }
    MaxAbs all;
    all.add(first.value());
    all.add(forms.value());
    all.add(v316.value());
    out.record("integrable.3.16", all.value());
    out.record("integrable.3.17", v317.value());
  }
  return out;
}

}  // namespace threadsplit
