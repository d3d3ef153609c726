#include <cmath>

#include "threadsplit/error.hpp"
#include "threadsplit/structure.hpp"

namespace threadsplit {

namespace {

// sum_j x_ij y^j_k where y is stored mixed as y[j][k]
Jet product_mixed(const Mat3& x, const Mat3& y, int i, int k) {
  return x[i][0] * y[0][k] + x[i][1] * y[1][k] + x[i][2] * y[2][k];
}

}  // namespace

double max_abs_value(const SpatialTensor& t) {
  double v = 0.0;
  for (int n = 0; n < t.size(); ++n) v = std::fmax(v, std::fabs(t.flat(n).value()));
  return v;
}

SpatialTensor spatial_d(const SplitPoint& sp, const SpatialTensor& t) {
  return covariant_derivative(t, sp.conn, sp.kin, sp.frame, CovariantKind::Spatial);
}

SpatialTensor temporal_d(const SplitPoint& sp, const SpatialTensor& t) {
  return covariant_derivative(t, sp.conn, sp.kin, sp.frame, CovariantKind::Temporal);
}

KinematicDerivatives kinematic_derivatives(const FrameData& frame, const KinematicSet& kin, const ConnectionSet& conn) {
  auto sd = [&](const SpatialTensor& t) {
    return covariant_derivative(t, conn, kin, frame, CovariantKind::Spatial);
  };
  auto td = [&](const SpatialTensor& t) {
    return covariant_derivative(t, conn, kin, frame, CovariantKind::Temporal);
  };
  KinematicDerivatives d;
  const SpatialTensor K = SpatialTensor::matrix(kin.K, "dd");
  const SpatialTensor Th = SpatialTensor::matrix(kin.theta, "dd");
  const SpatialTensor W = SpatialTensor::matrix(kin.omega, "dd");
  d.dK = sd(K);
  d.K0 = td(K);
  d.dTheta = sd(Th);
  d.Theta0 = td(Th);
  d.dOmega = sd(W);
  d.omega0 = td(W);
  d.db = sd(SpatialTensor::covector(kin.b));
  for (int i = 0; i < 3; ++i) d.dtheta_trace[i] = delta(frame, kin.theta_trace, i);
  d.theta_trace0 = kin.theta_trace.derivative(0);
  Jet s;
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) s += frame.gbar_inv[i][k] * d.db({i, k});
  }
  d.b_div = s;
  return d;
}

SplitPoint make_split_point(const MetricSpec& spec, const Point& point, int order) {
  SplitPoint sp;
  sp.frame = eval_frame(spec, point, order);
  sp.kin = compute_kinematics(sp.frame);
  sp.conn = spatial_connection(sp.frame);
  sp.curv = spatial_curvature(sp.conn, sp.kin, sp.frame);
  sp.der = kinematic_derivatives(sp.frame, sp.kin, sp.conn);
  return sp;
}

FullCurvature curvature_from_split(const SplitPoint& sp, CurvatureSource form) {
  if (form == CurvatureSource::Oracle) throw Error(ErrorKind::Input, "oracle curvature comes from the oracle module");
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const auto& K = k.K;
  const auto& T = k.theta;
  const auto& w = k.omega;
  const auto& b = k.b;
  const auto& c = k.c;
  const Jet phi2 = f.phi * f.phi;
  const Jet inv_phi2 = reciprocal(phi2);

  FullCurvature fc;
  fc.source = form;
  if (form == CurvatureSource::SplitK) {
    for (int i = 0; i < 3; ++i) {
      for (int l = 0; l < 3; ++l) {
        for (int j = 0; j < 3; ++j) {
          for (int m = 0; m < 3; ++m) {
            fc.iljk({i, l, j, m}) =
                sp.curv.rbar_low({i, l, j, m}) + inv_phi2 * (K[i][j] * K[l][m] - K[i][m] * K[l][j]);
          }
        }
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int m = 0; m < 3; ++m) {
          fc.i0jk({i, j, m}) = d.dK({i, m, j}) - d.dK({i, j, m}) + K[i][j] * c[m] - K[i][m] * c[j] +
                               2.0 * phi2 * b[i] * w[j][m];
          fc.il0k({i, j, m}) = sp.curv.rbar0_low({i, j, m}) + b[i] * K[j][m] - b[j] * K[i][m];
        }
        fc.i00k({i, j}) = d.K0({i, j}) + product_mixed(K, k.K_mixed, i, j) - k.psi * K[i][j] -
                          phi2 * (d.db({i, j}) + b[i] * b[j]);
      }
    }
    return fc;
  }

  // Theta/omega form.
  Mat3 u;  // omega_ij + phi^-2 Theta_ij
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) u[i][j] = w[i][j] + inv_phi2 * T[i][j];
  }
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      for (int j = 0; j < 3; ++j) {
        for (int m = 0; m < 3; ++m) {
          fc.iljk({i, l, j, m}) = sp.curv.rbar_low({i, l, j, m}) + phi2 * (u[i][j] * u[l][m] - u[i][m] * u[l][j]);
        }
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int m = 0; m < 3; ++m) {
        fc.i0jk({i, j, m}) = d.dTheta({i, m, j}) - d.dTheta({i, j, m}) + T[i][j] * c[m] - T[i][m] * c[j] +
                             phi2 * (d.dOmega({i, m, j}) - d.dOmega({i, j, m}) + w[i][m] * c[j] - w[i][j] * c[m] +
                                     2.0 * b[i] * w[j][m]);
        fc.il0k({i, j, m}) = sp.curv.rbar0_low({i, j, m}) + b[i] * T[j][m] - b[j] * T[i][m] +
                             phi2 * (b[i] * w[j][m] - b[j] * w[i][m]);
      }
      Jet uk;  // (omega_ij + phi^-2 Theta_ij)(Theta^j_k + phi^2 omega^j_k)
      for (int h = 0; h < 3; ++h) uk += u[i][h] * (k.theta_mixed[h][j] + phi2 * k.omega_mixed[h][j]);
      fc.i00k({i, j}) = d.Theta0({i, j}) - k.psi * T[i][j] +
                        phi2 * (d.omega0({i, j}) + k.psi * w[i][j] + uk - d.db({i, j}) - b[i] * b[j]);
    }
  }
  return fc;
}

MixedCurvature raise_curvature(const FullCurvature& fc, const FrameData& frame) {
  MixedCurvature m;
  const Jet inv_phi2 = reciprocal(frame.phi * frame.phi);
  for (int h = 0; h < 3; ++h) {
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 3; ++k) {
        Jet s0;
        for (int l = 0; l < 3; ++l) s0 += frame.gbar_inv[h][l] * fc.il0k({i, l, k});
        m.h_i0k({h, i, k}) = s0;
        for (int j = 0; j < 3; ++j) {
          Jet s;
          for (int l = 0; l < 3; ++l) s += frame.gbar_inv[h][l] * fc.iljk({i, l, j, k});
          m.h_ijk({h, i, j, k}) = s;
        }
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      m.zero_i0k({i, k}) = -inv_phi2 * fc.i00k({i, k});
      for (int j = 0; j < 3; ++j) m.zero_ijk({i, j, k}) = -inv_phi2 * fc.i0jk({i, j, k});
    }
  }
  return m;
}

ResidualBlock structure_residuals(const SplitPoint& sp, const FullCurvature& kf, const FullCurvature& tf) {
  ResidualBlock out;
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const auto& K = k.K;
  const auto& Km = k.K_mixed;
  const auto& T = k.theta;
  const auto& Tm = k.theta_mixed;
  const auto& w = k.omega;
  const auto& wm = k.omega_mixed;
  const auto& b = k.b;
  const auto& c = k.c;
  const Jet phi2 = f.phi * f.phi;
  const Jet inv_phi2 = reciprocal(phi2);

  MaxAbs forms;
  for (int n = 0; n < kf.iljk.size(); ++n) forms.add_relative(tf.iljk.flat(n).value(), kf.iljk.flat(n).value());
  for (int n = 0; n < kf.i0jk.size(); ++n) forms.add_relative(tf.i0jk.flat(n).value(), kf.i0jk.flat(n).value());
  for (int n = 0; n < kf.il0k.size(); ++n) forms.add_relative(tf.il0k.flat(n).value(), kf.il0k.flat(n).value());
  for (int n = 0; n < kf.i00k.size(); ++n) forms.add_relative(tf.i00k.flat(n).value(), kf.i00k.flat(n).value());
  out.record("structure.4.5-vs-4.6", forms.value());

  // Mixed components written out directly, against the raised (0,4) ones.
  const MixedCurvature mixed = raise_curvature(kf, f);
  MaxAbs m42, m44;
  Vec3 b_up = k.b_up;
  for (int h = 0; h < 3; ++h) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        for (int m = 0; m < 3; ++m) {
          const Jet a2 = sp.curv.rbar({h, i, j, m}) + inv_phi2 * (K[i][j] * Km[h][m] - K[i][m] * Km[h][j]);
          const Jet a4 = sp.curv.rbar({h, i, j, m}) +
                         (w[i][j] + inv_phi2 * T[i][j]) * (Tm[h][m] + phi2 * wm[h][m]) -
                         (w[i][m] + inv_phi2 * T[i][m]) * (Tm[h][j] + phi2 * wm[h][j]);
          m42.add_relative(a2.value(), mixed.h_ijk({h, i, j, m}).value());
          m44.add_relative(a4.value(), mixed.h_ijk({h, i, j, m}).value());
        }
      }
      for (int m = 0; m < 3; ++m) {
        const Jet c2 = sp.curv.rbar0({h, i, m}) + b[i] * Km[h][m] - b_up[h] * K[i][m];
        const Jet c4 = sp.curv.rbar0({h, i, m}) + b[i] * Tm[h][m] - b_up[h] * T[i][m] +
                       phi2 * (b[i] * wm[h][m] - b_up[h] * w[i][m]);
        m42.add_relative(c2.value(), mixed.h_i0k({h, i, m}).value());
        m44.add_relative(c4.value(), mixed.h_i0k({h, i, m}).value());
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int m = 0; m < 3; ++m) {
        const Jet b2 =
            inv_phi2 * (d.dK({i, j, m}) - d.dK({i, m, j}) + K[i][m] * c[j] - K[i][j] * c[m]) - 2.0 * b[i] * w[j][m];
        const Jet b4 = inv_phi2 * (d.dTheta({i, j, m}) - d.dTheta({i, m, j}) + T[i][m] * c[j] - T[i][j] * c[m]) +
                       d.dOmega({i, j, m}) - d.dOmega({i, m, j}) + w[i][j] * c[m] - w[i][m] * c[j] -
                       2.0 * b[i] * w[j][m];
        m42.add_relative(b2.value(), mixed.zero_ijk({i, j, m}).value());
        m44.add_relative(b4.value(), mixed.zero_ijk({i, j, m}).value());
      }
      const Jet d2 = d.db({i, j}) + b[i] * b[j] -
                     inv_phi2 * (d.K0({i, j}) + product_mixed(K, Km, i, j) - k.psi * K[i][j]);
      Jet uk;
      for (int h = 0; h < 3; ++h) uk += (w[i][h] + inv_phi2 * T[i][h]) * (Tm[h][j] + phi2 * wm[h][j]);
      const Jet d4 = d.db({i, j}) + b[i] * b[j] - inv_phi2 * (d.Theta0({i, j}) - k.psi * T[i][j]) -
                     d.omega0({i, j}) - k.psi * w[i][j] - uk;
      m42.add_relative(d2.value(), mixed.zero_i0k({i, j}).value());
      m44.add_relative(d4.value(), mixed.zero_i0k({i, j}).value());
    }
  }
  out.record("structure.4.2", m42.value());
  out.record("structure.4.4", m44.value());

  // Symmetries of R as produced by the K-form.
  MaxAbs pair, cross, i00k_sym;
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      for (int j = 0; j < 3; ++j) {
        for (int m = 0; m < 3; ++m) {
          pair.add(kf.iljk({i, l, j, m}).value() + kf.iljk({l, i, j, m}).value());
          pair.add(kf.iljk({i, l, j, m}).value() + kf.iljk({i, l, m, j}).value());
          pair.add(kf.iljk({i, l, j, m}).value() - kf.iljk({j, m, i, l}).value());
        }
      }
    }
    for (int j = 0; j < 3; ++j) {
      for (int m = 0; m < 3; ++m) cross.add(kf.i0jk({i, j, m}).value() + kf.il0k({j, m, i}).value());
      i00k_sym.add(kf.i00k({i, j}).value() - kf.i00k({j, i}).value());
    }
  }
  out.record("structure.pair-symmetry", pair.value());
  out.record("structure.R_i0jk-cross", cross.value());
  out.record("structure.R_i00k-symmetry", i00k_sym.value());
  return out;
}

ResidualBlock curvature_identity_residuals(const SplitPoint& sp, const FullCurvature& kf) {
  ResidualBlock out;
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const auto& K = k.K;
  const auto& Km = k.K_mixed;
  const auto& T = k.theta;
  const auto& Tm = k.theta_mixed;
  const auto& w = k.omega;
  const auto& wm = k.omega_mixed;
  const auto& a = k.a;
  const auto& b = k.b;
  const auto& c = k.c;
  const auto& R = sp.curv.rbar_low;
  const auto& R0 = sp.curv.rbar0_low;
  const Jet phi2 = f.phi * f.phi;
  const Jet inv_phi2 = reciprocal(phi2);
  const bool integrable = max_abs_value(w) < 1e-12;

  MaxAbs r7a, r7b, r7c, r8, r11a, r11b;
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      for (int j = 0; j < 3; ++j) {
        for (int m = 0; m < 3; ++m) {
          r7a.add(R({i, l, j, m}).value() + R({i, l, m, j}).value());
          r7b.add(R({i, l, j, m}).value() + R({l, i, j, m}).value());
          const double lhs = R({i, l, j, m}).value() - R({j, m, i, l}).value();
          const Jet kk = inv_phi2 * (K[i][m] * K[l][j] + K[j][i] * K[m][l] - K[i][j] * K[l][m] - K[j][l] * K[m][i]);
          const Jet tw = 2.0 * (T[i][m] * w[l][j] + T[l][j] * w[i][m] + T[i][j] * w[m][l] + T[m][l] * w[j][i]);
          r7c.add_relative(kk.value(), lhs);
          r7c.add_relative(tw.value(), lhs);
          if (integrable) r11a.add(lhs);
        }
      }
    }
  }
  // R-bar_{jk0i}: rbar0_low stores (i, l, k) for R-bar_{il0k}.
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int m = 0; m < 3; ++m) {
        const double lhs = R0({j, m, i}).value();
        const Jet v1 = d.dK({i, j, m}) - d.dK({i, m, j}) + K[i][m] * c[j] - K[i][j] * c[m] -
                       2.0 * phi2 * b[i] * w[j][m] - b[j] * K[m][i] + b[m] * K[j][i];
        const Jet v2 = d.dTheta({i, j, m}) - d.dTheta({i, m, j}) + T[i][j] * a[m] - T[i][m] * a[j] +
                       phi2 * (d.dOmega({i, j, m}) - d.dOmega({i, m, j}) + w[i][m] * a[j] - w[i][j] * a[m] -
                               2.0 * b[i] * w[j][m]);
        r8.add_relative(v1.value(), lhs);
        r8.add_relative(v2.value(), lhs);
        if (integrable) {
          const Jet v11 = d.dTheta({i, j, m}) - d.dTheta({i, m, j}) + T[i][j] * a[m] - T[i][m] * a[j];
          r11b.add_relative(v11.value(), lhs);
        }
      }
    }
  }
  out.record("identity.4.7a", r7a.value());
  out.record("identity.4.7b", r7b.value());
  out.record("identity.4.7c", r7c.value());
  out.record("identity.4.8", r8.value());

  MaxAbs r9, r9_vs_r, p9a, r10a, r10b, p10b, bsym, r12;
  for (int i = 0; i < 3; ++i) {
    for (int m = 0; m < 3; ++m) {
      const Jet kk_im = product_mixed(K, Km, i, m);
      const Jet kk_mi = product_mixed(K, Km, m, i);
      const Jet bsum = d.db({i, m}) + d.db({m, i});
      const Jet v9a = 0.5 * (d.K0({i, m}) + d.K0({m, i}) + kk_im + kk_mi - k.psi * (K[i][m] + K[m][i]) -
                             phi2 * bsum) -
                      phi2 * b[i] * b[m];
      const Jet v9a_ref = 0.5 * (d.K0({i, m}) + d.K0({m, i}) + kk_im + kk_mi - k.psi * (K[i][m] + K[i][m]) -
                                     inv_phi2 * bsum) -
                              phi2 * b[i] * b[m];
      const Jet v9b = d.Theta0({i, m}) - k.psi * T[i][m] + product_mixed(T, Tm, i, m) +
                      phi2 * phi2 * product_mixed(w, wm, i, m) - phi2 * b[i] * b[m] - 0.5 * phi2 * bsum;
      r9.add_relative(v9a.value(), v9b.value());
      r9_vs_r.add_relative(v9b.value(), kf.i00k({i, m}).value());
      p9a.add_relative(v9a_ref.value(), kf.i00k({i, m}).value());

      const Jet v10a = d.K0({i, m}) - d.K0({m, i}) + kk_im - kk_mi - k.psi * (K[i][m] - K[m][i]) -
                       phi2 * (d.db({i, m}) - d.db({m, i}));
      r10a.add(v10a.value());
      const Jet tw = product_mixed(w, Tm, m, i) - product_mixed(w, Tm, i, m);
      const Jet bskew = 0.5 * (d.db({i, m}) - d.db({m, i}));
      const double lhs = d.omega0({i, m}).value();
      r10b.add_relative((-k.psi * w[i][m] + tw + bskew).value(), lhs);
      p10b.add_relative((-k.psi * w[i][m] + phi2 * (tw + bskew)).value(), lhs);
      if (integrable) {
        bsym.add(d.db({i, m}).value() - d.db({m, i}).value());
        const Jet v12d = d.Theta0({i, m}) - k.psi * T[i][m] + product_mixed(T, Tm, i, m) -
                         phi2 * (d.db({i, m}) + b[i] * b[m]);
        r12.add_relative(v12d.value(), kf.i00k({i, m}).value());
      }
    }
  }
  out.record("identity.4.9", r9.value());
  out.record("identity.4.9-vs-4.5d", r9_vs_r.value());
  out.record("paper.4.9a", p9a.value(), ResidualKind::Probe);
  out.record("identity.4.10a", r10a.value());
  out.record("identity.4.10b", r10b.value());
  out.record("paper.4.10b", p10b.value(), ResidualKind::Probe);

  if (integrable) {
    for (int i = 0; i < 3; ++i) {
      for (int l = 0; l < 3; ++l) {
        for (int j = 0; j < 3; ++j) {
          for (int m = 0; m < 3; ++m) {
            const Jet a12 = R({i, l, j, m}) + inv_phi2 * (T[i][j] * T[l][m] - T[i][m] * T[l][j]);
            r12.add_relative(a12.value(), kf.iljk({i, l, j, m}).value());
          }
        }
        for (int m = 0; m < 3; ++m) {
          const Jet b12 = d.dTheta({i, m, l}) - d.dTheta({i, l, m}) + T[i][l] * c[m] - T[i][m] * c[l];
          r12.add_relative(b12.value(), kf.i0jk({i, l, m}).value());
          const Jet c12 = R0({i, l, m}) + T[l][m] * b[i] - T[i][m] * b[l];
          r12.add_relative(c12.value(), kf.il0k({i, l, m}).value());
        }
      }
    }
    out.record("integrable.4.11a", r11a.value());
    out.record("integrable.4.11b", r11b.value());
    out.record("integrable.b-symmetry", bsym.value());
    out.record("integrable.4.12", r12.value());
  }
  return out;
}

RicciSet ricci_split(const SplitPoint& sp, RicciForm form) {
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const auto& b = k.b;
  const Jet phi2 = f.phi * f.phi;
  const Jet inv_phi2 = reciprocal(phi2);
  const Jet& theta = k.theta_trace;

  RicciSet r;
  r.source = CurvatureSource::SplitK;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Jet rb;
      for (int m = 0; m < 3; ++m) rb += sp.curv.rbar({m, i, j, m});
      if (form == RicciForm::Via56) {
        r.ricci[i][j] = rb + inv_phi2 * ((theta - k.psi) * k.K[i][j] + d.K0({i, j})) - d.db({i, j}) - b[i] * b[j];
      } else {
        r.ricci[i][j] = rb + inv_phi2 * ((theta - k.psi) * k.theta[i][j] + d.Theta0({i, j})) + d.omega0({i, j}) +
                        (theta + k.psi) * k.omega[i][j] - d.db({i, j}) - b[i] * b[j];
      }
    }
  }
  for (int i = 0; i < 3; ++i) {
    Jet r0;
    Jet kb, tb, wb;
    for (int m = 0; m < 3; ++m) {
      r0 += sp.curv.rbar0({m, i, m});
      kb += k.K[i][m] * k.b_up[m];
      tb += k.theta[i][m] * k.b_up[m];
      wb += k.omega[i][m] * k.b_up[m];
    }
    r.r_i0[i] = form == RicciForm::Via56 ? r0 + theta * b[i] - kb : r0 + theta * b[i] - tb - phi2 * wb;
  }
  if (form == RicciForm::Via56) {
    Jet kk;
    for (int h = 0; h < 3; ++h) {
      for (int m = 0; m < 3; ++m) kk += k.K_mixed[h][m] * k.K_mixed[m][h];
    }
    r.r_00 = k.psi * theta - d.theta_trace0 - kk + phi2 * (k.b2 + d.b_div);
  } else {
    r.r_00 = k.psi * theta - d.theta_trace0 - k.sigma2 - (1.0 / 3.0) * theta * theta + phi2 * phi2 * k.omega2 +
             phi2 * (k.b2 + d.b_div);
  }
  r.scalar = sp.curv.scalar +
             inv_phi2 * ((4.0 / 3.0) * theta * theta - 2.0 * k.psi * theta + 2.0 * d.theta_trace0 + k.sigma2) -
             phi2 * k.omega2 - 2.0 * k.b2 - 2.0 * d.b_div;
  return r;
}

Mat3 ricci_symmetric(const SplitPoint& sp) {
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const Jet inv_phi2 = reciprocal(sp.frame.phi * sp.frame.phi);
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m[i][j] = sp.curv.ricci[i][j] + inv_phi2 * ((k.theta_trace - k.psi) * k.theta[i][j] + d.Theta0({i, j})) -
                0.5 * (d.db({i, j}) + d.db({j, i})) - k.b[i] * k.b[j];
    }
  }
  return m;
}

Vec3 ricci_i0_divergence(const SplitPoint& sp) {
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const Jet phi2 = f.phi * f.phi;
  const Vec3 c_up = raise(f, k.c);
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    Jet div, ck, wb;
    for (int m = 0; m < 3; ++m) {
      for (int l = 0; l < 3; ++l) div += f.gbar_inv[m][l] * d.dK({l, i, m});
      ck += c_up[m] * k.K[m][i];
      wb += k.omega[i][m] * k.b_up[m];
    }
    out[i] = div - d.dtheta_trace[i] + k.theta_trace * k.c[i] - ck - 2.0 * phi2 * wb;
  }
  return out;
}

ResidualBlock ricci_residuals(const SplitPoint& sp, const RicciSet& r56, const RicciSet& r57) {
  ResidualBlock out;
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const Jet phi2 = f.phi * f.phi;
  const Jet inv_phi2 = reciprocal(phi2);
  const Vec3 c_up = raise(f, k.c);

  MaxAbs forms, sym58a, skew58b, symmetry;
  const Mat3 rsym = ricci_symmetric(sp);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      forms.add_relative(r57.ricci[i][j].value(), r56.ricci[i][j].value());
      symmetry.add(r56.ricci[i][j].value() - r56.ricci[j][i].value());
      sym58a.add_relative(rsym[i][j].value(), 0.5 * (r56.ricci[i][j] + r56.ricci[j][i]).value());
      Jet lhs;
      for (int m = 0; m < 3; ++m) lhs += sp.curv.rbar({m, i, j, m}) - sp.curv.rbar({m, j, i, m});
      const Jet rhs = 0.5 * (d.db({i, j}) - d.db({j, i})) - d.omega0({i, j}) - (k.theta_trace + k.psi) * k.omega[i][j];
      skew58b.add_relative((0.5 * lhs).value(), rhs.value());
    }
    forms.add_relative(r57.r_i0[i].value(), r56.r_i0[i].value());
  }
  forms.add_relative(r57.r_00.value(), r56.r_00.value());
  out.record("ricci.5.6-vs-5.7", forms.value());
  out.record("ricci.symmetry", symmetry.value());
  out.record("ricci.5.8a", sym58a.value());
  out.record("ricci.5.8b", skew58b.value());

  // R_i0 as a divergence, ours and the reference variants.
  const Vec3 div = ricci_i0_divergence(sp);
  MaxAbs rdiv, p56b, p57b;
  for (int i = 0; i < 3; ++i) {
    Jet dtheta, dw, ct, cw, kc, wb;
    for (int m = 0; m < 3; ++m) {
      for (int l = 0; l < 3; ++l) {
        dtheta += f.gbar_inv[m][l] * d.dTheta({l, i, m});
        dw += f.gbar_inv[m][l] * d.dOmega({l, i, m});
      }
      ct += k.theta[i][m] * c_up[m];
      cw += k.c[m] * k.omega_mixed[m][i];
      kc += k.c[m] * k.K_mixed[m][i];
      wb += k.omega[i][m] * k.b_up[m];
    }
    Jet dk;
    for (int m = 0; m < 3; ++m) {
      for (int l = 0; l < 3; ++l) dk += f.gbar_inv[m][l] * d.dK({l, i, m});
    }
    const double ref = r56.r_i0[i].value();
    rdiv.add_relative(div[i].value(), ref);
    const Jet ref56 = dk - d.dtheta_trace[i] + k.theta_trace * k.c[i] - kc + 2.0 * phi2 * wb;
    const Jet ref57 =
        dtheta - d.dtheta_trace[i] + k.theta_trace * k.c[i] - ct - phi2 * (dw + cw - wb);
    p56b.add_relative(ref56.value(), ref);
    p57b.add_relative(ref57.value(), ref);
  }
  out.record("ricci.R_i0-divergence", rdiv.value());
  out.record("paper.5.6b", p56b.value(), ResidualKind::Probe);
  out.record("paper.5.7b", p57b.value(), ResidualKind::Probe);

  // Scalar assembled from components vs the closed form.
  const Jet r510 = contract(f, r56.ricci) - inv_phi2 * r56.r_00;
  out.record("scalar.5.11-vs-5.10", (r56.scalar - r510).value() / std::fmax(1.0, std::fabs(r510.value())));
  const Jet ref511 = sp.curv.scalar +
                         inv_phi2 * ((4.0 / 3.0) * k.theta_trace * k.theta_trace - 2.0 * k.psi * k.theta_trace +
                                     2.0 * d.theta_trace0) -
                         phi2 * k.omega2 - 2.0 * k.b2 - 2.0 * d.b_div;
  out.record("paper.5.11", (ref511 - r510).value() / std::fmax(1.0, std::fabs(r510.value())),
             ResidualKind::Probe);
  return out;
}

}  // namespace threadsplit
