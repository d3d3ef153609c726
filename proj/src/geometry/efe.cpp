#include <cmath>
#include <numbers>
#include <sstream>

#include "threadsplit/efe.hpp"
#include "threadsplit/error.hpp"

namespace threadsplit {

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double x, double ref) { return (x - ref) / std::fmax(1.0, std::fabs(ref)); }

}  // namespace

EinsteinSet einstein_split(const SplitPoint& sp) {
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const Jet phi2 = f.phi * f.phi;
  const Jet inv_phi2 = reciprocal(phi2);
  const Jet& th = k.theta_trace;
  EinsteinSet G;
  G.Gbar_ij = sp.curv.einstein;
  const Jet iso = k.b2 + d.b_div + 0.5 * phi2 * k.omega2;
  const Jet iso_t = d.theta_trace0 - k.psi * th + (2.0 / 3.0) * th * th + 0.5 * k.sigma2;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      G.G_ij[i][j] = sp.curv.einstein[i][j] + iso * f.gbar[i][j] - 0.5 * (d.db({i, j}) + d.db({j, i})) -
                     k.b[i] * k.b[j] +
                     inv_phi2 * ((th - k.psi) * k.theta[i][j] + d.Theta0({i, j}) - iso_t * f.gbar[i][j]);
    }
  }
  for (int i = 0; i < 3; ++i) {
    Jet r0, tb, wb;
    for (int m = 0; m < 3; ++m) {
      r0 += sp.curv.rbar0({m, i, m});
      tb += k.theta[i][m] * k.b_up[m];
      wb += k.omega[i][m] * k.b_up[m];
    }
    G.G_i0[i] = r0 + th * k.b[i] - tb - phi2 * wb;
  }
  G.G_00 = 0.5 * (phi2 * sp.curv.scalar + (2.0 / 3.0) * th * th - k.sigma2 + phi2 * phi2 * k.omega2);
  return G;
}

EinsteinSet einstein_from_ricci(const RicciSet& ricci, const Mat3& ricci_sym, const FrameData& frame) {
  EinsteinSet G;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) G.G_ij[i][j] = ricci_sym[i][j] - 0.5 * ricci.scalar * frame.gbar[i][j];
    G.G_i0[i] = ricci.r_i0[i];
  }
  G.G_00 = ricci.r_00 + 0.5 * frame.phi * frame.phi * ricci.scalar;
  return G;
}

ResidualBlock einstein_residuals(const EinsteinSet& split, const EinsteinSet& from_ricci) {
  ResidualBlock out;
  MaxAbs diff, sym;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      diff.add_relative(split.G_ij[i][j].value(), from_ricci.G_ij[i][j].value());
      sym.add(split.G_ij[i][j].value() - split.G_ij[j][i].value());
    }
    diff.add_relative(split.G_i0[i].value(), from_ricci.G_i0[i].value());
  }
  diff.add_relative(split.G_00.value(), from_ricci.G_00.value());
  out.record("einstein.6.2-vs-6.3", diff.value());
  out.record("einstein.symmetry", sym.value());
  return out;
}

StressEnergy stress_energy(const MetricSpec& spec, const SplitPoint& sp, const EinsteinSet& G) {
  const auto& f = sp.frame;
  const Jet phi2 = f.phi * f.phi;
  StressEnergy T;
  if (spec.mode == MatterMode::FromEfe) {
    const double k = 1.0 / (8.0 * kPi * spec.newton_g);
    T.T00 = k * (G.G_00 - spec.lambda * phi2);
    for (int i = 0; i < 3; ++i) {
      T.Ti0[i] = k * G.G_i0[i];
      for (int j = 0; j < 3; ++j) T.Tij[i][j] = k * (G.G_ij[i][j] + spec.lambda * f.gbar[i][j]);
    }
    return T;
  }
  const JetEnv env = seed_point(f.point, f.order);
  FluidSplit fl;
  fl.rho = eval_expr(spec.matter.rho, env, spec.params);
  fl.p = eval_expr(spec.matter.p, env, spec.params);
  for (int i = 0; i < 3; ++i) {
    fl.q[i] = spec.matter.q[i].empty() ? Jet::constant(0.0, f.order) : eval_expr(spec.matter.q[i], env, spec.params);
    for (int j = 0; j < 3; ++j) {
      fl.pi[i][j] = spec.matter.pi[i][j].empty() ? Jet::constant(0.0, f.order)
                                                 : eval_expr(spec.matter.pi[i][j], env, spec.params);
    }
  }
  const double tr = contract(f, fl.pi).value();
  if (std::fabs(tr) > 1e-9) {
    std::ostringstream msg;
    msg << "InvalidMatter: pi is not trace-free with respect to gbar (gbar^ij pi_ij = " << tr << ")";
    throw Error(ErrorKind::InvalidMatter, msg.str());
  }
  return stress_from_fluid(fl, f);
}

FluidSplit fluid_split(const StressEnergy& T, const FrameData& frame) {
  FluidSplit fl;
  const Jet inv_phi = reciprocal(frame.phi);
  fl.rho = inv_phi * inv_phi * T.T00;
  fl.p = (1.0 / 3.0) * contract(frame, T.Tij);
  for (int i = 0; i < 3; ++i) {
    fl.q[i] = -inv_phi * T.Ti0[i];
    for (int j = 0; j < 3; ++j) fl.pi[i][j] = T.Tij[i][j] - fl.p * frame.gbar[i][j];
  }
  return fl;
}

StressEnergy stress_from_fluid(const FluidSplit& fl, const FrameData& frame) {
  StressEnergy T;
  T.T00 = frame.phi * frame.phi * fl.rho;
  for (int i = 0; i < 3; ++i) {
    T.Ti0[i] = -frame.phi * fl.q[i];
    for (int j = 0; j < 3; ++j) T.Tij[i][j] = fl.p * frame.gbar[i][j] + fl.pi[i][j];
  }
  return T;
}

Vec3 mefe_divergence_lhs(const SplitPoint& sp) {
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const Jet phi2 = f.phi * f.phi;
  const Vec3 c_up = raise(f, k.c);
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    Jet dth, dw, tc, cw, wb;
    for (int m = 0; m < 3; ++m) {
      for (int l = 0; l < 3; ++l) {
        dth += f.gbar_inv[m][l] * d.dTheta({l, i, m});
        dw += f.gbar_inv[m][l] * d.dOmega({l, i, m});
      }
      tc += k.theta[i][m] * c_up[m];
      cw += k.c[m] * k.omega_mixed[m][i];
      wb += k.omega[i][m] * k.b_up[m];
    }
    out[i] = dth - d.dtheta_trace[i] + k.theta_trace * k.c[i] - tc + phi2 * (dw + cw - 2.0 * wb);
  }
  return out;
}

EfeResiduals efe_components(const EfeInput& in) {
  const auto& sp = in.sp;
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const auto& fl = in.fluid;
  const Jet phi2 = f.phi * f.phi;
  const Jet inv_phi2 = reciprocal(phi2);
  const Jet& th = k.theta_trace;
  const double g8 = 8.0 * kPi * in.newton_g;
  EfeResiduals r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      r.sefe[i][j] = in.G.G_ij[i][j] + in.lambda * f.gbar[i][j] - g8 * (fl.p * f.gbar[i][j] + fl.pi[i][j]);
    }
  }
  const Vec3 div = mefe_divergence_lhs(sp);
  for (int i = 0; i < 3; ++i) {
    r.mefe_a[i] = in.G.G_i0[i] + g8 * f.phi * fl.q[i];
    r.mefe_b[i] = div[i] + g8 * f.phi * fl.q[i];
  }
  r.tefe = phi2 * sp.curv.scalar + (2.0 / 3.0) * th * th - k.sigma2 + phi2 * phi2 * k.omega2 -
           2.0 * phi2 * (in.lambda + g8 * fl.rho);
  r.trace = 0.5 * sp.curv.scalar -
            (2.0 * (k.b2 + d.b_div) + 1.5 * phi2 * k.omega2 + 3.0 * in.lambda -
             inv_phi2 * (th * th + 2.0 * d.theta_trace0 + 1.5 * k.sigma2 - 2.0 * k.psi * th) -
             3.0 * g8 * fl.p);
  r.raychaudhuri = d.theta_trace0 + (1.0 / 3.0) * th * th + k.sigma2 - k.psi * th -
                   phi2 * (k.b2 + d.b_div + phi2 * k.omega2 + in.lambda -
                           0.5 * g8 * (fl.rho + 3.0 * fl.p));
  return r;
}

ResidualBlock efe_residuals(const EfeInput& in) {
  ResidualBlock out;
  const auto& sp = in.sp;
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const auto& fl = in.fluid;
  const Jet phi2 = f.phi * f.phi;
  const Jet inv_phi2 = reciprocal(phi2);
  const double g8 = 8.0 * kPi * in.newton_g;
  const EfeResiduals r = efe_components(in);

  out.record("sefe.7.2", max_abs_value(r.sefe));
  MaxAbs ma, mb, pb;
  for (int i = 0; i < 3; ++i) {
    ma.add(r.mefe_a[i].value());
    mb.add(r.mefe_b[i].value());
  }
  out.record("mefe.7.3a", ma.value());
  out.record("mefe.7.3b", mb.value());
  out.record("tefe.7.4", r.tefe.value());
  out.record("trace.7.5", r.trace.value());
  out.record("raychaudhuri.7.6", r.raychaudhuri.value());

  // Reference divergence form of G_i0, kept as a probe.
  const Vec3 c_up = raise(f, k.c);
  for (int i = 0; i < 3; ++i) {
    Jet dth, dw, tc, cw, wb;
    for (int m = 0; m < 3; ++m) {
      for (int l = 0; l < 3; ++l) {
        dth += f.gbar_inv[m][l] * d.dTheta({l, i, m});
        dw += f.gbar_inv[m][l] * d.dOmega({l, i, m});
      }
      tc += k.theta[i][m] * c_up[m];
      cw += k.c[m] * k.omega_mixed[m][i];
      wb += k.omega[i][m] * k.b_up[m];
    }
    const Jet ref_form = dth - d.dtheta_trace[i] + k.theta_trace * k.c[i] - tc - phi2 * (dw + cw - 2.0 * wb);
    pb.add(rel(ref_form.value(), in.G.G_i0[i].value()));
  }
  out.record("paper.7.3b", pb.value(), ResidualKind::Probe);

  // The trace equation is minus the gbar-trace of the spatial block.
  const double tr72 = contract(f, r.sefe).value();
  out.record("trace.7.5-vs-7.2", r.trace.value() + tr72);
  const Jet& th = k.theta_trace;
  const Jet ref75 = 0.5 * sp.curv.scalar -
                        (2.0 * (k.b2 + d.b_div) + 1.5 * phi2 * k.omega2 + 3.0 * in.lambda -
                         inv_phi2 * (th * th + d.theta_trace0 + 1.5 * k.sigma2 - 2.0 * k.psi * th) - 3.0 * g8 * fl.p);
  out.record("paper.7.5", rel(ref75.value(), -tr72), ResidualKind::Probe);

  // Raychaudhuri = Phi^2 trace / 2 - temporal / 4.
  const double combo = 0.5 * phi2.value() * r.trace.value() - 0.25 * r.tefe.value();
  out.record("raychaudhuri.7.6-vs-7.4-7.5", r.raychaudhuri.value() - combo);

  // G + Lambda g - 8 pi G T directly, and against the split blocks.
  MaxAbs direct, complete;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double v = (in.G.G_ij[i][j] + in.lambda * f.gbar[i][j] - g8 * in.T.Tij[i][j]).value();
      direct.add(v);
      complete.add(v - r.sefe[i][j].value());
    }
    const double v = (in.G.G_i0[i] - g8 * in.T.Ti0[i]).value();
    direct.add(v);
    complete.add(v - r.mefe_a[i].value());
  }
  const double v00 = (in.G.G_00 - in.lambda * phi2 - g8 * in.T.T00).value();
  direct.add(v00);
  complete.add(v00 - 0.5 * r.tefe.value());
  out.record("efe.direct", direct.value());
  out.record("efe.split-complete", complete.value());

  // gbar-trace of pi and symmetry.
  MaxAbs pisym;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) pisym.add(fl.pi[i][j].value() - fl.pi[j][i].value());
  }
  out.record("fluid.pi-trace", contract(f, fl.pi).value());
  out.record("fluid.pi-symmetry", pisym.value());
  return out;
}

ConservationValues conservation_values(const SplitPoint& sp, const StressEnergy& T, const FluidSplit& fl) {
  if (T.T00.order() < 1) throw Error(ErrorKind::OrderExhausted, "conservation laws need one derivative of T");
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const Jet phi2 = f.phi * f.phi;
  const Vec3 c_up = raise(f, k.c);
  const Vec3 T0_up = raise(f, T.Ti0);
  const SpatialTensor Ti0 = SpatialTensor::covector(T.Ti0);
  const SpatialTensor dTi0 = spatial_d(sp, Ti0);
  const SpatialTensor tTi0 = temporal_d(sp, Ti0);
  const SpatialTensor dTij = spatial_d(sp, SpatialTensor::matrix(T.Tij, "dd"));

  ConservationValues cv;
  Jet div0;
  for (int j = 0; j < 3; ++j) {
    for (int m = 0; m < 3; ++m) div0 += f.gbar_inv[j][m] * dTi0({m, j});
  }
  Jet bc;
  for (int j = 0; j < 3; ++j) bc += (2.0 * k.b_up[j] - c_up[j]) * T.Ti0[j];
  cv.energy = phi2 * (div0 + bc - full_contract(f, k.theta, T.Tij)) - T.T00.derivative(0) +
              (2.0 * k.psi - k.theta_trace) * T.T00;
  for (int i = 0; i < 3; ++i) {
    Jet divi, wt, tb, tt;
    for (int j = 0; j < 3; ++j) {
      for (int m = 0; m < 3; ++m) divi += f.gbar_inv[j][m] * dTij({m, i, j});
      wt += k.omega[i][j] * T0_up[j];
      tb += T.Tij[i][j] * k.b_up[j];
      tt += k.theta[i][j] * T0_up[j];
    }
    cv.momentum[i] = phi2 * (divi - wt + tb) + (k.psi - k.theta_trace) * T.Ti0[i] - tTi0({i}) +
                     T.T00 * k.b[i] - tt;
  }

  // Fluid forms.
  const Vec3 q_up = raise(f, fl.q);
  const SpatialTensor q = SpatialTensor::covector(fl.q);
  const SpatialTensor dq = spatial_d(sp, q);
  const SpatialTensor tq = temporal_d(sp, q);
  const SpatialTensor dpi = spatial_d(sp, SpatialTensor::matrix(fl.pi, "dd"));
  Jet qdiv, bq;
  for (int j = 0; j < 3; ++j) {
    for (int m = 0; m < 3; ++m) qdiv += f.gbar_inv[j][m] * dq({m, j});
    bq += k.b[j] * q_up[j];
  }
  cv.energy_fluid = fl.rho.derivative(0) + (fl.rho + fl.p) * k.theta_trace + full_contract(f, k.sigma, fl.pi) +
                    f.phi * (qdiv + 2.0 * bq);
  for (int i = 0; i < 3; ++i) {
    Jet sq, pidiv, pib;
    for (int j = 0; j < 3; ++j) {
      sq += (k.sigma[i][j] + phi2 * k.omega[i][j]) * q_up[j];
      pib += fl.pi[i][j] * k.b_up[j];
      for (int m = 0; m < 3; ++m) pidiv += f.gbar_inv[j][m] * dpi({m, i, j});
    }
    cv.momentum_fluid[i] = tq({i}) + (4.0 / 3.0) * k.theta_trace * fl.q[i] + sq +
                           f.phi * (delta(f, fl.p, i) + pidiv + (fl.p + fl.rho) * k.b[i] + pib);
  }
  return cv;
}

ResidualBlock conservation_residuals(const SplitPoint& sp, const StressEnergy& T, const FluidSplit& fl) {
  ResidualBlock out;
  const ConservationValues cv = conservation_values(sp, T, fl);
  const double phi = sp.frame.phi.value();
  out.record("cons.8.2", cv.energy.value());
  out.record("cons.energy.8.5", cv.energy_fluid.value());
  out.record("cons.8.5-vs-8.2", cv.energy_fluid.value() + cv.energy.value() / (phi * phi));
  MaxAbs m3, m6, link;
  for (int i = 0; i < 3; ++i) {
    m3.add(cv.momentum[i].value());
    m6.add(cv.momentum_fluid[i].value());
    link.add(cv.momentum_fluid[i].value() - cv.momentum[i].value() / phi);
  }
  out.record("cons.8.3", m3.value());
  out.record("cons.momentum.8.6", m6.value());
  out.record("cons.8.6-vs-8.3", link.value());
  return out;
}

}  // namespace threadsplit
