#include <cmath>
#include <sstream>

#include "threadsplit/error.hpp"
#include "threadsplit/metric.hpp"

namespace threadsplit {

namespace {

std::string point_text(const Point& p) {
  std::ostringstream out;
  out << "(" << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ")";
  return out.str();
}

void require_finite(const Jet& j, const char* what, const Point& p) {
  for (double v : j.coefficients()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::DomainErrorAtPoint, std::string(what) + " is not finite at " + point_text(p));
    }
  }
}

}  // namespace

FrameData eval_frame(const MetricSpec& spec, const Point& point, int order) {
  if (order < 0 || order > kMaxOrder) {
    throw Error(ErrorKind::Input, "jet order must be in 0.." + std::to_string(kMaxOrder));
  }
  FrameData f;
  f.point = point;
  f.order = order;
  const JetEnv env = seed_point(point, order);
  f.phi = eval_expr(spec.phi, env, spec.params);
  require_finite(f.phi, "Phi", point);
  const Jet phi2 = f.phi * f.phi;
  if (!(phi2.value() > 0.0)) {
    throw Error(ErrorKind::NotLorentzian, "NotLorentzian: Phi^2 is not positive at " + point_text(point));
  }
  for (int i = 0; i < 3; ++i) {
    f.xi[i] = eval_expr(spec.xi[i], env, spec.params);
    require_finite(f.xi[i], "xi", point);
    f.A[i] = -f.xi[i] / phi2;
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      f.g[i][j] = eval_expr(spec.g[i][j], env, spec.params);
      require_finite(f.g[i][j], "g", point);
      f.g[j][i] = f.g[i][j];
      f.gbar[i][j] = f.g[i][j] + phi2 * f.A[i] * f.A[j];
      f.gbar[j][i] = f.gbar[i][j];
    }
  }

  // Leading principal minors of gbar at the point.
  const auto v = values(f.gbar);
  const double m1 = v[0][0];
  const double m2 = v[0][0] * v[1][1] - v[0][1] * v[1][0];
  const double m3 = v[0][0] * (v[1][1] * v[2][2] - v[1][2] * v[2][1]) -
                    v[0][1] * (v[1][0] * v[2][2] - v[1][2] * v[2][0]) +
                    v[0][2] * (v[1][0] * v[2][1] - v[1][1] * v[2][0]);
  if (std::fabs(m3) <= 1e-12 && m1 > 1e-12 && m2 > 1e-12) {
    throw Error(ErrorKind::SingularSpatialMetric, "SingularSpatialMetric: det gbar = " + std::to_string(m3) +
                                                      " at " + point_text(point));
  }
  if (!(m1 > 1e-12 && m2 > 1e-12 && m3 > 1e-12)) {
    throw Error(ErrorKind::NotLorentzian,
                "NotLorentzian: spatial metric is not positive definite at " + point_text(point));
  }
  f.gbar_inv = invert<3>(f.gbar, ErrorKind::SingularSpatialMetric);

  double scale = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      scale = std::fmax(scale, std::fabs(v[i][j]) * std::fabs(f.gbar_inv[j][i].value()));
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += f.gbar_inv[i][k].value() * v[k][j];
      if (std::fabs(s - (i == j ? 1.0 : 0.0)) > 1e-12 * std::fmax(1.0, scale)) {
        throw Error(ErrorKind::SingularSpatialMetric,
                    "SingularSpatialMetric: inverse check failed at " + point_text(point));
      }
    }
  }
  return f;
}

Jet delta(const FrameData& frame, const Jet& f, int i) {
  return f.derivative(i + 1) - frame.A[i] * f.derivative(0);
}

std::array<double, 4> delta_derivative(const FrameData& frame, const Jet& f) {
  std::array<double, 4> out{};
  for (int i = 0; i < 3; ++i) out[i] = delta(frame, f, i).value();
  out[3] = f.derivative(0).value();
  return out;
}

Vec3 raise(const FrameData& frame, const Vec3& v) {
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    out[i] = frame.gbar_inv[i][0] * v[0] + frame.gbar_inv[i][1] * v[1] + frame.gbar_inv[i][2] * v[2];
  }
  return out;
}

Mat3 raise_first(const FrameData& frame, const Mat3& m) {
  Mat3 out;
  for (int h = 0; h < 3; ++h) {
    for (int j = 0; j < 3; ++j) {
      out[h][j] = frame.gbar_inv[h][0] * m[0][j] + frame.gbar_inv[h][1] * m[1][j] + frame.gbar_inv[h][2] * m[2][j];
    }
  }
  return out;
}

Jet contract(const FrameData& frame, const Mat3& m) {
  Jet s;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) s += frame.gbar_inv[i][j] * m[i][j];
  }
  return s;
}

Jet full_contract(const FrameData& frame, const Mat3& x, const Mat3& y) {
  const Mat3 y1 = raise_first(frame, y);  // y^h_k
  Jet s;
  for (int h = 0; h < 3; ++h) {
    for (int k = 0; k < 3; ++k) {
      Jet yhk;  // y^{hk}
      for (int l = 0; l < 3; ++l) yhk += y1[h][l] * frame.gbar_inv[l][k];
      s += x[h][k] * yhk;
    }
  }
  return s;
}

KinematicSet compute_kinematics(const FrameData& frame) {
  if (frame.order < 2) {
    throw Error(ErrorKind::OrderExhausted, "kinematics need a frame of jet order >= 2");
  }
  KinematicSet k;
  const Jet phi2 = frame.phi * frame.phi;
  const Jet inv_phi = reciprocal(frame.phi);
  std::array<Vec3, 3> dA;  // dA[i][j] = delta_i A_j
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) dA[i][j] = delta(frame, frame.A[j], i);
  }
  for (int i = 0; i < 3; ++i) {
    k.omega[i][i] = Jet::constant(0.0, frame.order - 1);
    for (int j = i + 1; j < 3; ++j) {
      k.omega[i][j] = 0.5 * (dA[i][j] - dA[j][i]);
      k.omega[j][i] = -k.omega[i][j];
    }
  }
  for (int i = 0; i < 3; ++i) {
    k.c[i] = inv_phi * delta(frame, frame.phi, i);
    k.a[i] = -frame.A[i].derivative(0);
    k.b[i] = k.a[i] + k.c[i];
  }
  k.psi = inv_phi * frame.phi.derivative(0);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      k.theta[i][j] = 0.5 * frame.gbar[i][j].derivative(0);
      k.theta[j][i] = k.theta[i][j];
    }
  }
  k.theta_trace = contract(frame, k.theta);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      k.sigma[i][j] = k.theta[i][j] - (1.0 / 3.0) * k.theta_trace * frame.gbar[i][j];
      k.K[i][j] = k.theta[i][j] + phi2 * k.omega[i][j];
    }
  }
  k.K_mixed = raise_first(frame, k.K);
  k.theta_mixed = raise_first(frame, k.theta);
  k.omega_mixed = raise_first(frame, k.omega);
  k.b_up = raise(frame, k.b);
  k.sigma2 = full_contract(frame, k.sigma, k.sigma);
  k.omega2 = full_contract(frame, k.omega, k.omega);
  k.b2 = k.b[0] * k.b_up[0] + k.b[1] * k.b_up[1] + k.b[2] * k.b_up[2];
  return k;
}

}  // namespace threadsplit
