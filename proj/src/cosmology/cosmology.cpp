#include "threadsplit/cosmology.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "threadsplit/error.hpp"

namespace threadsplit {

namespace {

constexpr double kPi = std::numbers::pi;

std::string wrap(const std::string& e) { return "(" + e + ")"; }

void check_text(const std::string& what, const std::string& e) {
  if (e.empty()) throw Error(ErrorKind::Input, "cosmo: " + what + " is empty");
  if (e.find_first_of("\n\r#[]=") != std::string::npos) {
    throw Error(ErrorKind::Input, "cosmo: " + what + " contains a character not allowed in an expression");
  }
}

std::string real_text(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string pair_text(double closed, double engine) {
  return "closed=" + real_text(closed) + " engine=" + real_text(engine);
}

// Largest difference seen so far, with the two values that produced it.
struct Worst {
  double gap = -1.0, closed = 0.0, engine = 0.0;
  void add(double d, double c, double e) {
    if (std::fabs(d) > gap) {
      gap = std::fabs(d);
      closed = c;
      engine = e;
    }
  }
  std::string detail() const { return pair_text(closed, engine); }
};

// Value and the partials the closed forms need, all at the point.
struct Field {
  double v = 0.0;
  double t = 0.0;   // d_0
  double tt = 0.0;  // d_0 d_0
  std::array<double, 3> s{};                 // d_i
  std::array<double, 3> ts{};                // d_0 d_i
  std::array<std::array<double, 3>, 3> ss{}; // d_i d_j
  double grad2 = 0.0;  // sum_k (d_k)^2
  double lap = 0.0;    // sum_k d_k d_k
  bool zero = false;   // the whole jet vanishes
};

Field field(const Jet& j) {
  Field f;
  f.v = j.value();
  const Jet jt = j.derivative(0);
  f.t = jt.value();
  f.tt = jt.derivative(0).value();
  for (int i = 0; i < 3; ++i) {
    const Jet ji = j.derivative(i + 1);
    f.s[i] = ji.value();
    f.ts[i] = jt.derivative(i + 1).value();
    for (int k = 0; k < 3; ++k) f.ss[i][k] = ji.derivative(k + 1).value();
    f.grad2 += f.s[i] * f.s[i];
    f.lap += f.ss[i][i];
  }
  f.zero = true;
  for (double c : j.coefficients()) f.zero = f.zero && c == 0.0;
  return f;
}

double kd(int i, int j) { return i == j ? 1.0 : 0.0; }

class Tally {
 public:
  explicit Tally(ClosedFormSet& set) : set_(set) {}
  void add(const std::string& name, double closed, double engine) {
    const double err = std::fabs(closed - engine) / std::fmax(1.0, std::fabs(engine));
    auto [it, fresh] = set_.max_error.try_emplace(name, err);
    if (fresh || err > it->second || std::isnan(err)) {
      it->second = err;
      set_.worst[name] = {closed, engine};
    }
  }

 private:
  ClosedFormSet& set_;
};

struct Inputs {
  double a, H, Hp;
  Field A, B;
  bool same;  // A and B are the same potential
};

Inputs inputs(const CosmologyHint& hint, const MetricSpec& spec, const SplitPoint& sp) {
  const JetEnv env = seed_point(sp.frame.point, sp.frame.order);
  const Jet a = eval_expr(hint.a, env, spec.params);
  for (int i = 1; i < kDim; ++i) {
    if (a.derivative(i).value() != 0.0) throw Error(ErrorKind::DomainErrorAtPoint, "DomainError: scale factor a varies along space at the point");
  }
  Inputs in;
  in.a = a.value();
  if (!(in.a > 0.0)) throw Error(ErrorKind::DomainErrorAtPoint, "DomainError: scale factor a <= 0 at the point");
  const double ap = a.derivative(0).value();
  const double app = a.derivative(0).derivative(0).value();
  in.H = ap / in.a;
  in.Hp = app / in.a - in.H * in.H;
  in.A = field(eval_expr(hint.A, env, spec.params));
  in.same = hint.perfect_fluid || hint.A.structurally_equal(hint.B);
  in.B = in.same ? in.A : field(eval_expr(hint.B, env, spec.params));
  if (!(std::fabs(2.0 * in.A.v) < 1.0) || !(std::fabs(2.0 * in.B.v) < 1.0)) {
    throw Error(ErrorKind::DomainErrorAtPoint, "DomainError: |2A| or |2B| is not below 1 at the point");
  }
  return in;
}

}  // namespace

std::string build_metric_text(const AlmostFlrw& c) {
  check_text("a", c.a);
  check_text("A", c.A);
  const std::string B = c.perfect_fluid ? c.A : c.B;
  check_text("B", B);
  const bool explicit_matter = !c.rho.empty() || !c.p.empty();
  if (explicit_matter) {
    check_text("rho", c.rho);
    check_text("p", c.p);
  }
  std::string t;
  t += "[metric]\n";
  t += "Phi = sqrt(" + wrap(c.a) + "^2*(1+2*" + wrap(c.A) + "))\n";
  const std::string gii = wrap(c.a) + "^2*(1-2*" + wrap(B) + ")";
  t += "g11 = " + gii + "\n";
  t += "g22 = " + gii + "\n";
  t += "g33 = " + gii + "\n";
  t += "\n[matter]\n";
  if (explicit_matter) {
    t += "mode = explicit\nrho = " + c.rho + "\np = " + c.p + "\n";
  } else {
    t += "mode = from_efe\n";
  }
  t += "\n[constants]\n";
  t += "lambda = " + real_text(c.lambda) + "\n";
  t += "newton_g = " + real_text(c.newton_g) + "\n";
  t += "\n[cosmology]\n";
  t += "a = " + c.a + "\nA = " + c.A + "\nB = " + B + "\n";
  t += std::string("perfect_fluid = ") + (c.perfect_fluid ? "true" : "false") + "\n";
  return t;
}

MetricSpec build_metric(const AlmostFlrw& c) { return load_spec(build_metric_text(c)); }

ClosedFormSet closed_forms(const CosmologyHint& hint, const MetricSpec& spec, const SplitPoint& sp) {
  const Inputs in = inputs(hint, spec, sp);
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  const auto& d = sp.der;
  const auto& A = in.A;
  const auto& B = in.B;
  const double a2 = in.a * in.a;
  const double H = in.H;

  ClosedFormSet set;
  set.hubble = H;
  set.hubble_prime = in.Hp;
  Tally t(set);

  const double gfac = a2 * (1.0 - 2.0 * B.v);
  const double theta = 3.0 * (H - B.t / (1.0 - 2.0 * B.v));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      t.add("9.4d", gfac * kd(i, j), f.gbar[i][j].value());
      t.add("9.4e", kd(i, j) / gfac, f.gbar_inv[i][j].value());
      t.add("9.6a", a2 * ((1.0 - 2.0 * B.v) * H - B.t) * kd(i, j), k.theta[i][j].value());
      t.add("9.7a", 0.0, k.sigma[i][j].value());
      t.add("9.7b", theta / 3.0 * f.gbar[i][j].value(), k.theta[i][j].value());
    }
  }
  t.add("9.5", a2 * (1.0 + 2.0 * A.v), (f.phi * f.phi).value());
  t.add("9.6b", theta, k.theta_trace.value());
  t.add("9.6c", H + A.t / (1.0 + 2.0 * A.v), k.psi.value());
  t.add("9.8", theta / (3.0 * a2 * (1.0 + 2.0 * A.v)), k.theta_trace.value() / (3.0 * (f.phi * f.phi).value()));

  // Connection, curvature and Ricci of the leaves in terms of B.
  auto gamma = [](const Field& P, int kk, int i, int j) {
    return (kd(i, j) * P.s[kk] - kd(i, kk) * P.s[j] - kd(j, kk) * P.s[i]) / (1.0 - 2.0 * P.v);
  };
  for (int kk = 0; kk < 3; ++kk) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) t.add("C1", gamma(B, kk, i, j), sp.conn.gamma[kk][i][j].value());
    }
  }
  for (int i = 0; i < 3; ++i) {
    for (int h = 0; h < 3; ++h) {
      for (int j = 0; j < 3; ++j) {
        for (int kk = 0; kk < 3; ++kk) {
          double lin = kd(i, j) * B.ss[h][kk] + kd(h, kk) * B.ss[i][j] - kd(i, kk) * B.ss[h][j] -
                       kd(j, h) * B.ss[i][kk];
          double quad = 0.0;
          for (int l = 0; l < 3; ++l) {
            quad += (kd(i, kk) * B.s[l] - kd(i, l) * B.s[kk] - kd(kk, l) * B.s[i]) *
                        (kd(h, j) * B.s[l] - kd(h, l) * B.s[j] - kd(j, l) * B.s[h]) -
                    (kd(i, j) * B.s[l] - kd(i, l) * B.s[j] - kd(j, l) * B.s[i]) *
                        (kd(h, kk) * B.s[l] - kd(h, l) * B.s[kk] - kd(kk, l) * B.s[h]);
          }
          const double closed = a2 * lin + a2 / (1.0 - 2.0 * B.v) * quad;
          t.add("C5", closed, sp.curv.rbar_low({i, h, j, kk}).value());
        }
      }
    }
  }
  const double omb = 1.0 - 2.0 * B.v;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double closed =
          (kd(i, j) * B.grad2 + 3.0 * B.s[i] * B.s[j] + omb * (B.ss[i][j] + kd(i, j) * B.lap)) / (omb * omb);
      t.add("C6", closed, sp.curv.ricci[i][j].value());
    }
  }
  t.add("C7", 2.0 / (a2 * omb * omb * omb) * (3.0 * B.grad2 + 2.0 * omb * B.lap), sp.curv.scalar.value());

  if (!in.same) return set;

  // Perfect fluid: B is replaced by A from here on.
  const double opa = 1.0 + 2.0 * A.v;
  const double oma = 1.0 - 2.0 * A.v;
  const double q = 1.0 - 4.0 * A.v * A.v;
  for (int i = 0; i < 3; ++i) {
    t.add("9.10a", A.s[i] / opa, k.b[i].value());
    t.add("9.10a", A.s[i] / opa, k.c[i].value());
  }
  t.add("9.10b", A.grad2 / (a2 * q * opa), k.b2.value());
  for (int kk = 0; kk < 3; ++kk) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) t.add("9.11a", gamma(A, kk, i, j), sp.conn.gamma[kk][i][j].value());
    }
  }
  for (int h = 0; h < 3; ++h) {
    for (int j = 0; j < 3; ++j) t.add("9.11b", theta / 3.0 * kd(h, j), k.K_mixed[h][j].value());
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const double closed = (A.ss[i][j] + 8.0 * A.v / q * A.s[i] * A.s[j] - kd(i, j) * A.grad2 / oma) / opa;
      t.add("9.12a", closed, d.db({i, j}).value());
    }
  }
  t.add("9.12b", (A.lap + (2.0 * A.v - 3.0) / q * A.grad2) / (a2 * q), d.b_div.value());
  t.add("9.13a", 3.0 * (in.Hp - (2.0 * A.t * A.t + oma * A.tt) / (oma * oma)), d.theta_trace0.value());
  for (int i = 0; i < 3; ++i) {
    const double th_i = -3.0 / (oma * oma) * (2.0 * A.t * A.s[i] + oma * A.ts[i]);
    t.add("9.13b", th_i, d.dtheta_trace[i].value());
    double div = 0.0;
    for (int kk = 0; kk < 3; ++kk) {
      for (int l = 0; l < 3; ++l) div += f.gbar_inv[kk][l].value() * d.dTheta({l, i, kk}).value();
    }
    t.add("9.14b", th_i / 3.0, div);
    for (int j = 0; j < 3; ++j) {
      const double closed = a2 / oma * (oma * oma * in.Hp - oma * A.tt - 2.0 * A.t * A.t) * kd(i, j);
      t.add("9.14a", closed, d.Theta0({i, j}).value());
      const double gbar =
          (3.0 * A.s[i] * A.s[j] + oma * A.ss[i][j] - kd(i, j) * (2.0 * A.grad2 + oma * A.lap)) / (oma * oma);
      t.add("9.15", gbar, sp.curv.einstein[i][j].value());
    }
  }
  return set;
}

std::pair<double, double> friedmann_residuals(double a, double hubble, double hubble_prime, double rho, double p,
                                              double newton_g) {
  const double a2 = a * a;
  return {hubble * hubble - 8.0 * kPi * newton_g / 3.0 * a2 * rho,
          hubble_prime + 4.0 * kPi * newton_g / 3.0 * a2 * (rho + 3.0 * p)};
}

ResidualBlock cosmology_residuals(const MetricSpec& spec, const SplitPoint& sp, const EinsteinSet& G,
                                  const FluidSplit& fluid, const EfeResiduals& efe) {
  ResidualBlock out;
  const CosmologyHint& hint = *spec.cosmology;
  const ClosedFormSet set = closed_forms(hint, spec, sp);
  for (const auto& [name, err] : set.max_error) {
    const auto& [closed, engine] = set.worst.at(name);
    out.record("cosmo." + name, err, ResidualKind::Probe,
               pair_text(closed, engine));
  }

  // Shear-free, vorticity-free, totally umbilical leaves.
  const auto& f = sp.frame;
  const auto& k = sp.kin;
  MaxAbs shear, vort, umb;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      shear.add(k.sigma[i][j].value());
      vort.add(k.omega[i][j].value());
      umb.add(k.theta[i][j].value() - k.theta_trace.value() / 3.0 * f.gbar[i][j].value());
    }
  }
  out.record("cosmo.theorem.shear-free", shear.value());
  out.record("cosmo.theorem.vorticity-free", vort.value());
  out.record("cosmo.theorem.umbilic", umb.value());
  out.record("cosmo.theorem.mean-curvature", set.max_error.at("9.8"));

  const Inputs in = inputs(hint, spec, sp);
  const double rho = fluid.rho.value();
  const double p = fluid.p.value();
  const double g8 = 8.0 * kPi * spec.newton_g;
  const double lam = spec.lambda;

  if (in.same) {
    const Field& A = in.A;
    const double a2 = in.a * in.a;
    const double H = in.H;
    const double Hp = in.Hp;
    const double opa = 1.0 + 2.0 * A.v;
    const double oma = 1.0 - 2.0 * A.v;
    const double q = 1.0 - 4.0 * A.v * A.v;

    // The closed forms assume q = pi = 0. The general residuals are compared
    // with those terms dropped; the closed-form residuals themselves only
    // mean something when the fluid really is perfect.
    MaxAbs imperfect;
    for (int i = 0; i < 3; ++i) {
      imperfect.add(fluid.q[i].value());
      for (int j = 0; j < 3; ++j) imperfect.add(fluid.pi[i][j].value());
    }
    const bool perfect = imperfect.value() <= 1e-10 * std::fmax(1.0, std::fabs(rho) + std::fabs(p));
    if (!perfect) out.flag("cosmo.imperfect-fluid");
    const double phi = f.phi.value();

    MaxAbs r18, d18;
    Worst w18, w20;
    const double iso = (2.0 * A.tt + (6.0 + 4.0 * A.v) / opa * H * A.t + (6.0 * A.v - 1.0) / q * A.t * A.t -
                        oma * (H * H + 2.0 * Hp)) /
                           opa -
                       (4.0 * A.v * A.lap + (3.0 + 4.0 * A.v + 12.0 * A.v * A.v) / q * A.grad2) / q;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double lhs =
            2.0 / q * (2.0 * A.v * A.ss[i][j] + (1.0 + 4.0 * A.v + 12.0 * A.v * A.v) / q * A.s[i] * A.s[j]) +
            kd(i, j) * iso;
        const double res = lhs - (g8 * p - lam) * a2 * oma * kd(i, j);
        const double general = efe.sefe[i][j].value() + g8 * fluid.pi[i][j].value();
        r18.add(res);
        const double d = (res - general) / std::fmax(1.0, std::fabs(G.G_ij[i][j].value()));
        d18.add(d);
        w18.add(d, res, general);
      }
    }
    if (perfect) out.record("cosmo.9.18", r18.value(), ResidualKind::Probe);
    out.record("cosmo.9.18-vs-7.2", d18.value(), ResidualKind::Probe, w18.detail());

    MaxAbs r20, d20;
    for (int i = 0; i < 3; ++i) {
      const double res = (1.0 + 6.0 * A.v) * A.t * A.s[i] + q * A.ts[i] + oma * oma * H * A.s[i];
      const double general = efe.mefe_b[i].value() - g8 * phi * fluid.q[i].value();
      r20.add(res);
      const double scaled = 2.0 / (oma * oma * opa) * res;
      d20.add(scaled - general);
      w20.add(scaled - general, scaled, general);
    }
    if (perfect) out.record("cosmo.9.20", r20.value(), ResidualKind::Probe);
    out.record("cosmo.9.20-vs-7.3b", d20.value(), ResidualKind::Probe, w20.detail());

    const double th = H - A.t / oma;
    const double r21 = opa / (oma * oma * oma) * (3.0 * A.grad2 + 2.0 * oma * A.lap) + 3.0 * th * th -
                       a2 * opa * (lam + g8 * rho);
    if (perfect) out.record("cosmo.9.21", std::fabs(r21), ResidualKind::Probe);
    out.record("cosmo.9.21-vs-7.4", std::fabs(r21 - 0.5 * efe.tefe.value()), ResidualKind::Probe,
               pair_text(r21, 0.5 * efe.tefe.value()));

    const double r22 = 3.0 * (Hp - A.tt / oma - H * A.t / q - 4.0 * A.v * A.t * A.t / (oma * q)) -
                       (A.lap - 2.0 / q * A.grad2) / oma - a2 * opa * (lam - 0.5 * g8 * (rho + 3.0 * p));
    if (perfect) out.record("cosmo.9.22", std::fabs(r22), ResidualKind::Probe);
    out.record("cosmo.9.22-vs-7.6", std::fabs(r22 - efe.raychaudhuri.value()), ResidualKind::Probe,
               pair_text(r22, efe.raychaudhuri.value()));
    // With the H A' coefficient doubled the closed form follows from the general one.
    const double r22c = r22 - 3.0 * H * A.t / q;
    out.record("cosmo.9.22-corrected-vs-7.6", std::fabs(r22c - efe.raychaudhuri.value()) /
                                                  std::fmax(1.0, std::fabs(a2 * opa * (lam - 0.5 * g8 * (rho + 3.0 * p)))));
  } else {
    out.flag("cosmo.perturbed-efe-skipped:A-differs-from-B");
  }

  if (in.A.zero && in.B.zero && lam == 0.0) {
    const auto [f1, f2] = friedmann_residuals(in.a, in.H, in.Hp, rho, p, spec.newton_g);
    out.record("cosmo.friedmann.9.23", std::fabs(f1));
    out.record("cosmo.friedmann.9.24", std::fabs(f2));
  }
  return out;
}

}  // namespace threadsplit
