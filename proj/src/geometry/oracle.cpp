#include <cmath>

#include "threadsplit/error.hpp"
#include "threadsplit/jet_linalg.hpp"
#include "threadsplit/oracle.hpp"

namespace threadsplit {

namespace {

int flat4(int a, int b, int c, int d) { return ((a * 4 + b) * 4 + c) * 4 + d; }

// Contract every slot of a rank-r coordinate tensor with the threading frame:
// slot value 0 stays d_0, slot value i+1 becomes delta_i = d_i - A_i d_0.
std::vector<Jet> to_frame(std::vector<Jet> t, int rank, const FrameData& frame) {
  int stride = 1;
  for (int s = rank - 1; s >= 0; --s) {
    const int n = static_cast<int>(t.size());
    for (int idx = 0; idx < n; ++idx) {
      const int digit = (idx / stride) % 4;
      if (digit == 0) continue;
      const int base = idx - digit * stride;
      t[idx] -= frame.A[digit - 1] * t[base];
    }
    stride *= 4;
  }
  return t;
}

}  // namespace

Metric4 assemble_metric4(const FrameData& frame) {
  Metric4 m;
  m.g[0][0] = -(frame.phi * frame.phi);
  for (int i = 0; i < 3; ++i) {
    m.g[0][i + 1] = frame.xi[i];
    m.g[i + 1][0] = frame.xi[i];
    for (int j = 0; j < 3; ++j) m.g[i + 1][j + 1] = frame.g[i][j];
  }
  m.g_inv = invert<4>(m.g, ErrorKind::SingularMetric);
  return m;
}

Riemann4 riemann4(const Metric4& m) {
  if (m.g[0][0].order() < 2) throw Error(ErrorKind::OrderExhausted, "the 4D curvature needs jet order >= 2");
  Riemann4 r;
  std::array<Mat4, 4> dg;  // dg[c][a][b] = d_c g_ab
  for (int c = 0; c < 4; ++c) {
    for (int a = 0; a < 4; ++a) {
      for (int b = a; b < 4; ++b) {
        dg[c][a][b] = m.g[a][b].derivative(c);
        dg[c][b][a] = dg[c][a][b];
      }
    }
  }
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = b; c < 4; ++c) {
        Jet s;
        for (int d = 0; d < 4; ++d) s += m.g_inv[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
        r.gamma[a][b][c] = 0.5 * s;
        r.gamma[a][c][b] = r.gamma[a][b][c];
      }
    }
  }
  std::array<std::array<Mat4, 4>, 4> dgam;  // dgam[c][a][b][d] = d_c Gamma^a_{bd}
  for (int c = 0; c < 4; ++c) {
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int d = 0; d < 4; ++d) dgam[c][a][b][d] = r.gamma[a][b][d].derivative(c);
      }
    }
  }
  r.riemann.assign(256, Jet());
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        for (int d = 0; d < 4; ++d) {
          Jet v = dgam[c][a][d][b] - dgam[d][a][c][b];
          for (int e = 0; e < 4; ++e) v += r.gamma[a][c][e] * r.gamma[e][d][b] - r.gamma[a][d][e] * r.gamma[e][c][b];
          r.riemann[flat4(a, b, c, d)] = v;
        }
      }
    }
  }
  r.lower.assign(256, Jet());
  for (int a = 0; a < 4; ++a) {
    for (int n = 0; n < 64; ++n) {
      Jet s;
      for (int e = 0; e < 4; ++e) s += m.g[a][e] * r.riemann[e * 64 + n];
      r.lower[a * 64 + n] = s;
    }
  }
  for (int b = 0; b < 4; ++b) {
    for (int d = 0; d < 4; ++d) {
      Jet s;
      for (int c = 0; c < 4; ++c) s += r.R(c, b, c, d);
      r.ricci[b][d] = s;
    }
  }
  Jet s;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) s += m.g_inv[a][b] * r.ricci[a][b];
  }
  r.scalar = s;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) r.einstein[a][b] = r.ricci[a][b] - 0.5 * r.scalar * m.g[a][b];
  }
  return r;
}

OracleProjection project_frame(const Riemann4& r, const FrameData& frame) {
  OracleProjection p;
  const std::vector<Jet> R = to_frame(r.lower, 4, frame);
  std::vector<Jet> ric(16), ein(16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      ric[a * 4 + b] = r.ricci[a][b];
      ein[a * 4 + b] = r.einstein[a][b];
    }
  }
  ric = to_frame(std::move(ric), 2, frame);
  ein = to_frame(std::move(ein), 2, frame);

  // R(X, Y, Z, U) = g(R(X, Y)U, Z) = R_{ZUXY}; R_{iljk} = R(delta_k, delta_j, delta_l, delta_i).
  auto& f = p.full;
  f.source = CurvatureSource::Oracle;
  for (int i = 0; i < 3; ++i) {
    for (int l = 0; l < 3; ++l) {
      for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) f.iljk({i, l, j, k}) = R[flat4(l + 1, i + 1, k + 1, j + 1)];
        f.i0jk({i, l, k}) = R[flat4(0, i + 1, k + 1, l + 1)];
        f.il0k({i, l, k}) = R[flat4(l + 1, i + 1, k + 1, 0)];
      }
      f.i00k({i, l}) = R[flat4(0, i + 1, l + 1, 0)];
    }
  }
  p.ricci.source = CurvatureSource::Oracle;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      p.ricci.ricci[i][j] = ric[(j + 1) * 4 + i + 1];
      p.G_ij[i][j] = ein[(j + 1) * 4 + i + 1];
    }
    p.ricci.r_i0[i] = ric[i + 1];
    p.G_i0[i] = ein[i + 1];
  }
  p.ricci.r_00 = ric[0];
  p.ricci.scalar = r.scalar;
  p.G_00 = ein[0];
  return p;
}

Vec4 divergence4(const Mat4& T, const Metric4& m, const Riemann4& r) {
  Vec4 out;
  for (int b = 0; b < 4; ++b) {
    Jet s;
    for (int a = 0; a < 4; ++a) {
      for (int c = 0; c < 4; ++c) {
        Jet v = T[a][b].derivative(c);
        for (int e = 0; e < 4; ++e) v -= r.gamma[e][c][a] * T[e][b] + r.gamma[e][c][b] * T[a][e];
        s += m.g_inv[a][c] * v;
      }
    }
    out[b] = s;
  }
  return out;
}

Mat4 coordinate_tensor(const Jet& t00, const Vec3& ti0, const Mat3& tij, const FrameData& frame) {
  const auto& A = frame.A;
  Mat4 t;
  t[0][0] = t00;
  for (int i = 0; i < 3; ++i) {
    t[0][i + 1] = ti0[i] + A[i] * t00;
    t[i + 1][0] = t[0][i + 1];
    for (int j = 0; j < 3; ++j) {
      t[i + 1][j + 1] = tij[i][j] + A[i] * ti0[j] + A[j] * ti0[i] + A[i] * A[j] * t00;
    }
  }
  return t;
}

std::array<double, 4> frame_divergence(const Vec4& div, const FrameData& frame) {
  std::array<double, 4> out{};
  out[0] = div[0].value();
  for (int i = 0; i < 3; ++i) out[i + 1] = div[i + 1].value() - frame.A[i].value() * div[0].value();
  return out;
}

ResidualBlock oracle_self_checks(const Metric4& m, const Riemann4& r) {
  ResidualBlock out;
  MaxAbs inv;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      double s = 0.0;
      for (int c = 0; c < 4; ++c) s += m.g[a][c].value() * m.g_inv[c][b].value();
      inv.add(s - (a == b ? 1.0 : 0.0));
    }
  }
  out.record("oracle.metric-inverse", inv.value());

  MaxAbs first, pair;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        for (int d = 0; d < 4; ++d) {
          first.add((r.R(a, b, c, d) + r.R(a, c, d, b) + r.R(a, d, b, c)).value());
          const double v = r.Rlow(a, b, c, d).value();
          pair.add(v + r.Rlow(b, a, c, d).value());
          pair.add(v + r.Rlow(a, b, d, c).value());
          pair.add(v - r.Rlow(c, d, a, b).value());
        }
      }
    }
  }
  out.record("oracle.first-bianchi", first.value());
  out.record("oracle.pair-symmetry", pair.value());

  if (r.einstein[0][0].order() >= 1) {
    const Vec4 div = divergence4(r.einstein, m, r);
    MaxAbs cb;
    for (const auto& x : div) cb.add(x.value());
    out.record("oracle.contracted-bianchi", cb.value());
  }
  return out;
}

}  // namespace threadsplit
