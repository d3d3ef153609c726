#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <optional>
#include <thread>

#include "threadsplit/cosmology.hpp"
#include "threadsplit/efe.hpp"
#include "threadsplit/error.hpp"
#include "threadsplit/oracle.hpp"
#include "threadsplit/pipeline.hpp"
#include "threadsplit/spatial.hpp"
#include "threadsplit/structure.hpp"

namespace threadsplit {

namespace {

void compare(MaxAbs& m, const SpatialTensor& split, const SpatialTensor& oracle) {
  for (int n = 0; n < split.size(); ++n) m.add_relative(split.flat(n).value(), oracle.flat(n).value());
}

void record_compare(ResidualBlock& out, const std::string& name, const SpatialTensor& split,
                    const SpatialTensor& oracle) {
  MaxAbs m;
  compare(m, split, oracle);
  out.record(name, m.value());
}

double ricci_gap(const RicciSet& r, const RicciSet& o) {
  MaxAbs m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m.add_relative(r.ricci[i][j].value(), o.ricci[i][j].value());
    m.add_relative(r.r_i0[i].value(), o.r_i0[i].value());
  }
  m.add_relative(r.r_00.value(), o.r_00.value());
  return m.value();
}

bool is_point_error(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotLorentzian:
    case ErrorKind::SingularSpatialMetric:
    case ErrorKind::SingularMetric:
    case ErrorKind::DivisionByZeroAtPoint:
    case ErrorKind::DomainErrorAtPoint:
    case ErrorKind::InvalidMatter:
      return true;
    default:
      return false;
  }
}

// Runs one group; order exhaustion becomes a flag, anything else propagates.
bool run_group(ResidualBlock& out, const char* group, const std::function<void()>& body) {
  try {
    body();
    return true;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::OrderExhausted) throw;
    out.flag(std::string("order-exhausted:") + group);
    return false;
  }
}

ResidualBlock filtered(const ResidualBlock& all, const std::vector<std::string>& checks) {
  if (checks.empty()) return all;
  ResidualBlock out;
  for (const auto& [name, r] : all.entries()) {
    if (check_selected(checks, name)) out.record(name, r.value, r.kind, r.detail);
  }
  for (const auto& f : all.flags()) {
    const auto colon = f.find(':');
    const std::string tail = colon == std::string::npos ? f : f.substr(colon + 1);
    const auto space = tail.find(' ');
    const std::string key = tail.substr(0, space);
    if (f.rfind("order-exhausted:", 0) == 0 || check_selected(checks, key)) out.flag(f);
  }
  return out;
}

}  // namespace

const char* to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Ok:
      return "ok";
    case PointStatus::Violation:
      return "violation";
    case PointStatus::InputError:
      return "input-error";
  }
  return "ok";
}

bool check_selected(const std::vector<std::string>& checks, const std::string& name) {
  if (checks.empty()) return true;
  for (const auto& c : checks) {
    if (name.rfind(c, 0) == 0) return true;
  }
  return false;
}

PointResult evaluate_point(const MetricSpec& spec, const Point& x, const RunOptions& options) {
  PointResult result;
  result.x = x;
  ResidualBlock all;
  try {
    const FrameData frame = eval_frame(spec, x, options.order);
    std::optional<SplitPoint> sp;
    if (!run_group(all, "kinematics", [&] {
          SplitPoint s;
          s.frame = frame;
          s.kin = compute_kinematics(s.frame);
          s.conn = spatial_connection(s.frame);
          s.curv = spatial_curvature(s.conn, s.kin, s.frame);
          s.der = kinematic_derivatives(s.frame, s.kin, s.conn);
          sp = std::move(s);
          all.merge(kinematic_residuals(sp->frame, sp->kin, sp->conn));
        })) {
      sp.reset();
    }

    std::optional<Metric4> m4;
    std::optional<Riemann4> r4;
    std::optional<OracleProjection> proj;
    run_group(all, "oracle", [&] {
      m4 = assemble_metric4(frame);
      r4 = riemann4(*m4);
      proj = project_frame(*r4, frame);
      all.merge(oracle_self_checks(*m4, *r4));
    });

    if (sp) {
      run_group(all, "bianchi", [&] { all.merge(bianchi_residuals(sp->curv, sp->conn, sp->kin, sp->frame)); });

      std::optional<FullCurvature> kf, tf;
      run_group(all, "structure", [&] {
        kf = curvature_from_split(*sp, CurvatureSource::SplitK);
        tf = curvature_from_split(*sp, CurvatureSource::SplitTheta);
        all.merge(structure_residuals(*sp, *kf, *tf));
        all.merge(curvature_identity_residuals(*sp, *kf));
        if (proj) {
          record_compare(all, "oracle.4.5a", kf->iljk, proj->full.iljk);
          record_compare(all, "oracle.4.5b", kf->i0jk, proj->full.i0jk);
          record_compare(all, "oracle.4.5c", kf->il0k, proj->full.il0k);
          record_compare(all, "oracle.4.5d", kf->i00k, proj->full.i00k);
          record_compare(all, "oracle.4.6a", tf->iljk, proj->full.iljk);
          record_compare(all, "oracle.4.6b", tf->i0jk, proj->full.i0jk);
          record_compare(all, "oracle.4.6c", tf->il0k, proj->full.il0k);
          record_compare(all, "oracle.4.6d", tf->i00k, proj->full.i00k);
        }
      });

      std::optional<RicciSet> r56, r57;
      run_group(all, "ricci", [&] {
        r56 = ricci_split(*sp, RicciForm::Via56);
        r57 = ricci_split(*sp, RicciForm::Via57);
        all.merge(ricci_residuals(*sp, *r56, *r57));
        if (proj) {
          all.record("oracle.ricci.5.6", ricci_gap(*r56, proj->ricci));
          all.record("oracle.ricci.5.7", ricci_gap(*r57, proj->ricci));
          const double o = proj->ricci.scalar.value();
          all.record("oracle.scalar.5.11", (r56->scalar.value() - o) / std::fmax(1.0, std::fabs(o)));
          const Vec3 div = ricci_i0_divergence(*sp);
          MaxAbs m;
          for (int i = 0; i < 3; ++i) m.add_relative(div[i].value(), proj->ricci.r_i0[i].value());
          all.record("oracle.ricci.R_i0-divergence", m.value());
        }
      });

      std::optional<EinsteinSet> G;
      run_group(all, "einstein", [&] {
        G = einstein_split(*sp);
        if (r56) all.merge(einstein_residuals(*G, einstein_from_ricci(*r56, ricci_symmetric(*sp), sp->frame)));
        if (proj) {
          MaxAbs m;
          for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m.add_relative(G->G_ij[i][j].value(), proj->G_ij[i][j].value());
            m.add_relative(G->G_i0[i].value(), proj->G_i0[i].value());
          }
          m.add_relative(G->G_00.value(), proj->G_00.value());
          all.record("oracle.einstein.6.3", m.value());
        }
      });

      if (G) {
        const StressEnergy T = stress_energy(spec, *sp, *G);
        const FluidSplit fluid = fluid_split(T, sp->frame);
        std::optional<EfeResiduals> efe;
        run_group(all, "efe", [&] {
          const EfeInput in{*sp, *G, T, fluid, spec.lambda, spec.newton_g};
          all.merge(efe_residuals(in));
          efe = efe_components(in);
        });
        run_group(all, "conservation", [&] {
          all.merge(conservation_residuals(*sp, T, fluid));
          if (m4 && r4 && r4->einstein[0][0].order() >= 1) {
            const ConservationValues cv = conservation_values(*sp, T, fluid);
            const Vec4 div = divergence4(coordinate_tensor(T.T00, T.Ti0, T.Tij, sp->frame), *m4, *r4);
            const auto fd = frame_divergence(div, sp->frame);
            const double phi2 = (sp->frame.phi * sp->frame.phi).value();
            all.record("oracle.cons.8.2",
                       (cv.energy.value() - phi2 * fd[0]) / std::fmax(1.0, std::fabs(phi2 * fd[0])));
            MaxAbs m;
            for (int i = 0; i < 3; ++i) m.add_relative(cv.momentum[i].value(), phi2 * fd[i + 1]);
            all.record("oracle.cons.8.3", m.value());
          }
        });
        if (r4) {
          // Acceleration of U = Phi^-1 d_0 is spatial and equals b^k delta_k.
          const double phi2 = (sp->frame.phi * sp->frame.phi).value();
          MaxAbs m;
          double temporal = r4->gamma[0][0][0].value();
          for (int k = 0; k < 3; ++k) {
            const double bk = r4->gamma[k + 1][0][0].value() / phi2;
            m.add_relative(bk, sp->kin.b_up[k].value());
            temporal += sp->frame.A[k].value() * r4->gamma[k + 1][0][0].value();
          }
          m.add((temporal - sp->kin.psi.value()) / phi2);
          all.record("oracle.acceleration.8.7", m.value());
        }
        if (spec.cosmology && efe) {
          run_group(all, "cosmology", [&] { all.merge(cosmology_residuals(spec, *sp, *G, fluid, *efe)); });
        }
      }
    }
  } catch (const Error& e) {
    if (!is_point_error(e.kind())) throw;
    result.status = PointStatus::InputError;
    const std::string kind = to_string(e.kind());
    const std::string what = e.what();
    result.error = what.rfind(kind, 0) == 0 ? what : kind + ": " + what;
    result.residuals = filtered(all, options.checks);
    return result;
  }

  ResidualBlock out = filtered(all, options.checks);
  bool violation = false;
  for (const auto& [name, r] : out.entries()) {
    const bool bad = std::isnan(r.value) || r.value > options.tol;
    if (!bad) continue;
    if (r.kind == ResidualKind::Probe) {
      out.flag("PAPER-DISCREPANCY:" + name + (r.detail.empty() ? "" : " " + r.detail));
    } else {
      violation = true;
    }
  }
  result.residuals = std::move(out);
  result.status = violation ? PointStatus::Violation : PointStatus::Ok;
  return result;
}

std::vector<PointResult> evaluate_points(const MetricSpec& spec, const std::vector<Point>& points,
                                         const RunOptions& options, int threads) {
  std::vector<PointResult> results(points.size());
  if (threads < 1) threads = 1;
  const int n = static_cast<int>(points.size());
  threads = std::min(threads, std::max(n, 1));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    while (!failed.load()) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        results[i] = evaluate_point(spec, points[i], options);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace threadsplit
