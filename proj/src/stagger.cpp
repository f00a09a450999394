#include "pffrac/stagger.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pffrac/log.hpp"

namespace pffrac {

FieldState FieldState::initial(const Mesh& mesh) {
  FieldState state;
  state.u.assign(static_cast<std::size_t>(2 * mesh.node_count()), 0.0);
  state.s.assign(static_cast<std::size_t>(mesh.node_count()), 1.0);
  state.h = QuadHistory(mesh.triangle_count());
  return state;
}

void LoadSchedule::validate() const {
  if (!(dv_fine > 0.0 && dv_fine <= dv_coarse)) {
    throw ParameterError("LoadSchedule: need 0 < dv_fine <= dv_coarse");
  }
  if (!(switch_at > 0.0 && switch_at < v_max)) {
    throw ParameterError("LoadSchedule: need 0 < switch_at < v_max");
  }
  if (max_inner < 1) throw ParameterError("LoadSchedule: max_inner must be >= 1");
  if (!(stag_tol > 0.0)) throw ParameterError("LoadSchedule: stag_tol must be positive");
}

DirichletSet build_dirichlet(const Mesh& mesh, const std::vector<BoundaryRule>& rules,
                             double v_app) {
  DirichletSet bc;
  for (const BoundaryRule& rule : rules) {
    const TaggedEntities ents = entities_with_tag(mesh, rule.tag);
    const double value = rule.kind == BoundaryRule::Kind::ramp ? -rule.scale * v_app : 0.0;
    for (int node : ents.nodes) {
      bc.add(DofMap::vector(node, rule.axis), value);
    }
  }
  bc.finalize();
  return bc;
}

std::vector<double> step_phase_field(const FieldState& state, const Mesh& mesh,
                                     const MaterialParams& m) {
  AssembledSystem sys = assemble_phase_field(mesh, state.h, m);
  // Tighter than the CG default: nodal values of s carry a 1e-10 contract.
  CgOptions opts;
  opts.rel_tol = 1e-12;
  return cg_solve(sys.matrix, sys.rhs, opts, nullptr, state.s);
}

std::vector<double> step_displacement(const FieldState& state, const Mesh& mesh,
                                      const MaterialParams& m,
                                      const std::vector<BoundaryRule>& rules, double v_app,
                                      std::span<const double> s) {
  AssembledSystem sys = assemble_displacement(mesh, state.u, s, m);
  const DirichletSet bc = build_dirichlet(mesh, rules, v_app);
  apply_dirichlet(sys, bc);
  return cg_solve(sys.matrix, sys.rhs, {}, nullptr, state.u);
}

double stag_residual(const FieldState& state, const Mesh& mesh, const MaterialParams& m) {
  const QuadratureRule& rule = QuadratureRule::triangle3();
  double a_form = 0.0;
  double b_form = 0.0;
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const ElementGeometry geom = element_gradients(mesh, e);
    const auto& tri = mesh.triangles[static_cast<std::size_t>(e)];

    double gx = 0.0, gy = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double si = state.s[static_cast<std::size_t>(tri[i])];
      gx += geom.grad[i][0] * si;
      gy += geom.grad[i][1] * si;
    }

    for (int q = 0; q < 3; ++q) {
      const double cq = rule.weights[static_cast<std::size_t>(q)] * 2.0 * geom.area;
      double sq = 0.0;
      for (int i = 0; i < 3; ++i) {
        sq += rule.bary[static_cast<std::size_t>(q)][static_cast<std::size_t>(i)] *
              state.s[static_cast<std::size_t>(tri[i])];
      }
      a_form += cq * (m.Gc * m.ls * (gx * gx + gy * gy) +
                      (2.0 * state.h.at(e, q) + m.Gc / m.ls) * sq * sq);
      b_form += cq * (m.Gc / m.ls) * sq;
    }
  }
  if (b_form == 0.0) {
    throw ParameterError("stag_residual: degenerate state, b_PF(s) vanished");
  }
  return std::abs(a_form - b_form) / std::abs(b_form);
}

LoadHistory run_load_stepping(const Mesh& mesh, const MaterialParams& m,
                              const LoadSchedule& sched, const RunSetup& setup,
                              const StepSink& sink, RunStats* stats) {
  sched.validate();

  FieldState state = FieldState::initial(mesh);
  LoadHistory history;
  history.pairs.push_back({0.0, 0.0});

  RunStats local_stats;
  RunStats& st = stats ? *stats : local_stats;
  st = RunStats{};

  std::vector<double> h_before;
  double v_app = 0.0;
  double dv = sched.dv_coarse;
  int step = 0;

  while (v_app < sched.v_max) {
    if (v_app >= sched.switch_at) dv = sched.dv_fine;
    v_app += dv;
    ++step;

    if (setup.audit_history) h_before = state.h.data();

    int inner_used = sched.max_inner;
    double exit_residual = std::numeric_limits<double>::quiet_NaN();
    bool converged = false;
    for (int inner = 1; inner <= sched.max_inner; ++inner) {
      const double residual = stag_residual(state, mesh, m);

      try {
        state.s = step_phase_field(state, mesh, m);
      } catch (const SolverError& err) {
        throw SolverError("phase-field solve failed at step " + std::to_string(step) +
                              ", inner " + std::to_string(inner) + ": " + err.what(),
                          err.residual);
      }
      if (setup.clamp_s) {
        for (double& v : state.s) v = std::clamp(v, 0.0, 1.0);
      }
      for (double v : state.s) {
        st.max_s = std::max(st.max_s, v);
        st.min_s = std::min(st.min_s, v);
      }

      try {
        state.u = step_displacement(state, mesh, m, setup.dirichlet, v_app, state.s);
      } catch (const SolverError& err) {
        throw SolverError("displacement solve failed at step " + std::to_string(step) +
                              ", inner " + std::to_string(inner) + ": " + err.what(),
                          err.residual);
      }

      for (int e = 0; e < mesh.triangle_count(); ++e) {
        const ElementGeometry geom = element_gradients(mesh, e);
        const SymTensor2 eps = element_strain(mesh, geom, state.u, e);
        const double psi = psi_plus(eps, m);
        for (int q = 0; q < 3; ++q) {
          state.h.at(e, q) = update_history(state.h.at(e, q), psi);
        }
      }

      if (residual < sched.stag_tol) {
        inner_used = inner;
        exit_residual = residual;
        converged = true;
        break;
      }
      exit_residual = residual;
    }
    if (!converged) ++st.tolerance_misses;

    if (setup.audit_history) {
      const auto& h_now = state.h.data();
      for (std::size_t i = 0; i < h_now.size(); ++i) {
        if (h_now[i] < h_before[i]) ++st.history_violations;
      }
    }

    const Reaction r = reaction_force(mesh, setup.load_tag, state.u, state.s, m);
    const double load = -r.fy;
    history.pairs.push_back({v_app, load});
    state.v_app = v_app;
    state.step = step;

    if (log::enabled(log::Level::info)) {
      char line[160];
      std::snprintf(line, sizeof(line),
                    "step %4d  vApp % .6e  inner %2d  residual % .3e  load % .6e", step,
                    v_app, inner_used, exit_residual, load);
      log::info(line);
    }

    if (sink && setup.snapshot_stride > 0 && step % setup.snapshot_stride == 0) {
      StepRecord record;
      record.step = step;
      record.v_app = v_app;
      record.inner_iterations = inner_used;
      record.exit_residual = exit_residual;
      record.load = load;
      record.u = &state.u;
      record.s = &state.s;
      record.h = &state.h;
      sink(record);
    }
  }

  st.steps = step;
  return history;
}

}  // namespace pffrac
