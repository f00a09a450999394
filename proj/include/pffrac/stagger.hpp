/** @file stagger.hpp
 *  @brief Quasi-static displacement-controlled driver with the staggered
 *         phase-field / displacement alternation and the history update.
 *
 *  Inner-loop order per iteration: measure the stationarity residual with
 *  the current state, solve the phase field, solve the displacement with
 *  the previous iterate's strain as branch selector, take the pointwise
 *  history maximum, then test the residual measured at the top. The
 *  residual therefore lags the solves by one iteration.
 */
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pffrac/fem.hpp"

namespace pffrac {

struct FieldState {
  std::vector<double> u;  // interleaved nodal displacement
  std::vector<double> s;  // nodal phase field, starts at 1
  QuadHistory h;          // starts at 0, pointwise nondecreasing
  double v_app = 0.0;
  int step = 0;

  static FieldState initial(const Mesh& mesh);
};

struct LoadSchedule {
  double v_max = 0.0;
  double dv_coarse = 0.0;
  double dv_fine = 0.0;
  double switch_at = 0.0;
  int max_inner = 10;
  double stag_tol = 1e-8;

  void validate() const;
};

struct LoadHistory {
  // (applied displacement, load = -Fy), starting with (0, 0)
  std::vector<std::pair<double, double>> pairs;
};

/// Per-axis Dirichlet rule on a tagged entity; "ramp" applies -scale*vApp.
struct BoundaryRule {
  std::string tag;
  int axis = 1;  // 0 = x, 1 = y
  enum class Kind { zero, ramp } kind = Kind::zero;
  double scale = 1.0;
};

/// Resolves the rules against the mesh for a given applied displacement.
DirichletSet build_dirichlet(const Mesh& mesh, const std::vector<BoundaryRule>& rules,
                             double v_app);

/// One phase-field solve with the current history; does not mutate state.
std::vector<double> step_phase_field(const FieldState& state, const Mesh& mesh,
                                     const MaterialParams& m);

/// One displacement solve: branch strain from state.u, damage from s.
std::vector<double> step_displacement(const FieldState& state, const Mesh& mesh,
                                      const MaterialParams& m,
                                      const std::vector<BoundaryRule>& rules, double v_app,
                                      std::span<const double> s);

/// |a_PF(s, s; H) - b_PF(s)| / |b_PF(s)| with the current s and H.
double stag_residual(const FieldState& state, const Mesh& mesh, const MaterialParams& m);

struct StepRecord {
  int step = 0;
  double v_app = 0.0;
  int inner_iterations = 0;
  double exit_residual = 0.0;
  double load = 0.0;  // -Fy on the load tag
  const std::vector<double>* u = nullptr;
  const std::vector<double>* s = nullptr;
  const QuadHistory* h = nullptr;
};

using StepSink = std::function<void(const StepRecord&)>;

struct RunStats {
  int steps = 0;
  int tolerance_misses = 0;  // inner loops that exhausted max_inner
  double max_s = 1.0;
  double min_s = 1.0;
  long long history_violations = 0;  // audit result, 0 by construction
};

struct RunSetup {
  std::vector<BoundaryRule> dirichlet;
  std::string load_tag;
  bool clamp_s = false;        // clamp the phase field into [0, 1] after solves
  int snapshot_stride = 1;     // emit every k-th step to the sink
  bool audit_history = false;  // re-check irreversibility per step
};

/// Full displacement-controlled run; returns the load history starting
/// with (0, 0). The sink (when set) receives every snapshot_stride-th step.
LoadHistory run_load_stepping(const Mesh& mesh, const MaterialParams& m,
                              const LoadSchedule& sched, const RunSetup& setup,
                              const StepSink& sink = {}, RunStats* stats = nullptr);

}  // namespace pffrac
