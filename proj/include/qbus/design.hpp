#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qbus/analytic.hpp"
#include "qbus/error.hpp"

namespace qbus {

/// chi2 / chi1 ratios that turn |eg>|0> into a maximally entangled pair at t = pi/mu.
std::array<double, 2> bell_coupling_ratios();

/// chi_k = (1 + sqrt N) chi_ref, all others chi_ref (0-based k).
CouplingProfile w_couplings(int N, int k, double chi_ref = 1.0);

/// |sum chi / sum chi^2 - (1 -/+ sqrt N) / (2 chi_k)| for both sign branches.
/// The first entry is the branch written in the condition (amplitudes +1/sqrt N),
/// the second the branch satisfied by the boosted-coupling family (-1/sqrt N).
std::array<double, 2> w_condition_residuals(const CouplingProfile& profile, int k);
/// Smallest of the two residuals.
double verify_w_condition(const CouplingProfile& profile, int k);

struct SelectivityRow {
  TransitionSpec transition;
  double detuning;  // validated sign convention
  double element;
  double ratio;     // |detuning| / element
};

struct SelectivityReport {
  TransitionSpec chosen;
  DispersiveParams params;
  std::vector<SelectivityRow> rows;  // chosen transition first
  std::vector<int> populated_totals;
  double margin;  // min ratio over competing rows; +inf when nothing competes
};

/// Evaluate every transition between Dicke pairs whose k + q lies in `populated_totals`
/// (default: the chosen source's total).
SelectivityReport selectivity_report(const DispersiveParams& params, const TransitionSpec& chosen,
                                     std::vector<int> populated_totals = {});

class SelectivityError : public PhysicsError {
 public:
  enum class Kind { NoRoot, MarginViolation, NotDispersive };
  SelectivityError(Kind kind, const std::string& what, std::optional<SelectivityReport> report)
      : PhysicsError(what), kind_(kind), report_(std::move(report)) {}
  Kind kind() const { return kind_; }
  const std::optional<SelectivityReport>& report() const { return report_; }

 private:
  Kind kind_;
  std::optional<SelectivityReport> report_;
};

enum class FreeParameter { G1, Delta2 };

struct SelectiveRequest {
  int N = 1, M = 1;
  TransitionSpec spec{DickePair(1, 1, 1, 0), Branch::Minus};
  double g2 = 1.0;
  double delta1 = 100.0;
  double delta2 = 100.0;  // ignored when free == Delta2
  double g1 = 0.0;        // ignored when free == G1
  FreeParameter free = FreeParameter::G1;
  double margin_threshold = 10.0;
  double dispersive_threshold = 10.0;
  std::vector<int> populated_totals;  // default {k + q of the source}
};

/// Root-find the free parameter so the chosen transition is resonant, then check
/// the dispersive regime and the selectivity margin. g1 is bracketed in
/// [g2 / 1e4, Delta1 / 5]; Delta2 in [Delta1 / 2, 2 Delta1].
SelectivityReport solve_selective_params(const SelectiveRequest& request);

struct Table1Row {
  std::string label;
  double delta2_over_delta1, g1_over_g2, delta1_over_g1, delta2_over_g2;  // as tabulated
  DispersiveParams params;                                               // materialized against g2
  TransitionSpec transition;
  double detuning;          // validated convention
  double detuning_literal;  // literal transition formula
  double element;
  double implied_delta2_over_delta1;
};

/// The three tabulated NOON parameter rows for N = M = 3, materialized with
/// g1 = ratio * g2, Delta2 = (Delta2/g2) g2, Delta1 = (Delta1/g1) g1.
std::vector<Table1Row> table1_parameter_sets(double g2 = 1.0);

/// Transitions walked by the NOON protocol: (N-i, i) -> (N-i-1, i+1), i = 0..N-1.
std::vector<TransitionSpec> noon_transitions(int N);

/// Per-step resonant parameters for the NOON protocol with g1, g2, Delta1 fixed and Delta2 solved.
std::vector<SelectivityReport> noon_schedule(int N, double g1, double g2, double delta1,
                                             double margin_threshold = 10.0);

/// Per-step resonant parameters for sequential Dicke growth from M0 qubits (ancilla group N = 1).
std::vector<SelectivityReport> sequential_schedule(int M0, int q_target, double g1, double g2, double delta1);

}  // namespace qbus
