#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qbus/design.hpp"
#include "qbus/dynamics.hpp"
#include "qbus/measure.hpp"

namespace qbus {

struct Herald {
  int qubit = 0;
  Outcome outcome = Outcome::Ground;
};

/// One protocol step. Time inside the step starts at 0.
///
/// Dispersive steps carry an EffectiveDicke Hamiltonian on the symmetric
/// (Dicke-pair) space; the full and Lindblad engines re-realize them in the lab frame.
struct ProtocolStep {
  HamiltonianSpec hamiltonian;
  double duration = 0.0;
  std::optional<Herald> herald;
  /// Before evolving: prepend an excited ancilla as group 0 (space grows by one qubit).
  bool prepend_ancilla = false;
  /// After evolving: fold the singleton group 0 into group 1.
  bool merge_ancilla = false;
  std::string label;
  /// State the step should produce; scored after the step when present.
  std::optional<StateVector> expected;
};

struct Protocol {
  std::string name;
  StateVector initial;
  std::vector<ProtocolStep> steps;
  StateVector target;
};

/// sum_i c_i |D_{k_i}^N>|D_{q_i}^M> on the symmetric space {N, M}; not normalized.
StateVector dicke_pair_state(int N, int M, const std::vector<std::pair<DickePair, cplx>>& terms);
/// Single-group Dicke state on the symmetric space {M}.
StateVector symmetric_dicke(int M, int q);
/// (1/sqrt N) sum_j |..e_j..>|0> on the computational space with the given cutoff.
StateVector w_target(int N, int cutoff = 1);

Protocol w_protocol(int N, int k = 0, double chi_ref = 1.0);

/// Evolve pi / (2 element) under params resonant for (1, q) -> (0, q + 1), then herald the ancilla in |g>.
/// Throws PhysicsError when the transition is detuned by more than 1e-6 of its element.
ProtocolStep probabilistic_dicke_step(int M, int q, const DispersiveParams& params);

/// q_target growth steps from |D_0^{M0}>; step i uses schedule[i] (N = 1, M = M0 + i).
Protocol sequential_dicke_protocol(int M0, int q_target, const std::vector<DispersiveParams>& schedule);

/// N steps from |D_N^N>|D_0^N>: a quarter period on the first transition, then half periods.
Protocol noon_protocol(int N, const std::vector<DispersiveParams>& schedule);

enum class Engine { Analytic, Effective, Full, Lindblad };

const char* to_string(Engine e);
Engine engine_from_string(const std::string& s);

struct RunOptions {
  std::uint64_t seed = 0;
  /// false: project on the heralded branch and record its probability; true: Born-rule sample.
  bool sampling = false;
  /// Boson cutoff for lab-frame realizations (0 keeps the protocol's own cutoff).
  int cutoff = 0;
  LindbladSpec dissipation{};
  double tol = 1e-10;
};

struct StepRecord {
  std::string label;
  double t_start = 0.0;
  double duration = 0.0;
  double fidelity = 0.0;                  // raw, to the step's expected state (or the target after the last step)
  std::optional<double> phase_corrected;  // pure-state engines only
  std::optional<Outcome> outcome;
  double herald_probability = 1.0;
  bool heralded = true;
  double leakage = 0.0;  // weight outside the scored (symmetric, photon-vacuum) sector
  double conservation_drift = 0.0;
  double norm_drift = 0.0;
  std::optional<double> ancilla_phase;  // phase applied to the ancilla |g> branch before merging
};

struct RunRecord {
  std::string protocol;
  Engine engine = Engine::Effective;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  std::variant<StateVector, DensityMatrix> final_state;
  double final_fidelity = 0.0;
  std::optional<double> final_phase_corrected;
  bool completed = true;  // false when a sampled herald missed
};

RunRecord run_protocol(const Protocol& p, Engine engine, const RunOptions& options = {});

/// Lab-frame embedding of a symmetric state: computational basis with the mode in |0>.
StateVector symmetric_to_lab(const StateVector& sym, int cutoff);
/// Inverse of symmetric_to_lab on the photon-vacuum, permutation-symmetric sector (unnormalized).
StateVector lab_to_symmetric(const StateVector& lab);

}  // namespace qbus
