#pragma once

#include <vector>

#include "qbus/dicke.hpp"
#include "qbus/models.hpp"

namespace qbus {

/// Single-excitation amplitudes of the resonant model: c0 on |g..g>|1>, c[j] on |..e_j..>|0>.
struct ResonantAmplitudes {
  cplx c0{};
  std::vector<cplx> c;

  double norm_squared() const;
};

/// mu = sqrt(sum_j chi_j^2)
double mu(const CouplingProfile& profile);

/// Closed form for qubit `k` initially excited:
///   c_j = delta_jk + chi_j chi_k / mu^2 (cos mu t - 1),  c0 = -i chi_k / mu sin mu t.
ResonantAmplitudes resonant_amplitudes(const CouplingProfile& profile, int k, double t);

/// Closed-form propagation of an arbitrary single-excitation state (superposition of the above).
ResonantAmplitudes propagate_single_excitation(const CouplingProfile& profile, const ResonantAmplitudes& initial,
                                               double t);

/// Embed amplitudes into the computational space of resonant_tc(profile, cutoff).
StateVector to_state(const ResonantAmplitudes& amps, int cutoff = 1);
/// Read single-excitation amplitudes back out of a resonant-model state.
ResonantAmplitudes from_state(const StateVector& state);

/// f_{k,q} = sqrt((k+1)(q+1)(N-k)(M-q)), kept in its literal index convention.
double f_factor(int k, int q, int N, int M);

/// delta_{k,q} = lambda1 k (N-k) + lambda2 q (M-q)
double stark_shift(int k, int q, const DispersiveParams& params);

/// Plus: (k, q) -> (k+1, q-1). Minus: (k, q) -> (k-1, q+1).
enum class Branch { Plus, Minus };

struct TransitionSpec {
  DickePair source;
  Branch branch;

  TransitionSpec(DickePair src, Branch b) : source(src), branch(b) {}
  /// Whether the target stays on the ladder.
  bool valid() const;
  /// Throws std::domain_error when !valid().
  DickePair target() const;
  /// Same two states, opposite direction.
  TransitionSpec reversed() const;
  bool operator==(const TransitionSpec&) const = default;
};

/// Both sign conventions of the transition detuning.
struct TransitionDetuning {
  /// -/+ delta - (delta_target - delta_source), the literal transition formula.
  double literal;
  /// -/+ delta + (delta_target - delta_source); agrees with the worked
  /// resonance delta = delta_{1,q} - delta_{0,q+1} and with numeric resonance scans.
  double validated;
};

TransitionDetuning transition_detuning(const TransitionSpec& spec, const DispersiveParams& params);

/// Coupling matrix element from the collective-operator algebra:
/// minus branch Omega_eff sqrt(k(N-k+1)) sqrt((q+1)(M-q)); plus branch its mirror.
/// Zero when the branch leaves the ladder.
double transition_element(const TransitionSpec& spec, const DispersiveParams& params);

/// tau = arcsin(sqrt((M-q)/(M+1))) / element: merges |e>|D_q^M> into |D_{q+1}^{M+1}>.
double tau_dicke(int M, int q, double element);

}  // namespace qbus
