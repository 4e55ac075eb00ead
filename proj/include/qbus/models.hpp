#pragma once

#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qbus/space.hpp"

namespace qbus {

/// Per-qubit couplings chi_j (angular frequency) of the resonant model.
class CouplingProfile {
 public:
  explicit CouplingProfile(std::vector<double> chi);

  const std::vector<double>& chi() const { return chi_; }
  std::size_t size() const { return chi_.size(); }
  double operator[](std::size_t j) const { return chi_[j]; }

 private:
  std::vector<double> chi_;
};

/// Two-group dispersive setup: N qubits (g1, Delta1) and M qubits (g2, Delta2).
/// Derived quantities are recomputed on every call.
class DispersiveParams {
 public:
  DispersiveParams(int N, int M, double g1, double g2, double delta1, double delta2);

  int N() const { return N_; }
  int M() const { return M_; }
  double g1() const { return g1_; }
  double g2() const { return g2_; }
  double delta1() const { return delta1_; }
  double delta2() const { return delta2_; }

  double lambda1() const { return g1_ * g1_ / delta1_; }
  double lambda2() const { return g2_ * g2_ / delta2_; }
  /// 2 Delta1 Delta2 / (Delta1 + Delta2)
  double mean_detuning() const { return 2.0 * delta1_ * delta2_ / (delta1_ + delta2_); }
  double omega_eff() const { return g1_ * g2_ / mean_detuning(); }
  /// delta = Delta2 - Delta1 + lambda2 - lambda1
  double detuning() const { return delta2_ - delta1_ + lambda2() - lambda1(); }
  /// min(|Delta1|/g1, |Delta2|/g2); infinite for an uncoupled group.
  double dispersive_ratio() const;
  bool is_dispersive(double threshold = 10.0) const { return dispersive_ratio() >= threshold; }

  DispersiveParams with_g1(double g1) const { return {N_, M_, g1, g2_, delta1_, delta2_}; }
  DispersiveParams with_delta2(double d2) const { return {N_, M_, g1_, g2_, delta1_, d2}; }
  DispersiveParams with_groups(int N, int M) const { return {N, M, g1_, g2_, delta1_, delta2_}; }

 private:
  int N_, M_;
  double g1_, g2_, delta1_, delta2_;
};

struct LindbladSpec {
  double kappa = 0.0;      // cavity decay
  double gamma = 0.0;      // per-qubit relaxation
  double gamma_phi = 0.0;  // per-qubit pure dephasing

  void validate() const;
};

struct ResonantTC {
  CouplingProfile profile;
  int cutoff;
};
struct Sideband {
  double chi1, chi2;
  int cutoff;
};
struct LabDispersive {
  DispersiveParams params;
  int cutoff;
};
struct EffectiveDicke {
  DispersiveParams params;
};

/// One piece of H(t) = sum_terms op * exp(i * frequency * t). Terms come in
/// Hermitian-conjugate pairs so H(t) is Hermitian at every t.
struct GeneratorTerm {
  SparseOp op;
  double frequency = 0.0;
};

class HamiltonianSpec {
 public:
  using Variant = std::variant<ResonantTC, Sideband, LabDispersive, EffectiveDicke>;

  HamiltonianSpec(Variant model, SpaceSpec space, std::vector<GeneratorTerm> terms);

  const Variant& model() const { return model_; }
  const SpaceSpec& space() const { return space_; }
  std::span<const GeneratorTerm> terms() const { return *terms_; }

  bool time_dependent() const;
  /// Largest |frequency| among the phase factors (0 for static models).
  double max_frequency() const;
  std::string name() const;

  SparseOp at(double t) const;
  Mat dense(double t) const { return Mat(at(t)); }

 private:
  Variant model_;
  SpaceSpec space_;
  std::shared_ptr<const std::vector<GeneratorTerm>> terms_;
};

/// H = sum_i chi_i (|e_i><g_i| a + |g_i><e_i| a^dagger)
HamiltonianSpec resonant_tc(const CouplingProfile& profile, int cutoff = 1);
/// H = chi1 (s1+ a^dagger + s1- a) + chi2 (s2+ a + s2- a^dagger)
HamiltonianSpec sideband(double chi1, double chi2, int cutoff = 1);
/// H(t) = g1 a S^dagger e^{i Delta1 t} + g2 a J^dagger e^{i Delta2 t} + h.c.
HamiltonianSpec lab_dispersive(const DispersiveParams& params, int cutoff = 2);
/// Dicke-pair model on (N+1)(M+1) states: diagonal Stark shifts plus
/// Omega_eff (S^dagger J e^{-i delta t} + S J^dagger e^{i delta t}).
HamiltonianSpec effective_dicke(const DispersiveParams& params);

struct JumpOperator {
  SparseOp op;  // bare operator; the dissipator uses sqrt(rate) * op
  double rate;
  std::string label;
};

/// sqrt(kappa) a, sqrt(gamma) sigma_j^-, sqrt(gamma_phi / 2) sigma_j^z.
std::vector<JumpOperator> lindblad_dissipators(const SpaceSpec& space, const LindbladSpec& spec);

}  // namespace qbus
