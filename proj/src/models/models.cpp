#include "qbus/models.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "qbus/operators.hpp"

namespace qbus {

CouplingProfile::CouplingProfile(std::vector<double> chi) : chi_(std::move(chi)) {
  if (chi_.empty()) throw std::invalid_argument("coupling profile is empty");
  bool any = false;
  for (double c : chi_) {
    if (!std::isfinite(c)) throw std::invalid_argument("coupling profile has a non-finite entry");
    any = any || c != 0.0;
  }
  if (!any) throw std::invalid_argument("coupling profile has no nonzero entry");
}

DispersiveParams::DispersiveParams(int N, int M, double g1, double g2, double delta1, double delta2)
    : N_(N), M_(M), g1_(g1), g2_(g2), delta1_(delta1), delta2_(delta2) {
  if (N_ < 1 || M_ < 1) throw std::invalid_argument("dispersive groups need at least one qubit each");
  if (delta1_ == 0.0 || delta2_ == 0.0) throw std::invalid_argument("dispersive detunings must be nonzero");
  if (delta1_ + delta2_ == 0.0) throw std::invalid_argument("Delta1 + Delta2 must be nonzero");
  for (double v : {g1_, g2_, delta1_, delta2_}) {
    if (!std::isfinite(v)) throw std::invalid_argument("dispersive parameter is not finite");
  }
}

double DispersiveParams::dispersive_ratio() const {
  const double inf = std::numeric_limits<double>::infinity();
  const double r1 = g1_ == 0.0 ? inf : std::abs(delta1_) / std::abs(g1_);
  const double r2 = g2_ == 0.0 ? inf : std::abs(delta2_) / std::abs(g2_);
  return std::min(r1, r2);
}

void LindbladSpec::validate() const {
  if (kappa < 0.0 || gamma < 0.0 || gamma_phi < 0.0) throw std::invalid_argument("Lindblad rates must be >= 0");
}

HamiltonianSpec::HamiltonianSpec(Variant model, SpaceSpec space, std::vector<GeneratorTerm> terms)
    : model_(std::move(model)),
      space_(std::move(space)),
      terms_(std::make_shared<const std::vector<GeneratorTerm>>(std::move(terms))) {}

bool HamiltonianSpec::time_dependent() const { return max_frequency() != 0.0; }

double HamiltonianSpec::max_frequency() const {
  double w = 0.0;
  for (const auto& t : *terms_) w = std::max(w, std::abs(t.frequency));
  return w;
}

std::string HamiltonianSpec::name() const {
  return std::visit(
      [](const auto& m) -> std::string {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ResonantTC>) return "resonant_tc";
        if constexpr (std::is_same_v<T, Sideband>) return "sideband";
        if constexpr (std::is_same_v<T, LabDispersive>) return "lab_dispersive";
        return "effective_dicke";
      },
      model_);
}

SparseOp HamiltonianSpec::at(double t) const {
  const auto n = static_cast<Eigen::Index>(space_.dim());
  SparseOp h(n, n);
  for (const auto& term : *terms_) {
    const cplx phase = term.frequency == 0.0 ? cplx{1.0} : std::exp(kI * term.frequency * t);
    h += phase * term.op;
  }
  h.makeCompressed();
  return h;
}

HamiltonianSpec resonant_tc(const CouplingProfile& profile, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("resonant model needs boson cutoff >= 1");
  auto sp = SpaceSpec::qubits({static_cast<int>(profile.size())}, cutoff);
  const SparseOp a = ops::annihilation(sp);
  const auto n = static_cast<Eigen::Index>(sp.dim());
  SparseOp h(n, n);
  for (std::size_t j = 0; j < profile.size(); ++j) {
    const SparseOp up = ops::sigma_plus(sp, static_cast<int>(j)) * a;
    h += profile[j] * (up + SparseOp(up.adjoint()));
  }
  h.makeCompressed();
  return HamiltonianSpec(ResonantTC{profile, cutoff}, sp, {GeneratorTerm{h, 0.0}});
}

HamiltonianSpec sideband(double chi1, double chi2, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("sideband model needs boson cutoff >= 1");
  auto sp = SpaceSpec::qubits({2}, cutoff);
  const SparseOp a = ops::annihilation(sp);
  const SparseOp ad = a.adjoint();
  const SparseOp blue = ops::sigma_plus(sp, 0) * ad;
  const SparseOp red = ops::sigma_plus(sp, 1) * a;
  SparseOp h = chi1 * (blue + SparseOp(blue.adjoint())) + chi2 * (red + SparseOp(red.adjoint()));
  h.makeCompressed();
  return HamiltonianSpec(Sideband{chi1, chi2, cutoff}, sp, {GeneratorTerm{h, 0.0}});
}

HamiltonianSpec lab_dispersive(const DispersiveParams& p, int cutoff) {
  if (cutoff < 1) throw std::invalid_argument("lab-frame dispersive model needs boson cutoff >= 1");
  auto sp = SpaceSpec::qubits({p.N(), p.M()}, cutoff);
  const SparseOp a = ops::annihilation(sp);
  const SparseOp s_up = ops::collective_raise(sp, 0, p.N());
  const SparseOp j_up = ops::collective_raise(sp, p.N(), p.M());
  SparseOp t1 = p.g1() * (a * s_up);
  SparseOp t2 = p.g2() * (a * j_up);
  t1.makeCompressed();
  t2.makeCompressed();
  std::vector<GeneratorTerm> terms;
  terms.push_back({t1, p.delta1()});
  terms.push_back({SparseOp(t1.adjoint()), -p.delta1()});
  terms.push_back({t2, p.delta2()});
  terms.push_back({SparseOp(t2.adjoint()), -p.delta2()});
  return HamiltonianSpec(LabDispersive{p, cutoff}, sp, std::move(terms));
}

HamiltonianSpec effective_dicke(const DispersiveParams& p) {
  const int N = p.N(), M = p.M();
  auto sp = SpaceSpec::symmetric({N, M});
  using Triplet = Eigen::Triplet<cplx>;
  std::vector<Triplet> diag, up;
  const double omega = p.omega_eff();
  for (int k = 0; k <= N; ++k) {
    for (int q = 0; q <= M; ++q) {
      const auto src = sp.symmetric_index({k, q});
      const double shift = p.lambda1() * k * (N - k) + p.lambda2() * q * (M - q);
      if (shift != 0.0) diag.emplace_back(src, src, shift);
      // S^dagger J : (k, q) -> (k+1, q-1)
      if (k < N && q > 0) {
        const double el = omega * std::sqrt(static_cast<double>((k + 1) * (N - k))) *
                          std::sqrt(static_cast<double>(q * (M - q + 1)));
        up.emplace_back(sp.symmetric_index({k + 1, q - 1}), src, el);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(sp.dim());
  SparseOp h0(n, n), raise(n, n);
  h0.setFromTriplets(diag.begin(), diag.end());
  raise.setFromTriplets(up.begin(), up.end());
  h0.makeCompressed();
  raise.makeCompressed();
  const double delta = p.detuning();
  std::vector<GeneratorTerm> terms;
  terms.push_back({h0, 0.0});
  terms.push_back({raise, -delta});
  terms.push_back({SparseOp(raise.adjoint()), delta});
  return HamiltonianSpec(EffectiveDicke{p}, sp, std::move(terms));
}

std::vector<JumpOperator> lindblad_dissipators(const SpaceSpec& space, const LindbladSpec& spec) {
  spec.validate();
  if (space.representation() != Representation::Computational) {
    throw std::invalid_argument("dissipators need a computational-basis space");
  }
  std::vector<JumpOperator> out;
  if (spec.kappa > 0.0) {
    if (!space.has_boson()) throw std::invalid_argument("cavity decay requested but the space has no boson mode");
    out.push_back({ops::annihilation(space), spec.kappa, "cavity_decay"});
  }
  for (int j = 0; j < space.num_qubits(); ++j) {
    if (spec.gamma > 0.0) out.push_back({ops::sigma_minus(space, j), spec.gamma, "relaxation_q" + std::to_string(j)});
  }
  for (int j = 0; j < space.num_qubits(); ++j) {
    if (spec.gamma_phi > 0.0) {
      out.push_back({ops::sigma_z(space, j), spec.gamma_phi / 2.0, "dephasing_q" + std::to_string(j)});
    }
  }
  return out;
}

}  // namespace qbus
