#include "qbus/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace qbus {

double ResonantAmplitudes::norm_squared() const {
  double s = std::norm(c0);
  for (const auto& v : c) s += std::norm(v);
  return s;
}

double mu(const CouplingProfile& profile) {
  double s = 0.0;
  for (double x : profile.chi()) s += x * x;
  return std::sqrt(s);
}

ResonantAmplitudes resonant_amplitudes(const CouplingProfile& profile, int k, double t) {
  if (k < 0 || k >= static_cast<int>(profile.size())) throw std::out_of_range("excited qubit index outside profile");
  const double m = mu(profile);
  const double chik = profile[static_cast<std::size_t>(k)];
  ResonantAmplitudes out;
  out.c0 = -kI * (chik / m) * std::sin(m * t);
  out.c.resize(profile.size());
  for (std::size_t j = 0; j < profile.size(); ++j) {
    out.c[j] = (static_cast<int>(j) == k ? 1.0 : 0.0) + profile[j] * chik / (m * m) * (std::cos(m * t) - 1.0);
  }
  return out;
}

ResonantAmplitudes propagate_single_excitation(const CouplingProfile& profile, const ResonantAmplitudes& initial,
                                               double t) {
  if (initial.c.size() != profile.size()) throw std::invalid_argument("amplitude count does not match profile");
  const double m = mu(profile);
  const double cs = std::cos(m * t), sn = std::sin(m * t);
  // The bright mode chi/mu exchanges the excitation with the photon; dark modes are frozen.
  cplx bright{};
  for (std::size_t j = 0; j < profile.size(); ++j) bright += profile[j] / m * initial.c[j];
  ResonantAmplitudes out;
  out.c0 = cs * initial.c0 - kI * sn * bright;
  out.c.resize(profile.size());
  for (std::size_t j = 0; j < profile.size(); ++j) {
    const double hat = profile[j] / m;
    out.c[j] = initial.c[j] + (cs - 1.0) * hat * bright - kI * sn * hat * initial.c0;
  }
  return out;
}

StateVector to_state(const ResonantAmplitudes& amps, int cutoff) {
  const int n = static_cast<int>(amps.c.size());
  auto sp = SpaceSpec::qubits({n}, cutoff);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(sp.dim()));
  v(static_cast<Eigen::Index>(1)) = amps.c0;  // |g..g>|1>
  for (int j = 0; j < n; ++j) {
    v(static_cast<Eigen::Index>((std::size_t{1} << (n - 1 - j)) * sp.boson_dim())) = amps.c[static_cast<std::size_t>(j)];
  }
  return StateVector(std::move(sp), std::move(v));
}

ResonantAmplitudes from_state(const StateVector& state) {
  const auto& sp = state.space();
  if (!sp.has_boson() || sp.representation() != Representation::Computational) {
    throw std::invalid_argument("from_state expects a qubits+mode computational state");
  }
  const int n = sp.num_qubits();
  ResonantAmplitudes out;
  out.c0 = state[1];
  out.c.resize(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) out.c[static_cast<std::size_t>(j)] = state[(std::size_t{1} << (n - 1 - j)) * sp.boson_dim()];
  return out;
}

double f_factor(int k, int q, int N, int M) {
  if (k < 0 || k > N || q < 0 || q > M) throw std::domain_error("f_factor indices out of range");
  return std::sqrt(static_cast<double>((k + 1) * (q + 1)) * (N - k) * (M - q));
}

double stark_shift(int k, int q, const DispersiveParams& p) {
  if (k < 0 || k > p.N() || q < 0 || q > p.M()) throw std::domain_error("stark_shift indices out of range");
  return p.lambda1() * k * (p.N() - k) + p.lambda2() * q * (p.M() - q);
}

bool TransitionSpec::valid() const {
  const int dk = branch == Branch::Plus ? 1 : -1;
  const int k = source.left.q + dk, q = source.right.q - dk;
  return k >= 0 && k <= source.left.M && q >= 0 && q <= source.right.M;
}

DickePair TransitionSpec::target() const {
  if (!valid()) throw std::domain_error("transition leaves the Dicke ladder");
  const int dk = branch == Branch::Plus ? 1 : -1;
  return DickePair(source.left.M, source.left.q + dk, source.right.M, source.right.q - dk);
}

TransitionSpec TransitionSpec::reversed() const {
  return TransitionSpec(target(), branch == Branch::Plus ? Branch::Minus : Branch::Plus);
}

TransitionDetuning transition_detuning(const TransitionSpec& spec, const DispersiveParams& p) {
  if (spec.source.left.M != p.N() || spec.source.right.M != p.M()) {
    throw std::invalid_argument("transition group sizes do not match the parameters");
  }
  const DickePair tgt = spec.target();
  const double sign = spec.branch == Branch::Plus ? -1.0 : 1.0;  // the -/+ in front of delta
  const double diff = stark_shift(tgt.left.q, tgt.right.q, p) - stark_shift(spec.source.left.q, spec.source.right.q, p);
  const double d = p.detuning();
  return {sign * d - diff, sign * d + diff};
}

double transition_element(const TransitionSpec& spec, const DispersiveParams& p) {
  if (!spec.valid()) return 0.0;
  const int N = p.N(), M = p.M();
  const int k = spec.source.left.q, q = spec.source.right.q;
  if (spec.branch == Branch::Minus) {
    return p.omega_eff() * std::sqrt(static_cast<double>(k * (N - k + 1))) *
           std::sqrt(static_cast<double>((q + 1) * (M - q)));
  }
  return p.omega_eff() * std::sqrt(static_cast<double>((k + 1) * (N - k))) *
         std::sqrt(static_cast<double>(q * (M - q + 1)));
}

double tau_dicke(int M, int q, double element) {
  if (M < 1 || q < 0 || q > M) throw std::domain_error("tau_dicke: need 0 <= q <= M");
  if (!(element > 0.0)) throw std::domain_error("tau_dicke: coupling element must be positive");
  return std::asin(std::sqrt(static_cast<double>(M - q) / (M + 1))) / element;
}

}  // namespace qbus
