#include "qbus/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qbus/error.hpp"
#include "qbus/kernels.hpp"

namespace qbus {

std::vector<double> resolve_samples(double t_final, std::vector<double> sample_times) {
  if (sample_times.empty()) return {t_final};
  const bool forward = t_final >= 0.0;
  if (forward ? t_final > sample_times.back() : t_final < sample_times.back()) sample_times.push_back(t_final);
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    const double d = sample_times[i] - sample_times[i - 1];
    if (forward ? d < 0.0 : d > 0.0) throw std::invalid_argument("sample times must be monotone");
  }
  return sample_times;
}

namespace {

void check_space(const HamiltonianSpec& h, const SpaceSpec& sp) {
  if (h.space().dim() != sp.dim()) {
    throw std::invalid_argument("state space " + sp.describe() + " does not match Hamiltonian space " +
                                h.space().describe());
  }
}

double auto_max_step(const HamiltonianSpec& h, double requested) {
  if (requested > 0.0) return requested;
  const double w = h.max_frequency();
  return w > 0.0 ? 0.05 / w : std::numeric_limits<double>::infinity();
}

}  // namespace

ExactPropagator::ExactPropagator(const HamiltonianSpec& h) : space_(h.space()) {
  if (h.time_dependent()) throw std::invalid_argument("exact propagation needs a time-independent Hamiltonian");
  const Mat dense = h.dense(0.0);
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (dense + dense.adjoint()));
  if (es.info() != Eigen::Success) throw NumericalError("Hamiltonian eigendecomposition failed");
  energies_ = es.eigenvalues();
  vectors_ = es.eigenvectors();
}

StateVector ExactPropagator::operator()(const StateVector& psi0, double t) const {
  Vec c = vectors_.adjoint() * psi0.amplitudes();
  for (Eigen::Index i = 0; i < c.size(); ++i) c(i) *= std::exp(-kI * energies_(i) * t);
  return StateVector(psi0.space(), vectors_ * c);
}

PureEvolution evolve_exact(const HamiltonianSpec& h, const StateVector& psi0, double t_final,
                           std::vector<double> sample_times) {
  check_space(h, psi0.space());
  const ExactPropagator prop(h);
  PureEvolution out;
  out.engine = "exact";
  out.times = resolve_samples(t_final, std::move(sample_times));
  const double n0 = psi0.norm();
  for (double t : out.times) {
    out.states.push_back(prop(psi0, t));
    out.max_drift = std::max(out.max_drift, std::abs(out.states.back().norm() - n0));
  }
  return out;
}

std::optional<Eigen::VectorXd> corotating_generator(const HamiltonianSpec& h) {
  const auto* eff = std::get_if<EffectiveDicke>(&h.model());
  const auto& sp = h.space();
  if (!eff || sp.representation() != Representation::Symmetric || sp.groups().size() != 2) return std::nullopt;
  const double delta = eff->params.detuning();
  Eigen::VectorXd a(static_cast<Eigen::Index>(sp.dim()));
  for (std::size_t i = 0; i < sp.dim(); ++i) a(static_cast<Eigen::Index>(i)) = delta * sp.symmetric_excitations(i)[1];
  // Every nonzero element (r, c) of a term with frequency w needs a_r - a_c = w.
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (const auto& term : h.terms()) {
    for (Eigen::Index r = 0; r < term.op.outerSize(); ++r) {
      for (SparseOp::InnerIterator it(term.op, r); it; ++it) {
        if (it.value() == cplx{0.0}) continue;
        if (std::abs(a(it.row()) - a(it.col()) - term.frequency) > 1e-12 * scale) return std::nullopt;
      }
    }
  }
  return a;
}

PureEvolution evolve_corotating(const HamiltonianSpec& h, const StateVector& psi0, double t_final,
                                std::vector<double> sample_times) {
  check_space(h, psi0.space());
  const auto a = corotating_generator(h);
  if (!a) throw std::invalid_argument(h.name() + " has no co-rotating frame");
  SparseOp gen = h.at(0.0);
  for (Eigen::Index i = 0; i < a->size(); ++i) gen.coeffRef(i, i) += (*a)(i);
  gen.makeCompressed();
  const ExactPropagator prop(HamiltonianSpec(h.model(), h.space(), {GeneratorTerm{gen, 0.0}}));
  PureEvolution out;
  out.engine = "corotating_exact";
  out.times = resolve_samples(t_final, std::move(sample_times));
  const double n0 = psi0.norm();
  for (double t : out.times) {
    StateVector phi = prop(psi0, t);
    const Vec rot = (kI * t * a->cast<cplx>()).array().exp();
    out.states.emplace_back(h.space(), rot.cwiseProduct(phi.amplitudes()));
    out.max_drift = std::max(out.max_drift, std::abs(out.states.back().norm() - n0));
  }
  return out;
}

PureEvolution evolve_tdep(const HamiltonianSpec& h, const StateVector& psi0, double t_final,
                          const AdaptiveOptions& options, std::vector<double> sample_times) {
  check_space(h, psi0.space());
  PureEvolution out;
  out.engine = "adaptive_dopri5";
  out.times = resolve_samples(t_final, std::move(sample_times));
  out.states.reserve(out.times.size());
  OdeOptions ode;
  ode.rtol = ode.atol = options.tol;
  ode.max_step = auto_max_step(h, options.max_step);
  const auto terms = h.terms();
  const double n0 = psi0.norm();
  auto rhs = [&](double t, const Vec& y, Vec& dy) {
    if (options.parallel) {
      kernels::schrodinger_rhs(terms, t, y, dy);
    } else {
      kernels::serial::schrodinger_rhs(terms, t, y, dy);
    }
  };
  out.stats = integrate_dopri5<Vec>(rhs, psi0.amplitudes(), 0.0, out.times, ode,
                                    [&](std::size_t, double, const Vec& y) {
                                      out.states.emplace_back(psi0.space(), y);
                                      out.max_drift = std::max(out.max_drift, std::abs(y.norm() - n0));
                                    });
  return out;
}

MixedEvolution evolve_lindblad(const HamiltonianSpec& h, const LindbladSpec& diss, const DensityMatrix& rho0,
                               double t_final, const LindbladOptions& options, std::vector<double> sample_times) {
  check_space(h, rho0.space());
  diss.validate();
  const auto jumps = lindblad_dissipators(rho0.space(), diss);
  const auto gen = kernels::make_lindblad_generator(h, jumps);
  MixedEvolution out;
  out.engine = "lindblad_dopri5";
  out.times = resolve_samples(t_final, std::move(sample_times));
  out.states.reserve(out.times.size());
  OdeOptions ode;
  ode.rtol = ode.atol = options.tol;
  ode.max_step = auto_max_step(h, options.max_step);
  const double tr0 = rho0.trace();
  auto rhs = [&](double t, const Mat& r, Mat& dr) {
    if (options.parallel) {
      kernels::lindblad_rhs(gen, t, r, dr);
    } else {
      kernels::serial::lindblad_rhs(gen, t, r, dr);
    }
  };
  out.stats = integrate_dopri5<Mat>(rhs, rho0.matrix(), 0.0, out.times, ode,
                                    [&](std::size_t, double t, const Mat& r) {
                                      DensityMatrix rho(rho0.space(), 0.5 * (r + r.adjoint()));
                                      const double drift = std::abs(rho.trace() - tr0);
                                      if (drift > options.trace_tol) {
                                        throw NumericalError("trace drift " + std::to_string(drift) + " at t = " +
                                                             std::to_string(t));
                                      }
                                      if (const double e = rho.min_eigenvalue(); e < -options.positivity_tol) {
                                        throw NumericalError("positivity violated (eigenvalue " + std::to_string(e) +
                                                             ") at t = " + std::to_string(t));
                                      }
                                      out.max_drift = std::max(out.max_drift, drift);
                                      out.states.push_back(std::move(rho));
                                    });
  return out;
}

}  // namespace qbus
