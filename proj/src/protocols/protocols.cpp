#include "qbus/protocols.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "qbus/metrics.hpp"
#include "qbus/operators.hpp"

namespace qbus {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TransitionSpec minus_from(int N, int k, int M, int q) { return TransitionSpec(DickePair(N, k, M, q), Branch::Minus); }

StateVector photon_vacuum(const StateVector& s) {
  const auto& sp = s.space();
  if (!sp.has_boson()) return s;
  const std::size_t bd = sp.boson_dim();
  auto out_sp = SpaceSpec::qubits(sp.groups());
  Vec v(static_cast<Eigen::Index>(sp.qubit_dim()));
  for (std::size_t i = 0; i < sp.qubit_dim(); ++i) v(static_cast<Eigen::Index>(i)) = s[i * bd];
  return StateVector(std::move(out_sp), std::move(v));
}

// Re-embed a qubits+mode state at another cutoff; higher photon numbers are dropped.
StateVector with_cutoff(const StateVector& s, int cutoff) {
  const auto& sp = s.space();
  if (!sp.has_boson() || *sp.cutoff() == cutoff) return s;
  auto out_sp = SpaceSpec::qubits(sp.groups(), cutoff);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(out_sp.dim()));
  const std::size_t keep = std::min(sp.boson_dim(), out_sp.boson_dim());
  for (std::size_t i = 0; i < sp.qubit_dim(); ++i) {
    for (std::size_t n = 0; n < keep; ++n) {
      v(static_cast<Eigen::Index>(i * out_sp.boson_dim() + n)) = s[i * sp.boson_dim() + n];
    }
  }
  return StateVector(std::move(out_sp), std::move(v));
}

double expectation(const SparseOp& op, const Vec& v) { return v.dot(op * v).real(); }

// Conserved "excitation" observable of each model per unit norm, so integrator
// norm drift does not masquerade as a conservation error.
double conserved_quantity(const HamiltonianSpec& h, const StateVector& s) {
  const auto& sp = s.space();
  const double n2 = s.amplitudes().squaredNorm();
  if (n2 == 0.0) return 0.0;
  if (sp.representation() == Representation::Symmetric) {
    double acc = 0.0;
    for (std::size_t i = 0; i < s.dim(); ++i) {
      int n = sp.photons(i);
      for (int e : sp.symmetric_excitations(i)) n += e;
      acc += n * std::norm(s[i]);
    }
    return acc / n2;
  }
  if (std::holds_alternative<Sideband>(h.model())) {
    const SparseOp k = 2.0 * ops::number(sp) - ops::sigma_z(sp, 0) + ops::sigma_z(sp, 1);
    return expectation(k, s.amplitudes()) / n2;
  }
  return expectation(ops::excitation_number(sp), s.amplitudes()) / n2;
}

// Coefficient weights of |D_Q^{M+1}> on |e>|D_{Q-1}^M> and |g>|D_Q^M>.
double merge_weight_e(int Q, int M) { return std::sqrt(static_cast<double>(Q) / (M + 1)); }
double merge_weight_g(int Q, int M) { return std::sqrt(static_cast<double>(M + 1 - Q) / (M + 1)); }

// Phase for the ancilla |g> branch that maximizes the symmetric weight of the merged register.
double merge_phase(const StateVector& sym) {
  const int M = sym.space().groups()[1];
  const auto& sp = sym.space();
  cplx s{};
  for (int Q = 1; Q <= M; ++Q) {
    const cplx a = sym[sp.symmetric_index({1, Q - 1})];
    const cplx b = sym[sp.symmetric_index({0, Q})];
    s += merge_weight_e(Q, M) * merge_weight_g(Q, M) * std::conj(a) * b;
  }
  return std::abs(s) > 0.0 ? -std::arg(s) : 0.0;
}

void require_ancilla_layout(const SpaceSpec& sp) {
  if (sp.groups().size() != 2 || sp.groups()[0] != 1) {
    throw ConfigError("merging needs an ancilla group of one qubit in front of the register, got " + sp.describe());
  }
}

StateVector merge_symmetric(const StateVector& sym, double phase) {
  require_ancilla_layout(sym.space());
  const auto& sp = sym.space();
  const int M = sp.groups()[1];
  const cplx rot = std::exp(kI * phase);
  auto out_sp = SpaceSpec::symmetric({M + 1});
  Vec v = Vec::Zero(M + 2);
  for (int Q = 0; Q <= M + 1; ++Q) {
    cplx c{};
    if (Q >= 1) c += merge_weight_e(Q, M) * sym[sp.symmetric_index({1, Q - 1})];
    if (Q <= M) c += merge_weight_g(Q, M) * rot * sym[sp.symmetric_index({0, Q})];
    v(Q) = c;
  }
  return StateVector(std::move(out_sp), std::move(v));
}

StateVector merge_lab(const StateVector& lab, double phase) {
  const auto& sp = lab.space();
  require_ancilla_layout(sp);
  const cplx rot = std::exp(kI * phase);
  Vec v = lab.amplitudes();
  for (std::size_t i = 0; i < lab.dim(); ++i) {
    if (!sp.excited(i, 0)) v(static_cast<Eigen::Index>(i)) *= rot;
  }
  return StateVector(SpaceSpec::qubits({sp.groups()[1] + 1}, sp.cutoff()), std::move(v));
}

StateVector prepend_excited(const StateVector& s) {
  if (s.space().representation() == Representation::Symmetric) {
    return tensor(StateVector::basis(SpaceSpec::symmetric({1}), 1), s);
  }
  return tensor(StateVector::product("e"), s);
}

std::string describe_engine_mismatch(Engine e, const HamiltonianSpec& h) {
  return std::string("engine '") + to_string(e) + "' cannot run a " + h.name() + " step";
}

// Engine-side realization of the state the protocol is written in.
struct Realization {
  Engine engine;
  int cutoff;          // boson cutoff of the lab-frame realization (0 when symmetric)
  bool symmetric_native;
};

StateVector realize(const StateVector& native, const Realization& r) {
  if (native.space().representation() == Representation::Symmetric) {
    if (r.engine == Engine::Effective) return native;
    return symmetric_to_lab(native, r.cutoff);
  }
  if (r.cutoff > 0) return with_cutoff(native, r.cutoff);
  return native;
}

HamiltonianSpec engine_hamiltonian(const ProtocolStep& step, const StateVector& s, Engine engine) {
  const auto& h = step.hamiltonian;
  const auto& sp = s.space();
  // A step Hamiltonian that already acts on the engine's space is used verbatim.
  if (h.space() == sp) {
    if (engine == Engine::Analytic && !std::holds_alternative<ResonantTC>(h.model())) {
      throw ConfigError(describe_engine_mismatch(engine, h));
    }
    return h;
  }
  return std::visit(
      [&](const auto& m) -> HamiltonianSpec {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ResonantTC>) {
          if (sp.representation() != Representation::Computational) throw ConfigError(describe_engine_mismatch(engine, h));
          return resonant_tc(m.profile, sp.cutoff().value_or(m.cutoff));
        } else if constexpr (std::is_same_v<T, Sideband>) {
          if (engine == Engine::Analytic || sp.representation() != Representation::Computational) {
            throw ConfigError(describe_engine_mismatch(engine, h));
          }
          return sideband(m.chi1, m.chi2, sp.cutoff().value_or(m.cutoff));
        } else {
          if (engine == Engine::Analytic) throw ConfigError(describe_engine_mismatch(engine, h));
          const DispersiveParams& p = m.params;
          if (sp.representation() == Representation::Symmetric) return effective_dicke(p);
          return lab_dispersive(p, sp.cutoff().value_or(2));
        }
      },
      h.model());
}

void check_groups(const HamiltonianSpec& h, const SpaceSpec& sp) {
  if (h.space().groups() != sp.groups()) {
    throw ConfigError("step Hamiltonian acts on " + h.space().describe() + " but the state lives on " + sp.describe());
  }
}

struct Score {
  double fidelity = kNaN;
  std::optional<double> phase_corrected;
  double leakage = 0.0;
};

// Bring the engine state to the representation of `expected` and score it.
Score score_pure(const StateVector& s, const StateVector& expected) {
  Score sc;
  StateVector view = s;
  if (expected.space().representation() == Representation::Symmetric &&
      s.space().representation() == Representation::Computational) {
    view = lab_to_symmetric(s);
  } else if (expected.space().has_boson() && s.space().has_boson()) {
    view = with_cutoff(s, *expected.space().cutoff());
  }
  const double n2 = s.amplitudes().squaredNorm();
  sc.leakage = n2 > 0.0 ? std::max(0.0, 1.0 - view.amplitudes().squaredNorm() / n2) : 0.0;
  if (view.space().groups() != expected.space().groups() || view.dim() != expected.dim()) return sc;
  sc.fidelity = fidelity(view, expected);
  sc.phase_corrected = phase_corrected_fidelity(view, expected);
  return sc;
}

Score score_mixed(const DensityMatrix& rho, const StateVector& expected) {
  Score sc;
  const auto& sp = rho.space();
  StateVector e = expected;
  if (expected.space().representation() == Representation::Symmetric) {
    if (expected.space().groups() != sp.groups()) return sc;
    e = symmetric_to_lab(expected, sp.cutoff().value_or(0));
    // Weight outside the lab image of the symmetric photon-vacuum sector.
    const auto sym = SpaceSpec::symmetric(sp.groups());
    double inside = 0.0;
    for (std::size_t i = 0; i < sym.dim(); ++i) {
      const auto b = symmetric_to_lab(StateVector::basis(sym, i), sp.cutoff().value_or(0));
      inside += fidelity(rho, b);
    }
    sc.leakage = std::max(0.0, rho.trace() - inside);
  } else {
    if (expected.space().groups() != sp.groups()) return sc;
    if (expected.space().has_boson() && sp.has_boson()) e = with_cutoff(expected, *sp.cutoff());
  }
  if (e.dim() != rho.dim()) return sc;
  sc.fidelity = fidelity(rho, e);
  return sc;
}

}  // namespace

StateVector symmetric_to_lab(const StateVector& sym, int cutoff) {
  if (sym.space().representation() != Representation::Symmetric) throw std::invalid_argument("state is not symmetric");
  const StateVector comp = to_computational(sym);
  if (cutoff <= 0) return comp;
  return tensor(comp, StateVector::basis(SpaceSpec::boson(cutoff), 0));
}

StateVector lab_to_symmetric(const StateVector& lab) { return to_symmetric(photon_vacuum(lab)); }

StateVector dicke_pair_state(int N, int M, const std::vector<std::pair<DickePair, cplx>>& terms) {
  auto sp = SpaceSpec::symmetric({N, M});
  Vec v = Vec::Zero(static_cast<Eigen::Index>(sp.dim()));
  for (const auto& [pair, c] : terms) {
    if (pair.left.M != N || pair.right.M != M) throw std::invalid_argument("Dicke pair does not match the groups");
    v(static_cast<Eigen::Index>(sp.symmetric_index({pair.left.q, pair.right.q}))) += c;
  }
  return StateVector(std::move(sp), std::move(v));
}

StateVector symmetric_dicke(int M, int q) {
  const DickeLabel l(M, q);
  auto sp = SpaceSpec::symmetric({M});
  return StateVector::basis(sp, static_cast<std::size_t>(l.q));
}

StateVector w_target(int N, int cutoff) {
  if (N < 1) throw std::invalid_argument("W target needs at least one qubit");
  auto sp = SpaceSpec::qubits({N}, cutoff);
  Vec v = Vec::Zero(static_cast<Eigen::Index>(sp.dim()));
  for (int j = 0; j < N; ++j) {
    v(static_cast<Eigen::Index>((std::size_t{1} << (N - 1 - j)) * sp.boson_dim())) = 1.0 / std::sqrt(static_cast<double>(N));
  }
  return StateVector(std::move(sp), std::move(v));
}

Protocol w_protocol(int N, int k, double chi_ref) {
  const CouplingProfile prof = w_couplings(N, k, chi_ref);
  std::string bits(static_cast<std::size_t>(N), 'g');
  bits[static_cast<std::size_t>(k)] = 'e';
  ProtocolStep step{resonant_tc(prof, 1), kPi / mu(prof), std::nullopt, false, false, "resonant pi/mu", w_target(N, 1)};
  return Protocol{"w-state", StateVector::product(bits, 0, 1), {std::move(step)}, w_target(N, 1)};
}

ProtocolStep probabilistic_dicke_step(int M, int q, const DispersiveParams& params) {
  if (params.N() != 1 || params.M() != M) throw ConfigError("probabilistic step needs params with N = 1 and the register size M");
  if (q < 0 || q >= M) throw ConfigError("probabilistic step needs 0 <= q < M");
  const TransitionSpec t = minus_from(1, 1, M, q);
  const double el = transition_element(t, params);
  const double det = transition_detuning(t, params).validated;
  if (std::abs(det) > 1e-6 * el) {
    std::ostringstream os;
    os << "parameters are not resonant for (1," << q << ")->(0," << q + 1 << "): detuning " << det << " vs element "
       << el;
    throw PhysicsError(os.str());
  }
  return ProtocolStep{effective_dicke(params),
                      kPi / (2.0 * el),
                      Herald{0, Outcome::Ground},
                      false,
                      false,
                      "transfer then herald ancilla in g",
                      dicke_pair_state(1, M, {{DickePair(1, 0, M, q + 1), 1.0}})};
}

Protocol sequential_dicke_protocol(int M0, int q_target, const std::vector<DispersiveParams>& schedule) {
  if (M0 < 1 || q_target < 0) throw ConfigError("sequential protocol needs M0 >= 1 and q_target >= 0");
  if (static_cast<int>(schedule.size()) != q_target) {
    throw ConfigError("schedule has " + std::to_string(schedule.size()) + " rows for " + std::to_string(q_target) +
                      " steps");
  }
  Protocol p{"dicke-seq", symmetric_dicke(M0, 0), {}, symmetric_dicke(M0 + q_target, q_target)};
  for (int i = 0; i < q_target; ++i) {
    const int M = M0 + i;
    const auto& par = schedule[static_cast<std::size_t>(i)];
    if (par.N() != 1 || par.M() != M) {
      throw ConfigError("schedule row " + std::to_string(i) + " must have N = 1, M = " + std::to_string(M));
    }
    const double el = transition_element(minus_from(1, 1, M, i), par);
    std::ostringstream label;
    label << "grow |e>|D_" << i << "^" << M << "> -> |D_" << i + 1 << "^" << M + 1 << ">";
    p.steps.push_back(ProtocolStep{effective_dicke(par), tau_dicke(M, i, el), std::nullopt, true, true, label.str(),
                                   symmetric_dicke(M + 1, i + 1)});
  }
  return p;
}

Protocol noon_protocol(int N, const std::vector<DispersiveParams>& schedule) {
  const auto trans = noon_transitions(N);
  if (schedule.size() != trans.size()) {
    throw ConfigError("NOON schedule needs " + std::to_string(N) + " rows, got " + std::to_string(schedule.size()));
  }
  const double r = 1.0 / std::sqrt(2.0);
  const DickePair top(N, N, N, 0);
  Protocol p{"noon", dicke_pair_state(N, N, {{top, 1.0}}), {},
             dicke_pair_state(N, N, {{top, r}, {DickePair(N, 0, N, N), r}})};
  for (int i = 0; i < N; ++i) {
    const auto& par = schedule[static_cast<std::size_t>(i)];
    if (par.N() != N || par.M() != N) throw ConfigError("NOON schedule rows must have N = M = " + std::to_string(N));
    const double el = transition_element(trans[static_cast<std::size_t>(i)], par);
    const double dur = i == 0 ? kPi / (4.0 * el) : kPi / (2.0 * el);
    const DickePair reached(N, N - i - 1, N, i + 1);
    const cplx phase = i == 0 ? cplx(0.0, r) : cplx(r, 0.0);
    std::ostringstream label;
    label << (i == 0 ? "split " : "transfer ") << "(" << N - i << "," << i << ")->(" << N - i - 1 << "," << i + 1 << ")";
    p.steps.push_back(ProtocolStep{effective_dicke(par), dur, std::nullopt, false, false, label.str(),
                                   dicke_pair_state(N, N, {{top, r}, {reached, phase}})});
  }
  return p;
}

const char* to_string(Engine e) {
  switch (e) {
    case Engine::Analytic: return "analytic";
    case Engine::Effective: return "effective";
    case Engine::Full: return "full";
    case Engine::Lindblad: return "lindblad";
  }
  return "?";
}

Engine engine_from_string(const std::string& s) {
  if (s == "analytic") return Engine::Analytic;
  if (s == "effective") return Engine::Effective;
  if (s == "full") return Engine::Full;
  if (s == "lindblad") return Engine::Lindblad;
  throw ConfigError("unknown engine '" + s + "' (expected analytic, effective, full or lindblad)");
}

RunRecord run_protocol(const Protocol& p, Engine engine, const RunOptions& opt) {
  const bool sym_native = p.initial.space().representation() == Representation::Symmetric;
  if (engine == Engine::Analytic && sym_native) throw ConfigError("the analytic engine covers resonant steps only");
  const int lab_cutoff = opt.cutoff > 0 ? opt.cutoff : (sym_native ? 2 : 0);
  const Realization real{engine, lab_cutoff, sym_native};
  if (engine == Engine::Lindblad) opt.dissipation.validate();

  RunRecord rec{p.name, engine, opt.seed, {}, realize(p.initial, real), kNaN, std::nullopt, true};
  if (engine == Engine::Lindblad) rec.final_state = DensityMatrix::from_pure(realize(p.initial, real));
  double t = 0.0;

  for (std::size_t si = 0; si < p.steps.size(); ++si) {
    const ProtocolStep& step = p.steps[si];
    StepRecord sr;
    sr.label = step.label;
    sr.t_start = t;
    sr.duration = step.duration;

    if (engine == Engine::Lindblad) {
      if (step.prepend_ancilla || step.merge_ancilla) throw ConfigError("the lindblad engine does not support ancilla growth");
      auto& rho = std::get<DensityMatrix>(rec.final_state);
      const HamiltonianSpec h = engine_hamiltonian(step, StateVector::basis(rho.space(), 0), engine);
      check_groups(h, rho.space());
      LindbladOptions lo;
      lo.tol = opt.tol;
      auto ev = evolve_lindblad(h, opt.dissipation, rho, step.duration, lo);
      sr.norm_drift = ev.max_drift;
      DensityMatrix out = ev.states.back();
      if (step.herald) {
        const auto pe = project_qubit(out, step.herald->qubit, Outcome::Excited).probability;
        Outcome o = step.herald->outcome;
        if (opt.sampling) o = seeded_uniform(opt.seed + si) < pe ? Outcome::Excited : Outcome::Ground;
        auto proj = project_qubit(out, step.herald->qubit, o);
        sr.outcome = o;
        sr.herald_probability = proj.probability;
        sr.heralded = o == step.herald->outcome;
        out = proj.collapsed;
      }
      rho = out;
      const StateVector* ref = step.expected ? &*step.expected : (si + 1 == p.steps.size() ? &p.target : nullptr);
      if (ref) {
        const Score sc = score_mixed(rho, *ref);
        sr.fidelity = sc.fidelity;
        sr.leakage = sc.leakage;
      } else {
        sr.fidelity = kNaN;
      }
      sr.conservation_drift = kNaN;
      rec.steps.push_back(sr);
      t += step.duration;
      if (!sr.heralded) {
        rec.completed = false;
        break;
      }
      continue;
    }

    StateVector s = std::get<StateVector>(rec.final_state);
    if (step.prepend_ancilla) s = prepend_excited(s);
    const HamiltonianSpec h = engine_hamiltonian(step, s, engine);
    check_groups(h, s.space());
    const double k0 = conserved_quantity(h, s);

    if (engine == Engine::Analytic) {
      const auto& m = std::get<ResonantTC>(h.model());
      const auto amps = from_state(s);
      if (std::abs(amps.norm_squared() - s.amplitudes().squaredNorm()) > 1e-12) {
        throw ConfigError("the analytic engine covers the single-excitation sector only");
      }
      s = to_state(propagate_single_excitation(m.profile, amps, step.duration), *s.space().cutoff());
    } else if (h.time_dependent() && corotating_generator(h)) {
      auto ev = evolve_corotating(h, s, step.duration);
      sr.norm_drift = ev.max_drift;
      s = ev.states.back();
    } else if (!h.time_dependent()) {
      auto ev = evolve_exact(h, s, step.duration);
      sr.norm_drift = ev.max_drift;
      s = ev.states.back();
    } else {
      AdaptiveOptions ao;
      ao.tol = opt.tol;
      auto ev = evolve_tdep(h, s, step.duration, ao);
      sr.norm_drift = ev.max_drift;
      s = ev.states.back();
    }
    sr.conservation_drift = std::abs(conserved_quantity(h, s) - k0);

    if (step.herald) {
      Outcome o = step.herald->outcome;
      if (opt.sampling) {
        auto m = measure_qubit(s, step.herald->qubit, opt.seed + si);
        o = m.outcome;
        sr.herald_probability = m.probability;
        s = m.collapsed;
      } else {
        auto proj = project_qubit(s, step.herald->qubit, o);
        sr.herald_probability = proj.probability;
        s = proj.collapsed;
      }
      sr.outcome = o;
      sr.heralded = o == step.herald->outcome;
    }

    double merge_loss = 0.0;
    if (step.merge_ancilla) {
      const StateVector sym = s.space().representation() == Representation::Symmetric ? s : lab_to_symmetric(s);
      require_ancilla_layout(sym.space());
      const double phase = merge_phase(sym);
      sr.ancilla_phase = phase;
      if (s.space().representation() == Representation::Symmetric) {
        const double before = s.amplitudes().squaredNorm();
        s = merge_symmetric(s, phase);
        merge_loss = std::max(0.0, before - s.amplitudes().squaredNorm());
      } else {
        s = merge_lab(s, phase);
      }
    }

    const StateVector* ref = step.expected ? &*step.expected : (si + 1 == p.steps.size() ? &p.target : nullptr);
    if (ref) {
      const Score sc = score_pure(s, *ref);
      sr.fidelity = sc.fidelity;
      sr.phase_corrected = sc.phase_corrected;
      sr.leakage = sc.leakage + merge_loss;
    } else {
      sr.fidelity = kNaN;
      sr.leakage = merge_loss;
    }
    rec.final_state = s;
    rec.steps.push_back(sr);
    t += step.duration;
    if (!sr.heralded) {
      rec.completed = false;
      break;
    }
  }

  if (rec.completed) {
    if (const auto* s = std::get_if<StateVector>(&rec.final_state)) {
      const Score sc = score_pure(*s, p.target);
      rec.final_fidelity = sc.fidelity;
      rec.final_phase_corrected = sc.phase_corrected;
    } else {
      rec.final_fidelity = score_mixed(std::get<DensityMatrix>(rec.final_state), p.target).fidelity;
    }
  }
  return rec;
}

}  // namespace qbus
