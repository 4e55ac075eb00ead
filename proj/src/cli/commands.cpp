#include "qbus/cli/commands.hpp"

#include <omp.h>

#include <cmath>
#include <exception>
#include <filesystem>
#include <functional>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "qbus/analytic.hpp"
#include "qbus/cli/output.hpp"
#include "qbus/design.hpp"
#include "qbus/dynamics.hpp"
#include "qbus/error.hpp"
#include "qbus/metrics.hpp"
#include "qbus/protocols.hpp"

namespace qbus::cli {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * kPi;

// Evaluate fn(i) for i in [0, n) on up to `workers` threads; results keep index order.
template <class R>
std::vector<R> parallel_map(std::size_t n, int workers, const std::function<R(std::size_t)>& fn) {
  std::vector<std::optional<R>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    try {
      slots[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

std::vector<double> time_grid(double t_final, int samples) {
  if (samples < 2) throw ConfigError("samples must be >= 2");
  std::vector<double> t(static_cast<std::size_t>(samples));
  for (int i = 0; i < samples; ++i) t[static_cast<std::size_t>(i)] = t_final * i / (samples - 1);
  return t;
}

std::string basis_label(const SpaceSpec& sp, std::size_t index) {
  std::ostringstream os;
  if (sp.representation() == Representation::Symmetric) {
    const auto ex = sp.symmetric_excitations(index);
    for (std::size_t g = 0; g < ex.size(); ++g) os << (g ? " " : "") << "D" << ex[g] << "^" << sp.groups()[g];
  } else {
    for (int j = 0; j < sp.num_qubits(); ++j) os << (sp.excited(index, j) ? 'e' : 'g');
  }
  if (sp.has_boson()) os << " n=" << sp.photons(index);
  return os.str();
}

json state_json(const StateVector& s, double threshold = 1e-12) {
  json arr = json::array();
  for (std::size_t i = 0; i < s.dim(); ++i) {
    if (std::abs(s[i]) <= threshold) continue;
    arr.push_back({{"basis", basis_label(s.space(), i)}, {"re", s[i].real()}, {"im", s[i].imag()},
                   {"population", std::norm(s[i])}});
  }
  return arr;
}

std::string transition_label(const TransitionSpec& t) {
  std::ostringstream os;
  const auto tgt = t.target();
  os << "(" << t.source.left.q << "," << t.source.right.q << ")->(" << tgt.left.q << "," << tgt.right.q << ")";
  return os.str();
}

json params_json(const DispersiveParams& p) {
  return {{"N", p.N()},
          {"M", p.M()},
          {"g1", p.g1()},
          {"g2", p.g2()},
          {"delta1", p.delta1()},
          {"delta2", p.delta2()},
          {"lambda1", p.lambda1()},
          {"lambda2", p.lambda2()},
          {"omega_eff", p.omega_eff()},
          {"delta", p.detuning()},
          {"dispersive_ratio", p.dispersive_ratio()}};
}

json report_json(const SelectivityReport& r) {
  json rows = json::array();
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto& row = r.rows[i];
    rows.push_back({{"transition", transition_label(row.transition)},
                    {"chosen", i == 0},
                    {"detuning", row.detuning},
                    {"element", row.element},
                    {"ratio", row.ratio}});
  }
  return {{"chosen", transition_label(r.chosen)},
          {"params", params_json(r.params)},
          {"populated_totals", r.populated_totals},
          {"margin", std::isinf(r.margin) ? json(nullptr) : json(r.margin)},
          {"rows", rows}};
}

json record_json(const RunRecord& rec) {
  json steps = json::array();
  for (const auto& s : rec.steps) {
    steps.push_back({{"label", s.label},
                     {"t_start", s.t_start},
                     {"duration", s.duration},
                     {"fidelity", s.fidelity},
                     {"phase_corrected", s.phase_corrected ? json(*s.phase_corrected) : json(nullptr)},
                     {"outcome", s.outcome ? json(to_string(*s.outcome)) : json(nullptr)},
                     {"herald_probability", s.herald_probability},
                     {"heralded", s.heralded},
                     {"leakage", s.leakage},
                     {"conservation_drift", s.conservation_drift},
                     {"norm_drift", s.norm_drift},
                     {"ancilla_phase", s.ancilla_phase ? json(*s.ancilla_phase) : json(nullptr)}});
  }
  json out = {{"protocol", rec.protocol},
              {"engine", to_string(rec.engine)},
              {"seed", rec.seed},
              {"completed", rec.completed},
              {"final_fidelity", rec.final_fidelity},
              {"final_phase_corrected", rec.final_phase_corrected ? json(*rec.final_phase_corrected) : json(nullptr)},
              {"steps", steps}};
  if (const auto* s = std::get_if<StateVector>(&rec.final_state)) out["final_state"] = state_json(*s);
  return out;
}

CsvTable steps_table(const RunRecord& rec) {
  CsvTable t({"step", "label", "t_start", "duration", "fidelity", "phase_corrected", "herald_probability", "leakage",
              "conservation_drift", "ancilla_phase", "norm_drift"});
  for (std::size_t i = 0; i < rec.steps.size(); ++i) {
    const auto& s = rec.steps[i];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    t.add_row(std::vector<std::string>{
        std::to_string(i), s.label, format_number(s.t_start), format_number(s.duration), format_number(s.fidelity),
        format_number(s.phase_corrected.value_or(nan)), format_number(s.herald_probability), format_number(s.leakage),
        format_number(s.conservation_drift), format_number(s.ancilla_phase.value_or(nan)), format_number(s.norm_drift)});
  }
  return t;
}

struct Context {
  const RunConfig& cfg;
  std::vector<std::string> written;

  std::string path(const std::string& name) const { return (std::filesystem::path(cfg.output) / name).string(); }
  void csv(const std::string& name, const CsvTable& t) {
    t.write(path(name), cfg);
    written.push_back(path(name));
  }
  void report(const std::string& name, json body) {
    write_json_report(path(name), cfg, std::move(body));
    written.push_back(path(name));
  }
};

double two_qubit_concurrence(const StateVector& s) {
  return concurrence(partial_trace(DensityMatrix::from_pure(s), {0, 1}));
}

// ---------------------------------------------------------------------------

void cmd_two_qubit(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const double chi1 = cfg.params["chi1"].get<double>();
  const double chi2 = cfg.params["ratio"].get<double>() * chi1;
  const CouplingProfile prof({chi1, chi2});
  const double m = mu(prof);
  const auto times = time_grid(2.0 * kPi / m, cfg.params["samples"].get<int>());

  const auto psi0 = StateVector::product("eg", 0, cfg.cutoff);
  std::vector<StateVector> numeric;
  std::vector<double> drift(times.size(), 0.0);
  if (cfg.engine == "analytic") {
    for (double t : times) numeric.push_back(to_state(resonant_amplitudes(prof, 0, t), cfg.cutoff));
  } else {
    const ExactPropagator prop(resonant_tc(prof, cfg.cutoff));
    for (std::size_t i = 0; i < times.size(); ++i) {
      numeric.push_back(prop(psi0, times[i]));
      drift[i] = std::abs(numeric.back().norm() - 1.0);
    }
  }

  CsvTable t({"time", "pop_eg_0", "pop_gg_1", "pop_ge_0", "c_eg_re", "c_eg_im", "c_gg1_re", "c_gg1_im", "c_ge_re",
              "c_ge_im", "analytic_c_eg_re", "analytic_c_eg_im", "analytic_c_gg1_re", "analytic_c_gg1_im",
              "analytic_c_ge_re", "analytic_c_ge_im", "concurrence", "analytic_concurrence", "norm_drift"});
  const auto& sp = numeric.front().space();
  const std::size_t i_eg = sp.index_of("eg", 0), i_gg1 = sp.index_of("gg", 1), i_ge = sp.index_of("ge", 0);
  double max_c = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& s = numeric[i];
    const auto a = resonant_amplitudes(prof, 0, times[i]);
    const double c = two_qubit_concurrence(s);
    max_c = std::max(max_c, c);
    t.add_row(std::vector<double>{times[i], std::norm(s[i_eg]), std::norm(s[i_gg1]), std::norm(s[i_ge]),
                                  s[i_eg].real(), s[i_eg].imag(), s[i_gg1].real(), s[i_gg1].imag(), s[i_ge].real(),
                                  s[i_ge].imag(), a.c[0].real(), a.c[0].imag(), a.c0.real(), a.c0.imag(),
                                  a.c[1].real(), a.c[1].imag(), c, two_qubit_concurrence(to_state(a, 1)), drift[i]});
  }
  t.add_note("initial_state", "|eg>|0>");
  ctx.csv("two_qubit.csv", t);

  const double te = kPi / m;
  const auto ae = resonant_amplitudes(prof, 0, te);
  const StateVector se =
      cfg.engine == "analytic" ? to_state(ae, cfg.cutoff) : ExactPropagator(resonant_tc(prof, cfg.cutoff))(psi0, te);
  ctx.report("two_qubit.json", {{"chi1", chi1},
                                {"chi2", chi2},
                                {"mu", m},
                                {"t_entangled", te},
                                {"photon_amplitude_abs", std::abs(ae.c0)},
                                {"analytic_concurrence", two_qubit_concurrence(to_state(ae, 1))},
                                {"concurrence", two_qubit_concurrence(se)},
                                {"max_concurrence_sampled", max_c}});
}

// ---------------------------------------------------------------------------

struct WResult {
  int N;
  CsvTable trace{{}};
  json summary;
  std::vector<double> row;
};

void cmd_w_state(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto ns = cfg.params["n_values"].get<std::vector<int>>();
  const int k = cfg.params["boosted_qubit"].get<int>();
  const double chi_ref = cfg.params["chi_ref"].get<double>();
  const int samples = cfg.params["samples"].get<int>();
  if (ns.empty()) throw ConfigError("n_values must not be empty");
  for (int n : ns) {
    if (n < 2) throw ConfigError("w-state needs N >= 2 (no multipartite target for N = " + std::to_string(n) + ")");
    if (n > 12) throw ConfigError("w-state supports N <= 12");
    if (k < 0 || k >= n) throw ConfigError("boosted_qubit must lie in 0..N-1 for every N");
  }
  time_grid(1.0, samples);
  const Engine engine = engine_from_string(cfg.engine);

  auto results = parallel_map<WResult>(ns.size(), cfg.workers, [&](std::size_t idx) {
    const int N = ns[idx];
    const auto prof = w_couplings(N, k, chi_ref);
    const double m = mu(prof);
    const auto proto = w_protocol(N, k, chi_ref);
    RunOptions ro;
    ro.seed = cfg.seed;
    ro.cutoff = cfg.cutoff;
    ro.tol = cfg.tolerance;
    const auto rec = run_protocol(proto, engine, ro);
    const auto& fin = std::get<StateVector>(rec.final_state);

    std::vector<std::string> cols{"time"};
    for (int j = 0; j < N; ++j) cols.push_back("pop_e" + std::to_string(j));
    cols.insert(cols.end(), {"pop_photon", "fidelity", "norm_drift"});
    WResult res{N, CsvTable(cols), {}, {}};
    const auto target = w_target(N, cfg.cutoff);
    std::string bits(static_cast<std::size_t>(N), 'g');
    bits[static_cast<std::size_t>(k)] = 'e';
    const auto psi0 = StateVector::product(bits, 0, cfg.cutoff);
    const std::optional<ExactPropagator> prop =
        engine == Engine::Analytic ? std::nullopt : std::optional<ExactPropagator>(resonant_tc(prof, cfg.cutoff));
    for (double t : time_grid(kPi / m, samples)) {
      const StateVector s = prop ? (*prop)(psi0, t) : to_state(resonant_amplitudes(prof, k, t), cfg.cutoff);
      const auto a = from_state(s);
      std::vector<double> row{t};
      for (const auto& c : a.c) row.push_back(std::norm(c));
      row.push_back(std::norm(a.c0));
      row.push_back(fidelity(s, target));
      row.push_back(std::abs(s.norm() - 1.0));
      res.trace.add_row(row);
    }
    const auto af = from_state(fin);
    double max_err = 0.0;
    for (const auto& c : af.c) max_err = std::max(max_err, std::abs(std::norm(c) - 1.0 / N));
    const double chik = prof[static_cast<std::size_t>(k)];
    const double probe = std::norm(resonant_amplitudes(prof, k, kPi / (2.0 * m)).c0);
    res.row = {static_cast<double>(N), chik, m, kPi / m, rec.final_fidelity, rec.final_phase_corrected.value_or(0.0),
               std::norm(af.c0), max_err, probe, chik * chik / (m * m)};
    return res;
  });

  CsvTable summary({"N", "chi_boosted", "mu", "t_final", "fidelity", "phase_corrected", "photon_population",
                    "max_population_error", "probe_photon_population", "probe_expected"});
  summary.add_note("boosted_qubit", std::to_string(k));
  summary.add_note("probe_time", "pi/(2 mu)");
  for (auto& r : results) {
    ctx.csv("w_state_N" + std::to_string(r.N) + ".csv", r.trace);
    summary.add_row(r.row);
  }
  ctx.csv("w_state_summary.csv", summary);
}

// ---------------------------------------------------------------------------

struct Fig1Point {
  std::string variant;
  int N;
  std::vector<double> row;
  std::vector<std::pair<double, double>> series;
};

void cmd_fig1(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto ns = cfg.params["n_values"].get<std::vector<int>>();
  const auto variants = cfg.params["variants"].get<std::vector<std::string>>();
  const double chi_max = kTwoPi * cfg.params["chi_max_mhz"].get<double>();
  LindbladSpec diss{kTwoPi * cfg.params["kappa_mhz"].get<double>(), kTwoPi * cfg.params["gamma_mhz"].get<double>(),
                    kTwoPi * cfg.params["gamma_phi_mhz"].get<double>()};
  const int samples = cfg.params["samples"].get<int>();
  diss.validate();
  if (!(chi_max > 0.0)) throw ConfigError("chi_max_mhz must be positive");
  for (int n : ns) {
    if (n < 2 || n > 8) throw ConfigError("fig1 supports 2 <= N <= 8");
  }
  for (const auto& v : variants) {
    if (v != "photon" && v != "qubit") throw ConfigError("fig1 variants are 'photon' and 'qubit', got '" + v + "'");
  }
  time_grid(1.0, samples);

  std::vector<std::pair<std::string, int>> points;
  for (const auto& v : variants)
    for (int n : ns) points.emplace_back(v, n);

  auto results = parallel_map<Fig1Point>(points.size(), cfg.workers, [&](std::size_t idx) {
    const auto& [variant, N] = points[idx];
    const bool photon = variant == "photon";
    // Photon-seeded: equal couplings make the absorbed photon a W state at pi/(2 mu).
    // Qubit-seeded: boosted coupling on qubit 0 with duration pi/mu.
    const CouplingProfile prof =
        photon ? CouplingProfile(std::vector<double>(static_cast<std::size_t>(N), chi_max))
               : w_couplings(N, 0, chi_max / (1.0 + std::sqrt(static_cast<double>(N))));
    const double m = mu(prof);
    const double duration = photon ? kPi / (2.0 * m) : kPi / m;
    std::string bits(static_cast<std::size_t>(N), 'g');
    if (!photon) bits[0] = 'e';
    const auto psi0 = StateVector::product(bits, photon ? 1 : 0, cfg.cutoff);
    const auto target = w_target(N, cfg.cutoff);
    LindbladOptions lo;
    lo.tol = cfg.tolerance;
    lo.parallel = cfg.workers != 1;
    const auto ev = evolve_lindblad(resonant_tc(prof, cfg.cutoff), diss, DensityMatrix::from_pure(psi0), duration, lo,
                                    time_grid(duration, samples));
    Fig1Point pt{variant, N, {}, {}};
    for (std::size_t i = 0; i < ev.times.size(); ++i) pt.series.emplace_back(ev.times[i], fidelity(ev.states[i], target));
    const auto& rho = ev.states.back();
    pt.row = {static_cast<double>(N), prof[0], prof[prof.size() - 1], m, duration, pt.series.back().second,
              std::abs(rho.trace() - 1.0), rho.min_eigenvalue(), ev.max_drift};
    return pt;
  });

  CsvTable table({"variant", "N", "chi_first", "chi_last", "mu", "duration", "fidelity", "trace_error",
                  "min_eigenvalue", "norm_drift"});
  table.add_note("kappa", format_number(diss.kappa));
  table.add_note("gamma", format_number(diss.gamma));
  table.add_note("gamma_phi", format_number(diss.gamma_phi));
  table.add_note("photon_variant", "|g..g>|1>, equal couplings chi_max, t = pi/(2 mu)");
  table.add_note("qubit_variant", "|e g..g>|0>, chi_0 = chi_max = (1 + sqrt N) chi, t = pi/mu");
  CsvTable series({"variant", "N", "time", "fidelity"});
  for (const auto& p : results) {
    std::vector<std::string> cells{p.variant};
    for (double v : p.row) cells.push_back(format_number(v));
    table.add_row(cells);
    for (const auto& [t, f] : p.series) {
      series.add_row(std::vector<std::string>{p.variant, std::to_string(p.N), format_number(t), format_number(f)});
    }
  }
  ctx.csv("fig1.csv", table);
  ctx.csv("fig1_series.csv", series);
}

// ---------------------------------------------------------------------------

void cmd_fig3(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& P = cfg.params;
  const int M = P["M"].get<int>(), q = P["q"].get<int>();
  const auto amps = P["amplitudes"].get<std::vector<double>>();
  const double g2 = P["g2"].get<double>();
  const double g1 = P["g1_over_g2"].get<double>() * g2;
  const double d1 = P["delta1_over_g2"].get<double>() * g2;
  const std::string solve = P["solve"].get<std::string>();
  if (M < 1 || q < 0 || q >= M) throw ConfigError("fig3 needs M >= 1 and 0 <= q < M");
  if (amps.empty() || amps.size() > static_cast<std::size_t>(M + 1)) throw ConfigError("fig3 needs 1..M+1 amplitudes");
  if (static_cast<std::size_t>(q) >= amps.size()) throw ConfigError("the selected component q has no amplitude");

  std::vector<int> totals;
  double b2 = 0.0;
  for (std::size_t j = 0; j < amps.size(); ++j) {
    b2 += amps[j] * amps[j];
    if (amps[j] != 0.0) totals.push_back(1 + static_cast<int>(j));
  }
  if (!(b2 > 0.0)) throw ConfigError("fig3 amplitudes are all zero");

  const TransitionSpec spec(DickePair(1, 1, M, q), Branch::Minus);
  SelectivityReport rep = [&] {
    if (solve == "none") {
      return selectivity_report(DispersiveParams(1, M, g1, g2, d1, P["delta2_over_delta1"].get<double>() * d1), spec,
                                totals);
    }
    SelectiveRequest rq;
    rq.N = 1;
    rq.M = M;
    rq.spec = spec;
    rq.g1 = g1;
    rq.g2 = g2;
    rq.delta1 = d1;
    rq.delta2 = P["delta2_over_delta1"].get<double>() * d1;
    rq.margin_threshold = P["margin_threshold"].get<double>();
    rq.populated_totals = totals;
    if (solve == "delta2") {
      rq.free = FreeParameter::Delta2;
    } else if (solve == "g1") {
      rq.free = FreeParameter::G1;
    } else {
      throw ConfigError("fig3 solve must be 'delta2', 'g1' or 'none'");
    }
    return solve_selective_params(rq);
  }();
  const auto& par = rep.params;
  const double el = transition_element(spec, par);
  const double t_final = P["tau_span"].get<double>() * kPi / (2.0 * el);
  const auto times = time_grid(t_final, P["samples"].get<int>());

  std::vector<std::pair<DickePair, cplx>> terms;
  for (std::size_t j = 0; j < amps.size(); ++j) terms.push_back({DickePair(1, 1, M, static_cast<int>(j)), amps[j] / std::sqrt(b2)});
  const StateVector psi0 = dicke_pair_state(1, M, terms);

  AdaptiveOptions ao;
  ao.tol = cfg.tolerance;
  std::vector<StateVector> sym;
  double drift = 0.0;
  if (cfg.engine == "effective") {
    auto ev = evolve_corotating(effective_dicke(par), psi0, t_final, times);
    sym = std::move(ev.states);
  } else {
    auto ev = evolve_tdep(lab_dispersive(par, cfg.cutoff), symmetric_to_lab(psi0, cfg.cutoff), t_final, ao, times);
    for (const auto& s : ev.states) sym.push_back(lab_to_symmetric(s));
    drift = ev.max_drift;
  }

  const auto& sp = psi0.space();
  std::vector<std::string> cols{"time", "tau"};
  for (std::size_t j = 0; j < amps.size(); ++j) cols.push_back("pop_e_D" + std::to_string(j));
  cols.push_back("pop_g_D" + std::to_string(q + 1));
  cols.insert(cols.end(), {"leakage", "norm_drift"});
  CsvTable t(cols);
  const double expected_peak = amps[static_cast<std::size_t>(q)] * amps[static_cast<std::size_t>(q)] / b2;
  double peak = 0.0, max_dev = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto& s = sym[i];
    std::vector<double> row{times[i], 2.0 * el * times[i] / kPi};
    double tracked = 0.0;
    for (std::size_t j = 0; j < amps.size(); ++j) {
      const double pj = std::norm(s[sp.symmetric_index({1, static_cast<int>(j)})]);
      row.push_back(pj);
      tracked += pj;
      if (static_cast<int>(j) != q) max_dev = std::max(max_dev, std::abs(pj - amps[j] * amps[j] / b2));
    }
    const double pg = std::norm(s[sp.symmetric_index({0, q + 1})]);
    peak = std::max(peak, pg);
    row.push_back(pg);
    tracked += pg;
    const double nrm = s.amplitudes().squaredNorm();
    row.push_back(1.0 - tracked);
    row.push_back(cfg.engine == "effective" ? std::abs(std::sqrt(nrm) - 1.0) : drift);
    t.add_row(row);
  }
  const double f_nominal = f_factor(0, q + 1, 1, M) * par.omega_eff();
  t.add_note("tau", "tau = 2 * element * t / pi, element = " + format_number(el));
  t.add_note("tau_conversion", "nominal normalization uses f_{0," + std::to_string(q + 1) + "} Omega_eff = " +
                                   format_number(f_nominal) + "; tau_nominal = tau * " + format_number(f_nominal / el));
  t.add_note("selectivity_margin", format_number(rep.margin));
  ctx.csv("fig3.csv", t);
  ctx.report("fig3.json", {{"selectivity", report_json(rep)},
                           {"element", el},
                           {"t_final", t_final},
                           {"expected_peak", expected_peak},
                           {"measured_peak", peak},
                           {"max_nonselected_deviation", max_dev}});
}

// ---------------------------------------------------------------------------

RunOptions run_options(const RunConfig& cfg) {
  RunOptions ro;
  ro.seed = cfg.seed;
  ro.cutoff = cfg.cutoff;
  ro.tol = cfg.tolerance;
  return ro;
}

void cmd_dicke_seq(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& P = cfg.params;
  const int M0 = P["M0"].get<int>(), qt = P["q_target"].get<int>();
  if (M0 < 1 || qt < 0 || M0 + qt > 10) throw ConfigError("dicke-seq needs M0 >= 1, q_target >= 0, M0 + q_target <= 10");
  const auto schedule = sequential_schedule(M0, qt, P["g1"].get<double>(), P["g2"].get<double>(),
                                            P["delta1"].get<double>());
  std::vector<DispersiveParams> params;
  json reports = json::array();
  for (const auto& r : schedule) {
    params.push_back(r.params);
    reports.push_back(report_json(r));
  }
  const auto rec = run_protocol(sequential_dicke_protocol(M0, qt, params), engine_from_string(cfg.engine),
                                run_options(cfg));
  ctx.csv("dicke_seq_steps.csv", steps_table(rec));
  ctx.report("dicke_seq.json", {{"schedule", reports}, {"run", record_json(rec)}});
}

void cmd_noon(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& P = cfg.params;
  const int N = P["N"].get<int>();
  const std::string source = P["source"].get<std::string>();
  if (N < 2 || N > 6) throw ConfigError("noon supports 2 <= N <= 6");
  std::vector<DispersiveParams> params;
  json schedule = json::array();
  if (source == "solve") {
    const double g2 = P["g2"].get<double>();
    const double g1 = P["g1_over_g2"].get<double>() * g2;
    const double d1 = P["delta1_over_g1"].get<double>() * g1;
    for (const auto& r : noon_schedule(N, g1, g2, d1, P["margin_threshold"].get<double>())) {
      params.push_back(r.params);
      schedule.push_back(report_json(r));
    }
  } else if (source == "table1") {
    if (N != 3) throw ConfigError("the tabulated parameter sets are for N = 3");
    for (const auto& row : table1_parameter_sets(P["g2"].get<double>())) {
      params.push_back(row.params);
      schedule.push_back(report_json(selectivity_report(row.params, row.transition, {3})));
    }
  } else {
    throw ConfigError("noon source must be 'solve' or 'table1'");
  }
  RunOptions ro = run_options(cfg);
  ro.dissipation = LindbladSpec{P["kappa"].get<double>(), P["gamma"].get<double>(), 0.0};
  const auto rec = run_protocol(noon_protocol(N, params), engine_from_string(cfg.engine), ro);
  ctx.csv("noon_steps.csv", steps_table(rec));
  ctx.report("noon.json", {{"source", source}, {"schedule", schedule}, {"run", record_json(rec)}});
}

void cmd_selectivity(Context& ctx) {
  const auto& cfg = ctx.cfg;
  const auto& P = cfg.params;
  const std::string source = P["source"].get<std::string>();
  CsvTable t({"set", "transition", "chosen", "detuning", "element", "ratio"});
  json sets = json::array();
  auto add = [&](const std::string& name, const SelectivityReport& r, json extra) {
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const auto& row = r.rows[i];
      t.add_row(std::vector<std::string>{name, transition_label(row.transition), i == 0 ? "1" : "0",
                                         format_number(row.detuning), format_number(row.element),
                                         format_number(row.ratio)});
    }
    json j = report_json(r);
    j["set"] = name;
    for (auto& [k, v] : extra.items()) j[k] = v;
    sets.push_back(j);
  };
  if (source == "table1") {
    for (const auto& row : table1_parameter_sets(P["g2"].get<double>())) {
      add(row.label, selectivity_report(row.params, row.transition, {3}),
          {{"tabulated", {{"delta2_over_delta1", row.delta2_over_delta1},
                        {"g1_over_g2", row.g1_over_g2},
                        {"delta1_over_g1", row.delta1_over_g1},
                        {"delta2_over_g2", row.delta2_over_g2}}},
           {"implied_delta2_over_delta1", row.implied_delta2_over_delta1},
           {"detuning_literal_convention", row.detuning_literal}});
    }
  } else {
    const int N = P["N"].get<int>(), M = P["M"].get<int>();
    const std::string br = P["branch"].get<std::string>();
    if (br != "+" && br != "-") throw ConfigError("branch must be '+' or '-'");
    const TransitionSpec spec(DickePair(N, P["k"].get<int>(), M, P["q"].get<int>()),
                              br == "+" ? Branch::Plus : Branch::Minus);
    auto totals = P["populated_totals"].get<std::vector<int>>();
    if (source == "params") {
      const DispersiveParams par(N, M, P["g1"].get<double>(), P["g2"].get<double>(), P["delta1"].get<double>(),
                                 P["delta2"].get<double>());
      add("params", selectivity_report(par, spec, totals), json::object());
    } else if (source == "solve") {
      SelectiveRequest rq;
      rq.N = N;
      rq.M = M;
      rq.spec = spec;
      rq.g1 = P["g1"].get<double>();
      rq.g2 = P["g2"].get<double>();
      rq.delta1 = P["delta1"].get<double>();
      rq.delta2 = P["delta2"].get<double>();
      const std::string fr = P["free"].get<std::string>();
      if (fr != "g1" && fr != "delta2") throw ConfigError("free must be 'g1' or 'delta2'");
      rq.free = fr == "g1" ? FreeParameter::G1 : FreeParameter::Delta2;
      rq.margin_threshold = P["margin_threshold"].get<double>();
      rq.populated_totals = totals;
      try {
        add("solve", solve_selective_params(rq), json::object());
      } catch (const SelectivityError& e) {
        // Keep the diagnostics of a rejected solution, then fail with exit code 3.
        if (e.report()) {
          add("solve", *e.report(), {{"status", "rejected"}, {"reason", e.what()}});
          ctx.csv("selectivity.csv", t);
          ctx.report("selectivity.json", {{"source", source}, {"sets", sets}});
        }
        throw;
      }
    } else {
      throw ConfigError("selectivity source must be 'table1', 'params' or 'solve'");
    }
  }
  t.add_note("detuning_convention", "validated: -/+ delta + (delta_target - delta_source)");
  ctx.csv("selectivity.csv", t);
  ctx.report("selectivity.json", {{"source", source}, {"sets", sets}});
}

}  // namespace

std::vector<std::string> run_command(const RunConfig& cfg) {
  ensure_output_dir(cfg.output);
  Context ctx{cfg, {}};
  if (cfg.command == "two-qubit") {
    cmd_two_qubit(ctx);
  } else if (cfg.command == "w-state") {
    cmd_w_state(ctx);
  } else if (cfg.command == "fig1") {
    cmd_fig1(ctx);
  } else if (cfg.command == "fig3") {
    cmd_fig3(ctx);
  } else if (cfg.command == "dicke-seq") {
    cmd_dicke_seq(ctx);
  } else if (cfg.command == "noon") {
    cmd_noon(ctx);
  } else if (cfg.command == "selectivity") {
    cmd_selectivity(ctx);
  } else {
    throw ConfigError("unknown command '" + cfg.command + "'");
  }
  std::ofstream out(ctx.path("resolved_config.json"), std::ios::binary);
  if (!out) throw ConfigError("cannot write resolved_config.json");
  out << cfg.to_json().dump(2) << "\n";
  ctx.written.push_back(ctx.path("resolved_config.json"));
  return ctx.written;
}

int main_entry(int argc, char** argv) {
  CLI::App app{"Inhomogeneous-coupling cavity/ion entanglement simulator"};
  app.require_subcommand(1);
  struct Flags {
    std::string config, out, engine;
    std::uint64_t seed = 0;
    int cutoff = 0;
    bool print_defaults = false;
  };
  std::map<std::string, Flags> flags;
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    auto& f = flags[name];
    sub->add_option("--config", f.config, "JSON config file");
    sub->add_option("--out", f.out, "output directory");
    sub->add_option("--engine", f.engine, "analytic | effective | full | lindblad");
    sub->add_option("--seed", f.seed, "RNG seed");
    sub->add_option("--cutoff", f.cutoff, "boson cutoff");
    sub->add_flag("--print-defaults", f.print_defaults, "print the default config and exit");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    for (const auto& name : command_names()) {
      auto* sub = app.get_subcommand(name);
      if (!sub->parsed()) continue;
      const auto& f = flags[name];
      if (f.print_defaults) {
        std::cout << default_config(name).dump(2) << "\n";
        return 0;
      }
      Overrides ov;
      if (sub->count("--out")) ov.output = f.out;
      if (sub->count("--engine")) ov.engine = f.engine;
      if (sub->count("--seed")) ov.seed = f.seed;
      if (sub->count("--cutoff")) ov.cutoff = f.cutoff;
      const json doc = f.config.empty() ? json(nullptr) : read_json_file(f.config);
      const RunConfig cfg = resolve_config(name, doc, ov);
      for (const auto& p : run_command(cfg)) std::cout << p << "\n";
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "qbus: config error: " << e.what() << "\n";
    return 2;
  } catch (const PhysicsError& e) {
    std::cerr << "qbus: physics validation failed: " << e.what() << "\n";
    return 3;
  } catch (const NumericalError& e) {
    std::cerr << "qbus: numerical failure: " << e.what() << "\n";
    return 4;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "qbus: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "qbus: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "qbus: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "qbus: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "qbus: error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace qbus::cli
