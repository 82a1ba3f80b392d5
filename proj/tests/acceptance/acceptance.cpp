// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "oho/fock.hpp"
#include "oho/lax.hpp"
#include "oho/operad.hpp"
#include "oho/oscillator.hpp"
#include "oho/qjacobi.hpp"

using namespace oho;

namespace {

struct Outcome
{
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double v)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const std::vector<BianchiSpec>& family_grid()
{
  static const std::vector<BianchiSpec> g{
      BianchiSpec(BianchiFamily::VII_a, 0.5), BianchiSpec(BianchiFamily::VII_a, 1.0),
      BianchiSpec(BianchiFamily::VII_a, 2.0), BianchiSpec(BianchiFamily::III_1),
      BianchiSpec(BianchiFamily::VI_a, 0.5),  BianchiSpec(BianchiFamily::VI_a, 2.0),
  };
  return g;
}

const std::vector<BianchiSpec>& families()
{
  static const std::vector<BianchiSpec> f{BianchiSpec(BianchiFamily::VII_a, 1.0), BianchiSpec(BianchiFamily::III_1),
                                          BianchiSpec(BianchiFamily::VI_a, 0.5)};
  return f;
}

bool strictly_decreasing(const std::vector<double>& v)
{
  for (std::size_t k = 1; k < v.size(); ++k)
    if (!(v[k] < v[k - 1]))
      return false;
  return true;
}

// 1 ---------------------------------------------------------------------------
Outcome graded_lie()
{
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<int> ud(1, 3), ug(1, 3), uc(-3, 3);
  auto op = [&](int d) {
    MultiOp f(ug(rng), d);
    for (double& c : f.coeffs())
      c = uc(rng);
    return f;
  };
  double anti = 0.0, jac = 0.0;
  for (int n = 0; n < 500; ++n) {
    const int d = ud(rng);
    const MultiOp f = op(d), g = op(d), h = op(d);
    const int F = f.reduced_degree(), G = g.reduced_degree(), H = h.reduced_degree();
    anti = std::max(anti, (gerstenhaber(f, g) + parity_sign(F * G) * gerstenhaber(g, f)).max_abs());
    const MultiOp j = parity_sign(F * H) * gerstenhaber(f, gerstenhaber(g, h)) +
                      parity_sign(G * F) * gerstenhaber(g, gerstenhaber(h, f)) +
                      parity_sign(H * G) * gerstenhaber(h, gerstenhaber(f, g));
    jac = std::max(jac, j.max_abs());
  }
  return {anti == 0.0 && jac == 0.0,
          "500 integer triples: max antisymmetry defect " + fmt("%g", anti) + ", max Jacobi defect " + fmt("%g", jac)};
}

// 2 ---------------------------------------------------------------------------
Outcome matrix_lax()
{
  const OscParams params = OscParams::from_energy(1.0, 2.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0), uw(0.2, 3.0);
  double resid = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const OscParams p(uw(rng), 1.0);
    const double q = u(rng), pp = u(rng);
    const Mat3 L = build_L(q, pp, p), M = build_M(p);
    resid = std::max(resid, (lax_time_derivative(q, pp, p) - (M * L - L * M)).cwiseAbs().maxCoeff());
  }
  Vec3 expected(-params.p0(), 1.0, params.p0());
  double spec = 0.0;
  for (int k = 0; k <= 2000; ++k) {
    const OscState s = analytic_state(2.0 * params.period() * k / 2000.0, params);
    spec = std::max(spec, (lax_spectrum(s.q, s.p, params) - expected).cwiseAbs().maxCoeff());
  }
  return {resid < 1e-12 && spec < 1e-10,
          "residual " + fmt("%.2e", resid) + " (< 1e-12), spectrum deviation " + fmt("%.2e", spec) + " (< 1e-10)"};
}

// 3 ---------------------------------------------------------------------------
Outcome operadic_lax()
{
  const OscParams params = OscParams::from_energy(1.0, 2.0);
  const double T = params.period();
  const double dt0 = 1e-3 * T;
  double lo = INFINITY, hi = -INFINITY, pde = 0.0;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const BianchiSpec& s : family_grid()) {
    for (double frac : {0.11, 0.29, 0.53, 0.77, 1.37}) {
      const double t = frac * T;
      const double r0 = operadic_lax_residual(s, t, dt0, params);
      const double r1 = operadic_lax_residual(s, t, dt0 / 2.0, params);
      const double r2 = operadic_lax_residual(s, t, dt0 / 4.0, params);
      for (double r : {r0 / r1, r1 / r2}) {
        lo = std::min(lo, r);
        hi = std::max(hi, r);
      }
    }
    for (int n = 0; n < 100;) {
      const double q = u(rng), p = u(rng);
      if (hamiltonian(q, p, params.omega()) <= 0.1)
        continue;
      pde = std::max(pde, operadic_lax_pde_residual(s, q, p, params));
      ++n;
    }
  }
  return {lo >= 3.6 && hi <= 4.4 && pde < 1e-10,
          "Richardson ratios in [" + fmt("%.4f", lo) + ", " + fmt("%.4f", hi) + "] (need [3.6, 4.4]), PDE residual " +
              fmt("%.2e", pde) + " (< 1e-10)"};
}

// 4 ---------------------------------------------------------------------------
Outcome tables_round_trip()
{
  const OscParams params = OscParams::from_energy(1.0, 2.0);
  double worst = 0.0;
  bool exact_t0 = true;
  for (const BianchiSpec& s : family_grid()) {
    exact_t0 = exact_t0 && evolve_algebra(s, 0.0, params) == s.initial_table();
    const CParams C = solve_constants(s.initial_table(), params.p0());
    exact_t0 = exact_t0 &&
               build_mu(C, analytic_state(0.0, params), quasi_state(0.0, params), params) == s.initial_table();
    for (int k = 0; k < 64; ++k) {
      const double t = 2.0 * params.period() * k / 64.0;
      worst = std::max(worst, theorem_algebra(s, t, params).max_abs_diff(evolve_algebra(s, t, params)));
    }
  }
  return {worst < 1e-12 && exact_t0, "max entry difference " + fmt("%.2e", worst) + " (< 1e-12), t = 0 exact: " +
                                         (exact_t0 ? "yes" : "no")};
}

// 5 ---------------------------------------------------------------------------
Outcome classical_jacobi()
{
  const OscParams params = OscParams::from_energy(1.0, 2.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ut(0.0, 4.0 * params.period()), u(-1.0, 1.0);
  auto rv = [&] { return Vec3(u(rng), u(rng), u(rng)); };
  double worst = 0.0;
  for (const BianchiSpec& s : family_grid())
    for (int n = 0; n < 1000; ++n) {
      const StructureTable mu = evolve_algebra(s, ut(rng), params);
      const Vec3 x = rv(), y = rv(), z = rv();
      worst = std::max(worst, classical_jacobiator(mu, x, y, z).cwiseAbs().maxCoeff());
    }
  return {worst <= 1e-10, "max Jacobiator " + fmt("%.2e", worst) + " over 1000 samples per family (<= 1e-10)"};
}

// 6 ---------------------------------------------------------------------------
Outcome quasi_poisson()
{
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  const OscParams params(1.3, 1.0);
  const PhaseField P = [&](double q, double p) { return quasi_from_phase_point(q, p, params).P; };
  const PhaseField Q = [&](double q, double p) { return quasi_from_phase_point(q, p, params).Q; };
  double worst = 0.0;
  for (int n = 0; n < 100;) {
    const double q = u(rng), p = u(rng);
    const double H = hamiltonian(q, p, params.omega());
    if (H <= 0.1)
      continue;
    const double eps = params.omega() / (2.0 * std::sqrt(2.0 * H));
    worst = std::max(worst, std::abs(poisson_bracket_fd(P, Q, {0.0, q, p}, 1e-5) - eps));
    ++n;
  }
  return {worst < 1e-5, "max |{P,Q} - w/(2 sqrt(2H))| = " + fmt("%.2e", worst) + " (< 1e-5)"};
}

// 7 ---------------------------------------------------------------------------
const std::vector<double> kHbar{0.2, 0.1, 0.05, 0.025};

Outcome quasi_ccr()
{
  const auto rows = quasi_ccr_sweep(1.0, 2.0, kHbar);
  std::vector<double> sym, comm;
  std::string detail = "sym";
  for (const auto& r : rows) {
    sym.push_back(r.sym_resid);
    comm.push_back(r.comm_resid);
    detail += " " + fmt("%.2e", r.sym_resid);
  }
  detail += ", comm";
  for (double c : comm)
    detail += " " + fmt("%.2e", c);
  const double ratio = rows.back().comm_ratio;
  const bool band = std::abs(ratio - 0.25) <= 0.05 * 0.25;
  detail += ", ratio at hbar=0.025 " + fmt("%.5f", ratio) + " (0.25 +- 5%)";
  return {strictly_decreasing(sym) && strictly_decreasing(comm) && band, detail};
}

// 8 ---------------------------------------------------------------------------
Outcome theorem_cross_validation()
{
  bool pass = true;
  std::string detail;
  for (const BianchiSpec& s : families()) {
    const OrderingReport r = select_ordering(s);
    pass = pass && r.passed && r.selected == Ordering::StructLeft;
    detail += std::string(s.name()) + ": left " + fmt("%.2e", r.resid_left) + " right " + fmt("%.2e", r.resid_right) +
              " -> " + std::string(ordering_name(r.selected)) + "; ";
  }
  return {pass, detail + "threshold 1e-8"};
}

// 9, 10 -----------------------------------------------------------------------
struct SweepCache
{
  std::vector<ScalingRow> rows;
};

const SweepCache& sweep()
{
  static const SweepCache cache{jacobi_deformation_scaling(BianchiSpec(BianchiFamily::VII_a, 1.0), 1.0, 2.0, kHbar,
                                                           Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ())};
  return cache;
}

Outcome semiclassical_chain()
{
  const auto& rows = sweep().rows;
  bool dec = true;
  std::string detail = "J resid";
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> r;
    for (const auto& row : rows)
      r.push_back(row.J_resid[i]);
    dec = dec && strictly_decreasing(r);
  }
  for (const auto& row : rows)
    detail += " " + fmt("%.2e", row.J_resid[0]);

  // Ĥ → E substitution against the corollary, several triples and spaces
  double sub = 0.0;
  for (double hb : {0.2, 0.05}) {
    const FockSpace sp(truncation_for_energy(2.0, hb, 1.0), 1.0, hb);
    for (const BianchiSpec& s : families()) {
      const QuantumStructure S = QuantumStructure::build(s, sp, 2.0);
      const auto [x, y, z] = random_triple(static_cast<std::uint64_t>(hb * 1000));
      const JacobiComponents a = semiclassical_on_shell(x, y, z, S, 2.0);
      const JacobiComponents b = corollary_H_equals_E(x, y, z, S, 2.0);
      for (std::size_t i = 0; i < 3; ++i)
        sub = std::max(sub, (a.J[i] - b.J[i]).matrix().cwiseAbs().maxCoeff());
    }
  }
  double coeff = 0.0;
  for (double p0 : {0.5, 1.0, 2.0, 3.7})
    coeff = std::max(coeff, std::abs(2.0 * std::sqrt(2.0 * p0 * p0 * p0) - std::sqrt(std::pow(2.0 * p0, 3))));
  detail += "; H->E vs corollary " + fmt("%.2e", sub) + ", coefficient identity " + fmt("%.2e", coeff);

  std::string ratios;
  cplx last;
  for (double hb : kHbar) {
    last = corollary_ratio(BianchiSpec(BianchiFamily::VII_a, 1.0), 1.0, 2.0, hb, Vec3::UnitX(), Vec3::UnitY(),
                           Vec3::UnitZ());
    ratios += " " + fmt("%.4f", last.real());
  }
  const bool ratio_ok = std::abs(last.real() - 1.0) <= 0.1 && std::abs(last.imag()) <= 0.1;
  detail += "; <J1_direct>/<J1_corollary> over the sweep" + ratios + " (need [0.9, 1.1] at hbar=0.025)";
  return {dec && sub < 1e-12 && coeff < 1e-12 && ratio_ok, detail};
}

Outcome deformation_scaling()
{
  const auto& rows = sweep().rows;
  bool slopes = true;
  std::string detail = "J3 slopes";
  for (std::size_t k = 1; k < rows.size(); ++k) {
    slopes = slopes && rows[k].slope3 >= 0.9 && rows[k].slope3 <= 1.1;
    detail += " " + fmt("%.4f", rows[k].slope3);
  }
  const double fit = std::log(rows.back().J_norm[2] / rows.front().J_norm[2]) /
                     std::log(rows.back().hbar / rows.front().hbar);
  slopes = slopes && fit >= 0.9 && fit <= 1.1;
  detail += ", end-to-end " + fmt("%.4f", fit);
  bool dec = true;
  for (std::size_t i = 0; i < 3; ++i) {
    std::vector<double> n;
    for (const auto& row : rows)
      n.push_back(row.J_norm[i]);
    dec = dec && strictly_decreasing(n);
  }
  detail += ", norms at hbar=0.025: " + fmt("%.2e", rows.back().J_norm[0]) + " " + fmt("%.2e", rows.back().J_norm[1]) +
            " " + fmt("%.2e", rows.back().J_norm[2]);
  return {slopes && dec, detail};
}

// Splits ⟨Ĵ¹⟩ of the semiclassical form on the probe into the energy-gap term
// P̂(√(2E) − Ŝ) and the ħ term; the corollary keeps only the latter.
std::string ratio_breakdown()
{
  const double hb = kHbar.back(), E = 2.0;
  const FockSpace sp(truncation_for_energy(E, hb, 1.0), 1.0, hb);
  const QuantumOscillator o = QuantumOscillator::build(sp);
  const CoherentState psi = coherent(sp, alpha_on_shell(E, std::numbers::pi / 2.0, hb, 1.0));
  const QOperator gap = std::sqrt(2.0 * E) * QOperator::identity(sp) - o.quasi.S;
  const cplx g = expectation(psi, o.quasi.P * gap);
  const cplx h = expectation(psi, cplx(0.0, -hb) * 0.5 * (o.quasi.Q * o.quasi.eps));
  return "info: on the probe at hbar=0.025, <P(sqrt(2E)-S)> = " + fmt("%.4e", g.real()) + fmt("%+.4ei", g.imag()) +
         ", <-(hbar/i)Q eps/2> = " + fmt("%.4e", -h.real()) + fmt("%+.4ei", -h.imag()) +
         "; the gap term the corollary drops is of the same order as the term it keeps";
}

} // namespace

int main()
{
  const std::vector<std::pair<int, std::function<Outcome()>>> criteria{
      {1, graded_lie},        {2, matrix_lax},   {3, operadic_lax},           {4, tables_round_trip},
      {5, classical_jacobi},  {6, quasi_poisson}, {7, quasi_ccr},             {8, theorem_cross_validation},
      {9, semiclassical_chain}, {10, deformation_scaling},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s  %s  [%.2f s]\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
    if (id == 9 && !o.pass)
      std::printf("              %s\n", ratio_breakdown().c_str());
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
