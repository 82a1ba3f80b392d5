#include "oho/oscillator.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace oho {

OscParams::OscParams(double omega, double p0) : m_omega(omega), m_p0(p0), m_energy(0.5 * p0 * p0)
{
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("OscParams: omega must be finite and > 0");
  if (!(p0 > 0.0) || !std::isfinite(p0))
    throw std::invalid_argument("OscParams: p0 must be finite and > 0");
}

OscParams OscParams::from_energy(double omega, double energy)
{
  if (!(energy > 0.0))
    throw std::invalid_argument("OscParams: energy must be > 0");
  return OscParams(omega, std::sqrt(2.0 * energy));
}

double OscParams::period() const { return 2.0 * std::numbers::pi / m_omega; }

double hamiltonian(double q, double p, double omega) { return 0.5 * (p * p + omega * omega * q * q); }

double hamiltonian(const OscState& s, const OscParams& params) { return hamiltonian(s.q, s.p, params.omega()); }

OscState analytic_state(double t, const OscParams& params)
{
  const double w = params.omega();
  return {t, params.p0() / w * std::sin(w * t), params.p0() * std::cos(w * t)};
}

std::vector<OscState> integrate(const OscState& s0, double dt, int steps, const OscParams& params)
{
  if (!(dt > 0.0))
    throw std::invalid_argument("integrate: dt must be > 0");
  if (steps < 1)
    throw std::invalid_argument("integrate: steps must be >= 1");

  const double w2 = params.omega() * params.omega();
  std::vector<OscState> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back(s0);
  double q = s0.q;
  double p = s0.p;
  for (int n = 1; n <= steps; ++n) {
    const double k1q = p, k1p = -w2 * q;
    const double k2q = p + 0.5 * dt * k1p, k2p = -w2 * (q + 0.5 * dt * k1q);
    const double k3q = p + 0.5 * dt * k2p, k3p = -w2 * (q + 0.5 * dt * k2q);
    const double k4q = p + dt * k3p, k4p = -w2 * (q + dt * k3q);
    q += dt / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q);
    p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    out.push_back({s0.t + n * dt, q, p});
  }
  return out;
}

QuasiState quasi_state(double t, const OscParams& params)
{
  const double r = std::sqrt(2.0 * params.p0());
  const double half = 0.5 * params.omega() * t;
  return {r * std::sin(half), r * std::cos(half)};
}

QuasiState quasi_from_phase_point(double q, double p, const OscParams& params)
{
  const double h = hamiltonian(q, p, params.omega());
  if (!(h > 0.0))
    throw std::domain_error("quasi_from_phase_point: H = " + std::to_string(h) +
                            "; quasi-canonical coordinates are undefined at the origin");
  const double s = std::sqrt(2.0 * h);
  const double theta = std::atan2(params.omega() * q, p);
  const double r = std::sqrt(2.0 * s);
  return {r * std::sin(0.5 * theta), r * std::cos(0.5 * theta)};
}

QuasiJacobian quasi_jacobian(double q, double p, const OscParams& params)
{
  const QuasiState qs = quasi_from_phase_point(q, p, params);
  const double w = params.omega();
  const double two_s = 2.0 * std::sqrt(2.0 * hamiltonian(q, p, w));
  return {w * qs.P / two_s, -qs.Q / two_s, w * qs.Q / two_s, qs.P / two_s};
}

double poisson_bracket_fd(const PhaseField& f, const PhaseField& g, const OscState& at, double h)
{
  if (!(h > 0.0))
    throw std::invalid_argument("poisson_bracket_fd: h must be > 0");
  const double q = at.q;
  const double p = at.p;
  const double fq = (f(q + h, p) - f(q - h, p)) / (2.0 * h);
  const double fp = (f(q, p + h) - f(q, p - h)) / (2.0 * h);
  const double gq = (g(q + h, p) - g(q - h, p)) / (2.0 * h);
  const double gp = (g(q, p + h) - g(q, p - h)) / (2.0 * h);
  return fp * gq - fq * gp;
}

} // namespace oho
