#ifndef OHO_OSCILLATOR_HPP
#define OHO_OSCILLATOR_HPP

#include <functional>
#include <vector>

namespace oho {

/// Oscillator constants. The trajectory starts at q = 0, p = p0 > 0, so the
/// energy is E = p0²/2 and p0 = √(2E).
class OscParams
{
public:
  OscParams(double omega, double p0);
  static OscParams from_energy(double omega, double energy);

  double omega() const { return m_omega; }
  double p0() const { return m_p0; }
  double energy() const { return m_energy; }
  double period() const;

private:
  double m_omega;
  double m_p0;
  double m_energy;
};

struct OscState
{
  double t = 0.0;
  double q = 0.0;
  double p = 0.0;
};

/// Quasi-canonical coordinates: P² − Q² = 2p, QP = ωq.
struct QuasiState
{
  double Q = 0.0;
  double P = 0.0;
};

/// H = ½(p² + ω²q²).
double hamiltonian(double q, double p, double omega);
double hamiltonian(const OscState& s, const OscParams& params);

/// q(t) = (p0/ω) sin ωt, p(t) = p0 cos ωt.
OscState analytic_state(double t, const OscParams& params);

/// Classical RK4 for q' = p, p' = −ω²q. Returns steps + 1 states, s0 first.
std::vector<OscState> integrate(const OscState& s0, double dt, int steps, const OscParams& params);

/// Half-frequency rotation along the trajectory:
/// Q = √(2p0) sin(ωt/2), P = √(2p0) cos(ωt/2).
QuasiState quasi_state(double t, const OscParams& params);

/// Pointwise (Q, P) from the half-angle map θ = atan2(ωq, p):
/// (Q, P) = √(2S) (sin θ/2, cos θ/2), S = √(2H). Throws std::domain_error
/// when H = 0.
QuasiState quasi_from_phase_point(double q, double p, const OscParams& params);

/// Closed-form partial derivatives of (Q, P) with respect to (q, p),
/// obtained by implicit differentiation of the constraints.
struct QuasiJacobian
{
  double dQ_dq, dQ_dp, dP_dq, dP_dp;
};
QuasiJacobian quasi_jacobian(double q, double p, const OscParams& params);

using PhaseField = std::function<double(double q, double p)>;

/// Central-difference Poisson bracket with {p, q} = 1:
/// {f, g} = ∂f/∂p ∂g/∂q − ∂f/∂q ∂g/∂p.
double poisson_bracket_fd(const PhaseField& f, const PhaseField& g, const OscState& at, double h);

} // namespace oho

#endif
