#ifndef OHO_FOCK_HPP
#define OHO_FOCK_HPP

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oho {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Raised when a truncated computation leaves its valid regime (negative
/// spectrum beyond the clipping tolerance, coherent-state leakage). The
/// remedy is a larger truncation N.
class TruncationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Span of the number states |0⟩ … |N−1⟩ of an oscillator with frequency ω
/// and Planck constant ħ.
class FockSpace
{
public:
  FockSpace(int N, double omega, double hbar);

  int N() const { return m_N; }
  double omega() const { return m_omega; }
  double hbar() const { return m_hbar; }

  /// ħω(n + ½).
  double level_energy(int n) const { return m_hbar * m_omega * (n + 0.5); }
  /// Number of levels with energy ≤ cutoff (they are the leading ones).
  int levels_below(double cutoff) const;

  friend bool operator==(const FockSpace& a, const FockSpace& b)
  {
    return a.m_N == b.m_N && a.m_omega == b.m_omega && a.m_hbar == b.m_hbar;
  }

private:
  int m_N;
  double m_omega;
  double m_hbar;
};

/// N×N complex matrix bound to a FockSpace. Arithmetic between operators on
/// different spaces throws std::invalid_argument.
class QOperator
{
public:
  QOperator(FockSpace space, CMat matrix);

  static QOperator zero(const FockSpace& space);
  static QOperator identity(const FockSpace& space);

  const FockSpace& space() const { return m_space; }
  const CMat& matrix() const { return m_matrix; }
  int N() const { return m_space.N(); }

  QOperator adjoint() const;
  /// max |A − A†|.
  double hermiticity_defect() const;
  bool is_hermitian(double tol) const { return hermiticity_defect() <= tol; }

  QOperator& operator+=(const QOperator& o);
  QOperator& operator-=(const QOperator& o);
  QOperator& operator*=(cplx s);

  QOperator operator-() const;

  /// "row,col,re,im" per nonzero entry.
  std::string to_csv() const;

  void check_space(const QOperator& o, const char* what) const;

private:
  FockSpace m_space;
  CMat m_matrix;
};

QOperator operator+(QOperator a, const QOperator& b);
QOperator operator-(QOperator a, const QOperator& b);
QOperator operator*(const QOperator& a, const QOperator& b);
QOperator operator*(cplx s, QOperator a);
QOperator operator*(QOperator a, cplx s);
QOperator operator*(double s, QOperator a);

/// AB − BA.
QOperator commutator(const QOperator& a, const QOperator& b);

struct Ladder
{
  QOperator a;
  QOperator adag;
};
/// a|n⟩ = √n |n−1⟩.
Ladder ladder(const FockSpace& space);

struct CanonicalOps
{
  QOperator q;
  QOperator p;
  QOperator H;
};
/// q̂ = √(ħ/2ω)(a + a†), p̂ = i√(ħω/2)(a† − a), Ĥ = ħω diag(n + ½).
CanonicalOps canonical_ops(const FockSpace& space);

enum class FuncDomain { Real, NonNegative };

/// U f(Λ) U* for Hermitian A = UΛU*. For FuncDomain::NonNegative,
/// eigenvalues in [−clip_tol, 0) are clipped to 0 and anything below throws
/// TruncationError. Non-Hermitian input (defect > 1e−12 relative) throws
/// std::invalid_argument.
QOperator func_calc(const QOperator& A, const std::function<double(double)>& f, double clip_tol,
                    FuncDomain domain = FuncDomain::NonNegative);

/// Ŝ = √(2Ĥ), ε̂ = ω/(2Ŝ), P̂ = √(Ŝ + p̂), Q̂ = √(Ŝ − p̂).
struct QuasiOps
{
  QOperator S;
  QOperator eps;
  QOperator P;
  QOperator Q;
};
QuasiOps quasi_ops(const FockSpace& space, const CanonicalOps& canon, double clip_rel = 1e-8);

/// Everything the quantum structures need on one truncation.
struct QuantumOscillator
{
  FockSpace space;
  CanonicalOps canon;
  QuasiOps quasi;

  static QuantumOscillator build(const FockSpace& space, double clip_rel = 1e-8);
};

struct CoherentState
{
  cplx alpha;
  CVec vector;
  double leakage;
};

/// Truncated |α⟩, renormalized; throws TruncationError if the discarded
/// weight exceeds leakage_threshold.
CoherentState coherent(const FockSpace& space, cplx alpha, double leakage_threshold = 1e-8);

/// |α| with ħω(|α|² + ½) = E. Throws std::domain_error if E ≤ ħω/2.
double coherent_amplitude(double energy, double hbar, double omega);

/// α whose phase-space centre sits at angle θ = atan2(ωq, p) and has ⟨Ĥ⟩ = E.
cplx alpha_on_shell(double energy, double theta, double hbar, double omega);

/// ceil(|α|² + 8|α| + 20).
int coherent_truncation(double alpha_abs);

/// Truncation for probes with ⟨Ĥ⟩ = E.
int truncation_for_energy(double energy, double hbar, double omega);

cplx expectation(const CVec& v, const QOperator& A);
cplx expectation(const CoherentState& s, const QOperator& A);

/// Spectral norm of the leading levels×levels block.
double projected_norm(const QOperator& A, int levels);
/// Spectral norm of A restricted to the levels with energy ≤ cutoff.
double energy_projected_norm(const QOperator& A, double cutoff);

/// Compression onto the span of a few probe states.
class ProbeProjector
{
public:
  ProbeProjector(const FockSpace& space, std::vector<CoherentState> probes);

  /// Coherent probes on the energy shell E at the given angles.
  static ProbeProjector on_shell(const FockSpace& space, double energy, std::span<const double> thetas,
                                 double leakage_threshold = 1e-8);

  const std::vector<CoherentState>& probes() const { return m_probes; }
  /// Spectral norm of B† A B with B an orthonormal basis of the probe span.
  double norm(const QOperator& A) const;

private:
  FockSpace m_space;
  std::vector<CoherentState> m_probes;
  CMat m_basis;
};

/// Probe angle used throughout: θ = π/2 (q > 0, p = 0).
std::vector<double> default_probe_angles();

struct QuasiCcrRow
{
  double hbar;
  int N;
  /// ‖Π(P̂Q̂ + Q̂P̂ − 2ωq̂)Π‖ / ‖Π 2ωq̂ Π‖ over the probe span.
  double sym_resid;
  /// ‖Π([P̂,Q̂] − (ħ/i)ε̂)Π‖ / ‖Π (ħ/i)ε̂ Π‖ over the probe span.
  double comm_resid;
  /// Re ⟨[P̂,Q̂]⟩ / (ħ/i) on the first probe; tends to ω/(2√(2E)).
  double comm_ratio;
};

QuasiCcrRow quasi_ccr_point(double omega, double energy, double hbar, std::optional<int> N_override = std::nullopt,
                            std::span<const double> thetas = {});

std::vector<QuasiCcrRow> quasi_ccr_sweep(double omega, double energy, std::span<const double> hbar_list,
                                         std::optional<int> N_override = std::nullopt);

} // namespace oho

#endif
