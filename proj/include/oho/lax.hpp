#ifndef OHO_LAX_HPP
#define OHO_LAX_HPP

#include <array>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "oho/operad.hpp"
#include "oho/oscillator.hpp"

namespace oho {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// L = [[p, ωq, 0], [ωq, −p, 0], [0, 0, 1]].
Mat3 build_L(double q, double p, const OscParams& params);
/// M = (ω/2) [[0, −1, 0], [1, 0, 0], [0, 0, 0]].
Mat3 build_M(const OscParams& params);

struct LaxMatrices
{
  Mat3 L;
  Mat3 M;
};
LaxMatrices lax_matrices(double q, double p, const OscParams& params);

/// dL/dt from the Hamiltonian equations (q' = p, p' = −ω²q).
Mat3 lax_time_derivative(double q, double p, const OscParams& params);

/// ‖dL/dt − (ML − LM)‖_∞ on the analytic trajectory at time t.
double matrix_lax_residual(double t, const OscParams& params);
/// Same, with a caller-supplied M (used for negative controls).
double matrix_lax_residual(double t, const OscParams& params, const Mat3& M);

/// Eigenvalues of L sorted ascending.
Vec3 lax_spectrum(double q, double p, const OscParams& params);

/// Theorem-2 parameters C1..C9 (c[0] is C1).
struct CParams
{
  std::array<double, 9> c{};

  double operator()(int nu) const { return c.at(static_cast<std::size_t>(nu - 1)); }
  /// C2² + C3² + C5² + C6² + C7² + C8² ≠ 0.
  bool valid() const;
};

/// Binary anticommutative operation on R³: mu(s, i, j) = μ^s_{ij}
/// (output index first), 0-based.
class StructureTable
{
public:
  StructureTable() { m_mu.fill(0.0); }

  double operator()(int s, int i, int j) const { return m_mu[idx(s, i, j)]; }
  /// Sets μ^s_{ij} = v and μ^s_{ji} = −v.
  void set(int s, int i, int j, double v);

  bool is_antisymmetric() const;
  double max_abs_diff(const StructureTable& o) const;
  double max_abs() const;

  MultiOp to_multiop() const;
  static StructureTable from_multiop(const MultiOp& op);

  /// The nine independent entries in column order
  /// μ¹₁₂, μ²₁₂, μ³₁₂, μ¹₂₃, μ²₂₃, μ³₂₃, μ¹₃₁, μ²₃₁, μ³₃₁.
  std::array<double, 9> columns() const;

  /// "s i j value" per nonzero entry, 1-based, 17 significant digits.
  std::string dump() const;

  friend bool operator==(const StructureTable& a, const StructureTable& b) { return a.m_mu == b.m_mu; }

private:
  static std::size_t idx(int s, int i, int j);

  std::array<double, 27> m_mu;
};

enum class BianchiFamily { VII_a, III_1, VI_a };

std::string_view family_name(BianchiFamily f);
BianchiFamily parse_family(std::string_view name);

/// Bianchi family descriptor. VII_a and VI_a need a > 0, VI_a also a ≠ 1;
/// III_1 always has a = 1.
class BianchiSpec
{
public:
  BianchiSpec(BianchiFamily family, double a = 1.0);

  BianchiFamily family() const { return m_family; }
  double a() const { return m_a; }
  std::string_view name() const { return family_name(m_family); }

  double alpha() const;
  double n1() const { return 0.0; }
  double n2() const { return 1.0; }
  double n3() const;
  /// μ³₁₂: +1 for VII_a, −1 otherwise.
  double mu3_12() const { return n3(); }

  /// Structure constants at t = 0 from the structure equations
  /// [e1,e2] = −α e2 + n³ e3, [e2,e3] = n¹ e1, [e3,e1] = n² e2 + α e3.
  StructureTable initial_table() const;

private:
  BianchiFamily m_family;
  double m_a;
};

/// Solves for C1..C9 from the initial table, reading μ°^s_{13} as −μ°^s_{31}.
/// Throws std::domain_error when p0 ≤ 0; validity is reported via valid().
CParams solve_constants(const StructureTable& mu0, double p0);

/// Theorem-2 operation at a phase point.
StructureTable build_mu(const CParams& C, const OscState& s, const QuasiState& qs, const OscParams& params);

/// Closed-form time-dependent algebra (VII_a^t, III^t, VI^t).
StructureTable evolve_algebra(const BianchiSpec& spec, double t, const OscParams& params);

/// build_mu(solve_constants(initial_table)) on the analytic trajectory.
StructureTable theorem_algebra(const BianchiSpec& spec, double t, const OscParams& params);

/// M as a degree-1 operation on R³.
MultiOp lax_M_op(const OscParams& params);

/// [M, μ] through the Gerstenhaber bracket (|M| = 0, |μ| = 1).
StructureTable lax_bracket(const Mat3& M, const StructureTable& mu);

/// max |(μ(t+dt) − μ(t−dt))/(2dt) − [M, μ(t)]|.
double operadic_lax_residual(const BianchiSpec& spec, double t, double dt, const OscParams& params);

/// Default finite-difference step 1e−5 · 2π/ω.
double default_lax_dt(const OscParams& params);

/// max |p ∂μ/∂q − ω²q ∂μ/∂p − [M, μ]| at a phase point with H > 0, using
/// closed-form partials of (Q, P). μ uses the family's constants.
double operadic_lax_pde_residual(const BianchiSpec& spec, double q, double p, const OscParams& params);

/// J(x; y; z) = [x,[y,z]] + [y,[z,x]] + [z,[x,y]] with [u,v] = μ(u, v).
Vec3 classical_jacobiator(const StructureTable& mu, const Vec3& x, const Vec3& y, const Vec3& z);

} // namespace oho

#endif
