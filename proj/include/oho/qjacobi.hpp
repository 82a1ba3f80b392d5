#ifndef OHO_QJACOBI_HPP
#define OHO_QJACOBI_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "oho/fock.hpp"
#include "oho/lax.hpp"

namespace oho {

/// Where μ̂ sits in the product μ̂^i_{jk} x̂^j ŷ^k.
enum class Ordering { StructLeft, StructRight };

std::string_view ordering_name(Ordering o);
Ordering parse_ordering(std::string_view name);

/// The nine independent quantum structure entries in StructureTable::columns()
/// order, built from (q, p, Q, P, 1). Works for scalars and operators alike,
/// so the classical limit is the same code with T = double.
template <class T>
std::array<T, 9> table3_columns(const BianchiSpec& spec, double omega, double p0, const T& q, const T& p, const T& Q,
                                const T& P, const T& one)
{
  const double a = spec.a();
  const double r = std::sqrt(2.0 * p0);
  const double h = 1.0 / (-2.0 * p0);
  return {(a / r) * Q,
          (-a / r) * P,
          spec.mu3_12() * one,
          h * (p - p0 * one),
          (h * omega) * q,
          (-a / r) * Q,
          (h * omega) * q,
          (1.0 / (2.0 * p0)) * (p + p0 * one),
          (a / r) * P};
}

/// Classical table at a phase point with the quantum entries' scalar values.
StructureTable classical_table3(const BianchiSpec& spec, double omega, double p0, double q, double p,
                                const QuasiState& qs);

/// Operator-valued Bianchi structure on a truncated Fock space, p0 = √(2E).
class QuantumStructure
{
public:
  QuantumStructure(const BianchiSpec& spec, std::shared_ptr<const QuantumOscillator> osc, double p0,
                   Ordering ordering = Ordering::StructLeft);

  static QuantumStructure build(const BianchiSpec& spec, const FockSpace& space, double p0,
                                Ordering ordering = Ordering::StructLeft);

  const BianchiSpec& spec() const { return m_spec; }
  double p0() const { return m_p0; }
  Ordering ordering() const { return m_ordering; }
  const QuantumOscillator& oscillator() const { return *m_osc; }
  const FockSpace& space() const { return m_osc->space; }

  /// μ̂^s_{ij}, 0-based, output index first.
  const QOperator& mu(int s, int i, int j) const;

  bool is_antisymmetric() const;

  /// Same entries, other product order.
  QuantumStructure with_ordering(Ordering o) const;

private:
  BianchiSpec m_spec;
  std::shared_ptr<const QuantumOscillator> m_osc;
  double m_p0;
  Ordering m_ordering;
  std::vector<QOperator> m_mu;
};

/// Element of the quantum algebra with operator coefficients. Scalar
/// elements remember their numeric components so brackets can skip the
/// identity products.
class QElement
{
public:
  QElement(QOperator c1, QOperator c2, QOperator c3);

  static QElement from_scalar(const FockSpace& space, const Vec3& x);

  const QOperator& operator[](int i) const { return m_c.at(static_cast<std::size_t>(i)); }
  const std::optional<Vec3>& scalar() const { return m_scalar; }
  const FockSpace& space() const { return m_c[0].space(); }

private:
  std::array<QOperator, 3> m_c;
  std::optional<Vec3> m_scalar;
};

/// [x, y]_ħ = μ̂^i_{jk} x^j y^k e_i.
QElement qbracket(const QElement& x, const QElement& y, const QuantumStructure& S);

/// Cofactor expansion of the determinant with rows x, y, z.
double det3(const Vec3& x, const Vec3& y, const Vec3& z);

struct JacobiComponents
{
  std::array<QOperator, 3> J;
  double det;
};

/// [x,[y,z]] + [y,[z,x]] + [z,[x,y]] with nested quantum brackets.
JacobiComponents qjacobi_direct(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S);

/// ξ̂¹ = ωq̂Q̂ + (p̂ − p0)P̂, ξ̂² = ωq̂P̂ − (p̂ + p0)Q̂.
std::array<QOperator, 2> xi_operators(const QuantumStructure& S);

/// Ĵ¹ = −a·det/√(2p0³) ξ̂¹, Ĵ² = −a·det/√(2p0³) ξ̂², Ĵ³ = a²·det/p0 [P̂, Q̂].
JacobiComponents qjacobi_closed(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S);

/// Semiclassical forms with √(2Ĥ) and ε̂ as operators.
JacobiComponents semiclassical_closed(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S,
                                      double energy);

/// semiclassical_closed with Ĥ replaced by E·1.
JacobiComponents semiclassical_on_shell(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S,
                                        double energy);

/// The Ĥ = E forms, written with √((2p0)³).
JacobiComponents corollary_H_equals_E(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S,
                                      double energy);

/// max_i ‖Ĵ^i_a − Ĵ^i_b‖ over the levels with energy ≤ cutoff.
double max_projected_diff(const JacobiComponents& a, const JacobiComponents& b, double cutoff);

struct OrderingReport
{
  Ordering selected;
  double resid_left;
  double resid_right;
  /// The selected residual is below the threshold.
  bool passed;
};

struct OrderingSearch
{
  double omega = 1.0;
  double energy = 2.0;
  double hbar = 0.1;
  int N = 64;
  int triples = 20;
  std::uint64_t seed = 20240611;
  double threshold = 1e-8;
};

/// Direct vs closed residual for both orderings over random scalar triples,
/// measured below the 2E energy cutoff.
OrderingReport select_ordering(const BianchiSpec& spec, const OrderingSearch& search = {});

/// Draws a triple from U(−1, 1)³ with |det| ≥ min_det.
std::array<Vec3, 3> random_triple(std::uint64_t seed, double min_det = 0.1);

struct ScalingOptions
{
  Ordering ordering = Ordering::StructLeft;
  std::optional<int> N_override;
  std::vector<double> thetas;
};

struct ScalingRow
{
  double hbar;
  int N;
  std::string family;
  double a;
  std::array<double, 3> J_norm;
  std::array<double, 3> J_resid;
  /// log-log slope of ‖Ĵ³‖ against the previous row; NaN on the first.
  double slope3;
};

/// For each ħ: probe norms of the direct components and of their difference
/// from the semiclassical forms. hbar_list must be strictly decreasing with
/// at least three entries.
std::vector<ScalingRow> jacobi_deformation_scaling(const BianchiSpec& spec, double omega, double energy,
                                                   std::span<const double> hbar_list, const Vec3& x,
                                                   const Vec3& y, const Vec3& z, const ScalingOptions& options = {});

/// Header hbar,N,family,a,J1_norm,J2_norm,J3_norm,J1_resid,J2_resid,J3_resid,slope3.
std::string scaling_csv(std::span<const ScalingRow> rows);

/// ⟨Ĵ¹_direct⟩ / ⟨Ĵ¹_corollary⟩ on the on-shell coherent state at θ = π/2.
cplx corollary_ratio(const BianchiSpec& spec, double omega, double energy, double hbar, const Vec3& x,
                     const Vec3& y, const Vec3& z, Ordering ordering = Ordering::StructLeft,
                     std::optional<int> N_override = std::nullopt);

} // namespace oho

#endif
