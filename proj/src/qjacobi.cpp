#include "oho/qjacobi.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "oho/format.hpp"

namespace oho {

namespace {

constexpr std::size_t mu_index(int s, int i, int j) { return static_cast<std::size_t>(9 * s + 3 * i + j); }

// Column k of StructureTable::columns() as (s, i, j).
constexpr std::array<std::array<int, 3>, 9> kColumnSlots{{{0, 0, 1},
                                                          {1, 0, 1},
                                                          {2, 0, 1},
                                                          {0, 1, 2},
                                                          {1, 1, 2},
                                                          {2, 1, 2},
                                                          {0, 2, 0},
                                                          {1, 2, 0},
                                                          {2, 2, 0}}};

cplx hbar_over_i(const FockSpace& space) { return {0.0, -space.hbar()}; }

QOperator scaled_sum(const FockSpace& space, const std::array<const QOperator*, 3>& ops, const Vec3& w)
{
  QOperator out = QOperator::zero(space);
  for (int k = 0; k < 3; ++k)
    if (w(k) != 0.0)
      out += w(k) * *ops[static_cast<std::size_t>(k)];
  return out;
}

} // namespace

std::string_view ordering_name(Ordering o) { return o == Ordering::StructLeft ? "left" : "right"; }

Ordering parse_ordering(std::string_view name)
{
  if (name == "left")
    return Ordering::StructLeft;
  if (name == "right")
    return Ordering::StructRight;
  throw std::invalid_argument("unknown ordering '" + std::string(name) + "' (expected left or right)");
}

StructureTable classical_table3(const BianchiSpec& spec, double omega, double p0, double q, double p,
                                const QuasiState& qs)
{
  const auto cols = table3_columns<double>(spec, omega, p0, q, p, qs.Q, qs.P, 1.0);
  StructureTable mu;
  for (std::size_t k = 0; k < 9; ++k)
    mu.set(kColumnSlots[k][0], kColumnSlots[k][1], kColumnSlots[k][2], cols[k]);
  return mu;
}

// ---------------------------------------------------------------------------

QuantumStructure::QuantumStructure(const BianchiSpec& spec, std::shared_ptr<const QuantumOscillator> osc, double p0,
                                   Ordering ordering)
    : m_spec(spec), m_osc(std::move(osc)), m_p0(p0), m_ordering(ordering)
{
  if (!m_osc)
    throw std::invalid_argument("QuantumStructure: null oscillator");
  if (!(p0 > 0.0) || !std::isfinite(p0))
    throw std::invalid_argument("QuantumStructure: p0 must be finite and > 0");

  const FockSpace& sp = m_osc->space;
  const QOperator one = QOperator::identity(sp);
  const auto cols = table3_columns<QOperator>(spec, sp.omega(), p0, m_osc->canon.q, m_osc->canon.p, m_osc->quasi.Q,
                                              m_osc->quasi.P, one);
  m_mu.assign(27, QOperator::zero(sp));
  for (std::size_t k = 0; k < 9; ++k) {
    const auto [s, i, j] = kColumnSlots[k];
    m_mu[mu_index(s, i, j)] = cols[k];
    m_mu[mu_index(s, j, i)] = -cols[k];
  }
}

QuantumStructure QuantumStructure::build(const BianchiSpec& spec, const FockSpace& space, double p0,
                                         Ordering ordering)
{
  return {spec, std::make_shared<const QuantumOscillator>(QuantumOscillator::build(space)), p0, ordering};
}

const QOperator& QuantumStructure::mu(int s, int i, int j) const
{
  if (s < 0 || s > 2 || i < 0 || i > 2 || j < 0 || j > 2)
    throw std::out_of_range("QuantumStructure::mu: index out of range");
  return m_mu[mu_index(s, i, j)];
}

bool QuantumStructure::is_antisymmetric() const
{
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (m_mu[mu_index(s, i, j)].matrix() != -m_mu[mu_index(s, j, i)].matrix())
          return false;
  return true;
}

QuantumStructure QuantumStructure::with_ordering(Ordering o) const
{
  QuantumStructure copy = *this;
  copy.m_ordering = o;
  return copy;
}

// ---------------------------------------------------------------------------

QElement::QElement(QOperator c1, QOperator c2, QOperator c3) : m_c{std::move(c1), std::move(c2), std::move(c3)}
{
  m_c[0].check_space(m_c[1], "QElement");
  m_c[0].check_space(m_c[2], "QElement");
}

QElement QElement::from_scalar(const FockSpace& space, const Vec3& x)
{
  const QOperator one = QOperator::identity(space);
  QElement e(x(0) * one, x(1) * one, x(2) * one);
  e.m_scalar = x;
  return e;
}

QElement qbracket(const QElement& x, const QElement& y, const QuantumStructure& S)
{
  const FockSpace& sp = S.space();
  if (!(x.space() == sp) || !(y.space() == sp))
    throw std::invalid_argument("qbracket: elements and structure live on different Fock spaces");
  const bool left = S.ordering() == Ordering::StructLeft;

  std::array<QOperator, 3> out{QOperator::zero(sp), QOperator::zero(sp), QOperator::zero(sp)};
  for (int i = 0; i < 3; ++i) {
    QOperator& acc = out[static_cast<std::size_t>(i)];
    if (x.scalar() && y.scalar()) {
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const double w = (*x.scalar())(j) * (*y.scalar())(k);
          if (j != k && w != 0.0)
            acc += w * S.mu(i, j, k);
        }
    } else if (x.scalar()) {
      // Σ_k (Σ_j x^j μ^i_{jk}) ŷ^k
      for (int k = 0; k < 3; ++k) {
        const QOperator A = scaled_sum(sp, {&S.mu(i, 0, k), &S.mu(i, 1, k), &S.mu(i, 2, k)}, *x.scalar());
        acc += left ? A * y[k] : y[k] * A;
      }
    } else if (y.scalar()) {
      // Σ_j (Σ_k y^k μ^i_{jk}) x̂^j
      for (int j = 0; j < 3; ++j) {
        const QOperator A = scaled_sum(sp, {&S.mu(i, j, 0), &S.mu(i, j, 1), &S.mu(i, j, 2)}, *y.scalar());
        acc += left ? A * x[j] : x[j] * A;
      }
    } else {
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          if (j == k)
            continue;
          acc += left ? S.mu(i, j, k) * x[j] * y[k] : x[j] * y[k] * S.mu(i, j, k);
        }
    }
  }
  return {std::move(out[0]), std::move(out[1]), std::move(out[2])};
}

double det3(const Vec3& x, const Vec3& y, const Vec3& z)
{
  return x(0) * (y(1) * z(2) - y(2) * z(1)) - x(1) * (y(0) * z(2) - y(2) * z(0)) +
         x(2) * (y(0) * z(1) - y(1) * z(0));
}

JacobiComponents qjacobi_direct(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S)
{
  const FockSpace& sp = S.space();
  const QElement X = QElement::from_scalar(sp, x);
  const QElement Y = QElement::from_scalar(sp, y);
  const QElement Z = QElement::from_scalar(sp, z);

  const QElement a = qbracket(X, qbracket(Y, Z, S), S);
  const QElement b = qbracket(Y, qbracket(Z, X, S), S);
  const QElement c = qbracket(Z, qbracket(X, Y, S), S);
  return {{a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]}, det3(x, y, z)};
}

std::array<QOperator, 2> xi_operators(const QuantumStructure& S)
{
  const QuantumOscillator& o = S.oscillator();
  const double w = S.space().omega();
  const QOperator one = QOperator::identity(S.space());
  const QOperator wq = w * o.canon.q;
  return {wq * o.quasi.Q + (o.canon.p - S.p0() * one) * o.quasi.P,
          wq * o.quasi.P - (o.canon.p + S.p0() * one) * o.quasi.Q};
}

JacobiComponents qjacobi_closed(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S)
{
  const double det = det3(x, y, z);
  const double a = S.spec().a();
  const double p0 = S.p0();
  const double c = -a * det / std::sqrt(2.0 * p0 * p0 * p0);
  const auto xi = xi_operators(S);
  const QuantumOscillator& o = S.oscillator();
  return {{c * xi[0], c * xi[1], (a * a * det / p0) * commutator(o.quasi.P, o.quasi.Q)}, det};
}

namespace {

JacobiComponents semiclassical_with(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S,
                                    double energy, const QOperator& sqrt2H, const QOperator& eps)
{
  if (!(energy > 0.0))
    throw std::invalid_argument("semiclassical: energy must be > 0");
  const double det = det3(x, y, z);
  const double a = S.spec().a();
  const double p0 = S.p0();
  const double c = a * det / std::sqrt(2.0 * p0 * p0 * p0);
  const FockSpace& sp = S.space();
  const cplx hoi = hbar_over_i(sp);
  const QuantumOscillator& o = S.oscillator();
  const QOperator gap = std::sqrt(2.0 * energy) * QOperator::identity(sp) - sqrt2H;

  QOperator J1 = c * (o.quasi.P * gap - (0.5 * hoi) * (o.quasi.Q * eps));
  QOperator J2 = c * (o.quasi.Q * gap + (0.5 * hoi) * (o.quasi.P * eps));
  QOperator J3 = (hoi * (a * a * det / p0)) * eps;
  return {{std::move(J1), std::move(J2), std::move(J3)}, det};
}

} // namespace

JacobiComponents semiclassical_closed(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S,
                                      double energy)
{
  const QuantumOscillator& o = S.oscillator();
  return semiclassical_with(x, y, z, S, energy, o.quasi.S, o.quasi.eps);
}

JacobiComponents semiclassical_on_shell(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S,
                                        double energy)
{
  if (!(energy > 0.0))
    throw std::invalid_argument("semiclassical_on_shell: energy must be > 0");
  const FockSpace& sp = S.space();
  const double root = std::sqrt(2.0 * energy);
  const QOperator one = QOperator::identity(sp);
  return semiclassical_with(x, y, z, S, energy, root * one, (sp.omega() / (2.0 * root)) * one);
}

JacobiComponents corollary_H_equals_E(const Vec3& x, const Vec3& y, const Vec3& z, const QuantumStructure& S,
                                      double energy)
{
  if (!(energy > 0.0))
    throw std::invalid_argument("corollary_H_equals_E: energy must be > 0");
  const FockSpace& sp = S.space();
  const double det = det3(x, y, z);
  const double a = S.spec().a();
  const double p0 = S.p0();
  const double eps = sp.omega() / (2.0 * std::sqrt(2.0 * energy));
  const double c = a * det / std::sqrt(std::pow(2.0 * p0, 3)) * eps;
  const cplx hoi = hbar_over_i(sp);
  const QuantumOscillator& o = S.oscillator();
  return {{(-hoi * c) * o.quasi.Q, (hoi * c) * o.quasi.P,
           (hoi * (a * a * det / p0 * eps)) * QOperator::identity(sp)},
          det};
}

double max_projected_diff(const JacobiComponents& a, const JacobiComponents& b, double cutoff)
{
  double r = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    r = std::max(r, energy_projected_norm(a.J[i] - b.J[i], cutoff));
  return r;
}

std::array<Vec3, 3> random_triple(std::uint64_t seed, double min_det)
{
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    std::array<Vec3, 3> t;
    for (auto& v : t)
      v = Vec3(u(rng), u(rng), u(rng));
    if (std::abs(det3(t[0], t[1], t[2])) >= min_det)
      return t;
  }
}

OrderingReport select_ordering(const BianchiSpec& spec, const OrderingSearch& search)
{
  const double p0 = std::sqrt(2.0 * search.energy);
  const QuantumStructure left =
      QuantumStructure::build(spec, FockSpace(search.N, search.omega, search.hbar), p0, Ordering::StructLeft);
  const QuantumStructure right = left.with_ordering(Ordering::StructRight);
  const double cutoff = 2.0 * search.energy;

  std::mt19937_64 seeds(search.seed);
  OrderingReport rep{Ordering::StructLeft, 0.0, 0.0, false};
  for (int n = 0; n < search.triples; ++n) {
    const auto [x, y, z] = random_triple(seeds());
    const JacobiComponents closed = qjacobi_closed(x, y, z, left);
    rep.resid_left = std::max(rep.resid_left, max_projected_diff(qjacobi_direct(x, y, z, left), closed, cutoff));
    rep.resid_right = std::max(rep.resid_right, max_projected_diff(qjacobi_direct(x, y, z, right), closed, cutoff));
  }
  rep.selected = rep.resid_left <= rep.resid_right ? Ordering::StructLeft : Ordering::StructRight;
  rep.passed = std::min(rep.resid_left, rep.resid_right) < search.threshold;
  return rep;
}

std::vector<ScalingRow> jacobi_deformation_scaling(const BianchiSpec& spec, double omega, double energy,
                                                   std::span<const double> hbar_list, const Vec3& x,
                                                   const Vec3& y, const Vec3& z, const ScalingOptions& options)
{
  if (hbar_list.size() < 3)
    throw std::invalid_argument("jacobi_deformation_scaling: need at least three hbar values");
  for (std::size_t k = 1; k < hbar_list.size(); ++k)
    if (!(hbar_list[k] < hbar_list[k - 1]))
      throw std::invalid_argument("jacobi_deformation_scaling: hbar list must be strictly decreasing");

  const std::vector<double> thetas = options.thetas.empty() ? default_probe_angles() : options.thetas;
  const double p0 = std::sqrt(2.0 * energy);
  std::vector<ScalingRow> rows;
  for (double hb : hbar_list) {
    const int N = options.N_override.value_or(truncation_for_energy(energy, hb, omega));
    const FockSpace sp(N, omega, hb);
    const QuantumStructure S = QuantumStructure::build(spec, sp, p0, options.ordering);
    const ProbeProjector probes = ProbeProjector::on_shell(sp, energy, thetas);

    const JacobiComponents direct = qjacobi_direct(x, y, z, S);
    const JacobiComponents semi = semiclassical_closed(x, y, z, S, energy);

    ScalingRow row{hb, N, std::string(spec.name()), spec.a(), {}, {}, std::numeric_limits<double>::quiet_NaN()};
    for (std::size_t i = 0; i < 3; ++i) {
      row.J_norm[i] = probes.norm(direct.J[i]);
      row.J_resid[i] = probes.norm(direct.J[i] - semi.J[i]);
    }
    if (!rows.empty()) {
      const ScalingRow& prev = rows.back();
      row.slope3 = std::log(row.J_norm[2] / prev.J_norm[2]) / std::log(row.hbar / prev.hbar);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string scaling_csv(std::span<const ScalingRow> rows)
{
  std::ostringstream out;
  out << "hbar,N,family,a,J1_norm,J2_norm,J3_norm,J1_resid,J2_resid,J3_resid,slope3\n";
  for (const ScalingRow& r : rows) {
    out << format_double(r.hbar) << ',' << r.N << ',' << r.family << ',' << format_double(r.a);
    for (double v : r.J_norm)
      out << ',' << format_double(v);
    for (double v : r.J_resid)
      out << ',' << format_double(v);
    out << ',' << (std::isnan(r.slope3) ? std::string("nan") : format_double(r.slope3)) << '\n';
  }
  return out.str();
}

cplx corollary_ratio(const BianchiSpec& spec, double omega, double energy, double hbar, const Vec3& x,
                     const Vec3& y, const Vec3& z, Ordering ordering, std::optional<int> N_override)
{
  const int N = N_override.value_or(truncation_for_energy(energy, hbar, omega));
  const FockSpace sp(N, omega, hbar);
  const QuantumStructure S = QuantumStructure::build(spec, sp, std::sqrt(2.0 * energy), ordering);
  const CoherentState psi = coherent(sp, alpha_on_shell(energy, std::numbers::pi / 2.0, hbar, omega));
  const cplx num = expectation(psi, qjacobi_direct(x, y, z, S).J[0]);
  const cplx den = expectation(psi, corollary_H_equals_E(x, y, z, S, energy).J[0]);
  return num / den;
}

} // namespace oho
