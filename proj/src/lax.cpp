#include "oho/lax.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "oho/format.hpp"

namespace oho {

Mat3 build_L(double q, double p, const OscParams& params)
{
  const double wq = params.omega() * q;
  Mat3 L;
  L << p, wq, 0.0,
       wq, -p, 0.0,
       0.0, 0.0, 1.0;
  return L;
}

Mat3 build_M(const OscParams& params)
{
  const double h = 0.5 * params.omega();
  Mat3 M;
  M << 0.0, -h, 0.0,
       h, 0.0, 0.0,
       0.0, 0.0, 0.0;
  return M;
}

LaxMatrices lax_matrices(double q, double p, const OscParams& params)
{
  return {build_L(q, p, params), build_M(params)};
}

Mat3 lax_time_derivative(double q, double p, const OscParams& params)
{
  const double w = params.omega();
  const double qdot = p;
  const double pdot = -w * w * q;
  Mat3 d;
  d << pdot, w * qdot, 0.0,
       w * qdot, -pdot, 0.0,
       0.0, 0.0, 0.0;
  return d;
}

double matrix_lax_residual(double t, const OscParams& params) { return matrix_lax_residual(t, params, build_M(params)); }

double matrix_lax_residual(double t, const OscParams& params, const Mat3& M)
{
  const OscState s = analytic_state(t, params);
  const Mat3 L = build_L(s.q, s.p, params);
  const Mat3 diff = lax_time_derivative(s.q, s.p, params) - (M * L - L * M);
  return diff.cwiseAbs().maxCoeff();
}

Vec3 lax_spectrum(double q, double p, const OscParams& params)
{
  Eigen::SelfAdjointEigenSolver<Mat3> es(build_L(q, p, params), Eigen::EigenvaluesOnly);
  return es.eigenvalues(); // ascending
}

bool CParams::valid() const
{
  const double s = c[1] * c[1] + c[2] * c[2] + c[4] * c[4] + c[5] * c[5] + c[6] * c[6] + c[7] * c[7];
  return s != 0.0;
}

// ---------------------------------------------------------------------------
// StructureTable

std::size_t StructureTable::idx(int s, int i, int j)
{
  if (s < 0 || s > 2 || i < 0 || i > 2 || j < 0 || j > 2)
    throw std::out_of_range("StructureTable: index out of range");
  return static_cast<std::size_t>(9 * s + 3 * i + j);
}

void StructureTable::set(int s, int i, int j, double v)
{
  if (i == j)
    throw std::invalid_argument("StructureTable::set: diagonal entries are zero");
  m_mu[idx(s, i, j)] = v;
  m_mu[idx(s, j, i)] = -v;
}

bool StructureTable::is_antisymmetric() const
{
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if ((*this)(s, i, j) != -(*this)(s, j, i))
          return false;
  return true;
}

double StructureTable::max_abs_diff(const StructureTable& o) const
{
  double r = 0.0;
  for (std::size_t k = 0; k < m_mu.size(); ++k)
    r = std::max(r, std::abs(m_mu[k] - o.m_mu[k]));
  return r;
}

double StructureTable::max_abs() const
{
  double r = 0.0;
  for (double v : m_mu)
    r = std::max(r, std::abs(v));
  return r;
}

MultiOp StructureTable::to_multiop() const { return MultiOp(2, 3, std::vector<double>(m_mu.begin(), m_mu.end())); }

StructureTable StructureTable::from_multiop(const MultiOp& op)
{
  if (op.degree() != 2 || op.dim() != 3)
    throw std::invalid_argument("StructureTable::from_multiop: need a binary operation on R^3");
  StructureTable t;
  std::copy(op.coeffs().begin(), op.coeffs().end(), t.m_mu.begin());
  return t;
}

std::array<double, 9> StructureTable::columns() const
{
  const auto& m = *this;
  return {m(0, 0, 1), m(1, 0, 1), m(2, 0, 1), m(0, 1, 2), m(1, 1, 2), m(2, 1, 2), m(0, 2, 0), m(1, 2, 0), m(2, 2, 0)};
}

std::string StructureTable::dump() const
{
  std::ostringstream out;
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double v = (*this)(s, i, j);
        if (v != 0.0)
          out << s + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << format_double(v) << '\n';
      }
  return out.str();
}

// ---------------------------------------------------------------------------
// Bianchi data

std::string_view family_name(BianchiFamily f)
{
  switch (f) {
  case BianchiFamily::VII_a: return "VII_a";
  case BianchiFamily::III_1: return "III_1";
  case BianchiFamily::VI_a: return "VI_a";
  }
  return "?";
}

BianchiFamily parse_family(std::string_view name)
{
  if (name == "VII_a" || name == "VII" || name == "vii")
    return BianchiFamily::VII_a;
  if (name == "III_1" || name == "III" || name == "iii")
    return BianchiFamily::III_1;
  if (name == "VI_a" || name == "VI" || name == "vi")
    return BianchiFamily::VI_a;
  throw std::invalid_argument("unknown Bianchi family '" + std::string(name) + "' (expected VII_a, III_1 or VI_a)");
}

BianchiSpec::BianchiSpec(BianchiFamily family, double a) : m_family(family), m_a(a)
{
  if (family == BianchiFamily::III_1) {
    m_a = 1.0;
    return;
  }
  if (!(a > 0.0) || !std::isfinite(a))
    throw std::invalid_argument(std::string(family_name(family)) + ": a must be finite and > 0");
  if (family == BianchiFamily::VI_a && a == 1.0)
    throw std::invalid_argument("VI_a: a = 1 is the separate type III_1");
}

double BianchiSpec::alpha() const { return m_a; }

double BianchiSpec::n3() const { return m_family == BianchiFamily::VII_a ? 1.0 : -1.0; }

StructureTable BianchiSpec::initial_table() const
{
  StructureTable t;
  t.set(1, 0, 1, -alpha());
  t.set(2, 0, 1, n3());
  t.set(0, 1, 2, n1());
  t.set(1, 2, 0, n2());
  t.set(2, 2, 0, alpha());
  return t;
}

// ---------------------------------------------------------------------------
// Theorem-2 operations

CParams solve_constants(const StructureTable& mu0, double p0)
{
  if (!(p0 > 0.0))
    throw std::domain_error("solve_constants: p0 must be > 0, got " + std::to_string(p0));
  if (!mu0.is_antisymmetric())
    throw std::invalid_argument("solve_constants: initial table is not antisymmetric");

  const double m1_12 = mu0(0, 0, 1);
  const double m2_12 = mu0(1, 0, 1);
  const double m3_12 = mu0(2, 0, 1);
  const double m1_23 = mu0(0, 1, 2);
  const double m2_23 = mu0(1, 1, 2);
  const double m3_23 = mu0(2, 1, 2);
  const double m1_31 = mu0(0, 2, 0);
  const double m2_13 = -mu0(1, 2, 0);
  const double m3_13 = -mu0(2, 2, 0);
  const double r = std::sqrt(2.0 * p0);

  CParams C;
  C.c[0] = 0.5 * (m2_23 - m1_31);
  C.c[1] = (m2_13 + m1_23) / (2.0 * p0);
  C.c[2] = (m2_23 + m1_31) / (2.0 * p0);
  C.c[3] = 0.5 * (m2_13 - m1_23);
  C.c[4] = m1_12 / r;
  C.c[5] = -m2_12 / r;
  C.c[6] = m3_13 / r;
  C.c[7] = -m3_23 / r;
  C.c[8] = m3_12;
  return C;
}

StructureTable build_mu(const CParams& C, const OscState& s, const QuasiState& qs, const OscParams& params)
{
  const double wq = params.omega() * s.q;
  const double p = s.p;
  StructureTable mu;
  mu.set(0, 1, 2, C(2) * p - C(3) * wq - C(4));
  mu.set(1, 0, 2, C(2) * p - C(3) * wq + C(4));
  mu.set(0, 2, 0, C(2) * wq + C(3) * p - C(1));
  mu.set(1, 1, 2, C(2) * wq + C(3) * p + C(1));
  mu.set(0, 0, 1, C(5) * qs.P + C(6) * qs.Q);
  mu.set(1, 0, 1, C(5) * qs.Q - C(6) * qs.P);
  mu.set(2, 0, 2, C(7) * qs.P + C(8) * qs.Q);
  mu.set(2, 1, 2, C(7) * qs.Q - C(8) * qs.P);
  mu.set(2, 0, 1, C(9));
  return mu;
}

StructureTable evolve_algebra(const BianchiSpec& spec, double t, const OscParams& params)
{
  const OscState s = analytic_state(t, params);
  const QuasiState qs = quasi_state(t, params);
  const double p0 = params.p0();
  const double r = std::sqrt(2.0 * p0);
  const double a = spec.a();
  const double wq = params.omega() * s.q;

  StructureTable mu;
  mu.set(0, 0, 1, a * (qs.Q / r));
  mu.set(1, 0, 1, -a * (qs.P / r));
  mu.set(2, 0, 1, spec.mu3_12());
  mu.set(0, 1, 2, (s.p - p0) / (-2.0 * p0));
  mu.set(1, 1, 2, wq / (-2.0 * p0));
  mu.set(2, 1, 2, -a * (qs.Q / r));
  mu.set(0, 2, 0, wq / (-2.0 * p0));
  mu.set(1, 2, 0, (s.p + p0) / (2.0 * p0));
  mu.set(2, 2, 0, a * (qs.P / r));
  return mu;
}

StructureTable theorem_algebra(const BianchiSpec& spec, double t, const OscParams& params)
{
  const CParams C = solve_constants(spec.initial_table(), params.p0());
  return build_mu(C, analytic_state(t, params), quasi_state(t, params), params);
}

MultiOp lax_M_op(const OscParams& params) { return MultiOp::from_matrix(build_M(params)); }

StructureTable lax_bracket(const Mat3& M, const StructureTable& mu)
{
  return StructureTable::from_multiop(gerstenhaber(MultiOp::from_matrix(M), mu.to_multiop()));
}

double default_lax_dt(const OscParams& params) { return 1e-5 * params.period(); }

double operadic_lax_residual(const BianchiSpec& spec, double t, double dt, const OscParams& params)
{
  if (!(dt > 0.0))
    throw std::invalid_argument("operadic_lax_residual: dt must be > 0");
  const StructureTable fwd = evolve_algebra(spec, t + dt, params);
  const StructureTable bwd = evolve_algebra(spec, t - dt, params);
  const StructureTable rhs = lax_bracket(build_M(params), evolve_algebra(spec, t, params));
  double r = 0.0;
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        r = std::max(r, std::abs((fwd(s, i, j) - bwd(s, i, j)) / (2.0 * dt) - rhs(s, i, j)));
  return r;
}

double operadic_lax_pde_residual(const BianchiSpec& spec, double q, double p, const OscParams& params)
{
  const CParams C = solve_constants(spec.initial_table(), params.p0());
  const QuasiState qs = quasi_from_phase_point(q, p, params);
  const QuasiJacobian jac = quasi_jacobian(q, p, params);
  const double w = params.omega();

  // μ is affine in (q, p, Q, P); difference against the origin gives each partial.
  const StructureTable base = build_mu(C, {0.0, 0.0, 0.0}, {0.0, 0.0}, params);
  const StructureTable dq = build_mu(C, {0.0, 1.0, 0.0}, {0.0, 0.0}, params);
  const StructureTable dp = build_mu(C, {0.0, 0.0, 1.0}, {0.0, 0.0}, params);
  const StructureTable dQ = build_mu(C, {0.0, 0.0, 0.0}, {1.0, 0.0}, params);
  const StructureTable dP = build_mu(C, {0.0, 0.0, 0.0}, {0.0, 1.0}, params);

  const StructureTable mu = build_mu(C, {0.0, q, p}, qs, params);
  const StructureTable rhs = lax_bracket(build_M(params), mu);

  double r = 0.0;
  for (int s = 0; s < 3; ++s)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double b = base(s, i, j);
        const double gq = dq(s, i, j) - b, gp = dp(s, i, j) - b;
        const double gQ = dQ(s, i, j) - b, gP = dP(s, i, j) - b;
        const double d_dq = gq + jac.dQ_dq * gQ + jac.dP_dq * gP;
        const double d_dp = gp + jac.dQ_dp * gQ + jac.dP_dp * gP;
        const double lhs = p * d_dq - w * w * q * d_dp;
        r = std::max(r, std::abs(lhs - rhs(s, i, j)));
      }
  return r;
}

Vec3 classical_jacobiator(const StructureTable& mu, const Vec3& x, const Vec3& y, const Vec3& z)
{
  const MultiOp op = mu.to_multiop();
  auto br = [&op](const Vec3& u, const Vec3& v) -> Vec3 { return apply(op, {u, v}); };
  return br(x, br(y, z)) + br(y, br(z, x)) + br(z, br(x, y));
}

} // namespace oho
