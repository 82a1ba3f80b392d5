#include "oho/fock.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

#include "oho/format.hpp"

namespace oho {

namespace {

double row_sum_norm(const CMat& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

double spectral_norm(const CMat& m)
{
  if (m.size() == 0)
    return 0.0;
  Eigen::JacobiSVD<CMat> svd(m);
  return svd.singularValues()(0);
}

} // namespace

// ---------------------------------------------------------------------------
// FockSpace / QOperator

FockSpace::FockSpace(int N, double omega, double hbar) : m_N(N), m_omega(omega), m_hbar(hbar)
{
  if (N < 4)
    throw std::invalid_argument("FockSpace: N must be >= 4, got " + std::to_string(N));
  if (!(omega > 0.0) || !std::isfinite(omega))
    throw std::invalid_argument("FockSpace: omega must be finite and > 0");
  if (!(hbar > 0.0) || !std::isfinite(hbar))
    throw std::invalid_argument("FockSpace: hbar must be finite and > 0");
}

int FockSpace::levels_below(double cutoff) const
{
  int k = 0;
  while (k < m_N && level_energy(k) <= cutoff)
    ++k;
  return k;
}

QOperator::QOperator(FockSpace space, CMat matrix) : m_space(space), m_matrix(std::move(matrix))
{
  if (m_matrix.rows() != space.N() || m_matrix.cols() != space.N())
    throw std::invalid_argument("QOperator: matrix is " + std::to_string(m_matrix.rows()) + "x" +
                                std::to_string(m_matrix.cols()) + ", space has N = " + std::to_string(space.N()));
}

QOperator QOperator::zero(const FockSpace& space) { return {space, CMat::Zero(space.N(), space.N())}; }

QOperator QOperator::identity(const FockSpace& space) { return {space, CMat::Identity(space.N(), space.N())}; }

QOperator QOperator::adjoint() const { return {m_space, m_matrix.adjoint()}; }

double QOperator::hermiticity_defect() const { return (m_matrix - m_matrix.adjoint()).cwiseAbs().maxCoeff(); }

void QOperator::check_space(const QOperator& o, const char* what) const
{
  if (!(m_space == o.m_space))
    throw std::invalid_argument(std::string("QOperator ") + what + ": operators live on different Fock spaces");
}

QOperator& QOperator::operator+=(const QOperator& o)
{
  check_space(o, "+");
  m_matrix += o.m_matrix;
  return *this;
}

QOperator& QOperator::operator-=(const QOperator& o)
{
  check_space(o, "-");
  m_matrix -= o.m_matrix;
  return *this;
}

QOperator& QOperator::operator*=(cplx s)
{
  m_matrix *= s;
  return *this;
}

QOperator QOperator::operator-() const { return {m_space, -m_matrix}; }

std::string QOperator::to_csv() const
{
  std::ostringstream out;
  out << "row,col,re,im\n";
  for (int c = 0; c < m_matrix.cols(); ++c)
    for (int r = 0; r < m_matrix.rows(); ++r) {
      const cplx v = m_matrix(r, c);
      if (v != cplx(0.0, 0.0))
        out << r << ',' << c << ',' << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
  return out.str();
}

QOperator operator+(QOperator a, const QOperator& b) { return a += b; }
QOperator operator-(QOperator a, const QOperator& b) { return a -= b; }

QOperator operator*(const QOperator& a, const QOperator& b)
{
  a.check_space(b, "*");
  return {a.space(), a.matrix() * b.matrix()};
}

QOperator operator*(cplx s, QOperator a) { return a *= s; }
QOperator operator*(QOperator a, cplx s) { return a *= s; }
QOperator operator*(double s, QOperator a) { return a *= cplx(s, 0.0); }

QOperator commutator(const QOperator& a, const QOperator& b)
{
  a.check_space(b, "commutator");
  return {a.space(), a.matrix() * b.matrix() - b.matrix() * a.matrix()};
}

// ---------------------------------------------------------------------------
// Canonical operators

Ladder ladder(const FockSpace& space)
{
  const int N = space.N();
  CMat a = CMat::Zero(N, N);
  for (int n = 1; n < N; ++n)
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return {QOperator(space, a), QOperator(space, a.adjoint())};
}

CanonicalOps canonical_ops(const FockSpace& space)
{
  const Ladder l = ladder(space);
  const double w = space.omega();
  const double hb = space.hbar();
  CMat q = std::sqrt(hb / (2.0 * w)) * (l.a.matrix() + l.adag.matrix());
  CMat p = cplx(0.0, std::sqrt(hb * w / 2.0)) * (l.adag.matrix() - l.a.matrix());
  CMat H = CMat::Zero(space.N(), space.N());
  for (int n = 0; n < space.N(); ++n)
    H(n, n) = space.level_energy(n);
  return {QOperator(space, std::move(q)), QOperator(space, std::move(p)), QOperator(space, std::move(H))};
}

QOperator func_calc(const QOperator& A, const std::function<double(double)>& f, double clip_tol, FuncDomain domain)
{
  const CMat& m = A.matrix();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (A.hermiticity_defect() > 1e-12 * scale)
    throw std::invalid_argument("func_calc: operator is not Hermitian (defect " +
                                std::to_string(A.hermiticity_defect()) + ")");

  Eigen::SelfAdjointEigenSolver<CMat> es(m);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("func_calc: eigendecomposition did not converge");
  const CMat& U = es.eigenvectors();
  Eigen::VectorXd lam = es.eigenvalues();

  const CMat rebuilt = U * lam.cast<cplx>().asDiagonal() * U.adjoint();
  if ((rebuilt - m).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::runtime_error("func_calc: reconstruction residual above 1e-10");

  Eigen::VectorXd fl(lam.size());
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    double x = lam(k);
    if (domain == FuncDomain::NonNegative && x < 0.0) {
      if (x < -clip_tol)
        throw TruncationError("func_calc: eigenvalue " + format_double(x) + " below -clip_tol = " +
                              format_double(-clip_tol) + "; increase the truncation N");
      x = 0.0;
    }
    fl(k) = f(x);
  }
  return {A.space(), U * fl.cast<cplx>().asDiagonal() * U.adjoint()};
}

QuasiOps quasi_ops(const FockSpace& space, const CanonicalOps& canon, double clip_rel)
{
  const int N = space.N();
  CMat S = CMat::Zero(N, N);
  CMat eps = CMat::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    const double s = std::sqrt(2.0 * space.level_energy(n));
    S(n, n) = s;
    eps(n, n) = space.omega() / (2.0 * s);
  }
  QOperator Sop(space, std::move(S));
  QOperator plus = Sop + canon.p;
  QOperator minus = Sop - canon.p;
  auto root = [](double x) { return std::sqrt(x); };
  QOperator P = func_calc(plus, root, clip_rel * row_sum_norm(plus.matrix()));
  QOperator Q = func_calc(minus, root, clip_rel * row_sum_norm(minus.matrix()));
  return {std::move(Sop), QOperator(space, std::move(eps)), std::move(P), std::move(Q)};
}

QuantumOscillator QuantumOscillator::build(const FockSpace& space, double clip_rel)
{
  CanonicalOps canon = canonical_ops(space);
  QuasiOps quasi = quasi_ops(space, canon, clip_rel);
  return {space, std::move(canon), std::move(quasi)};
}

// ---------------------------------------------------------------------------
// Coherent states and probes

CoherentState coherent(const FockSpace& space, cplx alpha, double leakage_threshold)
{
  const int N = space.N();
  const double r = std::abs(alpha);
  const double phase = std::arg(alpha);
  CVec v = CVec::Zero(N);
  if (r == 0.0) {
    v(0) = 1.0;
    return {alpha, v, 0.0};
  }
  double weight = 0.0;
  for (int n = 0; n < N; ++n) {
    const double logc = -0.5 * r * r + n * std::log(r) - 0.5 * std::lgamma(n + 1.0);
    const double c = std::exp(logc);
    v(n) = std::polar(c, n * phase);
    weight += c * c;
  }
  const double leakage = std::max(0.0, 1.0 - weight);
  if (leakage > leakage_threshold)
    throw TruncationError("coherent: leakage " + format_double(leakage) + " exceeds " +
                          format_double(leakage_threshold) + " at N = " + std::to_string(N) + " (|alpha| = " +
                          format_double(r) + "); use N >= " + std::to_string(coherent_truncation(r)));
  v /= v.norm();
  return {alpha, std::move(v), leakage};
}

double coherent_amplitude(double energy, double hbar, double omega)
{
  const double x = energy / (hbar * omega) - 0.5;
  if (!(x > 0.0))
    throw std::domain_error("coherent_amplitude: energy must exceed the zero-point energy hbar*omega/2");
  return std::sqrt(x);
}

cplx alpha_on_shell(double energy, double theta, double hbar, double omega)
{
  return coherent_amplitude(energy, hbar, omega) * cplx(std::sin(theta), std::cos(theta));
}

int coherent_truncation(double alpha_abs)
{
  return static_cast<int>(std::ceil(alpha_abs * alpha_abs + 8.0 * alpha_abs + 20.0));
}

int truncation_for_energy(double energy, double hbar, double omega)
{
  return coherent_truncation(coherent_amplitude(energy, hbar, omega));
}

cplx expectation(const CVec& v, const QOperator& A)
{
  if (v.size() != A.N())
    throw std::invalid_argument("expectation: state and operator dimensions differ");
  return v.dot(A.matrix() * v);
}

cplx expectation(const CoherentState& s, const QOperator& A) { return expectation(s.vector, A); }

double projected_norm(const QOperator& A, int levels)
{
  levels = std::clamp(levels, 0, A.N());
  return spectral_norm(A.matrix().topLeftCorner(levels, levels));
}

double energy_projected_norm(const QOperator& A, double cutoff)
{
  return projected_norm(A, A.space().levels_below(cutoff));
}

ProbeProjector::ProbeProjector(const FockSpace& space, std::vector<CoherentState> probes)
    : m_space(space), m_probes(std::move(probes))
{
  if (m_probes.empty())
    throw std::invalid_argument("ProbeProjector: need at least one probe state");
  CMat V(space.N(), static_cast<Eigen::Index>(m_probes.size()));
  for (std::size_t k = 0; k < m_probes.size(); ++k) {
    if (m_probes[k].vector.size() != space.N())
      throw std::invalid_argument("ProbeProjector: probe dimension mismatch");
    V.col(static_cast<Eigen::Index>(k)) = m_probes[k].vector;
  }
  Eigen::HouseholderQR<CMat> qr(V);
  m_basis = qr.householderQ() * CMat::Identity(space.N(), V.cols());
}

ProbeProjector ProbeProjector::on_shell(const FockSpace& space, double energy, std::span<const double> thetas,
                                        double leakage_threshold)
{
  std::vector<CoherentState> probes;
  for (double th : thetas)
    probes.push_back(coherent(space, alpha_on_shell(energy, th, space.hbar(), space.omega()), leakage_threshold));
  return ProbeProjector(space, std::move(probes));
}

double ProbeProjector::norm(const QOperator& A) const
{
  if (!(A.space() == m_space))
    throw std::invalid_argument("ProbeProjector::norm: operator lives on a different Fock space");
  return spectral_norm(m_basis.adjoint() * A.matrix() * m_basis);
}

std::vector<double> default_probe_angles() { return {std::numbers::pi / 2.0}; }

// ---------------------------------------------------------------------------
// Quasi-CCR measurements

QuasiCcrRow quasi_ccr_point(double omega, double energy, double hbar, std::optional<int> N_override,
                            std::span<const double> thetas)
{
  const std::vector<double> defaults = default_probe_angles();
  if (thetas.empty())
    thetas = defaults;
  const int N = N_override.value_or(truncation_for_energy(energy, hbar, omega));
  const QuantumOscillator osc = QuantumOscillator::build(FockSpace(N, omega, hbar));
  const ProbeProjector probes = ProbeProjector::on_shell(osc.space, energy, thetas);

  const QOperator& P = osc.quasi.P;
  const QOperator& Q = osc.quasi.Q;
  const QOperator two_wq = 2.0 * omega * osc.canon.q;
  const QOperator sym = P * Q + Q * P - two_wq;
  const QOperator comm = commutator(P, Q);
  const cplx hbar_over_i(0.0, -hbar);
  const QOperator target = hbar_over_i * osc.quasi.eps;

  QuasiCcrRow row;
  row.hbar = hbar;
  row.N = N;
  row.sym_resid = probes.norm(sym) / probes.norm(two_wq);
  row.comm_resid = probes.norm(comm - target) / probes.norm(target);
  row.comm_ratio = (expectation(probes.probes().front(), comm) / hbar_over_i).real();
  return row;
}

std::vector<QuasiCcrRow> quasi_ccr_sweep(double omega, double energy, std::span<const double> hbar_list,
                                         std::optional<int> N_override)
{
  std::vector<QuasiCcrRow> rows;
  rows.reserve(hbar_list.size());
  for (double hb : hbar_list)
    rows.push_back(quasi_ccr_point(omega, energy, hb, N_override));
  return rows;
}

} // namespace oho
