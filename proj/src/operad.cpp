#include "oho/operad.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "oho/format.hpp"

namespace oho {

namespace {

std::size_t ipow(int base, int exp)
{
  std::size_t r = 1;
  for (int k = 0; k < exp; ++k)
    r *= static_cast<std::size_t>(base);
  return r;
}

void require_same_dim(const MultiOp& f, const MultiOp& g, const char* op)
{
  if (f.dim() != g.dim())
    throw std::invalid_argument(std::string(op) + ": dimension mismatch (" + std::to_string(f.dim()) +
                                " vs " + std::to_string(g.dim()) + ")");
}

} // namespace

MultiOp::MultiOp(int degree, int dim) : m_degree(degree), m_dim(dim)
{
  if (degree < 1)
    throw std::invalid_argument("MultiOp: degree must be >= 1");
  if (dim < 1)
    throw std::invalid_argument("MultiOp: dim must be >= 1");
  m_coeffs.assign(ipow(dim, degree + 1), 0.0);
}

MultiOp::MultiOp(int degree, int dim, std::vector<double> coeffs) : MultiOp(degree, dim)
{
  if (coeffs.size() != m_coeffs.size())
    throw std::invalid_argument("MultiOp: expected " + std::to_string(m_coeffs.size()) + " coefficients, got " +
                                std::to_string(coeffs.size()));
  m_coeffs = std::move(coeffs);
  if (!is_finite())
    throw std::invalid_argument("MultiOp: coefficients must be finite");
}

MultiOp MultiOp::identity(int dim)
{
  MultiOp id(1, dim);
  for (int i = 0; i < dim; ++i)
    id({i, i}) = 1.0;
  return id;
}

MultiOp MultiOp::from_matrix(const Eigen::MatrixXd& m)
{
  if (m.rows() != m.cols())
    throw std::invalid_argument("MultiOp::from_matrix: matrix must be square");
  MultiOp op(1, static_cast<int>(m.rows()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      op({i, j}) = m(i, j);
  if (!op.is_finite())
    throw std::invalid_argument("MultiOp::from_matrix: entries must be finite");
  return op;
}

double MultiOp::operator()(std::initializer_list<int> idx) const
{
  return m_coeffs[flat(std::span<const int>(idx.begin(), idx.size()))];
}

double& MultiOp::operator()(std::initializer_list<int> idx)
{
  return m_coeffs[flat(std::span<const int>(idx.begin(), idx.size()))];
}

std::size_t MultiOp::flat(std::span<const int> idx) const
{
  if (static_cast<int>(idx.size()) != m_degree + 1)
    throw std::invalid_argument("MultiOp: index needs " + std::to_string(m_degree + 1) + " components");
  std::size_t r = 0;
  for (int k : idx) {
    if (k < 0 || k >= m_dim)
      throw std::out_of_range("MultiOp: index component out of range");
    r = r * static_cast<std::size_t>(m_dim) + static_cast<std::size_t>(k);
  }
  return r;
}

std::vector<int> MultiOp::unflatten(std::size_t flat) const
{
  std::vector<int> idx(static_cast<std::size_t>(m_degree) + 1);
  for (std::size_t k = idx.size(); k-- > 0;) {
    idx[k] = static_cast<int>(flat % static_cast<std::size_t>(m_dim));
    flat /= static_cast<std::size_t>(m_dim);
  }
  return idx;
}

Eigen::MatrixXd MultiOp::to_matrix() const
{
  if (m_degree != 1)
    throw std::invalid_argument("MultiOp::to_matrix: degree must be 1");
  Eigen::MatrixXd m(m_dim, m_dim);
  for (int i = 0; i < m_dim; ++i)
    for (int j = 0; j < m_dim; ++j)
      m(i, j) = (*this)({i, j});
  return m;
}

double MultiOp::max_abs() const
{
  double r = 0.0;
  for (double c : m_coeffs)
    r = std::max(r, std::abs(c));
  return r;
}

bool MultiOp::is_finite() const
{
  for (double c : m_coeffs)
    if (!std::isfinite(c))
      return false;
  return true;
}

std::string MultiOp::dump() const
{
  std::ostringstream out;
  for (std::size_t f = 0; f < m_coeffs.size(); ++f) {
    if (m_coeffs[f] == 0.0)
      continue;
    for (int k : unflatten(f))
      out << (k + 1) << ' ';
    out << format_double(m_coeffs[f]) << '\n';
  }
  return out.str();
}

void MultiOp::check_same_shape(const MultiOp& o, const char* what) const
{
  if (o.m_degree != m_degree || o.m_dim != m_dim)
    throw std::invalid_argument(std::string("MultiOp ") + what + ": shape mismatch");
}

MultiOp& MultiOp::operator+=(const MultiOp& o)
{
  check_same_shape(o, "+=");
  for (std::size_t k = 0; k < m_coeffs.size(); ++k)
    m_coeffs[k] += o.m_coeffs[k];
  return *this;
}

MultiOp& MultiOp::operator-=(const MultiOp& o)
{
  check_same_shape(o, "-=");
  for (std::size_t k = 0; k < m_coeffs.size(); ++k)
    m_coeffs[k] -= o.m_coeffs[k];
  return *this;
}

MultiOp& MultiOp::operator*=(double s)
{
  for (double& c : m_coeffs)
    c *= s;
  return *this;
}

bool operator==(const MultiOp& a, const MultiOp& b)
{
  return a.m_degree == b.m_degree && a.m_dim == b.m_dim && a.m_coeffs == b.m_coeffs;
}

MultiOp operator+(MultiOp a, const MultiOp& b) { return a += b; }
MultiOp operator-(MultiOp a, const MultiOp& b) { return a -= b; }
MultiOp operator*(double s, MultiOp a) { return a *= s; }

MultiOp partial_compose(const MultiOp& f, const MultiOp& g, int i)
{
  require_same_dim(f, g, "partial_compose");
  if (i < 0 || i > f.reduced_degree())
    throw std::invalid_argument("partial_compose: slot " + std::to_string(i) + " outside [0, " +
                                std::to_string(f.reduced_degree()) + "]");

  const int d = f.dim();
  const int n = f.degree();
  const int k = g.degree();
  const int m = n + k - 1;
  const double sign = parity_sign(i * g.reduced_degree());

  MultiOp r(m, d);
  // fi = (out, j1..ji, s, j_{i+k+1}..j_m), gi = (s, j_{i+1}..j_{i+k})
  std::vector<int> fi(static_cast<std::size_t>(n) + 1);
  std::vector<int> gi(static_cast<std::size_t>(k) + 1);
  for (std::size_t flat = 0; flat < r.size(); ++flat) {
    const std::vector<int> ri = r.unflatten(flat);
    fi[0] = ri[0];
    for (int a = 0; a < i; ++a)
      fi[static_cast<std::size_t>(a) + 1] = ri[static_cast<std::size_t>(a) + 1];
    for (int a = i + 1; a < n; ++a)
      fi[static_cast<std::size_t>(a) + 1] = ri[static_cast<std::size_t>(a + k) ];
    for (int b = 0; b < k; ++b)
      gi[static_cast<std::size_t>(b) + 1] = ri[static_cast<std::size_t>(i + b) + 1];

    double acc = 0.0;
    for (int s = 0; s < d; ++s) {
      fi[static_cast<std::size_t>(i) + 1] = s;
      gi[0] = s;
      acc += f(fi) * g(gi);
    }
    r.coeffs()[flat] = sign * acc;
  }
  return r;
}

MultiOp total_compose(const MultiOp& f, const MultiOp& g)
{
  require_same_dim(f, g, "total_compose");
  MultiOp r = partial_compose(f, g, 0);
  for (int i = 1; i <= f.reduced_degree(); ++i)
    r += partial_compose(f, g, i);
  return r;
}

MultiOp gerstenhaber(const MultiOp& f, const MultiOp& g)
{
  require_same_dim(f, g, "gerstenhaber");
  MultiOp r = total_compose(f, g);
  const double sign = parity_sign(f.reduced_degree() * g.reduced_degree());
  MultiOp back = total_compose(g, f);
  back *= sign;
  r -= back;
  return r;
}

Eigen::VectorXd apply(const MultiOp& f, std::span<const Eigen::VectorXd> args)
{
  if (static_cast<int>(args.size()) != f.degree())
    throw std::invalid_argument("apply: expected " + std::to_string(f.degree()) + " arguments, got " +
                                std::to_string(args.size()));
  for (const auto& v : args)
    if (v.size() != f.dim())
      throw std::invalid_argument("apply: argument dimension mismatch");

  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.dim());
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    const double c = f.coeffs()[flat];
    if (c == 0.0)
      continue;
    const std::vector<int> idx = f.unflatten(flat);
    double term = c;
    for (std::size_t a = 0; a < args.size(); ++a)
      term *= args[a](idx[a + 1]);
    out(idx[0]) += term;
  }
  return out;
}

Eigen::VectorXd apply(const MultiOp& f, std::initializer_list<Eigen::VectorXd> args)
{
  return apply(f, std::span<const Eigen::VectorXd>(args.begin(), args.size()));
}

} // namespace oho
