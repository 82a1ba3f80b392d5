#ifndef OHO_OPERAD_HPP
#define OHO_OPERAD_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oho {

/// A homogeneous multilinear operation f : V^{⊗n} → V over a real vector
/// space of dimension d, stored densely as c^i_{j1…jn} (coefficient of e_i
/// in f(e_{j1},…,e_{jn})). Row-major layout (i, j1, …, jn), indices 0-based.
class MultiOp
{
public:
  MultiOp(int degree, int dim);
  MultiOp(int degree, int dim, std::vector<double> coeffs);

  static MultiOp identity(int dim);
  /// Degree-1 operation with c^i_j = m(i, j).
  static MultiOp from_matrix(const Eigen::MatrixXd& m);

  int degree() const { return m_degree; }
  /// |f| = degree − 1.
  int reduced_degree() const { return m_degree - 1; }
  int dim() const { return m_dim; }
  std::size_t size() const { return m_coeffs.size(); }

  /// idx = (i, j1, …, jn).
  double operator()(std::span<const int> idx) const { return m_coeffs[flat(idx)]; }
  double& operator()(std::span<const int> idx) { return m_coeffs[flat(idx)]; }
  double operator()(std::initializer_list<int> idx) const;
  double& operator()(std::initializer_list<int> idx);

  std::span<const double> coeffs() const { return m_coeffs; }
  std::span<double> coeffs() { return m_coeffs; }

  /// Flat index → (i, j1, …, jn).
  std::vector<int> unflatten(std::size_t flat) const;
  std::size_t flat(std::span<const int> idx) const;

  Eigen::MatrixXd to_matrix() const;

  double max_abs() const;
  bool is_finite() const;

  /// One line per nonzero coefficient, "i j1 … jn value" with 1-based
  /// indices and 17 significant digits, in lexicographic index order.
  std::string dump() const;

  MultiOp& operator+=(const MultiOp& o);
  MultiOp& operator-=(const MultiOp& o);
  MultiOp& operator*=(double s);

  friend bool operator==(const MultiOp& a, const MultiOp& b);

private:
  void check_same_shape(const MultiOp& o, const char* what) const;

  int m_degree;
  int m_dim;
  std::vector<double> m_coeffs;
};

MultiOp operator+(MultiOp a, const MultiOp& b);
MultiOp operator-(MultiOp a, const MultiOp& b);
MultiOp operator*(double s, MultiOp a);

/// f ∘_i g = (−1)^{i|g|} f ∘ (1^{⊗i} ⊗ g ⊗ 1^{⊗(|f|−i)}), 0 ≤ i ≤ |f|.
MultiOp partial_compose(const MultiOp& f, const MultiOp& g, int i);

/// f ∘ g = Σ_{i=0}^{|f|} f ∘_i g.
MultiOp total_compose(const MultiOp& f, const MultiOp& g);

/// [f, g] = f ∘ g − (−1)^{|f||g|} g ∘ f.
MultiOp gerstenhaber(const MultiOp& f, const MultiOp& g);

/// f(args[0], …, args[n−1]).
Eigen::VectorXd apply(const MultiOp& f, std::span<const Eigen::VectorXd> args);
Eigen::VectorXd apply(const MultiOp& f, std::initializer_list<Eigen::VectorXd> args);

/// Sign (−1)^k.
constexpr int parity_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

} // namespace oho

#endif
