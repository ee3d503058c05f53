#include "pnoninner/gfp.hpp"

#include <cassert>
#include <utility>

#include "pnoninner/errors.hpp"

namespace pnoninner::gfp {

int reduce(long long a, int p) {
  long long r = a % p;
  if (r < 0) r += p;
  return static_cast<int>(r);
}

int inverse_mod(int a, int p) {
  a = reduce(a, p);
  if (a == 0) throw InvalidArgument("inverse of zero in GF(p)");
  // p is prime, so a^(p-2) is the inverse.
  long long result = 1;
  long long base = a;
  int e = p - 2;
  while (e > 0) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
    e >>= 1;
  }
  return static_cast<int>(result);
}

Matrix::Matrix(int rows, int cols, int p)
    : rows_(rows), cols_(cols), p_(p),
      data_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0) {}

Matrix Matrix::identity(int n, int p) {
  Matrix m(n, n, p);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows, int cols, int p) {
  Matrix m(static_cast<int>(rows.size()), cols, p);
  for (int r = 0; r < m.rows(); ++r) m.set_row(r, rows[static_cast<std::size_t>(r)]);
  return m;
}

Vector Matrix::row(int r) const {
  Vector v(static_cast<std::size_t>(cols_));
  for (int c = 0; c < cols_; ++c) v[static_cast<std::size_t>(c)] = (*this)(r, c);
  return v;
}

void Matrix::set_row(int r, const Vector& v) {
  assert(static_cast<int>(v.size()) == cols_);
  for (int c = 0; c < cols_; ++c) (*this)(r, c) = reduce(v[static_cast<std::size_t>(c)], p_);
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_, p_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

bool Matrix::is_zero() const {
  for (int x : data_)
    if (x != 0) return false;
  return true;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  assert(a.cols_ == b.rows_);
  Matrix c(a.rows_, b.cols_, a.p_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const long long aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols_; ++j) c(i, j) = static_cast<int>((c(i, j) + aik * b(k, j)) % a.p_);
    }
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] = (a.data_[i] + b.data_[i]) % a.p_;
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  assert(a.rows_ == b.rows_ && a.cols_ == b.cols_);
  Matrix c = a;
  for (std::size_t i = 0; i < c.data_.size(); ++i)
    c.data_[i] = (a.data_[i] - b.data_[i] + a.p_) % a.p_;
  return c;
}

Matrix operator*(int s, const Matrix& a) {
  Matrix c = a;
  for (int& x : c.data_) x = reduce(static_cast<long long>(s) * x, a.p_);
  return c;
}

Vector mul(const Vector& v, const Matrix& m) {
  assert(static_cast<int>(v.size()) == m.rows());
  Vector out(static_cast<std::size_t>(m.cols()), 0);
  const int p = m.modulus();
  for (int r = 0; r < m.rows(); ++r) {
    const long long vr = v[static_cast<std::size_t>(r)];
    if (vr == 0) continue;
    for (int c = 0; c < m.cols(); ++c)
      out[static_cast<std::size_t>(c)] =
          static_cast<int>((out[static_cast<std::size_t>(c)] + vr * m(r, c)) % p);
  }
  return out;
}

Vector add(const Vector& a, const Vector& b, int p) {
  assert(a.size() == b.size());
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = (a[i] + b[i]) % p;
  return c;
}

Vector sub(const Vector& a, const Vector& b, int p) {
  assert(a.size() == b.size());
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = reduce(a[i] - b[i], p);
  return c;
}

Vector scale(const Vector& a, int s, int p) {
  Vector c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = reduce(static_cast<long long>(a[i]) * s, p);
  return c;
}

bool is_zero(const Vector& v) {
  for (int x : v)
    if (x != 0) return false;
  return true;
}

Vector zero_vector(int n) { return Vector(static_cast<std::size_t>(n), 0); }

Vector unit_vector(int n, int i) {
  Vector v = zero_vector(n);
  v[static_cast<std::size_t>(i)] = 1;
  return v;
}

std::vector<int> rref(Matrix& m) {
  const int p = m.modulus();
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int sel = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m(r, col) != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    if (sel != row)
      for (int c = 0; c < m.cols(); ++c) std::swap(m(sel, c), m(row, c));
    const long long inv = inverse_mod(m(row, col), p);
    for (int c = 0; c < m.cols(); ++c) m(row, c) = static_cast<int>(m(row, c) * inv % p);
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      const long long f = m(r, col);
      for (int c = 0; c < m.cols(); ++c) m(r, c) = reduce(m(r, c) - f * m(row, c), p);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

int rank(Matrix m) { return static_cast<int>(rref(m).size()); }

std::vector<Vector> row_space_basis(const std::vector<Vector>& vectors, int dim, int p) {
  if (vectors.empty()) return {};
  Matrix m = Matrix::from_rows(vectors, dim, p);
  const auto pivots = rref(m);
  std::vector<Vector> basis;
  for (std::size_t r = 0; r < pivots.size(); ++r) basis.push_back(m.row(static_cast<int>(r)));
  return basis;
}

std::vector<Vector> nullspace(const Matrix& m) {
  Matrix r = m;
  const auto pivots = rref(r);
  const int p = m.modulus();
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (int c : pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<Vector> basis;
  for (int free = 0; free < m.cols(); ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    Vector v = zero_vector(m.cols());
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i)
      v[static_cast<std::size_t>(pivots[i])] = reduce(-r(static_cast<int>(i), free), p);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<Vector> left_nullspace(const Matrix& m) { return nullspace(m.transposed()); }

std::optional<Vector> solve_left(const Matrix& m, const Vector& b) {
  // v M = b  <=>  M^T v^T = b^T; solve via the augmented system.
  const int p = m.modulus();
  const int n = m.rows();
  Matrix aug(m.cols(), n + 1, p);
  for (int c = 0; c < m.cols(); ++c) {
    for (int r = 0; r < n; ++r) aug(c, r) = m(r, c);
    aug(c, n) = reduce(b[static_cast<std::size_t>(c)], p);
  }
  const auto pivots = rref(aug);
  Vector v = zero_vector(n);
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    if (pivots[i] == n) return std::nullopt;
    v[static_cast<std::size_t>(pivots[i])] = aug(static_cast<int>(i), n);
  }
  return v;
}

std::optional<Matrix> inverse(const Matrix& m) {
  if (m.rows() != m.cols()) return std::nullopt;
  const int n = m.rows();
  const int p = m.modulus();
  Matrix aug(n, 2 * n, p);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) aug(r, c) = m(r, c);
    aug(r, n + r) = 1;
  }
  const auto pivots = rref(aug);
  if (static_cast<int>(pivots.size()) < n || (n > 0 && pivots[static_cast<std::size_t>(n - 1)] != n - 1))
    return std::nullopt;
  Matrix inv(n, n, p);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) inv(r, c) = aug(r, n + c);
  return inv;
}

std::optional<Vector> coordinates(const std::vector<Vector>& basis, const Vector& v, int p) {
  if (basis.empty()) {
    if (is_zero(v)) return Vector{};
    return std::nullopt;
  }
  const Matrix m = Matrix::from_rows(basis, static_cast<int>(v.size()), p);
  return solve_left(m, v);
}

}  // namespace pnoninner::gfp
