#pragma once

// Dense linear algebra over the prime field GF(p).
//
// Vectors are row vectors; a matrix acts on the right (v * M), which matches
// the right-module convention used for group actions throughout the library.
// All entries are kept reduced in [0, p).

#include <optional>
#include <vector>

namespace pnoninner::gfp {

using Vector = std::vector<int>;

int reduce(long long a, int p);
int inverse_mod(int a, int p);

class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols, int p);

  static Matrix identity(int n, int p);
  static Matrix from_rows(const std::vector<Vector>& rows, int cols, int p);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int modulus() const noexcept { return p_; }

  int& operator()(int r, int c) { return data_[index(r, c)]; }
  int operator()(int r, int c) const { return data_[index(r, c)]; }

  Vector row(int r) const;
  void set_row(int r, const Vector& v);

  Matrix transposed() const;
  bool is_zero() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(const Matrix& a, const Matrix& b);
  friend Matrix operator-(const Matrix& a, const Matrix& b);
  friend Matrix operator*(int s, const Matrix& a);
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t index(int r, int c) const {
    return static_cast<std::size_t>(r) * static_cast<std::size_t>(cols_) +
           static_cast<std::size_t>(c);
  }

  int rows_ = 0;
  int cols_ = 0;
  int p_ = 2;
  std::vector<int> data_;
};

// v * M for a row vector v of length M.rows().
Vector mul(const Vector& v, const Matrix& m);
Vector add(const Vector& a, const Vector& b, int p);
Vector sub(const Vector& a, const Vector& b, int p);
Vector scale(const Vector& a, int s, int p);
bool is_zero(const Vector& v);
Vector zero_vector(int n);
Vector unit_vector(int n, int i);

// In-place reduced row echelon form; returns the pivot column of each
// nonzero row, in order.
std::vector<int> rref(Matrix& m);

int rank(Matrix m);

// Reduced echelon basis of the row span of the given vectors.
std::vector<Vector> row_space_basis(const std::vector<Vector>& vectors, int dim, int p);

// Basis of {x : M x^T = 0}, one vector per free column of the reduced
// echelon form, ordered by free column.
std::vector<Vector> nullspace(const Matrix& m);

// Basis of {v : v M = 0}.
std::vector<Vector> left_nullspace(const Matrix& m);

// Some v with v M = b, if one exists.
std::optional<Vector> solve_left(const Matrix& m, const Vector& b);

std::optional<Matrix> inverse(const Matrix& m);

// Coordinates of v in the given (linearly independent) basis, if v lies in
// its span.
std::optional<Vector> coordinates(const std::vector<Vector>& basis, const Vector& v, int p);

// All vectors of GF(p)^n in lexicographic order, as a callback stream.
template <typename Fn>
void for_each_vector(int n, int p, Fn&& fn) {
  Vector v(static_cast<std::size_t>(n), 0);
  while (true) {
    fn(static_cast<const Vector&>(v));
    int i = n - 1;
    while (i >= 0 && v[static_cast<std::size_t>(i)] == p - 1) {
      v[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return;
    ++v[static_cast<std::size_t>(i)];
  }
}

}  // namespace pnoninner::gfp
