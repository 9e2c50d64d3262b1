#pragma once

// Exact linear algebra over Z and Q: integer matrices, Smith normal form,
// homology of chain complexes, graded modules and Poincare polynomials.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "hypcoh/errors.hpp"

namespace hypcoh {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class Coefficients { rational, integral };

inline const char* to_string(Coefficients c) {
  return c == Coefficients::rational ? "rational" : "integral";
}

// ---------------------------------------------------------------------------
// IntegerMatrix

class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  IntegerMatrix(std::initializer_list<std::initializer_list<long long>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw Error(ErrorKind::dimension_mismatch, "ragged matrix literal");
      for (long long v : row) data_.emplace_back(v);
    }
  }

  static IntegerMatrix identity(std::size_t n) {
    IntegerMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Integer& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Integer& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const Integer& x) { return x == 0; });
  }

  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::dimension_mismatch, "matrix product shape");
    IntegerMatrix out(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Integer& aik = a(i, k);
        if (aik == 0) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
      }
    return out;
  }

  IntegerMatrix transposed() const {
    IntegerMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  // row[dst] += factor * row[src]
  void add_row(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t j = 0; j < cols_; ++j) (*this)(dst, j) += factor * (*this)(src, j);
  }
  // col[dst] += factor * col[src]
  void add_col(std::size_t dst, std::size_t src, const Integer& factor) {
    if (factor == 0) return;
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, dst) += factor * (*this)(i, src);
  }

  bool operator==(const IntegerMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Integer> data_;
};

// ---------------------------------------------------------------------------
// Smith normal form

/// U * M * V = diag(invariants, 0...), with U, V unimodular and v_inverse = V^{-1}.
struct SmithDecomposition {
  std::vector<Integer> invariants;
  IntegerMatrix u;
  IntegerMatrix v;
  IntegerMatrix v_inverse;
  IntegerMatrix diagonal;
};

inline SmithDecomposition smith_decomposition(const IntegerMatrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  IntegerMatrix a = m;
  IntegerMatrix u = IntegerMatrix::identity(rows);
  IntegerMatrix v = IntegerMatrix::identity(cols);
  IntegerMatrix vinv = IntegerMatrix::identity(cols);

  auto row_op = [&](std::size_t dst, std::size_t src, const Integer& f) {
    a.add_row(dst, src, f);
    u.add_row(dst, src, f);
  };
  auto col_op = [&](std::size_t dst, std::size_t src, const Integer& f) {
    a.add_col(dst, src, f);
    v.add_col(dst, src, f);
    vinv.add_row(src, dst, -f);
  };
  auto swap_r = [&](std::size_t x, std::size_t y) {
    a.swap_rows(x, y);
    u.swap_rows(x, y);
  };
  auto swap_c = [&](std::size_t x, std::size_t y) {
    a.swap_cols(x, y);
    v.swap_cols(x, y);
    vinv.swap_rows(x, y);
  };

  std::vector<Integer> invariants;
  const std::size_t limit = std::min(rows, cols);
  for (std::size_t t = 0; t < limit; ++t) {
    // Minimal-absolute-value pivot in the trailing block.
    std::optional<std::pair<std::size_t, std::size_t>> best;
    Integer best_abs;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j) {
        if (a(i, j) == 0) continue;
        Integer ab = abs(a(i, j));
        if (!best || ab < best_abs) {
          best = {i, j};
          best_abs = ab;
        }
      }
    if (!best) break;
    swap_r(t, best->first);
    swap_c(t, best->second);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Integer q = a(i, t) / a(t, t);
        row_op(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Integer q = a(t, j) / a(t, t);
        col_op(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) {
        // Bring the smallest remainder in row/column t to the pivot and repeat.
        std::size_t bi = t, bj = t;
        Integer bab = abs(a(t, t));
        for (std::size_t i = t + 1; i < rows; ++i)
          if (a(i, t) != 0 && abs(a(i, t)) < bab) { bab = abs(a(i, t)); bi = i; bj = t; }
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(t, j) != 0 && abs(a(t, j)) < bab) { bab = abs(a(t, j)); bi = t; bj = j; }
        swap_r(t, bi);
        swap_c(t, bj);
        continue;
      }
      // Divisibility: the pivot must divide the whole trailing block.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(i, j) % a(t, t) != 0) {
            row_op(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a(t, t) < 0) {
      for (std::size_t j = 0; j < cols; ++j) a(t, j) = -a(t, j);
      for (std::size_t j = 0; j < rows; ++j) u(t, j) = -u(t, j);
    }
    invariants.push_back(a(t, t));
  }
  return {std::move(invariants), std::move(u), std::move(v), std::move(vinv), std::move(a)};
}

/// Invariant factors d1 | d2 | ... | dr of m, r = rank(m).
inline std::vector<Integer> smith_normal_form(const IntegerMatrix& m) {
  return smith_decomposition(m).invariants;
}

inline std::size_t matrix_rank(const IntegerMatrix& m) { return smith_normal_form(m).size(); }

// ---------------------------------------------------------------------------
// Graded modules

/// A cyclic p-primary summand (Z/p^exponent)^multiplicity.
struct TorsionSummand {
  std::int64_t prime = 0;
  int exponent = 0;
  int multiplicity = 0;
  auto operator<=>(const TorsionSummand&) const = default;
};

struct ModuleEntry {
  std::int64_t free_rank = 0;
  std::vector<TorsionSummand> torsion;

  bool is_zero() const { return free_rank == 0 && torsion.empty(); }
  bool has_torsion() const { return !torsion.empty(); }
  bool operator==(const ModuleEntry&) const = default;
};

inline std::vector<std::pair<std::int64_t, int>> factor_small(Integer n) {
  std::vector<std::pair<std::int64_t, int>> out;
  if (n < 0) n = -n;
  for (std::int64_t p = 2; Integer(p) * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(static_cast<std::int64_t>(n), 1);
  return out;
}

class GradedModule {
 public:
  GradedModule() = default;
  explicit GradedModule(Coefficients mode) : mode_(mode) {}
  GradedModule(std::initializer_list<std::pair<const int, std::int64_t>> ranks,
               Coefficients mode = Coefficients::rational)
      : mode_(mode) {
    for (const auto& [deg, r] : ranks) add_free(deg, r);
  }

  Coefficients mode() const noexcept { return mode_; }
  void set_mode(Coefficients m) {
    if (m == Coefficients::rational) strip_torsion();
    mode_ = m;
  }

  void add_free(int degree, std::int64_t rank) {
    if (rank < 0) throw Error(ErrorKind::bad_range, "negative free rank");
    if (rank == 0) return;
    entries_[degree].free_rank += rank;
  }

  /// Remove rank from the free part; used to reduce/unreduce at degree 0.
  void remove_free(int degree, std::int64_t rank) {
    auto it = entries_.find(degree);
    if (rank == 0) return;
    if (it == entries_.end() || it->second.free_rank < rank)
      throw Error(ErrorKind::bad_range, "removing more free rank than present in degree " + std::to_string(degree));
    it->second.free_rank -= rank;
    if (it->second.is_zero()) entries_.erase(it);
  }

  void add_torsion(int degree, std::int64_t prime, int exponent, int multiplicity = 1) {
    if (mode_ == Coefficients::rational) return;
    if (multiplicity <= 0 || exponent <= 0) throw Error(ErrorKind::bad_range, "bad torsion summand");
    if (factor_small(prime).size() != 1 || factor_small(prime)[0].second != 1)
      throw Error(ErrorKind::bad_range, "torsion order " + std::to_string(prime) + " is not prime");
    auto& tors = entries_[degree].torsion;
    for (auto& t : tors)
      if (t.prime == prime && t.exponent == exponent) {
        t.multiplicity += multiplicity;
        return;
      }
    tors.push_back({prime, exponent, multiplicity});
    std::sort(tors.begin(), tors.end());
  }

  /// Adds Z/order split into its primary parts.
  void add_cyclic(int degree, const Integer& order) {
    if (order == 1) return;
    for (auto [p, e] : factor_small(order)) add_torsion(degree, p, e, 1);
  }

  void add_entry(int degree, const ModuleEntry& e) {
    add_free(degree, e.free_rank);
    for (const auto& t : e.torsion) add_torsion(degree, t.prime, t.exponent, t.multiplicity);
  }

  std::int64_t rank(int degree) const {
    auto it = entries_.find(degree);
    return it == entries_.end() ? 0 : it->second.free_rank;
  }

  ModuleEntry entry(int degree) const {
    auto it = entries_.find(degree);
    return it == entries_.end() ? ModuleEntry{} : it->second;
  }

  const std::map<int, ModuleEntry>& entries() const noexcept { return entries_; }

  bool is_zero() const {
    for (const auto& [d, e] : entries_)
      if (!e.is_zero()) return false;
    return true;
  }

  std::int64_t total_rank() const {
    std::int64_t s = 0;
    for (const auto& [d, e] : entries_) s += e.free_rank;
    return s;
  }

  /// Alternating sum of free ranks.
  std::int64_t euler_characteristic() const {
    std::int64_t s = 0;
    for (const auto& [d, e] : entries_) s += (d % 2 == 0 ? 1 : -1) * e.free_rank;
    return s;
  }

  std::optional<int> min_degree() const {
    for (const auto& [d, e] : entries_)
      if (!e.is_zero()) return d;
    return std::nullopt;
  }
  std::optional<int> max_degree() const {
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
      if (!it->second.is_zero()) return it->first;
    return std::nullopt;
  }

  GradedModule shifted(int by) const {
    GradedModule out(mode_);
    for (const auto& [d, e] : entries_) out.entries_[d + by] = e;
    return out;
  }

  /// Degree i goes to degree (about - i).
  GradedModule reflected(int about) const {
    GradedModule out(mode_);
    for (const auto& [d, e] : entries_) out.entries_[about - d] = e;
    return out;
  }

  GradedModule& operator+=(const GradedModule& other) {
    for (const auto& [d, e] : other.entries_) add_entry(d, e);
    return *this;
  }
  friend GradedModule operator+(GradedModule a, const GradedModule& b) { return a += b; }

  bool has_torsion() const {
    for (const auto& [d, e] : entries_)
      if (e.has_torsion()) return true;
    return false;
  }

  void strip_torsion() {
    for (auto it = entries_.begin(); it != entries_.end();) {
      it->second.torsion.clear();
      if (it->second.is_zero()) it = entries_.erase(it);
      else ++it;
    }
  }

  bool operator==(const GradedModule& other) const {
    return mode_ == other.mode_ && normalized() == other.normalized();
  }

  std::string to_string() const {
    std::ostringstream os;
    os << "{";
    bool first = true;
    for (const auto& [d, e] : entries_) {
      if (e.is_zero()) continue;
      if (!first) os << ", ";
      first = false;
      os << d << ":";
      bool plus = false;
      if (e.free_rank) {
        os << e.free_rank;
        plus = true;
      }
      for (const auto& t : e.torsion) {
        if (plus) os << "+";
        os << "Z/" << t.prime;
        if (t.exponent > 1) os << "^" << t.exponent;
        if (t.multiplicity > 1) os << "x" << t.multiplicity;
        plus = true;
      }
    }
    os << "}";
    return os.str();
  }

 private:
  std::map<int, ModuleEntry> normalized() const {
    std::map<int, ModuleEntry> out;
    for (const auto& [d, e] : entries_)
      if (!e.is_zero()) out[d] = e;
    return out;
  }

  std::map<int, ModuleEntry> entries_;
  Coefficients mode_ = Coefficients::rational;
};

/// Graded tensor product (Kunneth). Integral mode requires torsion-free factors.
inline GradedModule tensor(const GradedModule& a, const GradedModule& b) {
  const Coefficients mode =
      (a.mode() == Coefficients::integral && b.mode() == Coefficients::integral) ? Coefficients::integral
                                                                                   : Coefficients::rational;
  if (mode == Coefficients::integral && (a.has_torsion() || b.has_torsion()))
    throw Error(ErrorKind::unsupported_integral, "Kunneth with torsion factors");
  GradedModule out(mode);
  for (const auto& [da, ea] : a.entries())
    for (const auto& [db, eb] : b.entries()) out.add_free(da + db, ea.free_rank * eb.free_rank);
  return out;
}

// ---------------------------------------------------------------------------
// Chain complexes

/// boundaries[i] is the differential C_{lowest+i+1} -> C_{lowest+i}
/// (rows = dim C_{lowest+i}, cols = dim C_{lowest+i+1}).
inline GradedModule homology_of_complex(const std::vector<IntegerMatrix>& boundaries, Coefficients mode,
                                        int lowest_degree = 0) {
  GradedModule out(mode);
  if (boundaries.empty()) return out;
  for (std::size_t i = 0; i + 1 < boundaries.size(); ++i) {
    if (boundaries[i].cols() != boundaries[i + 1].rows())
      throw Error(ErrorKind::dimension_mismatch, "boundary " + std::to_string(i + 1) + " has " +
                                                     std::to_string(boundaries[i].cols()) + " columns, next has " +
                                                     std::to_string(boundaries[i + 1].rows()) + " rows");
    if (!boundaries[i].empty() && !boundaries[i + 1].empty() && !(boundaries[i] * boundaries[i + 1]).is_zero())
      throw Error(ErrorKind::composition_nonzero, "consecutive boundaries do not compose to zero at index " +
                                                      std::to_string(i));
  }
  // dims[k] = dim C_{lowest+k}, k = 0..n
  const std::size_t n = boundaries.size();
  std::vector<std::size_t> dims(n + 1);
  dims[0] = boundaries[0].rows();
  for (std::size_t i = 0; i < n; ++i) dims[i + 1] = boundaries[i].cols();

  std::vector<std::vector<Integer>> inv(n);
  for (std::size_t i = 0; i < n; ++i) inv[i] = smith_normal_form(boundaries[i]);

  for (std::size_t k = 0; k <= n; ++k) {
    const std::size_t rank_out = k == 0 ? 0 : inv[k - 1].size();  // rank of d: C_k -> C_{k-1}
    const std::size_t rank_in = k == n ? 0 : inv[k].size();       // rank of d: C_{k+1} -> C_k
    const int degree = lowest_degree + static_cast<int>(k);
    out.add_free(degree, static_cast<std::int64_t>(dims[k] - rank_out - rank_in));
    if (mode == Coefficients::integral && k < n)
      for (const auto& d : inv[k]) out.add_cyclic(degree, d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Poincare polynomials

class PoincarePolynomial {
 public:
  PoincarePolynomial() = default;
  explicit PoincarePolynomial(std::vector<std::int64_t> coeffs) : c_(std::move(coeffs)) {
    for (auto x : c_)
      if (x < 0) throw Error(ErrorKind::bad_range, "negative Poincare coefficient");
    trim();
  }
  PoincarePolynomial(std::initializer_list<std::int64_t> coeffs)
      : PoincarePolynomial(std::vector<std::int64_t>(coeffs)) {}

  static PoincarePolynomial one() { return PoincarePolynomial({1}); }
  /// 1 + t^a
  static PoincarePolynomial one_plus_t_power(int a) {
    std::vector<std::int64_t> c(static_cast<std::size_t>(a) + 1, 0);
    c[0] += 1;
    c[static_cast<std::size_t>(a)] += 1;
    return PoincarePolynomial(std::move(c));
  }

  const std::vector<std::int64_t>& coefficients() const noexcept { return c_; }
  std::int64_t coefficient(int degree) const {
    return degree >= 0 && static_cast<std::size_t>(degree) < c_.size() ? c_[static_cast<std::size_t>(degree)] : 0;
  }
  int degree() const { return c_.empty() ? -1 : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  Integer evaluate(const Integer& t) const {
    Integer acc = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * t + *it;
    return acc;
  }

  friend PoincarePolynomial operator*(const PoincarePolynomial& a, const PoincarePolynomial& b) {
    if (a.c_.empty() || b.c_.empty()) return {};
    std::vector<std::int64_t> c(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return PoincarePolynomial(std::move(c));
  }
  friend PoincarePolynomial operator+(const PoincarePolynomial& a, const PoincarePolynomial& b) {
    std::vector<std::int64_t> c(std::max(a.c_.size(), b.c_.size()), 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return PoincarePolynomial(std::move(c));
  }

  bool operator==(const PoincarePolynomial&) const = default;

  std::string to_string() const {
    if (c_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] == 0) continue;
      if (!first) os << " + ";
      first = false;
      if (i == 0) {
        os << c_[i];
        continue;
      }
      if (c_[i] != 1) os << c_[i];
      os << "t";
      if (i > 1) os << "^" << i;
    }
    return os.str();
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<std::int64_t> c_;
};

inline PoincarePolynomial poincare_polynomial(const GradedModule& g) {
  std::vector<std::int64_t> c;
  for (const auto& [d, e] : g.entries()) {
    if (e.free_rank == 0) continue;
    if (d < 0) throw Error(ErrorKind::negative_degree, "module has free rank in degree " + std::to_string(d));
    if (c.size() <= static_cast<std::size_t>(d)) c.resize(static_cast<std::size_t>(d) + 1, 0);
    c[static_cast<std::size_t>(d)] += e.free_rank;
  }
  return PoincarePolynomial(std::move(c));
}

inline GradedModule module_from_polynomial(const PoincarePolynomial& p, Coefficients mode = Coefficients::rational) {
  GradedModule g(mode);
  for (std::size_t i = 0; i < p.coefficients().size(); ++i) g.add_free(static_cast<int>(i), p.coefficients()[i]);
  return g;
}

/// Exact division by (1 + t^a); the quotient must have non-negative coefficients.
inline PoincarePolynomial divide_by_one_plus_t_power(const PoincarePolynomial& p, int a) {
  if (a <= 0) throw Error(ErrorKind::bad_range, "divisor exponent must be positive");
  std::vector<std::int64_t> rem(p.coefficients());
  const int deg = p.degree();
  if (deg < 0) return {};
  if (deg < a) throw Error(ErrorKind::not_divisible, p.to_string() + " by 1+t^" + std::to_string(a));
  std::vector<std::int64_t> q(static_cast<std::size_t>(deg - a) + 1, 0);
  for (int i = 0; i <= deg - a; ++i) {
    const std::int64_t qi = rem[static_cast<std::size_t>(i)];
    q[static_cast<std::size_t>(i)] = qi;
    rem[static_cast<std::size_t>(i)] -= qi;
    rem[static_cast<std::size_t>(i + a)] -= qi;
    if (qi < 0)
      throw Error(ErrorKind::not_divisible,
                  p.to_string() + " by 1+t^" + std::to_string(a) + ": quotient has a negative coefficient");
  }
  for (auto r : rem)
    if (r != 0) throw Error(ErrorKind::not_divisible, p.to_string() + " by 1+t^" + std::to_string(a));
  return PoincarePolynomial(std::move(q));
}

inline PoincarePolynomial divide_by_one_plus_t(const PoincarePolynomial& p) {
  return divide_by_one_plus_t_power(p, 1);
}

}  // namespace hypcoh
