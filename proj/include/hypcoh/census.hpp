#pragma once

// Point counts of smooth hypersurfaces (and of nondegenerate quadric triples)
// over small finite fields, by brute force or by a subspace sieve, and the
// count predicted from an exterior-algebra Poincaré polynomial.

#include <atomic>
#include <bit>
#include <chrono>
#include <optional>
#include <thread>

#include "hypcoh/exact_algebra.hpp"
#include "hypcoh/finite_field.hpp"

namespace hypcoh {

enum class CensusStrategy { enumerate, sieve };

inline const char* to_string(CensusStrategy s) { return s == CensusStrategy::enumerate ? "enumerate" : "sieve"; }

struct CensusTask {
  int d = 3;
  int n = 2;
  int q = 2;
  int k_max = 0;  // 0: (d-1)^n, or 4 for quadric triples
  CensusStrategy strategy = CensusStrategy::sieve;
  int threads = 1;
  bool vector_field = false;  // triples of quadratic forms in three variables
  std::uint64_t budget = 0;   // 0: the strategy's default
};

struct CensusResult {
  Integer count;
  std::optional<Integer> predicted;
  double elapsed_ms = 0;
  CensusStrategy strategy = CensusStrategy::sieve;
  int k_max_used = 0;
  std::uint64_t forms = 0;  // q^D
};

inline constexpr std::uint64_t default_enumerate_budget = 600000;   // forms
inline constexpr std::uint64_t default_sieve_budget = 1ull << 28;  // bits

inline int default_k_max(int d, int n, bool vector_field) {
  if (vector_field) return 4;
  int k = 1;
  for (int i = 0; i < n; ++i) k *= d - 1;
  return std::max(k, 1);
}

/// One linear condition system per point: the Jacobian (plus f when p | d) for a
/// single form, or v_1(P) = v_2(P) = v_3(P) = 0 for a triple of quadrics.
class FormProblem {
 public:
  FormProblem(int d, int n, bool vector_field) : d_(vector_field ? 2 : d), n_(vector_field ? 2 : n), vf_(vector_field) {
    if (d_ < 1 || n_ < 1) throw Error(ErrorKind::bad_range, "need d >= 1 and n >= 1");
    mons_ = monomials(n_, d_);
    D_ = static_cast<int>(mons_.size()) * (vf_ ? 3 : 1);
  }
  int n() const { return n_; }
  int d() const { return d_; }
  int D() const { return D_; }
  bool vector_field() const { return vf_; }
  const std::vector<std::vector<int>>& monomials_() const { return mons_; }

  std::vector<std::vector<GaloisField::Elem>> functionals(const GaloisField& F, const std::vector<GaloisField::Elem>& pt) const {
    if (!vf_) return singularity_functionals(F, F.characteristic(), d_, mons_, pt);
    const auto ev = evaluation_functional(F, d_, mons_, pt);
    std::vector<std::vector<GaloisField::Elem>> rows;
    for (std::size_t b = 0; b < 3; ++b) {
      std::vector<GaloisField::Elem> row(static_cast<std::size_t>(D_), 0);
      std::copy(ev.begin(), ev.end(), row.begin() + static_cast<std::ptrdiff_t>(b * mons_.size()));
      rows.push_back(std::move(row));
    }
    return rows;
  }

 private:
  int d_, n_;
  bool vf_;
  std::vector<std::vector<int>> mons_;
  int D_ = 0;
};

namespace detail {

inline std::uint64_t checked_power(int q, int D, std::uint64_t budget, const char* what) {
  std::uint64_t v = 1;
  for (int i = 0; i < D; ++i) {
    if (v > budget / static_cast<std::uint64_t>(q))
      throw Error(ErrorKind::budget_exceeded, std::string(what) + ": " + std::to_string(q) + "^" + std::to_string(D) +
                                                  " exceeds the budget of " + std::to_string(budget));
    v *= static_cast<std::uint64_t>(q);
  }
  return v;
}

template <class F>
void run_workers(int threads, std::uint64_t total, F&& body) {
  threads = std::max(1, threads);
  if (threads == 1 || total < 2) {
    body(std::uint64_t{0}, total);
    return;
  }
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (total + static_cast<std::uint64_t>(threads) - 1) / static_cast<std::uint64_t>(threads);
  for (int t = 0; t < threads; ++t) {
    const std::uint64_t lo = std::min(total, chunk * static_cast<std::uint64_t>(t));
    const std::uint64_t hi = std::min(total, lo + chunk);
    if (lo < hi) pool.emplace_back([&body, lo, hi] { body(lo, hi); });
  }
  for (auto& th : pool) th.join();
}

struct PointData {
  int level;
  std::vector<std::vector<GaloisField::Elem>> rows;
};

inline std::vector<PointData> all_point_rows(const FormProblem& prob, const FieldTower& t) {
  std::vector<PointData> out;
  for (int k = 1; k <= t.k_max(); ++k)
    for (const auto& pt : closed_points(t, prob.n(), k)) out.push_back({k, prob.functionals(t.level(k), pt)});
  return out;
}

}  // namespace detail

/// Brute force: every coefficient vector is tested against every closed point.
inline CensusResult census_enumerate(const CensusTask& task) {
  const auto t0 = std::chrono::steady_clock::now();
  const FormProblem prob(task.d, task.n, task.vector_field);
  const int k_max = task.k_max ? task.k_max : default_k_max(task.d, task.n, task.vector_field);
  const std::uint64_t total =
      detail::checked_power(task.q, prob.D(), task.budget ? task.budget : default_enumerate_budget, "enumerate");
  const FieldTower tower(task.q, k_max);
  const auto points = detail::all_point_rows(prob, tower);
  const auto D = static_cast<std::size_t>(prob.D());

  std::atomic<std::uint64_t> smooth{0};
  detail::run_workers(task.threads, total, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<int> f(D, 0);
    std::uint64_t local = 0;
    for (std::uint64_t idx = lo; idx < hi; ++idx) {
      std::uint64_t r = idx;
      bool zero = true;
      for (std::size_t c = 0; c < D; ++c) {
        f[c] = static_cast<int>(r % static_cast<std::uint64_t>(task.q));
        r /= static_cast<std::uint64_t>(task.q);
        zero = zero && f[c] == 0;
      }
      if (zero) continue;
      bool singular = false;
      for (const auto& pd : points) {
        const GaloisField& F = tower.level(pd.level);
        const auto& emb = tower.base_embedding(pd.level);
        bool all = true;
        for (const auto& row : pd.rows)
          if (apply_functional(F, emb, row, f) != 0) {
            all = false;
            break;
          }
        if (all) {
          singular = true;
          break;
        }
      }
      if (!singular) ++local;
    }
    smooth += local;
  });

  CensusResult res;
  res.count = Integer(smooth.load());
  res.strategy = CensusStrategy::enumerate;
  res.k_max_used = k_max;
  res.forms = total;
  res.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

// ---------------------------------------------------------------------------
// Sieve

namespace detail {

class AtomicBitset {
 public:
  explicit AtomicBitset(std::uint64_t bits) : words_((bits + 63) / 64), bits_(bits) {
    for (auto& w : words_) w.store(0, std::memory_order_relaxed);
  }
  void set(std::uint64_t i) { words_[i >> 6].fetch_or(std::uint64_t{1} << (i & 63), std::memory_order_relaxed); }
  std::uint64_t count() const {
    std::uint64_t c = 0;
    for (const auto& w : words_) c += static_cast<std::uint64_t>(std::popcount(w.load(std::memory_order_relaxed)));
    return c;
  }
  std::uint64_t size() const { return bits_; }

 private:
  std::vector<std::atomic<std::uint64_t>> words_;
  std::uint64_t bits_;
};

// Rows over F_p in the unknowns (c, t) = digit t of coefficient c, position c*e + t.
inline std::vector<std::vector<int>> fp_rows(const FieldTower& t, int level,
                                             const std::vector<std::vector<GaloisField::Elem>>& functionals) {
  const GaloisField& F = t.level(level);
  const auto& emb = t.base_embedding(level);
  const int e = t.e(), m = F.degree(), p = t.p();
  const std::size_t D = functionals.empty() ? 0 : functionals[0].size();
  std::vector<std::vector<int>> rows;
  for (const auto& fn : functionals) {
    std::vector<std::vector<int>> block(static_cast<std::size_t>(m), std::vector<int>(D * static_cast<std::size_t>(e), 0));
    for (std::size_t c = 0; c < D; ++c) {
      if (!fn[c]) continue;
      int code = 1;  // β^tt as an F_q element
      for (int tt = 0; tt < e; ++tt, code *= p) {
        GaloisField::Elem v = F.mul(emb[static_cast<std::size_t>(code)], fn[c]);
        for (int i = 0; i < m; ++i, v /= static_cast<GaloisField::Elem>(p))
          block[static_cast<std::size_t>(i)][c * static_cast<std::size_t>(e) + static_cast<std::size_t>(tt)] =
              static_cast<int>(v % static_cast<GaloisField::Elem>(p));
      }
    }
    for (auto& r : block) rows.push_back(std::move(r));
  }
  return rows;
}

// The same rows in characteristic 2, as bit masks.
inline std::vector<std::uint64_t> fp_masks(const FieldTower& t, int level,
                                           const std::vector<std::vector<GaloisField::Elem>>& functionals) {
  const GaloisField& F = t.level(level);
  const auto& emb = t.base_embedding(level);
  const int e = t.e(), m = F.degree();
  std::vector<std::uint64_t> rows;
  for (const auto& fn : functionals) {
    std::uint64_t block[64] = {};
    for (std::size_t c = 0; c < fn.size(); ++c) {
      if (!fn[c]) continue;
      for (int tt = 0; tt < e; ++tt) {
        const GaloisField::Elem v = F.mul(emb[std::size_t{1} << tt], fn[c]);
        const std::uint64_t bit = std::uint64_t{1} << (c * static_cast<std::size_t>(e) + static_cast<std::size_t>(tt));
        for (int i = 0; i < m; ++i)
          if (v >> i & 1) block[i] |= bit;
      }
    }
    for (int i = 0; i < m; ++i)
      if (block[i]) rows.push_back(block[i]);
  }
  return rows;
}

// Kernel basis of an F_p matrix (rows over N unknowns).
inline std::vector<std::vector<int>> kernel_basis(std::vector<std::vector<int>> rows, int p, std::size_t N) {
  auto inv = [p](int a) {
    for (int x = 1; x < p; ++x)
      if (a * x % p == 1) return x;
    return 0;
  };
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < N && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const int s = inv(rows[r][c]);
    for (auto& x : rows[r]) x = x * s % p;
    for (std::size_t o = 0; o < rows.size(); ++o) {
      if (o == r || rows[o][c] == 0) continue;
      const int f = rows[o][c];
      for (std::size_t k = c; k < N; ++k) rows[o][k] = ((rows[o][k] - f * rows[r][k]) % p + p) % p;
    }
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::vector<bool> is_pivot(N, false);
  for (int c : pivot_col) is_pivot[static_cast<std::size_t>(c)] = true;
  std::vector<std::vector<int>> basis;
  for (std::size_t fcol = 0; fcol < N; ++fcol) {
    if (is_pivot[fcol]) continue;
    std::vector<int> v(N, 0);
    v[fcol] = 1;
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      v[static_cast<std::size_t>(pivot_col[i])] = (p - rows[i][fcol]) % p;
    basis.push_back(std::move(v));
  }
  return basis;
}

// Characteristic 2: rows are bit masks over N <= 64 unknowns.
inline std::vector<std::uint64_t> kernel_basis_gf2(std::vector<std::uint64_t> rows, std::size_t N) {
  std::vector<int> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < N && r < rows.size(); ++c) {
    const std::uint64_t bit = std::uint64_t{1} << c;
    std::size_t sel = r;
    while (sel < rows.size() && !(rows[sel] & bit)) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    for (std::size_t o = 0; o < rows.size(); ++o)
      if (o != r && (rows[o] & bit)) rows[o] ^= rows[r];
    pivot_col.push_back(static_cast<int>(c));
    ++r;
  }
  std::uint64_t pivots = 0;
  for (int c : pivot_col) pivots |= std::uint64_t{1} << c;
  std::vector<std::uint64_t> basis;
  for (std::size_t f = 0; f < N; ++f) {
    if (pivots >> f & 1) continue;
    std::uint64_t v = std::uint64_t{1} << f;
    for (std::size_t i = 0; i < pivot_col.size(); ++i)
      if (rows[i] >> f & 1) v |= std::uint64_t{1} << pivot_col[i];
    basis.push_back(v);
  }
  return basis;
}

inline void mark_subspace(AtomicBitset& bits, const std::vector<std::vector<int>>& basis, int p) {
  if (basis.empty()) return;
  const std::size_t N = basis[0].size();
  std::vector<std::uint64_t> place(N, 1);
  for (std::size_t i = 1; i < N; ++i) place[i] = place[i - 1] * static_cast<std::uint64_t>(p);
  std::vector<int> cur(N, 0), lambda(basis.size(), 0);
  std::uint64_t idx = 0;
  auto add_vec = [&](const std::vector<int>& b) {
    for (std::size_t i = 0; i < N; ++i) {
      if (!b[i]) continue;
      const int nv = (cur[i] + b[i]) % p;
      idx = idx + static_cast<std::uint64_t>(nv) * place[i] - static_cast<std::uint64_t>(cur[i]) * place[i];
      cur[i] = nv;
    }
  };
  bits.set(0);
  // odometer over λ ∈ F_p^dim; each step adds one basis vector
  while (true) {
    std::size_t j = 0;
    while (j < basis.size() && lambda[j] == p - 1) {
      lambda[j] = 0;
      add_vec(basis[j]);  // p-1 -> 0 is one more addition
      ++j;
    }
    if (j == basis.size()) break;
    ++lambda[j];
    add_vec(basis[j]);
    bits.set(idx);
  }
}

inline void mark_subspace_gf2(AtomicBitset& bits, const std::vector<std::uint64_t>& basis) {
  std::uint64_t idx = 0;
  bits.set(0);
  const std::uint64_t n = std::uint64_t{1} << basis.size();
  for (std::uint64_t i = 1; i < n; ++i) {
    idx ^= basis[static_cast<std::size_t>(std::countr_zero(i))];
    bits.set(idx);
  }
}

}  // namespace detail

/// One bit per coefficient vector; every form singular at some closed point lies
/// in that point's solution subspace, which is marked in full.
inline CensusResult census_sieve(const CensusTask& task) {
  const auto t0 = std::chrono::steady_clock::now();
  const FormProblem prob(task.d, task.n, task.vector_field);
  const int k_max = task.k_max ? task.k_max : default_k_max(task.d, task.n, task.vector_field);
  const std::uint64_t total = detail::checked_power(task.q, prob.D(), task.budget ? task.budget : default_sieve_budget, "sieve");
  const FieldTower tower(task.q, k_max);
  const std::size_t N = static_cast<std::size_t>(prob.D() * tower.e());
  const int p = tower.p();
  detail::AtomicBitset bits(total);
  bits.set(0);

  for (int k = 1; k <= k_max; ++k) {
    const ProjectiveSpace P(prob.n(), tower.level(k).size());
    detail::run_workers(task.threads, P.count(), [&](std::uint64_t lo, std::uint64_t hi) {
      std::vector<GaloisField::Elem> pt, scratch;
      for (std::uint64_t i = lo; i < hi; ++i) {
        P.point(i, pt);
        if (!is_orbit_representative(tower, k, pt, scratch)) continue;
        const auto fns = prob.functionals(tower.level(k), pt);
        if (p == 2 && N <= 64) {
          detail::mark_subspace_gf2(bits, detail::kernel_basis_gf2(detail::fp_masks(tower, k, fns), N));
        } else {
          detail::mark_subspace(bits, detail::kernel_basis(detail::fp_rows(tower, k, fns), p, N), p);
        }
      }
    });
  }

  CensusResult res;
  res.count = Integer(total - bits.count());
  res.strategy = CensusStrategy::sieve;
  res.k_max_used = k_max;
  res.forms = total;
  res.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

inline CensusResult run_census(const CensusTask& task) {
  return task.strategy == CensusStrategy::enumerate ? census_enumerate(task) : census_sieve(task);
}

/// Triples of quadratic forms on F_q^3 with no common projective zero.
inline CensusResult vf_census(int q, CensusStrategy strategy = CensusStrategy::sieve, int threads = 1) {
  if (q != 2 && q != 3) throw Error(ErrorKind::bad_range, "quadric-triple census supports q = 2, 3");
  CensusTask t;
  t.d = 2;
  t.n = 2;
  t.q = q;
  t.vector_field = true;
  t.strategy = strategy;
  t.threads = threads;
  return run_census(t);
}

// ---------------------------------------------------------------------------
// Predictions

/// q^D ∏ (1 - q^{-a_j}), exactly.
inline Integer predicted_count(const std::vector<int>& exponents, int D, int q) {
  Rational v = 1;
  for (int i = 0; i < D; ++i) v *= q;
  for (int a : exponents) {
    if (a < 1 || a > D) throw Error(ErrorKind::bad_range, "exponent " + std::to_string(a) + " outside [1, D]");
    Rational qa = 1;
    for (int i = 0; i < a; ++i) qa *= q;
    v *= 1 - 1 / qa;
  }
  if (boost::multiprecision::denominator(v) != 1)
    throw Error(ErrorKind::non_integer_result, "prediction " + v.str() + " is not an integer");
  return boost::multiprecision::numerator(v);
}

/// Quadratic forms in n+1 variables over F_q (q odd) with invertible Gram matrix.
inline Integer quadric_determinant_count(int n, int q, std::uint64_t budget = default_enumerate_budget) {
  const FieldTower tower(q, 1);
  if (tower.p() == 2) throw Error(ErrorKind::bad_range, "the determinant test needs odd characteristic");
  const GaloisField& F = tower.base();
  const auto mons = monomials(n, 2);
  const std::uint64_t total = detail::checked_power(q, static_cast<int>(mons.size()), budget, "determinant");
  const GaloisField::Elem half = F.inv(F.from_int(2));
  const auto m = static_cast<std::size_t>(n) + 1;
  std::uint64_t nonsingular = 0;
  std::vector<GaloisField::Elem> g(m * m);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::uint64_t r = idx;
    std::fill(g.begin(), g.end(), 0);
    for (const auto& mon : mons) {
      const auto c = static_cast<GaloisField::Elem>(r % static_cast<std::uint64_t>(q));
      r /= static_cast<std::uint64_t>(q);
      std::size_t i = 0;
      while (mon[i] == 0) ++i;
      if (mon[i] == 2) {
        g[i * m + i] = c;
      } else {
        std::size_t j = i + 1;
        while (mon[j] == 0) ++j;
        g[i * m + j] = g[j * m + i] = F.mul(c, half);
      }
    }
    // rank by elimination
    bool full = true;
    for (std::size_t col = 0; col < m && full; ++col) {
      std::size_t piv = col;
      while (piv < m && g[piv * m + col] == 0) ++piv;
      if (piv == m) {
        full = false;
        break;
      }
      for (std::size_t k = 0; k < m; ++k) std::swap(g[col * m + k], g[piv * m + k]);
      const auto inv = F.inv(g[col * m + col]);
      for (std::size_t row = col + 1; row < m; ++row) {
        if (!g[row * m + col]) continue;
        const auto f = F.mul(g[row * m + col], inv);
        for (std::size_t k = col; k < m; ++k) g[row * m + k] = F.sub(g[row * m + k], F.mul(f, g[col * m + k]));
      }
    }
    if (full) ++nonsingular;
  }
  return Integer(nonsingular);
}

/// Counts at two fields fitted by q^D - a q^{D-1} + b q^{D-2}.  Purely descriptive.
struct ExploratoryFit {
  int D = 0;
  std::vector<std::pair<int, Integer>> counts;  // (q, count)
  Rational a, b;
  std::string to_string() const {
    return "q^" + std::to_string(D) + " - (" + a.str() + ") q^" + std::to_string(D - 1) + " + (" + b.str() + ") q^" +
           std::to_string(D - 2);
  }
};

inline ExploratoryFit fit_two_counts(int D, int q1, const Integer& c1, int q2, const Integer& c2) {
  // c = q^D - a q^{D-1} + b q^{D-2}  =>  (q^D - c)/q^{D-2} = a q - b
  auto lhs = [D](int q, const Integer& c) {
    Rational qd = 1;
    for (int i = 0; i < D; ++i) qd *= q;
    Rational qd2 = 1;
    for (int i = 0; i < D - 2; ++i) qd2 *= q;
    return (qd - Rational(c)) / qd2;
  };
  const Rational y1 = lhs(q1, c1), y2 = lhs(q2, c2);
  ExploratoryFit fit;
  fit.D = D;
  fit.counts = {{q1, c1}, {q2, c2}};
  fit.a = (y2 - y1) / (q2 - q1);
  fit.b = fit.a * q1 - y1;
  return fit;
}

}  // namespace hypcoh
