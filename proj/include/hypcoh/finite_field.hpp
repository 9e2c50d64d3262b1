#pragma once

// Finite fields F_{p^m} with p^m <= 2^16 via log/antilog tables, towers
// F_q ⊂ F_{q^k} with explicit embeddings, projective points up to Frobenius,
// and the Jacobian singularity test for forms over F_q.

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "hypcoh/errors.hpp"

namespace hypcoh {

// x^m + c_{m-1} x^{m-1} + ... + c_0: the smallest primitive polynomial over F_p
// comparing (c_{m-1}, ..., c_0) lexicographically, listed as c_0 .. c_{m-1}.
struct PrimitivePolynomial {
  int p;
  int m;
  std::vector<int> low;
};

inline const std::vector<PrimitivePolynomial>& primitive_polynomials() {
  static const std::vector<PrimitivePolynomial> table = {
      {2, 1, {1}},
      {2, 2, {1, 1}},
      {2, 3, {1, 1, 0}},
      {2, 4, {1, 1, 0, 0}},
      {2, 5, {1, 0, 1, 0, 0}},
      {2, 6, {1, 1, 0, 0, 0, 0}},
      {2, 7, {1, 1, 0, 0, 0, 0, 0}},
      {2, 8, {1, 0, 1, 1, 1, 0, 0, 0}},
      {2, 9, {1, 0, 0, 0, 1, 0, 0, 0, 0}},
      {2, 10, {1, 0, 0, 1, 0, 0, 0, 0, 0, 0}},
      {2, 11, {1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {2, 12, {1, 1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 0}},
      {2, 13, {1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {2, 14, {1, 1, 0, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0}},
      {2, 15, {1, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {2, 16, {1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}},
      {3, 1, {1}},
      {3, 2, {2, 1}},
      {3, 3, {1, 2, 0}},
      {3, 4, {2, 1, 0, 0}},
      {3, 5, {1, 2, 0, 0, 0}},
      {3, 6, {2, 1, 0, 0, 0, 0}},
      {3, 7, {1, 2, 1, 0, 0, 0, 0}},
      {3, 8, {2, 0, 0, 1, 0, 0, 0, 0}},
      {3, 9, {1, 0, 1, 2, 0, 0, 0, 0, 0}},
      {3, 10, {2, 1, 0, 1, 0, 0, 0, 0, 0, 0}},
      {5, 1, {2}},
      {5, 2, {2, 1}},
      {5, 3, {2, 3, 0}},
      {5, 4, {2, 2, 1, 0}},
      {5, 5, {2, 4, 0, 0, 0}},
      {5, 6, {2, 1, 0, 0, 0, 0}},
      {7, 1, {2}},
      {7, 2, {3, 1}},
      {7, 3, {2, 3, 0}},
      {7, 4, {5, 3, 1, 0}},
      {7, 5, {4, 1, 0, 0, 0}},
  };
  return table;
}

inline const PrimitivePolynomial& primitive_polynomial(int p, int m) {
  for (const auto& e : primitive_polynomials())
    if (e.p == p && e.m == m) return e;
  throw Error(ErrorKind::bad_range, "no field table for F_" + std::to_string(p) + "^" + std::to_string(m));
}

/// F_{p^m}.  Elements are 0..Q-1, the base-p digits being coefficients of
/// 1, g, g^2, ... for the generator g (a root of the primitive polynomial).
class GaloisField {
 public:
  using Elem = std::uint32_t;

  GaloisField(int p, int m) : p_(p), m_(m) {
    const auto& poly = primitive_polynomial(p, m);
    Q_ = 1;
    for (int i = 0; i < m; ++i) Q_ *= static_cast<std::uint32_t>(p);
    const std::uint32_t N = Q_ - 1;
    exp_.assign(2 * static_cast<std::size_t>(N) + 2, 0);
    log_.assign(Q_, 0);
    std::vector<int> cur(static_cast<std::size_t>(m), 0);
    cur[0] = 1;
    for (std::uint32_t i = 0; i < N; ++i) {
      const Elem code = encode(cur);
      exp_[i] = code;
      log_[code] = i;
      // multiply by g: shift, then reduce x^m = -Σ low_j x^j
      const int top = cur[static_cast<std::size_t>(m - 1)];
      for (int j = m - 1; j > 0; --j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)];
      cur[0] = 0;
      for (int j = 0; j < m; ++j)
        cur[static_cast<std::size_t>(j)] =
            ((cur[static_cast<std::size_t>(j)] - top * poly.low[static_cast<std::size_t>(j)]) % p + p) % p;
    }
    for (std::uint32_t i = N; i < exp_.size(); ++i) exp_[i] = exp_[i - N];
    // Zech table: 1 + g^i = g^{zech[i]}, or Q when it is zero
    if (p != 2) {
      zech_.assign(N, 0);
      for (std::uint32_t i = 0; i < N; ++i) {
        const Elem s = add_digits(1, exp_[i]);
        zech_[i] = s == 0 ? Q_ : log_[s];
      }
    }
  }

  int characteristic() const { return p_; }
  int degree() const { return m_; }
  std::uint32_t size() const { return Q_; }
  Elem generator() const { return m_ == 1 ? exp_[1] : static_cast<Elem>(p_); }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    if (a == 0) return b;
    if (b == 0) return a;
    const std::uint32_t N = Q_ - 1;
    const std::uint32_t la = log_[a], lb = log_[b];
    const std::uint32_t z = zech_[(lb + N - la) % N];
    return z == Q_ ? 0 : exp_[la + z];
  }
  Elem neg(Elem a) const {
    if (p_ == 2 || a == 0) return a;
    return mul(a, exp_[(Q_ - 1) / 2]);  // -1 = g^{(Q-1)/2}
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }
  Elem inv(Elem a) const {
    if (a == 0) throw Error(ErrorKind::bad_range, "inverse of zero");
    return exp_[(Q_ - 1 - log_[a]) % (Q_ - 1)];
  }
  Elem pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp_[static_cast<std::uint32_t>((static_cast<std::uint64_t>(log_[a]) * e) % (Q_ - 1))];
  }
  Elem exp(std::uint64_t i) const { return exp_[static_cast<std::uint32_t>(i % (Q_ - 1))]; }
  std::uint32_t log(Elem a) const {
    if (a == 0) throw Error(ErrorKind::bad_range, "log of zero");
    return log_[a];
  }
  /// Image of an integer under Z -> F_p -> F_{p^m}.
  Elem from_int(long long v) const { return static_cast<Elem>(((v % p_) + p_) % p_); }
  /// Coordinates over F_p in the basis 1, g, ..., g^{m-1}.
  int digit(Elem a, int i) const {
    for (int j = 0; j < i; ++j) a /= static_cast<Elem>(p_);
    return static_cast<int>(a % static_cast<Elem>(p_));
  }

 private:
  Elem encode(const std::vector<int>& digits) const {
    Elem code = 0;
    for (int j = m_ - 1; j >= 0; --j) code = code * static_cast<Elem>(p_) + static_cast<Elem>(digits[static_cast<std::size_t>(j)]);
    return code;
  }
  Elem add_digits(Elem a, Elem b) const {
    Elem out = 0, scale = 1;
    for (int j = 0; j < m_; ++j) {
      out += scale * ((a % p_ + b % p_) % p_);
      a /= p_;
      b /= p_;
      scale *= p_;
    }
    return out;
  }

  int p_, m_;
  std::uint32_t Q_ = 0;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> zech_;
};

inline bool is_prime_small(int n) {
  if (n < 2) return false;
  for (int d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// q = p^e for a prime p; throws for other q.
inline std::pair<int, int> prime_power(int q) {
  for (int p = 2; p <= q; ++p) {
    if (!is_prime_small(p) || q % p) continue;
    int e = 0, r = q;
    while (r % p == 0) {
      r /= p;
      ++e;
    }
    if (r != 1) break;
    return {p, e};
  }
  throw Error(ErrorKind::invalid_field, std::to_string(q) + " is not a prime power");
}

/// F_q ⊂ F_{q^2} ⊂ ... ⊂ F_{q^kmax}.  Level k is GaloisField(p, e k).  The
/// embedding of level j into level k (j | k) sends the generator of level j to
/// a root of its primitive polynomial, chosen so that all embeddings agree on F_q.
class FieldTower {
 public:
  using Elem = GaloisField::Elem;
  static constexpr std::uint32_t max_size = 1u << 16;

  FieldTower(int q, int k_max) : q_(q), k_max_(k_max) {
    if (k_max < 1) throw Error(ErrorKind::bad_range, "k_max must be positive");
    std::tie(p_, e_) = prime_power(q);
    levels_.reserve(static_cast<std::size_t>(k_max));
    for (int k = 1; k <= k_max; ++k) {
      std::uint64_t size = 1;
      for (int i = 0; i < e_ * k; ++i) size *= static_cast<std::uint64_t>(p_);
      if (size > max_size)
        throw Error(ErrorKind::budget_exceeded, "F_" + std::to_string(q) + "^" + std::to_string(k) + " exceeds the table limit 2^16");
      levels_.emplace_back(p_, e_ * k);
    }
    base_embedding_.resize(static_cast<std::size_t>(k_max) + 1);
    for (int k = 1; k <= k_max; ++k) base_embedding_[static_cast<std::size_t>(k)] = find_embedding(1, k, nullptr);
  }

  int q() const { return q_; }
  int p() const { return p_; }
  int e() const { return e_; }
  int k_max() const { return k_max_; }
  const GaloisField& level(int k) const { return levels_.at(static_cast<std::size_t>(k - 1)); }
  const GaloisField& base() const { return level(1); }

  /// F_q -> F_{q^k}, as a lookup table indexed by the F_q element.
  const std::vector<Elem>& base_embedding(int k) const { return base_embedding_.at(static_cast<std::size_t>(k)); }

  /// F_{q^j} -> F_{q^k} for j | k, compatible with the base embeddings.
  std::vector<Elem> embedding(int j, int k) const {
    if (j < 1 || k > k_max_ || k % j) throw Error(ErrorKind::bad_range, "no embedding of level " + std::to_string(j) + " into level " + std::to_string(k));
    if (j == 1) return base_embedding(k);
    return find_embedding(j, k, &base_embedding(j));
  }

  /// x -> x^q on level k.
  Elem frobenius(int k, Elem x) const { return level(k).pow(x, static_cast<std::uint64_t>(q_)); }

 private:
  // Sends the generator of level j to each root of its minimal polynomial in
  // level k in turn; keeps the first that extends `along` (the base embedding of
  // level j) when given.
  std::vector<Elem> find_embedding(int j, int k, const std::vector<Elem>* along) const {
    const GaloisField& src = level(j);
    const GaloisField& dst = level(k);
    const auto& poly = primitive_polynomial(p_, src.degree());
    const std::uint64_t step = (dst.size() - 1) / (src.size() - 1);
    for (std::uint64_t s = 1; s < src.size() - 1 + 1; ++s) {
      if (std::gcd(s, static_cast<std::uint64_t>(src.size() - 1)) != 1) continue;
      const Elem gamma = dst.exp(s * step);
      // root test: gamma^m + Σ low_i gamma^i = 0
      Elem v = dst.pow(gamma, static_cast<std::uint64_t>(src.degree()));
      for (int i = 0; i < src.degree(); ++i)
        v = dst.add(v, dst.mul(dst.from_int(poly.low[static_cast<std::size_t>(i)]), dst.pow(gamma, static_cast<std::uint64_t>(i))));
      if (v != 0) continue;
      std::vector<Elem> table(src.size(), 0);
      for (Elem x = 1; x < src.size(); ++x) table[x] = dst.pow(gamma, src.log(x));
      if (along) {
        const auto& bj = *along;
        const auto& bk = base_embedding(k);
        bool ok = true;
        for (Elem a = 0; a < static_cast<Elem>(q_) && ok; ++a) ok = table[bj[a]] == bk[a];
        if (!ok) continue;
      }
      return table;
    }
    throw Error(ErrorKind::inconsistent, "no compatible embedding of level " + std::to_string(j) + " into level " + std::to_string(k));
  }

  int q_, p_ = 0, e_ = 0, k_max_;
  std::vector<GaloisField> levels_;
  std::vector<std::vector<Elem>> base_embedding_;
};

// ---------------------------------------------------------------------------
// Projective points

/// Normalized points of P^n over level k (first nonzero coordinate 1), indexed
/// 0 .. count-1.
class ProjectiveSpace {
 public:
  using Elem = GaloisField::Elem;
  ProjectiveSpace(int n, std::uint32_t Q) : n_(n), Q_(Q) {
    std::uint64_t block = 1;
    for (int lead = n; lead >= 0; --lead) {
      blocks_.insert(blocks_.begin(), block);
      block *= Q;
    }
    count_ = std::accumulate(blocks_.begin(), blocks_.end(), std::uint64_t{0});
  }
  std::uint64_t count() const { return count_; }
  void point(std::uint64_t idx, std::vector<Elem>& out) const {
    out.assign(static_cast<std::size_t>(n_) + 1, 0);
    int lead = 0;
    while (idx >= blocks_[static_cast<std::size_t>(lead)]) idx -= blocks_[static_cast<std::size_t>(lead++)];
    out[static_cast<std::size_t>(lead)] = 1;
    for (int i = n_; i > lead; --i) {
      out[static_cast<std::size_t>(i)] = static_cast<Elem>(idx % Q_);
      idx /= Q_;
    }
  }

 private:
  int n_;
  std::uint32_t Q_;
  std::vector<std::uint64_t> blocks_;  // blocks_[lead] = Q^{n-lead}
  std::uint64_t count_ = 0;
};

/// True when `pt` (normalized, over level k) has Frobenius orbit of size exactly
/// k and is the lexicographically smallest point of that orbit.
inline bool is_orbit_representative(const FieldTower& t, int k, const std::vector<GaloisField::Elem>& pt,
                                    std::vector<GaloisField::Elem>& scratch) {
  scratch = pt;
  for (int i = 1; i <= k; ++i) {
    for (auto& c : scratch) c = t.frobenius(k, c);
    if (scratch == pt) return i == k;
    if (scratch < pt) return false;
  }
  return false;
}

/// Orbit representatives of closed points of exact degree k in P^n.
inline std::vector<std::vector<GaloisField::Elem>> closed_points(const FieldTower& t, int n, int k) {
  const ProjectiveSpace P(n, t.level(k).size());
  std::vector<std::vector<GaloisField::Elem>> out;
  std::vector<GaloisField::Elem> pt, scratch;
  for (std::uint64_t i = 0; i < P.count(); ++i) {
    P.point(i, pt);
    if (is_orbit_representative(t, k, pt, scratch)) out.push_back(pt);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Forms

/// Exponent vectors of degree-d monomials in n+1 variables, x_0^d first.
inline std::vector<std::vector<int>> monomials(int n, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(static_cast<std::size_t>(n) + 1, 0);
  auto rec = [&](auto&& self, int i, int left) -> void {
    if (i == n) {
      e[static_cast<std::size_t>(i)] = left;
      out.push_back(e);
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[static_cast<std::size_t>(i)] = a;
      self(self, i + 1, left - a);
    }
  };
  rec(rec, 0, d);
  return out;
}

namespace detail {

// pw[j][e] = pt_j^e for e <= d
inline std::vector<std::vector<GaloisField::Elem>> coordinate_powers(const GaloisField& F, int d,
                                                                     const std::vector<GaloisField::Elem>& pt) {
  std::vector<std::vector<GaloisField::Elem>> pw(pt.size(), std::vector<GaloisField::Elem>(static_cast<std::size_t>(d) + 1, 1));
  for (std::size_t j = 0; j < pt.size(); ++j)
    for (int e = 1; e <= d; ++e) pw[j][static_cast<std::size_t>(e)] = F.mul(pw[j][static_cast<std::size_t>(e - 1)], pt[j]);
  return pw;
}

}  // namespace detail

/// The functional f -> f(P): monomial values at P.
inline std::vector<GaloisField::Elem> evaluation_functional(const GaloisField& F, int d, const std::vector<std::vector<int>>& mons,
                                                           const std::vector<GaloisField::Elem>& pt) {
  const auto pw = detail::coordinate_powers(F, d, pt);
  std::vector<GaloisField::Elem> row(mons.size(), 1);
  for (std::size_t c = 0; c < mons.size(); ++c)
    for (std::size_t j = 0; j < pt.size(); ++j) row[c] = F.mul(row[c], pw[j][static_cast<std::size_t>(mons[c][j])]);
  return row;
}

/// Linear functionals f -> (∂_i f)(P), and f -> f(P) when p | d.  Each row holds
/// the level-k value multiplying coefficient c.
inline std::vector<std::vector<GaloisField::Elem>> singularity_functionals(const GaloisField& F, int p, int d,
                                                                         const std::vector<std::vector<int>>& mons,
                                                                         const std::vector<GaloisField::Elem>& pt) {
  const auto pw = detail::coordinate_powers(F, d, pt);
  std::vector<std::vector<GaloisField::Elem>> rows;
  for (std::size_t i = 0; i < pt.size(); ++i) {
    std::vector<GaloisField::Elem> row(mons.size(), 0);
    for (std::size_t c = 0; c < mons.size(); ++c) {
      const int ei = mons[c][i];
      if (ei % p == 0) continue;
      GaloisField::Elem v = F.from_int(ei);
      for (std::size_t j = 0; j < pt.size(); ++j) v = F.mul(v, pw[j][static_cast<std::size_t>(mons[c][j] - (j == i))]);
      row[c] = v;
    }
    rows.push_back(std::move(row));
  }
  if (d % p == 0) rows.push_back(evaluation_functional(F, d, mons, pt));
  return rows;
}

/// Evaluates a functional row on coefficients f (F_q elements, embedded).
inline GaloisField::Elem apply_functional(const GaloisField& F, const std::vector<GaloisField::Elem>& emb,
                                          const std::vector<GaloisField::Elem>& row, const std::vector<int>& f) {
  GaloisField::Elem s = 0;
  for (std::size_t c = 0; c < row.size(); ++c)
    if (f[c] && row[c]) s = F.add(s, F.mul(emb[static_cast<std::size_t>(f[c])], row[c]));
  return s;
}

/// Jacobian criterion over every closed point of degree <= k_max; the zero form
/// counts as singular.  f holds D = binom(n+d, d) F_q elements in monomial order.
inline bool is_singular(const std::vector<int>& f, int n, int d, const FieldTower& t) {
  const auto mons = monomials(n, d);
  if (f.size() != mons.size()) throw Error(ErrorKind::shape_mismatch, "form has " + std::to_string(f.size()) + " coefficients, expected " + std::to_string(mons.size()));
  if (std::all_of(f.begin(), f.end(), [](int c) { return c == 0; })) return true;
  for (int k = 1; k <= t.k_max(); ++k) {
    const GaloisField& F = t.level(k);
    const auto& emb = t.base_embedding(k);
    for (const auto& pt : closed_points(t, n, k)) {
      bool all_zero = true;
      for (const auto& row : singularity_functionals(F, t.p(), d, mons, pt))
        if (apply_functional(F, emb, row, f) != 0) {
          all_zero = false;
          break;
        }
      if (all_zero) return true;
    }
  }
  return false;
}

}  // namespace hypcoh
