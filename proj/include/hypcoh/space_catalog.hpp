#pragma once

// Homology of the parameter spaces that occur as stratum bases: projective and
// affine spaces, Grassmannians, configuration spaces (trivial and sign-twisted
// coefficients), generic configurations, PGL and products.  Degrees are real.

#include <bit>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "hypcoh/exact_algebra.hpp"

namespace hypcoh {

enum class Flavor { ordinary, borel_moore };
enum class Twist { trivial, sign };

inline const char* to_string(Flavor f) { return f == Flavor::ordinary ? "ordinary" : "borel_moore"; }
inline const char* to_string(Twist t) { return t == Twist::trivial ? "trivial" : "sign"; }

enum class SpaceKind { point, affine, proj, grassmann, config, generic_config, pgl, product, known };

inline const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::point: return "Point";
    case SpaceKind::affine: return "Affine";
    case SpaceKind::proj: return "Proj";
    case SpaceKind::grassmann: return "Grassmann";
    case SpaceKind::config: return "Config";
    case SpaceKind::generic_config: return "GenericConfig";
    case SpaceKind::pgl: return "PGL";
    case SpaceKind::product: return "Product";
    case SpaceKind::known: return "Known";
  }
  return "?";
}

class Space {
 public:
  struct Node {
    SpaceKind kind = SpaceKind::point;
    int a = 0;  // n for Affine/Proj/GenericConfig, k for Grassmann, m for PGL, k for Config
    int b = 0;  // m for Grassmann, k for GenericConfig
    std::vector<Space> children;  // Config base, Product factors
    std::string name;
    std::string provenance;
    GradedModule known_bm;  // Known: Borel-Moore homology, rational
    int known_real_dim = 0;
  };

  Space() : node_(std::make_shared<Node>()) {}

  static Space point() { return make({SpaceKind::point}); }
  static Space affine(int n) {
    if (n < 0) throw Error(ErrorKind::bad_range, "Affine(" + std::to_string(n) + ")");
    return make({SpaceKind::affine, n});
  }
  static Space proj(int n) {
    if (n < 0) throw Error(ErrorKind::bad_range, "Proj(" + std::to_string(n) + ")");
    return make({SpaceKind::proj, n});
  }
  /// k-planes in C^m.
  static Space grassmann(int k, int m) {
    if (k < 0 || k > m) throw Error(ErrorKind::bad_range, "Grassmann(" + std::to_string(k) + "," + std::to_string(m) + ")");
    return make({SpaceKind::grassmann, k, m});
  }
  static Space config(const Space& x, int k) {
    if (x.kind() != SpaceKind::affine && x.kind() != SpaceKind::proj)
      throw Error(ErrorKind::invalid_expression, "Config is only defined over Affine or Proj");
    if (k < 1) throw Error(ErrorKind::bad_range, "Config with k < 1");
    Node n{SpaceKind::config, k};
    n.children = {x};
    return make(std::move(n));
  }
  static Space generic_config(int n, int k) {
    const bool ok = (n == 2 && (k == 3 || k == 4)) || (n == 3 && (k == 3 || k == 4));
    if (!ok)
      throw Error(ErrorKind::unsupported_pair, "GenericConfig(" + std::to_string(n) + "," + std::to_string(k) + ")");
    return make({SpaceKind::generic_config, n, k});
  }
  static Space pgl(int m) {
    if (m != 3 && m != 4) throw Error(ErrorKind::unsupported_rank, "PGL(" + std::to_string(m) + ")");
    return make({SpaceKind::pgl, m});
  }
  static Space product(std::vector<Space> factors) {
    if (factors.empty()) return point();
    if (factors.size() == 1) return factors.front();
    Node n{SpaceKind::product};
    n.children = std::move(factors);
    return make(std::move(n));
  }
  static Space known(std::string name, GradedModule bm, int real_dim, std::string provenance) {
    if (provenance.empty()) throw Error(ErrorKind::invalid_expression, "Known space '" + name + "' without provenance");
    Node n{SpaceKind::known};
    n.name = std::move(name);
    bm.set_mode(Coefficients::rational);
    n.known_bm = std::move(bm);
    n.known_real_dim = real_dim;
    n.provenance = std::move(provenance);
    return make(std::move(n));
  }

  SpaceKind kind() const { return node_->kind; }
  const Node& node() const { return *node_; }
  int a() const { return node_->a; }
  int b() const { return node_->b; }
  const std::vector<Space>& children() const { return node_->children; }

  int real_dim() const {
    const auto& n = *node_;
    switch (n.kind) {
      case SpaceKind::point: return 0;
      case SpaceKind::affine:
      case SpaceKind::proj: return 2 * n.a;
      case SpaceKind::grassmann: return 2 * n.a * (n.b - n.a);
      case SpaceKind::config: return n.a * n.children[0].real_dim();
      case SpaceKind::generic_config: return 2 * n.a * n.b;
      case SpaceKind::pgl: return 2 * (n.a * n.a - 1);
      case SpaceKind::product: {
        int s = 0;
        for (const auto& c : n.children) s += c.real_dim();
        return s;
      }
      case SpaceKind::known: return n.known_real_dim;
    }
    return 0;
  }

  bool operator==(const Space& o) const {
    if (node_ == o.node_) return true;
    const auto &x = *node_, &y = *o.node_;
    return x.kind == y.kind && x.a == y.a && x.b == y.b && x.children == y.children && x.name == y.name &&
           x.provenance == y.provenance && x.known_bm == y.known_bm && x.known_real_dim == y.known_real_dim;
  }

  std::string to_string() const {
    const auto& n = *node_;
    std::ostringstream os;
    switch (n.kind) {
      case SpaceKind::point: os << "Point"; break;
      case SpaceKind::affine: os << "C^" << n.a; break;
      case SpaceKind::proj: os << "CP^" << n.a; break;
      case SpaceKind::grassmann: os << "G_" << n.a << "(C^" << n.b << ")"; break;
      case SpaceKind::config: os << "B(" << n.children[0].to_string() << "," << n.a << ")"; break;
      case SpaceKind::generic_config: os << "B~(CP^" << n.a << "," << n.b << ")"; break;
      case SpaceKind::pgl: os << "PGL_" << n.a; break;
      case SpaceKind::product:
        for (std::size_t i = 0; i < n.children.size(); ++i) os << (i ? " x " : "") << n.children[i].to_string();
        break;
      case SpaceKind::known: os << n.name; break;
    }
    return os.str();
  }

 private:
  explicit Space(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Space make(Node n) { return Space(std::make_shared<const Node>(std::move(n))); }

  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Schubert cells and Gaussian binomials

struct SchubertCell {
  std::vector<int> symbol;
  int complex_dim = 0;
  bool operator==(const SchubertCell&) const = default;
};

/// Cells of B(CP^n, k) carrying the sign-twisted Borel-Moore homology:
/// non-decreasing a_0 <= ... <= a_n with a_n = k, steps of at most 1 and a_0 <= 1.
inline std::vector<SchubertCell> schubert_cells(int n, int k) {
  if (n < 0 || k < 1) throw Error(ErrorKind::bad_range, "schubert_cells needs n >= 0, k >= 1");
  std::vector<SchubertCell> out;
  if (k > n + 1) return out;
  // a_0 in {0,1}; each later step in {0,1}; total jumps must reach k.
  const int steps = n + 1;
  for (unsigned mask = 0; mask < (1u << steps); ++mask) {
    if (std::popcount(mask) != k) continue;
    std::vector<int> a(static_cast<std::size_t>(n) + 1);
    int acc = 0;
    for (int i = 0; i <= n; ++i) {
      acc += (mask >> i) & 1u;
      a[static_cast<std::size_t>(i)] = acc;
    }
    int dim = 0;
    for (int i = 1; i <= n; ++i) dim += i * (a[static_cast<std::size_t>(i)] - a[static_cast<std::size_t>(i) - 1]);
    out.push_back({std::move(a), dim});
  }
  std::sort(out.begin(), out.end(), [](const SchubertCell& x, const SchubertCell& y) {
    return x.complex_dim != y.complex_dim ? x.complex_dim < y.complex_dim : x.symbol > y.symbol;
  });
  return out;
}

/// Gaussian binomial [m choose k] evaluated at q = t^2.
inline PoincarePolynomial grassmann_poincare(int k, int m) {
  if (k < 0 || m < 0 || k > m) throw Error(ErrorKind::bad_range, "grassmann_poincare(" + std::to_string(k) + "," + std::to_string(m) + ")");
  // g[j][i]: coefficients of [j choose i]_q in the variable q
  std::vector<std::vector<std::vector<std::int64_t>>> g(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) {
    g[static_cast<std::size_t>(j)].resize(static_cast<std::size_t>(j) + 1);
    for (int i = 0; i <= j; ++i) {
      auto& cur = g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];
      if (i == 0 || i == j) {
        cur = {1};
        continue;
      }
      // [j,i] = [j-1,i-1] + q^i [j-1,i]
      const auto& x = g[static_cast<std::size_t>(j) - 1][static_cast<std::size_t>(i) - 1];
      const auto& y = g[static_cast<std::size_t>(j) - 1][static_cast<std::size_t>(i)];
      cur.assign(std::max(x.size(), y.size() + static_cast<std::size_t>(i)), 0);
      for (std::size_t s = 0; s < x.size(); ++s) cur[s] += x[s];
      for (std::size_t s = 0; s < y.size(); ++s) cur[s + static_cast<std::size_t>(i)] += y[s];
    }
  }
  const auto& q = g[static_cast<std::size_t>(m)][static_cast<std::size_t>(k)];
  std::vector<std::int64_t> t(2 * q.size() - 1, 0);
  for (std::size_t s = 0; s < q.size(); ++s) t[2 * s] = q[s];
  return PoincarePolynomial(std::move(t));
}

// ---------------------------------------------------------------------------
// Homology oracle

namespace detail {

inline bool is_configuration(const Space& x) {
  return x.kind() == SpaceKind::config || x.kind() == SpaceKind::generic_config;
}

inline GradedModule config_sign_bm_proj(int n, int k) {
  GradedModule g;
  for (const auto& c : schubert_cells(n, k)) g.add_free(2 * c.complex_dim, 1);
  return g;
}

// B(CP^n,2) with constant coefficients: Sym^2 CP^n minus its diagonal.  Both have
// even-degree homology and the diagonal injects, so the BM ranks subtract.
inline GradedModule config_trivial_bm_proj2(int n) {
  GradedModule g;
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) g.add_free(2 * (i + j), 1);
  for (int i = 0; i <= n; ++i) g.remove_free(2 * i, 1);
  return g;
}

}  // namespace detail

GradedModule homology(const Space& x, Flavor flavor, Twist twist, Coefficients mode);

/// Borel-Moore, sign twist, rational; the value is cross-checked against the
/// full configuration space minus its degenerate loci.
GradedModule generic_config_homology(int n, int k);

/// Exterior algebra on generators in degrees 3,5,...,2m-1 (ordinary), or its
/// reflection through the real dimension 2(m^2-1) (Borel-Moore).
inline GradedModule pgl_homology(int m, Flavor flavor) {
  if (m != 3 && m != 4) throw Error(ErrorKind::unsupported_rank, "PGL(" + std::to_string(m) + ")");
  PoincarePolynomial p = PoincarePolynomial::one();
  for (int a = 3; a <= 2 * m - 1; a += 2) p = p * PoincarePolynomial::one_plus_t_power(a);
  GradedModule g = module_from_polynomial(p);
  return flavor == Flavor::ordinary ? g : g.reflected(2 * (m * m - 1));
}

inline GradedModule homology(const Space& x, Flavor flavor, Twist twist, Coefficients mode) {
  const auto& n = x.node();
  auto reflect = [&](const GradedModule& bm) {
    return flavor == Flavor::borel_moore ? bm : bm.reflected(x.real_dim());
  };
  if (mode == Coefficients::integral) {
    const bool ok = x.kind() == SpaceKind::point || x.kind() == SpaceKind::affine || x.kind() == SpaceKind::proj ||
                    x.kind() == SpaceKind::grassmann || x.kind() == SpaceKind::product;
    if (!ok || twist == Twist::sign)
      throw Error(ErrorKind::unsupported_integral, "integral homology of " + x.to_string());
  }
  if (twist == Twist::sign && !detail::is_configuration(x) && x.kind() != SpaceKind::product)
    throw Error(ErrorKind::unsupported_twist, "sign twist on " + x.to_string());

  switch (n.kind) {
    case SpaceKind::point: return GradedModule({{0, 1}}, mode);
    case SpaceKind::affine: return GradedModule({{flavor == Flavor::borel_moore ? 2 * n.a : 0, 1}}, mode);
    case SpaceKind::proj: {
      GradedModule g(mode);
      for (int i = 0; i <= n.a; ++i) g.add_free(2 * i, 1);
      return g;
    }
    case SpaceKind::grassmann: {
      GradedModule g = module_from_polynomial(grassmann_poincare(n.a, n.b), mode);
      return g;  // cell complex with only even cells; self-dual
    }
    case SpaceKind::config: {
      const Space& base = n.children[0];
      const int k = n.a;
      if (k == 1) {
        return homology(base, flavor, Twist::trivial, mode);
      }
      if (base.kind() == SpaceKind::affine) {
        if (twist == Twist::sign) return GradedModule(mode);
        if (k == 2) {
          // B(C^m,2) ~ RP^{2m-1}; rationally H_0 and H_{2m-1}.
          const int m = base.a();
          return reflect(GradedModule{{2 * m + 1, 1}, {4 * m, 1}});
        }
        throw Error(ErrorKind::unsupported_space, "constant-coefficient homology of " + x.to_string());
      }
      // base is Proj
      if (twist == Twist::sign) return reflect(detail::config_sign_bm_proj(base.a(), k));
      if (k == 2) return reflect(detail::config_trivial_bm_proj2(base.a()));
      throw Error(ErrorKind::unsupported_space, "constant-coefficient homology of " + x.to_string());
    }
    case SpaceKind::generic_config: {
      if (twist != Twist::sign)
        throw Error(ErrorKind::unsupported_space, "constant-coefficient homology of " + x.to_string());
      return reflect(generic_config_homology(n.a, n.b));
    }
    case SpaceKind::pgl:
      if (twist == Twist::sign) throw Error(ErrorKind::unsupported_twist, "sign twist on " + x.to_string());
      return pgl_homology(n.a, flavor);
    case SpaceKind::product: {
      bool any_config = false;
      for (const auto& c : n.children) any_config = any_config || detail::is_configuration(c);
      if (twist == Twist::sign && !any_config)
        throw Error(ErrorKind::unsupported_twist, "sign twist on a product without configuration factors");
      GradedModule acc({{0, 1}}, mode);
      // Kunneth; a zero factor kills the product, so evaluate those first.
      std::vector<Space> order = n.children;
      std::stable_partition(order.begin(), order.end(), [](const Space& c) { return detail::is_configuration(c); });
      for (const auto& c : order) {
        const Twist t = detail::is_configuration(c) ? twist : Twist::trivial;
        GradedModule h = homology(c, flavor, t, mode);
        acc = tensor(acc, h);
        if (acc.is_zero()) return acc;
      }
      return acc;
    }
    case SpaceKind::known:
      if (twist == Twist::sign) throw Error(ErrorKind::unsupported_twist, "sign twist on " + x.to_string());
      return reflect(n.known_bm);
  }
  return GradedModule(mode);
}

namespace detail {

// Degenerate loci of B(CP^n,k) removed to obtain generic configurations.  Each is
// covered by pieces whose sign-twisted BM homology vanishes; the pieces are
// fibrations over the dual projective space / line Grassmannian.
inline std::vector<Space> degenerate_loci(int n, int k) {
  const Space p1 = Space::proj(1);
  if (n == 2 && k == 3) return {Space::product({Space::proj(2), Space::config(p1, 3)})};
  if (n == 2 && k == 4)
    return {Space::product({Space::proj(2), Space::config(p1, 3), Space::affine(2)}),
            Space::product({Space::proj(2), Space::config(p1, 4)})};
  if (n == 3 && k == 3) return {Space::product({Space::grassmann(2, 4), Space::config(p1, 3)})};
  if (n == 3 && k == 4)
    return {Space::product({Space::proj(3), Space::config(Space::proj(2), 4)}),
            Space::product({Space::grassmann(2, 4), Space::config(p1, 4)})};
  throw Error(ErrorKind::unsupported_pair, "GenericConfig(" + std::to_string(n) + "," + std::to_string(k) + ")");
}

inline GradedModule tabulated_generic(int n, int k) {
  if (n == 2 && k == 3) return GradedModule{{6, 1}};
  if (n == 2 && k == 4) return GradedModule{};
  if (n == 3 && k == 3) return GradedModule{{6, 1}, {8, 1}, {10, 1}, {12, 1}};
  if (n == 3 && k == 4) return GradedModule{{12, 1}};
  throw Error(ErrorKind::unsupported_pair, "GenericConfig(" + std::to_string(n) + "," + std::to_string(k) + ")");
}

}  // namespace detail

inline GradedModule generic_config_homology(int n, int k) {
  const GradedModule expected = detail::tabulated_generic(n, k);
  // Excision: H(B) -> H(generic) is an isomorphism once the closed degenerate
  // locus has vanishing sign-twisted BM homology.
  for (const auto& piece : detail::degenerate_loci(n, k)) {
    const GradedModule h = homology(piece, Flavor::borel_moore, Twist::sign, Coefficients::rational);
    if (!h.is_zero())
      throw Error(ErrorKind::inconsistent, "degenerate locus " + piece.to_string() + " has homology " + h.to_string());
  }
  const GradedModule full = detail::config_sign_bm_proj(n, k);
  if (!(full == expected))
    throw Error(ErrorKind::inconsistent, "generic configurations of " + std::to_string(k) + " points in CP^" +
                                             std::to_string(n) + ": " + full.to_string() + " vs " + expected.to_string());
  return expected;
}

// ---------------------------------------------------------------------------
// Euler characteristic with compact supports.  Computed without the homology
// oracle: Sum_k chi(B(X,k)) t^k = (1+t)^chi(X), multiplicativity over products,
// and additivity over the degenerate-locus decomposition.  Rank-one local
// systems do not change chi, so the twist plays no role.

inline Integer generalized_binomial(const Integer& x, int k) {
  if (k < 0) return 0;
  Integer num = 1, den = 1;
  for (int i = 0; i < k; ++i) {
    num *= (x - i);
    den *= (i + 1);
  }
  return num / den;
}

inline Integer euler_cs(const Space& x) {
  const auto& n = x.node();
  switch (n.kind) {
    case SpaceKind::point:
    case SpaceKind::affine: return 1;
    case SpaceKind::proj: return n.a + 1;
    case SpaceKind::grassmann: return generalized_binomial(n.b, n.a);
    case SpaceKind::config: return generalized_binomial(euler_cs(n.children[0]), n.a);
    case SpaceKind::generic_config: {
      Integer chi = generalized_binomial(n.a + 1, n.b);
      for (const auto& piece : detail::degenerate_loci(n.a, n.b)) chi -= euler_cs(piece);
      return chi;
    }
    case SpaceKind::pgl: return 0;
    case SpaceKind::product: {
      Integer chi = 1;
      for (const auto& c : n.children) chi *= euler_cs(c);
      return chi;
    }
    case SpaceKind::known: return n.known_bm.euler_characteristic();
  }
  return 0;
}

}  // namespace hypcoh
