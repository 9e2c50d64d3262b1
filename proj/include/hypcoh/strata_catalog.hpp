#pragma once

// Built-in stratifications of the five discriminants and assembly of the E^1
// page of the main spectral sequence from them.

#include <future>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hypcoh/link_calculus.hpp"

namespace hypcoh {

enum class StratumFiberKind { open_simplex, open_cone, point, final_column };

inline const char* to_string(StratumFiberKind k) {
  switch (k) {
    case StratumFiberKind::open_simplex: return "OpenSimplex";
    case StratumFiberKind::open_cone: return "OpenCone";
    case StratumFiberKind::point: return "Point";
    case StratumFiberKind::final_column: return "FinalColumn";
  }
  return "?";
}

struct StratumFiber {
  StratumFiberKind kind = StratumFiberKind::point;
  int vertices = 0;         // open_simplex: an open (vertices-1)-simplex
  bool orientable = false;  // open_simplex: bundle of simplices is orientable
  std::optional<Link> link;  // open_cone; final_column when the link is known in advance

  static StratumFiber point() { return {StratumFiberKind::point}; }
  static StratumFiber open_simplex(int vertices, bool orientable = false) {
    if (vertices < 1) throw Error(ErrorKind::bad_range, "open simplex with fewer than one vertex");
    return {StratumFiberKind::open_simplex, vertices, orientable};
  }
  static StratumFiber open_cone(const Link& l) { return {StratumFiberKind::open_cone, 0, false, l}; }
  static StratumFiber final_column(std::optional<Link> known = std::nullopt) {
    return {StratumFiberKind::final_column, 0, false, std::move(known)};
  }
  bool operator==(const StratumFiber&) const = default;
};

struct Stratum {
  int p = 0;
  std::string name;
  Space base;
  Twist twist = Twist::trivial;
  int L_dim = 0;
  StratumFiber fiber;
  bool operator==(const Stratum&) const = default;
};

struct KnownDifferential {
  std::pair<int, int> from;
  std::pair<int, int> to;
  IntegerMatrix matrix;  // rows = rank of target cell, cols = rank of source cell
  std::string provenance;
  bool operator==(const KnownDifferential&) const = default;
};

struct StratificationSpec {
  int schema_version = 1;
  std::string case_id;
  int d = 0;
  int n = 0;
  bool vector_field = false;
  int D = 0;
  bool projectivize = true;
  std::vector<Stratum> strata;
  std::vector<KnownDifferential> known_differentials;

  const Stratum& final_stratum() const { return strata.back(); }
  bool operator==(const StratificationSpec&) const = default;
};

inline Integer binomial(int n, int k) { return generalized_binomial(n, k); }

/// Structural invariants; raises ParseError naming the offending field.
inline void validate_spec(const StratificationSpec& s) {
  if (s.schema_version != 1) throw ParseError("schema_version", "unsupported schema version " + std::to_string(s.schema_version));
  if (s.case_id.empty()) throw ParseError("case_id", "empty case id");
  if (s.vector_field) {
    if (s.D != 18) throw ParseError("D", "the quadric-triple space has dimension 18");
  } else if (Integer(s.D) != binomial(s.d + s.n, s.n)) {
    throw ParseError("D", "expected binomial(d+n,n) = " + binomial(s.d + s.n, s.n).str());
  }
  if (s.strata.empty()) throw ParseError("strata", "no strata");
  for (std::size_t i = 0; i < s.strata.size(); ++i) {
    const auto& st = s.strata[i];
    const std::string f = "strata[" + std::to_string(i) + "]";
    if (st.p != static_cast<int>(i) + 1) throw ParseError(f + ".p", "columns must be numbered 1,2,... in order");
    if (st.L_dim < 0) throw ParseError(f + ".L_dim", "negative dimension");
    if (st.L_dim > s.D) throw ParseError(f + ".L_dim", "exceeds D");
    const bool last = i + 1 == s.strata.size();
    if ((st.fiber.kind == StratumFiberKind::final_column) != last)
      throw ParseError(f + ".fiber", "exactly one FinalColumn stratum, in last position");
    if (i > 0 && st.L_dim > s.strata[i - 1].L_dim)
      throw ParseError(f + ".L_dim", "codimension decreases along the filtration");
    if (st.fiber.kind == StratumFiberKind::open_simplex &&
        (st.twist == Twist::trivial) != st.fiber.orientable)
      throw ParseError(f + ".twist", "simplex bundles are sign-twisted exactly when they are not orientable");
    if (st.fiber.kind == StratumFiberKind::open_cone && !st.fiber.link)
      throw ParseError(f + ".fiber", "open cone without a link");
  }
  for (std::size_t i = 0; i < s.known_differentials.size(); ++i) {
    const auto& k = s.known_differentials[i];
    const std::string f = "known_differentials[" + std::to_string(i) + "]";
    const int r = k.from.first - k.to.first;
    if (r < 1 || k.to.second != k.from.second + r - 1)
      throw ParseError(f, "not a differential d^r: (p,q) -> (p-r, q+r-1)");
    if (k.from.first > static_cast<int>(s.strata.size()) || k.to.first < 1)
      throw ParseError(f, "column out of range");
  }
}

// ---------------------------------------------------------------------------
// E^1 page

struct E1Page {
  std::string case_id;
  int D = 0;
  Coefficients mode = Coefficients::rational;
  int final_p = 0;
  std::map<std::pair<int, int>, ModuleEntry> cells;

  std::int64_t rank(int p, int q) const {
    auto it = cells.find({p, q});
    return it == cells.end() ? 0 : it->second.free_rank;
  }
  ModuleEntry entry(int p, int q) const {
    auto it = cells.find({p, q});
    return it == cells.end() ? ModuleEntry{} : it->second;
  }
  void set(int p, int q, ModuleEntry e) {
    if (e.is_zero()) cells.erase({p, q});
    else cells[{p, q}] = std::move(e);
  }
  void prune() {
    for (auto it = cells.begin(); it != cells.end();)
      if (it->second.is_zero()) it = cells.erase(it);
      else ++it;
  }
  /// Column p as a graded module in q.
  GradedModule column(int p) const {
    GradedModule g(mode);
    for (const auto& [pq, e] : cells)
      if (pq.first == p) g.add_entry(pq.second, e);
    return g;
  }
  /// Direct sum along anti-diagonals p+q.
  GradedModule total() const {
    GradedModule g(mode);
    for (const auto& [pq, e] : cells) g.add_entry(pq.first + pq.second, e);
    return g;
  }
  std::int64_t alternating_rank_sum() const {
    std::int64_t s = 0;
    for (const auto& [pq, e] : cells) s += ((pq.first + pq.second) % 2 == 0 ? 1 : -1) * e.free_rank;
    return s;
  }
  bool operator==(const E1Page& o) const {
    E1Page a = *this, b = o;
    a.prune();
    b.prune();
    return a.cells == b.cells && a.D == b.D && a.final_p == b.final_p;
  }
};

/// Short cell symbol: Z, Z^2, Z2, R, ...
inline std::string entry_symbol(const ModuleEntry& e, Coefficients mode) {
  std::string out;
  const std::string unit = mode == Coefficients::integral ? "Z" : "R";
  if (e.free_rank) out = unit + (e.free_rank > 1 ? "^" + std::to_string(e.free_rank) : "");
  for (const auto& t : e.torsion) {
    if (!out.empty()) out += "+";
    std::string c = "Z" + std::to_string(t.prime);
    if (t.exponent > 1) c = "Z" + std::to_string(t.prime) + "^" + std::to_string(t.exponent);
    if (t.multiplicity > 1) c = "(" + c + ")^" + std::to_string(t.multiplicity);
    out += c;
  }
  return out;
}

/// Rows q (top down), columns p.
inline std::string render_table(const E1Page& page, int columns) {
  if (page.cells.empty()) return "(empty)\n";
  int qmin = page.cells.begin()->first.second, qmax = qmin;
  for (const auto& [pq, e] : page.cells) {
    qmin = std::min(qmin, pq.second);
    qmax = std::max(qmax, pq.second);
  }
  std::ostringstream os;
  const int w = 6;
  auto pad = [&](const std::string& s) {
    std::string r = s;
    if (static_cast<int>(r.size()) < w) r = std::string(static_cast<std::size_t>(w) - r.size(), ' ') + r;
    return r;
  };
  for (int q = qmax; q >= qmin; --q) {
    os << pad(std::to_string(q)) << " |";
    for (int p = 1; p <= columns; ++p) os << pad(entry_symbol(page.entry(p, q), page.mode));
    os << "\n";
  }
  os << std::string(static_cast<std::size_t>(w), ' ') << " +" << std::string(static_cast<std::size_t>(w * columns), '-') << "\n";
  os << pad("q/p") << "  ";
  for (int p = 1; p <= columns; ++p) os << pad(std::to_string(p));
  os << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Built-in catalogs

namespace detail {

inline Link sj(int k) { return Link::self_join(Space::proj(1), k); }

inline Space nonsingular_conics() {
  return Space::known("N2", GradedModule{{5, 1}, {10, 1}}, 10,
                      "nonsingular conics in CP^2: rational cohomology 1 + t^5 (quadric case)");
}

// Bottom of a type-8 piece over the crossing point plus mixed pairs/triples.
inline Link two_line_intersection() {
  const Space p1 = Space::proj(1);
  const Link cross = Link::mv_union({Link::space(p1), Link::space(p1)}, {{{0, 1}, Link::space(Space::point())}});
  return Link::stratified({
      {Space::point(), Twist::trivial, fiber_compact(Link::cone(cross))},
      {Space::product({Space::affine(1), Space::affine(1)}), Twist::trivial, fiber_partial_simplex(2, 2)},
  });
}

// Link of a pair of lines in the plane: two pieces, one per line, glued along
// their common part.  Each piece: cone over the line's link, the line's link
// carried along the other line, and line-plus-point links.
inline Link two_lines_link(int self_join_k, bool with_middle_layer) {
  std::vector<LinkStratum> piece = {{Space::point(), Twist::trivial, fiber_compact(Link::cone(sj(self_join_k)))}};
  if (with_middle_layer) piece.push_back({Space::affine(1), Twist::trivial, fiber_open_cone(sj(self_join_k))});
  piece.push_back({Space::affine(1), Twist::trivial, fiber_open_cone(Link::susp(sj(self_join_k)))});
  const Link a = Link::stratified(piece);
  return Link::mv_union({a, a}, {{{0, 1}, two_line_intersection()}});
}

// Two lines in a plane in P^3 (cubic surfaces): two line-cones meeting at the crossing.
inline Link plane_two_lines_link() {
  const Link cone_line = Link::cone(sj(2));
  return Link::stratified({
      {Space::point(), Twist::trivial,
       fiber_compact(Link::mv_union({cone_line, cone_line}, {{{0, 1}, Link::space(Space::point())}}))},
      {Space::product({Space::affine(1), Space::affine(1)}), Twist::trivial, fiber_partial_simplex(2, 2)},
  });
}

inline Stratum st(int p, std::string name, Space base, Twist twist, int L, StratumFiber fiber) {
  return {p, std::move(name), std::move(base), twist, L, std::move(fiber)};
}

inline StratificationSpec quadric_p2() {
  StratificationSpec s;
  s.case_id = "quadric-p2";
  s.d = 2;
  s.n = 2;
  s.D = 6;
  s.strata = {
      st(1, "point", Space::proj(2), Twist::trivial, 3, StratumFiber::point()),
      st(2, "line", Space::proj(2), Twist::trivial, 1, StratumFiber::open_cone(Link::space(Space::proj(1)))),
      st(3, "plane", Space::point(), Twist::trivial, 0,
         StratumFiber::final_column(Link::known(GradedModule{{7, 1}}, "link of the plane stratum is S^7 (cited)"))),
  };
  s.known_differentials = {
      {{3, 5}, {2, 5}, IntegerMatrix{{2}}, "boundary of the 8-disc is twice the 7-cycle"},
      {{2, 7}, {1, 7}, IntegerMatrix{{2}}, "the 3-disc bundle over lines doubles the 7-cycle"},
  };
  return s;
}

inline StratificationSpec cubic_p2() {
  StratificationSpec s;
  s.case_id = "cubic-p2";
  s.d = 3;
  s.n = 2;
  s.D = 10;
  s.strata = {
      st(1, "point", Space::proj(2), Twist::trivial, 7, StratumFiber::point()),
      st(2, "pair of points", Space::config(Space::proj(2), 2), Twist::sign, 4, StratumFiber::open_simplex(2)),
      st(3, "line", Space::proj(2), Twist::trivial, 3, StratumFiber::open_cone(sj(2))),
      st(4, "generic triple", Space::generic_config(2, 3), Twist::sign, 1, StratumFiber::open_simplex(3)),
      st(5, "plane", Space::point(), Twist::trivial, 0, StratumFiber::final_column()),
  };
  return s;
}

inline StratificationSpec quartic_p2() {
  StratificationSpec s;
  s.case_id = "quartic-p2";
  s.d = 4;
  s.n = 2;
  s.D = 15;
  const Space p1 = Space::proj(1), p2 = Space::proj(2), c1 = Space::affine(1);
  s.strata = {
      st(1, "point", p2, Twist::trivial, 12, StratumFiber::point()),
      st(2, "pair of points", Space::config(p2, 2), Twist::sign, 9, StratumFiber::open_simplex(2)),
      st(3, "three collinear points", Space::product({p2, Space::config(p1, 3)}), Twist::sign, 7,
         StratumFiber::open_simplex(3)),
      st(4, "generic triple", Space::generic_config(2, 3), Twist::sign, 6, StratumFiber::open_simplex(3)),
      st(5, "line", p2, Twist::trivial, 6, StratumFiber::open_cone(sj(3))),
      st(6, "three collinear points and a point", Space::product({p2, Space::config(p1, 3), Space::affine(2)}),
         Twist::sign, 4, StratumFiber::open_simplex(4)),
      st(7, "generic quadruple", Space::generic_config(2, 4), Twist::sign, 3, StratumFiber::open_simplex(4)),
      st(8, "line and a point", Space::product({p2, Space::affine(2)}), Twist::trivial, 3,
         StratumFiber::open_cone(Link::susp(sj(3)))),
      st(9, "four points and a crossing",
         Space::product({Space::config(p2, 2), Space::config(c1, 2), Space::config(c1, 2)}), Twist::sign, 2,
         StratumFiber::open_simplex(5)),
      st(10, "crossings of four lines", Space::pgl(3), Twist::trivial, 1, StratumFiber::open_simplex(6, true)),
      st(11, "nonsingular conic", nonsingular_conics(), Twist::trivial, 1, StratumFiber::open_cone(sj(4))),
      st(12, "two lines", Space::config(p2, 2), Twist::trivial, 1, StratumFiber::open_cone(two_lines_link(3, true))),
      st(13, "plane", Space::point(), Twist::trivial, 0, StratumFiber::final_column()),
  };
  return s;
}

inline StratificationSpec cubic_p3() {
  StratificationSpec s;
  s.case_id = "cubic-p3";
  s.d = 3;
  s.n = 3;
  s.D = 20;
  const Space p3 = Space::proj(3), c1 = Space::affine(1);
  const Link l6 = plane_two_lines_link();
  const Link l8 = Link::stratified({
      {Space::point(), Twist::trivial,
       fiber_compact(Link::known(GradedModule{}, "order complex of plane cubic singular sets is acyclic"))},
      {nonsingular_conics(), Twist::trivial, fiber_open_cone(sj(3))},
      {Space::config(Space::proj(2), 2), Twist::trivial, fiber_open_cone(l6)},
  });
  const Link cone6 = Link::cone(l6);
  const Link cone_line = Link::cone(sj(2));
  const Link l9 = Link::stratified({
      {Space::point(), Twist::trivial,
       fiber_compact(Link::mv_union({cone6, cone6, cone6}, {{{0, 1}, cone_line},
                                                            {{0, 2}, cone_line},
                                                            {{1, 2}, cone_line},
                                                            {{0, 1, 2}, Link::space(Space::point())}}))},
      {Space::product({c1, c1, c1}), Twist::trivial, fiber_partial_simplex(3, 3)},
  });
  s.strata = {
      st(1, "point", p3, Twist::trivial, 16, StratumFiber::point()),
      st(2, "pair of points", Space::config(p3, 2), Twist::sign, 12, StratumFiber::open_simplex(2)),
      st(3, "line", Space::grassmann(2, 4), Twist::trivial, 10, StratumFiber::open_cone(sj(2))),
      st(4, "generic triple", Space::generic_config(3, 3), Twist::sign, 8, StratumFiber::open_simplex(3)),
      st(5, "nonsingular conic", Space::product({p3, nonsingular_conics()}), Twist::trivial, 5,
         StratumFiber::open_cone(sj(3))),
      st(6, "two crossing lines", Space::product({p3, Space::config(Space::proj(2), 2)}), Twist::trivial, 5,
         StratumFiber::open_cone(l6)),
      st(7, "generic quadruple", Space::generic_config(3, 4), Twist::sign, 4, StratumFiber::open_simplex(4)),
      st(8, "plane", p3, Twist::trivial, 4, StratumFiber::open_cone(l8)),
      st(9, "three lines in a plane", Space::product({p3, Space::generic_config(2, 3)}), Twist::trivial, 1,
         StratumFiber::open_cone(l9)),
      st(10, "conic and a point", Space::product({p3, nonsingular_conics(), Space::affine(3)}), Twist::trivial, 1,
         StratumFiber::open_cone(Link::susp(sj(3)))),
      st(11, "space", Space::point(), Twist::trivial, 0, StratumFiber::final_column()),
  };
  return s;
}

inline StratificationSpec vf_222() {
  StratificationSpec s;
  s.case_id = "vf-222";
  s.d = 2;
  s.n = 2;
  s.vector_field = true;
  s.D = 18;
  s.projectivize = false;
  const Space p2 = Space::proj(2);
  s.strata = {
      st(1, "point", p2, Twist::trivial, 15, StratumFiber::point()),
      st(2, "pair of points", Space::config(p2, 2), Twist::sign, 12, StratumFiber::open_simplex(2)),
      st(3, "generic triple", Space::generic_config(2, 3), Twist::sign, 9, StratumFiber::open_simplex(3)),
      st(4, "line", p2, Twist::trivial, 9, StratumFiber::open_cone(sj(2))),
      st(5, "generic quadruple", Space::generic_config(2, 4), Twist::sign, 6, StratumFiber::open_simplex(4)),
      st(6, "line and a point", Space::product({p2, Space::affine(2)}), Twist::trivial, 6,
         StratumFiber::open_cone(Link::susp(sj(2)))),
      st(7, "nonsingular conic", nonsingular_conics(), Twist::trivial, 3, StratumFiber::open_cone(sj(4))),
      st(8, "two lines", Space::config(p2, 2), Twist::trivial, 3, StratumFiber::open_cone(two_lines_link(2, false))),
      st(9, "plane", Space::point(), Twist::trivial, 0, StratumFiber::final_column()),
  };
  return s;
}

}  // namespace detail

inline const std::vector<std::string>& builtin_case_ids() {
  static const std::vector<std::string> ids = {"quadric-p2", "cubic-p2", "quartic-p2", "cubic-p3", "vf-222"};
  return ids;
}

inline StratificationSpec builtin_spec(const std::string& case_id) {
  if (case_id == "quadric-p2") return detail::quadric_p2();
  if (case_id == "cubic-p2") return detail::cubic_p2();
  if (case_id == "quartic-p2") return detail::quartic_p2();
  if (case_id == "cubic-p3") return detail::cubic_p3();
  if (case_id == "vf-222") return detail::vf_222();
  throw Error(ErrorKind::unknown_case, "no built-in case '" + case_id + "'");
}

// ---------------------------------------------------------------------------
// Assembly

namespace detail {

// Integral evaluation of the few links the integral (quadric) case needs.
inline GradedModule eval_link_integral(const Link& l) {
  const auto& n = l.node();
  switch (n.kind) {
    case LinkKind::space: {
      GradedModule h = homology(n.space, Flavor::ordinary, Twist::trivial, Coefficients::integral);
      h.remove_free(0, 1);
      return h;
    }
    case LinkKind::simplex:
    case LinkKind::cone: return GradedModule(Coefficients::integral);
    case LinkKind::susp: return eval_link_integral(n.children[0]).shifted(1);
    case LinkKind::known_link: {
      GradedModule g(Coefficients::integral);
      for (const auto& [d, e] : n.module.entries()) g.add_free(d, e.free_rank);
      return g;
    }
    default: throw Error(ErrorKind::unsupported_integral, "integral homology of link " + l.to_string());
  }
}

inline GradedModule eval_link_mode(const Link& l, Coefficients mode) {
  return mode == Coefficients::integral ? eval_link_integral(l) : eval_link(l);
}

}  // namespace detail

/// Borel-Moore homology of F_p \ F_{p-1}, graded by total degree p+q.
inline GradedModule stratum_bm(const Stratum& s, Coefficients mode) {
  GradedModule fiber(mode);
  Twist base_twist = s.twist;
  switch (s.fiber.kind) {
    case StratumFiberKind::point: fiber.add_free(0, 1); break;
    case StratumFiberKind::open_simplex: fiber.add_free(s.fiber.vertices - 1, 1); break;
    case StratumFiberKind::open_cone: fiber = bm_open_cone(detail::eval_link_mode(*s.fiber.link, mode)); break;
    case StratumFiberKind::final_column:
      if (!s.fiber.link) throw Error(ErrorKind::invalid_expression, "final column has no link yet");
      fiber = bm_open_cone(detail::eval_link_mode(*s.fiber.link, mode));
      break;
  }
  if (fiber.is_zero()) return GradedModule(mode);
  GradedModule base = homology(s.base, Flavor::borel_moore, base_twist, mode);
  GradedModule out = tensor(base, fiber).shifted(2 * s.L_dim);
  out.set_mode(mode);
  return out;
}

inline void place_column(E1Page& page, int p, const GradedModule& by_total_degree) {
  for (const auto& [deg, e] : by_total_degree.entries())
    if (!e.is_zero()) page.set(p, deg - p, e);
}

/// E^1_{p,q} = H̄_{p+q}(F_p \ F_{p-1}) for every stratum except the final column,
/// unless its link is already known.
inline E1Page assemble_E1(const StratificationSpec& spec, Coefficients mode, bool parallel = false) {
  validate_spec(spec);
  E1Page page;
  page.case_id = spec.case_id;
  page.D = spec.D;
  page.mode = mode;
  page.final_p = spec.final_stratum().p;

  std::vector<const Stratum*> todo;
  for (const auto& s : spec.strata)
    if (s.fiber.kind != StratumFiberKind::final_column || s.fiber.link) todo.push_back(&s);

  std::vector<GradedModule> columns(todo.size());
  if (parallel) {
    std::vector<std::future<GradedModule>> futs;
    for (const Stratum* s : todo) futs.push_back(std::async(std::launch::async, [s, mode] { return stratum_bm(*s, mode); }));
    for (std::size_t i = 0; i < futs.size(); ++i) columns[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < todo.size(); ++i) columns[i] = stratum_bm(*todo[i], mode);
  }
  for (std::size_t i = 0; i < todo.size(); ++i) place_column(page, todo[i]->p, columns[i]);
  for (const auto& [pq, e] : page.cells) {
    const int deg = pq.first + pq.second;
    if (deg < 0 || deg > 2 * spec.D - 1)
      throw Error(ErrorKind::inconsistent, "E1 cell (" + std::to_string(pq.first) + "," + std::to_string(pq.second) +
                                               ") outside total degrees [0, 2D-1]");
  }
  return page;
}

}  // namespace hypcoh
