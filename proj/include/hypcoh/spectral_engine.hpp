#pragma once

// Resolution of the main spectral sequence: known differentials, the auxiliary
// sequence computing the final column, and an exhaustive rank-level search over
// differential patterns filtered by the Stein bound and (1+t)-divisibility.

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hypcoh/strata_catalog.hpp"

namespace hypcoh {

struct DifferentialRecord {
  int r = 1;
  std::pair<int, int> from;
  std::pair<int, int> to;
  std::int64_t rank = 0;
  bool known = false;
  bool operator==(const DifferentialRecord&) const = default;
};

struct SSState {
  E1Page page;
  int page_index = 1;
  std::vector<DifferentialRecord> applied;
  bool resolved = false;
};

struct ConstraintSet {
  bool stein = true;       // H̄_j(Σ) = 0 for j < D-1
  bool one_plus_t = true;  // complement polynomial divisible by 1+t
  bool known = true;       // apply the spec's known differentials
};

struct SSResult {
  std::string case_id;
  int D = 0;
  Coefficients mode = Coefficients::rational;
  E1Page e1;                 // including the final column
  E1Page e_infinity;
  std::vector<DifferentialRecord> differentials;  // known ones first, then the resolved pattern
  E1Page aux_e1;             // auxiliary page computing H(Φ_{N-1})
  E1Page aux_e_infinity;     // the surviving auxiliary pattern paired with this result
  std::string final_column_source;  // "auxiliary" or "known link"
  std::size_t patterns_examined = 0;
};

inline std::string render_cells(const E1Page& page) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [pq, e] : page.cells) {
    if (e.is_zero()) continue;
    os << (first ? "" : " ") << "(" << pq.first << "," << pq.second << "):" << entry_symbol(e, page.mode);
    first = false;
  }
  return first ? "(empty)" : os.str();
}

// ---------------------------------------------------------------------------
// Known differentials

/// Applies a pinned differential matrix.  Rational mode uses its rank; integral
/// mode keeps the kernel at the source and the cokernel (with torsion) at the target.
inline SSState apply_known(SSState state, const KnownDifferential& kd) {
  auto& page = state.page;
  const ModuleEntry src = page.entry(kd.from.first, kd.from.second);
  const ModuleEntry tgt = page.entry(kd.to.first, kd.to.second);
  if (kd.matrix.cols() != static_cast<std::size_t>(src.free_rank) ||
      kd.matrix.rows() != static_cast<std::size_t>(tgt.free_rank))
    throw Error(ErrorKind::shape_mismatch,
                "differential (" + std::to_string(kd.from.first) + "," + std::to_string(kd.from.second) + ")->(" +
                    std::to_string(kd.to.first) + "," + std::to_string(kd.to.second) + ") is " +
                    std::to_string(kd.matrix.rows()) + "x" + std::to_string(kd.matrix.cols()) + " but cells have ranks " +
                    std::to_string(tgt.free_rank) + " and " + std::to_string(src.free_rank));
  const auto inv = smith_normal_form(kd.matrix);
  const auto r = static_cast<std::int64_t>(inv.size());
  ModuleEntry new_src = src, new_tgt = tgt;
  new_src.free_rank -= r;
  new_tgt.free_rank -= r;
  if (page.mode == Coefficients::integral) {
    GradedModule t(Coefficients::integral);
    t.add_entry(0, new_tgt);
    for (const auto& d : inv) t.add_cyclic(0, d);
    new_tgt = t.entry(0);
  }
  page.set(kd.from.first, kd.from.second, new_src);
  page.set(kd.to.first, kd.to.second, new_tgt);
  state.applied.push_back({kd.from.first - kd.to.first, kd.from, kd.to, r, true});
  return state;
}

inline SSState apply_known_all(SSState state, const std::vector<KnownDifferential>& diffs) {
  // lower pages first
  std::vector<KnownDifferential> sorted = diffs;
  std::stable_sort(sorted.begin(), sorted.end(), [](const KnownDifferential& a, const KnownDifferential& b) {
    return a.from.first - a.to.first < b.from.first - b.to.first;
  });
  for (const auto& kd : sorted) state = apply_known(std::move(state), kd);
  return state;
}

// ---------------------------------------------------------------------------
// Rank-level pattern search

struct Pattern {
  E1Page page;  // E^infinity
  std::vector<DifferentialRecord> differentials;
};

namespace detail {

using CellKey = std::pair<int, int>;

inline void enumerate_page(const E1Page& page, int r, const std::vector<std::pair<CellKey, CellKey>>& arrows,
                           std::size_t idx, std::map<CellKey, std::int64_t>& used, std::vector<std::int64_t>& ranks,
                           std::vector<std::pair<E1Page, std::vector<DifferentialRecord>>>& out) {
  if (idx == arrows.size()) {
    E1Page next = page;
    std::vector<DifferentialRecord> recs;
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      if (!ranks[i]) continue;
      const auto& [from, to] = arrows[i];
      auto s = next.entry(from.first, from.second);
      auto t = next.entry(to.first, to.second);
      s.free_rank -= ranks[i];
      t.free_rank -= ranks[i];
      next.set(from.first, from.second, s);
      next.set(to.first, to.second, t);
      recs.push_back({r, from, to, ranks[i], false});
    }
    out.emplace_back(std::move(next), std::move(recs));
    return;
  }
  const auto& [from, to] = arrows[idx];
  const std::int64_t cap_from = page.rank(from.first, from.second) - used[from];
  const std::int64_t cap_to = page.rank(to.first, to.second) - used[to];
  const std::int64_t cap = std::min(cap_from, cap_to);
  for (std::int64_t k = 0; k <= cap; ++k) {
    used[from] += k;
    used[to] += k;
    ranks[idx] = k;
    enumerate_page(page, r, arrows, idx + 1, used, ranks, out);
    used[from] -= k;
    used[to] -= k;
  }
  ranks[idx] = 0;
}

inline std::string page_key(const E1Page& page) {
  E1Page p = page;
  p.prune();
  return render_cells(p);
}

}  // namespace detail

/// Every E^infinity reachable by differentials d^r: (p,q) -> (p-r, q+r-1) of any
/// ranks compatible with d∘d = 0, deduplicated.  Arrows listed in `pinned` are
/// fixed (already applied) and never chosen again.
inline std::vector<Pattern> enumerate_patterns(const E1Page& start, const std::set<std::pair<detail::CellKey, detail::CellKey>>& pinned,
                                               std::size_t* examined = nullptr) {
  int pmin = 1 << 20, pmax = -(1 << 20);
  for (const auto& [pq, e] : start.cells) {
    pmin = std::min(pmin, pq.first);
    pmax = std::max(pmax, pq.first);
  }
  std::vector<Pattern> frontier = {{start, {}}};
  if (start.cells.empty()) return frontier;
  std::size_t count = 0;
  for (int r = 1; r <= pmax - pmin; ++r) {
    std::map<std::string, Pattern> next;
    for (const auto& pat : frontier) {
      std::vector<std::pair<detail::CellKey, detail::CellKey>> arrows;
      for (const auto& [pq, e] : pat.page.cells) {
        if (!e.free_rank) continue;
        const detail::CellKey to{pq.first - r, pq.second + r - 1};
        if (pat.page.rank(to.first, to.second) == 0) continue;
        if (r == 1 && pinned.count({pq, to})) continue;
        arrows.push_back({pq, to});
      }
      std::map<detail::CellKey, std::int64_t> used;
      std::vector<std::int64_t> ranks(arrows.size(), 0);
      std::vector<std::pair<E1Page, std::vector<DifferentialRecord>>> outs;
      detail::enumerate_page(pat.page, r, arrows, 0, used, ranks, outs);
      count += outs.size();
      for (auto& [pg, recs] : outs) {
        const std::string key = detail::page_key(pg);
        if (next.count(key)) continue;
        Pattern np{std::move(pg), pat.differentials};
        np.differentials.insert(np.differentials.end(), recs.begin(), recs.end());
        next.emplace(key, std::move(np));
      }
    }
    frontier.clear();
    for (auto& [k, p] : next) frontier.push_back(std::move(p));
  }
  if (examined) *examined += count;
  for (auto& p : frontier) p.page.prune();
  return frontier;
}

// ---------------------------------------------------------------------------
// Constraints

/// H^0 = 1 and H^i = H̄_{2D-i-1} for i > 0; rational ranks only.
inline PoincarePolynomial complement_polynomial_of(const GradedModule& sigma, int D) {
  std::vector<std::int64_t> c(static_cast<std::size_t>(2 * D), 0);
  c[0] = 1;
  for (const auto& [j, e] : sigma.entries()) {
    const int i = 2 * D - j - 1;
    if (i <= 0 || i >= 2 * D) continue;
    c[static_cast<std::size_t>(i)] += e.free_rank;
  }
  return PoincarePolynomial(std::move(c));
}

/// Empty string when the total homology passes every active constraint.
inline std::string constraint_violation(const GradedModule& sigma, int D, const ConstraintSet& c) {
  for (const auto& [j, e] : sigma.entries()) {
    if (e.is_zero()) continue;
    if (j < 0 || j > 2 * D - 2) return "degree " + std::to_string(j) + " outside [0, 2D-2]";
    if (c.stein && j < D - 1) return "Stein bound: nonzero H̄_" + std::to_string(j) + " below D-1";
  }
  if (c.one_plus_t) {
    try {
      divide_by_one_plus_t(complement_polynomial_of(sigma, D));
    } catch (const Error&) {
      return "complement polynomial " + complement_polynomial_of(sigma, D).to_string() + " not divisible by 1+t";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Auxiliary sequence and the final column

/// Each main column p moved down by 2 L_dim(p); converges to H(Φ_{N-1}), unreduced.
inline E1Page auxiliary_page(const StratificationSpec& spec, const E1Page& e1) {
  E1Page aux;
  aux.case_id = spec.case_id + "/aux";
  aux.D = spec.D;
  aux.mode = Coefficients::rational;
  aux.final_p = spec.final_stratum().p;
  for (const auto& st : spec.strata) {
    if (st.fiber.kind == StratumFiberKind::final_column) continue;
    for (const auto& [pq, e] : e1.cells)
      if (pq.first == st.p && e.free_rank) aux.set(st.p, pq.second - 2 * st.L_dim, ModuleEntry{e.free_rank, {}});
  }
  return aux;
}

struct AuxOutcome {
  Pattern pattern;
  GradedModule reduced;  // H̃_*(Φ_{N-1})
};

/// All auxiliary outcomes whose reduced survivors obey the Stein rule: a class of
/// degree j would give H̄_{j+1}(Σ), so j+1 < D-1 is forbidden.
inline std::vector<AuxOutcome> final_column_candidates(const StratificationSpec& spec, const E1Page& e1,
                                                       std::size_t* examined = nullptr) {
  const E1Page aux = auxiliary_page(spec, e1);
  std::vector<AuxOutcome> out;
  for (auto& pat : enumerate_patterns(aux, {}, examined)) {
    GradedModule total = pat.page.total();
    if (total.rank(0) < 1) continue;  // Φ is nonempty
    total.remove_free(0, 1);
    bool ok = true;
    for (const auto& [j, e] : total.entries())
      if (e.free_rank && (j < 0 || j + 1 < spec.D - 1)) ok = false;
    if (ok) out.push_back({std::move(pat), std::move(total)});
  }
  return out;
}

/// Final-column cells E^1_{N,q} = H̃_{N+q-1}(Φ_{N-1}), as a module graded by q.
inline GradedModule final_column_from_reduced(const GradedModule& reduced, int final_p) {
  return reduced.shifted(1 - final_p);
}

inline GradedModule final_column_aux(const StratificationSpec& spec, const E1Page& e1) {
  auto cands = final_column_candidates(spec, e1);
  if (cands.empty()) throw Error(ErrorKind::inconsistent, spec.case_id + ": no auxiliary pattern satisfies the Stein rule");
  if (cands.size() > 1) {
    std::vector<std::string> rendered;
    for (const auto& c : cands) rendered.push_back("H~(Phi) = " + c.reduced.to_string() + " via " + render_cells(c.pattern.page));
    throw AmbiguousError(spec.case_id + ": final column undetermined", rendered);
  }
  return final_column_from_reduced(cands.front().reduced, spec.final_stratum().p);
}

// ---------------------------------------------------------------------------
// Resolution

inline GradedModule total_homology(const SSResult& r) { return r.e_infinity.total(); }

/// Builds E^1 (final column included), applies the known differentials and keeps
/// the unique pattern consistent with the constraints.
inline SSResult resolve(const StratificationSpec& spec, const E1Page& e1_in, const ConstraintSet& constraints) {
  const Stratum& fin = spec.final_stratum();
  E1Page base = e1_in;
  // drop any final-column cells so both routes start from the same page
  for (auto it = base.cells.begin(); it != base.cells.end();)
    if (it->first.first == fin.p) it = base.cells.erase(it);
    else ++it;

  std::size_t examined = 0;
  const auto aux_cands = final_column_candidates(spec, base, &examined);

  struct Candidate {
    GradedModule column;
    const AuxOutcome* aux = nullptr;
  };
  std::vector<Candidate> columns;
  std::string source;
  if (fin.fiber.link) {
    source = "known link";
    GradedModule reduced = detail::eval_link_mode(*fin.fiber.link, Coefficients::rational);
    const AuxOutcome* match = nullptr;
    for (const auto& c : aux_cands)
      if (c.reduced == reduced) match = &c;
    if (!match)
      throw Error(ErrorKind::inconsistent, spec.case_id + ": known final-column link " + reduced.to_string() +
                                               " is not among the auxiliary outcomes");
    columns.push_back({stratum_bm(fin, base.mode).shifted(-fin.p), match});
  } else {
    source = "auxiliary";
    for (const auto& c : aux_cands) columns.push_back({final_column_from_reduced(c.reduced, fin.p), &c});
  }
  if (columns.empty())
    throw Error(ErrorKind::inconsistent, spec.case_id + ": no auxiliary pattern satisfies the Stein rule");

  std::vector<SSResult> survivors;
  std::vector<std::string> rejected;
  std::set<std::string> seen;
  for (const auto& cand : columns) {
    E1Page e1 = base;
    place_column(e1, fin.p, cand.column.shifted(fin.p));
    SSState state{e1};
    if (constraints.known) state = apply_known_all(std::move(state), spec.known_differentials);
    std::set<std::pair<detail::CellKey, detail::CellKey>> pinned;
    if (constraints.known)
      for (const auto& kd : spec.known_differentials) pinned.insert({kd.from, kd.to});
    for (auto& pat : enumerate_patterns(state.page, pinned, &examined)) {
      const GradedModule sigma = pat.page.total();
      const std::string why = constraint_violation(sigma, spec.D, constraints);
      const std::string key = render_cells(e1) + " => " + render_cells(pat.page);
      if (!why.empty()) {
        rejected.push_back(render_cells(pat.page) + ": " + why);
        continue;
      }
      if (!seen.insert(key).second) continue;
      if (e1.mode == Coefficients::integral && !pat.differentials.empty())
        throw Error(ErrorKind::unsupported_integral, spec.case_id + ": integral resolution needs unpinned differentials");
      SSResult res;
      res.case_id = spec.case_id;
      res.D = spec.D;
      res.mode = e1.mode;
      res.e1 = e1;
      res.e_infinity = pat.page;
      res.differentials = state.applied;
      res.differentials.insert(res.differentials.end(), pat.differentials.begin(), pat.differentials.end());
      res.aux_e1 = auxiliary_page(spec, base);
      res.aux_e_infinity = cand.aux->pattern.page;
      res.final_column_source = source;
      survivors.push_back(std::move(res));
    }
  }
  if (survivors.empty()) {
    std::ostringstream os;
    os << spec.case_id << ": no differential pattern satisfies the constraints";
    for (std::size_t i = 0; i < rejected.size() && i < 4; ++i) os << "; " << rejected[i];
    throw Error(ErrorKind::inconsistent, os.str());
  }
  if (survivors.size() > 1) {
    std::vector<std::string> rendered;
    for (const auto& s : survivors) rendered.push_back("E1 " + render_cells(s.e1) + " => Einf " + render_cells(s.e_infinity));
    throw AmbiguousError(spec.case_id + ": more than one differential pattern is consistent", rendered);
  }
  survivors.front().patterns_examined = examined;
  survivors.front().e_infinity.mode = survivors.front().e1.mode;
  return survivors.front();
}

inline SSResult resolve(const StratificationSpec& spec, Coefficients mode = Coefficients::rational,
                        const ConstraintSet& constraints = {}, bool parallel = false) {
  return resolve(spec, assemble_E1(spec, mode, parallel), constraints);
}

}  // namespace hypcoh
