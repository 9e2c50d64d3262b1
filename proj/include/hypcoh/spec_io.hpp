#pragma once

// JSON form of stratification specs.  SpaceExpr / LinkExpr nodes are tagged
// objects; unknown tags and unknown keys are errors.

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "hypcoh/strata_catalog.hpp"

namespace hypcoh {

using Json = nlohmann::ordered_json;

namespace io {

inline void check_keys(const Json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  std::set<std::string> ok;
  for (const char* a : allowed) ok.insert(a);
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ParseError(path + "." + k, "unknown key");
}

inline const Json& need(const Json& j, const std::string& path, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ParseError(path + "." + key, "missing");
  return j.at(key);
}

inline int get_int(const Json& j, const std::string& path, const char* key) {
  const Json& v = need(j, path, key);
  if (!v.is_number_integer()) throw ParseError(path + "." + key, "expected an integer");
  return v.get<int>();
}

inline std::string get_string(const Json& j, const std::string& path, const char* key) {
  const Json& v = need(j, path, key);
  if (!v.is_string()) throw ParseError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

inline bool get_bool(const Json& j, const std::string& path, const char* key, bool fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_boolean()) throw ParseError(path + "." + key, "expected a boolean");
  return j.at(key).get<bool>();
}

inline Twist parse_twist(const Json& j, const std::string& path) {
  if (!j.is_string()) throw ParseError(path, "expected \"trivial\" or \"sign\"");
  const auto s = j.get<std::string>();
  if (s == "trivial") return Twist::trivial;
  if (s == "sign") return Twist::sign;
  throw ParseError(path, "unknown twist '" + s + "'");
}

// Wrap constructor failures so the caller learns which node was bad.
template <class F>
auto at_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(path, e.what());
  }
}

}  // namespace io

// ---------------------------------------------------------------------------
// GradedModule

inline Json to_json(const GradedModule& g) {
  Json arr = Json::array();
  for (const auto& [d, e] : g.entries()) {
    if (e.is_zero()) continue;
    Json item = {{"degree", d}, {"rank", e.free_rank}};
    if (!e.torsion.empty()) {
      Json t = Json::array();
      for (const auto& s : e.torsion)
        t.push_back({{"prime", s.prime}, {"exponent", s.exponent}, {"multiplicity", s.multiplicity}});
      item["torsion"] = t;
    }
    arr.push_back(item);
  }
  return arr;
}

inline GradedModule module_from_json(const Json& j, const std::string& path, Coefficients mode = Coefficients::rational) {
  if (!j.is_array()) throw ParseError(path, "expected a list of {degree, rank} records");
  GradedModule g(mode);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = path + "[" + std::to_string(i) + "]";
    io::check_keys(j[i], p, {"degree", "rank", "torsion"});
    const int deg = io::get_int(j[i], p, "degree");
    const int rank = io::get_int(j[i], p, "rank");
    if (rank < 0) throw ParseError(p + ".rank", "negative rank");
    g.add_free(deg, rank);
    if (j[i].contains("torsion")) {
      const Json& t = j[i]["torsion"];
      if (!t.is_array()) throw ParseError(p + ".torsion", "expected a list");
      for (std::size_t k = 0; k < t.size(); ++k) {
        const std::string tp = p + ".torsion[" + std::to_string(k) + "]";
        io::check_keys(t[k], tp, {"prime", "exponent", "multiplicity"});
        io::at_path(tp, [&] {
          g.add_torsion(deg, io::get_int(t[k], tp, "prime"), io::get_int(t[k], tp, "exponent"),
                        io::get_int(t[k], tp, "multiplicity"));
          return 0;
        });
      }
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// SpaceExpr

inline Json to_json(const Space& x) {
  const auto& n = x.node();
  switch (n.kind) {
    case SpaceKind::point: return {{"tag", "Point"}};
    case SpaceKind::affine: return {{"tag", "Affine"}, {"n", n.a}};
    case SpaceKind::proj: return {{"tag", "Proj"}, {"n", n.a}};
    case SpaceKind::grassmann: return {{"tag", "Grassmann"}, {"k", n.a}, {"m", n.b}};
    case SpaceKind::config: return {{"tag", "Config"}, {"base", to_json(n.children[0])}, {"k", n.a}};
    case SpaceKind::generic_config: return {{"tag", "GenericConfig"}, {"n", n.a}, {"k", n.b}};
    case SpaceKind::pgl: return {{"tag", "PGL"}, {"m", n.a}};
    case SpaceKind::product: {
      Json f = Json::array();
      for (const auto& c : n.children) f.push_back(to_json(c));
      return {{"tag", "Product"}, {"factors", f}};
    }
    case SpaceKind::known:
      return {{"tag", "Known"},
              {"name", n.name},
              {"bm", to_json(n.known_bm)},
              {"real_dim", n.known_real_dim},
              {"provenance", n.provenance}};
  }
  return {};
}

inline Space space_from_json(const Json& j, const std::string& path) {
  const std::string tag = io::get_string(j, path, "tag");
  return io::at_path(path, [&]() -> Space {
    if (tag == "Point") {
      io::check_keys(j, path, {"tag"});
      return Space::point();
    }
    if (tag == "Affine") {
      io::check_keys(j, path, {"tag", "n"});
      return Space::affine(io::get_int(j, path, "n"));
    }
    if (tag == "Proj") {
      io::check_keys(j, path, {"tag", "n"});
      return Space::proj(io::get_int(j, path, "n"));
    }
    if (tag == "Grassmann") {
      io::check_keys(j, path, {"tag", "k", "m"});
      return Space::grassmann(io::get_int(j, path, "k"), io::get_int(j, path, "m"));
    }
    if (tag == "Config") {
      io::check_keys(j, path, {"tag", "base", "k"});
      return Space::config(space_from_json(io::need(j, path, "base"), path + ".base"), io::get_int(j, path, "k"));
    }
    if (tag == "GenericConfig") {
      io::check_keys(j, path, {"tag", "n", "k"});
      return Space::generic_config(io::get_int(j, path, "n"), io::get_int(j, path, "k"));
    }
    if (tag == "PGL") {
      io::check_keys(j, path, {"tag", "m"});
      return Space::pgl(io::get_int(j, path, "m"));
    }
    if (tag == "Product") {
      io::check_keys(j, path, {"tag", "factors"});
      const Json& f = io::need(j, path, "factors");
      if (!f.is_array() || f.size() < 2) throw ParseError(path + ".factors", "expected at least two factors");
      std::vector<Space> fs;
      for (std::size_t i = 0; i < f.size(); ++i) fs.push_back(space_from_json(f[i], path + ".factors[" + std::to_string(i) + "]"));
      return Space::product(std::move(fs));
    }
    if (tag == "Known") {
      io::check_keys(j, path, {"tag", "name", "bm", "real_dim", "provenance"});
      return Space::known(io::get_string(j, path, "name"), module_from_json(io::need(j, path, "bm"), path + ".bm"),
                          io::get_int(j, path, "real_dim"), io::get_string(j, path, "provenance"));
    }
    throw ParseError(path + ".tag", "unknown space tag '" + tag + "'");
  });
}

// ---------------------------------------------------------------------------
// LinkExpr

inline Json to_json(const Link& l);

inline Json to_json(const LinkFiber& f) {
  switch (f.kind) {
    case FiberKind::module: return {{"kind", "module"}, {"module", to_json(f.module)}};
    case FiberKind::open_cone: return {{"kind", "open_cone"}, {"link", to_json(*f.link)}};
    case FiberKind::compact: return {{"kind", "compact"}, {"link", to_json(*f.link)}};
    case FiberKind::partial_simplex:
      return {{"kind", "partial_simplex"}, {"dim", f.dim}, {"removed_facets", f.removed_facets}};
  }
  return {};
}

inline Json to_json(const Link& l) {
  const auto& n = l.node();
  switch (n.kind) {
    case LinkKind::space: return {{"tag", "Space"}, {"space", to_json(n.space)}};
    case LinkKind::simplex: return {{"tag", "Simplex"}, {"k", n.k}};
    case LinkKind::self_join: return {{"tag", "SelfJoin"}, {"space", to_json(n.space)}, {"k", n.k}};
    case LinkKind::join: return {{"tag", "Join"}, {"left", to_json(n.children[0])}, {"right", to_json(n.children[1])}};
    case LinkKind::cone: return {{"tag", "Cone"}, {"of", to_json(n.children[0])}};
    case LinkKind::susp: return {{"tag", "Susp"}, {"of", to_json(n.children[0])}};
    case LinkKind::mv_union: {
      Json pieces = Json::array(), inter = Json::array();
      for (const auto& c : n.children) pieces.push_back(to_json(c));
      for (const auto& [key, li] : n.intersections) inter.push_back({{"indices", key}, {"link", to_json(li)}});
      return {{"tag", "MVUnion"}, {"pieces", pieces}, {"intersections", inter}};
    }
    case LinkKind::stratified: {
      Json strata = Json::array();
      for (const auto& s : n.strata)
        strata.push_back({{"base", to_json(s.base)}, {"twist", to_string(s.twist)}, {"fiber", to_json(s.fiber)}});
      return {{"tag", "Stratified"}, {"strata", strata}};
    }
    case LinkKind::known_link:
      return {{"tag", "KnownLink"}, {"reduced", to_json(n.module)}, {"provenance", n.provenance}};
  }
  return {};
}

inline Link link_from_json(const Json& j, const std::string& path);

inline LinkFiber link_fiber_from_json(const Json& j, const std::string& path) {
  const std::string kind = io::get_string(j, path, "kind");
  return io::at_path(path, [&]() -> LinkFiber {
    if (kind == "module") {
      io::check_keys(j, path, {"kind", "module"});
      return fiber_module(module_from_json(io::need(j, path, "module"), path + ".module"));
    }
    if (kind == "open_cone") {
      io::check_keys(j, path, {"kind", "link"});
      return fiber_open_cone(link_from_json(io::need(j, path, "link"), path + ".link"));
    }
    if (kind == "compact") {
      io::check_keys(j, path, {"kind", "link"});
      return fiber_compact(link_from_json(io::need(j, path, "link"), path + ".link"));
    }
    if (kind == "partial_simplex") {
      io::check_keys(j, path, {"kind", "dim", "removed_facets"});
      return fiber_partial_simplex(io::get_int(j, path, "dim"), io::get_int(j, path, "removed_facets"));
    }
    throw ParseError(path + ".kind", "unknown fiber kind '" + kind + "'");
  });
}

inline Link link_from_json(const Json& j, const std::string& path) {
  const std::string tag = io::get_string(j, path, "tag");
  return io::at_path(path, [&]() -> Link {
    if (tag == "Space") {
      io::check_keys(j, path, {"tag", "space"});
      return Link::space(space_from_json(io::need(j, path, "space"), path + ".space"));
    }
    if (tag == "Simplex") {
      io::check_keys(j, path, {"tag", "k"});
      return Link::simplex(io::get_int(j, path, "k"));
    }
    if (tag == "SelfJoin") {
      io::check_keys(j, path, {"tag", "space", "k"});
      return Link::self_join(space_from_json(io::need(j, path, "space"), path + ".space"), io::get_int(j, path, "k"));
    }
    if (tag == "Join") {
      io::check_keys(j, path, {"tag", "left", "right"});
      return Link::join(link_from_json(io::need(j, path, "left"), path + ".left"),
                        link_from_json(io::need(j, path, "right"), path + ".right"));
    }
    if (tag == "Cone" || tag == "Susp") {
      io::check_keys(j, path, {"tag", "of"});
      const Link of = link_from_json(io::need(j, path, "of"), path + ".of");
      return tag == "Cone" ? Link::cone(of) : Link::susp(of);
    }
    if (tag == "MVUnion") {
      io::check_keys(j, path, {"tag", "pieces", "intersections"});
      const Json& p = io::need(j, path, "pieces");
      if (!p.is_array()) throw ParseError(path + ".pieces", "expected a list");
      std::vector<Link> pieces;
      for (std::size_t i = 0; i < p.size(); ++i) pieces.push_back(link_from_json(p[i], path + ".pieces[" + std::to_string(i) + "]"));
      std::map<std::vector<int>, Link> inter;
      if (j.contains("intersections")) {
        const Json& in = j["intersections"];
        if (!in.is_array()) throw ParseError(path + ".intersections", "expected a list");
        for (std::size_t i = 0; i < in.size(); ++i) {
          const std::string ip = path + ".intersections[" + std::to_string(i) + "]";
          io::check_keys(in[i], ip, {"indices", "link"});
          const Json& idx = io::need(in[i], ip, "indices");
          if (!idx.is_array()) throw ParseError(ip + ".indices", "expected a list of piece indices");
          std::vector<int> key;
          for (const auto& v : idx) {
            if (!v.is_number_integer()) throw ParseError(ip + ".indices", "expected integers");
            key.push_back(v.get<int>());
          }
          inter.emplace(key, link_from_json(io::need(in[i], ip, "link"), ip + ".link"));
        }
      }
      return Link::mv_union(std::move(pieces), std::move(inter));
    }
    if (tag == "Stratified") {
      io::check_keys(j, path, {"tag", "strata"});
      const Json& s = io::need(j, path, "strata");
      if (!s.is_array()) throw ParseError(path + ".strata", "expected a list");
      std::vector<LinkStratum> strata;
      for (std::size_t i = 0; i < s.size(); ++i) {
        const std::string sp = path + ".strata[" + std::to_string(i) + "]";
        io::check_keys(s[i], sp, {"base", "twist", "fiber"});
        strata.push_back({space_from_json(io::need(s[i], sp, "base"), sp + ".base"),
                          io::parse_twist(io::need(s[i], sp, "twist"), sp + ".twist"),
                          link_fiber_from_json(io::need(s[i], sp, "fiber"), sp + ".fiber")});
      }
      return Link::stratified(std::move(strata));
    }
    if (tag == "KnownLink") {
      io::check_keys(j, path, {"tag", "reduced", "provenance"});
      return Link::known(module_from_json(io::need(j, path, "reduced"), path + ".reduced"),
                         io::get_string(j, path, "provenance"));
    }
    throw ParseError(path + ".tag", "unknown link tag '" + tag + "'");
  });
}

// ---------------------------------------------------------------------------
// Spec

inline Json to_json(const StratumFiber& f) {
  switch (f.kind) {
    case StratumFiberKind::point: return {{"tag", "Point"}};
    case StratumFiberKind::open_simplex:
      return {{"tag", "OpenSimplex"}, {"vertices", f.vertices}, {"orientable", f.orientable}};
    case StratumFiberKind::open_cone: return {{"tag", "OpenCone"}, {"link", to_json(*f.link)}};
    case StratumFiberKind::final_column: {
      Json j = {{"tag", "FinalColumn"}};
      if (f.link) j["link"] = to_json(*f.link);
      return j;
    }
  }
  return {};
}

inline StratumFiber stratum_fiber_from_json(const Json& j, const std::string& path) {
  const std::string tag = io::get_string(j, path, "tag");
  return io::at_path(path, [&]() -> StratumFiber {
    if (tag == "Point") {
      io::check_keys(j, path, {"tag"});
      return StratumFiber::point();
    }
    if (tag == "OpenSimplex") {
      io::check_keys(j, path, {"tag", "vertices", "orientable"});
      return StratumFiber::open_simplex(io::get_int(j, path, "vertices"), io::get_bool(j, path, "orientable", false));
    }
    if (tag == "OpenCone") {
      io::check_keys(j, path, {"tag", "link"});
      return StratumFiber::open_cone(link_from_json(io::need(j, path, "link"), path + ".link"));
    }
    if (tag == "FinalColumn") {
      io::check_keys(j, path, {"tag", "link"});
      if (j.contains("link")) return StratumFiber::final_column(link_from_json(j["link"], path + ".link"));
      return StratumFiber::final_column();
    }
    throw ParseError(path + ".tag", "unknown fiber tag '" + tag + "'");
  });
}

inline Json to_json(const StratificationSpec& s) {
  Json strata = Json::array();
  for (const auto& st : s.strata)
    strata.push_back({{"p", st.p},
                      {"name", st.name},
                      {"base", to_json(st.base)},
                      {"twist", to_string(st.twist)},
                      {"L_dim", st.L_dim},
                      {"fiber", to_json(st.fiber)}});
  Json kd = Json::array();
  for (const auto& k : s.known_differentials) {
    Json m = Json::array();
    for (std::size_t r = 0; r < k.matrix.rows(); ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < k.matrix.cols(); ++c) row.push_back(static_cast<long long>(k.matrix(r, c)));
      m.push_back(row);
    }
    kd.push_back({{"from", {k.from.first, k.from.second}},
                  {"to", {k.to.first, k.to.second}},
                  {"matrix", m},
                  {"provenance", k.provenance}});
  }
  return {{"schema_version", s.schema_version},
          {"case_id", s.case_id},
          {"d", s.d},
          {"n", s.n},
          {"vector_field", s.vector_field},
          {"D", s.D},
          {"projectivize", s.projectivize},
          {"strata", strata},
          {"known_differentials", kd}};
}

inline std::pair<int, int> cell_from_json(const Json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
    throw ParseError(path, "expected [p, q]");
  return {j[0].get<int>(), j[1].get<int>()};
}

inline StratificationSpec spec_from_json(const Json& j) {
  const std::string root = "spec";
  io::check_keys(j, root, {"schema_version", "case_id", "d", "n", "vector_field", "D", "projectivize", "strata",
                           "known_differentials"});
  StratificationSpec s;
  s.schema_version = io::get_int(j, root, "schema_version");
  if (s.schema_version != 1) throw ParseError("schema_version", "unsupported schema version");
  s.case_id = io::get_string(j, root, "case_id");
  s.d = io::get_int(j, root, "d");
  s.n = io::get_int(j, root, "n");
  s.vector_field = io::get_bool(j, root, "vector_field", false);
  s.D = io::get_int(j, root, "D");
  s.projectivize = io::get_bool(j, root, "projectivize", true);
  const Json& strata = io::need(j, root, "strata");
  if (!strata.is_array()) throw ParseError("strata", "expected a list");
  for (std::size_t i = 0; i < strata.size(); ++i) {
    const std::string p = "strata[" + std::to_string(i) + "]";
    io::check_keys(strata[i], p, {"p", "name", "base", "twist", "L_dim", "fiber"});
    Stratum st;
    st.p = io::get_int(strata[i], p, "p");
    st.name = strata[i].contains("name") ? io::get_string(strata[i], p, "name") : std::string();
    st.base = space_from_json(io::need(strata[i], p, "base"), p + ".base");
    st.twist = io::parse_twist(io::need(strata[i], p, "twist"), p + ".twist");
    st.L_dim = io::get_int(strata[i], p, "L_dim");
    if (st.L_dim < 0) throw ParseError(p + ".L_dim", "negative dimension");
    st.fiber = stratum_fiber_from_json(io::need(strata[i], p, "fiber"), p + ".fiber");
    s.strata.push_back(std::move(st));
  }
  if (j.contains("known_differentials")) {
    const Json& kd = j["known_differentials"];
    if (!kd.is_array()) throw ParseError("known_differentials", "expected a list");
    for (std::size_t i = 0; i < kd.size(); ++i) {
      const std::string p = "known_differentials[" + std::to_string(i) + "]";
      io::check_keys(kd[i], p, {"from", "to", "matrix", "provenance"});
      KnownDifferential k;
      k.from = cell_from_json(io::need(kd[i], p, "from"), p + ".from");
      k.to = cell_from_json(io::need(kd[i], p, "to"), p + ".to");
      const Json& m = io::need(kd[i], p, "matrix");
      if (!m.is_array()) throw ParseError(p + ".matrix", "expected a list of rows");
      const std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
      k.matrix = IntegerMatrix(rows, cols);
      for (std::size_t r = 0; r < rows; ++r) {
        if (!m[r].is_array() || m[r].size() != cols) throw ParseError(p + ".matrix", "ragged matrix");
        for (std::size_t c = 0; c < cols; ++c) {
          if (!m[r][c].is_number_integer()) throw ParseError(p + ".matrix", "expected integers");
          k.matrix(r, c) = m[r][c].get<long long>();
        }
      }
      k.provenance = kd[i].contains("provenance") ? io::get_string(kd[i], p, "provenance") : std::string();
      s.known_differentials.push_back(std::move(k));
    }
  }
  validate_spec(s);
  return s;
}

/// Parses text; syntax errors carry the line number.
inline StratificationSpec parse_spec(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i)
      if (text[i] == '\n') ++line;
    throw ParseError("", std::string("malformed JSON: ") + e.what(), line);
  }
  return spec_from_json(j);
}

inline StratificationSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

inline void save_spec(const StratificationSpec& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::parse_error, "cannot write " + path);
  out << to_json(s).dump(2) << "\n";
}

}  // namespace hypcoh
