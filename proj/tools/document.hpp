#pragma once

// Problem documents: JSON parsing into spaces, structures, submanifolds and projections.

#include <dirac/nijenhuis.hpp>
#include <dirac/reduction.hpp>

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace dirac::cli {

using json = nlohmann::ordered_json;

/// Malformed or inconsistent input. `task` is the 1-based task index when the error belongs to one.
struct InputError : std::runtime_error {
  InputError(const std::string &msg, std::optional<std::size_t> t = std::nullopt) : std::runtime_error(msg), task(t) {}
  std::optional<std::size_t> task;
};

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_column(const std::string &text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline json parse_json(const std::string &text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error &e) {
    // nlohmann reports the offset one past the offending character.
    auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    std::string what = e.what();
    auto pos = what.find("syntax error");
    throw InputError("JSON parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     (pos == std::string::npos ? what : what.substr(pos)));
  }
}

struct VectorList {
  std::vector<PolyVector> fields;
};

/// A declared or computed value together with the space it lives on.
struct Value {
  Space space;
  std::variant<Family, Bivector, TwoForm, Endomorphism, VectorList> data;
  std::string kind;  // family, bivector, two_form, endomorphism, vectors
};

inline Polynomial parse_poly(const Space &sp, const json &j, const std::string &where) {
  if (!j.is_string()) throw InputError(where + ": expected a polynomial string");
  try {
    return sp.parse(j.get<std::string>());
  } catch (const ParseError &e) {
    throw InputError(where + ": " + e.what());
  } catch (const Error &e) {
    throw InputError(where + ": " + e.what());
  }
}

inline Scalar parse_constant(const Space &sp, const json &j, const std::string &where) {
  Polynomial p = parse_poly(sp, j, where);
  if (!p.is_constant()) throw InputError(where + ": expected a constant");
  return p.is_zero() ? Scalar(0) : p.constant_term();
}

inline std::size_t coord_index(const Space &sp, const json &j, const std::string &where) {
  if (!j.is_string()) throw InputError(where + ": expected a coordinate name");
  const std::string name = j.get<std::string>();
  for (std::size_t k = 0; k < sp.dim(); ++k)
    if (sp.coords[k] == name) return k;
  throw InputError(where + ": unknown coordinate '" + name + "'");
}

/// Components as an array of length n, or an object keyed by coordinate name (absent means 0).
inline PolyVector parse_components(const Space &sp, const json &j, const std::string &where) {
  PolyVector v(sp.dim(), sp.zero());
  if (j.is_array()) {
    if (j.size() != sp.dim())
      throw InputError(where + ": expected " + std::to_string(sp.dim()) + " components, got " + std::to_string(j.size()));
    for (std::size_t k = 0; k < j.size(); ++k) v[k] = parse_poly(sp, j[k], where + "[" + std::to_string(k) + "]");
  } else if (j.is_object()) {
    for (const auto &[key, val] : j.items()) v[coord_index(sp, json(key), where)] = parse_poly(sp, val, where + "." + key);
  } else {
    throw InputError(where + ": expected an array or an object of components");
  }
  return v;
}

inline GenSection parse_section(const Space &sp, const json &j, const std::string &where) {
  if (!j.is_object()) throw InputError(where + ": expected an object with 'vec' and/or 'cov'");
  for (const auto &[key, val] : j.items())
    if (key != "vec" && key != "cov") throw InputError(where + ": unknown key '" + key + "'");
  GenSection s = GenSection::zero(sp.dim(), sp.dim());
  if (j.contains("vec")) s.vec = parse_components(sp, j["vec"], where + ".vec");
  if (j.contains("cov")) s.cov = parse_components(sp, j["cov"], where + ".cov");
  return s;
}

inline std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> parse_wedges(const Space &sp, const json &j,
                                                                                 const std::string &where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of [coord, coord, coefficient] triples");
  std::vector<std::tuple<std::size_t, std::size_t, Polynomial>> out;
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string w = where + "[" + std::to_string(t) + "]";
    if (!j[t].is_array() || j[t].size() != 3) throw InputError(w + ": expected [coord, coord, coefficient]");
    out.emplace_back(coord_index(sp, j[t][0], w), coord_index(sp, j[t][1], w), parse_poly(sp, j[t][2], w));
  }
  return out;
}

inline std::vector<PolyVector> parse_fields(const Space &sp, const json &j, const std::string &where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of vector fields");
  std::vector<PolyVector> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(parse_components(sp, j[k], where + "[" + std::to_string(k) + "]"));
  return out;
}

/// One structure declaration: exactly one of frame, bivector, two_form, distribution, full,
/// endomorphism, vectors.
inline Value parse_structure(const Space &sp, const json &j, const std::string &where) {
  if (!j.is_object() || j.size() != 1) throw InputError(where + ": expected an object with exactly one kind key");
  const auto &[key, body] = *j.items().begin();
  const std::string w = where + "." + key;
  const std::size_t n = sp.dim();
  try {
    if (key == "frame") {
      if (!body.is_array()) throw InputError(w + ": expected an array of sections");
      std::vector<GenSection> frame;
      for (std::size_t k = 0; k < body.size(); ++k) frame.push_back(parse_section(sp, body[k], w + "[" + std::to_string(k) + "]"));
      return {sp, Family(sp, frame), "family"};
    }
    if (key == "bivector") return {sp, Bivector::from_wedges(n, n, parse_wedges(sp, body, w)), "bivector"};
    if (key == "two_form") return {sp, TwoForm::from_wedges(n, n, parse_wedges(sp, body, w)), "two_form"};
    if (key == "distribution") return {sp, graph_of_distribution(sp, parse_fields(sp, body, w)), "family"};
    if (key == "vectors") return {sp, VectorList{parse_fields(sp, body, w)}, "vectors"};
    if (key == "full") {
      if (body == "tangent") return {sp, full_tangent(sp), "family"};
      if (body == "cotangent") return {sp, full_cotangent(sp), "family"};
      throw InputError(w + ": expected \"tangent\" or \"cotangent\"");
    }
    if (key == "endomorphism") {
      // Column j lists the components of N(∂_j).
      if (!body.is_array() || body.size() != n) throw InputError(w + ": expected " + std::to_string(n) + " columns");
      std::vector<PolyVector> cols;
      for (std::size_t k = 0; k < n; ++k) cols.push_back(parse_components(sp, body[k], w + "[" + std::to_string(k) + "]"));
      return {sp, Endomorphism(PolyMatrix::from_columns(cols, n, n)), "endomorphism"};
    }
  } catch (const InputError &) {
    throw;
  } catch (const Error &e) {
    throw InputError(w + ": " + e.what());
  }
  throw InputError(where + ": unknown structure kind '" + key + "'");
}

/// Families, bivectors and two-forms all define a Lagrangian family.
inline std::optional<Family> as_family(const Value &v) {
  if (auto f = std::get_if<Family>(&v.data)) return *f;
  if (auto b = std::get_if<Bivector>(&v.data)) return graph_of_bivector(v.space, *b);
  if (auto w = std::get_if<TwoForm>(&v.data)) return graph_of_two_form(v.space, *w);
  return std::nullopt;
}

inline Space parse_manifold(const json &doc) {
  if (!doc.contains("manifold")) throw InputError("document: missing 'manifold'");
  const json &m = doc["manifold"];
  if (!m.is_object()) throw InputError("manifold: expected an object");
  Field field = Field::rational;
  if (m.contains("field")) {
    if (m["field"] == "gaussian")
      field = Field::gaussian;
    else if (m["field"] != "rational")
      throw InputError("manifold.field: expected \"rational\" or \"gaussian\"");
  }
  if (m.contains("coords")) {
    if (!m["coords"].is_array()) throw InputError("manifold.coords: expected an array of names");
    std::vector<std::string> names;
    for (const auto &c : m["coords"]) {
      if (!c.is_string()) throw InputError("manifold.coords: expected strings");
      names.push_back(c.get<std::string>());
    }
    if (m.contains("dim") && m["dim"] != names.size()) throw InputError("manifold: 'dim' disagrees with 'coords'");
    return Space{names, field};
  }
  if (!m.contains("dim") || !m["dim"].is_number_unsigned()) throw InputError("manifold: expected 'dim' or 'coords'");
  return Space::standard(m["dim"].get<std::size_t>(), field);
}

/// {"slice": {coord: constant}} or {"graph": {coord: polynomial in the remaining coordinates}}.
inline Submanifold parse_submanifold(const Space &sp, const json &j) {
  if (!j.is_object() || j.size() != 1) throw InputError("submanifold: expected {\"slice\": ...} or {\"graph\": ...}");
  const auto &[key, body] = *j.items().begin();
  if (!body.is_object()) throw InputError("submanifold." + key + ": expected an object keyed by coordinate");
  try {
    if (key == "slice") {
      std::map<std::size_t, Scalar> fixed;
      for (const auto &[c, v] : body.items())
        fixed.emplace(coord_index(sp, json(c), "submanifold.slice"), parse_constant(sp, v, "submanifold.slice." + c));
      return Submanifold::slice(sp, fixed);
    }
    if (key == "graph") {
      std::map<std::size_t, Polynomial> dep;
      for (const auto &[c, v] : body.items())
        dep.emplace(coord_index(sp, json(c), "submanifold.graph"), parse_poly(sp, v, "submanifold.graph." + c));
      return Submanifold::graph(sp, dep);
    }
  } catch (const InputError &) {
    throw;
  } catch (const Error &e) {
    throw InputError(std::string("submanifold: ") + e.what());
  }
  throw InputError("submanifold: unknown kind '" + key + "'");
}

/// {"keep": [coords]} or {"linear": [{"name": y, "form": {coord: constant}}]} on the
/// intrinsic coordinates of the submanifold.
inline Projection parse_projection(const Space &source, const json &j) {
  if (!j.is_object() || j.size() != 1) throw InputError("projection: expected {\"keep\": ...} or {\"linear\": ...}");
  const auto &[key, body] = *j.items().begin();
  if (!body.is_array()) throw InputError("projection." + key + ": expected an array");
  try {
    if (key == "keep") {
      std::vector<std::size_t> kept;
      for (const auto &c : body) kept.push_back(coord_index(source, c, "projection.keep"));
      return Projection::keep(source, kept);
    }
    if (key == "linear") {
      std::vector<std::pair<std::string, dense::Vector>> forms;
      for (std::size_t k = 0; k < body.size(); ++k) {
        const std::string w = "projection.linear[" + std::to_string(k) + "]";
        const json &f = body[k];
        if (!f.is_object() || !f.contains("name") || !f["name"].is_string() || !f.contains("form"))
          throw InputError(w + ": expected {\"name\": ..., \"form\": ...}");
        if (!f["form"].is_object()) throw InputError(w + ".form: expected an object keyed by coordinate");
        dense::Vector row(source.dim(), Scalar(0));
        for (const auto &[c, v] : f["form"].items()) row[coord_index(source, json(c), w + ".form")] = parse_constant(source, v, w + ".form." + c);
        forms.emplace_back(f["name"].get<std::string>(), std::move(row));
      }
      return Projection::linear(source, forms);
    }
  } catch (const InputError &) {
    throw;
  } catch (const Error &e) {
    throw InputError(std::string("projection: ") + e.what());
  }
  throw InputError("projection: unknown kind '" + key + "'");
}

// ---- output ----

inline json poly_json(const Polynomial &p, const Space &sp) { return p.str(sp.coords); }

inline json family_json(const Family &f) {
  json frame = json::array();
  for (const auto &s : f.frame()) {
    json vec = json::array(), cov = json::array();
    for (const auto &p : s.vec) vec.push_back(poly_json(p, f.space()));
    for (const auto &p : s.cov) cov.push_back(poly_json(p, f.space()));
    frame.push_back(json{{"text", section_text(s, f.space().coords)}, {"vec", vec}, {"cov", cov}});
  }
  return json{{"coords", f.space().coords}, {"rank", f.rank()}, {"frame", frame}};
}

inline json point_json(const ProbePoint &pt) {
  json a = json::array();
  for (const auto &c : pt) a.push_back(c.str());
  return a;
}

inline json smoothness_json(const SmoothnessReport &s) {
  json failures = json::array();
  for (const auto &p : s.probes)
    if (p.status == ProbeStatus::differs)
      failures.push_back(json{{"point", point_json(p.point)}, {"frame_rank", p.frame_rank}, {"fiber_dim", p.fiber_dim}});
  return json{{"constant_rank", s.constant_rank()},
              {"agrees", s.count(ProbeStatus::agrees)},
              {"limit_agrees", s.count(ProbeStatus::limit_agrees)},
              {"differs", s.count(ProbeStatus::differs)},
              {"skipped", s.count(ProbeStatus::skipped)},
              {"failures", failures}};
}

inline json involutivity_json(const Involutivity &inv, const Space &sp) {
  json idx = json::array();
  for (auto i : inv.indices) idx.push_back(i + 1);
  return json{{"involutive", inv.involutive}, {"residual", poly_json(inv.residual, sp)}, {"indices", idx}};
}

} // namespace dirac::cli
