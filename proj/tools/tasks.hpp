#pragma once

// Task execution and expectation checks for problem documents.

#include "document.hpp"

#include <functional>

namespace dirac::cli {

struct RunConfig {
  std::size_t probes = 12;
  std::uint64_t seed = 0;
};

/// A result field that an `expect` entry may be compared against.
struct Comparable {
  std::variant<bool, std::size_t, std::string, std::pair<Polynomial, Space>, Family> value;
};

struct TaskOutcome {
  json result = json::object();
  std::map<std::string, Comparable> fields;
  std::optional<Family> primary;  // stored under the task's `as` name
  std::map<std::string, Family> extra;  // stored under `as` + "." + key
};

struct Document {
  std::string source;
  Space space;
  std::map<std::string, Value> values;
  std::optional<Submanifold> x;
  std::optional<Projection> p;
  std::vector<PolyVector> witness;
  bool has_witness = false;
  json tasks = json::array();
};

inline Document load_document(const json &doc) {
  if (!doc.is_object()) throw InputError("document: expected a JSON object");
  static const std::vector<std::string> keys = {"source", "manifold", "structures", "submanifold", "projection", "witness", "tasks"};
  for (const auto &[k, v] : doc.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw InputError("document: unknown key '" + k + "'");
  Document d;
  if (doc.contains("source")) {
    if (!doc["source"].is_string()) throw InputError("source: expected a string");
    d.source = doc["source"].get<std::string>();
  }
  d.space = parse_manifold(doc);
  if (doc.contains("structures")) {
    if (!doc["structures"].is_object()) throw InputError("structures: expected an object keyed by name");
    for (const auto &[name, body] : doc["structures"].items())
      d.values.emplace(name, parse_structure(d.space, body, "structures." + name));
  }
  if (doc.contains("submanifold")) d.x = parse_submanifold(d.space, doc["submanifold"]);
  const Space &xs = d.x ? d.x->intrinsic() : d.space;
  if (doc.contains("projection")) d.p = parse_projection(xs, doc["projection"]);
  if (doc.contains("witness")) {
    d.witness = parse_fields(d.space, doc["witness"], "witness");
    d.has_witness = true;
  }
  if (doc.contains("tasks")) {
    if (!doc["tasks"].is_array()) throw InputError("tasks: expected an array");
    d.tasks = doc["tasks"];
  }
  return d;
}

class Runner {
public:
  Runner(Document doc, RunConfig cfg) : doc_(std::move(doc)), cfg_(cfg) {}

  /// Runs every task; returns the report and whether all expectations passed.
  std::pair<json, bool> run() {
    json tasks = json::array();
    bool all = true;
    for (std::size_t i = 0; i < doc_.tasks.size(); ++i) {
      json t = run_task(doc_.tasks[i], i + 1);
      all = all && t["passed"].get<bool>();
      tasks.push_back(std::move(t));
    }
    json report{{"source", doc_.source}, {"seed", cfg_.seed}, {"probes", cfg_.probes}, {"passed", all}, {"tasks", tasks}};
    return {report, all};
  }

private:
  Document doc_;
  RunConfig cfg_;
  std::size_t index_ = 0;  // current task, 1-based

  [[noreturn]] void fail(const std::string &msg) const { throw InputError("task " + std::to_string(index_) + ": " + msg, index_); }

  const json &arg(const json &args, const char *key) const {
    if (!args.contains(key)) fail(std::string("missing argument '") + key + "'");
    return args[key];
  }

  const Value &value(const json &args, const char *key) const {
    const json &a = arg(args, key);
    if (!a.is_string()) fail(std::string("argument '") + key + "' must name a structure");
    auto it = doc_.values.find(a.get<std::string>());
    if (it == doc_.values.end()) fail("undeclared structure '" + a.get<std::string>() + "'");
    return it->second;
  }

  Family family(const json &args, const char *key) const {
    auto f = as_family(value(args, key));
    if (!f) fail(std::string("argument '") + key + "' is not a Lagrangian family, bivector or two-form");
    return *f;
  }

  template <class T> const T &typed(const json &args, const char *key, const char *what) const {
    const Value &v = value(args, key);
    auto p = std::get_if<T>(&v.data);
    if (!p) fail(std::string("argument '") + key + "' must be a " + what);
    return *p;
  }

  ProbeConfig probes(const json &args, const Space &sp) const {
    ProbeConfig c;
    c.count = cfg_.probes;
    c.seed = cfg_.seed;
    if (args.contains("probe_points")) {
      const json &pts = args["probe_points"];
      if (!pts.is_array()) fail("probe_points: expected an array of points");
      for (std::size_t k = 0; k < pts.size(); ++k) {
        if (!pts[k].is_array() || pts[k].size() != sp.dim())
          fail("probe_points[" + std::to_string(k) + "]: expected " + std::to_string(sp.dim()) + " coordinates");
        ProbePoint pt;
        for (const auto &c : pts[k]) pt.push_back(parse_constant(sp, c, "probe_points"));
        c.extra.push_back(std::move(pt));
      }
    }
    return c;
  }

  static bool inline_geometry(const json &args) { return args.contains("submanifold") || args.contains("projection"); }

  /// The document submanifold, or one given inline in the task arguments on the space `sp`.
  Submanifold submanifold(const json &args, const Space &sp) const {
    if (inline_geometry(args)) return args.contains("submanifold") ? parse_submanifold(sp, args["submanifold"]) : Submanifold::whole(sp);
    if (sp != doc_.space) fail("structure lives on " + std::to_string(sp.dim()) + " coordinates; give an inline submanifold");
    return doc_.x ? *doc_.x : Submanifold::whole(doc_.space);
  }

  Triangle triangle(const json &args, const Space &sp) const {
    Submanifold x = submanifold(args, sp);
    if (inline_geometry(args) && args.contains("projection")) return Triangle(x, parse_projection(x.intrinsic(), args["projection"]));
    if (!inline_geometry(args) && doc_.p) return Triangle(x, *doc_.p);
    std::vector<std::size_t> all(x.dim());
    for (std::size_t k = 0; k < all.size(); ++k) all[k] = k;
    return Triangle(x, Projection::keep(x.intrinsic(), all));
  }

  /// A named vector list, an inline array of vector fields on `sp`, or the document witness.
  std::vector<PolyVector> witness(const json &args, const Space &sp) const {
    if (args.contains("witness")) {
      if (args["witness"].is_array()) return parse_fields(sp, args["witness"], "witness");
      return typed<VectorList>(args, "witness", "vector list").fields;
    }
    if (!doc_.has_witness) fail("no witness declared");
    if (sp != doc_.space) fail("the document witness lives on another space; give an inline witness");
    return doc_.witness;
  }

  /// A declared bivector, or a family that is the graph of one.
  Bivector bivector(const json &args, const char *key) const {
    const Value &v = value(args, key);
    if (auto b = std::get_if<Bivector>(&v.data)) return *b;
    if (auto f = std::get_if<Family>(&v.data))
      if (auto b = as_bivector(*f)) return *b;
    fail(std::string("argument '") + key + "' is not a bivector or the graph of one");
  }

  static void put_family(TaskOutcome &o, const std::string &key, const Family &f) {
    o.result[key] = family_json(f);
    o.fields[key] = Comparable{f};
  }
  static void put_bool(TaskOutcome &o, const std::string &key, bool b) {
    o.result[key] = b;
    o.fields[key] = Comparable{b};
  }
  static void put_poly(TaskOutcome &o, const std::string &key, const Polynomial &p, const Space &sp) {
    o.result[key] = poly_json(p, sp);
    o.fields[key] = Comparable{std::make_pair(p, sp)};
  }

  static void put_involutivity(TaskOutcome &o, const std::string &prefix, const Involutivity &inv, const Space &sp) {
    o.result[prefix] = involutivity_json(inv, sp);
    o.fields[prefix + ".involutive"] = Comparable{inv.involutive};
    o.fields[prefix + ".residual"] = Comparable{std::make_pair(inv.residual, sp)};
  }

  void put_concurrence(TaskOutcome &o, const std::string &prefix, const ConcurrenceReport &c, const Space &sp) const {
    json r{{"weak", c.weak}, {"concurrent", c.concurrent}};
    o.fields[prefix + "weak"] = Comparable{c.weak};
    o.fields[prefix + "concurrent"] = Comparable{c.concurrent};
    if (c.product) {
      r["product"] = family_json(*c.product);
      o.fields[prefix + "product"] = Comparable{*c.product};
      r["residual"] = poly_json(c.involutivity.residual, sp);
      o.fields[prefix + "residual"] = Comparable{std::make_pair(c.involutivity.residual, sp)};
    } else {
      r["product_error"] = c.product_error;
    }
    if (c.smoothness) r["smoothness"] = smoothness_json(*c.smoothness);
    if (prefix.empty())
      for (auto &[k, v] : r.items()) o.result[k] = v;
    else
      o.result[prefix.substr(0, prefix.size() - 1)] = r;
  }

  TaskOutcome execute(const std::string &op, const json &args) {
    TaskOutcome o;
    if (op == "family") {
      Family f = family(args, "of");
      put_family(o, "family", f);
      o.primary = f;
    } else if (op == "equal") {
      put_bool(o, "equal", family_equal(family(args, "left"), family(args, "right")));
    } else if (op == "product") {
      const std::string kind = args.value("kind", "cotangent");
      Family l = family(args, "left"), r = family(args, "right");
      if (kind != "tangent" && kind != "cotangent") fail("product kind must be \"tangent\" or \"cotangent\"");
      Family f = kind == "tangent" ? tangent_product(l, r) : cotangent_product(l, r);
      put_family(o, "family", f);
      o.primary = f;
    } else if (op == "stretch" || op == "kernel" || op == "cokernel" || op == "sum" || op == "gauge" || op == "rescale") {
      Family f;
      if (op == "stretch") f = stretch(family(args, "family"), family(args, "iso"));
      if (op == "kernel") f = kernel(family(args, "family"));
      if (op == "cokernel") f = cokernel(family(args, "family"));
      if (op == "sum") f = family_sum(family(args, "left"), family(args, "right"));
      if (op == "gauge") f = gauge(family(args, "family"), typed<TwoForm>(args, "form", "two-form"));
      if (op == "rescale") {
        Family l = family(args, "family");
        f = rescale_covectors(parse_constant(l.space(), arg(args, "t"), "t"), l);
      }
      put_family(o, "family", f);
      o.primary = f;
    } else if (op == "involutive") {
      Family f = family(args, "family");
      Involutivity inv = is_involutive(f);
      put_involutivity(o, "involutivity", inv, f.space());
      put_bool(o, "involutive", inv.involutive);
      put_poly(o, "residual", inv.residual, f.space());
    } else if (op == "courant") {
      Family f = family(args, "family");
      const json &idx = arg(args, "indices");
      if (!idx.is_array() || idx.size() != 3) fail("indices: expected three 1-based frame indices");
      std::array<std::size_t, 3> ijk{};
      for (std::size_t k = 0; k < 3; ++k) {
        if (!idx[k].is_number_unsigned() || idx[k].get<std::size_t>() == 0) fail("indices: expected positive integers");
        ijk[k] = idx[k].get<std::size_t>() - 1;
      }
      put_poly(o, "value", courant_tensor(f, ijk[0], ijk[1], ijk[2]), f.space());
    } else if (op == "concur") {
      Family l = family(args, "left"), r = family(args, "right");
      const std::string mode = args.value("mode", "weak");
      if (mode != "weak" && mode != "full") fail("mode must be \"weak\" or \"full\"");
      ProbeConfig pc = probes(args, l.space());
      ConcurrenceReport c = concur(l, r, mode == "weak" ? ConcurMode::weak : ConcurMode::full, pc.points(l.n()), cfg_.seed);
      put_concurrence(o, "", c, l.space());
      if (c.product) o.primary = *c.product;
    } else if (op == "pullback") {
      Family l = family(args, "family");
      Submanifold x = submanifold(args, l.space());
      PullbackResult r = pullback(l, x, probes(args, x.intrinsic()));
      put_family(o, "family", r.family);
      o.result["smoothness"] = smoothness_json(r.smoothness);
      o.fields["constant_rank"] = Comparable{r.constant_rank()};
      o.fields["differs"] = Comparable{r.smoothness.count(ProbeStatus::differs)};
      o.primary = r.family;
    } else if (op == "pushforward") {
      Family l = family(args, "family");
      Triangle t = triangle(args, l.space());
      try {
        Family f = pushforward(l, t.p, cfg_.seed);
        put_bool(o, "projectable", true);
        put_family(o, "family", f);
        o.primary = f;
      } catch (const NotProjectable &e) {
        put_bool(o, "projectable", false);
        o.result["coefficient"] = e.coefficient;
        o.fields["coefficient"] = Comparable{e.coefficient};
      }
    } else if (op == "reduce") {
      Family l = family(args, "family");
      Triangle t = triangle(args, l.space());
      ReductionReport r = dirac_reduce(l, t, probes(args, t.x.intrinsic()));
      reduction_fields(o, "", r, t);
      if (r.reduced) o.primary = *r.reduced;
    } else if (op == "witness") {
      Family l = family(args, "family");
      Triangle t = triangle(args, l.space());
      WitnessReport w = check_witness(l, t, witness(args, l.space()), probes(args, t.x.intrinsic()));
      witness_fields(o, "", w, t.x.intrinsic());
    } else if (op == "mr") {
      const Space &sp = value(args, "bivector").space;
      Submanifold x = submanifold(args, sp);
      MRReport r = check_MR(bivector(args, "bivector"), x, witness(args, sp));
      put_bool(o, "mr1", r.mr1);
      put_bool(o, "mr1prime", r.mr1prime);
      put_bool(o, "mr2", r.mr2);
      put_bool(o, "passed", r.passed());
      put_involutivity(o, "mr2_certificate", r.mr2_certificate, x.intrinsic());
    } else if (op == "magri_N" || op == "magri_kernel" || op == "magri_M") {
      Family l = family(args, "left"), r = family(args, "right");
      Family f = op == "magri_N" ? magri_N(l, r) : op == "magri_kernel" ? magri_kernel(l, r) : magri_M(l, r);
      put_family(o, "family", f);
      o.primary = f;
    } else if (op == "magri_original") {
      const Value &lv = value(args, "left");
      Family f = magri_original(lv.space, bivector(args, "left"), bivector(args, "right"));
      put_family(o, "family", f);
      o.primary = f;
    } else if (op == "diamond") {
      const std::string kind = args.value("kind", "kernel");
      if (kind != "kernel" && kind != "magri") fail("diamond kind must be \"kernel\" or \"magri\"");
      DiamondReport rep = diamond(family(args, "left"), family(args, "right"), kind == "kernel" ? DiamondKind::kernel : DiamondKind::magri);
      put_family(o, "D_L", rep.dl);
      put_family(o, "D_R", rep.dr);
      json vertices = json::object();
      for (const auto &v : rep.vertices) {
        json vj{{"coords", v.coords}, {"l", family_json(v.l)}, {"r", family_json(v.r)}, {"weak", v.concurrence.weak}};
        o.fields[v.name + ".l"] = Comparable{v.l};
        o.fields[v.name + ".r"] = Comparable{v.r};
        o.fields[v.name + ".weak"] = Comparable{v.concurrence.weak};
        o.extra[v.name + ".l"] = v.l;
        o.extra[v.name + ".r"] = v.r;
        if (v.concurrence.product) {
          vj["product"] = family_json(*v.concurrence.product);
          o.fields[v.name + ".product"] = Comparable{*v.concurrence.product};
        }
        vertices[v.name] = vj;
      }
      o.result["vertices"] = vertices;
      put_bool(o, "side_poisson", rep.side_poisson);
      put_bool(o, "bottom_poisson", rep.bottom_poisson);
      put_bool(o, "all_concur", rep.all_concur());
      put_bool(o, "passed", rep.passed());
    } else if (op == "common_witness") {
      Family l = family(args, "left");
      Triangle t = triangle(args, l.space());
      CommonWitnessReport rep =
          check_common_witness(l, family(args, "right"), t, witness(args, l.space()), probes(args, t.x.intrinsic()));
      put_concurrence(o, "input.", rep.input, l.space());
      witness_fields(o, "left.", rep.wl, t.x.intrinsic());
      witness_fields(o, "right.", rep.wr, t.x.intrinsic());
      if (rep.rl) reduction_fields(o, "left.", *rep.rl, t);
      if (rep.rr) reduction_fields(o, "right.", *rep.rr, t);
      if (rep.reduced) put_concurrence(o, "reduced.", *rep.reduced, t.p.target());
      put_bool(o, "witnesses", rep.witnesses());
      put_bool(o, "conclusion_holds", rep.conclusion_holds());
    } else if (op == "complement") {
      Family l = family(args, "left"), r = family(args, "right");
      Submanifold x = submanifold(args, l.space());
      auto frame = [&](const char *key) {
        const json &a = arg(args, key);
        if (!a.is_array()) fail(std::string("argument '") + key + "' must be an array of sections");
        std::vector<GenSection> out;
        for (std::size_t k = 0; k < a.size(); ++k) out.push_back(parse_section(l.space(), a[k], std::string(key) + "[" + std::to_string(k) + "]"));
        return out;
      };
      ComplementSchemeReport rep = check_complement_scheme(l, r, x, frame("left_complement"), frame("right_complement"));
      put_bool(o, "left.decomposes", rep.cl.decomposes);
      put_bool(o, "right.decomposes", rep.cr.decomposes);
      put_involutivity(o, "left.complement", rep.cl.complement_involutivity, x.intrinsic());
      put_involutivity(o, "right.complement", rep.cr.complement_involutivity, x.intrinsic());
      put_concurrence(o, "induced.", rep.induced, x.intrinsic());
    } else if (op == "dirac_nijenhuis") {
      Family l = family(args, "family");
      DNReport r = is_dirac_nijenhuis(l, typed<Endomorphism>(args, "endomorphism", "endomorphism"));
      put_bool(o, "verdict", r.verdict());
      put_bool(o, "invariant", r.invariant);
      put_bool(o, "bracket_closed", r.bracket_closed);
      put_poly(o, "residual", r.residual, l.space());
      if (r.frame_index) o.result["frame_index"] = *r.frame_index + 1;
      if (r.generator_index) o.result["generator"] = "d/d" + l.space().coords[*r.generator_index];
    } else if (op == "torsion") {
      const Endomorphism &n = typed<Endomorphism>(args, "endomorphism", "endomorphism");
      const Space &sp = value(args, "endomorphism").space;
      json nonzero = json::array();
      for (std::size_t i = 0; i < n.dim(); ++i)
        for (std::size_t j = i + 1; j < n.dim(); ++j) {
          PolyVector t = torsion(n, i, j);
          GenSection s = GenSection::from_vector_field(t);
          if (!s.is_zero())
            nonzero.push_back(json{{"pair", json::array({sp.coords[i], sp.coords[j]})}, {"torsion", section_text(s, sp.coords)}});
        }
      put_bool(o, "nijenhuis", nonzero.empty());
      o.result["nonzero"] = nonzero;
    } else if (op == "shift") {
      Family l = family(args, "family");
      const json &k = arg(args, "k");
      if (!k.is_number_unsigned()) fail("k: expected a non-negative integer");
      const std::string side = args.value("side", "left");
      if (side != "left" && side != "right") fail("side must be \"left\" or \"right\"");
      Family f = shift(l, typed<Endomorphism>(args, "endomorphism", "endomorphism"), k.get<unsigned>(),
                       side == "left" ? ShiftSide::left : ShiftSide::right);
      put_family(o, "family", f);
      o.primary = f;
    } else {
      fail("unknown op '" + op + "'");
    }
    return o;
  }

  void reduction_fields(TaskOutcome &o, const std::string &prefix, const ReductionReport &r, const Triangle &t) const {
    put_family(o, prefix + "pulled", r.pulled.family);
    o.result[prefix + "pulled_smoothness"] = smoothness_json(r.pulled.smoothness);
    put_family(o, prefix + "stretched", r.stretched);
    put_involutivity(o, prefix + "stretched_involutivity", r.stretched_involutivity, t.x.intrinsic());
    put_involutivity(o, prefix + "along_involutivity", r.along_involutivity, t.x.intrinsic());
    put_bool(o, prefix + "reducible", r.reducible());
    put_bool(o, prefix + "criteria_agree", r.criteria_agree());
    if (r.reduced) {
      put_family(o, prefix + "reduced", *r.reduced);
      put_bool(o, prefix + "round_trip", r.round_trip);
    } else {
      o.result[prefix + "failure"] = r.failure;
      o.result[prefix + "coefficient"] = r.failure_coefficient;
      o.fields[prefix + "coefficient"] = Comparable{r.failure_coefficient};
    }
  }

  static void witness_fields(TaskOutcome &o, const std::string &prefix, const WitnessReport &w, const Space &xs) {
    put_bool(o, prefix + "wit1", w.wit1);
    put_bool(o, prefix + "wit2", w.wit2);
    put_bool(o, prefix + "wit3", w.wit3);
    put_bool(o, prefix + "passed", w.passed());
    o.result[prefix + "wit1_evidence"] = smoothness_json(w.wit1_evidence);
    put_involutivity(o, prefix + "wit2_certificate", w.wit2_certificate, xs);
    put_poly(o, prefix + "wit3_residual", w.wit3_residual, xs);
  }

  static std::string error_kind(const Error &e) {
    if (dynamic_cast<const NotProjectable *>(&e)) return "NotProjectable";
    if (dynamic_cast<const NotLagrangian *>(&e)) return "NotLagrangian";
    if (dynamic_cast<const ProductNotGenericallyLagrangian *>(&e)) return "ProductNotGenericallyLagrangian";
    if (dynamic_cast<const StretchRankDefect *>(&e)) return "StretchRankDefect";
    if (dynamic_cast<const ShiftRankDefect *>(&e)) return "ShiftRankDefect";
    if (dynamic_cast<const RankDefect *>(&e)) return "RankDefect";
    if (dynamic_cast<const NotAdapted *>(&e)) return "NotAdapted";
    if (dynamic_cast<const NotCoordinateSpanned *>(&e)) return "NotCoordinateSpanned";
    if (dynamic_cast<const DimensionMismatch *>(&e)) return "DimensionMismatch";
    if (dynamic_cast<const IndexOutOfRange *>(&e)) return "IndexOutOfRange";
    if (dynamic_cast<const FieldModeError *>(&e)) return "FieldModeError";
    if (dynamic_cast<const InvalidArgument *>(&e)) return "InvalidArgument";
    return "Error";
  }

  json check(const std::string &key, const json &expected, const TaskOutcome &o) {
    auto it = o.fields.find(key);
    if (it == o.fields.end()) fail("expect key '" + key + "' is not a result of this task");
    json c{{"key", key}, {"expected", expected}};
    bool pass = false;
    std::visit(
        [&](const auto &v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, bool>) {
            if (!expected.is_boolean()) fail("expect." + key + ": expected a boolean");
            pass = expected.get<bool>() == v;
            c["actual"] = v;
          } else if constexpr (std::is_same_v<T, std::size_t>) {
            pass = expected.is_number_unsigned() && expected.get<std::size_t>() == v;
            c["actual"] = v;
          } else if constexpr (std::is_same_v<T, std::string>) {
            pass = expected.is_string() && expected.get<std::string>() == v;
            c["actual"] = v;
          } else if constexpr (std::is_same_v<T, std::pair<Polynomial, Space>>) {
            pass = parse_poly(v.second, expected, "expect." + key) == v.first;
            c["actual"] = poly_json(v.first, v.second);
          } else {
            std::optional<Family> f;
            if (expected.is_string()) {
              auto named = doc_.values.find(expected.get<std::string>());
              if (named == doc_.values.end()) fail("expect." + key + ": undeclared structure '" + expected.get<std::string>() + "'");
              f = as_family(named->second);
            } else {
              f = as_family(parse_structure(v.space(), expected, "expect." + key));
            }
            if (!f) fail("expect." + key + ": expected a Lagrangian structure");
            pass = family_equal(*f, v);
            if (!pass) c["actual"] = family_json(v);
          }
        },
        it->second.value);
    c["pass"] = pass;
    return c;
  }

  json run_task(const json &task, std::size_t index) {
    index_ = index;
    if (!task.is_object() || !task.contains("op") || !task["op"].is_string()) fail("expected an object with a string 'op'");
    for (const auto &[k, v] : task.items())
      if (k != "op" && k != "args" && k != "as" && k != "expect" && k != "note") fail("unknown key '" + k + "'");
    const std::string op = task["op"].get<std::string>();
    const json args = task.value("args", json::object());
    if (!args.is_object()) fail("args: expected an object");
    const json expect = task.value("expect", json::object());
    if (!expect.is_object()) fail("expect: expected an object");

    json out{{"index", index}, {"op", op}};
    if (task.contains("as")) out["as"] = task["as"];
    if (task.contains("note")) out["note"] = task["note"];
    TaskOutcome o;
    std::optional<std::string> error;
    try {
      o = execute(op, args);
    } catch (const InputError &) {
      throw;
    } catch (const Error &e) {
      if (!expect.contains("error")) fail(std::string(e.what()));
      error = error_kind(e);
      o.result = json{{"error", *error}, {"message", e.what()}};
      o.fields["error"] = Comparable{*error};
    }
    out["result"] = o.result;

    json checks = json::array();
    bool passed = true;
    for (const auto &[key, val] : expect.items()) {
      if (key == "error" && !error) {
        checks.push_back(json{{"key", "error"}, {"expected", val}, {"actual", nullptr}, {"pass", false}});
        passed = false;
        continue;
      }
      json c = check(key, val, o);
      passed = passed && c["pass"].get<bool>();
      checks.push_back(std::move(c));
    }
    out["checks"] = checks;
    out["passed"] = passed;

    if (task.contains("as")) {
      if (!task["as"].is_string()) fail("as: expected a name");
      const std::string name = task["as"].get<std::string>();
      if (o.primary) doc_.values.insert_or_assign(name, Value{o.primary->space(), *o.primary, "family"});
      for (const auto &[k, f] : o.extra) doc_.values.insert_or_assign(name + "." + k, Value{f.space(), f, "family"});
    }
    return out;
  }
};

} // namespace dirac::cli
