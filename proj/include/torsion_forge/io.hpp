#ifndef TORSION_FORGE_IO_HPP
#define TORSION_FORGE_IO_HPP

// JSON reading and writing for groups, complexes, cohomology bases, Morse
// systems and geometric inputs. Complex numbers are [re, im] pairs (a plain
// number is read as a real); matrices are arrays of rows. Field errors name
// the JSON path, parse errors the line and column.

#include "torsion_forge/comparison.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace tforge::io {

using json = nlohmann::ordered_json;

[[noreturn]] inline void fail(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::parse, "at " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

inline json parse_text(const std::string& text, const std::string& source = "<input>") {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::parse, source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
  }
}

inline std::string read_text(const std::string& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, file + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json load_json(const std::string& file) { return parse_text(read_text(file), file); }

inline void write_text(const std::string& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_input, file + ": cannot write file");
  out << text;
}

/// Runs `f`, prefixing field errors with the file they came from.
template <class F>
auto with_source(const std::string& source, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse && std::string(e.what()).rfind("at ", 0) == 0)
      throw Error(ErrorKind::parse, source + ": " + e.what());
    throw;
  }
}

// ---------------------------------------------------------------------------
// Scalars and matrices

inline json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline double read_real(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

inline long long read_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<long long>();
}

inline cplx read_complex(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(path, "expected a number or an [re, im] pair");
}

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path, "missing field '" + key + "'");
  return *it;
}

inline const json* optional_field(const json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

inline const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  return j;
}

inline json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Reads a matrix; negative `rows`/`cols` mean unconstrained. An empty
/// array stands for a matrix with no rows of the expected shape.
inline CMatrix read_matrix(const json& j, const std::string& path, Eigen::Index rows = -1, Eigen::Index cols = -1) {
  array_at(j, path);
  const auto r = static_cast<Eigen::Index>(j.size());
  if (r == 0) {
    if (rows > 0) fail(path, "expected " + std::to_string(rows) + " rows, got 0");
    return CMatrix::Zero(0, std::max<Eigen::Index>(cols, 0));
  }
  const std::string row0 = path + "/0";
  const auto c = static_cast<Eigen::Index>(array_at(j[0], row0).size());
  if (rows >= 0 && r != rows) fail(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(r));
  if (cols >= 0 && c != cols) fail(path, "expected " + std::to_string(cols) + " columns, got " + std::to_string(c));
  CMatrix m(r, c);
  for (Eigen::Index a = 0; a < r; ++a) {
    const std::string rp = path + "/" + std::to_string(a);
    const json& row = array_at(j[static_cast<std::size_t>(a)], rp);
    if (static_cast<Eigen::Index>(row.size()) != c) fail(rp, "ragged matrix row");
    for (Eigen::Index b = 0; b < c; ++b)
      m(a, b) = read_complex(row[static_cast<std::size_t>(b)], rp + "/" + std::to_string(b));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Groups

inline json group_to_json(const Symmetry& s) {
  json j;
  j["elements"] = s.g().labels();
  j["mult"] = s.g().table();
  json chars = json::array();
  for (const auto& ir : s.chars().irreps) {
    json values = json::array();
    for (cplx v : ir.values) values.push_back(to_json(v));
    chars.push_back({{"name", ir.name}, {"degree", ir.degree}, {"values", values}});
  }
  j["characters"] = chars;
  return j;
}

/// A built-in name ("Z2", "S3", ...), {"builtin": name}, or a full table.
/// Tables are validated before use.
inline Symmetry read_group(const json& j, const std::string& path = "") {
  if (j.is_string()) return builtin_group(j.get<std::string>());
  if (const json* b = optional_field(j, "builtin")) {
    if (!b->is_string()) fail(path + "/builtin", "expected a group name");
    return builtin_group(b->get<std::string>());
  }
  std::vector<std::string> labels;
  const json& el = array_at(field(j, "elements", path), path + "/elements");
  for (std::size_t k = 0; k < el.size(); ++k) {
    if (!el[k].is_string()) fail(path + "/elements/" + std::to_string(k), "expected a label");
    labels.push_back(el[k].get<std::string>());
  }
  std::vector<std::vector<ElementIndex>> mult;
  const json& mt = array_at(field(j, "mult", path), path + "/mult");
  for (std::size_t a = 0; a < mt.size(); ++a) {
    const std::string rp = path + "/mult/" + std::to_string(a);
    std::vector<ElementIndex> row;
    for (std::size_t b = 0; b < array_at(mt[a], rp).size(); ++b) {
      const long long v = read_int(mt[a][b], rp + "/" + std::to_string(b));
      if (v < 0) fail(rp + "/" + std::to_string(b), "negative element index");
      row.push_back(static_cast<ElementIndex>(v));
    }
    mult.push_back(std::move(row));
  }
  auto g = std::make_shared<FiniteGroup>(labels, mult);
  if (Diagnostic d = validate_group(*g); !d) throw Error(ErrorKind::validation, "invalid group: " + d.message);
  auto t = std::make_shared<CharacterTable>();
  const json& ch = array_at(field(j, "characters", path), path + "/characters");
  for (std::size_t k = 0; k < ch.size(); ++k) {
    const std::string cp = path + "/characters/" + std::to_string(k);
    Irrep ir;
    const json& name = field(ch[k], "name", cp);
    if (!name.is_string()) fail(cp + "/name", "expected a string");
    ir.name = name.get<std::string>();
    ir.degree = static_cast<int>(read_int(field(ch[k], "degree", cp), cp + "/degree"));
    const json& vals = array_at(field(ch[k], "values", cp), cp + "/values");
    for (std::size_t v = 0; v < vals.size(); ++v) ir.values.push_back(read_complex(vals[v], cp + "/values/" + std::to_string(v)));
    t->irreps.push_back(std::move(ir));
  }
  if (Diagnostic d = validate_characters(*g, *t); !d)
    throw Error(ErrorKind::validation, "invalid character table: " + d.message);
  return Symmetry{g, t};
}

// ---------------------------------------------------------------------------
// Complexes

inline json complex_to_json(const BilinearComplex& c) {
  json j;
  j["dims"] = c.dims;
  json d = json::array(), gram = json::array();
  for (const auto& m : c.d) d.push_back(matrix_to_json(m));
  for (const auto& m : c.gram) gram.push_back(matrix_to_json(m));
  j["d"] = d;
  j["gram"] = gram;
  if (c.action) {
    json mats = json::object();
    const FiniteGroup& g = c.action->symmetry.g();
    for (ElementIndex k = 0; k < g.order(); ++k) {
      json per = json::array();
      for (const auto& m : c.action->matrices[k]) per.push_back(matrix_to_json(m));
      mats[g.label(k)] = per;
    }
    j["action"] = {{"group", group_to_json(c.action->symmetry)}, {"matrices", mats}};
  }
  return j;
}

/// `group` is used when the action does not name its own group.
inline BilinearComplex read_complex_json(const json& j, const std::string& path = "",
                                         const std::optional<Symmetry>& group = std::nullopt) {
  BilinearComplex c;
  const json& dims = array_at(field(j, "dims", path), path + "/dims");
  if (dims.empty()) fail(path + "/dims", "need at least one degree");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const long long v = read_int(dims[i], path + "/dims/" + std::to_string(i));
    if (v < 0) fail(path + "/dims/" + std::to_string(i), "negative dimension");
    c.dims.push_back(static_cast<Eigen::Index>(v));
  }
  const std::size_t n = c.dims.size();
  const json* d = optional_field(j, "d");
  if (d && array_at(*d, path + "/d").size() != n - 1)
    fail(path + "/d", "expected " + std::to_string(n - 1) + " differentials");
  for (std::size_t i = 0; i + 1 < n; ++i)
    c.d.push_back(d ? read_matrix((*d)[i], path + "/d/" + std::to_string(i), c.dims[i + 1], c.dims[i])
                    : CMatrix::Zero(c.dims[i + 1], c.dims[i]));
  const json* gram = optional_field(j, "gram");
  if (gram && array_at(*gram, path + "/gram").size() != n) fail(path + "/gram", "expected one form per degree");
  for (std::size_t i = 0; i < n; ++i)
    c.gram.push_back(gram ? read_matrix((*gram)[i], path + "/gram/" + std::to_string(i), c.dims[i], c.dims[i])
                          : identity(c.dims[i]));
  if (const json* a = optional_field(j, "action")) {
    const std::string ap = path + "/action";
    Symmetry s;
    if (const json* gj = optional_field(*a, "group")) s = read_group(*gj, ap + "/group");
    else if (group) s = *group;
    else fail(ap, "action needs a group (inline or supplied separately)");
    const json& mats = field(*a, "matrices", ap);
    if (!mats.is_object()) fail(ap + "/matrices", "expected an object keyed by element label");
    ComplexAction act{s, {}};
    for (ElementIndex k = 0; k < s.g().order(); ++k) {
      const std::string label = s.g().label(k);
      const std::string mp = ap + "/matrices/" + label;
      auto it = mats.find(label);
      std::vector<CMatrix> per;
      if (it == mats.end()) {
        if (k != s.g().identity()) fail(ap + "/matrices", "missing element '" + label + "'");
        for (std::size_t i = 0; i < n; ++i) per.push_back(identity(c.dims[i]));
      } else {
        if (array_at(*it, mp).size() != n) fail(mp, "expected one matrix per degree");
        for (std::size_t i = 0; i < n; ++i)
          per.push_back(read_matrix((*it)[i], mp + "/" + std::to_string(i), c.dims[i], c.dims[i]));
      }
      act.matrices.push_back(std::move(per));
    }
    for (auto it = mats.begin(); it != mats.end(); ++it) s.g().index_of(it.key());
    c.action = std::move(act);
  }
  return c;
}

// ---------------------------------------------------------------------------
// Cohomology bases

inline json basis_to_json(const CohomologyBasis& h) {
  json reps = json::array();
  for (const auto& m : h.representatives) reps.push_back(matrix_to_json(m));
  return {{"betti", h.betti}, {"representatives", reps}};
}

/// Representatives are stored as matrices whose columns are the vectors;
/// `dims` fixes the row count of empty degrees.
inline CohomologyBasis read_basis(const json& j, const std::string& path, const std::vector<Eigen::Index>& dims) {
  CohomologyBasis h;
  const json& reps = array_at(field(j, "representatives", path), path + "/representatives");
  if (reps.size() != dims.size()) fail(path + "/representatives", "expected one matrix per degree");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::string rp = path + "/representatives/" + std::to_string(i);
    CMatrix m = read_matrix(reps[i], rp);
    if (m.rows() == 0) m = CMatrix::Zero(dims[i], 0);
    else if (m.rows() != dims[i]) fail(rp, "expected " + std::to_string(dims[i]) + " rows");
    h.betti.push_back(m.cols());
    h.representatives.push_back(std::move(m));
  }
  if (const json* b = optional_field(j, "betti")) {
    for (std::size_t i = 0; i < dims.size() && i < b->size(); ++i)
      if (read_int((*b)[i], path + "/betti/" + std::to_string(i)) != h.betti[i])
        fail(path + "/betti/" + std::to_string(i), "does not match the number of representatives");
  }
  return h;
}

/// Either one basis (for the trivial block) or {"blocks": {name: basis}}.
/// Block bases are in coordinates of the block subcomplexes, so their
/// dimensions come from `c`.
inline BlockGenerators read_generators(const json& j, const BilinearComplex& c, const std::string& path = "",
                                       const Tolerances& tol = {}) {
  BlockGenerators out;
  const json* blocks = optional_field(j, "blocks");
  if (!blocks) {
    out.emplace_back("trivial", read_basis(j, path, c.dims));
    return out;
  }
  if (!c.action) fail(path + "/blocks", "per-block bases need a complex with a group action");
  const CharacterTable& t = c.action->symmetry.chars();
  for (const IrrepBlock& b : irrep_blocks(t)) {
    const std::string name = block_name(t, b);
    auto it = blocks->find(name);
    if (it == blocks->end()) continue;
    const EmbeddedSubcomplex sub = block_subcomplex(c, b, tol);
    out.emplace_back(name, read_basis(*it, path + "/blocks/" + name, sub.complex.dims));
  }
  for (auto it = blocks->begin(); it != blocks->end(); ++it)
    if (!find_generator(out, it.key())) fail(path + "/blocks", "unknown block '" + it.key() + "'");
  return out;
}

// ---------------------------------------------------------------------------
// Morse systems

inline json morse_to_json(const MorseSystem& ms) {
  json j;
  j["dimension"] = ms.dimension;
  if (ms.symmetry) j["group"] = group_to_json(*ms.symmetry);
  json pts = json::array();
  for (const auto& p : ms.points)
    pts.push_back({{"name", p.name}, {"index", p.index}, {"value", p.value}, {"fiber_gram", matrix_to_json(p.fiber_gram)}});
  j["points"] = pts;
  json inst = json::array();
  for (const auto& i : ms.instantons)
    inst.push_back({{"from", ms.points.at(i.from).name},
                    {"to", ms.points.at(i.to).name},
                    {"sign", i.sign},
                    {"transport", matrix_to_json(i.transport)}});
  j["instantons"] = inst;
  json els = json::object();
  const Symmetry s = ms.sym();
  for (ElementIndex g = 0; g < ms.elements.size(); ++g) {
    const ElementData& e = ms.elements[g];
    if (e.action.empty() && e.fixed.empty() && e.components.empty()) continue;
    json ej;
    json act = json::array();
    for (const auto& a : e.action)
      act.push_back({{"image", ms.points.at(a.image).name}, {"eps", a.eps}, {"fiber_map", matrix_to_json(a.fiber_map)}});
    ej["action"] = act;
    json fixed = json::array();
    for (const auto& [x, fd] : e.fixed) {
      json normal = json::array();
      for (const auto& na : fd.normal)
        normal.push_back({{"beta", na.beta}, {"dim", na.dim}, {"n_plus", na.n_plus}, {"n_minus", na.n_minus}});
      fixed.push_back({{"point", ms.points.at(x).name}, {"ind_g", fd.ind_g}, {"normal", normal}});
    }
    ej["fixed"] = fixed;
    json comps = json::array();
    for (const auto& c : e.components) {
      json names = json::array();
      for (auto x : c.points) names.push_back(ms.points.at(x).name);
      comps.push_back({{"points", names}, {"dim", c.dim}, {"euler_characteristic", c.euler_characteristic}});
    }
    ej["components"] = comps;
    els[s.g().label(g)] = ej;
  }
  if (!els.empty()) j["elements"] = els;
  return j;
}

inline MorseSystem read_morse(const json& j, const std::string& path = "",
                              const std::optional<Symmetry>& group = std::nullopt) {
  MorseSystem ms;
  ms.dimension = static_cast<int>(read_int(field(j, "dimension", path), path + "/dimension"));
  if (const json* g = optional_field(j, "group")) ms.symmetry = read_group(*g, path + "/group");
  else if (group) ms.symmetry = *group;
  const json& pts = array_at(field(j, "points", path), path + "/points");
  std::map<std::string, std::size_t> by_name;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const std::string pp = path + "/points/" + std::to_string(k);
    CriticalPoint p;
    const json& name = field(pts[k], "name", pp);
    if (!name.is_string()) fail(pp + "/name", "expected a string");
    p.name = name.get<std::string>();
    if (by_name.count(p.name)) fail(pp + "/name", "duplicate point name '" + p.name + "'");
    by_name[p.name] = k;
    p.index = static_cast<int>(read_int(field(pts[k], "index", pp), pp + "/index"));
    if (p.index < 0) fail(pp + "/index", "negative Morse index");
    p.value = read_real(field(pts[k], "value", pp), pp + "/value");
    p.fiber_gram = read_matrix(field(pts[k], "fiber_gram", pp), pp + "/fiber_gram");
    if (p.fiber_gram.rows() != p.fiber_gram.cols()) fail(pp + "/fiber_gram", "expected a square matrix");
    ms.points.push_back(std::move(p));
  }
  auto point = [&](const json& v, const std::string& p) {
    if (!v.is_string()) fail(p, "expected a point name");
    auto it = by_name.find(v.get<std::string>());
    if (it == by_name.end()) fail(p, "unknown point '" + v.get<std::string>() + "'");
    return it->second;
  };
  if (const json* inst = optional_field(j, "instantons")) {
    for (std::size_t k = 0; k < array_at(*inst, path + "/instantons").size(); ++k) {
      const std::string ip = path + "/instantons/" + std::to_string(k);
      const json& e = (*inst)[k];
      Instanton i;
      i.from = point(field(e, "from", ip), ip + "/from");
      i.to = point(field(e, "to", ip), ip + "/to");
      i.sign = static_cast<int>(read_int(field(e, "sign", ip), ip + "/sign"));
      i.transport = read_matrix(field(e, "transport", ip), ip + "/transport", ms.points[i.to].fiber_dim(),
                                ms.points[i.from].fiber_dim());
      ms.instantons.push_back(std::move(i));
    }
  }
  if (const json* els = optional_field(j, "elements")) {
    if (!els->is_object()) fail(path + "/elements", "expected an object keyed by element label");
    const Symmetry s = ms.sym();
    ms.elements.assign(s.g().order(), ElementData{});
    for (auto it = els->begin(); it != els->end(); ++it) {
      const std::string ep = path + "/elements/" + it.key();
      ElementIndex g = 0;
      try {
        g = s.g().index_of(it.key());
      } catch (const Error&) {
        fail(ep, "unknown group element");
      }
      ElementData e;
      const json& ej = it.value();
      if (const json* act = optional_field(ej, "action")) {
        if (array_at(*act, ep + "/action").size() != ms.points.size())
          fail(ep + "/action", "expected one entry per critical point");
        for (std::size_t x = 0; x < ms.points.size(); ++x) {
          const std::string ap = ep + "/action/" + std::to_string(x);
          PointAction a;
          a.image = point(field((*act)[x], "image", ap), ap + "/image");
          a.eps = static_cast<int>(read_int(field((*act)[x], "eps", ap), ap + "/eps"));
          a.fiber_map = read_matrix(field((*act)[x], "fiber_map", ap), ap + "/fiber_map",
                                    ms.points[a.image].fiber_dim(), ms.points[x].fiber_dim());
          e.action.push_back(std::move(a));
        }
      }
      if (const json* fixed = optional_field(ej, "fixed")) {
        for (std::size_t k = 0; k < array_at(*fixed, ep + "/fixed").size(); ++k) {
          const std::string fp = ep + "/fixed/" + std::to_string(k);
          const json& fj = (*fixed)[k];
          const std::size_t x = point(field(fj, "point", fp), fp + "/point");
          FixedPointData fd;
          fd.ind_g = static_cast<int>(read_int(field(fj, "ind_g", fp), fp + "/ind_g"));
          if (const json* normal = optional_field(fj, "normal")) {
            for (std::size_t a = 0; a < array_at(*normal, fp + "/normal").size(); ++a) {
              const std::string np = fp + "/normal/" + std::to_string(a);
              const json& nj = (*normal)[a];
              NormalAngle na;
              na.beta = read_real(field(nj, "beta", np), np + "/beta");
              na.dim = static_cast<int>(read_int(field(nj, "dim", np), np + "/dim"));
              na.n_plus = static_cast<int>(read_int(field(nj, "n_plus", np), np + "/n_plus"));
              na.n_minus = static_cast<int>(read_int(field(nj, "n_minus", np), np + "/n_minus"));
              fd.normal.push_back(na);
            }
          }
          if (e.fixed.count(x)) fail(fp + "/point", "duplicate fixed-point entry");
          e.fixed[x] = std::move(fd);
        }
      }
      if (const json* comps = optional_field(ej, "components")) {
        for (std::size_t k = 0; k < array_at(*comps, ep + "/components").size(); ++k) {
          const std::string cp = ep + "/components/" + std::to_string(k);
          const json& cj = (*comps)[k];
          FixedComponent c;
          const json& names = array_at(field(cj, "points", cp), cp + "/points");
          for (std::size_t a = 0; a < names.size(); ++a) c.points.push_back(point(names[a], cp + "/points/" + std::to_string(a)));
          c.dim = static_cast<int>(read_int(field(cj, "dim", cp), cp + "/dim"));
          c.euler_characteristic = read_int(field(cj, "euler_characteristic", cp), cp + "/euler_characteristic");
          e.components.push_back(std::move(c));
        }
      }
      ms.elements[g] = std::move(e);
    }
  }
  return ms;
}

// ---------------------------------------------------------------------------
// Geometric inputs

inline json geometric_to_json(const GeometricInputs& gi) {
  return {{"mq_integral", to_json(gi.mq_integral)},
          {"euler_log_integral", to_json(gi.euler_log_integral)},
          {"cs_integral", to_json(gi.cs_integral)},
          {"f_euler_integral", to_json(gi.f_euler_integral)}};
}

/// Missing integrals are zero.
inline GeometricInputs read_geometric(const json& j, const std::string& path = "") {
  if (!j.is_object()) fail(path, "expected an object");
  GeometricInputs gi;
  auto get = [&](const char* key, cplx& out) {
    if (const json* v = optional_field(j, key)) {
      out = read_complex(*v, path + "/" + key);
      if (!std::isfinite(out.real()) || !std::isfinite(out.imag())) fail(path + "/" + key, "not finite");
    }
  };
  get("mq_integral", gi.mq_integral);
  get("euler_log_integral", gi.euler_log_integral);
  get("cs_integral", gi.cs_integral);
  get("f_euler_integral", gi.f_euler_integral);
  for (auto it = j.begin(); it != j.end(); ++it)
    if (it.key() != "mq_integral" && it.key() != "euler_log_integral" && it.key() != "cs_integral" &&
        it.key() != "f_euler_integral")
      fail(path + "/" + it.key(), "unknown geometric input");
  return gi;
}

// ---------------------------------------------------------------------------
// File helpers

inline Symmetry load_group(const std::string& file) {
  return with_source(file, [&] { return read_group(load_json(file)); });
}
inline BilinearComplex load_complex(const std::string& file, const std::optional<Symmetry>& group = std::nullopt) {
  return with_source(file, [&] { return read_complex_json(load_json(file), "", group); });
}
inline MorseSystem load_morse(const std::string& file, const std::optional<Symmetry>& group = std::nullopt) {
  return with_source(file, [&] { return read_morse(load_json(file), "", group); });
}
inline GeometricInputs load_geometric(const std::string& file) {
  return with_source(file, [&] { return read_geometric(load_json(file)); });
}

}  // namespace tforge::io

#endif  // TORSION_FORGE_IO_HPP
