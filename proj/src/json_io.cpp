#include "coverforge/json_io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace coverforge::io {

namespace {

[[noreturn]] void malformed(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Malformed, where + ": " + what);
}

const json& member(const json& j, const char* key, const std::string& where) {
  if (!j.is_object()) malformed(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) malformed(where, std::string("missing \"") + key + "\"");
  return *it;
}

const json& array_at(const json& j, const char* key, const std::string& where) {
  const json& a = member(j, key, where);
  if (!a.is_array()) malformed(where + "/" + key, "expected an array");
  return a;
}

std::size_t count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 0) malformed(where, "expected a nonnegative integer");
  return j.get<std::size_t>();
}

long integer(const json& j, const std::string& where) {
  if (!j.is_number_integer()) malformed(where, "expected an integer");
  return j.get<long>();
}

std::string text(const json& j, const std::string& where) {
  if (!j.is_string()) malformed(where, "expected a string");
  return j.get<std::string>();
}

Extended decode_extended(const json& j, const std::string& where) {
  try {
    return parse_extended(text(j, where));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Malformed && std::string(e.what()).rfind(where, 0) == 0) throw;
    malformed(where, e.what());
  }
}

Box decode_box(const json& j, const std::string& where) {
  if (!j.is_array()) malformed(where, "expected a list of intervals");
  std::vector<Interval> axes;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string w = where + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != 2) malformed(w, "expected [lo, hi]");
    axes.push_back({decode_extended(j[i][0], w + "/0"), decode_extended(j[i][1], w + "/1")});
  }
  try {
    return Box(std::move(axes));
  } catch (const Error& e) {
    malformed(where, e.what());
  }
}

LatticeFamily decode_family(const json& j, const std::string& where) {
  const std::size_t dim = count(member(j, "dim", where), where + "/dim");
  const std::size_t arity = count(member(j, "index_arity", where), where + "/index_arity");
  const json& t = array_at(j, "template", where);
  if (t.size() != dim) malformed(where + "/template", "one constraint list per axis is required");
  std::vector<std::vector<AxisConstraint>> axes(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    const std::string w = where + "/template/" + std::to_string(i);
    if (!t[i].is_array()) malformed(w, "expected a constraint list");
    for (std::size_t k = 0; k < t[i].size(); ++k) {
      const std::string wk = w + "/" + std::to_string(k);
      const json& c = t[i][k];
      AxisConstraint a{decode_extended(member(c, "lo", wk), wk + "/lo"), decode_extended(member(c, "hi", wk), wk + "/hi"),
                       static_cast<int>(integer(member(c, "coord", wk), wk + "/coord")),
                       decode_rational(member(c, "period", wk), wk + "/period")};
      if (a.coord >= static_cast<int>(arity)) malformed(wk + "/coord", "lattice coordinate out of range");
      axes[i].push_back(a);
    }
  }
  try {
    return LatticeFamily(dim, arity, std::move(axes));
  } catch (const Error& e) {
    malformed(where, e.what());
  }
}

PLFunction decode_pl(const json& j, const std::string& where) {
  const json& xs = array_at(j, "xs", where);
  const json& ys = array_at(j, "ys", where);
  if (xs.size() != ys.size()) malformed(where, "xs and ys differ in length");
  std::vector<Rational> x, y;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    x.push_back(decode_rational(xs[i], where + "/xs/" + std::to_string(i)));
    y.push_back(decode_rational(ys[i], where + "/ys/" + std::to_string(i)));
  }
  PLFunction::Tail tail = PLFunction::Tail::Constant;
  if (j.contains("tail")) {
    const std::string t = text(j["tail"], where + "/tail");
    if (t == "linear") tail = PLFunction::Tail::Linear;
    else if (t != "constant") malformed(where + "/tail", "expected \"constant\" or \"linear\"");
  }
  try {
    return PLFunction(std::move(x), std::move(y), tail);
  } catch (const Error& e) {
    malformed(where, e.what());
  }
}

RadialMap decode_map(const json& j, const std::string& where) {
  RadialMap m;
  m.dim = count(member(j, "dim", where), where + "/dim");
  m.b = decode_pl(member(j, "b", where), where + "/b");
  m.dilation = decode_rational(member(j, "dilation", where), where + "/dilation");
  if (m.dilation <= 0) malformed(where + "/dilation", "dilation must be positive");
  return m;
}

// Fields in first-use order; children precede parents.
class FieldWriter {
 public:
  std::size_t add(Field f) {
    if (auto it = ids_.find(f); it != ids_.end()) return it->second;
    json node{{"op", op_name(f->op)}, {"dim", f->dim}};
    if (!f->args.empty()) {
      json args = json::array();
      for (Field a : f->args) args.push_back(add(a));
      node["args"] = args;
    }
    switch (f->op) {
      case Op::Const: node["value"] = encode(f->value); break;
      case Op::Coord: node["axis"] = f->coord; break;
      case Op::Tent: node["box"] = encode(f->box); break;
      case Op::LatticeTent: node["family"] = encode(f->family); break;
      case Op::PlCompose: node["pl"] = encode(f->pl); break;
      default: break;
    }
    const std::size_t id = nodes_.size();
    nodes_.push_back(std::move(node));
    ids_.emplace(f, id);
    return id;
  }
  json table() const { return nodes_; }

 private:
  std::map<Field, std::size_t> ids_;
  json nodes_ = json::array();
};

class FieldReader {
 public:
  FieldReader(const json& doc, const std::string& where) {
    if (!doc.contains("fields")) return;
    const json& t = array_at(doc, "fields", where);
    for (std::size_t i = 0; i < t.size(); ++i) nodes_.push_back(read(t[i], where + "/fields/" + std::to_string(i)));
  }
  Field at(const json& id, const std::string& where) const {
    const std::size_t k = count(id, where);
    if (k >= nodes_.size()) malformed(where, "field reference out of range");
    return nodes_[k];
  }

 private:
  Field read(const json& n, const std::string& where) {
    const std::string op = text(member(n, "op", where), where + "/op");
    const std::size_t dim = count(member(n, "dim", where), where + "/dim");
    std::vector<Field> args;
    if (n.contains("args")) {
      const json& a = array_at(n, "args", where);
      for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t k = count(a[i], where + "/args/" + std::to_string(i));
        if (k >= nodes_.size()) malformed(where + "/args/" + std::to_string(i), "argument must precede its node");
        args.push_back(nodes_[k]);
      }
    }
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) malformed(where + "/args", "wrong number of arguments for " + op);
    };
    try {
      Field f = nullptr;
      if (op == "const") f = fld::constant(dim, decode_rational(member(n, "value", where), where + "/value"));
      else if (op == "coord") {
        const long axis = integer(member(n, "axis", where), where + "/axis");
        if (axis < 0 || static_cast<std::size_t>(axis) >= dim) malformed(where + "/axis", "axis out of range");
        f = fld::coord(dim, static_cast<std::size_t>(axis));
      } else if (op == "add") arity(1, SIZE_MAX), f = fld::add(args);
      else if (op == "sub") arity(2, 2), f = fld::sub(args[0], args[1]);
      else if (op == "mul") arity(1, SIZE_MAX), f = fld::mul(args);
      else if (op == "div") arity(2, 2), f = fld::div(args[0], args[1]);
      else if (op == "min") arity(1, SIZE_MAX), f = fld::min(args);
      else if (op == "max") arity(1, SIZE_MAX), f = fld::max(args);
      else if (op == "pos") arity(1, 1), f = fld::pos_part(args[0]);
      else if (op == "clamp01") arity(1, 1), f = fld::clamp01(args[0]);
      else if (op == "tent") f = fld::tent(decode_box(member(n, "box", where), where + "/box"));
      else if (op == "lattice_tent") f = fld::lattice_tent(decode_family(member(n, "family", where), where + "/family"));
      else if (op == "pl") arity(1, 1), f = fld::compose(decode_pl(member(n, "pl", where), where + "/pl"), args[0]);
      else malformed(where + "/op", "unknown field operation \"" + op + "\"");
      if (f->dim != dim) malformed(where + "/dim", "dimension disagrees with the operands");
      return f;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Malformed) throw;
      malformed(where, e.what());
    }
  }

  std::vector<Field> nodes_;
};

json encode_set(const OpenSet& s, FieldWriter& fw) {
  json j{{"dim", s.dim()}};
  if (s.kind() == OpenSet::Kind::Field) {
    j["positive"] = fw.add(s.field());
    return j;
  }
  json boxes = json::array();
  for (const auto& b : s.box_list()) boxes.push_back(encode(b));
  j["boxes"] = boxes;
  if (!s.families().empty()) {
    json fams = json::array();
    for (const auto& f : s.families()) fams.push_back(encode(f));
    j["families"] = fams;
  }
  return j;
}

OpenSet decode_set(const json& j, const FieldReader& fr, const std::string& where) {
  const std::size_t dim = count(member(j, "dim", where), where + "/dim");
  try {
    if (j.contains("positive")) {
      const Field f = fr.at(j["positive"], where + "/positive");
      if (f->dim != dim) malformed(where, "field dimension differs from the set");
      return OpenSet::positive(f);
    }
    std::vector<Box> boxes;
    const json& b = array_at(j, "boxes", where);
    for (std::size_t i = 0; i < b.size(); ++i) {
      boxes.push_back(decode_box(b[i], where + "/boxes/" + std::to_string(i)));
      if (boxes.back().dim() != dim) malformed(where + "/boxes/" + std::to_string(i), "box dimension differs from the set");
    }
    std::vector<LatticeFamily> fams;
    if (j.contains("families")) {
      const json& f = array_at(j, "families", where);
      for (std::size_t i = 0; i < f.size(); ++i) fams.push_back(decode_family(f[i], where + "/families/" + std::to_string(i)));
    }
    return fams.empty() ? OpenSet::boxes(dim, std::move(boxes)) : OpenSet::symbolic(dim, std::move(fams), std::move(boxes));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Malformed) throw;
    malformed(where, e.what());
  }
}

json encode_cover(const Cover& c, FieldWriter& fw) {
  json j{{"ambient", encode_set(c.ambient, fw)}};
  json elems = json::array();
  for (const auto& e : c.elements) elems.push_back(encode_set(e, fw));
  j["elements"] = elems;
  if (!c.schemas.empty()) {
    json s = json::array();
    for (const auto& f : c.schemas) s.push_back(encode(f));
    j["schemas"] = s;
  }
  if (c.partition) {
    json p = json::array();
    for (Field f : *c.partition) p.push_back(fw.add(f));
    j["partition"] = p;
  }
  if (!c.labels.empty()) j["labels"] = c.labels;
  if (c.image_of) j["image_of"] = encode(*c.image_of);
  return j;
}

Cover decode_cover_body(const json& j, const FieldReader& fr, const std::string& where) {
  Cover c;
  c.ambient = decode_set(member(j, "ambient", where), fr, where + "/ambient");
  const json& e = array_at(j, "elements", where);
  for (std::size_t i = 0; i < e.size(); ++i) {
    c.elements.push_back(decode_set(e[i], fr, where + "/elements/" + std::to_string(i)));
    if (c.elements.back().dim() != c.dim()) malformed(where + "/elements/" + std::to_string(i), "dimension differs from the ambient");
  }
  if (j.contains("schemas")) {
    const json& s = array_at(j, "schemas", where);
    for (std::size_t i = 0; i < s.size(); ++i) c.schemas.push_back(decode_family(s[i], where + "/schemas/" + std::to_string(i)));
  }
  if (j.contains("partition")) {
    const json& p = array_at(j, "partition", where);
    if (p.size() != c.elements.size()) malformed(where + "/partition", "one field per element is required");
    std::vector<Field> fs;
    for (std::size_t i = 0; i < p.size(); ++i) fs.push_back(fr.at(p[i], where + "/partition/" + std::to_string(i)));
    c.partition = fs;
  }
  if (j.contains("labels")) {
    const json& l = array_at(j, "labels", where);
    for (std::size_t i = 0; i < l.size(); ++i) c.labels.push_back(text(l[i], where + "/labels/" + std::to_string(i)));
  }
  if (j.contains("image_of")) c.image_of = decode_map(j["image_of"], where + "/image_of");
  return c;
}

json encode_index(const Index& m) { return json(m); }

Index decode_index(const json& j, const std::string& where) {
  if (!j.is_array()) malformed(where, "expected an index list");
  Index m;
  for (std::size_t i = 0; i < j.size(); ++i) m.push_back(integer(j[i], where + "/" + std::to_string(i)));
  return m;
}

json encode_ref(const ElementRef& r) {
  json j{{"index", r.index}};
  if (r.schema >= 0) j["schema"] = r.schema, j["instance"] = encode_index(r.instance);
  return j;
}

ElementRef decode_ref(const json& j, const std::string& where) {
  ElementRef r;
  r.index = count(member(j, "index", where), where + "/index");
  if (j.contains("schema")) {
    r.schema = integer(j["schema"], where + "/schema");
    r.instance = decode_index(member(j, "instance", where), where + "/instance");
  }
  return r;
}

json encode_node(const Cert& c, FieldWriter& fw) {
  json j{{"kind", node_kind_name(c->kind)}, {"cover", encode_cover(c->cover, fw)}};
  if (!c->children.empty()) {
    json ch = json::array();
    for (const auto& k : c->children) ch.push_back(encode_node(k, fw));
    j["children"] = ch;
  }
  if (!c->refinement.empty()) {
    json r = json::array();
    for (const auto& e : c->refinement) r.push_back(encode_ref(e));
    j["refinement"] = r;
  }
  if (!c->lattice_refinement.empty()) {
    json r = json::array();
    for (const auto& [m, e] : c->lattice_refinement) r.push_back({{"instance", encode_index(m)}, {"element", encode_ref(e)}});
    j["lattice_refinement"] = r;
  }
  if (c->map) j["map"] = encode(*c->map);
  if (c->kind == NodeKind::CubeSchema) j["cube_dim"] = c->cube_dim;
  if (c->slab_axis) j["slab_axis"] = *c->slab_axis;
  return j;
}

NodeKind decode_kind(const json& j, const std::string& where) {
  const std::string k = text(j, where);
  for (NodeKind n : {NodeKind::TwoElement, NodeKind::Disjoint, NodeKind::Coarsen, NodeKind::Compose, NodeKind::Iso, NodeKind::CubeSchema})
    if (k == node_kind_name(n)) return n;
  malformed(where, "unknown node kind \"" + k + "\"");
}

Cert decode_node(const json& j, const FieldReader& fr, const std::string& where) {
  CertNode n{decode_kind(member(j, "kind", where), where + "/kind"), decode_cover_body(member(j, "cover", where), fr, where + "/cover"),
             {}, {}, {}, {}, 0, {}};
  if (j.contains("children")) {
    const json& ch = array_at(j, "children", where);
    for (std::size_t i = 0; i < ch.size(); ++i) n.children.push_back(decode_node(ch[i], fr, where + "/children/" + std::to_string(i)));
  }
  if (j.contains("refinement")) {
    const json& r = array_at(j, "refinement", where);
    for (std::size_t i = 0; i < r.size(); ++i) n.refinement.push_back(decode_ref(r[i], where + "/refinement/" + std::to_string(i)));
  }
  if (j.contains("lattice_refinement")) {
    const json& r = array_at(j, "lattice_refinement", where);
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string w = where + "/lattice_refinement/" + std::to_string(i);
      n.lattice_refinement.emplace(decode_index(member(r[i], "instance", w), w + "/instance"),
                                   decode_ref(member(r[i], "element", w), w + "/element"));
    }
  }
  if (j.contains("map")) n.map = decode_map(j["map"], where + "/map");
  if (j.contains("cube_dim")) n.cube_dim = count(j["cube_dim"], where + "/cube_dim");
  if (j.contains("slab_axis")) n.slab_axis = count(j["slab_axis"], where + "/slab_axis");
  return std::make_shared<const CertNode>(std::move(n));
}

json encode_matrix(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(encode(m(i, k)));
    rows.push_back(row);
  }
  return rows;
}

Matrix decode_matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  if (!j.is_array()) malformed(where, "expected a matrix as a list of rows");
  Matrix m(rows, cols);
  if (j.empty() && (rows == 0 || cols == 0)) return m;
  if (j.size() != rows) malformed(where, "expected " + std::to_string(rows) + " rows");
  for (std::size_t i = 0; i < rows; ++i) {
    const std::string w = where + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != cols) malformed(w, "expected " + std::to_string(cols) + " entries");
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = decode_rational(j[i][k], w + "/" + std::to_string(k));
  }
  return m;
}

std::size_t open_named(const Site& s, const json& j, const std::string& where) {
  const std::string name = text(j, where);
  try {
    return s.index(name);
  } catch (const Error&) {
    malformed(where, "unknown open \"" + name + "\"");
  }
}

}  // namespace

json encode(const Rational& q) { return to_string(q); }

json encode(const Extended& e) { return to_string(e); }

Rational decode_rational(const json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  try {
    return parse_rational(text(j, where));
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Malformed && std::string(e.what()).rfind(where, 0) == 0) throw;
    malformed(where, e.what());
  }
}

json encode(const Box& b) {
  json axes = json::array();
  for (const auto& iv : b.axes()) axes.push_back({encode(iv.lo), encode(iv.hi)});
  return axes;
}

json encode(const LatticeFamily& f) {
  json t = json::array();
  for (const auto& axis : f.axes()) {
    json cs = json::array();
    for (const auto& c : axis) cs.push_back({{"lo", encode(c.lo)}, {"hi", encode(c.hi)}, {"coord", c.coord}, {"period", encode(c.period)}});
    t.push_back(cs);
  }
  return {{"dim", f.dim()}, {"index_arity", f.arity()}, {"template", t}};
}

json encode(const PLFunction& p) {
  json xs = json::array(), ys = json::array();
  for (const auto& x : p.xs()) xs.push_back(encode(x));
  for (const auto& y : p.ys()) ys.push_back(encode(y));
  return {{"xs", xs}, {"ys", ys}, {"tail", p.tail() == PLFunction::Tail::Linear ? "linear" : "constant"}};
}

json encode(const RadialMap& m) { return {{"dim", m.dim}, {"b", encode(m.b)}, {"dilation", encode(m.dilation)}}; }

json encode(const Rescaler& r) {
  return {{"dim", r.dim}, {"profile", encode(r.profile)}, {"fixed_point", encode(r.fixed_point)}, {"b", encode(r.b)}};
}

Rescaler decode_rescaler(const json& j) {
  Rescaler r;
  r.dim = count(member(j, "dim", ""), "/dim");
  r.profile = decode_pl(member(j, "profile", ""), "/profile");
  r.fixed_point = decode_rational(member(j, "fixed_point", ""), "/fixed_point");
  r.b = decode_pl(member(j, "b", ""), "/b");
  return r;
}

json encode(const Cover& c) {
  FieldWriter fw;
  json body = encode_cover(c, fw);
  return {{"fields", fw.table()}, {"cover", body}};
}

Cover decode_cover(const json& j) {
  const FieldReader fr(j, "");
  return decode_cover_body(member(j, "cover", ""), fr, "/cover");
}

json encode(const Cert& c) {
  FieldWriter fw;
  json root = encode_node(c, fw);
  return {{"fields", fw.table()}, {"root", root}};
}

Cert decode_cert(const json& j) {
  const FieldReader fr(j, "");
  return decode_node(member(j, "root", ""), fr, "/root");
}

json encode(const Site& s) {
  json opens = json::array();
  for (std::size_t i = 0; i < s.size(); ++i) opens.push_back(s.name(i));
  json below = json::array();
  for (const auto& [a, b] : s.generators()) below.push_back({s.name(a), s.name(b)});
  json j{{"opens", opens}, {"below", below}};
  if (s.empty()) j["empty"] = s.name(*s.empty());
  json covers = json::array();
  for (const auto& c : s.covers) {
    json members = json::array();
    for (auto m : c.members) members.push_back(s.name(m));
    covers.push_back({{"top", s.name(c.top)}, {"members", members}});
  }
  j["covers"] = covers;
  return j;
}

Site decode_site(const json& j) {
  const json& o = array_at(j, "opens", "");
  std::vector<std::string> names;
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < o.size(); ++i) {
    names.push_back(text(o[i], "/opens/" + std::to_string(i)));
    if (!index.emplace(names.back(), i).second) malformed("/opens/" + std::to_string(i), "duplicate open \"" + names.back() + "\"");
  }
  auto lookup = [&](const json& n, const std::string& where) {
    auto it = index.find(text(n, where));
    if (it == index.end()) malformed(where, "unknown open \"" + n.get<std::string>() + "\"");
    return it->second;
  };
  std::vector<std::pair<std::size_t, std::size_t>> below;
  if (j.contains("below")) {
    const json& b = array_at(j, "below", "");
    for (std::size_t i = 0; i < b.size(); ++i) {
      const std::string w = "/below/" + std::to_string(i);
      if (!b[i].is_array() || b[i].size() != 2) malformed(w, "expected [smaller, larger]");
      below.emplace_back(lookup(b[i][0], w + "/0"), lookup(b[i][1], w + "/1"));
    }
  }
  std::optional<std::size_t> empty;
  if (j.contains("empty") && !j["empty"].is_null()) empty = lookup(j["empty"], "/empty");
  Site s;
  try {
    s = Site(names, below, empty);
  } catch (const Error& e) {
    malformed("/below", e.what());
  }
  if (j.contains("covers")) {
    const json& c = array_at(j, "covers", "");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string w = "/covers/" + std::to_string(i);
      SiteCover sc{lookup(member(c[i], "top", w), w + "/top"), {}};
      const json& m = array_at(c[i], "members", w);
      for (std::size_t k = 0; k < m.size(); ++k) {
        sc.members.push_back(lookup(m[k], w + "/members/" + std::to_string(k)));
        if (!s.leq(sc.members.back(), sc.top)) malformed(w + "/members/" + std::to_string(k), "member is not below the top");
      }
      s.covers.push_back(sc);
    }
  }
  return s;
}

json encode(const Presheaf& f) {
  const Site& s = f.site();
  json sections = json::array();
  for (std::size_t w = 0; w < s.size(); ++w) {
    json d = json::array();
    for (std::size_t n = 0; n + 1 < f.degrees(); ++n) d.push_back(encode_matrix(f.at(w).differential(n)));
    std::vector<std::size_t> dims;
    for (std::size_t n = 0; n < f.degrees(); ++n) dims.push_back(f.dim(w, n));
    sections.push_back({{"open", s.name(w)}, {"dims", dims}, {"d", d}});
  }
  json res = json::array();
  for (const auto& [edge, mats] : f.given()) {
    json maps = json::array();
    for (const auto& m : mats) maps.push_back(encode_matrix(m));
    res.push_back({{"from", s.name(edge.first)}, {"to", s.name(edge.second)}, {"maps", maps}});
  }
  return {{"degrees", f.degrees()}, {"sections", sections}, {"restrictions", res}};
}

Presheaf decode_presheaf(const json& j, const Site& site) {
  const json& secs = array_at(j, "sections", "");
  std::vector<std::optional<Complex>> by_open(site.size());
  for (std::size_t i = 0; i < secs.size(); ++i) {
    const std::string w = "/sections/" + std::to_string(i);
    const std::size_t open = open_named(site, member(secs[i], "open", w), w + "/open");
    if (by_open[open]) malformed(w + "/open", "sections given twice");
    Complex c;
    const json& dims = array_at(secs[i], "dims", w);
    for (std::size_t n = 0; n < dims.size(); ++n) c.dims.push_back(count(dims[n], w + "/dims/" + std::to_string(n)));
    if (c.dims.empty()) malformed(w + "/dims", "at least one degree is required");
    const json d = secs[i].contains("d") ? secs[i]["d"] : json::array();
    if (!d.is_array() || (d.size() != c.dims.size() - 1 && !d.empty())) malformed(w + "/d", "one differential per consecutive pair of degrees");
    for (std::size_t n = 0; n + 1 < c.dims.size(); ++n)
      c.d.push_back(d.empty() ? Matrix(c.dims[n + 1], c.dims[n]) : decode_matrix(d[n], c.dims[n + 1], c.dims[n], w + "/d/" + std::to_string(n)));
    by_open[open] = c;
  }
  std::vector<Complex> sections;
  for (std::size_t w = 0; w < site.size(); ++w) {
    if (!by_open[w]) malformed("/sections", "no sections for \"" + site.name(w) + "\"");
    sections.push_back(*by_open[w]);
  }
  Presheaf f(site, sections);
  if (j.contains("restrictions")) {
    const json& r = array_at(j, "restrictions", "");
    for (std::size_t i = 0; i < r.size(); ++i) {
      const std::string w = "/restrictions/" + std::to_string(i);
      const std::size_t from = open_named(site, member(r[i], "from", w), w + "/from");
      const std::size_t to = open_named(site, member(r[i], "to", w), w + "/to");
      const json& maps = array_at(r[i], "maps", w);
      if (maps.size() != f.degrees()) malformed(w + "/maps", "one matrix per degree is required");
      std::vector<Matrix> per;
      for (std::size_t n = 0; n < f.degrees(); ++n)
        per.push_back(decode_matrix(maps[n], f.dim(to, n), f.dim(from, n), w + "/maps/" + std::to_string(n)));
      f.set_restriction(from, to, per);
    }
  }
  return f;
}

json encode(const VerificationReport& r) {
  json nodes = json::array();
  for (const auto& n : r.nodes) {
    json j{{"path", n.path}, {"kind", node_kind_name(n.kind)}, {"tier", tier_name(n.tier)}};
    if (!n.detail.empty()) j["detail"] = n.detail;
    if (n.witness) {
      json w = json::array();
      for (const auto& x : *n.witness) w.push_back(encode(x));
      j["witness"] = w;
    }
    nodes.push_back(j);
  }
  return {{"aggregate", tier_name(r.aggregate)}, {"nodes", nodes}};
}

json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Malformed, path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Malformed, path + ": " + e.what());
  }
}

void write_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidArgument, path + ": cannot write file");
  out << j.dump(2) << '\n';
}

}  // namespace coverforge::io
