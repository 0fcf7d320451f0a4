#include "stackel/forest.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace stackel {

namespace {

std::vector<int> sorted_positions(const ForestSpec& spec) {
  std::vector<int> idx(spec.blocks.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return spec.blocks[a].id < spec.blocks[b].id; });
  return idx;
}

}  // namespace

int OrderInfo::pos_of_id(int id) const {
  for (int p = 0; p < B; ++p)
    if (id_of_pos[p] == id) return p;
  throw std::invalid_argument("unknown vertex id");
}

bool OrderInfo::prec(int a, int b) const {
  for (int anc : ancestors[b])
    if (anc == a) return true;
  return false;
}

int OrderInfo::top_child(int v) const {
  if (is_root(v)) throw std::invalid_argument("top_child of a root");
  int cur = v;
  while (!is_root(parent[cur])) cur = parent[cur];
  return cur;
}

Rat top_slot(const BlockSpec& b) {
  if (b.poly.degree() == b.dim + 1) return b.poly.leading;
  return Rat(0);
}

bool block_is_curved(const BlockSpec& b) { return b.poly.degree() == b.dim + 1; }

OrderInfo partial_order(const ForestSpec& spec) {
  OrderInfo ord;
  ord.B = static_cast<int>(spec.blocks.size());
  if (ord.B == 0) throw std::invalid_argument("empty spec");

  auto order = sorted_positions(spec);
  std::map<int, int> pos_by_id;
  ord.id_of_pos.resize(ord.B);
  ord.dims.resize(ord.B);
  std::vector<const BlockSpec*> blk(ord.B);
  for (int p = 0; p < ord.B; ++p) {
    const BlockSpec& b = spec.blocks[order[p]];
    if (pos_by_id.count(b.id)) throw std::invalid_argument("duplicate vertex id");
    pos_by_id[b.id] = p;
    ord.id_of_pos[p] = b.id;
    ord.dims[p] = b.dim;
    blk[p] = &b;
  }

  ord.parent.assign(ord.B, -1);
  ord.children.assign(ord.B, {});
  for (int p = 0; p < ord.B; ++p) {
    if (blk[p]->parent) {
      auto it = pos_by_id.find(*blk[p]->parent);
      if (it == pos_by_id.end()) throw std::invalid_argument("parent index refers to no vertex");
      if (it->second == p) throw std::invalid_argument("vertex is its own parent");
      ord.parent[p] = it->second;
      ord.children[it->second].push_back(p);
    }
  }

  ord.ancestors.assign(ord.B, {});
  for (int p = 0; p < ord.B; ++p) {
    int cur = ord.parent[p];
    int guard = 0;
    while (cur >= 0) {
      ord.ancestors[p].push_back(cur);
      cur = ord.parent[cur];
      if (++guard > ord.B) throw std::invalid_argument("parent pointers contain a cycle");
    }
  }

  ord.component.assign(ord.B, -1);
  for (int p = 0; p < ord.B; ++p) {
    int root = ord.ancestors[p].empty() ? p : ord.ancestors[p].back();
    int comp = -1;
    for (size_t c = 0; c < ord.comp_root.size(); ++c)
      if (ord.comp_root[c] == root) comp = static_cast<int>(c);
    if (comp < 0) {
      comp = static_cast<int>(ord.comp_root.size());
      ord.comp_root.push_back(root);
    }
    ord.component[p] = comp;
  }

  ord.offset.assign(ord.B, 0);
  ord.n = 0;
  for (int p = 0; p < ord.B; ++p) {
    ord.offset[p] = ord.n;
    ord.n += ord.dims[p];
  }
  return ord;
}

ValidationReport validate(const ForestSpec& spec) {
  ValidationReport rep;
  auto flag = [&](const std::string& code, const std::string& msg) {
    rep.push_back({code, msg});
  };

  if (spec.blocks.empty()) {
    flag("structure", "spec has no blocks");
    return rep;
  }
  for (const auto& b : spec.blocks) {
    if (b.dim < 1) flag("structure", "block " + std::to_string(b.id) + ": dim must be >= 1");
    if (b.label.has_value() != b.parent.has_value())
      flag("structure", "block " + std::to_string(b.id) + ": label present iff parent present");
  }

  OrderInfo ord;
  try {
    ord = partial_order(spec);
  } catch (const std::invalid_argument& e) {
    flag("structure", e.what());
    return rep;  // structural errors mask semantic checks
  }
  if (!rep.empty()) return rep;

  std::vector<const BlockSpec*> blk(ord.B);
  for (const auto& b : spec.blocks) blk[ord.pos_of_id(b.id)] = &b;

  // factored-poly sanity
  for (int p = 0; p < ord.B; ++p) {
    const BlockSpec& b = *blk[p];
    std::string where = "block " + std::to_string(b.id) + ": ";
    if (b.poly.leading == 0) flag("poly", where + "zero polynomial (leading coefficient 0)");
    std::set<std::pair<std::string, std::string>> seen;
    for (const auto& [r, m] : b.poly.roots) {
      if (m < 1) flag("poly", where + "root multiplicity must be positive");
      if (!seen.insert({rat_to_string(r.re), rat_to_string(r.im)}).second)
        flag("poly", where + "repeated root entry (merge multiplicities)");
      if (r.im != 0 && b.poly.multiplicity_of(r.conj()) != b.poly.multiplicity_of(r))
        flag("poly", where + "complex roots must come in conjugate pairs of equal multiplicity");
    }
    if (b.poly.degree() > b.dim + 1)
      flag("poly", where + "deg P = " + std::to_string(b.poly.degree()) + " exceeds dim+1");
  }
  if (!rep.empty()) return rep;

  // (i) several components force flat roots
  if (ord.n_components() > 1) {
    for (int root : ord.comp_root) {
      const BlockSpec& b = *blk[root];
      if (b.poly.degree() == b.dim + 1)
        flag("i", "root block " + std::to_string(b.id) +
                      ": deg P = dim+1 not allowed in a multi-component forest");
    }
  }

  // (ii) labels are roots of the parent polynomial, and the top coefficient
  // slot of the child matches the parent derivative there
  for (int p = 0; p < ord.B; ++p) {
    if (ord.is_root(p)) continue;
    const BlockSpec& child = *blk[p];
    const BlockSpec& par = *blk[ord.parent[p]];
    CRat lam(*child.label);
    Poly<CRat> par_poly = par.poly.expand();
    CRat at_lam = par_poly.eval(lam);
    if (!at_lam.is_zero()) {
      flag("ii", "edge " + std::to_string(child.id) + "->" + std::to_string(par.id) +
                     ": label " + rat_to_string(*child.label) + " is not a root of the parent polynomial");
      continue;
    }
    CRat deriv = par_poly.derivative().eval(lam);
    CRat slot(top_slot(child));
    if (deriv != slot)
      flag("ii", "edge " + std::to_string(child.id) + "->" + std::to_string(par.id) +
                     ": child top coefficient " + crat_to_string(slot) +
                     " != parent derivative " + crat_to_string(deriv) + " at the label");
  }

  // (iii) siblings sharing a label need a multiple root
  for (int p = 0; p < ord.B; ++p) {
    std::map<std::string, std::vector<int>> by_label;
    for (int c : ord.children[p]) by_label[rat_to_string(*blk[c]->label)].push_back(c);
    for (const auto& [lam_str, kids] : by_label) {
      if (kids.size() < 2) continue;
      CRat lam(*blk[kids[0]]->label);
      if (blk[p]->poly.multiplicity_of(lam) < 2)
        flag("iii", "block " + std::to_string(blk[p]->id) + ": siblings share label " + lam_str +
                        " which is not a multiple root");
    }
  }
  return rep;
}

std::vector<ForestSpec> components(const ForestSpec& spec) {
  OrderInfo ord = partial_order(spec);
  std::vector<ForestSpec> out(ord.n_components());
  std::vector<const BlockSpec*> blk(ord.B);
  for (const auto& b : spec.blocks) blk[ord.pos_of_id(b.id)] = &b;
  for (int p = 0; p < ord.B; ++p) {
    ForestSpec& sub = out[ord.component[p]];
    sub.blocks.push_back(*blk[p]);
    if (spec.sample_point) {
      if (!sub.sample_point) sub.sample_point.emplace();
      sub.sample_point->push_back((*spec.sample_point)[p]);
    }
  }
  return out;
}

Rat curvature_constant(const ForestSpec& spec, const OrderInfo& ord) {
  if (ord.n_components() > 1) return Rat(0);
  std::vector<const BlockSpec*> blk(ord.B);
  for (const auto& b : spec.blocks) blk[ord.pos_of_id(b.id)] = &b;
  Rat a = top_slot(*blk[ord.comp_root[0]]);
  return Rat(-a / 4);
}

// --- JSON ----------------------------------------------------------------

namespace {

using nlohmann::json;

Rat rat_from_json(const json& j) {
  if (j.is_string()) return rat_from_string(j.get<std::string>());
  if (j.is_number_integer()) return rat(j.get<long>());
  throw std::invalid_argument("rational values must be strings like \"p/q\"");
}

CRat croot_from_json(const json& j) {
  if (j.is_object()) {
    Rat re = j.contains("re") ? rat_from_json(j.at("re")) : Rat(0);
    Rat im = j.contains("im") ? rat_from_json(j.at("im")) : Rat(0);
    return CRat(re, im);
  }
  return CRat(rat_from_json(j));
}

json croot_to_json(const CRat& c) {
  if (c.is_real()) return rat_to_string(c.re);
  return json{{"re", rat_to_string(c.re)}, {"im", rat_to_string(c.im)}};
}

}  // namespace

ForestSpec spec_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("blocks") || !doc["blocks"].is_array())
    throw std::invalid_argument("spec document must be an object with a \"blocks\" array");

  ForestSpec spec;
  try {
    for (const auto& jb : doc["blocks"]) {
      BlockSpec b;
      b.id = jb.at("id").get<int>();
      b.dim = jb.at("dim").get<int>();
      const auto& jp = jb.at("poly");
      b.poly.leading = rat_from_json(jp.at("leading"));
      if (jp.contains("roots"))
        for (const auto& jr : jp.at("roots"))
          b.poly.roots.emplace_back(croot_from_json(jr.at(0)), jr.at(1).get<int>());
      if (jb.contains("parent") && !jb.at("parent").is_null()) b.parent = jb.at("parent").get<int>();
      if (jb.contains("label") && !jb.at("label").is_null()) b.label = rat_from_json(jb.at("label"));
      spec.blocks.push_back(std::move(b));
    }
    if (doc.contains("sample_point") && !doc["sample_point"].is_null()) {
      std::vector<std::vector<Rat>> pt;
      for (const auto& jb : doc["sample_point"]) {
        std::vector<Rat> coords;
        for (const auto& jc : jb) coords.push_back(rat_from_json(jc));
        pt.push_back(std::move(coords));
      }
      spec.sample_point = std::move(pt);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed spec document: ") + e.what());
  }
  return spec;
}

std::string spec_to_json_text(const ForestSpec& spec, int indent) {
  json doc;
  doc["blocks"] = json::array();
  for (const auto& b : spec.blocks) {
    json jb;
    jb["id"] = b.id;
    jb["dim"] = b.dim;
    json jroots = json::array();
    for (const auto& [r, m] : b.poly.roots) jroots.push_back(json::array({croot_to_json(r), m}));
    jb["poly"] = json{{"leading", rat_to_string(b.poly.leading)}, {"roots", jroots}};
    jb["parent"] = b.parent ? json(*b.parent) : json(nullptr);
    jb["label"] = b.label ? json(rat_to_string(*b.label)) : json(nullptr);
    doc["blocks"].push_back(std::move(jb));
  }
  if (spec.sample_point) {
    json jpt = json::array();
    for (const auto& blkpt : *spec.sample_point) {
      json jblk = json::array();
      for (const auto& c : blkpt) jblk.push_back(rat_to_string(c));
      jpt.push_back(std::move(jblk));
    }
    doc["sample_point"] = std::move(jpt);
  }
  return doc.dump(indent);
}

std::string spec_hash(const ForestSpec& spec) {
  std::string text = spec_to_json_text(spec, -1);
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace stackel
