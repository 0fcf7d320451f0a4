#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stackel/poly.hpp"

namespace stackel {

/// One vertex of the seed forest: a coordinate block with its polynomial,
/// optional parent edge and edge label.
struct BlockSpec {
  int id = 0;
  int dim = 0;
  FactoredPoly poly;
  std::optional<int> parent;
  std::optional<Rat> label;
};

/// Full seed datum: blocks plus (optionally) a sample point used by the
/// equivalence decision for 1-dimensional leaves.
struct ForestSpec {
  std::vector<BlockSpec> blocks;
  std::optional<std::vector<std::vector<Rat>>> sample_point;

  int total_dim() const {
    int n = 0;
    for (const auto& b : blocks) n += b.dim;
    return n;
  }
};

struct Violation {
  std::string code;  // "structure", "poly", "i", "ii", "iii"
  std::string message;
};

using ValidationReport = std::vector<Violation>;

/// Checks structural well-formedness first (ids, parent pointers, acyclicity,
/// factored-poly sanity), then the semantic conditions on labels and
/// polynomials. Empty report = valid. All checks are exact-rational.
ValidationReport validate(const ForestSpec& spec);

inline bool is_valid(const ForestSpec& spec) { return validate(spec).empty(); }

/// Derived order structure of a structurally valid spec. Vertex "positions"
/// are indices into blocks sorted by id; `prec(a,b)` holds iff a is a proper
/// ancestor of b (an oriented path b -> ... -> a exists).
struct OrderInfo {
  int B = 0;
  int n = 0;
  std::vector<int> id_of_pos;
  std::vector<int> parent;                  // position of parent, -1 at roots
  std::vector<std::vector<int>> children;   // sorted by position
  std::vector<std::vector<int>> ancestors;  // [parent, grandparent, ..., root]
  std::vector<int> component;               // component index per position
  std::vector<int> comp_root;               // root position per component
  std::vector<int> offset;                  // first flat coordinate of each block
  std::vector<int> dims;

  int pos_of_id(int id) const;
  bool prec(int a, int b) const;  // a strictly below b towards the root side
  bool preceq(int a, int b) const { return a == b || prec(a, b); }
  int n_components() const { return static_cast<int>(comp_root.size()); }
  bool is_root(int v) const { return parent[v] < 0; }
  /// The child of the root on the path from v up (v itself if its parent is a root).
  int top_child(int v) const;
};

/// Derives the order structure; throws std::invalid_argument when the spec is
/// structurally broken (malformed parent indices or cycles).
OrderInfo partial_order(const ForestSpec& spec);

/// Splits a spec into its connected components; each sub-spec re-validates.
std::vector<ForestSpec> components(const ForestSpec& spec);

/// Curvature K = -a_{n_r+1}/4 read off a root polynomial top slot (0 when the
/// degree is below n_r+1, hence 0 for every multi-component forest).
Rat curvature_constant(const ForestSpec& spec, const OrderInfo& ord);

/// Top coefficient slot a_{dim+1} of a block polynomial (0 if deg < dim+1).
Rat top_slot(const BlockSpec& b);

bool block_is_curved(const BlockSpec& b);

// --- JSON (canonical on-disk format) ------------------------------------

/// Parses the canonical schema; throws std::invalid_argument on malformed
/// documents. Does not run semantic validation.
ForestSpec spec_from_json_text(const std::string& text);
std::string spec_to_json_text(const ForestSpec& spec, int indent = 2);

/// FNV-1a hash of the canonical serialization, for report traceability.
std::string spec_hash(const ForestSpec& spec);

}  // namespace stackel
