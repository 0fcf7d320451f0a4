#pragma once

#include <map>
#include <variant>

#include "stackel/forest.hpp"

namespace stackel {

/// Data-level moves. A relabels coordinates inside one block (a no-op on the
/// seed data, kept as a witness label); B is the affine change on one block
/// with its compensations; C renames vertices; D swaps the polynomial of a
/// 1-dimensional leaf for a sign-compatible admissible one.
struct MoveA {
  int vertex;
  std::vector<int> perm;
};
struct MoveB {
  int vertex;
  Rat A;
  Rat C;
};
struct MoveC {
  std::map<int, int> renaming;  // old id -> new id
};
struct MoveD {
  int vertex;
  FactoredPoly replacement;
  int sign = 0;  // sign of P at the admissible sample, as a witness
};
using Move = std::variant<MoveA, MoveB, MoveC, MoveD>;

/// Applies a move exactly; the result re-validates (throws std::invalid_argument
/// on ill-formed moves, std::logic_error if validity would break).
ForestSpec apply_move(const ForestSpec& spec, const Move& move);

ForestSpec apply_moves(const ForestSpec& spec, const std::vector<Move>& moves);

/// The admissible sample value for a 1-dimensional leaf: the block's entry of
/// the spec's sample point when present, otherwise one past the largest real
/// part among the polynomial's roots.
Rat leaf_sample_value(const ForestSpec& spec, int vertex_id);

/// Sign of the leaf polynomial at its admissible sample value.
int leaf_sign(const ForestSpec& spec, int vertex_id);

/// Data equality after sorting blocks by id (polynomials compared as root
/// multisets).
bool specs_equal(const ForestSpec& a, const ForestSpec& b);

/// Decides whether two valid seed data describe the same separating
/// coordinates, returning a witness move sequence transforming a into b.
std::optional<std::vector<Move>> equivalent(const ForestSpec& a, const ForestSpec& b);

/// Canonical representative: per block, anchors (polynomial roots and child
/// labels) are affinely normalized so the two smallest real anchors become 0
/// and 1; vertices are renamed canonically. Idempotent.
ForestSpec canon(const ForestSpec& spec, std::vector<Move>* witness = nullptr);

}  // namespace stackel
