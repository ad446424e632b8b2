#pragma once

// Moulin exact-repair regenerating codes.
//
// The file is a functional phi on the U-middle grade s-1. Node h stores phi
// restricted to its star line, i.e. one symbol per basis tensor of the star
// grade s-1 (nu (x) u_h* (x) omega). Repair traffic lives on the star grade s-2.

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "moulin/code_params.hpp"
#include "moulin/finite_field.hpp"
#include "moulin/graded_tensor.hpp"

namespace moulin {

/// Sparse linear form: (coordinate, coefficient) pairs.
using SparseRow = std::vector<std::pair<std::size_t, Element>>;

struct CodeInstance {
  CodeParams params;
  PrimeField field{2};
  StarConfig stars;
  /// One row per basis tensor of T^pV (x) Lambda^qW with p+q = s (general,
  /// root and leaf checks); columns index the U-middle grade s-1.
  FieldMatrix check_matrix;
  /// Columns span the null space of check_matrix; one column per message symbol.
  FieldMatrix encoder_basis;
  /// Free coordinates of the null space; phi at these coordinates is the message.
  std::vector<std::size_t> message_columns;
  /// For each V-middle coordinate of the stored grade, phi there as a
  /// combination of W-middle coordinates one block up (empty for leaf rows).
  std::vector<std::pair<std::size_t, SparseRow>> v_coordinate_rules;
  /// Rebuilds a share from phi o d_f restricted to the U-middle grade s-2:
  /// alpha rows, one column per coordinate of that grade. Independent of f.
  FieldMatrix assign_matrix;

  int n() const noexcept { return params.n; }
  int k() const noexcept { return params.k; }
  int d() const noexcept { return params.d; }
  int s() const noexcept { return params.s; }
  int l() const noexcept { return params.d - params.k; }

  Grade stored_grade() const noexcept { return {Middle::U, s() - 1, l(), k()}; }
  Grade share_grade() const noexcept { return {Middle::star, s() - 1, l(), k()}; }
  Grade help_grade() const noexcept { return {Middle::star, s() - 2, l(), k()}; }
  Grade lifted_help_grade() const noexcept { return {Middle::U, s() - 2, l(), k()}; }
  Grade check_grade() const noexcept { return {Middle::none, s(), l(), k()}; }
};

/// Requires n-1 >= d >= k >= s-1 >= 1, stars of matching shape passing (Sd)
/// and (Sk), and a field with at least n elements (any field for the layered
/// family).
CodeInstance build_instance(int n, int k, int d, int s, const PrimeField& field, const StarConfig& stars);
/// Vandermonde stars over the given field (default: smallest prime >= n).
CodeInstance build_vandermonde_instance(int n, int k, int d, int s, std::uint32_t modulus = 0);
/// Layered stars (n = k+1, d = k) over GF(2) unless another field is given.
CodeInstance build_layered_instance(int k, int s, std::uint32_t modulus = 2);

struct FileFunctional {
  std::vector<Element> evaluations;
  friend bool operator==(const FileFunctional&, const FileFunctional&) = default;
};

struct NodeContent {
  std::size_t node = 0;
  std::vector<Element> symbols;
  friend bool operator==(const NodeContent&, const NodeContent&) = default;
};

FileFunctional encode(const CodeInstance& inst, std::span<const Element> message);
std::vector<Element> decode_message(const CodeInstance& inst, const FileFunctional& phi);
bool satisfies_checks(const CodeInstance& inst, const FileFunctional& phi);

NodeContent extract_node(const CodeInstance& inst, const FileFunctional& phi, std::size_t h);

/// Rebuilds phi from exactly k shares with distinct node indices.
FileFunctional download(const CodeInstance& inst, std::span<const NodeContent> shares);

/// Failing set (sorted ascending) and a basis b_0..b_{k-1} of W whose first c
/// vectors are the failing nodes' w-parts. The complement after the j-th
/// failing node is spanned by b_{j+1}..b_{k-1}.
struct ComplementChain {
  std::vector<std::size_t> failing;
  FieldMatrix basis;          // k x k, column i is b_i in standard coordinates
  FieldMatrix basis_inverse;  // coordinates in the b-basis

  std::size_t size() const noexcept { return failing.size(); }
  /// Basis (as columns) of the complement after failing nodes 0..j.
  FieldMatrix complement(std::size_t j) const;
};

ComplementChain complement_chain(const CodeInstance& inst, std::vector<std::size_t> failing);

/// A compressed help symbol: phi(d_{f_j}(nu (x) u_h* (x) b_S)) with S drawn
/// from the complement after failing node j.
struct HelpSymbol {
  std::size_t chain_pos = 0;
  int p = 0;
  std::size_t v_index = 0;
  std::vector<int> wedge;  // indices into the chain basis
};

/// Everything helper- and share-independent about repairing one failing set.
struct RepairPlan {
  ComplementChain chain;
  std::vector<HelpSymbol> symbols;
  /// beta_c x alpha: a help message is compression * share.
  FieldMatrix compression;
  /// Per failing node: rows are the help grade (standard basis), columns the
  /// compressed symbols; phi o d_f on the help grade is decompression * message.
  std::vector<FieldMatrix> decompression;
};

RepairPlan plan_repair(const CodeInstance& inst, const ComplementChain& chain);

struct HelpMessage {
  std::size_t helper = 0;
  std::vector<std::size_t> failing;
  std::vector<Element> symbols;
};

/// Computed from the helper's own share only.
HelpMessage help_message(const CodeInstance& inst, const RepairPlan& plan, const NodeContent& content);

/// phi(d_{f_j}(x)) for every basis tensor x of the help grade with middle u_h*.
std::vector<Element> decompress(const CodeInstance& inst, const RepairPlan& plan, const HelpMessage& msg,
                                std::size_t chain_pos);

/// Rebuilds the failing shares (in chain order) from d messages with distinct
/// helpers outside the failing set.
std::vector<NodeContent> repair(const CodeInstance& inst, const RepairPlan& plan, std::span<const HelpMessage> messages);

/// Rank of the uncompressed coboundaries d_f(nu (x) u_h* (x) omega) over all
/// f in the failing set and the full wedge basis: the information a helper
/// actually has to convey. Never exceeds beta_c.
std::size_t help_space_rank(const CodeInstance& inst, const std::vector<std::size_t>& failing);

/// Whole-share fallback for c >= k: download from the first k of the given
/// shares and re-extract the failing nodes.
std::vector<NodeContent> repair_by_download(const CodeInstance& inst, const std::vector<std::size_t>& failing,
                                            std::span<const NodeContent> helper_shares);

}  // namespace moulin
