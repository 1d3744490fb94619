#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bpmin {

/// Vertex of the [n]x[n] grid, 1-based coordinates.
struct GridVertex {
  int row = 0;
  int col = 0;
  auto operator<=>(const GridVertex&) const = default;
};

using GridEdge = std::pair<GridVertex, GridVertex>;

/// Graph on [n]x[n] whose edges run between J1 = [n/2]^2 and
/// J2 = {n/2+1..n}^2. Instances may be invalid; see validate().
class BpisInstance {
public:
  BpisInstance(int n, std::vector<GridEdge> edges);

  int n() const { return n_; }
  int half() const { return n_ / 2; }
  const std::vector<GridEdge>& edges() const { return edges_; }

  bool in_j1(GridVertex v) const { return v.row >= 1 && v.row <= half() && v.col >= 1 && v.col <= half(); }
  bool in_j2(GridVertex v) const {
    return v.row > half() && v.row <= n_ && v.col > half() && v.col <= n_;
  }

  /// One message per violated structural requirement; empty means valid.
  std::vector<std::string> validate() const;

  bool has_edge(GridVertex a, GridVertex b) const;

  bool operator==(const BpisInstance&) const = default;

private:
  int n_;
  std::vector<GridEdge> edges_;  // normalized: J1 endpoint first, sorted, unique
};

/// Permutation of [n] mapping each half of [n] into itself.
class HalfPermutationPair {
public:
  /// sigma1: images of 1..n/2 (values in [n/2]); sigma2: images of
  /// n/2+1..n (values in {n/2+1..n}).
  HalfPermutationPair(std::vector<int> sigma1, std::vector<int> sigma2);

  int n() const { return static_cast<int>(sigma1_.size() + sigma2_.size()); }
  int half() const { return static_cast<int>(sigma1_.size()); }
  const std::vector<int>& sigma1() const { return sigma1_; }
  const std::vector<int>& sigma2() const { return sigma2_; }

  /// Combined view pi: [n] -> [n].
  int pi(int i) const {
    return i <= half() ? sigma1_[i - 1] : sigma2_[i - 1 - half()];
  }
  std::vector<int> pi_vector() const;

  bool operator==(const HalfPermutationPair&) const = default;

private:
  std::vector<int> sigma1_, sigma2_;
};

/// True iff S = {(i, pi(i))} contains no edge of G.
bool is_independent_permutation(const BpisInstance& g, const HalfPermutationPair& p);

/// Brute-force decision over all (n/2)!^2 pairs; lexicographically least
/// witness. Cap n <= 12.
std::optional<HalfPermutationPair> solve_bpis(const BpisInstance& g);

/// Each J1xJ2 vertex pair becomes an edge independently with the given
/// probability; identical seeds give identical instances.
BpisInstance random_instance(int n, double edge_probability, std::uint64_t seed);

// Graph file: "bpis n=<n>", then one edge per line "j k jp kp" meaning
// ((j,k),(jp,kp)) with (j,k) in J1 and (jp,kp) in J2.
std::string serialize_bpis(const BpisInstance& g);
BpisInstance parse_bpis(std::string_view text, std::string_view name = "<bpis>");

}  // namespace bpmin
