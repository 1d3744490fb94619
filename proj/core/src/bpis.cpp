#include "bpmin/bpis.hpp"

#include <algorithm>
#include <charconv>
#include <random>
#include <sstream>

#include "bpmin/bp.hpp"  // ParseError, ResourceLimitError

namespace bpmin {

namespace {

GridEdge normalize(GridEdge e) {
  if (e.second < e.first) std::swap(e.first, e.second);
  return e;
}

}  // namespace

BpisInstance::BpisInstance(int n, std::vector<GridEdge> edges) : n_(n) {
  edges_.reserve(edges.size());
  for (GridEdge e : edges) edges_.push_back(normalize(e));
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

std::vector<std::string> BpisInstance::validate() const {
  std::vector<std::string> out;
  if (n_ < 4) out.push_back("n=" + std::to_string(n_) + " is below the minimum of 4");
  if (n_ % 2 != 0) out.push_back("n=" + std::to_string(n_) + " is odd");
  auto show = [](GridVertex v) {
    return "(" + std::to_string(v.row) + "," + std::to_string(v.col) + ")";
  };
  for (const GridEdge& e : edges_) {
    const bool ok = (in_j1(e.first) && in_j2(e.second)) ||
                    (in_j1(e.second) && in_j2(e.first));
    if (!ok)
      out.push_back("edge " + show(e.first) + "-" + show(e.second) +
                    " does not join J1 to J2");
  }
  return out;
}

bool BpisInstance::has_edge(GridVertex a, GridVertex b) const {
  return std::binary_search(edges_.begin(), edges_.end(), normalize({a, b}));
}

HalfPermutationPair::HalfPermutationPair(std::vector<int> sigma1, std::vector<int> sigma2)
    : sigma1_(std::move(sigma1)), sigma2_(std::move(sigma2)) {
  if (sigma1_.size() != sigma2_.size())
    throw std::invalid_argument("HalfPermutationPair: halves differ in size");
  const int h = static_cast<int>(sigma1_.size());
  std::vector<char> seen(2 * h + 1, 0);
  for (int v : sigma1_) {
    if (v < 1 || v > h || seen[v])
      throw std::invalid_argument("HalfPermutationPair: sigma1 is not a permutation of [n/2]");
    seen[v] = 1;
  }
  for (int v : sigma2_) {
    if (v <= h || v > 2 * h || seen[v])
      throw std::invalid_argument(
          "HalfPermutationPair: sigma2 is not a permutation of {n/2+1..n}");
    seen[v] = 1;
  }
}

std::vector<int> HalfPermutationPair::pi_vector() const {
  std::vector<int> out;
  out.reserve(n());
  out.insert(out.end(), sigma1_.begin(), sigma1_.end());
  out.insert(out.end(), sigma2_.begin(), sigma2_.end());
  return out;
}

bool is_independent_permutation(const BpisInstance& g, const HalfPermutationPair& p) {
  if (p.n() != g.n())
    throw std::invalid_argument("is_independent_permutation: size mismatch");
  // Edges run J1-J2, so only (J1 vertex, J2 vertex) pairs can both lie in S.
  for (const GridEdge& e : g.edges()) {
    GridVertex a = e.first, b = e.second;
    if (p.pi(a.row) == a.col && p.pi(b.row) == b.col) return false;
  }
  return true;
}

std::optional<HalfPermutationPair> solve_bpis(const BpisInstance& g) {
  if (g.n() > 12)
    throw ResourceLimitError("solve_bpis: n=" + std::to_string(g.n()) +
                             " exceeds the brute-force cap of 12");
  auto violations = g.validate();
  if (!violations.empty())
    throw std::invalid_argument("solve_bpis: invalid instance: " + violations.front());

  const int h = g.half();
  std::vector<int> s1(h), s2(h);
  for (int i = 0; i < h; ++i) s1[i] = i + 1;
  do {
    for (int i = 0; i < h; ++i) s2[i] = h + i + 1;
    do {
      HalfPermutationPair p(s1, s2);
      if (is_independent_permutation(g, p)) return p;
    } while (std::next_permutation(s2.begin(), s2.end()));
  } while (std::next_permutation(s1.begin(), s1.end()));
  return std::nullopt;
}

BpisInstance random_instance(int n, double edge_probability, std::uint64_t seed) {
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("random_instance: n must be even and >= 4");
  if (edge_probability < 0.0 || edge_probability > 1.0)
    throw std::invalid_argument("random_instance: probability outside [0,1]");
  std::mt19937_64 rng(seed);
  const int h = n / 2;
  std::vector<GridEdge> edges;
  // Fixed lexicographic pair order with one draw each keeps instances
  // reproducible across standard-library implementations.
  for (int j = 1; j <= h; ++j)
    for (int k = 1; k <= h; ++k)
      for (int jp = h + 1; jp <= n; ++jp)
        for (int kp = h + 1; kp <= n; ++kp) {
          const double u =
              static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
          if (u < edge_probability)
            edges.push_back({GridVertex{j, k}, GridVertex{jp, kp}});
        }
  return BpisInstance(n, std::move(edges));
}

std::string serialize_bpis(const BpisInstance& g) {
  std::ostringstream out;
  out << "bpis n=" << g.n() << "\n";
  for (const GridEdge& e : g.edges())
    out << e.first.row << " " << e.first.col << " " << e.second.row << " "
        << e.second.col << "\n";
  return out.str();
}

BpisInstance parse_bpis(std::string_view text, std::string_view name) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) -> void {
    throw ParseError(std::string(name) + ":" + std::to_string(lineno) + ": " + what);
  };
  if (!std::getline(in, line)) {
    lineno = 1;
    fail("empty input");
  }
  lineno = 1;
  int n = 0;
  {
    std::istringstream hl(line);
    std::string tag, field;
    hl >> tag >> field;
    if (tag != "bpis" || field.rfind("n=", 0) != 0) fail("expected header 'bpis n=<n>'");
    auto value = field.substr(2);
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
    if (ec != std::errc() || ptr != value.data() + value.size()) fail("bad n");
  }
  std::vector<GridEdge> edges;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream el(line);
    int j, k, jp, kp;
    if (!(el >> j >> k >> jp >> kp)) fail("expected 'j k jp kp'");
    std::string rest;
    if (el >> rest) fail("trailing tokens after edge");
    edges.push_back({GridVertex{j, k}, GridVertex{jp, kp}});
  }
  return BpisInstance(n, std::move(edges));
}

}  // namespace bpmin
