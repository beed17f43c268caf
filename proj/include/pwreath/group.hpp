#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pwreath {

using Element = std::uint32_t;

inline constexpr Element kUnset = 0xffffffffu;

/// Groups up to this order are stored as a dense multiplication table.
inline constexpr std::size_t kTableThreshold = 4096;

/// Default cap on the order of any constructed group.
inline constexpr std::size_t kDefaultOrderCap = std::size_t{1} << 20;

/// Multiplication backend for groups too large for a dense table.
class MultiplicationOracle {
 public:
  virtual ~MultiplicationOracle() = default;
  virtual Element mul(Element a, Element b) const = 0;
  virtual Element inverse(Element a) const = 0;
};

/// An explicit finite group on the index set 0..order-1.
///
/// FiniteGroup is a cheap handle to immutable shared state; copies refer to
/// the same group and may be used concurrently from several threads.
class FiniteGroup {
 public:
  /// The trivial group.
  FiniteGroup();

  /// Builds a group from a row-major multiplication table. Checks index
  /// ranges, the identity and inverses; associativity is left to
  /// check_group_axioms().
  static FiniteGroup from_table(std::size_t order, std::vector<Element> table,
                                std::vector<std::string> labels = {});

  static FiniteGroup from_oracle(std::size_t order, Element identity,
                                 std::shared_ptr<const MultiplicationOracle> oracle);

  /// Builds a group from a multiplication rule. The rule is tabulated when
  /// order <= kTableThreshold and kept as an oracle otherwise.
  static FiniteGroup from_rule(std::size_t order, Element identity,
                               std::function<Element(Element, Element)> mul,
                               std::function<Element(Element)> inverse);

  /// Closure of one-line permutations of {0..degree-1}; elements are indexed
  /// in breadth-first discovery order (identity first).
  static FiniteGroup from_permutations(const std::vector<std::vector<std::uint32_t>>& gens,
                                       std::size_t degree,
                                       std::size_t cap = kDefaultOrderCap);

  std::size_t order() const;
  Element identity() const;
  Element mul(Element a, Element b) const;
  Element inverse(Element a) const;
  Element power(Element a, std::uint64_t e) const;
  Element commutator(Element a, Element b) const;  // a b a^-1 b^-1
  std::uint64_t element_order(Element a) const;
  bool has_table() const;

  bool has_labels() const;
  std::string label(Element a) const;
  const std::string& name() const;
  FiniteGroup with_name(std::string name) const;

 private:
  struct Impl;
  explicit FiniteGroup(std::shared_ptr<const Impl> impl);
  std::shared_ptr<const Impl> impl_;
};

/// Full group-axiom check: exhaustive associativity up to order 512, random
/// triples (10^5, seeded) above that.
void check_group_axioms(const FiniteGroup& g, std::uint64_t seed = 0x5eed);

class Subgroup {
 public:
  Subgroup(FiniteGroup parent, std::vector<Element> members);

  const FiniteGroup& parent() const { return parent_; }
  const std::vector<Element>& members() const { return members_; }
  std::size_t order() const { return members_.size(); }
  bool contains(Element x) const;
  bool is_subset_of(const Subgroup& other) const;
  bool operator==(const Subgroup& other) const { return members_ == other.members_; }

 private:
  FiniteGroup parent_;
  std::vector<Element> members_;  // sorted
};

struct GroupHom {
  FiniteGroup source;
  FiniteGroup target;
  std::vector<Element> map;

  Element operator()(Element x) const { return map[x]; }
  bool is_homomorphism() const;
  bool is_bijective() const;
};

Subgroup generate(const FiniteGroup& g, std::span<const Element> gens);
Subgroup whole_group(const FiniteGroup& g);
Subgroup trivial_subgroup(const FiniteGroup& g);

/// Every subgroup of g, sorted by (order, members); throws CapExceeded when
/// g.order() > cap.
std::vector<Subgroup> all_subgroups(const FiniteGroup& g, std::size_t cap = 64);

Subgroup center(const FiniteGroup& g);
Subgroup derived_subgroup(const FiniteGroup& g);
Subgroup centralizer_bruteforce(const FiniteGroup& g, Element x);
bool is_normal(const Subgroup& n);

struct Quotient {
  FiniteGroup group;
  GroupHom projection;
  std::vector<Element> representatives;  // smallest element of each coset
};

/// G/N; throws NotNormal if N is not normal.
Quotient quotient(const FiniteGroup& g, const Subgroup& n);
Quotient abelianization(const FiniteGroup& g);

struct EmbeddedGroup {
  FiniteGroup group;
  GroupHom embedding;  // group -> parent, members in sorted order
};

EmbeddedGroup subgroup_as_group(const Subgroup& s);

/// Componentwise product; index = sum of e_i * stride_i, first factor fastest.
FiniteGroup direct_product(std::span<const FiniteGroup> factors,
                           std::size_t cap = kDefaultOrderCap);

/// H wr Z/p with (a, s)(b, t) = (a * s(b), s + t), where s(b)_i = b_{i-s}.
/// Index = sum a_i |H|^i + s |H|^p.
FiniteGroup wreath_with_cyclic(const FiniteGroup& h, unsigned p,
                               std::size_t cap = kDefaultOrderCap);

std::vector<std::size_t> conjugacy_class_sizes(const FiniteGroup& g);
std::vector<std::uint64_t> element_orders(const FiniteGroup& g);

enum class SearchStatus { Found, NotFound, BudgetExhausted };

const char* to_string(SearchStatus s);

/// Hooks for the generic isomorphism backtracker. Fingerprints, when given,
/// must agree between an element and its image. partial_ok sees the map
/// restricted to the subgroup generated so far (other entries kUnset).
struct IsoSearchHooks {
  std::vector<std::uint64_t> source_fingerprint;
  std::vector<std::uint64_t> target_fingerprint;
  std::function<bool(std::span<const Element>)> partial_ok;
  std::function<bool(std::span<const Element>)> accept;
};

struct IsoSearchResult {
  SearchStatus status = SearchStatus::NotFound;
  std::vector<Element> map;
  std::uint64_t nodes = 0;
};

/// Backtracking over images of a greedy generating set of `source`.
/// Enumerates isomorphisms source -> target until `accept` returns true.
IsoSearchResult search_isomorphisms(const FiniteGroup& source, const FiniteGroup& target,
                                    std::uint64_t budget, const IsoSearchHooks& hooks);

/// Deterministic generating set: repeatedly the element of largest order
/// (smallest index on ties) outside the subgroup generated so far.
std::vector<Element> greedy_generators(const FiniteGroup& g);

struct IsomorphismResult {
  SearchStatus status = SearchStatus::NotFound;
  std::optional<GroupHom> hom;
  std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultSearchBudget = 2'000'000;

/// Candidate images are pruned by (element order, conjugacy-class size).
IsomorphismResult isomorphism_search(const FiniteGroup& g, const FiniteGroup& h,
                                     std::uint64_t budget = kDefaultSearchBudget);

// Builtin groups.
FiniteGroup cyclic_group(std::size_t m);
FiniteGroup dihedral_group(std::size_t order);  // order = 2m, index i + m*j for r^i s^j
FiniteGroup quaternion_group();                 // order 8
FiniteGroup elementary_abelian(unsigned p, unsigned rank,
                               std::size_t cap = kDefaultOrderCap);

bool is_prime(std::uint64_t n);

}  // namespace pwreath
