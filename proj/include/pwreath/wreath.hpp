#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pwreath/group.hpp"
#include "pwreath/isoclinism.hpp"

namespace pwreath {

/// An element of G_level = G_{level-1} wr Z/p, stored flat: component i
/// occupies digits [i*w, (i+1)*w) with w the width of level-1, and the last
/// digit is the shift. Level 1 is a single digit.
struct WreathElement {
  unsigned level = 0;
  std::vector<std::uint8_t> digits;

  auto operator<=>(const WreathElement&) const = default;
};

/// Iterated wreath products G_1, ..., G_n of Z/p.
class WreathTower {
 public:
  /// Throws InvalidInput unless p is a prime below 256 and n >= 1, and
  /// OrderOverflow when |G_n| = p^(e_n) exceeds `cap`.
  WreathTower(unsigned p, unsigned n, std::size_t cap = kDefaultOrderCap);

  unsigned p() const { return p_; }
  unsigned levels() const { return n_; }

  /// e_level with e_0 = 0 and e_k = p e_{k-1} + 1; |G_level| = p^e_level.
  std::size_t exponent(unsigned level) const;
  std::uint64_t order(unsigned level) const;

  WreathElement identity(unsigned level) const;
  /// ((id, ..., id), 1).
  WreathElement rotation(unsigned level) const;
  /// (y, ..., y) with shift 0.
  WreathElement diagonal(const WreathElement& y) const;
  /// y in component i, identity elsewhere, shift 0.
  WreathElement embed(const WreathElement& y, unsigned i) const;
  WreathElement assemble(const std::vector<WreathElement>& components, unsigned shift) const;

  WreathElement component(const WreathElement& x, unsigned i) const;
  unsigned shift(const WreathElement& x) const { return x.digits.back(); }

  WreathElement multiply(const WreathElement& a, const WreathElement& b) const;
  WreathElement inverse(const WreathElement& a) const;
  WreathElement power(const WreathElement& a, std::uint64_t e) const;
  /// g x g^-1.
  WreathElement conjugate(const WreathElement& g, const WreathElement& x) const;
  bool is_identity(const WreathElement& x) const;

  /// Mixed-radix index, digit 0 least significant.
  std::uint64_t encode(const WreathElement& x) const;
  WreathElement decode(unsigned level, std::uint64_t index) const;

  /// G_level as a FiniteGroup indexed by encode().
  FiniteGroup materialize(unsigned level) const;

  WreathElement random(unsigned level, std::mt19937_64& rng) const;

  /// Level-1 elements are a digit; higher levels are "[e_1,...,e_p;s]" where
  /// ";s" may be omitted (shift 0). "[[c_1,...,c_p];s]" is also accepted.
  WreathElement parse(unsigned level, std::string_view text) const;
  /// Same syntax, with ";s" written only for a nonzero shift.
  std::string format(const WreathElement& x) const;

  void check_level(const WreathElement& x, unsigned level) const;

 private:
  unsigned p_;
  unsigned n_;
  std::vector<std::size_t> exponent_;
};

/// Some g with g x g^-1 = y, if x and y are conjugate in their level.
std::optional<WreathElement> conjugator(const WreathTower& t, const WreathElement& x,
                                        const WreathElement& y);

struct NormalFormB {
  WreathElement conjugator;  // c with c x c^-1 = canonical
  WreathElement canonical;   // ((a, id, ..., id), s)
  WreathElement a;
};

/// Throws NotCaseB when the shift of x is 0.
NormalFormB normal_form_case_b(const WreathTower& t, const WreathElement& x);

/// Shape of a centralizer inside the class generated from Z/p by products,
/// wreathing and isoclinic replacement.
struct CentralizerDescriptor {
  enum class Kind { Cyclic, Product, Extension, Wreath };
  Kind kind = Kind::Cyclic;
  unsigned level = 1;
  std::vector<CentralizerDescriptor> children;
  std::size_t exponent = 1;  // |Z| = p^exponent
};

enum class CentralizerCase { A, B, C };

const char* to_string(CentralizerCase c);

struct CentralizerReport {
  CentralizerCase which = CentralizerCase::A;
  /// c with c x c^-1 in the standard shape for the case: ((a,id,...,id),s)
  /// for B, a diagonal element for C, identity for A.
  WreathElement conjugator;
  std::optional<WreathElement> a;  // case B only
  CentralizerDescriptor core;
  std::vector<WreathElement> generators;
};

/// Requires level >= 2.
CentralizerReport classify_centralizer(const WreathTower& t, const WreathElement& x);

/// Generators of Z(x) for any level (Z/p itself at level 1).
std::vector<WreathElement> centralizer_generators(const WreathTower& t, const WreathElement& x);
CentralizerDescriptor centralizer_descriptor(const WreathTower& t, const WreathElement& x);

/// A subgroup of some G_level given by closure of generators.
struct ClosedSubgroup {
  FiniteGroup group;
  std::vector<WreathElement> elements;  // index -> element, identity first
};

/// Throws CapExceeded when the closure grows beyond `cap` elements.
ClosedSubgroup close_subgroup(const WreathTower& t, unsigned level,
                              const std::vector<WreathElement>& generators,
                              std::size_t cap = kTableThreshold);

struct Certificate {
  enum class Kind { Leaf, Product, Wreath, IsoclinicReplacement };
  Kind kind = Kind::Leaf;
  unsigned level = 1;
  std::vector<Certificate> children;
  // IsoclinicReplacement only: either a checked witness or the tag
  // "asserted-by-Lemma" when the groups were too large to check.
  std::optional<nlohmann::json> witness;
  bool witness_verified = false;
  std::string tag;
};

struct CertificateOptions {
  std::size_t witness_order_cap = 256;
  std::uint64_t budget = kDefaultSearchBudget;
};

/// Throws WitnessBudgetExhausted if an isoclinism search runs out of budget.
Certificate cp_certificate(const WreathTower& t, const WreathElement& x,
                           const CertificateOptions& options = {});

/// Conjugacy-class representative of a maximal elementary abelian subgroup.
struct MaxElabDescriptor {
  enum class Kind { Trivial, Product, Diagonal };
  Kind kind = Kind::Trivial;
  unsigned level = 0;
  std::vector<MaxElabDescriptor> children;
  unsigned rank = 0;
  /// Indices of the children in the level-(level-1) representative list.
  std::vector<std::size_t> child_ids;
};

/// Representatives at `level`: product types over cyclic-rotation classes of
/// p-tuples (least rotation, lexicographic order), then diagonal types.
std::vector<MaxElabDescriptor> maximal_elem_abelians(const WreathTower& t, unsigned level);
/// Same list without a tower; only the combinatorics depend on p.
std::vector<MaxElabDescriptor> maximal_elem_abelians(unsigned p, unsigned level);

/// Generators of the realized subgroup, in exterior-generator order:
/// components left to right for products, the rotation last for diagonals.
std::vector<WreathElement> elab_generators(const WreathTower& t, const MaxElabDescriptor& d);

std::string to_string(const MaxElabDescriptor& d);

struct ElabEnumeration {
  std::vector<Subgroup> subgroups;  // every elementary abelian subgroup, trivial first
  std::vector<unsigned> rank;
  std::vector<bool> maximal;
  std::vector<std::size_t> class_id;  // conjugacy classes numbered by first appearance
};

inline constexpr std::size_t kElabBruteCap = 1024;

/// Exhaustive enumeration; throws CapExceeded above kElabBruteCap.
ElabEnumeration elem_abelians_bruteforce(const FiniteGroup& g);

struct SylowGLParams {
  std::uint64_t p = 0, q = 0, n = 0;
  std::uint64_t d = 0;  // multiplicative order of q mod p
  std::uint64_t r = 0;  // v_p(q^d - 1)
  std::uint64_t m = 0;  // floor(n / d)
  std::vector<std::pair<std::uint64_t, std::uint64_t>> factors;  // (r, k), k ascending

  /// Sum over factors of r p^k + (p^k - 1)/(p - 1).
  std::uint64_t exponent() const;
};

/// Throws UnsupportedParameters unless p and q are distinct odd primes.
SylowGLParams sylow_gl_parameters(std::uint64_t n, std::uint64_t q, std::uint64_t p);

/// v_p(|GL_n(F_q)|) = sum_{i=1..n} v_p(q^i - 1), for p not dividing q.
std::uint64_t gl_order_valuation(std::uint64_t n, std::uint64_t q, std::uint64_t p);

nlohmann::json to_json(const WreathTower& t, const CentralizerReport& r);
nlohmann::json to_json(const CentralizerDescriptor& d);
nlohmann::json to_json(const Certificate& c);
nlohmann::json to_json(const MaxElabDescriptor& d);
nlohmann::json to_json(const SylowGLParams& s);

}  // namespace pwreath
