#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pwreath/group.hpp"

namespace pwreath {

/// The commutator map of G, pushed down to the inner quotient G/Z(G).
struct CommutatorPairing {
  FiniteGroup group;
  Subgroup center;
  Quotient inner;    // G/Z with projection and coset representatives
  Subgroup derived;  // [G,G]
  std::vector<Element> table;  // |G/Z|^2 entries, values are elements of G

  Element value(Element xbar, Element ybar) const {
    return table[xbar * inner.group.order() + ybar];
  }
};

CommutatorPairing commutator_pairing(const FiniteGroup& g);

/// Checks that [g,h] only depends on the cosets gZ, hZ, over all pairs of
/// lifts, and that the pairing vanishes on the diagonal.
bool pairing_well_defined(const CommutatorPairing& pairing);

struct IsoclinismWitness {
  CommutatorPairing first;
  CommutatorPairing second;
  EmbeddedGroup derived_first;
  EmbeddedGroup derived_second;
  GroupHom i;  // first.inner.group -> second.inner.group
  GroupHom j;  // derived_first.group -> derived_second.group
  bool square_verified = false;
};

/// Exhaustive check of a witness: i and j bijective homomorphisms and
/// j([x,y]) = [i(x), i(y)] for every pair of inner cosets.
bool verify_witness(const IsoclinismWitness& w);

struct IsoclinismOptions {
  std::uint64_t budget = kDefaultSearchBudget;
  bool use_invariant_filter = true;
};

struct IsoclinismResult {
  SearchStatus status = SearchStatus::NotFound;  // NotFound means not isoclinic
  std::optional<IsoclinismWitness> witness;
  std::uint64_t nodes = 0;
  std::string reason;

  bool isoclinic() const { return status == SearchStatus::Found; }
};

/// Cheap necessary conditions: inner-quotient order, derived order, and the
/// multisets of pairing fibres and row profiles. Returns an empty string when
/// compatible, otherwise the first mismatch.
std::string invariant_mismatch(const CommutatorPairing& a, const CommutatorPairing& b);

/// Searches for i : G1/Z1 -> G2/Z2; j is forced on commutators by the
/// commuting square and extended multiplicatively. NotFound is only returned
/// after the search space is exhausted.
IsoclinismResult is_isoclinic(const FiniteGroup& g1, const FiniteGroup& g2,
                              const IsoclinismOptions& options = {});

/// is_isoclinic(G, G x A) for abelian A; throws InvalidInput if A is not
/// abelian.
IsoclinismResult isoclinic_to_abelian_extension(const FiniteGroup& g, const FiniteGroup& a,
                                                const IsoclinismOptions& options = {});

struct HallPair {
  Subgroup first;
  Subgroup second;
  bool from_centralizer = false;
  SearchStatus verdict = SearchStatus::NotFound;
};

struct HallReport {
  std::vector<HallPair> pairs;
  bool all_pass() const;
};

inline constexpr std::size_t kHallOrderCap = 64;

/// For every subgroup of G1 containing Z1, the corresponding subgroup of G2
/// under i is located and the pair tested for isoclinism. Centralizers of
/// non-central elements are listed separately (from_centralizer).
HallReport hall_correspondence_spotcheck(const IsoclinismWitness& witness,
                                         const IsoclinismOptions& options = {});

/// i and j as index arrays plus the square flag.
nlohmann::json witness_to_json(const IsoclinismWitness& w);

}  // namespace pwreath
