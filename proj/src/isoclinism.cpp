#include "pwreath/isoclinism.hpp"

#include <algorithm>
#include <map>

#include "pwreath/errors.hpp"

namespace pwreath {

CommutatorPairing commutator_pairing(const FiniteGroup& g) {
  Subgroup z = center(g);
  Quotient inner = quotient(g, z);
  Subgroup derived = derived_subgroup(g);
  const std::size_t q = inner.group.order();
  std::vector<Element> table(q * q);
  for (Element x = 0; x < q; ++x)
    for (Element y = 0; y < q; ++y)
      table[x * q + y] = g.commutator(inner.representatives[x], inner.representatives[y]);
  return CommutatorPairing{g, std::move(z), std::move(inner), std::move(derived), std::move(table)};
}

bool pairing_well_defined(const CommutatorPairing& pairing) {
  const FiniteGroup& g = pairing.group;
  const auto& proj = pairing.inner.projection;
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b)
      if (g.commutator(a, b) != pairing.value(proj(a), proj(b))) return false;
  for (Element x = 0; x < pairing.inner.group.order(); ++x)
    if (pairing.value(x, x) != g.identity()) return false;
  return true;
}

namespace {

std::uint64_t fnv(const std::vector<std::uint64_t>& v) {
  std::uint64_t h = 1469598103934665603ull;
  for (auto x : v) {
    h ^= x;
    h *= 1099511628211ull;
  }
  return h;
}

// Per inner coset: number of commuting cosets, then the sorted orders of the
// commutator values in its row.
std::vector<std::uint64_t> row_fingerprints(const CommutatorPairing& p) {
  const auto q = p.inner.group.order();
  std::vector<std::uint64_t> out(q);
  for (Element x = 0; x < q; ++x) {
    std::vector<std::uint64_t> orders;
    std::uint64_t commuting = 0;
    for (Element y = 0; y < q; ++y) {
      const Element v = p.value(x, y);
      if (v == p.group.identity()) ++commuting;
      orders.push_back(p.group.element_order(v));
    }
    std::sort(orders.begin(), orders.end());
    orders.insert(orders.begin(), commuting);
    out[x] = fnv(orders);
  }
  return out;
}

std::vector<std::pair<std::uint64_t, std::size_t>> fibre_profile(const CommutatorPairing& p) {
  std::map<Element, std::size_t> fibres;
  for (auto v : p.table) ++fibres[v];
  std::vector<std::pair<std::uint64_t, std::size_t>> out;
  for (const auto& [v, n] : fibres) out.emplace_back(p.group.element_order(v), n);
  std::sort(out.begin(), out.end());
  return out;
}

Element derived_index(const Subgroup& d, Element x) {
  const auto& m = d.members();
  return static_cast<Element>(std::lower_bound(m.begin(), m.end(), x) - m.begin());
}

// Forces j from a candidate i. `map` may be partial (kUnset entries).
// Returns false on a conflict; jv/jinv hold the forced values on commutators.
bool force_on_commutators(const CommutatorPairing& p1, const CommutatorPairing& p2,
                          std::span<const Element> map, std::vector<Element>& jv,
                          std::vector<Element>& jinv) {
  jv.assign(p1.group.order(), kUnset);
  jinv.assign(p2.group.order(), kUnset);
  std::vector<Element> mapped;
  for (Element x = 0; x < map.size(); ++x)
    if (map[x] != kUnset) mapped.push_back(x);
  for (auto x : mapped) {
    for (auto y : mapped) {
      const Element v = p1.value(x, y);
      const Element w = p2.value(map[x], map[y]);
      if (jv[v] == kUnset) {
        if (jinv[w] != kUnset) return false;
        jv[v] = w;
        jinv[w] = v;
      } else if (jv[v] != w) {
        return false;
      }
    }
  }
  return true;
}

// Multiplicative extension of the forced values over [G1,G1]. Returns the
// full map on G1 elements (kUnset outside [G1,G1]) or nullopt on conflict.
std::optional<std::vector<Element>> extend_j(const CommutatorPairing& p1,
                                             const CommutatorPairing& p2,
                                             const std::vector<Element>& jv) {
  const FiniteGroup& g1 = p1.group;
  const FiniteGroup& g2 = p2.group;
  std::vector<Element> gens;
  for (Element v = 0; v < jv.size(); ++v)
    if (jv[v] != kUnset) gens.push_back(v);
  std::vector<Element> j(g1.order(), kUnset), jinv(g2.order(), kUnset);
  j[g1.identity()] = g2.identity();
  jinv[g2.identity()] = g1.identity();
  std::vector<Element> queue{g1.identity()};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const Element d = queue[qi];
    for (auto c : gens) {
      const Element y = g1.mul(d, c);
      const Element img = g2.mul(j[d], jv[c]);
      if (j[y] == kUnset) {
        if (jinv[img] != kUnset) return std::nullopt;
        j[y] = img;
        jinv[img] = y;
        queue.push_back(y);
      } else if (j[y] != img) {
        return std::nullopt;
      }
    }
  }
  if (queue.size() != p1.derived.order() || p1.derived.order() != p2.derived.order()) {
    return std::nullopt;
  }
  return j;
}

}  // namespace

bool verify_witness(const IsoclinismWitness& w) {
  if (!w.i.is_homomorphism() || !w.i.is_bijective()) return false;
  if (!w.j.is_homomorphism() || !w.j.is_bijective()) return false;
  const auto q = w.first.inner.group.order();
  for (Element x = 0; x < q; ++x) {
    for (Element y = 0; y < q; ++y) {
      const Element v = w.first.value(x, y);
      const Element lhs = w.derived_second.embedding(w.j(derived_index(w.first.derived, v)));
      const Element rhs = w.second.value(w.i(x), w.i(y));
      if (lhs != rhs) return false;
    }
  }
  return true;
}

std::string invariant_mismatch(const CommutatorPairing& a, const CommutatorPairing& b) {
  if (a.inner.group.order() != b.inner.group.order()) {
    return "inner quotient orders differ (" + std::to_string(a.inner.group.order()) + " vs " +
           std::to_string(b.inner.group.order()) + ")";
  }
  if (a.derived.order() != b.derived.order()) {
    return "derived subgroup orders differ (" + std::to_string(a.derived.order()) + " vs " +
           std::to_string(b.derived.order()) + ")";
  }
  if (fibre_profile(a) != fibre_profile(b)) return "commutator value multisets differ";
  auto ra = row_fingerprints(a);
  auto rb = row_fingerprints(b);
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  if (ra != rb) return "pairing row profiles differ";
  return {};
}

IsoclinismResult is_isoclinic(const FiniteGroup& g1, const FiniteGroup& g2,
                              const IsoclinismOptions& options) {
  IsoclinismResult result;
  const CommutatorPairing p1 = commutator_pairing(g1);
  const CommutatorPairing p2 = commutator_pairing(g2);
  if (options.use_invariant_filter) {
    result.reason = invariant_mismatch(p1, p2);
    if (!result.reason.empty()) return result;
  }

  IsoSearchHooks hooks;
  if (options.use_invariant_filter) {
    hooks.source_fingerprint = row_fingerprints(p1);
    hooks.target_fingerprint = row_fingerprints(p2);
  }
  hooks.partial_ok = [&](std::span<const Element> map) {
    std::vector<Element> jv, jinv;
    return force_on_commutators(p1, p2, map, jv, jinv);
  };
  std::vector<Element> j_full;
  hooks.accept = [&](std::span<const Element> map) {
    std::vector<Element> jv, jinv;
    if (!force_on_commutators(p1, p2, map, jv, jinv)) return false;
    auto j = extend_j(p1, p2, jv);
    if (!j) return false;
    j_full = std::move(*j);
    return true;
  };
  auto search = search_isomorphisms(p1.inner.group, p2.inner.group, options.budget, hooks);
  result.status = search.status;
  result.nodes = search.nodes;
  if (search.status == SearchStatus::NotFound) {
    result.reason = "no isomorphism of inner quotients is compatible with the commutator maps";
    return result;
  }
  if (search.status == SearchStatus::BudgetExhausted) {
    result.reason = "search budget exhausted after " + std::to_string(search.nodes) + " nodes";
    return result;
  }

  EmbeddedGroup d1 = subgroup_as_group(p1.derived);
  EmbeddedGroup d2 = subgroup_as_group(p2.derived);
  std::vector<Element> jmap(d1.group.order());
  for (Element k = 0; k < jmap.size(); ++k) {
    jmap[k] = derived_index(p2.derived, j_full[d1.embedding(k)]);
  }
  IsoclinismWitness w{p1,
                      p2,
                      d1,
                      d2,
                      GroupHom{p1.inner.group, p2.inner.group, std::move(search.map)},
                      GroupHom{d1.group, d2.group, std::move(jmap)},
                      false};
  w.square_verified = verify_witness(w);
  result.witness = std::move(w);
  return result;
}

IsoclinismResult isoclinic_to_abelian_extension(const FiniteGroup& g, const FiniteGroup& a,
                                                const IsoclinismOptions& options) {
  if (center(a).order() != a.order()) throw InvalidInput("extension factor must be abelian");
  const FiniteGroup factors[] = {g, a};
  return is_isoclinic(g, direct_product(factors), options);
}

bool HallReport::all_pass() const {
  return std::all_of(pairs.begin(), pairs.end(),
                     [](const HallPair& p) { return p.verdict == SearchStatus::Found; });
}

HallReport hall_correspondence_spotcheck(const IsoclinismWitness& witness,
                                         const IsoclinismOptions& options) {
  const FiniteGroup& g1 = witness.first.group;
  const FiniteGroup& g2 = witness.second.group;
  if (g1.order() > kHallOrderCap || g2.order() > kHallOrderCap) {
    throw CapExceeded("Hall spot-check is capped at groups of order " +
                      std::to_string(kHallOrderCap));
  }
  const auto& proj1 = witness.first.inner.projection;
  const auto& proj2 = witness.second.inner.projection;
  auto preimage = [](const FiniteGroup& g, const GroupHom& proj, const std::vector<char>& in) {
    std::vector<Element> m;
    for (Element x = 0; x < g.order(); ++x)
      if (in[proj(x)]) m.push_back(x);
    return Subgroup(g, std::move(m));
  };
  auto test_pair = [&](Subgroup s1, Subgroup s2, bool from_centralizer) {
    HallPair pair{std::move(s1), std::move(s2), from_centralizer, SearchStatus::NotFound};
    const auto r = is_isoclinic(subgroup_as_group(pair.first).group,
                                subgroup_as_group(pair.second).group, options);
    pair.verdict = r.status;
    return pair;
  };

  HallReport report;
  const FiniteGroup& q1 = witness.first.inner.group;
  const FiniteGroup& q2 = witness.second.inner.group;
  for (const Subgroup& sbar : all_subgroups(q1, kHallOrderCap)) {
    std::vector<char> in1(q1.order(), 0), in2(q2.order(), 0);
    for (auto x : sbar.members()) {
      in1[x] = 1;
      in2[witness.i(x)] = 1;
    }
    report.pairs.push_back(
        test_pair(preimage(g1, proj1, in1), preimage(g2, proj2, in2), false));
  }

  for (Element xbar = 0; xbar < q1.order(); ++xbar) {
    if (xbar == q1.identity()) continue;
    Subgroup c1 = centralizer_bruteforce(g1, witness.first.inner.representatives[xbar]);
    Subgroup c2 =
        centralizer_bruteforce(g2, witness.second.inner.representatives[witness.i(xbar)]);
    // c2 must be the image of c1 under the correspondence.
    std::vector<char> in2(q2.order(), 0);
    for (auto x : c1.members()) in2[witness.i(proj1(x))] = 1;
    const bool corresponds = preimage(g2, proj2, in2) == c2;
    auto pair = test_pair(std::move(c1), std::move(c2), true);
    if (!corresponds) pair.verdict = SearchStatus::NotFound;
    report.pairs.push_back(std::move(pair));
  }
  return report;
}

nlohmann::json witness_to_json(const IsoclinismWitness& w) {
  nlohmann::json j;
  j["inner_representatives_first"] = w.first.inner.representatives;
  j["inner_representatives_second"] = w.second.inner.representatives;
  j["i"] = w.i.map;
  std::vector<Element> image;
  for (Element k = 0; k < w.j.map.size(); ++k) image.push_back(w.derived_second.embedding(w.j(k)));
  j["j_domain"] = w.first.derived.members();
  j["j"] = image;
  j["square_verified"] = w.square_verified;
  return j;
}

}  // namespace pwreath
