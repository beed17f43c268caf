#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pwreath/catalog.hpp"
#include "pwreath/errors.hpp"
#include "pwreath/group.hpp"
#include "pwreath/wreath.hpp"

using namespace pwreath;

namespace {

// Element-order histogram computed straight from the multiplication.
std::map<std::uint64_t, std::size_t> order_histogram(const FiniteGroup& g) {
  std::map<std::uint64_t, std::size_t> h;
  for (Element a = 0; a < g.order(); ++a) {
    std::uint64_t k = 1;
    Element x = a;
    while (x != g.identity()) {
      x = g.mul(x, a);
      ++k;
    }
    ++h[k];
  }
  return h;
}

bool is_abelian(const FiniteGroup& g) {
  for (Element a = 0; a < g.order(); ++a)
    for (Element b = 0; b < g.order(); ++b)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

// |[G_n, G_n]| as the normal closure of the commutators of the standard
// generators, computed on structural elements since G_3 at p=3 is too big to
// tabulate.
std::uint64_t structural_derived_order(const WreathTower& t, unsigned n) {
  std::vector<WreathElement> gens;
  for (unsigned level = 1; level <= n; ++level) {
    WreathElement g = t.rotation(level);
    for (unsigned up = level + 1; up <= n; ++up) g = t.embed(g, 0);
    gens.push_back(g);
  }
  // Conjugates of the commutators by every element, then the subgroup they generate.
  std::set<std::uint64_t> in_class;
  std::vector<WreathElement> conj;
  for (const auto& a : gens) {
    for (const auto& b : gens) {
      auto c = t.multiply(t.multiply(a, b), t.multiply(t.inverse(a), t.inverse(b)));
      if (in_class.insert(t.encode(c)).second) conj.push_back(std::move(c));
    }
  }
  for (std::size_t k = 0; k < conj.size(); ++k) {
    for (const auto& g : gens) {
      auto y = t.conjugate(g, conj[k]);
      if (in_class.insert(t.encode(y)).second) conj.push_back(std::move(y));
    }
  }
  std::vector<WreathElement> used;
  std::set<std::uint64_t> seen{t.encode(t.identity(n))};
  std::vector<WreathElement> queue{t.identity(n)};
  for (const auto& c : conj) {
    if (seen.count(t.encode(c))) continue;
    used.push_back(c);
    seen = {t.encode(t.identity(n))};
    queue = {t.identity(n)};
    for (std::size_t k = 0; k < queue.size(); ++k) {
      for (const auto& u : used) {
        auto y = t.multiply(queue[k], u);
        if (seen.insert(t.encode(y)).second) queue.push_back(std::move(y));
      }
    }
  }
  return queue.size();
}

std::vector<FiniteGroup> small_groups() {
  return {cyclic_group(6), dihedral_group(8), quaternion_group(), dihedral_group(12),
          elementary_abelian(3, 2), wreath_with_cyclic(cyclic_group(3), 3)};
}

}  // namespace

TEST(Center, AbelianNineIsWhole) {
  const auto g = elementary_abelian(3, 2);
  EXPECT_EQ(center(g).order(), 9u);
}

TEST(Center, DihedralAndQuaternion) {
  EXPECT_EQ(center(dihedral_group(8)).order(), 2u);
  EXPECT_EQ(center(quaternion_group()).order(), 2u);
}

TEST(Derived, Examples) {
  EXPECT_EQ(derived_subgroup(elementary_abelian(2, 3)).order(), 1u);
  EXPECT_EQ(derived_subgroup(dihedral_group(8)).order(), 2u);
  const WreathTower t(2, 2);
  EXPECT_EQ(abelianization(t.materialize(2)).group.order(), 4u);
}

TEST(Centralizer, IdentityAndCentral) {
  for (const auto& g : small_groups()) {
    EXPECT_EQ(centralizer_bruteforce(g, g.identity()).order(), g.order());
    const auto z = center(g);
    for (auto c : z.members()) EXPECT_EQ(centralizer_bruteforce(g, c).order(), g.order());
  }
}

TEST(Centralizer, NonCentralRotationInD8) {
  const auto g = dihedral_group(8);
  const auto c = centralizer_bruteforce(g, 1);  // r
  EXPECT_EQ(c.order(), 4u);
  const Element r = 1;
  EXPECT_EQ(generate(g, std::vector<Element>{r}), c);
}

TEST(Centralizer, ContainsCyclicSpanAndCenter) {
  for (const auto& g : small_groups()) {
    const auto z = center(g);
    for (Element x = 0; x < g.order(); ++x) {
      const auto c = centralizer_bruteforce(g, x);
      EXPECT_TRUE(generate(g, std::vector<Element>{x}).is_subset_of(c));
      EXPECT_TRUE(z.is_subset_of(c));
    }
  }
}

TEST(Quotient, Examples) {
  const auto d8 = dihedral_group(8);
  EXPECT_EQ(quotient(d8, whole_group(d8)).group.order(), 1u);
  const auto q = quotient(d8, center(d8));
  EXPECT_EQ(q.group.order(), 4u);
  EXPECT_TRUE(is_abelian(q.group));
  const auto same = quotient(d8, trivial_subgroup(d8));
  EXPECT_EQ(same.group.order(), 8u);
  EXPECT_TRUE(same.projection.is_homomorphism());
  EXPECT_TRUE(same.projection.is_bijective());
}

TEST(Quotient, RejectsNonNormal) {
  const auto d8 = dihedral_group(8);
  const Element s = 4;  // index i + 4j, here j = 1
  EXPECT_THROW(quotient(d8, generate(d8, std::vector<Element>{s})), NotNormal);
}

TEST(Quotient, ProjectionIsHomomorphism) {
  for (const auto& g : small_groups()) {
    const auto q = quotient(g, derived_subgroup(g));
    EXPECT_TRUE(q.projection.is_homomorphism());
    EXPECT_TRUE(is_abelian(q.group));
  }
}

TEST(Quotient, AbelianizationCommutesWithQuotientInsideDerived) {
  for (const auto& g : {dihedral_group(8), quaternion_group(), dihedral_group(16)}) {
    const auto z = center(g);
    const auto d = derived_subgroup(g);
    ASSERT_TRUE(z.is_subset_of(d));
    const auto q = quotient(g, z);
    EXPECT_EQ(abelianization(q.group).group.order(), abelianization(g).group.order());
  }
}

TEST(DirectProduct, Examples) {
  const std::vector<FiniteGroup> one{dihedral_group(8)};
  EXPECT_TRUE(isomorphism_search(direct_product(one), dihedral_group(8)).hom.has_value());
  const std::vector<FiniteGroup> two{cyclic_group(2), cyclic_group(2)};
  const auto v = direct_product(two);
  EXPECT_EQ(v.order(), 4u);
  EXPECT_EQ(order_histogram(v).rbegin()->first, 2u);
  const std::vector<FiniteGroup> big(21, cyclic_group(2));
  EXPECT_THROW(direct_product(big), OrderOverflow);
}

TEST(Wreath, CyclicExamples) {
  const auto w = wreath_with_cyclic(cyclic_group(2), 2);
  EXPECT_EQ(w.order(), 8u);
  const auto iso = isomorphism_search(w, dihedral_group(8));
  ASSERT_EQ(iso.status, SearchStatus::Found);
  EXPECT_TRUE(iso.hom->is_homomorphism());
  EXPECT_TRUE(iso.hom->is_bijective());
  EXPECT_EQ(wreath_with_cyclic(cyclic_group(3), 3).order(), 81u);
  EXPECT_EQ(wreath_with_cyclic(cyclic_group(4), 2).order(), 32u);
}

TEST(Abelianization, Examples) {
  EXPECT_EQ(abelianization(cyclic_group(6)).group.order(), 6u);
  const auto ab = abelianization(dihedral_group(8)).group;
  EXPECT_TRUE(isomorphism_search(ab, elementary_abelian(2, 2)).hom.has_value());
  for (unsigned p : {2u, 3u}) {
    for (unsigned n = 1; n <= 3; ++n) {
      const WreathTower t(p, n, std::numeric_limits<std::size_t>::max());
      std::uint64_t expect = 1;
      for (unsigned i = 0; i < n; ++i) expect *= p;
      EXPECT_EQ(t.order(n) / structural_derived_order(t, n), expect) << p << " " << n;
      if (t.order(n) <= 4096) {
        EXPECT_EQ(abelianization(t.materialize(n)).group.order(), expect) << p << " " << n;
      }
    }
  }
}

TEST(Isomorphism, Examples) {
  const auto d8 = dihedral_group(8);
  const auto self = isomorphism_search(d8, d8);
  ASSERT_EQ(self.status, SearchStatus::Found);
  EXPECT_TRUE(self.hom->is_homomorphism());
  EXPECT_EQ(isomorphism_search(d8, quaternion_group()).status, SearchStatus::NotFound);
  EXPECT_EQ(isomorphism_search(cyclic_group(4), elementary_abelian(2, 2)).status,
            SearchStatus::NotFound);
  EXPECT_EQ(isomorphism_search(cyclic_group(4), cyclic_group(5)).status, SearchStatus::NotFound);
}

TEST(Isomorphism, OrderHistogramsAgree) {
  const auto q = order_histogram(quaternion_group());
  EXPECT_EQ(q.at(4), 6u);
  const auto d = order_histogram(dihedral_group(8));
  EXPECT_EQ(d.at(2), 5u);
}

TEST(Axioms, BuiltinsAreGroups) {
  for (const auto& g : small_groups()) EXPECT_NO_THROW(check_group_axioms(g));
  const WreathTower t(2, 3);
  EXPECT_NO_THROW(check_group_axioms(t.materialize(3)));
}

TEST(Axioms, RejectsBadTables) {
  EXPECT_THROW(FiniteGroup::from_table(2, {0, 1, 1, 1}), InvalidInput);
  EXPECT_THROW(FiniteGroup::from_table(2, {0, 1, 1}), InvalidInput);
  EXPECT_THROW(FiniteGroup::from_table(2, {0, 1, 1, 7}), InvalidInput);
  // A Latin square with identity 0 that is not associative.
  const std::vector<Element> loop{0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3,
                                  3, 2, 4, 0, 1, 4, 3, 1, 2, 0};
  const auto g = FiniteGroup::from_table(5, loop);
  EXPECT_THROW(check_group_axioms(g), InvalidInput);
}

TEST(Subgroups, LatticeOfD8) {
  const auto subs = all_subgroups(dihedral_group(8));
  EXPECT_EQ(subs.size(), 10u);
  EXPECT_THROW(all_subgroups(cyclic_group(128)), CapExceeded);
}

TEST(Permutations, S3) {
  const auto s3 = FiniteGroup::from_permutations({{1, 0, 2}, {1, 2, 0}}, 3);
  EXPECT_EQ(s3.order(), 6u);
  EXPECT_EQ(center(s3).order(), 1u);
  EXPECT_TRUE(isomorphism_search(s3, dihedral_group(6)).hom.has_value());
}

TEST(Catalog, BuiltinsAndFiles) {
  EXPECT_EQ(resolve_group("dihedral:8*cyclic:3").order(), 24u);
  EXPECT_EQ(resolve_group("elab:3^2").order(), 9u);
  EXPECT_EQ(resolve_group("wreath:p=2,n=3").order(), 128u);
  EXPECT_THROW(resolve_group("wreath:p=2"), InvalidInput);
  EXPECT_THROW(resolve_group("cyclic:x"), InvalidInput);
  EXPECT_THROW(resolve_group("cyclic:64", 32), OrderOverflow);

  const auto dir = std::filesystem::temp_directory_path();
  const auto table = dir / "pwreath_catalog_table.json";
  std::ofstream(table) << R"({"table": [[0,1,2],[1,2,0],[2,0,1]], "labels": ["e","a","b"]})";
  const auto c3 = resolve_group(table.string());
  EXPECT_EQ(c3.order(), 3u);
  EXPECT_EQ(c3.label(1), "a");

  const auto perms = dir / "pwreath_catalog_perms.json";
  std::ofstream(perms) << R"({"perm_gens": [[1,2,3,0],[3,2,1,0]], "degree": 4})";
  const auto d8 = resolve_group(perms.string());
  EXPECT_TRUE(isomorphism_search(d8, dihedral_group(8)).hom.has_value());

  const auto bad = dir / "pwreath_catalog_bad.json";
  std::ofstream(bad) << R"({"table": [[0,1,2],[1,0,2],[2,2,0]]})";
  EXPECT_THROW(resolve_group(bad.string()), InvalidInput);
  for (const auto& f : {table, perms, bad}) std::filesystem::remove(f);
}
