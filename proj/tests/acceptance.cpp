// Acceptance battery: one line per criterion, exit status 1 if any fails.
// Reference values come from brute-force oracles written here, independent
// of the library code paths they check.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "pwreath/group.hpp"
#include "pwreath/isoclinism.hpp"
#include "pwreath/stabcoh.hpp"
#include "pwreath/wreath.hpp"

using namespace pwreath;

namespace {

using Set = std::vector<Element>;  // sorted member list

// Multiplication table of G_n built by the generic wreath_with_cyclic
// construction, whose indexing matches WreathTower::encode.
struct Table {
  std::size_t order = 0;
  std::vector<Element> mul;
  Element identity = 0;

  explicit Table(const FiniteGroup& g) : order(g.order()), mul(order * order), identity(g.identity()) {
    for (Element a = 0; a < order; ++a)
      for (Element b = 0; b < order; ++b) mul[a * order + b] = g.mul(a, b);
  }
  Element operator()(Element a, Element b) const { return mul[a * order + b]; }
  Element inv(Element a) const {
    for (Element b = 0; b < order; ++b)
      if ((*this)(a, b) == identity) return b;
    return identity;
  }
  Element pow(Element a, unsigned e) const {
    Element r = identity;
    while (e--) r = (*this)(r, a);
    return r;
  }
};

FiniteGroup iterated(unsigned p, unsigned n) {
  FiniteGroup g = cyclic_group(p);
  for (unsigned k = 2; k <= n; ++k) g = wreath_with_cyclic(g, p);
  return g;
}

Set closure(const Table& t, const std::vector<Element>& gens) {
  std::vector<char> in(t.order, 0);
  Set out{t.identity};
  in[t.identity] = 1;
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (auto g : gens) {
      const Element y = t(out[k], g);
      if (!in[y]) {
        in[y] = 1;
        out.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Set centralizer(const Table& t, Element x) {
  Set out;
  for (Element c = 0; c < t.order; ++c)
    if (t(c, x) == t(x, c)) out.push_back(c);
  return out;
}

// Subgroup of a table as a standalone group, members in sorted order.
FiniteGroup as_group(const Table& t, const Set& members) {
  std::map<Element, Element> idx;
  for (std::size_t i = 0; i < members.size(); ++i) idx[members[i]] = static_cast<Element>(i);
  std::vector<Element> table;
  for (auto a : members)
    for (auto b : members) table.push_back(idx.at(t(a, b)));
  return FiniteGroup::from_table(members.size(), std::move(table));
}

// Exhaustive check of the commuting square of a witness, using only the raw
// maps stored in it.
bool square_holds(const IsoclinismWitness& w) {
  const auto& q1 = w.first.inner.group;
  const auto& q2 = w.second.inner.group;
  if (q1.order() != q2.order() || w.derived_first.group.order() != w.derived_second.group.order())
    return false;
  std::vector<char> hit(q2.order(), 0);
  for (Element x = 0; x < q1.order(); ++x) {
    if (hit[w.i.map[x]]) return false;
    hit[w.i.map[x]] = 1;
    for (Element y = 0; y < q1.order(); ++y)
      if (w.i.map[q1.mul(x, y)] != q2.mul(w.i.map[x], w.i.map[y])) return false;
  }
  const auto& d1 = w.derived_first;
  const auto& d2 = w.derived_second;
  std::map<Element, Element> d1_index;
  for (Element k = 0; k < d1.group.order(); ++k) d1_index[d1.embedding.map[k]] = k;
  std::vector<char> jhit(d2.group.order(), 0);
  for (Element k = 0; k < d1.group.order(); ++k) {
    if (jhit[w.j.map[k]]) return false;
    jhit[w.j.map[k]] = 1;
    for (Element l = 0; l < d1.group.order(); ++l)
      if (w.j.map[d1.group.mul(k, l)] != d2.group.mul(w.j.map[k], w.j.map[l])) return false;
  }
  const auto& g1 = w.first.group;
  const auto& g2 = w.second.group;
  for (Element x = 0; x < q1.order(); ++x) {
    for (Element y = 0; y < q1.order(); ++y) {
      const Element c1 = g1.commutator(w.first.inner.representatives[x], w.first.inner.representatives[y]);
      const Element c2 = g2.commutator(w.second.inner.representatives[w.i.map[x]],
                                       w.second.inner.representatives[w.i.map[y]]);
      const auto it = d1_index.find(c1);
      if (it == d1_index.end()) return false;
      if (d2.embedding.map[w.j.map[it->second]] != c2) return false;
    }
  }
  return true;
}

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_s;
  std::function<Outcome()> run;
};

const std::vector<std::pair<unsigned, unsigned>> kCentralizerGroups{{2, 2}, {2, 3}, {3, 2}};

Outcome centralizer_classification() {
  std::size_t total = 0, agree = 0;
  for (auto [p, n] : kCentralizerGroups) {
    const WreathTower t(p, n);
    const Table g(iterated(p, n));
    for (Element i = 0; i < g.order; ++i) {
      const auto x = t.decode(n, i);
      const auto r = classify_centralizer(t, x);
      std::vector<Element> gens;
      for (const auto& y : r.generators) gens.push_back(static_cast<Element>(t.encode(y)));
      const Set z = centralizer(g, i);
      bool surjects = false;
      for (auto c : z) surjects = surjects || t.shift(t.decode(n, c)) != 0;
      const unsigned count_b = t.shift(x) != 0;
      const unsigned count_c = !count_b && surjects;
      const unsigned count_a = !count_b && !count_c;
      if (count_a + count_b + count_c != 1) return {false, "case oracle is not exclusive"};
      const CentralizerCase expect = count_b ? CentralizerCase::B
                                     : count_c ? CentralizerCase::C
                                               : CentralizerCase::A;
      bool diagonal_ok = true;
      if (expect == CentralizerCase::C) {
        // Case (c) elements are conjugate to a diagonal; the report's conjugator is the witness.
        const auto y = t.conjugate(r.conjugator, x);
        for (unsigned k = 1; k < p; ++k) diagonal_ok = diagonal_ok && t.component(y, k) == t.component(y, 0);
      }
      ++total;
      if (closure(g, gens) == z && r.which == expect && diagonal_ok) ++agree;
    }
  }
  return {agree == total, std::to_string(agree) + "/" + std::to_string(total) + " elements agree"};
}

Outcome case_b_isoclinism() {
  std::size_t total = 0, verified = 0;
  for (auto [p, n] : kCentralizerGroups) {
    const WreathTower t(p, n);
    const Table g(iterated(p, n));
    const Table h(iterated(p, n - 1));
    for (Element i = 0; i < g.order; ++i) {
      const auto x = t.decode(n, i);
      if (t.shift(x) == 0) continue;
      ++total;
      const auto a = t.component(t.decode(n, g.pow(i, p)), 0);
      const FiniteGroup zx = as_group(g, centralizer(g, i));
      const FiniteGroup factors[] = {as_group(h, centralizer(h, static_cast<Element>(t.encode(a)))),
                                     cyclic_group(p)};
      const auto r = is_isoclinic(zx, direct_product(factors));
      if (r.isoclinic() && r.witness->square_verified && square_holds(*r.witness)) ++verified;
    }
  }
  return {verified == total && total > 0,
          std::to_string(verified) + "/" + std::to_string(total) + " witnesses verified"};
}

Outcome isoclinism_classics() {
  std::vector<std::string> failed;
  const auto d8 = dihedral_group(8);
  const auto q8 = quaternion_group();
  const auto dq = is_isoclinic(d8, q8);
  if (!dq.isoclinic() || !square_holds(*dq.witness)) failed.push_back("D8~Q8");
  if (is_isoclinic(d8, elementary_abelian(2, 3)).status != SearchStatus::NotFound) failed.push_back("D8!~E8");

  const WreathTower t3(3, 2);
  const std::vector<std::pair<FiniteGroup, unsigned>> extend{{d8, 2}, {q8, 2}, {t3.materialize(2), 3}};
  for (const auto& [g, p] : extend) {
    const FiniteGroup f[] = {g, cyclic_group(p)};
    const auto r = is_isoclinic(g, direct_product(f));
    if (!r.isoclinic() || !square_holds(*r.witness)) failed.push_back("G~GxZ/p order " + std::to_string(g.order()));
  }

  std::size_t containing_center = 0;
  if (dq.isoclinic()) {
    const Table dt(d8);
    Set center;
    for (Element c = 0; c < 8; ++c)
      if (centralizer(dt, c).size() == 8) center.push_back(c);
    std::set<Set> subs;
    for (Element a = 0; a < 8; ++a)
      for (Element b = 0; b < 8; ++b) subs.insert(closure(dt, {a, b}));
    for (const auto& s : subs)
      if (std::includes(s.begin(), s.end(), center.begin(), center.end())) ++containing_center;
    const auto hall = hall_correspondence_spotcheck(*dq.witness);
    std::size_t pairs = 0;
    for (const auto& pr : hall.pairs) pairs += !pr.from_centralizer;
    if (!hall.all_pass() || pairs != containing_center) failed.push_back("Hall");
  }
  std::string detail = failed.empty() ? "all hold; Hall pairs cover " + std::to_string(containing_center) +
                                            " subgroups containing the center"
                                      : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

// Degree lists of the stable basis obtained by enumerating cyclic orbits of
// p-tuples directly.
std::vector<unsigned> orbit_degrees(unsigned p, unsigned n) {
  std::vector<unsigned> deg{0, 1};
  for (unsigned level = 2; level <= n; ++level) {
    std::vector<unsigned> next{0, 1};  // unit (the all-unit diagonal) and theta
    const std::size_t m = deg.size();
    std::size_t tuples = 1;
    for (unsigned i = 0; i < p; ++i) tuples *= m;
    for (std::size_t code = 0; code < tuples; ++code) {
      std::vector<std::size_t> u(p);
      std::size_t c = code;
      for (unsigned i = 0; i < p; ++i) {
        u[i] = c % m;
        c /= m;
      }
      bool least = true, diagonal = true;
      for (unsigned s = 1; s < p; ++s) {
        std::vector<std::size_t> rot(p);
        for (unsigned i = 0; i < p; ++i) rot[i] = u[(i + s) % p];
        least = least && !(rot < u);
        diagonal = diagonal && u[s] == u[0];
      }
      if (!least) continue;
      unsigned total = 0;
      for (auto v : u) total += deg[v];
      if (diagonal && deg[u[0]] == 0) continue;  // already counted as the unit
      next.push_back(total);
    }
    deg = std::move(next);
  }
  return deg;
}

Outcome hilbert_oracle() {
  std::vector<std::string> failed;
  for (unsigned p : {2u, 3u}) {
    for (unsigned n = 1; n <= 3; ++n) {
      const auto series = hilbert_series(p, n, 12);
      const StableModel model(p, n);
      std::vector<std::uint64_t> counts(13, 0);
      for (auto d : orbit_degrees(p, n))
        if (d <= 12) ++counts[d];
      for (unsigned k = 0; k <= 12; ++k) {
        if (series[k] != counts[k] || model.basis_in_degree(n, k).size() != counts[k]) {
          failed.push_back("p=" + std::to_string(p) + " n=" + std::to_string(n) + " k=" + std::to_string(k));
        }
      }
      unsigned top = 0;
      for (unsigned k = 0; k <= 12; ++k)
        if (series[k]) top = k;
      unsigned expect_top = 1;
      for (unsigned i = 1; i < n; ++i) expect_top *= p;
      if (series[1] != n) failed.push_back("H1 p=" + std::to_string(p) + " n=" + std::to_string(n));
      if (top != expect_top) failed.push_back("top p=" + std::to_string(p) + " n=" + std::to_string(n));
    }
  }
  const std::vector<std::pair<std::vector<std::uint64_t>, HilbertSeries>> fixed{
      {{1, 1}, hilbert_series(2, 1, 1)},
      {{1, 2, 1}, hilbert_series(2, 2, 2)},
      {{1, 3, 4, 2, 1}, hilbert_series(2, 3, 4)},
      {{1, 2, 1, 1}, hilbert_series(3, 2, 3)}};
  for (const auto& [want, got] : fixed)
    if (want != got) failed.push_back("fixed point");
  std::string detail = failed.empty() ? "recursion = orbit count = basis size for p<=3, n<=3, k<=12" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

std::size_t oracle_rank(std::vector<std::vector<unsigned>> m, unsigned p) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] % p == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    unsigned inv = 1;
    while (m[rank][c] * inv % p != 1) ++inv;
    for (auto& v : m[rank]) v = v * inv % p;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] % p == 0) continue;
      const unsigned f = m[r][c];
      for (std::size_t k = 0; k < cols; ++k) m[r][k] = (m[r][k] + (p - f) * m[rank][k]) % p;
    }
    ++rank;
  }
  return rank;
}

Outcome detection_rank() {
  std::size_t degrees = 0, full = 0;
  for (auto [p, n] : {std::pair{2u, 1u}, std::pair{2u, 2u}, std::pair{2u, 3u}, std::pair{3u, 2u}}) {
    const StableModel model(p, n);
    for (unsigned k = 0; k <= model.top_degree(n); ++k) {
      const auto m = model.detection_matrix(n, k);
      ++degrees;
      if (m.rows.size() == hilbert_series(p, n, k)[k] && oracle_rank(m.entries, p) == m.rows.size() &&
          m.full_rank())
        ++full;
    }
  }
  return {full == degrees, std::to_string(full) + "/" + std::to_string(degrees) + " degrees of full row rank"};
}

struct ElabClasses {
  std::vector<unsigned> ranks;  // one per conjugacy class of maximal subgroups, sorted
  std::set<Set> maximal;
  std::function<Set(const Set&)> canonical;
};

// Elementary abelian subgroups grown one generator at a time from the trivial
// group; a subgroup is maximal when no commuting element of order p extends it.
ElabClasses elab_oracle(const Table& t, unsigned p) {
  std::vector<Element> order_p;
  for (Element a = 0; a < t.order; ++a)
    if (a != t.identity && t.pow(a, p) == t.identity) order_p.push_back(a);
  std::set<Set> seen{{t.identity}};
  std::vector<Set> frontier{{t.identity}};
  ElabClasses out;
  while (!frontier.empty()) {
    std::vector<Set> next;
    for (const auto& s : frontier) {
      bool extended = false;
      for (auto a : order_p) {
        if (std::binary_search(s.begin(), s.end(), a)) continue;
        bool commutes = true;
        for (auto b : s) commutes = commutes && t(a, b) == t(b, a);
        if (!commutes) continue;
        extended = true;
        std::vector<Element> gens(s.begin(), s.end());
        gens.push_back(a);
        Set bigger = closure(t, gens);
        if (seen.insert(bigger).second) next.push_back(std::move(bigger));
      }
      if (!extended) out.maximal.insert(s);
    }
    frontier = std::move(next);
  }
  std::vector<Element> inverse(t.order);
  for (Element g = 0; g < t.order; ++g) inverse[g] = t.inv(g);
  out.canonical = [t, inverse](const Set& s) {
    Set best = s;
    for (Element g = 0; g < t.order; ++g) {
      Set c;
      for (auto x : s) c.push_back(t(t(g, x), inverse[g]));
      std::sort(c.begin(), c.end());
      best = std::min(best, c);
    }
    return best;
  };
  std::set<Set> classes;
  for (const auto& s : out.maximal) {
    if (!classes.insert(out.canonical(s)).second) continue;
    unsigned r = 0;
    for (std::size_t size = s.size(); size > 1; size /= p) ++r;
    out.ranks.push_back(r);
  }
  std::sort(out.ranks.begin(), out.ranks.end());
  return out;
}

Outcome maximal_elab() {
  std::vector<std::string> failed;
  for (auto [p, n] : {std::pair{2u, 2u}, std::pair{3u, 2u}, std::pair{2u, 3u}}) {
    const WreathTower t(p, n);
    const Table g(iterated(p, n));
    const auto oracle = elab_oracle(g, p);
    const auto descs = maximal_elem_abelians(t, n);
    std::vector<unsigned> ranks;
    std::set<Set> classes;
    unsigned best = 0;
    bool realized = true;
    for (const auto& d : descs) {
      std::vector<Element> gens;
      for (const auto& y : elab_generators(t, d)) gens.push_back(static_cast<Element>(t.encode(y)));
      const Set s = closure(g, gens);
      realized = realized && oracle.maximal.count(s) == 1;
      classes.insert(oracle.canonical(s));
      ranks.push_back(d.rank);
      best = std::max(best, d.rank);
    }
    std::sort(ranks.begin(), ranks.end());
    unsigned expect_best = 1;
    for (unsigned i = 1; i < n; ++i) expect_best *= p;
    const std::string tag = "G_" + std::to_string(n) + "(p=" + std::to_string(p) + ")";
    if (!realized) failed.push_back(tag + " realization");
    if (classes.size() != descs.size()) failed.push_back(tag + " duplicate classes");
    if (ranks != oracle.ranks) failed.push_back(tag + " class ranks");
    if (best != expect_best) failed.push_back(tag + " max rank");
    if (p == 2 && n == 2) {
      const auto dihedral = elab_oracle(Table(dihedral_group(8)), 2);
      if (dihedral.ranks != ranks) failed.push_back("D8");
    }
  }
  const auto q = elab_oracle(Table(quaternion_group()), 2);
  const auto qb = elem_abelians_bruteforce(quaternion_group());
  std::set<std::size_t> q_classes;
  for (std::size_t i = 0; i < qb.subgroups.size(); ++i)
    if (qb.maximal[i]) {
      q_classes.insert(qb.class_id[i]);
      if (qb.rank[i] != 1) failed.push_back("Q8 rank");
    }
  if (q.ranks != std::vector<unsigned>{1} || q_classes.size() != 1) failed.push_back("Q8");
  std::string detail = failed.empty() ? "descriptors match brute force on D8, Q8, G_2(p=3), G_3(p=2)" : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

Outcome ring_sanity() {
  const unsigned p = 2, n = 3;
  const StableModel m(p, n);
  std::vector<std::string> failed;
  const auto theta = m.basis_class(n, m.parse(n, "theta"));
  if (!m.multiply(theta, theta).is_zero()) failed.push_back("theta^2");
  for (std::size_t id = 0; id < m.basis(n).size(); ++id) {
    if (m.basis(n)[id].kind == BasisElement::Kind::Norm &&
        !m.multiply(theta, m.basis_class(n, id)).is_zero())
      failed.push_back("theta*" + m.format(n, id));
  }
  std::mt19937_64 rng(2024);
  auto random_class = [&](unsigned& degree) {
    degree = static_cast<unsigned>(rng() % (m.top_degree(n) + 1));
    StableClass c{p, n, {}};
    for (auto id : m.basis_in_degree(n, degree))
      if (rng() % 2) c.coords[id] = 1;
    return c;
  };
  std::size_t assoc = 0, comm = 0;
  const std::size_t trials = 1000;
  for (std::size_t k = 0; k < trials; ++k) {
    unsigned da = 0, db = 0, dc = 0;
    const auto a = random_class(da), b = random_class(db), c = random_class(dc);
    assoc += m.detect(m.multiply(m.multiply(a, b), c)) == m.detect(m.multiply(a, m.multiply(b, c)));
    // At p = 2 the Koszul sign is trivial.
    comm += m.detect(m.multiply(a, b)) == m.detect(m.multiply(b, a));
  }
  if (assoc != trials) failed.push_back("associativity " + std::to_string(assoc));
  if (comm != trials) failed.push_back("commutativity " + std::to_string(comm));
  std::string detail = failed.empty() ? "theta^2 = 0, theta*N = 0, 1000/1000 triples associative and commutative"
                                      : "failed:";
  for (const auto& f : failed) detail += " " + f;
  return {failed.empty(), detail};
}

Outcome sylow_grid() {
  using boost::multiprecision::cpp_int;
  std::size_t total = 0, hold = 0;
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (std::uint64_t q : {3, 5, 7}) {
      for (std::uint64_t p : {3, 5, 7}) {
        if (p == q) continue;
        cpp_int order = 1, qn = 1;
        for (std::uint64_t i = 0; i < n; ++i) qn *= q;
        cpp_int qi = 1;
        for (std::uint64_t i = 0; i < n; ++i) {
          order *= qn - qi;
          qi *= q;
        }
        std::uint64_t v = 0;
        while (order % p == 0) {
          order /= p;
          ++v;
        }
        ++total;
        hold += sylow_gl_parameters(n, q, p).exponent() == v;
      }
    }
  }
  return {hold == total, std::to_string(hold) + "/" + std::to_string(total) + " grid points"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "centralizer classification", 120, centralizer_classification},
      {2, "case-B isoclinism", 300, case_b_isoclinism},
      {3, "isoclinism classics", 0, isoclinism_classics},
      {4, "Hilbert series oracle", 10, hilbert_oracle},
      {5, "detection rank", 60, detection_rank},
      {6, "maximal elementary abelians", 120, maximal_elab},
      {7, "ring sanity", 0, ring_sanity},
      {8, "Sylow parameters", 1, sylow_grid},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_s <= 0 || secs <= c.limit_s;
    const bool pass = o.pass && in_time;
    failures += !pass;
    const std::string limit = c.limit_s > 0 ? "limit " + std::to_string(static_cast<int>(c.limit_s)) + "s" : "no limit";
    std::printf("%s criterion %d (%s): %s [%.2fs, %s]\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, limit.c_str());
  }
  return failures == 0 ? 0 : 1;
}
