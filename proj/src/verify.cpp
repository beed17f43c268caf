#include "pwreath/verify.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "pwreath/errors.hpp"
#include "pwreath/isoclinism.hpp"
#include "pwreath/parallel.hpp"
#include "pwreath/stabcoh.hpp"

namespace pwreath {

bool SuiteResult::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> names{"lemma-centralizers", "isoclinism-classics",
                                              "detection-rank", "hilbert-oracle",
                                              "sylow-valuation"};
  return names;
}

namespace {

std::string tower_name(unsigned p, unsigned n) {
  return "wreath:p=" + std::to_string(p) + ",n=" + std::to_string(n);
}

std::string ratio(std::size_t good, std::size_t total) {
  return std::to_string(good) + "/" + std::to_string(total);
}

struct ElementVerdict {
  bool agree = false;
  bool case_ok = false;
  CentralizerCase which = CentralizerCase::A;
  bool normal_form_ok = true;
  bool isoclinic_ok = true;
};

void centralizer_checks(unsigned p, unsigned n, std::vector<Check>& out) {
  const WreathTower t(p, n);
  const FiniteGroup g = t.materialize(n);
  const FiniteGroup h = t.materialize(n - 1 == 0 ? 1 : n - 1);
  std::vector<ElementVerdict> verdicts(g.order());

  parallel_for(g.order(), [&](std::size_t i) {
    ElementVerdict& v = verdicts[i];
    const WreathElement x = t.decode(n, i);
    const CentralizerReport r = classify_centralizer(t, x);
    v.which = r.which;
    std::vector<Element> gens;
    for (const auto& y : r.generators) gens.push_back(static_cast<Element>(t.encode(y)));
    const Subgroup generated = generate(g, gens);
    const Subgroup brute = centralizer_bruteforce(g, static_cast<Element>(i));
    std::uint64_t expected_order = 1;
    for (std::size_t k = 0; k < r.core.exponent; ++k) expected_order *= p;
    v.agree = generated == brute && brute.order() == expected_order;

    bool surjects = false;
    for (auto m : brute.members()) surjects = surjects || t.shift(t.decode(n, m)) != 0;
    const CentralizerCase expected = t.shift(x) != 0 ? CentralizerCase::B
                                     : surjects       ? CentralizerCase::C
                                                      : CentralizerCase::A;
    v.case_ok = r.which == expected;
    if (r.which != CentralizerCase::B) return;

    const NormalFormB nf = normal_form_case_b(t, x);
    v.normal_form_ok = t.conjugate(nf.conjugator, x) == nf.canonical &&
                       t.shift(nf.canonical) == t.shift(x) &&
                       t.component(nf.canonical, 0) == nf.a;
    for (unsigned k = 1; k < p; ++k)
      v.normal_form_ok = v.normal_form_ok && t.is_identity(t.component(nf.canonical, k));

    const EmbeddedGroup zx = subgroup_as_group(brute);
    const Subgroup za = centralizer_bruteforce(h, static_cast<Element>(t.encode(nf.a)));
    const FiniteGroup factors[] = {subgroup_as_group(za).group, cyclic_group(p)};
    const IsoclinismResult res = is_isoclinic(zx.group, direct_product(factors));
    v.isoclinic_ok = res.isoclinic() && res.witness->square_verified;
  });

  std::size_t agree = 0, case_ok = 0, nf_ok = 0, iso_ok = 0, case_b = 0;
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& v : verdicts) {
    agree += v.agree;
    case_ok += v.case_ok;
    counts[static_cast<int>(v.which)]++;
    if (v.which == CentralizerCase::B) {
      ++case_b;
      nf_ok += v.normal_form_ok;
      iso_ok += v.isoclinic_ok;
    }
  }
  const std::string name = tower_name(p, n);
  const std::size_t total = verdicts.size();
  out.push_back({"centralizers " + name, agree == total,
                 ratio(agree, total) + " agree with brute force"});
  out.push_back({"case exclusivity " + name, case_ok == total,
                 ratio(case_ok, total) + " match the brute-force case condition (A=" +
                     std::to_string(counts[0]) + " B=" + std::to_string(counts[1]) +
                     " C=" + std::to_string(counts[2]) + ")"});
  out.push_back({"case-b normal form " + name, nf_ok == case_b, ratio(nf_ok, case_b)});
  out.push_back({"case-b isoclinism " + name, iso_ok == case_b,
                 ratio(iso_ok, case_b) + " witnesses verified"});
}

void isoclinism_classics(std::vector<Check>& out) {
  const FiniteGroup d8 = dihedral_group(8);
  const FiniteGroup q8 = quaternion_group();
  const FiniteGroup c2 = cyclic_group(2);
  const FiniteGroup c3 = cyclic_group(3);

  const IsoclinismResult dq = is_isoclinic(d8, q8);
  const bool dq_ok = dq.isoclinic() && dq.witness->square_verified && verify_witness(*dq.witness);
  out.push_back({"D8 ~ Q8", dq_ok, dq_ok ? "witness verified" : dq.reason});

  const IsoclinismResult de = is_isoclinic(d8, elementary_abelian(2, 3));
  out.push_back({"D8 !~ (Z/2)^3", de.status == SearchStatus::NotFound, de.reason});

  const WreathTower t3(3, 2);
  const std::vector<std::pair<std::string, std::pair<FiniteGroup, FiniteGroup>>> ext{
      {"D8 ~ D8 x Z/2", {d8, c2}},
      {"Q8 ~ Q8 x Z/2", {q8, c2}},
      {"G_2(p=3) ~ G_2(p=3) x Z/3", {t3.materialize(2), c3}}};
  for (const auto& [name, pair] : ext) {
    const auto r = isoclinic_to_abelian_extension(pair.first, pair.second);
    out.push_back({name, r.isoclinic() && r.witness->square_verified, to_string(r.status)});
  }

  if (dq.isoclinic()) {
    const HallReport hall = hall_correspondence_spotcheck(*dq.witness);
    std::size_t pass = 0, subgroups = 0, centralizers = 0;
    for (const auto& pr : hall.pairs) {
      pass += pr.verdict == SearchStatus::Found;
      (pr.from_centralizer ? centralizers : subgroups)++;
    }
    out.push_back({"Hall correspondence D8/Q8", hall.all_pass(),
                   ratio(pass, hall.pairs.size()) + " pairs (" + std::to_string(subgroups) +
                       " subgroups over the center, " + std::to_string(centralizers) +
                       " centralizers)"});
  } else {
    out.push_back({"Hall correspondence D8/Q8", false, "no witness"});
  }

  const FiniteGroup d8c2_factors[] = {d8, c2};
  const FiniteGroup d8c2 = direct_product(d8c2_factors);
  const bool trans = is_isoclinic(d8, d8c2).isoclinic() && is_isoclinic(q8, d8c2).isoclinic() &&
                     dq.isoclinic();
  out.push_back({"transitivity on {D8, Q8, D8 x Z/2}", trans, ""});

  const FiniteGroup d8c3_factors[] = {d8, c3};
  const auto r = is_isoclinic(direct_product(d8c3_factors), q8);
  out.push_back({"D8 x Z/3 ~ Q8", r.isoclinic(), to_string(r.status)});
}

StableClass random_class(const StableModel& m, unsigned level, std::mt19937_64& rng) {
  std::uniform_int_distribution<unsigned> deg(0, m.top_degree(level));
  std::uniform_int_distribution<unsigned> coef(0, m.p() - 1);
  StableClass c{m.p(), level, {}};
  for (auto id : m.basis_in_degree(level, deg(rng))) {
    const unsigned v = coef(rng);
    if (v) c.coords[id] = v;
  }
  return c;
}

unsigned class_degree(const StableModel& m, const StableClass& c) {
  return c.is_zero() ? 0 : m.basis(c.level)[c.coords.begin()->first].degree;
}

void ring_laws(unsigned p, unsigned n, std::size_t trials, std::uint64_t seed,
               std::vector<Check>& out) {
  const StableModel m(p, n);
  std::mt19937_64 rng(seed);
  std::size_t assoc = 0, comm = 0;
  for (std::size_t i = 0; i < trials; ++i) {
    const StableClass a = random_class(m, n, rng);
    const StableClass b = random_class(m, n, rng);
    const StableClass c = random_class(m, n, rng);
    assoc += m.multiply(m.multiply(a, b), c) == m.multiply(a, m.multiply(b, c));
    const bool odd = class_degree(m, a) % 2 && class_degree(m, b) % 2;
    comm += m.multiply(a, b) == m.multiply(b, a).scaled(odd ? p - 1 : 1);
  }
  const std::string where = " p=" + std::to_string(p) + " n=" + std::to_string(n);
  out.push_back({"associativity" + where, assoc == trials, ratio(assoc, trials)});
  out.push_back({"graded commutativity" + where, comm == trials, ratio(comm, trials)});
}

void detection_rank(std::uint64_t seed, std::vector<Check>& out) {
  const std::vector<std::pair<unsigned, unsigned>> grid{{2, 1}, {2, 2}, {2, 3}, {3, 2}};
  for (auto [p, n] : grid) {
    const StableModel model(p, n);
    bool ok = true;
    std::string detail;
    for (unsigned k = 0; k <= model.top_degree(n); ++k) {
      const DetectionMatrix m = model.detection_matrix(n, k);
      ok = ok && m.full_rank();
      detail += (detail.empty() ? "" : " ") + ratio(m.rank, m.rows.size());
    }
    out.push_back({"detection rank p=" + std::to_string(p) + " n=" + std::to_string(n), ok,
                   "rank/rows by degree: " + detail});
  }
  ring_laws(2, 3, 1000, seed, out);
}

void hilbert_oracle(std::vector<Check>& out) {
  constexpr unsigned kMaxDegree = 12;
  for (unsigned p : {2u, 3u}) {
    for (unsigned n = 1; n <= 3; ++n) {
      const HilbertSeries h = hilbert_series(p, n, kMaxDegree);
      const StableModel model(p, n);
      bool ok = true;
      for (unsigned k = 0; k <= kMaxDegree; ++k)
        ok = ok && h[k] == model.basis_in_degree(n, k).size();
      unsigned top = 0;
      for (unsigned k = 0; k <= kMaxDegree; ++k)
        if (h[k]) top = k;
      unsigned expected_top = 1;
      for (unsigned i = 1; i < n; ++i) expected_top *= p;
      std::ostringstream detail;
      detail << "[";
      for (unsigned k = 0; k <= top; ++k) detail << (k ? "," : "") << h[k];
      detail << "] degrees 0.." << kMaxDegree << ", H^1=" << h[1] << ", top=" << top;
      out.push_back({"hilbert p=" + std::to_string(p) + " n=" + std::to_string(n),
                     ok && h[1] == n && top == expected_top, detail.str()});
    }
  }
  const std::vector<std::pair<std::pair<unsigned, unsigned>, HilbertSeries>> fixed{
      {{2, 1}, {1, 1}}, {{2, 2}, {1, 2, 1}}, {{2, 3}, {1, 3, 4, 2, 1}}, {{3, 2}, {1, 2, 1, 1}}};
  for (const auto& [pn, expect] : fixed) {
    const auto h = hilbert_series(pn.first, pn.second, static_cast<unsigned>(expect.size() + 2));
    HilbertSeries padded = expect;
    padded.resize(h.size(), 0);
    out.push_back({"fixed point p=" + std::to_string(pn.first) + " n=" + std::to_string(pn.second),
                   h == padded, ""});
  }
}

void sylow_valuation(std::vector<Check>& out) {
  std::size_t good = 0, total = 0;
  std::string first_bad;
  for (std::uint64_t n = 1; n <= 6; ++n) {
    for (std::uint64_t q : {3, 5, 7}) {
      for (std::uint64_t p : {3, 5, 7}) {
        if (p == q) continue;
        ++total;
        const auto s = sylow_gl_parameters(n, q, p);
        if (s.exponent() == gl_order_valuation(n, q, p)) {
          ++good;
        } else if (first_bad.empty()) {
          first_bad = " first mismatch n=" + std::to_string(n) + " q=" + std::to_string(q) +
                      " p=" + std::to_string(p);
        }
      }
    }
  }
  out.push_back({"sylow exponent identity", good == total, ratio(good, total) + first_bad});
}

}  // namespace

ElabAgreement compare_elab_descriptors(const WreathTower& t, unsigned level) {
  ElabAgreement result;
  const FiniteGroup g = t.materialize(level);
  const ElabEnumeration en = elem_abelians_bruteforce(g);
  std::map<std::vector<Element>, std::size_t> index;
  for (std::size_t i = 0; i < en.subgroups.size(); ++i) index.emplace(en.subgroups[i].members(), i);
  std::set<std::size_t> maximal_classes;
  for (std::size_t i = 0; i < en.subgroups.size(); ++i)
    if (en.maximal[i]) maximal_classes.insert(en.class_id[i]);

  const auto descs = maximal_elem_abelians(t, level);
  std::set<std::size_t> hit;
  bool ok = true;
  for (const auto& d : descs) {
    std::vector<Element> gens;
    for (const auto& y : elab_generators(t, d)) gens.push_back(static_cast<Element>(t.encode(y)));
    const Subgroup s = generate(g, gens);
    auto it = index.find(s.members());
    if (it == index.end()) {
      ok = false;
      result.detail = to_string(d) + " is not elementary abelian";
      continue;
    }
    const std::size_t i = it->second;
    if (en.rank[i] != d.rank || !en.maximal[i]) {
      ok = false;
      result.detail = to_string(d) + " has wrong rank or is not maximal";
    }
    if (!hit.insert(en.class_id[i]).second) {
      ok = false;
      result.detail = to_string(d) + " is conjugate to an earlier descriptor";
    }
  }
  result.descriptor_classes = descs.size();
  result.bruteforce_classes = maximal_classes.size();
  result.agrees = ok && hit == maximal_classes;
  if (result.agrees) result.detail = "descriptors match all maximal classes";
  else if (result.detail.empty()) result.detail = "some maximal class has no descriptor";
  return result;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  SuiteResult r{name, {}};
  if (name == "lemma-centralizers") {
    centralizer_checks(2, 2, r.checks);
    centralizer_checks(2, 3, r.checks);
    centralizer_checks(3, 2, r.checks);
  } else if (name == "isoclinism-classics") {
    isoclinism_classics(r.checks);
  } else if (name == "detection-rank") {
    detection_rank(seed, r.checks);
  } else if (name == "hilbert-oracle") {
    hilbert_oracle(r.checks);
  } else if (name == "sylow-valuation") {
    sylow_valuation(r.checks);
  } else {
    throw InvalidInput("unknown verify suite '" + name + "'");
  }
  return r;
}

}  // namespace pwreath
