#include "pwreath/group.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>

#include "pwreath/errors.hpp"

namespace pwreath {

struct FiniteGroup::Impl {
  std::size_t order = 1;
  Element identity = 0;
  std::vector<Element> table;  // row-major, empty when oracle-backed
  std::vector<Element> inverses;
  std::shared_ptr<const MultiplicationOracle> oracle;
  std::vector<std::string> labels;
  std::string name;
};

namespace {

class FunctionOracle final : public MultiplicationOracle {
 public:
  FunctionOracle(std::function<Element(Element, Element)> mul, std::function<Element(Element)> inv)
      : mul_(std::move(mul)), inv_(std::move(inv)) {}
  Element mul(Element a, Element b) const override { return mul_(a, b); }
  Element inverse(Element a) const override { return inv_(a); }

 private:
  std::function<Element(Element, Element)> mul_;
  std::function<Element(Element)> inv_;
};

std::size_t checked_mul(std::size_t a, std::size_t b, std::size_t cap) {
  if (a != 0 && b > cap / a) {
    throw OrderOverflow("group order exceeds cap " + std::to_string(cap));
  }
  const std::size_t r = a * b;
  if (r > cap) throw OrderOverflow("group order " + std::to_string(r) + " exceeds cap " + std::to_string(cap));
  return r;
}

struct PermHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto x : v) {
      h ^= x;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

FiniteGroup::FiniteGroup() {
  auto impl = std::make_shared<Impl>();
  impl->table = {0};
  impl->inverses = {0};
  impl->name = "trivial";
  impl_ = std::move(impl);
}

FiniteGroup::FiniteGroup(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

FiniteGroup FiniteGroup::from_table(std::size_t order, std::vector<Element> table,
                                    std::vector<std::string> labels) {
  if (order == 0) throw InvalidInput("group order must be positive");
  if (table.size() != order * order) {
    throw InvalidInput("multiplication table must have order^2 entries");
  }
  for (auto v : table) {
    if (v >= order) throw InvalidInput("table entry out of range: " + std::to_string(v));
  }
  if (!labels.empty() && labels.size() != order) {
    throw InvalidInput("labels must have one entry per element");
  }
  auto impl = std::make_shared<Impl>();
  impl->order = order;
  impl->table = std::move(table);
  impl->labels = std::move(labels);
  const auto& t = impl->table;

  std::optional<Element> identity;
  for (Element e = 0; e < order && !identity; ++e) {
    bool ok = true;
    for (Element x = 0; x < order && ok; ++x) {
      ok = t[e * order + x] == x && t[x * order + e] == x;
    }
    if (ok) identity = e;
  }
  if (!identity) throw InvalidInput("table has no two-sided identity");
  impl->identity = *identity;

  impl->inverses.assign(order, kUnset);
  for (Element a = 0; a < order; ++a) {
    for (Element b = 0; b < order; ++b) {
      if (t[a * order + b] == *identity) {
        if (t[b * order + a] != *identity) throw InvalidInput("inverse is not two-sided");
        impl->inverses[a] = b;
        break;
      }
    }
    if (impl->inverses[a] == kUnset) {
      throw InvalidInput("element " + std::to_string(a) + " has no inverse");
    }
  }
  return FiniteGroup(std::move(impl));
}

FiniteGroup FiniteGroup::from_oracle(std::size_t order, Element identity,
                                     std::shared_ptr<const MultiplicationOracle> oracle) {
  if (order == 0 || identity >= order) throw InvalidInput("bad order or identity");
  auto impl = std::make_shared<Impl>();
  impl->order = order;
  impl->identity = identity;
  impl->inverses.resize(order);
  for (Element a = 0; a < order; ++a) impl->inverses[a] = oracle->inverse(a);
  impl->oracle = std::move(oracle);
  return FiniteGroup(std::move(impl));
}

FiniteGroup FiniteGroup::from_rule(std::size_t order, Element identity,
                                   std::function<Element(Element, Element)> mul,
                                   std::function<Element(Element)> inverse) {
  if (order > kTableThreshold) {
    return from_oracle(order, identity,
                       std::make_shared<FunctionOracle>(std::move(mul), std::move(inverse)));
  }
  auto impl = std::make_shared<Impl>();
  impl->order = order;
  impl->identity = identity;
  impl->table.resize(order * order);
  impl->inverses.resize(order);
  for (Element a = 0; a < order; ++a) {
    impl->inverses[a] = inverse(a);
    for (Element b = 0; b < order; ++b) impl->table[a * order + b] = mul(a, b);
  }
  return FiniteGroup(std::move(impl));
}

FiniteGroup FiniteGroup::from_permutations(const std::vector<std::vector<std::uint32_t>>& gens,
                                           std::size_t degree, std::size_t cap) {
  for (const auto& g : gens) {
    if (g.size() != degree) throw InvalidInput("permutation length differs from degree");
    std::vector<char> seen(degree, 0);
    for (auto x : g) {
      if (x >= degree || seen[x]) throw InvalidInput("not a permutation");
      seen[x] = 1;
    }
  }
  struct State {
    std::vector<std::vector<std::uint32_t>> perms;
    std::unordered_map<std::vector<std::uint32_t>, Element, PermHash> index;
  };
  auto st = std::make_shared<State>();
  std::vector<std::uint32_t> id(degree);
  std::iota(id.begin(), id.end(), 0u);
  st->index.emplace(id, 0);
  st->perms.push_back(std::move(id));
  // (a*b)[x] = b[a[x]]: apply a first.
  auto compose = [](const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) r[x] = b[a[x]];
    return r;
  };
  for (std::size_t i = 0; i < st->perms.size(); ++i) {
    for (const auto& g : gens) {
      auto h = compose(st->perms[i], g);
      if (st->index.find(h) == st->index.end()) {
        if (st->perms.size() + 1 > cap) {
          throw OrderOverflow("permutation group exceeds cap " + std::to_string(cap));
        }
        st->index.emplace(h, static_cast<Element>(st->perms.size()));
        st->perms.push_back(std::move(h));
      }
    }
  }
  auto mul = [st, compose](Element a, Element b) {
    return st->index.at(compose(st->perms[a], st->perms[b]));
  };
  auto inv = [st](Element a) {
    const auto& p = st->perms[a];
    std::vector<std::uint32_t> r(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) r[p[x]] = static_cast<std::uint32_t>(x);
    return st->index.at(r);
  };
  return from_rule(st->perms.size(), 0, mul, inv);
}

std::size_t FiniteGroup::order() const { return impl_->order; }
Element FiniteGroup::identity() const { return impl_->identity; }

Element FiniteGroup::mul(Element a, Element b) const {
  if (!impl_->table.empty()) return impl_->table[a * impl_->order + b];
  return impl_->oracle->mul(a, b);
}

Element FiniteGroup::inverse(Element a) const { return impl_->inverses[a]; }

Element FiniteGroup::power(Element a, std::uint64_t e) const {
  Element result = identity();
  Element base = a;
  while (e > 0) {
    if (e & 1u) result = mul(result, base);
    base = mul(base, base);
    e >>= 1u;
  }
  return result;
}

Element FiniteGroup::commutator(Element a, Element b) const {
  return mul(mul(a, b), mul(inverse(a), inverse(b)));
}

std::uint64_t FiniteGroup::element_order(Element a) const {
  std::uint64_t k = 1;
  for (Element x = a; x != identity(); x = mul(x, a)) ++k;
  return k;
}

bool FiniteGroup::has_table() const { return !impl_->table.empty(); }
bool FiniteGroup::has_labels() const { return !impl_->labels.empty(); }

std::string FiniteGroup::label(Element a) const {
  return impl_->labels.empty() ? std::to_string(a) : impl_->labels[a];
}

const std::string& FiniteGroup::name() const { return impl_->name; }

FiniteGroup FiniteGroup::with_name(std::string name) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->name = std::move(name);
  return FiniteGroup(std::move(impl));
}

void check_group_axioms(const FiniteGroup& g, std::uint64_t seed) {
  const std::size_t n = g.order();
  const Element e = g.identity();
  for (Element a = 0; a < n; ++a) {
    if (g.mul(a, e) != a || g.mul(e, a) != a) throw InvalidInput("identity is not two-sided");
    if (g.mul(a, g.inverse(a)) != e || g.mul(g.inverse(a), a) != e) {
      throw InvalidInput("inverse fails for element " + std::to_string(a));
    }
  }
  auto check = [&](Element a, Element b, Element c) {
    if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) {
      throw InvalidInput("associativity fails at (" + std::to_string(a) + "," + std::to_string(b) +
                         "," + std::to_string(c) + ")");
    }
  };
  if (n <= 512) {
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b)
        for (Element c = 0; c < n; ++c) check(a, b, c);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Element> pick(0, static_cast<Element>(n - 1));
    for (int i = 0; i < 100000; ++i) check(pick(rng), pick(rng), pick(rng));
  }
}

Subgroup::Subgroup(FiniteGroup parent, std::vector<Element> members)
    : parent_(std::move(parent)), members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool Subgroup::contains(Element x) const {
  return std::binary_search(members_.begin(), members_.end(), x);
}

bool Subgroup::is_subset_of(const Subgroup& other) const {
  return std::includes(other.members_.begin(), other.members_.end(), members_.begin(),
                       members_.end());
}

bool GroupHom::is_homomorphism() const {
  if (map.size() != source.order()) return false;
  for (auto v : map)
    if (v >= target.order()) return false;
  if (map[source.identity()] != target.identity()) return false;
  for (Element a = 0; a < source.order(); ++a)
    for (Element b = 0; b < source.order(); ++b)
      if (map[source.mul(a, b)] != target.mul(map[a], map[b])) return false;
  return true;
}

bool GroupHom::is_bijective() const {
  if (source.order() != target.order() || map.size() != source.order()) return false;
  std::vector<char> hit(target.order(), 0);
  for (auto v : map) {
    if (v >= target.order() || hit[v]) return false;
    hit[v] = 1;
  }
  return true;
}

Subgroup generate(const FiniteGroup& g, std::span<const Element> gens) {
  std::vector<char> seen(g.order(), 0);
  std::vector<Element> members{g.identity()};
  seen[g.identity()] = 1;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (auto s : gens) {
      const Element y = g.mul(members[i], s);
      if (!seen[y]) {
        seen[y] = 1;
        members.push_back(y);
      }
    }
  }
  return Subgroup(g, std::move(members));
}

Subgroup whole_group(const FiniteGroup& g) {
  std::vector<Element> all(g.order());
  std::iota(all.begin(), all.end(), Element{0});
  return Subgroup(g, std::move(all));
}

Subgroup trivial_subgroup(const FiniteGroup& g) { return Subgroup(g, {g.identity()}); }

std::vector<std::uint64_t> element_orders(const FiniteGroup& g) {
  std::vector<std::uint64_t> out(g.order());
  for (Element a = 0; a < g.order(); ++a) out[a] = g.element_order(a);
  return out;
}

std::vector<Element> greedy_generators(const FiniteGroup& g) {
  const auto orders = element_orders(g);
  std::vector<Element> gens;
  Subgroup s = trivial_subgroup(g);
  while (s.order() < g.order()) {
    Element best = kUnset;
    for (Element x = 0; x < g.order(); ++x) {
      if (s.contains(x)) continue;
      if (best == kUnset || orders[x] > orders[best]) best = x;
    }
    gens.push_back(best);
    s = generate(g, gens);
  }
  return gens;
}

std::vector<Subgroup> all_subgroups(const FiniteGroup& g, std::size_t cap) {
  if (g.order() > cap) {
    throw CapExceeded("subgroup enumeration capped at order " + std::to_string(cap));
  }
  std::vector<Subgroup> found{trivial_subgroup(g)};
  for (std::size_t i = 0; i < found.size(); ++i) {
    for (Element x = 0; x < g.order(); ++x) {
      if (found[i].contains(x)) continue;
      std::vector<Element> gens = found[i].members();
      gens.push_back(x);
      Subgroup s = generate(g, gens);
      if (std::find(found.begin(), found.end(), s) == found.end()) found.push_back(std::move(s));
    }
  }
  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.order() != b.order()) return a.order() < b.order();
    return a.members() < b.members();
  });
  return found;
}

Subgroup center(const FiniteGroup& g) {
  const auto gens = greedy_generators(g);
  std::vector<Element> members;
  for (Element z = 0; z < g.order(); ++z) {
    bool central = true;
    for (auto s : gens) {
      if (g.mul(z, s) != g.mul(s, z)) {
        central = false;
        break;
      }
    }
    if (central) members.push_back(z);
  }
  return Subgroup(g, std::move(members));
}

Subgroup derived_subgroup(const FiniteGroup& g) {
  const std::size_t n = g.order();
  std::vector<char> is_comm(n, 0);
  std::vector<Element> comms;
  auto add = [&](Element c) {
    if (!is_comm[c]) {
      is_comm[c] = 1;
      comms.push_back(c);
    }
  };
  if (n <= kTableThreshold) {
    for (Element a = 0; a < n; ++a)
      for (Element b = 0; b < n; ++b) add(g.commutator(a, b));
    return generate(g, comms);
  }
  // Normal closure of the commutators of a generating set.
  const auto gens = greedy_generators(g);
  for (auto a : gens)
    for (auto b : gens) add(g.commutator(a, b));
  Subgroup s = generate(g, comms);
  for (;;) {
    std::vector<Element> extra;
    for (auto x : s.members()) {
      for (auto t : gens) {
        const Element y = g.mul(g.mul(t, x), g.inverse(t));
        if (!s.contains(y)) extra.push_back(y);
      }
    }
    if (extra.empty()) return s;
    std::vector<Element> all = s.members();
    all.insert(all.end(), extra.begin(), extra.end());
    s = generate(g, all);
  }
}

Subgroup centralizer_bruteforce(const FiniteGroup& g, Element x) {
  std::vector<Element> members;
  for (Element y = 0; y < g.order(); ++y) {
    if (g.mul(x, y) == g.mul(y, x)) members.push_back(y);
  }
  return Subgroup(g, std::move(members));
}

bool is_normal(const Subgroup& n) {
  const FiniteGroup& g = n.parent();
  for (auto t : greedy_generators(g)) {
    for (auto x : n.members()) {
      if (!n.contains(g.mul(g.mul(t, x), g.inverse(t)))) return false;
    }
  }
  return true;
}

Quotient quotient(const FiniteGroup& g, const Subgroup& n) {
  if (!is_normal(n)) throw NotNormal("subgroup is not normal");
  std::vector<Element> coset(g.order(), kUnset);
  std::vector<Element> reps;
  for (Element x = 0; x < g.order(); ++x) {
    if (coset[x] != kUnset) continue;
    const auto id = static_cast<Element>(reps.size());
    reps.push_back(x);
    for (auto m : n.members()) coset[g.mul(x, m)] = id;
  }
  auto mul = [g, reps, coset](Element a, Element b) { return coset[g.mul(reps[a], reps[b])]; };
  auto inv = [g, reps, coset](Element a) { return coset[g.inverse(reps[a])]; };
  FiniteGroup q = FiniteGroup::from_rule(reps.size(), coset[g.identity()], mul, inv)
                      .with_name(g.name().empty() ? "" : g.name() + "/N");
  return Quotient{q, GroupHom{g, q, coset}, reps};
}

Quotient abelianization(const FiniteGroup& g) { return quotient(g, derived_subgroup(g)); }

EmbeddedGroup subgroup_as_group(const Subgroup& s) {
  const FiniteGroup& g = s.parent();
  const auto& m = s.members();
  auto index = [m](Element x) {
    return static_cast<Element>(std::lower_bound(m.begin(), m.end(), x) - m.begin());
  };
  auto mul = [g, m, index](Element a, Element b) { return index(g.mul(m[a], m[b])); };
  auto inv = [g, m, index](Element a) { return index(g.inverse(m[a])); };
  FiniteGroup sub = FiniteGroup::from_rule(m.size(), index(g.identity()), mul, inv);
  return EmbeddedGroup{sub, GroupHom{sub, g, m}};
}

FiniteGroup direct_product(std::span<const FiniteGroup> factors, std::size_t cap) {
  if (factors.empty()) throw InvalidInput("direct product of no factors");
  std::vector<FiniteGroup> fs(factors.begin(), factors.end());
  std::vector<std::size_t> stride(fs.size());
  std::size_t order = 1;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    stride[i] = order;
    order = checked_mul(order, fs[i].order(), cap);
  }
  Element identity = 0;
  for (std::size_t i = 0; i < fs.size(); ++i) identity += fs[i].identity() * stride[i];
  auto mul = [fs, stride](Element a, Element b) {
    Element r = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto n = fs[i].order();
      const auto ai = static_cast<Element>((a / stride[i]) % n);
      const auto bi = static_cast<Element>((b / stride[i]) % n);
      r += fs[i].mul(ai, bi) * static_cast<Element>(stride[i]);
    }
    return r;
  };
  auto inv = [fs, stride](Element a) {
    Element r = 0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      const auto ai = static_cast<Element>((a / stride[i]) % fs[i].order());
      r += fs[i].inverse(ai) * static_cast<Element>(stride[i]);
    }
    return r;
  };
  std::string name;
  for (const auto& f : fs) name += (name.empty() ? "" : " x ") + f.name();
  return FiniteGroup::from_rule(order, identity, mul, inv).with_name(name);
}

FiniteGroup wreath_with_cyclic(const FiniteGroup& h, unsigned p, std::size_t cap) {
  if (p < 2) throw InvalidInput("wreath product needs p >= 2");
  std::size_t base = 1;
  for (unsigned i = 0; i < p; ++i) base = checked_mul(base, h.order(), cap);
  const std::size_t order = checked_mul(base, p, cap);
  const std::size_t hn = h.order();
  auto decode = [hn, p](Element a, std::vector<Element>& comps) {
    for (unsigned i = 0; i < p; ++i) {
      comps[i] = static_cast<Element>(a % hn);
      a = static_cast<Element>(a / hn);
    }
    return a;  // shift
  };
  auto encode = [hn, p, base](const std::vector<Element>& comps, unsigned shift) {
    std::size_t r = 0;
    for (unsigned i = p; i-- > 0;) r = r * hn + comps[i];
    return static_cast<Element>(r + shift * base);
  };
  auto mul = [h, p, decode, encode](Element a, Element b) {
    std::vector<Element> ca(p), cb(p), cr(p);
    const unsigned s = decode(a, ca);
    const unsigned t = decode(b, cb);
    for (unsigned i = 0; i < p; ++i) cr[i] = h.mul(ca[i], cb[(i + p - s) % p]);
    return encode(cr, (s + t) % p);
  };
  auto inv = [h, p, decode, encode](Element a) {
    std::vector<Element> ca(p), cr(p);
    const unsigned s = decode(a, ca);
    for (unsigned i = 0; i < p; ++i) cr[i] = h.inverse(ca[(i + s) % p]);
    return encode(cr, (p - s) % p);
  };
  std::vector<Element> idc(p, h.identity());
  return FiniteGroup::from_rule(order, encode(idc, 0), mul, inv)
      .with_name("(" + h.name() + ") wr Z/" + std::to_string(p));
}

std::vector<std::size_t> conjugacy_class_sizes(const FiniteGroup& g) {
  const auto gens = greedy_generators(g);
  std::vector<Element> cls(g.order(), kUnset);
  std::vector<std::size_t> sizes(g.order(), 0);
  for (Element x = 0; x < g.order(); ++x) {
    if (cls[x] != kUnset) continue;
    std::vector<Element> orbit{x};
    cls[x] = x;
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      for (auto t : gens) {
        const Element y = g.mul(g.mul(t, orbit[i]), g.inverse(t));
        if (cls[y] == kUnset) {
          cls[y] = x;
          orbit.push_back(y);
        }
      }
    }
    for (auto y : orbit) sizes[y] = orbit.size();
  }
  return sizes;
}

const char* to_string(SearchStatus s) {
  switch (s) {
    case SearchStatus::Found:
      return "found";
    case SearchStatus::NotFound:
      return "not_found";
    case SearchStatus::BudgetExhausted:
      return "budget_exhausted";
  }
  return "?";
}

namespace {

class IsoBacktracker {
 public:
  IsoBacktracker(const FiniteGroup& src, const FiniteGroup& dst, std::uint64_t budget,
                 const IsoSearchHooks& hooks)
      : src_(src), dst_(dst), budget_(budget), hooks_(hooks) {}

  IsoSearchResult run() {
    IsoSearchResult res;
    if (src_.order() != dst_.order()) return res;
    gens_ = greedy_generators(src_);
    const auto so = element_orders(src_);
    const auto to = element_orders(dst_);
    const bool use_fp = !hooks_.source_fingerprint.empty();
    cands_.resize(gens_.size());
    for (std::size_t k = 0; k < gens_.size(); ++k) {
      for (Element t = 0; t < dst_.order(); ++t) {
        if (so[gens_[k]] != to[t]) continue;
        if (use_fp && hooks_.source_fingerprint[gens_[k]] != hooks_.target_fingerprint[t]) continue;
        cands_[k].push_back(t);
      }
    }
    std::vector<Element> map(src_.order(), kUnset), inv(dst_.order(), kUnset);
    map[src_.identity()] = dst_.identity();
    inv[dst_.identity()] = src_.identity();
    images_.assign(gens_.size(), kUnset);
    const auto st = dfs(0, map, inv);
    res.status = st;
    res.nodes = nodes_;
    if (st == SearchStatus::Found) res.map = std::move(found_);
    return res;
  }

 private:
  bool extend(std::size_t k, std::vector<Element>& map, std::vector<Element>& inv) const {
    std::vector<Element> queue;
    for (Element x = 0; x < map.size(); ++x)
      if (map[x] != kUnset) queue.push_back(x);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      const Element x = queue[qi];
      for (std::size_t i = 0; i <= k; ++i) {
        const Element y = src_.mul(x, gens_[i]);
        const Element img = dst_.mul(map[x], images_[i]);
        if (map[y] == kUnset) {
          if (inv[img] != kUnset) return false;
          map[y] = img;
          inv[img] = y;
          queue.push_back(y);
        } else if (map[y] != img) {
          return false;
        }
      }
    }
    return true;
  }

  SearchStatus dfs(std::size_t k, const std::vector<Element>& map, const std::vector<Element>& inv) {
    if (k == gens_.size()) {
      if (!hooks_.accept || hooks_.accept(map)) {
        found_ = map;
        return SearchStatus::Found;
      }
      return SearchStatus::NotFound;
    }
    bool exhausted = false;
    for (auto t : cands_[k]) {
      if (inv[t] != kUnset) continue;
      if (++nodes_ > budget_) return SearchStatus::BudgetExhausted;
      images_[k] = t;
      auto m2 = map;
      auto i2 = inv;
      if (!extend(k, m2, i2)) continue;
      if (hooks_.partial_ok && !hooks_.partial_ok(m2)) continue;
      const auto st = dfs(k + 1, m2, i2);
      if (st == SearchStatus::Found) return st;
      if (st == SearchStatus::BudgetExhausted) {
        exhausted = true;
        break;
      }
    }
    return exhausted ? SearchStatus::BudgetExhausted : SearchStatus::NotFound;
  }

  const FiniteGroup& src_;
  const FiniteGroup& dst_;
  std::uint64_t budget_;
  const IsoSearchHooks& hooks_;
  std::vector<Element> gens_;
  std::vector<std::vector<Element>> cands_;
  std::vector<Element> images_;
  std::vector<Element> found_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

IsoSearchResult search_isomorphisms(const FiniteGroup& source, const FiniteGroup& target,
                                    std::uint64_t budget, const IsoSearchHooks& hooks) {
  return IsoBacktracker(source, target, budget, hooks).run();
}

IsomorphismResult isomorphism_search(const FiniteGroup& g, const FiniteGroup& h,
                                     std::uint64_t budget) {
  IsomorphismResult out;
  if (g.order() != h.order()) return out;
  auto fingerprint = [](const FiniteGroup& x) {
    const auto orders = element_orders(x);
    const auto classes = conjugacy_class_sizes(x);
    std::vector<std::uint64_t> fp(x.order());
    for (Element a = 0; a < x.order(); ++a) fp[a] = orders[a] * (x.order() + 1) + classes[a];
    return fp;
  };
  IsoSearchHooks hooks;
  hooks.source_fingerprint = fingerprint(g);
  hooks.target_fingerprint = fingerprint(h);
  auto sorted_g = hooks.source_fingerprint;
  auto sorted_h = hooks.target_fingerprint;
  std::sort(sorted_g.begin(), sorted_g.end());
  std::sort(sorted_h.begin(), sorted_h.end());
  if (sorted_g != sorted_h) return out;
  auto res = search_isomorphisms(g, h, budget, hooks);
  out.status = res.status;
  out.nodes = res.nodes;
  if (res.status == SearchStatus::Found) out.hom = GroupHom{g, h, std::move(res.map)};
  return out;
}

FiniteGroup cyclic_group(std::size_t m) {
  if (m == 0) throw InvalidInput("cyclic group order must be positive");
  return FiniteGroup::from_rule(
             m, 0, [m](Element a, Element b) { return static_cast<Element>((a + b) % m); },
             [m](Element a) { return static_cast<Element>((m - a) % m); })
      .with_name("cyclic:" + std::to_string(m));
}

FiniteGroup dihedral_group(std::size_t order) {
  if (order < 2 || order % 2 != 0) throw InvalidInput("dihedral group order must be even");
  const std::size_t m = order / 2;
  auto mul = [m](Element a, Element b) {
    const std::size_t i = a % m, ja = a / m, k = b % m, jb = b / m;
    const std::size_t rot = ja ? (i + m - k) % m : (i + k) % m;
    return static_cast<Element>(rot + m * (ja ^ jb));
  };
  auto inv = [m](Element a) {
    const std::size_t i = a % m;
    return a / m ? a : static_cast<Element>((m - i) % m);
  };
  return FiniteGroup::from_rule(order, 0, mul, inv).with_name("dihedral:" + std::to_string(order));
}

FiniteGroup quaternion_group() {
  // Units 1,i,j,k at 0..3; index = unit + 4 * negative.
  static constexpr int kSign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  static constexpr int kUnit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  std::vector<Element> table(64);
  for (Element a = 0; a < 8; ++a) {
    for (Element b = 0; b < 8; ++b) {
      const int ua = a % 4, ub = b % 4;
      int sign = kSign[ua][ub];
      if (a >= 4) sign = -sign;
      if (b >= 4) sign = -sign;
      table[a * 8 + b] = static_cast<Element>(kUnit[ua][ub] + (sign < 0 ? 4 : 0));
    }
  }
  return FiniteGroup::from_table(8, std::move(table), {"1", "i", "j", "k", "-1", "-i", "-j", "-k"})
      .with_name("quaternion8");
}

FiniteGroup elementary_abelian(unsigned p, unsigned rank, std::size_t cap) {
  if (!is_prime(p)) throw InvalidInput("elementary abelian group needs a prime");
  std::size_t order = 1;
  for (unsigned i = 0; i < rank; ++i) order = checked_mul(order, p, cap);
  auto mul = [p, rank](Element a, Element b) {
    Element r = 0, place = 1;
    for (unsigned i = 0; i < rank; ++i) {
      r += ((a % p + b % p) % p) * place;
      a /= p;
      b /= p;
      place *= p;
    }
    return r;
  };
  auto inv = [p, rank](Element a) {
    Element r = 0, place = 1;
    for (unsigned i = 0; i < rank; ++i) {
      r += ((p - a % p) % p) * place;
      a /= p;
      place *= p;
    }
    return r;
  };
  return FiniteGroup::from_rule(order, 0, mul, inv)
      .with_name("elab:" + std::to_string(p) + "^" + std::to_string(rank));
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace pwreath
