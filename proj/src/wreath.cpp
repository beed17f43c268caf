#include "pwreath/wreath.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <map>
#include <unordered_map>

#include "pwreath/errors.hpp"

namespace pwreath {

namespace {

using Digit = std::uint8_t;

// Raw recursive arithmetic on flat digit arrays. `ex` is the exponent table.
void mul_raw(const std::vector<std::size_t>& ex, unsigned p, unsigned level, const Digit* a,
             const Digit* b, Digit* out) {
  if (level == 0) return;
  const std::size_t w = ex[level - 1];
  const unsigned s = a[p * w];
  const unsigned t = b[p * w];
  for (unsigned i = 0; i < p; ++i) {
    const unsigned j = (i + p - s) % p;
    mul_raw(ex, p, level - 1, a + i * w, b + j * w, out + i * w);
  }
  out[p * w] = static_cast<Digit>((s + t) % p);
}

void inv_raw(const std::vector<std::size_t>& ex, unsigned p, unsigned level, const Digit* a,
             Digit* out) {
  if (level == 0) return;
  const std::size_t w = ex[level - 1];
  const unsigned s = a[p * w];
  for (unsigned i = 0; i < p; ++i) inv_raw(ex, p, level - 1, a + ((i + s) % p) * w, out + i * w);
  out[p * w] = static_cast<Digit>((p - s) % p);
}

struct ParseNode {
  bool leaf = true;
  unsigned digit = 0;
  std::vector<ParseNode> children;
  std::optional<unsigned> shift;
};

class ElementParser {
 public:
  explicit ElementParser(std::string_view s) : s_(s) {}

  ParseNode parse() {
    ParseNode n = node();
    skip();
    if (pos_ != s_.size()) fail("trailing characters");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidInput("element syntax: " + what + " at offset " + std::to_string(pos_) +
                       " in '" + std::string(s_) + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  unsigned number() {
    skip();
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      fail("expected a digit");
    }
    unsigned v = 0;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      v = v * 10 + static_cast<unsigned>(s_[pos_++] - '0');
      if (v > 1000) fail("number too large");
    }
    return v;
  }
  ParseNode node() {
    skip();
    ParseNode n;
    if (pos_ < s_.size() && s_[pos_] == '[') {
      ++pos_;
      n.leaf = false;
      n.children.push_back(node());
      skip();
      while (pos_ < s_.size() && s_[pos_] == ',') {
        ++pos_;
        n.children.push_back(node());
        skip();
      }
      if (pos_ < s_.size() && s_[pos_] == ';') {
        ++pos_;
        n.shift = number();
        skip();
      }
      if (pos_ >= s_.size() || s_[pos_] != ']') fail("expected ']'");
      ++pos_;
      return n;
    }
    n.digit = number();
    return n;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

std::uint64_t pow_u64(std::uint64_t b, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e--) r *= b;
  return r;
}

}  // namespace

WreathTower::WreathTower(unsigned p, unsigned n, std::size_t cap) : p_(p), n_(n) {
  if (p < 2 || p > 255 || !is_prime(p)) {
    throw InvalidInput("wreath tower needs a prime p < 256, got " + std::to_string(p));
  }
  if (n < 1) throw InvalidInput("wreath tower needs at least one level");
  exponent_.push_back(0);
  for (unsigned k = 1; k <= n; ++k) exponent_.push_back(p * exponent_.back() + 1);
  std::size_t order = 1;
  for (std::size_t i = 0; i < exponent_.back(); ++i) {
    if (order > cap / p) {
      throw OrderOverflow("G_" + std::to_string(n) + " at p=" + std::to_string(p) +
                          " has order " + std::to_string(p) + "^" +
                          std::to_string(exponent_.back()) + ", above the cap " +
                          std::to_string(cap));
    }
    order *= p;
  }
}

std::size_t WreathTower::exponent(unsigned level) const {
  if (level > n_) throw LevelMismatch("level " + std::to_string(level) + " above tower height");
  return exponent_[level];
}

std::uint64_t WreathTower::order(unsigned level) const { return pow_u64(p_, exponent(level)); }

void WreathTower::check_level(const WreathElement& x, unsigned level) const {
  if (x.level != level || level > n_ || x.digits.size() != exponent_[level]) {
    throw LevelMismatch("expected an element of level " + std::to_string(level) + ", got level " +
                        std::to_string(x.level));
  }
}

WreathElement WreathTower::identity(unsigned level) const {
  return WreathElement{level, std::vector<Digit>(exponent(level), 0)};
}

WreathElement WreathTower::rotation(unsigned level) const {
  if (level == 0) throw LevelMismatch("level 0 has no rotation");
  WreathElement r = identity(level);
  r.digits.back() = 1;
  return r;
}

WreathElement WreathTower::diagonal(const WreathElement& y) const {
  return assemble(std::vector<WreathElement>(p_, y), 0);
}

WreathElement WreathTower::embed(const WreathElement& y, unsigned i) const {
  std::vector<WreathElement> comps(p_, identity(y.level));
  comps[i] = y;
  return assemble(comps, 0);
}

WreathElement WreathTower::assemble(const std::vector<WreathElement>& components,
                                    unsigned shift) const {
  if (components.size() != p_) throw InvalidInput("expected exactly p components");
  const unsigned level = components[0].level + 1;
  WreathElement out{level, {}};
  out.digits.reserve(exponent(level));
  for (const auto& c : components) {
    check_level(c, level - 1);
    out.digits.insert(out.digits.end(), c.digits.begin(), c.digits.end());
  }
  out.digits.push_back(static_cast<Digit>(shift % p_));
  return out;
}

WreathElement WreathTower::component(const WreathElement& x, unsigned i) const {
  if (x.level == 0) throw LevelMismatch("level 0 has no components");
  const std::size_t w = exponent_[x.level - 1];
  WreathElement c{x.level - 1, {}};
  c.digits.assign(x.digits.begin() + i * w, x.digits.begin() + (i + 1) * w);
  return c;
}

WreathElement WreathTower::multiply(const WreathElement& a, const WreathElement& b) const {
  check_level(a, a.level);
  check_level(b, a.level);
  WreathElement out{a.level, std::vector<Digit>(a.digits.size())};
  mul_raw(exponent_, p_, a.level, a.digits.data(), b.digits.data(), out.digits.data());
  return out;
}

WreathElement WreathTower::inverse(const WreathElement& a) const {
  check_level(a, a.level);
  WreathElement out{a.level, std::vector<Digit>(a.digits.size())};
  inv_raw(exponent_, p_, a.level, a.digits.data(), out.digits.data());
  return out;
}

WreathElement WreathTower::power(const WreathElement& a, std::uint64_t e) const {
  WreathElement result = identity(a.level);
  WreathElement base = a;
  while (e) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return result;
}

WreathElement WreathTower::conjugate(const WreathElement& g, const WreathElement& x) const {
  return multiply(multiply(g, x), inverse(g));
}

bool WreathTower::is_identity(const WreathElement& x) const {
  return std::all_of(x.digits.begin(), x.digits.end(), [](Digit d) { return d == 0; });
}

std::uint64_t WreathTower::encode(const WreathElement& x) const {
  std::uint64_t idx = 0;
  for (std::size_t k = x.digits.size(); k-- > 0;) idx = idx * p_ + x.digits[k];
  return idx;
}

WreathElement WreathTower::decode(unsigned level, std::uint64_t index) const {
  WreathElement x = identity(level);
  for (auto& d : x.digits) {
    d = static_cast<Digit>(index % p_);
    index /= p_;
  }
  if (index != 0) throw InvalidInput("index out of range for level " + std::to_string(level));
  return x;
}

FiniteGroup WreathTower::materialize(unsigned level) const {
  const std::uint64_t n = order(level);
  const unsigned p = p_;
  auto decode_raw = [p](std::uint64_t idx, Digit* out, std::size_t len) {
    for (std::size_t k = 0; k < len; ++k) {
      out[k] = static_cast<Digit>(idx % p);
      idx /= p;
    }
  };
  auto encode_raw = [p](const Digit* in, std::size_t len) {
    std::uint64_t idx = 0;
    for (std::size_t k = len; k-- > 0;) idx = idx * p + in[k];
    return static_cast<Element>(idx);
  };
  const std::size_t len = exponent(level);
  auto ex = exponent_;
  auto mul = [=](Element a, Element b) {
    Digit da[256], db[256], dc[256];
    std::vector<Digit> big;
    Digit *pa = da, *pb = db, *pc = dc;
    if (len > 256) {
      big.resize(3 * len);
      pa = big.data();
      pb = pa + len;
      pc = pb + len;
    }
    decode_raw(a, pa, len);
    decode_raw(b, pb, len);
    mul_raw(ex, p, level, pa, pb, pc);
    return encode_raw(pc, len);
  };
  auto inv = [=](Element a) {
    Digit da[256], dc[256];
    std::vector<Digit> big;
    Digit *pa = da, *pc = dc;
    if (len > 256) {
      big.resize(2 * len);
      pa = big.data();
      pc = pa + len;
    }
    decode_raw(a, pa, len);
    inv_raw(ex, p, level, pa, pc);
    return encode_raw(pc, len);
  };
  return FiniteGroup::from_rule(n, 0, mul, inv)
      .with_name("wreath:p=" + std::to_string(p_) + ",n=" + std::to_string(level));
}

WreathElement WreathTower::random(unsigned level, std::mt19937_64& rng) const {
  WreathElement x = identity(level);
  std::uniform_int_distribution<unsigned> dist(0, p_ - 1);
  for (auto& d : x.digits) d = static_cast<Digit>(dist(rng));
  return x;
}

WreathElement WreathTower::parse(unsigned level, std::string_view text) const {
  if (level < 1 || level > n_) {
    throw LevelMismatch("level " + std::to_string(level) + " outside 1.." + std::to_string(n_));
  }
  const ParseNode root = ElementParser(text).parse();
  std::function<WreathElement(const ParseNode&, unsigned)> build =
      [&](const ParseNode& node, unsigned lv) -> WreathElement {
    if (lv == 1) {
      if (!node.leaf) throw InvalidInput("level-1 element must be a single digit");
      if (node.digit >= p_) throw InvalidInput("digit " + std::to_string(node.digit) + " >= p");
      return WreathElement{1, {static_cast<Digit>(node.digit)}};
    }
    if (node.leaf) {
      throw InvalidInput("level-" + std::to_string(lv) + " element must be bracketed");
    }
    const std::vector<ParseNode>* comps = &node.children;
    if (comps->size() == 1 && !(*comps)[0].leaf && !(*comps)[0].shift &&
        (*comps)[0].children.size() == p_) {
      comps = &(*comps)[0].children;
    }
    if (comps->size() != p_) {
      throw InvalidInput("level-" + std::to_string(lv) + " element needs " + std::to_string(p_) +
                         " components, got " + std::to_string(comps->size()));
    }
    const unsigned s = node.shift.value_or(0);
    if (s >= p_) throw InvalidInput("shift " + std::to_string(s) + " >= p");
    std::vector<WreathElement> parts;
    for (const auto& c : *comps) parts.push_back(build(c, lv - 1));
    return assemble(parts, s);
  };
  return build(root, level);
}

std::string WreathTower::format(const WreathElement& x) const {
  if (x.level == 1) return std::to_string(x.digits[0]);
  std::string out = "[";
  for (unsigned i = 0; i < p_; ++i) {
    if (i) out += ',';
    out += format(component(x, i));
  }
  if (shift(x) != 0) out += ';' + std::to_string(shift(x));
  out += ']';
  return out;
}

std::optional<WreathElement> conjugator(const WreathTower& t, const WreathElement& x,
                                        const WreathElement& y) {
  t.check_level(y, x.level);
  if (x.level <= 1) {
    if (x == y) return t.identity(x.level);
    return std::nullopt;
  }
  const unsigned s = t.shift(x);
  if (s != t.shift(y)) return std::nullopt;
  if (s != 0) {
    const NormalFormB nx = normal_form_case_b(t, x);
    const NormalFormB ny = normal_form_case_b(t, y);
    auto d = conjugator(t, nx.a, ny.a);
    if (!d) return std::nullopt;
    return t.multiply(t.multiply(t.inverse(ny.conjugator), t.diagonal(*d)), nx.conjugator);
  }
  const unsigned p = t.p();
  std::vector<WreathElement> xs, ys;
  for (unsigned i = 0; i < p; ++i) {
    xs.push_back(t.component(x, i));
    ys.push_back(t.component(y, i));
  }
  for (unsigned tau = 0; tau < p; ++tau) {
    std::vector<WreathElement> u;
    for (unsigned i = 0; i < p; ++i) {
      auto c = conjugator(t, xs[(i + p - tau) % p], ys[i]);
      if (!c) break;
      u.push_back(std::move(*c));
    }
    if (u.size() == p) return t.assemble(u, tau);
  }
  return std::nullopt;
}

NormalFormB normal_form_case_b(const WreathTower& t, const WreathElement& x) {
  if (x.level < 2 || t.shift(x) == 0) {
    throw NotCaseB("normal form needs level >= 2 and a nonzero shift");
  }
  const unsigned p = t.p();
  const unsigned s = t.shift(x);
  std::vector<WreathElement> c(p, t.identity(x.level - 1));
  // c_{ks} = c_{(k-1)s} x_{ks}^{-1}, starting from c_0 = id.
  for (unsigned k = 1; k < p; ++k) {
    const unsigned i = (k * s) % p;
    const unsigned prev = ((k - 1) * s) % p;
    c[i] = t.multiply(c[prev], t.inverse(t.component(x, i)));
  }
  NormalFormB nf;
  nf.conjugator = t.assemble(c, 0);
  nf.canonical = t.conjugate(nf.conjugator, x);
  nf.a = t.component(nf.canonical, 0);
  return nf;
}

const char* to_string(CentralizerCase c) {
  switch (c) {
    case CentralizerCase::A:
      return "A";
    case CentralizerCase::B:
      return "B";
    case CentralizerCase::C:
      return "C";
  }
  return "?";
}

namespace {

// For shift-0 x: conjugators d_i with d_i x_i d_i^-1 = x_0, if all exist.
std::optional<std::vector<WreathElement>> align_components(const WreathTower& t,
                                                           const WreathElement& x) {
  const WreathElement x0 = t.component(x, 0);
  std::vector<WreathElement> d{t.identity(x.level - 1)};
  for (unsigned i = 1; i < t.p(); ++i) {
    auto c = conjugator(t, t.component(x, i), x0);
    if (!c) return std::nullopt;
    d.push_back(std::move(*c));
  }
  return d;
}

void push_unique(const WreathTower& t, std::vector<WreathElement>& out, WreathElement g) {
  if (t.is_identity(g)) return;
  if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(std::move(g));
}

}  // namespace

CentralizerReport classify_centralizer(const WreathTower& t, const WreathElement& x) {
  if (x.level < 2) throw LevelMismatch("centralizer classification needs level >= 2");
  t.check_level(x, x.level);
  const unsigned p = t.p();
  CentralizerReport r;
  r.conjugator = t.identity(x.level);
  r.core.level = x.level;

  if (t.shift(x) != 0) {
    NormalFormB nf = normal_form_case_b(t, x);
    r.which = CentralizerCase::B;
    r.core.kind = CentralizerDescriptor::Kind::Extension;
    r.core.children.push_back(centralizer_descriptor(t, nf.a));
    r.core.exponent = r.core.children[0].exponent + 1;
    const WreathElement back = t.inverse(nf.conjugator);
    push_unique(t, r.generators, x);
    for (const auto& y : centralizer_generators(t, nf.a)) {
      push_unique(t, r.generators, t.conjugate(back, t.diagonal(y)));
    }
    r.conjugator = nf.conjugator;
    r.a = nf.a;
    return r;
  }

  if (auto d = align_components(t, x)) {
    r.which = CentralizerCase::C;
    r.conjugator = t.assemble(*d, 0);
    const WreathElement x0 = t.component(x, 0);
    r.core.kind = CentralizerDescriptor::Kind::Wreath;
    r.core.children.push_back(centralizer_descriptor(t, x0));
    r.core.exponent = p * r.core.children[0].exponent + 1;
    const WreathElement back = t.inverse(r.conjugator);
    for (const auto& y : centralizer_generators(t, x0)) {
      push_unique(t, r.generators, t.conjugate(back, t.embed(y, 0)));
    }
    push_unique(t, r.generators, t.conjugate(back, t.rotation(x.level)));
    return r;
  }

  r.which = CentralizerCase::A;
  r.core.kind = CentralizerDescriptor::Kind::Product;
  r.core.exponent = 0;
  for (unsigned i = 0; i < p; ++i) {
    const WreathElement xi = t.component(x, i);
    r.core.children.push_back(centralizer_descriptor(t, xi));
    r.core.exponent += r.core.children.back().exponent;
    for (const auto& y : centralizer_generators(t, xi)) push_unique(t, r.generators, t.embed(y, i));
  }
  return r;
}

std::vector<WreathElement> centralizer_generators(const WreathTower& t, const WreathElement& x) {
  if (x.level == 1) return {t.rotation(1)};
  return classify_centralizer(t, x).generators;
}

CentralizerDescriptor centralizer_descriptor(const WreathTower& t, const WreathElement& x) {
  if (x.level == 1) return CentralizerDescriptor{};
  return classify_centralizer(t, x).core;
}

ClosedSubgroup close_subgroup(const WreathTower& t, unsigned level,
                              const std::vector<WreathElement>& generators, std::size_t cap) {
  ClosedSubgroup out;
  std::unordered_map<std::uint64_t, Element> index;
  out.elements.push_back(t.identity(level));
  index.emplace(t.encode(out.elements[0]), 0);
  for (std::size_t k = 0; k < out.elements.size(); ++k) {
    for (const auto& g : generators) {
      WreathElement y = t.multiply(out.elements[k], g);
      const auto key = t.encode(y);
      if (index.count(key)) continue;
      if (out.elements.size() >= cap) {
        throw CapExceeded("subgroup closure exceeds " + std::to_string(cap) + " elements");
      }
      index.emplace(key, static_cast<Element>(out.elements.size()));
      out.elements.push_back(std::move(y));
    }
  }
  const std::size_t n = out.elements.size();
  std::vector<Element> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      table[a * n + b] = index.at(t.encode(t.multiply(out.elements[a], out.elements[b])));
  out.group = FiniteGroup::from_table(n, std::move(table));
  return out;
}

namespace {

Certificate leaf() { return Certificate{}; }

}  // namespace

Certificate cp_certificate(const WreathTower& t, const WreathElement& x,
                           const CertificateOptions& options) {
  if (x.level == 1) return leaf();
  const CentralizerReport r = classify_centralizer(t, x);
  Certificate c;
  c.level = x.level;
  switch (r.which) {
    case CentralizerCase::A:
      c.kind = Certificate::Kind::Product;
      for (unsigned i = 0; i < t.p(); ++i) c.children.push_back(cp_certificate(t, t.component(x, i), options));
      return c;
    case CentralizerCase::C:
      c.kind = Certificate::Kind::Wreath;
      c.children.push_back(cp_certificate(t, t.component(x, 0), options));
      return c;
    case CentralizerCase::B:
      break;
  }
  c.kind = Certificate::Kind::IsoclinicReplacement;
  Certificate product;
  product.kind = Certificate::Kind::Product;
  product.level = x.level;
  product.children.push_back(cp_certificate(t, *r.a, options));
  product.children.push_back(leaf());
  c.children.push_back(std::move(product));

  const std::uint64_t order = pow_u64(t.p(), r.core.exponent);
  if (order > options.witness_order_cap) {
    c.tag = "asserted-by-Lemma";
    return c;
  }
  const ClosedSubgroup zx = close_subgroup(t, x.level, r.generators, options.witness_order_cap);
  const ClosedSubgroup za =
      close_subgroup(t, x.level - 1, centralizer_generators(t, *r.a), options.witness_order_cap);
  const FiniteGroup factors[] = {za.group, cyclic_group(t.p())};
  const FiniteGroup target = direct_product(factors);
  IsoclinismOptions iso;
  iso.budget = options.budget;
  const IsoclinismResult res = is_isoclinic(zx.group, target, iso);
  if (res.status == SearchStatus::BudgetExhausted) {
    throw WitnessBudgetExhausted("no isoclinism witness for Z(" + t.format(x) + ") within " +
                                 std::to_string(options.budget) + " search nodes");
  }
  if (res.status == SearchStatus::NotFound) {
    c.tag = "refuted";
    return c;
  }
  c.witness = witness_to_json(*res.witness);
  c.witness_verified = res.witness->square_verified;
  c.tag = c.witness_verified ? "witness" : "witness-unverified";
  return c;
}

std::vector<MaxElabDescriptor> maximal_elem_abelians(const WreathTower& t, unsigned level) {
  t.exponent(level);
  return maximal_elem_abelians(t.p(), level);
}

std::vector<MaxElabDescriptor> maximal_elem_abelians(unsigned p, unsigned level) {
  if (!is_prime(p)) throw InvalidInput("p must be prime");
  std::vector<MaxElabDescriptor> reps{MaxElabDescriptor{}};
  for (unsigned lv = 1; lv <= level; ++lv) {
    std::vector<MaxElabDescriptor> next;
    const std::size_t count = reps.size();
    if (lv >= 2) {
      // p-tuples of indices in lexicographic order; keep least rotations.
      std::vector<std::size_t> tuple(p, 0);
      while (true) {
        bool least = true;
        for (unsigned r = 1; r < p && least; ++r) {
          std::vector<std::size_t> rot(p);
          for (unsigned i = 0; i < p; ++i) rot[i] = tuple[(i + r) % p];
          if (rot < tuple) least = false;
        }
        if (least) {
          MaxElabDescriptor d;
          d.kind = MaxElabDescriptor::Kind::Product;
          d.level = lv;
          for (auto id : tuple) {
            d.children.push_back(reps[id]);
            d.child_ids.push_back(id);
            d.rank += reps[id].rank;
          }
          next.push_back(std::move(d));
        }
        unsigned pos = p;
        while (pos > 0 && tuple[pos - 1] + 1 == count) tuple[--pos] = 0;
        if (pos == 0) break;
        ++tuple[pos - 1];
      }
    }
    for (std::size_t id = 0; id < count; ++id) {
      MaxElabDescriptor d;
      d.kind = MaxElabDescriptor::Kind::Diagonal;
      d.level = lv;
      d.children.push_back(reps[id]);
      d.child_ids.push_back(id);
      d.rank = reps[id].rank + 1;
      next.push_back(std::move(d));
    }
    reps = std::move(next);
  }
  return reps;
}

std::vector<WreathElement> elab_generators(const WreathTower& t, const MaxElabDescriptor& d) {
  std::vector<WreathElement> out;
  switch (d.kind) {
    case MaxElabDescriptor::Kind::Trivial:
      break;
    case MaxElabDescriptor::Kind::Product:
      for (unsigned i = 0; i < d.children.size(); ++i)
        for (const auto& g : elab_generators(t, d.children[i])) out.push_back(t.embed(g, i));
      break;
    case MaxElabDescriptor::Kind::Diagonal:
      for (const auto& g : elab_generators(t, d.children[0])) out.push_back(t.diagonal(g));
      out.push_back(t.rotation(d.level));
      break;
  }
  return out;
}

std::string to_string(const MaxElabDescriptor& d) {
  switch (d.kind) {
    case MaxElabDescriptor::Kind::Trivial:
      return "1";
    case MaxElabDescriptor::Kind::Diagonal:
      return "D(" + to_string(d.children[0]) + ")";
    case MaxElabDescriptor::Kind::Product: {
      std::string s = "P(";
      for (std::size_t i = 0; i < d.children.size(); ++i) {
        if (i) s += ',';
        s += to_string(d.children[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

ElabEnumeration elem_abelians_bruteforce(const FiniteGroup& g) {
  const std::size_t n = g.order();
  if (n > kElabBruteCap) {
    throw CapExceeded("elementary abelian enumeration is capped at order " +
                      std::to_string(kElabBruteCap));
  }
  const auto orders = element_orders(g);
  ElabEnumeration out;
  std::vector<std::vector<Element>> gens;
  std::vector<std::uint64_t> prime;
  std::map<std::vector<Element>, std::size_t> seen;

  out.subgroups.push_back(trivial_subgroup(g));
  out.rank.push_back(0);
  gens.emplace_back();
  prime.push_back(0);
  seen.emplace(out.subgroups[0].members(), 0);

  for (std::size_t k = 0; k < out.subgroups.size(); ++k) {
    for (Element x = 0; x < n; ++x) {
      const std::uint64_t q = orders[x];
      if (!is_prime(q) || (prime[k] && q != prime[k])) continue;
      if (out.subgroups[k].contains(x)) continue;
      bool commutes = true;
      for (auto y : gens[k]) {
        if (g.mul(x, y) != g.mul(y, x)) {
          commutes = false;
          break;
        }
      }
      if (!commutes) continue;
      std::vector<Element> members;
      Element xj = g.identity();
      for (std::uint64_t j = 0; j < q; ++j) {
        for (auto s : out.subgroups[k].members()) members.push_back(g.mul(s, xj));
        xj = g.mul(xj, x);
      }
      std::sort(members.begin(), members.end());
      if (seen.count(members)) continue;
      seen.emplace(members, out.subgroups.size());
      out.subgroups.emplace_back(g, std::move(members));
      out.rank.push_back(out.rank[k] + 1);
      gens.push_back(gens[k]);
      gens.back().push_back(x);
      prime.push_back(q);
    }
  }

  const std::size_t count = out.subgroups.size();
  out.maximal.assign(count, true);
  for (std::size_t a = 0; a < count; ++a) {
    for (std::size_t b = 0; b < count && out.maximal[a]; ++b) {
      if (out.rank[b] == out.rank[a] + 1 && (prime[a] == 0 || prime[a] == prime[b]) &&
          out.subgroups[a].is_subset_of(out.subgroups[b])) {
        out.maximal[a] = false;
      }
    }
  }

  std::map<std::vector<Element>, std::size_t> class_of;
  out.class_id.resize(count);
  for (std::size_t a = 0; a < count; ++a) {
    std::vector<Element> best;
    for (Element h = 0; h < n; ++h) {
      const Element hinv = g.inverse(h);
      std::vector<Element> conj;
      for (auto s : out.subgroups[a].members()) conj.push_back(g.mul(g.mul(h, s), hinv));
      std::sort(conj.begin(), conj.end());
      if (best.empty() || conj < best) best = std::move(conj);
    }
    auto [it, inserted] = class_of.emplace(best, class_of.size());
    out.class_id[a] = it->second;
  }
  return out;
}

namespace {

using u128 = unsigned __int128;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

// v_p(q^e - 1) for p not dividing q.
std::uint64_t valuation_power_minus_one(std::uint64_t q, std::uint64_t e, std::uint64_t p) {
  std::uint64_t v = 0;
  std::uint64_t pk = p;
  while (powmod(q, e, pk) == 1) {
    ++v;
    if (pk > std::numeric_limits<std::uint64_t>::max() / p / 2) {
      throw OrderOverflow("p-adic valuation exceeds 64-bit range");
    }
    pk *= p;
  }
  return v;
}

void check_sylow_inputs(std::uint64_t q, std::uint64_t p) {
  if (!is_prime(p) || !is_prime(q)) throw UnsupportedParameters("p and q must be primes");
  if (p == 2 || q == 2) throw UnsupportedParameters("p and q must be odd");
  if (p == q) throw UnsupportedParameters("p and q must be distinct");
}

}  // namespace

std::uint64_t SylowGLParams::exponent() const {
  std::uint64_t total = 0;
  for (const auto& [rr, k] : factors) {
    const std::uint64_t pk = pow_u64(p, k);
    total += rr * pk + (pk - 1) / (p - 1);
  }
  return total;
}

SylowGLParams sylow_gl_parameters(std::uint64_t n, std::uint64_t q, std::uint64_t p) {
  check_sylow_inputs(q, p);
  SylowGLParams s;
  s.p = p;
  s.q = q;
  s.n = n;
  s.d = 1;
  while (powmod(q, s.d, p) != 1) ++s.d;
  s.r = valuation_power_minus_one(q, s.d, p);
  s.m = n / s.d;
  std::uint64_t rest = s.m;
  for (std::uint64_t k = 0; rest > 0; ++k, rest /= p) {
    for (std::uint64_t c = 0; c < rest % p; ++c) s.factors.emplace_back(s.r, k);
  }
  return s;
}

std::uint64_t gl_order_valuation(std::uint64_t n, std::uint64_t q, std::uint64_t p) {
  check_sylow_inputs(q, p);
  std::uint64_t v = 0;
  for (std::uint64_t i = 1; i <= n; ++i) v += valuation_power_minus_one(q, i, p);
  return v;
}

nlohmann::json to_json(const CentralizerDescriptor& d) {
  static const char* names[] = {"cyclic", "product", "extension", "wreath"};
  nlohmann::json j;
  j["kind"] = names[static_cast<int>(d.kind)];
  j["level"] = d.level;
  j["order_exponent"] = d.exponent;
  if (!d.children.empty()) {
    j["children"] = nlohmann::json::array();
    for (const auto& c : d.children) j["children"].push_back(to_json(c));
  }
  return j;
}

nlohmann::json to_json(const WreathTower& t, const CentralizerReport& r) {
  nlohmann::json j;
  j["case"] = to_string(r.which);
  j["conjugator"] = t.format(r.conjugator);
  if (r.a) {
    j["a"] = t.format(*r.a);
    j["isoclinic_to"] = "Z(a) x Z/" + std::to_string(t.p());
  }
  j["core"] = to_json(r.core);
  j["generators"] = nlohmann::json::array();
  for (const auto& g : r.generators) j["generators"].push_back(t.format(g));
  return j;
}

nlohmann::json to_json(const Certificate& c) {
  static const char* names[] = {"leaf", "product", "wreath", "isoclinic-replacement"};
  nlohmann::json j;
  j["kind"] = names[static_cast<int>(c.kind)];
  j["level"] = c.level;
  if (c.kind == Certificate::Kind::IsoclinicReplacement) {
    j["tag"] = c.tag;
    j["witness_verified"] = c.witness_verified;
    if (c.witness) j["witness"] = *c.witness;
  }
  if (!c.children.empty()) {
    j["children"] = nlohmann::json::array();
    for (const auto& ch : c.children) j["children"].push_back(to_json(ch));
  }
  return j;
}

nlohmann::json to_json(const MaxElabDescriptor& d) {
  nlohmann::json j;
  j["descriptor"] = to_string(d);
  j["level"] = d.level;
  j["rank"] = d.rank;
  return j;
}

nlohmann::json to_json(const SylowGLParams& s) {
  nlohmann::json j;
  j["p"] = s.p;
  j["q"] = s.q;
  j["n"] = s.n;
  j["d"] = s.d;
  j["r"] = s.r;
  j["m"] = s.m;
  j["factors"] = nlohmann::json::array();
  for (const auto& [r, k] : s.factors) j["factors"].push_back({{"r", r}, {"k", k}});
  j["exponent"] = s.exponent();
  return j;
}

}  // namespace pwreath
