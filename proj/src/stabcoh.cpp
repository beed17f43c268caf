#include "pwreath/stabcoh.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "pwreath/errors.hpp"

namespace pwreath {

namespace {

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OrderOverflow("Hilbert series coefficient overflow");
  return r;
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw OrderOverflow("Hilbert series coefficient overflow");
  return r;
}

HilbertSeries truncated_product(const HilbertSeries& a, const HilbertSeries& b, std::size_t len) {
  HilbertSeries out(len, 0);
  for (std::size_t i = 0; i < a.size() && i < len; ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size() && i + j < len; ++j)
      out[i + j] = checked_add(out[i + j], checked_mul(a[i], b[j]));
  }
  return out;
}

unsigned inverse_mod(unsigned a, unsigned p) {
  unsigned r = 1;
  for (unsigned e = p - 2, b = a % p; e; e >>= 1, b = b * b % p)
    if (e & 1) r = r * b % p;
  return r;
}

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Position of a mask among masks of the same popcount in increasing order.
std::size_t colex_rank(ExteriorElement::Mask m) {
  std::size_t r = 0;
  unsigned j = 0;
  while (m) {
    const unsigned pos = static_cast<unsigned>(std::countr_zero(m));
    m &= m - 1;
    r += binomial(pos, ++j);
  }
  return r;
}

// Masks on `rank` bits with popcount k, increasing (Gosper's hack).
std::vector<ExteriorElement::Mask> masks_of_degree(unsigned rank, unsigned k) {
  using Wide = unsigned __int128;
  std::vector<ExteriorElement::Mask> out;
  if (k > rank) return out;
  if (k == 0) return {0};
  const Wide limit = Wide{1} << rank;
  Wide m = (Wide{1} << k) - 1;
  while (m < limit) {
    out.push_back(static_cast<ExteriorElement::Mask>(m));
    const Wide c = m & (~m + 1);
    const Wide r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

}  // namespace

HilbertSeries hilbert_series(unsigned p, unsigned n, unsigned max_degree) {
  if (!is_prime(p)) throw InvalidInput("p must be prime");
  if (n < 1) throw InvalidInput("n must be at least 1");
  const std::size_t len = std::size_t{max_degree} + 1;
  HilbertSeries prev(len, 0);
  prev[0] = 1;
  if (len > 1) prev[1] = 1;
  for (unsigned level = 2; level <= n; ++level) {
    HilbertSeries power(len, 0);
    power[0] = 1;
    for (unsigned i = 0; i < p; ++i) power = truncated_product(power, prev, len);
    HilbertSeries next(len, 0);
    for (std::size_t k = 0; k < len; ++k) {
      std::uint64_t v = power[k];
      if (k % p == 0) v = checked_add(v, checked_mul(p - 1, prev[k / p]));
      if (v % p != 0) throw Error("Burnside count is not divisible by p");
      next[k] = v / p;
    }
    if (len > 1) next[1] += 1;
    prev = std::move(next);
  }
  return prev;
}

HilbertSeries kunneth_hilbert(const HilbertSeries& a, const HilbertSeries& b) {
  return truncated_product(a, b, std::min(a.size(), b.size()));
}

HilbertSeries exterior_hilbert(unsigned rank) {
  HilbertSeries out;
  for (unsigned k = 0; k <= rank; ++k) out.push_back(binomial(rank, k));
  return out;
}

std::size_t rank_mod_p(std::vector<std::vector<unsigned>> m, unsigned p) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t piv = rank;
    while (piv < m.size() && m[piv][c] == 0) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[rank]);
    const unsigned inv = inverse_mod(m[rank][c], p);
    for (auto& v : m[rank]) v = v * inv % p;
    for (std::size_t r = rank + 1; r < m.size(); ++r) {
      const unsigned f = m[r][c];
      if (!f) continue;
      for (std::size_t k = c; k < cols; ++k) m[r][k] = (m[r][k] + (p - f) * m[rank][k]) % p;
    }
    ++rank;
  }
  return rank;
}

StableClass& StableClass::operator+=(const StableClass& o) {
  if (o.p != p || o.level != level) throw LevelMismatch("adding classes of different levels");
  for (const auto& [id, c] : o.coords) {
    const unsigned v = (coords[id] + c) % p;
    if (v) {
      coords[id] = v;
    } else {
      coords.erase(id);
    }
  }
  return *this;
}

StableClass StableClass::scaled(unsigned c) const {
  StableClass out{p, level, {}};
  for (const auto& [id, v] : coords)
    if (v * (c % p) % p) out.coords[id] = v * (c % p) % p;
  return out;
}

// Row-reduced detection matrix of one degree, with row combinations tracked.
struct StableModel::Solver {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> column_offset;  // per descriptor
  std::size_t columns = 0;
  std::vector<std::vector<unsigned>> reduced;
  std::vector<std::vector<unsigned>> combo;
  std::vector<std::size_t> pivot;
  std::size_t rank = 0;
};

StableModel::StableModel(unsigned p, unsigned n) : p_(p), n_(n) {
  if (!is_prime(p)) throw InvalidInput("p must be prime");
  if (n < 1) throw InvalidInput("n must be at least 1");
  basis_.resize(n + 1);
  trace_index_.resize(n + 1);
  norm_index_.resize(n + 1);
  descriptors_.resize(n + 1);
  restriction_.resize(n + 1);
  for (unsigned level = 1; level <= n; ++level) build_level(level);
}

StableModel::~StableModel() = default;

void StableModel::build_level(unsigned level) {
  using Kind = BasisElement::Kind;
  std::vector<BasisElement> elems{{Kind::Unit, 0, {}}, {Kind::Theta, 1, {}}};
  if (level >= 2) {
    const auto& prev = basis_[level - 1];
    const std::size_t m = prev.size();
    std::uint64_t tuples = 1;
    for (unsigned i = 0; i < p_; ++i) {
      tuples = checked_mul(tuples, m);
      if (tuples > 50'000'000) throw CapExceeded("stable basis enumeration is too large");
    }
    for (std::size_t b = 0; b < m; ++b)
      if (prev[b].degree >= 1) elems.push_back({Kind::Norm, p_ * prev[b].degree, {b}});
    std::vector<std::size_t> tuple(p_, 0);
    std::vector<std::size_t> rot(p_);
    while (true) {
      bool keep = !std::all_of(tuple.begin(), tuple.end(), [&](auto v) { return v == tuple[0]; });
      for (unsigned r = 1; r < p_ && keep; ++r) {
        for (unsigned i = 0; i < p_; ++i) rot[i] = tuple[(i + r) % p_];
        if (rot < tuple) keep = false;
      }
      if (keep) {
        unsigned deg = 0;
        for (auto id : tuple) deg += prev[id].degree;
        elems.push_back({Kind::Trace, deg, tuple});
      }
      unsigned pos = p_;
      while (pos > 0 && tuple[pos - 1] + 1 == m) tuple[--pos] = 0;
      if (pos == 0) break;
      ++tuple[pos - 1];
    }
  }
  if (elems.size() > kBasisCap) throw CapExceeded("stable basis above the size cap");
  std::stable_sort(elems.begin(), elems.end(), [](const BasisElement& a, const BasisElement& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.args < b.args;
  });
  for (std::size_t id = 0; id < elems.size(); ++id) {
    if (elems[id].kind == Kind::Trace) trace_index_[level].emplace(elems[id].args, id);
    if (elems[id].kind == Kind::Norm) norm_index_[level].emplace(elems[id].args[0], id);
  }
  basis_[level] = std::move(elems);
  descriptors_[level] = maximal_elem_abelians(p_, level);

  auto& table = restriction_[level];
  table.resize(basis_[level].size());
  for (std::size_t id = 0; id < table.size(); ++id) {
    for (std::size_t d = 0; d < descriptors_[level].size(); ++d)
      table[id].push_back(compute_restriction(level, id, d));
  }
}

const std::vector<BasisElement>& StableModel::basis(unsigned level) const {
  if (level < 1 || level > n_) throw LevelMismatch("level outside the model");
  return basis_[level];
}

std::vector<std::size_t> StableModel::basis_in_degree(unsigned level, unsigned k) const {
  std::vector<std::size_t> out;
  const auto& b = basis(level);
  for (std::size_t id = 0; id < b.size(); ++id)
    if (b[id].degree == k) out.push_back(id);
  return out;
}

unsigned StableModel::top_degree(unsigned level) const { return basis(level).back().degree; }

std::string StableModel::format(unsigned level, std::size_t id) const {
  const BasisElement& e = basis(level).at(id);
  switch (e.kind) {
    case BasisElement::Kind::Unit:
      return "1";
    case BasisElement::Kind::Theta:
      return "theta";
    case BasisElement::Kind::Norm:
      return "N(" + format(level - 1, e.args[0]) + ")";
    case BasisElement::Kind::Trace: {
      std::string s = "T(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) s += ',';
        s += format(level - 1, e.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

std::size_t StableModel::parse(unsigned level, std::string_view text) const {
  basis(level);
  std::size_t pos = 0;
  const std::size_t id = parse_at(level, text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw InvalidInput("trailing characters in basis element");
  return id;
}

std::size_t StableModel::parse_at(unsigned level, std::string_view text, std::size_t& pos) const {
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto expect = [&](char c) {
    skip();
    if (pos >= text.size() || text[pos] != c) {
      throw InvalidInput(std::string("expected '") + c + "' in basis element");
    }
    ++pos;
  };
  skip();
  if (text.substr(pos, 5) == "theta") {
    pos += 5;
    return 1;
  }
  if (text.substr(pos, 1) == "1") {
    ++pos;
    return 0;
  }
  if (level < 2) throw InvalidInput("norms and traces need level >= 2");
  if (text.substr(pos, 2) == "N(") {
    pos += 2;
    const std::size_t b = parse_at(level - 1, text, pos);
    expect(')');
    auto it = norm_index_[level].find(b);
    if (it == norm_index_[level].end()) throw InvalidInput("norm of a degree-0 class");
    return it->second;
  }
  if (text.substr(pos, 2) == "T(") {
    pos += 2;
    std::vector<std::size_t> args;
    for (unsigned i = 0; i < p_; ++i) {
      if (i) expect(',');
      args.push_back(parse_at(level - 1, text, pos));
    }
    expect(')');
    auto it = trace_index_[level].find(args);
    if (it == trace_index_[level].end()) {
      throw InvalidInput("trace argument is constant or not in least rotation");
    }
    return it->second;
  }
  throw InvalidInput("unrecognised basis element");
}

const std::vector<MaxElabDescriptor>& StableModel::descriptors(unsigned level) const {
  basis(level);
  return descriptors_[level];
}

std::vector<TensorTerm> StableModel::restrict_to_base(unsigned level, std::size_t id) const {
  if (level < 2) throw LevelMismatch("restriction to the base needs level >= 2");
  const BasisElement& e = basis(level).at(id);
  const auto& prev = basis_[level - 1];
  switch (e.kind) {
    case BasisElement::Kind::Unit:
      return {TensorTerm{1, std::vector<std::size_t>(p_, 0)}};
    case BasisElement::Kind::Theta:
      return {};
    case BasisElement::Kind::Norm:
      return {TensorTerm{1, std::vector<std::size_t>(p_, e.args[0])}};
    case BasisElement::Kind::Trace:
      break;
  }
  std::vector<TensorTerm> out;
  std::vector<std::size_t> u = e.args;
  unsigned sign = 1;
  for (unsigned i = 0; i < p_; ++i) {
    out.push_back(TensorTerm{sign, u});
    // Move the last factor to the front.
    const unsigned last = prev[u.back()].degree;
    unsigned rest = 0;
    for (std::size_t k = 0; k + 1 < u.size(); ++k) rest += prev[u[k]].degree;
    if ((last * rest) % 2) sign = (p_ - sign) % p_;
    std::rotate(u.rbegin(), u.rbegin() + 1, u.rend());
  }
  return out;
}

ExteriorElement StableModel::compute_restriction(unsigned level, std::size_t id,
                                                 std::size_t d) const {
  const MaxElabDescriptor& desc = descriptors_[level][d];
  const BasisElement& e = basis_[level][id];
  const unsigned rank = desc.rank;
  using Kind = BasisElement::Kind;
  if (e.kind == Kind::Unit) return ExteriorElement::one(p_, rank);

  if (desc.kind == MaxElabDescriptor::Kind::Diagonal) {
    const unsigned sub = desc.children[0].rank;
    if (e.kind == Kind::Theta) return ExteriorElement::generator(p_, rank, sub);
    if (p_ == 2 && e.kind == Kind::Norm && basis_[level - 1][e.args[0]].degree == 1) {
      // At p = 2 the norm of a degree-one class x restricts to x (x) t.
      const ExteriorElement x =
          restriction_[level - 1][e.args[0]][desc.child_ids[0]].shifted(0, rank);
      return x.wedge(ExteriorElement::generator(p_, rank, sub));
    }
    return ExteriorElement(p_, rank);
  }

  ExteriorElement out(p_, rank);
  for (const TensorTerm& term : restrict_to_base(level, id)) {
    ExteriorElement prod = ExteriorElement::one(p_, rank);
    unsigned offset = 0;
    for (unsigned i = 0; i < p_ && !prod.is_zero(); ++i) {
      const std::size_t child = desc.child_ids[i];
      const ExteriorElement& r = restriction_[level - 1][term.factors[i]][child];
      prod = prod.wedge(r.shifted(offset, rank));
      offset += desc.children[i].rank;
    }
    out += prod.scaled(term.coefficient);
  }
  return out;
}

const ExteriorElement& StableModel::restriction(unsigned level, std::size_t id,
                                                std::size_t d) const {
  basis(level);
  return restriction_[level].at(id).at(d);
}

ExteriorElement StableModel::restriction_to_elab(const StableClass& c, std::size_t d) const {
  if (c.p != p_) throw InvalidInput("class belongs to a different prime");
  ExteriorElement out(p_, descriptors(c.level).at(d).rank);
  for (const auto& [id, coef] : c.coords) out += restriction(c.level, id, d).scaled(coef);
  return out;
}

std::vector<ExteriorElement> StableModel::detect(const StableClass& c) const {
  std::vector<ExteriorElement> out;
  for (std::size_t d = 0; d < descriptors(c.level).size(); ++d)
    out.push_back(restriction_to_elab(c, d));
  return out;
}

DetectionMatrix StableModel::detection_matrix(unsigned level, unsigned k) const {
  DetectionMatrix m;
  m.p = p_;
  m.level = level;
  m.degree = k;
  m.rows = basis_in_degree(level, k);
  const auto& descs = descriptors(level);
  for (std::size_t d = 0; d < descs.size(); ++d)
    for (auto mask : masks_of_degree(descs[d].rank, k)) m.columns.emplace_back(d, mask);
  for (auto id : m.rows) {
    std::vector<unsigned> row;
    row.reserve(m.columns.size());
    for (const auto& [d, mask] : m.columns) row.push_back(restriction(level, id, d).coefficient(mask));
    m.entries.push_back(std::move(row));
  }
  m.rank = rank_mod_p(m.entries, p_);
  return m;
}

const StableModel::Solver& StableModel::solver(unsigned level, unsigned k) const {
  std::lock_guard<std::mutex> lock(solver_mutex_);
  auto& slot = solvers_[{level, k}];
  if (slot) return *slot;
  auto s = std::make_unique<Solver>();
  s->rows = basis_in_degree(level, k);
  const auto& descs = descriptors(level);
  for (const auto& d : descs) {
    s->column_offset.push_back(s->columns);
    s->columns += binomial(d.rank, k);
  }
  const std::size_t n = s->rows.size();
  s->reduced.assign(n, std::vector<unsigned>(s->columns, 0));
  s->combo.assign(n, std::vector<unsigned>(n, 0));
  for (std::size_t r = 0; r < n; ++r) {
    s->combo[r][r] = 1;
    for (std::size_t d = 0; d < descs.size(); ++d) {
      for (const auto& [mask, c] : restriction(level, s->rows[r], d).terms()) {
        if (static_cast<unsigned>(std::popcount(mask)) == k)
          s->reduced[r][s->column_offset[d] + colex_rank(mask)] = c;
      }
    }
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < s->columns && rank < n; ++c) {
    std::size_t piv = rank;
    while (piv < n && s->reduced[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(s->reduced[piv], s->reduced[rank]);
    std::swap(s->combo[piv], s->combo[rank]);
    const unsigned inv = inverse_mod(s->reduced[rank][c], p_);
    for (auto& v : s->reduced[rank]) v = v * inv % p_;
    for (auto& v : s->combo[rank]) v = v * inv % p_;
    for (std::size_t r = 0; r < n; ++r) {
      const unsigned f = s->reduced[r][c];
      if (r == rank || !f) continue;
      for (std::size_t j = 0; j < s->columns; ++j)
        s->reduced[r][j] = (s->reduced[r][j] + (p_ - f) * s->reduced[rank][j]) % p_;
      for (std::size_t j = 0; j < n; ++j)
        s->combo[r][j] = (s->combo[r][j] + (p_ - f) * s->combo[rank][j]) % p_;
    }
    s->pivot.push_back(c);
    ++rank;
  }
  s->rank = rank;
  slot = std::move(s);
  return *slot;
}

StableClass StableModel::unit(unsigned level) const { return basis_class(level, 0); }

StableClass StableModel::basis_class(unsigned level, std::size_t id) const {
  basis(level).at(id);
  StableClass c{p_, level, {}};
  c.coords[id] = 1;
  return c;
}

StableClass StableModel::from_detection(unsigned level,
                                        const std::vector<ExteriorElement>& tuple) const {
  const auto& descs = descriptors(level);
  if (tuple.size() != descs.size()) throw InvalidInput("detection tuple has the wrong length");
  unsigned max_deg = 0;
  for (const auto& d : descs) max_deg = std::max(max_deg, d.rank);
  StableClass out{p_, level, {}};
  for (unsigned k = 0; k <= max_deg; ++k) {
    bool nonzero = false;
    for (const auto& e : tuple)
      for (const auto& [mask, c] : e.terms())
        if (static_cast<unsigned>(std::popcount(mask)) == k) nonzero = true;
    if (!nonzero) continue;
    const Solver& s = solver(level, k);
    if (s.rank < s.rows.size()) {
      throw RankDeficient("detection matrix of degree " + std::to_string(k) + " has rank " +
                          std::to_string(s.rank) + " < " + std::to_string(s.rows.size()));
    }
    std::vector<unsigned> target(s.columns, 0);
    for (std::size_t d = 0; d < descs.size(); ++d) {
      if (tuple[d].rank() != descs[d].rank) throw InvalidInput("detection entry has wrong rank");
      for (const auto& [mask, c] : tuple[d].terms())
        if (static_cast<unsigned>(std::popcount(mask)) == k)
          target[s.column_offset[d] + colex_rank(mask)] = c;
    }
    std::vector<unsigned> x(s.rows.size(), 0);
    for (std::size_t i = 0; i < s.rank; ++i) {
      const unsigned a = target[s.pivot[i]];
      if (!a) continue;
      for (std::size_t j = 0; j < s.columns; ++j)
        target[j] = (target[j] + (p_ - a) * s.reduced[i][j]) % p_;
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = (x[j] + a * s.combo[i][j]) % p_;
    }
    if (std::any_of(target.begin(), target.end(), [](unsigned v) { return v != 0; })) {
      throw RankDeficient("detection tuple in degree " + std::to_string(k) +
                          " lies outside the image of the basis");
    }
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j]) out.coords[s.rows[j]] = x[j];
  }
  return out;
}

StableClass StableModel::multiply(const StableClass& a, const StableClass& b) const {
  if (a.level != b.level || a.p != b.p) throw LevelMismatch("multiplying classes of different levels");
  const auto da = detect(a);
  const auto db = detect(b);
  std::vector<ExteriorElement> prod;
  for (std::size_t d = 0; d < da.size(); ++d) prod.push_back(da[d].wedge(db[d]));
  return from_detection(a.level, prod);
}

DetectedClass detected(const StableModel& model, const StableClass& c) {
  DetectedClass out;
  out.p = model.p();
  for (const auto& d : model.descriptors(c.level)) out.ranks.push_back(d.rank);
  out.detection = model.detect(c);
  return out;
}

DetectedClass detected(const ExteriorElement& e) {
  return DetectedClass{e.p(), {e.rank()}, {e}};
}

DetectedClass kunneth_product(const DetectedClass& a, const DetectedClass& b) {
  if (a.p != b.p) throw InvalidInput("Kunneth product of classes at different primes");
  DetectedClass out;
  out.p = a.p;
  for (std::size_t i = 0; i < a.ranks.size(); ++i) {
    for (std::size_t j = 0; j < b.ranks.size(); ++j) {
      const unsigned rank = a.ranks[i] + b.ranks[j];
      out.ranks.push_back(rank);
      out.detection.push_back(a.detection[i].shifted(0, rank).wedge(
          b.detection[j].shifted(a.ranks[i], rank)));
    }
  }
  return out;
}

}  // namespace pwreath
