#include "pwreath/exterior.hpp"

#include "pwreath/errors.hpp"

namespace pwreath {

ExteriorElement::ExteriorElement(unsigned p, unsigned rank) : p_(p), rank_(rank) {
  if (rank > 64) throw InvalidInput("exterior algebra rank above 64");
}

ExteriorElement ExteriorElement::one(unsigned p, unsigned rank) {
  ExteriorElement e(p, rank);
  e.add_term(0, 1);
  return e;
}

ExteriorElement ExteriorElement::generator(unsigned p, unsigned rank, unsigned i) {
  if (i >= rank) throw InvalidInput("generator index out of range");
  ExteriorElement e(p, rank);
  e.add_term(Mask{1} << i, 1);
  return e;
}

unsigned ExteriorElement::coefficient(Mask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

void ExteriorElement::add_term(Mask m, unsigned c) {
  c %= p_;
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second = (it->second + c) % p_;
    if (it->second == 0) terms_.erase(it);
  }
}

ExteriorElement& ExteriorElement::operator+=(const ExteriorElement& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

ExteriorElement ExteriorElement::scaled(unsigned c) const {
  ExteriorElement out(p_, rank_);
  for (const auto& [m, v] : terms_) out.add_term(m, v * (c % p_));
  return out;
}

int ExteriorElement::merge_sign(Mask a, Mask b) {
  unsigned inversions = 0;
  while (b) {
    const unsigned j = static_cast<unsigned>(std::countr_zero(b));
    b &= b - 1;
    inversions += static_cast<unsigned>(std::popcount(j >= 63 ? Mask{0} : a >> (j + 1)));
  }
  return inversions % 2 ? -1 : 1;
}

ExteriorElement ExteriorElement::wedge(const ExteriorElement& o) const {
  if (p_ != o.p_ || rank_ != o.rank_) throw InvalidInput("wedge of mismatched exterior algebras");
  ExteriorElement out(p_, rank_);
  for (const auto& [ma, ca] : terms_) {
    for (const auto& [mb, cb] : o.terms_) {
      if (ma & mb) continue;
      const unsigned c = ca * cb % p_;
      out.add_term(ma | mb, merge_sign(ma, mb) > 0 ? c : p_ - c);
    }
  }
  return out;
}

ExteriorElement ExteriorElement::shifted(unsigned offset, unsigned new_rank) const {
  ExteriorElement out(p_, new_rank);
  for (const auto& [m, c] : terms_) {
    if (m && (64 - std::countl_zero(m)) + offset > new_rank) {
      throw InvalidInput("shifted exterior element does not fit");
    }
    out.terms_.emplace(m << offset, c);
  }
  return out;
}

ExteriorElement ExteriorElement::homogeneous_part(unsigned k) const {
  ExteriorElement out(p_, rank_);
  for (const auto& [m, c] : terms_)
    if (static_cast<unsigned>(std::popcount(m)) == k) out.terms_.emplace(m, c);
  return out;
}

std::string ExteriorElement::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  for (const auto& [m, c] : terms_) {
    if (!s.empty()) s += " + ";
    if (c != 1 || m == 0) s += std::to_string(c);
    if (c != 1 && m) s += '*';
    bool first = true;
    for (unsigned i = 0; i < 64; ++i) {
      if (!(m >> i & 1)) continue;
      if (!first) s += '^';
      s += 'e' + std::to_string(i);
      first = false;
    }
  }
  return s;
}

}  // namespace pwreath
