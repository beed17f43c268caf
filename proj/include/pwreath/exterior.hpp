#pragma once

#include <bit>
#include <cstdint>
#include <map>
#include <string>

namespace pwreath {

/// Element of the exterior algebra over F_p on `rank` degree-1 generators.
/// Monomials are bitmasks (bit i = generator e_i), so rank is at most 64.
class ExteriorElement {
 public:
  using Mask = std::uint64_t;

  ExteriorElement(unsigned p, unsigned rank);

  static ExteriorElement one(unsigned p, unsigned rank);
  static ExteriorElement generator(unsigned p, unsigned rank, unsigned i);

  unsigned p() const { return p_; }
  unsigned rank() const { return rank_; }
  const std::map<Mask, unsigned>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  unsigned coefficient(Mask m) const;

  void add_term(Mask m, unsigned c);
  ExteriorElement& operator+=(const ExteriorElement& o);
  ExteriorElement scaled(unsigned c) const;

  /// Wedge product with Koszul signs; both operands must share p and rank.
  ExteriorElement wedge(const ExteriorElement& o) const;

  /// Copy into rank `new_rank` with every generator index moved up by `offset`.
  ExteriorElement shifted(unsigned offset, unsigned new_rank) const;

  /// Terms of exactly degree k.
  ExteriorElement homogeneous_part(unsigned k) const;

  bool operator==(const ExteriorElement& o) const {
    return p_ == o.p_ && rank_ == o.rank_ && terms_ == o.terms_;
  }

  /// e.g. "e0^e2 + 2*e1".
  std::string to_string() const;

  /// (-1)^(number of pairs i in a, j in b with i > j); a and b disjoint.
  static int merge_sign(Mask a, Mask b);

 private:
  unsigned p_;
  unsigned rank_;
  std::map<Mask, unsigned> terms_;  // nonzero coefficients only
};

}  // namespace pwreath
