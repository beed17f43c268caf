#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "pwreath/exterior.hpp"
#include "pwreath/wreath.hpp"

namespace pwreath {

using HilbertSeries = std::vector<std::uint64_t>;

/// P_1 = 1 + t, P_n = (P_{n-1}^p + (p-1) P_{n-1}(t^p)) / p + t, truncated to
/// degrees 0..max_degree.
HilbertSeries hilbert_series(unsigned p, unsigned n, unsigned max_degree);

/// Product of power series, truncated to the shorter input's length (the
/// range where both are known).
HilbertSeries kunneth_hilbert(const HilbertSeries& a, const HilbertSeries& b);

/// Binomial coefficients of an exterior algebra on `rank` generators.
HilbertSeries exterior_hilbert(unsigned rank);

struct BasisElement {
  enum class Kind { Unit, Theta, Norm, Trace };
  Kind kind = Kind::Unit;
  unsigned degree = 0;
  /// Norm: one id, Trace: p ids (least rotation); ids index the level below.
  std::vector<std::size_t> args;
};

/// One summand c * (u_1 (x) ... (x) u_p) of a restriction to G_{n-1}^p.
struct TensorTerm {
  unsigned coefficient = 1;
  std::vector<std::size_t> factors;
};

/// A class given by coordinates over the canonical basis of one level.
struct StableClass {
  unsigned p = 2;
  unsigned level = 1;
  std::map<std::size_t, unsigned> coords;  // nonzero coefficients mod p

  bool is_zero() const { return coords.empty(); }
  StableClass& operator+=(const StableClass& o);
  StableClass scaled(unsigned c) const;
  bool operator==(const StableClass& o) const {
    return p == o.p && level == o.level && coords == o.coords;
  }
};

struct DetectionMatrix {
  unsigned p = 2;
  unsigned level = 1;
  unsigned degree = 0;
  std::vector<std::size_t> rows;  // basis ids of this degree
  std::vector<std::pair<std::size_t, ExteriorElement::Mask>> columns;  // (descriptor, monomial)
  std::vector<std::vector<unsigned>> entries;  // rows x columns
  std::size_t rank = 0;

  bool full_rank() const { return rank == rows.size(); }
};

/// Rank over F_p by Gaussian elimination.
std::size_t rank_mod_p(std::vector<std::vector<unsigned>> m, unsigned p);

/// The stable cohomology model of G_1, ..., G_n: canonical bases, restriction
/// to the maximal elementary abelian representatives and products through
/// the detection map. Safe to share between threads.
class StableModel {
 public:
  /// Upper bound on the number of basis elements of any level.
  static constexpr std::size_t kBasisCap = 200000;

  StableModel(unsigned p, unsigned n);
  ~StableModel();

  unsigned p() const { return p_; }
  unsigned levels() const { return n_; }

  /// Sorted by degree, then Theta < Norm < Trace, then argument ids.
  const std::vector<BasisElement>& basis(unsigned level) const;
  std::vector<std::size_t> basis_in_degree(unsigned level, unsigned k) const;
  unsigned top_degree(unsigned level) const;

  /// "1", "theta", "N(x)", "T(x_1,...,x_p)".
  std::string format(unsigned level, std::size_t id) const;
  /// Inverse of format; traces must be written in their least rotation.
  std::size_t parse(unsigned level, std::string_view text) const;

  const std::vector<MaxElabDescriptor>& descriptors(unsigned level) const;

  /// Theta -> 0, Norm(b) -> b (x) ... (x) b, Trace(u) -> signed orbit sum.
  std::vector<TensorTerm> restrict_to_base(unsigned level, std::size_t id) const;

  /// Restriction of a basis element to descriptor `d` of its level.
  const ExteriorElement& restriction(unsigned level, std::size_t id, std::size_t d) const;
  ExteriorElement restriction_to_elab(const StableClass& c, std::size_t d) const;
  std::vector<ExteriorElement> detect(const StableClass& c) const;

  DetectionMatrix detection_matrix(unsigned level, unsigned k) const;

  StableClass unit(unsigned level) const;
  StableClass basis_class(unsigned level, std::size_t id) const;

  /// Coordinates of the class with the given detection tuple. Throws
  /// RankDeficient when some degree is not of full rank or the tuple lies
  /// outside the image.
  StableClass from_detection(unsigned level, const std::vector<ExteriorElement>& tuple) const;

  /// Pointwise wedge of detection tuples, pulled back through the basis.
  StableClass multiply(const StableClass& a, const StableClass& b) const;

 private:
  struct Solver;
  const Solver& solver(unsigned level, unsigned k) const;
  void build_level(unsigned level);
  ExteriorElement compute_restriction(unsigned level, std::size_t id, std::size_t d) const;
  std::size_t parse_at(unsigned level, std::string_view text, std::size_t& pos) const;

  unsigned p_;
  unsigned n_;
  std::vector<std::vector<BasisElement>> basis_;               // index = level
  std::vector<std::map<std::vector<std::size_t>, std::size_t>> trace_index_;
  std::vector<std::map<std::size_t, std::size_t>> norm_index_;
  std::vector<std::vector<MaxElabDescriptor>> descriptors_;
  std::vector<std::vector<std::vector<ExteriorElement>>> restriction_;  // [level][id][d]
  mutable std::mutex solver_mutex_;
  mutable std::map<std::pair<unsigned, unsigned>, std::unique_ptr<Solver>> solvers_;
};

/// A class on a product of groups, recorded through its detection data on
/// products of detecting elementary abelian subgroups.
struct DetectedClass {
  unsigned p = 2;
  std::vector<unsigned> ranks;
  std::vector<ExteriorElement> detection;
};

DetectedClass detected(const StableModel& model, const StableClass& c);
/// A class of an elementary abelian group, which detects itself.
DetectedClass detected(const ExteriorElement& e);

/// c_A (x) c_B: detection on every pair (E, F) is the wedge of the two
/// restrictions, with the generators of F placed after those of E.
DetectedClass kunneth_product(const DetectedClass& a, const DetectedClass& b);

}  // namespace pwreath
