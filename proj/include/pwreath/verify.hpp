#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "pwreath/wreath.hpp"

namespace pwreath {

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<Check> checks;

  bool all_pass() const;
};

/// lemma-centralizers, isoclinism-classics, detection-rank, hilbert-oracle,
/// sylow-valuation.
const std::vector<std::string>& verify_suites();

/// Throws InvalidInput for an unknown suite.
SuiteResult run_suite(const std::string& name, std::uint64_t seed = 1);

struct ElabAgreement {
  bool agrees = false;
  std::size_t descriptor_classes = 0;
  std::size_t bruteforce_classes = 0;
  std::string detail;
};

/// Realizes every descriptor of `level` inside the materialized group and
/// compares with the exhaustive enumeration: each is elementary abelian of
/// its rank and maximal, no two are conjugate, and every maximal class is hit.
ElabAgreement compare_elab_descriptors(const WreathTower& t, unsigned level);

}  // namespace pwreath
