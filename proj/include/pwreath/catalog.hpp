#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "pwreath/group.hpp"

namespace pwreath {

struct WreathParams {
  unsigned p = 2;
  unsigned n = 1;
};

/// Parses "wreath:p=P,n=N"; nullopt for any other name.
std::optional<WreathParams> parse_wreath_name(std::string_view name);

/// Builtins "cyclic:m", "dihedral:2m", "quaternion8", "elab:p^r",
/// "wreath:p=P,n=N", or a path to a JSON group file. Factors joined by '*'
/// give their direct product.
FiniteGroup resolve_group(std::string_view name, std::size_t cap = kDefaultOrderCap);

/// {"table": [[...], ...], "labels": [...]} or {"perm_gens": [[...]], "degree": d}.
FiniteGroup load_group_file(const std::string& path, std::size_t cap = kDefaultOrderCap);

}  // namespace pwreath
