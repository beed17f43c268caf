#include "pwreath/catalog.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

#include "pwreath/errors.hpp"
#include "pwreath/wreath.hpp"

namespace pwreath {

namespace {

std::uint64_t parse_uint(std::string_view s, std::string_view what) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw InvalidInput("bad " + std::string(what) + " '" + std::string(s) + "'");
  }
  return v;
}

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

FiniteGroup resolve_single(std::string_view name, std::size_t cap) {
  if (starts_with(name, "cyclic:")) {
    const auto m = parse_uint(name.substr(7), "cyclic order");
    if (m > cap) throw OrderOverflow("cyclic group above the order cap");
    return cyclic_group(m);
  }
  if (starts_with(name, "dihedral:")) {
    const auto m = parse_uint(name.substr(9), "dihedral order");
    if (m > cap) throw OrderOverflow("dihedral group above the order cap");
    return dihedral_group(m);
  }
  if (name == "quaternion8") return quaternion_group();
  if (starts_with(name, "elab:")) {
    const auto rest = name.substr(5);
    const auto caret = rest.find('^');
    if (caret == std::string_view::npos) throw InvalidInput("expected elab:p^r");
    const auto p = parse_uint(rest.substr(0, caret), "prime");
    const auto r = parse_uint(rest.substr(caret + 1), "rank");
    return elementary_abelian(static_cast<unsigned>(p), static_cast<unsigned>(r), cap)
        .with_name(std::string(name));
  }
  if (auto w = parse_wreath_name(name)) {
    return WreathTower(w->p, w->n, cap).materialize(w->n);
  }
  if (starts_with(name, "wreath:")) throw InvalidInput("expected wreath:p=P,n=N");
  return load_group_file(std::string(name), cap);
}

}  // namespace

std::optional<WreathParams> parse_wreath_name(std::string_view name) {
  if (!starts_with(name, "wreath:")) return std::nullopt;
  const auto rest = name.substr(7);
  const auto comma = rest.find(',');
  if (comma == std::string_view::npos) return std::nullopt;
  const auto a = rest.substr(0, comma);
  const auto b = rest.substr(comma + 1);
  if (!starts_with(a, "p=") || !starts_with(b, "n=")) return std::nullopt;
  WreathParams w;
  w.p = static_cast<unsigned>(parse_uint(a.substr(2), "prime"));
  w.n = static_cast<unsigned>(parse_uint(b.substr(2), "level count"));
  return w;
}

FiniteGroup resolve_group(std::string_view name, std::size_t cap) {
  if (name.empty()) throw InvalidInput("empty group name");
  if (name.find('*') == std::string_view::npos) return resolve_single(name, cap);
  std::vector<FiniteGroup> factors;
  std::size_t start = 0;
  while (true) {
    const auto star = name.find('*', start);
    factors.push_back(resolve_single(name.substr(start, star - start), cap));
    if (star == std::string_view::npos) break;
    start = star + 1;
  }
  return direct_product(factors, cap).with_name(std::string(name));
}

FiniteGroup load_group_file(const std::string& path, std::size_t cap) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("unknown group name or unreadable file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  FiniteGroup g;
  try {
    if (j.contains("table")) {
      const auto rows = j.at("table").get<std::vector<std::vector<Element>>>();
      const std::size_t n = rows.size();
      if (n > cap) throw OrderOverflow(path + ": table above the order cap");
      std::vector<Element> table;
      table.reserve(n * n);
      for (const auto& row : rows) {
        if (row.size() != n) throw InvalidInput(path + ": table is not square");
        table.insert(table.end(), row.begin(), row.end());
      }
      std::vector<std::string> labels;
      if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
      g = FiniteGroup::from_table(n, std::move(table), std::move(labels));
    } else if (j.contains("perm_gens")) {
      const auto gens = j.at("perm_gens").get<std::vector<std::vector<std::uint32_t>>>();
      const auto degree = j.at("degree").get<std::size_t>();
      g = FiniteGroup::from_permutations(gens, degree, cap);
    } else {
      throw InvalidInput(path + ": expected a \"table\" or \"perm_gens\" key");
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(path + ": " + e.what());
  }
  check_group_axioms(g);
  return g.with_name(path);
}

}  // namespace pwreath
