#include "gpach/relations.hpp"

namespace gpach {

const std::array<std::array<Tet, 3>, 3>& family_table() {
  static const std::array<std::array<Tet, 3>, 3> table = {{
      {{{1, 2, 4, 5}, {1, 3, 4, 5}, {2, 3, 4, 5}}},
      {{{1, 2, 4, 6}, {1, 3, 4, 6}, {2, 3, 4, 6}}},
      {{{1, 2, 5, 6}, {1, 3, 5, 6}, {2, 3, 5, 6}}},
  }};
  return table;
}

const std::array<InnerTet, 3>& lhs_inner_tets() {
  static const std::array<InnerTet, 3> inner = {{
      {{1, 2, 3, 4}, {0, 1}, 2},
      {{1, 2, 3, 5}, {0, 2}, 1},
      {{1, 2, 3, 6}, {1, 2}, 0},
  }};
  return inner;
}

const std::array<InnerTet, 3>& rhs_inner_tets() {
  static const std::array<InnerTet, 3> inner = {{
      {{1, 4, 5, 6}, {0, 1}, 2},
      {{2, 4, 5, 6}, {0, 2}, 1},
      {{3, 4, 5, 6}, {1, 2}, 0},
  }};
  return inner;
}

std::array<Tet, 3> line_tets(MoveSide side, int line) {
  const auto& table = family_table();
  if (line < 0 || line > 2) throw std::invalid_argument("line_tets: line out of range");
  if (side == MoveSide::Lhs) return table[std::size_t(line)];
  return {table[0][std::size_t(line)], table[1][std::size_t(line)], table[2][std::size_t(line)]};
}

std::vector<Tet> three_three_integration(MoveSide side) {
  std::vector<Tet> out;
  const auto& inner = side == MoveSide::Lhs ? lhs_inner_tets() : rhs_inner_tets();
  for (const InnerTet& it : inner) out.push_back(it.tet);
  return out;
}

}  // namespace gpach
