#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gpach/random.hpp"
#include "gpach/scalars.hpp"

namespace gpach {

using Edge = std::array<int, 2>;
using Face2 = std::array<int, 3>;
using Tet = std::array<int, 4>;
using PentVerts = std::array<int, 5>;

// 4-simplex with ascending vertex labels; sign orients it relative to that order.
struct Pentachoron {
  PentVerts v{};
  int sign = 1;

  bool contains(int vertex) const;
  bool contains_all(const int* labels, int count) const;
  friend bool operator==(const Pentachoron& a, const Pentachoron& b) = default;
};

struct Triangulation {
  int n_vertices = 0;
  std::vector<Pentachoron> simplices;
  // optional; size n_vertices when present, each entry of uniform arity 1 or 3
  std::vector<std::vector<ExactScalar>> coords;

  Triangulation canonicalized() const;  // simplices sorted by vertex lists
};

struct FaceClassification {
  std::vector<int> vertices_used;
  std::vector<Edge> edges, inner_edges;
  std::vector<Face2> faces2;
  std::vector<Tet> tets, boundary_tets, inner_tets;
  std::map<Tet, std::vector<int>> tet_incidence;  // pentachoron indices per tetrahedron
  long euler_characteristic() const;
};

struct MoveInstance {
  Triangulation lhs, rhs, glued;
  std::vector<Tet> boundary_tets;
};

enum class BuiltinMove { ThreeThree, TwoFour };
enum class MoveKind { M33, M24, M42, M15, M51 };

// Throws std::invalid_argument on structural defects (non-ascending labels, label out of
// range, facet in >2 pentachora, inconsistent orientation, malformed coordinates).
void validate(const Triangulation& t);

FaceClassification classify(const Triangulation& t);

// Orientation sign of `ordering` relative to the ascending order of u, times u's sign.
int epsilon_sign(const Pentachoron& u, const PentVerts& ordering);

int permutation_parity(const std::vector<int>& perm);  // +1 even, -1 odd

MoveInstance builtin_move(BuiltinMove kind);

// Six pentachora on vertices 1..6, consistently oriented.
Triangulation delta5_boundary();

// location: 3 vertices (33), 4 (24), 2 (42), 5 (15), 1 (51). rng supplies coordinates
// for the vertex created by a 1-5 move when the input carries coordinates.
Triangulation apply_bistellar(const Triangulation& t, MoveKind kind, const std::vector<int>& location,
                              RandomSource* rng = nullptr);

std::vector<std::vector<int>> enumerate_locations(const Triangulation& t, MoveKind kind);

Triangulation random_walk(const Triangulation& t, int steps, const std::vector<MoveKind>& kinds,
                          RandomSource& rng);

// Relabels vertices via perm (1-based, size n_vertices), restoring ascending order
// within each pentachoron and adjusting signs by the sorting parity.
Triangulation relabel(const Triangulation& t, const std::vector<int>& perm);

Triangulation read_triangulation(std::istream& in);
Triangulation read_triangulation_file(const std::string& path);
void write_triangulation(const Triangulation& t, std::ostream& out);
void write_triangulation_file(const Triangulation& t, const std::string& path);

std::string tet_label(const Tet& t);

}  // namespace gpach
