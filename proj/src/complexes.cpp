#include "gpach/complexes.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace gpach {

bool Pentachoron::contains(int vertex) const {
  return std::find(v.begin(), v.end(), vertex) != v.end();
}

bool Pentachoron::contains_all(const int* labels, int count) const {
  for (int i = 0; i < count; ++i)
    if (!contains(labels[i])) return false;
  return true;
}

Triangulation Triangulation::canonicalized() const {
  Triangulation t = *this;
  std::sort(t.simplices.begin(), t.simplices.end(),
            [](const Pentachoron& a, const Pentachoron& b) { return a.v < b.v; });
  return t;
}

long FaceClassification::euler_characteristic() const {
  long n4 = 0;
  for (const auto& [tet, inc] : tet_incidence) (void)tet, n4 += long(inc.size());
  // each pentachoron contributes 5 tetrahedra
  return long(vertices_used.size()) - long(edges.size()) + long(faces2.size()) - long(tets.size()) + n4 / 5;
}

int permutation_parity(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i)
    for (std::size_t j = i + 1; j < perm.size(); ++j)
      if (perm[i] > perm[j]) ++inversions;
  return inversions % 2 ? -1 : 1;
}

int epsilon_sign(const Pentachoron& u, const PentVerts& ordering) {
  PentVerts sorted = ordering;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != u.v) throw std::invalid_argument("epsilon_sign: ordering is not a permutation of the simplex");
  return u.sign * permutation_parity(std::vector<int>(ordering.begin(), ordering.end()));
}

namespace {

std::vector<std::pair<Tet, int>> facets_with_positions(const Pentachoron& u) {
  std::vector<std::pair<Tet, int>> out;
  for (int omit = 0; omit < 5; ++omit) {
    Tet f;
    int k = 0;
    for (int i = 0; i < 5; ++i)
      if (i != omit) f[k++] = u.v[i];
    out.emplace_back(f, omit);
  }
  return out;
}

}  // namespace

void validate(const Triangulation& t) {
  for (const Pentachoron& u : t.simplices) {
    for (int i = 0; i < 5; ++i) {
      if (u.v[i] < 1 || u.v[i] > t.n_vertices)
        throw std::invalid_argument("triangulation: vertex label out of range");
      if (i && u.v[i] <= u.v[i - 1])
        throw std::invalid_argument("triangulation: simplex vertices must ascend");
    }
    if (u.sign != 1 && u.sign != -1) throw std::invalid_argument("triangulation: orientation sign must be +1 or -1");
  }
  std::set<PentVerts> seen;
  for (const Pentachoron& u : t.simplices)
    if (!seen.insert(u.v).second) throw std::invalid_argument("triangulation: duplicate pentachoron");

  std::map<Tet, std::vector<int>> induced;  // facet -> induced orientation signs
  for (const Pentachoron& u : t.simplices)
    for (const auto& [facet, omit] : facets_with_positions(u))
      induced[facet].push_back(omit % 2 ? -u.sign : u.sign);
  for (const auto& [facet, signs] : induced) {
    if (signs.size() > 2) throw std::invalid_argument("triangulation: facet " + tet_label(facet) + " lies in more than 2 pentachora");
    if (signs.size() == 2 && signs[0] + signs[1] != 0)
      throw std::invalid_argument("triangulation: inconsistent orientation at facet " + tet_label(facet));
  }

  if (!t.coords.empty()) {
    if (int(t.coords.size()) != t.n_vertices)
      throw std::invalid_argument("triangulation: coordinate count must match vertex count");
    std::size_t arity = t.coords[0].size();
    if (arity != 1 && arity != 3) throw std::invalid_argument("triangulation: coordinate arity must be 1 or 3");
    for (const auto& c : t.coords)
      if (c.size() != arity) throw std::invalid_argument("triangulation: mixed coordinate arity");
  }
}

FaceClassification classify(const Triangulation& t) {
  FaceClassification fc;
  std::set<int> verts;
  std::set<Edge> edges;
  std::set<Face2> faces;
  for (int ui = 0; ui < int(t.simplices.size()); ++ui) {
    const PentVerts& v = t.simplices[std::size_t(ui)].v;
    for (int a = 0; a < 5; ++a) {
      verts.insert(v[a]);
      for (int b = a + 1; b < 5; ++b) {
        edges.insert({v[a], v[b]});
        for (int c = b + 1; c < 5; ++c) faces.insert({v[a], v[b], v[c]});
      }
    }
    for (const auto& [facet, omit] : facets_with_positions(t.simplices[std::size_t(ui)]))
      (void)omit, fc.tet_incidence[facet].push_back(ui);
  }
  fc.vertices_used.assign(verts.begin(), verts.end());
  fc.edges.assign(edges.begin(), edges.end());
  fc.faces2.assign(faces.begin(), faces.end());
  for (const auto& [tet, inc] : fc.tet_incidence) {
    fc.tets.push_back(tet);
    if (inc.size() == 1)
      fc.boundary_tets.push_back(tet);
    else if (inc.size() == 2)
      fc.inner_tets.push_back(tet);
    else
      throw std::invalid_argument("triangulation: facet " + tet_label(tet) + " lies in more than 2 pentachora");
  }
  for (const Edge& e : fc.edges) {
    bool in_boundary = false;
    for (const Tet& bt : fc.boundary_tets) {
      if (std::find(bt.begin(), bt.end(), e[0]) != bt.end() &&
          std::find(bt.begin(), bt.end(), e[1]) != bt.end()) {
        in_boundary = true;
        break;
      }
    }
    if (!in_boundary) fc.inner_edges.push_back(e);
  }
  return fc;
}

namespace {

Triangulation six_vertex(std::initializer_list<std::pair<PentVerts, int>> pents) {
  Triangulation t;
  t.n_vertices = 6;
  for (const auto& [v, s] : pents) t.simplices.push_back({v, s});
  return t;
}

Triangulation flipped(const Triangulation& t) {
  Triangulation f = t;
  for (Pentachoron& u : f.simplices) u.sign = -u.sign;
  return f;
}

Triangulation glue(const Triangulation& a, const Triangulation& b_to_flip) {
  Triangulation g = a;
  for (const Pentachoron& u : flipped(b_to_flip).simplices) g.simplices.push_back(u);
  return g;
}

}  // namespace

Triangulation delta5_boundary() {
  return six_vertex({{{1, 2, 3, 4, 5}, 1},
                     {{1, 2, 3, 4, 6}, -1},
                     {{1, 2, 3, 5, 6}, 1},
                     {{1, 2, 4, 5, 6}, -1},
                     {{1, 3, 4, 5, 6}, 1},
                     {{2, 3, 4, 5, 6}, -1}});
}

MoveInstance builtin_move(BuiltinMove kind) {
  MoveInstance mv;
  if (kind == BuiltinMove::ThreeThree) {
    mv.lhs = six_vertex({{{1, 2, 3, 4, 5}, 1}, {{1, 2, 3, 4, 6}, -1}, {{1, 2, 3, 5, 6}, 1}});
    mv.rhs = six_vertex({{{1, 2, 4, 5, 6}, 1}, {{1, 3, 4, 5, 6}, -1}, {{2, 3, 4, 5, 6}, 1}});
  } else {
    mv.lhs = six_vertex({{{1, 2, 3, 4, 5}, 1}, {{1, 2, 3, 4, 6}, -1}});
    mv.rhs = six_vertex(
        {{{1, 2, 3, 5, 6}, -1}, {{1, 2, 4, 5, 6}, 1}, {{1, 3, 4, 5, 6}, -1}, {{2, 3, 4, 5, 6}, 1}});
  }
  mv.glued = glue(mv.lhs, mv.rhs);
  mv.boundary_tets = classify(mv.lhs).boundary_tets;
  return mv;
}

namespace {

// Canonical descriptions of both sides of each move on abstract labels 1..6.
struct CanonicalSide {
  std::vector<std::pair<PentVerts, int>> pents;
};

CanonicalSide canonical_33_lhs() { return {{{{1, 2, 3, 4, 5}, 1}, {{1, 2, 3, 4, 6}, -1}, {{1, 2, 3, 5, 6}, 1}}}; }
CanonicalSide canonical_33_rhs() { return {{{{1, 2, 4, 5, 6}, 1}, {{1, 3, 4, 5, 6}, -1}, {{2, 3, 4, 5, 6}, 1}}}; }
CanonicalSide canonical_24_lhs() { return {{{{1, 2, 3, 4, 5}, 1}, {{1, 2, 3, 4, 6}, -1}}}; }
CanonicalSide canonical_24_rhs() {
  return {{{{1, 2, 3, 5, 6}, -1}, {{1, 2, 4, 5, 6}, 1}, {{1, 3, 4, 5, 6}, -1}, {{2, 3, 4, 5, 6}, 1}}};
}

struct MappedSide {
  std::vector<std::pair<Pentachoron, int>> pents;  // sorted image with sorting parity
};

// Images of a canonical side under vertex map m (1-based, 6 entries).
MappedSide map_side(const CanonicalSide& side, const std::array<int, 6>& m) {
  MappedSide out;
  for (const auto& [cv, cs] : side.pents) {
    std::vector<int> image;
    for (int label : cv) image.push_back(m[std::size_t(label - 1)]);
    int par = permutation_parity(image);
    std::sort(image.begin(), image.end());
    Pentachoron p;
    std::copy(image.begin(), image.end(), p.v.begin());
    p.sign = cs;
    out.pents.emplace_back(p, par);
  }
  return out;
}

int find_simplex(const Triangulation& t, const PentVerts& v) {
  for (int i = 0; i < int(t.simplices.size()); ++i)
    if (t.simplices[std::size_t(i)].v == v) return i;
  return -1;
}

// Replaces the mapped old side by the mapped new side, fixing the global sign from
// the simplices found in t. Throws if the pattern is absent or inconsistent.
Triangulation replace_sides(const Triangulation& t, const CanonicalSide& old_side,
                            const CanonicalSide& new_side, const std::array<int, 6>& m) {
  MappedSide olds = map_side(old_side, m);
  int global = 0;
  std::vector<int> old_indices;
  for (const auto& [p, par] : olds.pents) {
    int idx = find_simplex(t, p.v);
    if (idx < 0) throw std::invalid_argument("apply_bistellar: pattern not present at location");
    int expected = p.sign * par;  // actual = global * expected
    int g = t.simplices[std::size_t(idx)].sign * expected;
    if (global == 0)
      global = g;
    else if (global != g)
      throw std::invalid_argument("apply_bistellar: inconsistent orientation at location");
    old_indices.push_back(idx);
  }
  Triangulation out = t;
  std::sort(old_indices.rbegin(), old_indices.rend());
  for (int idx : old_indices) out.simplices.erase(out.simplices.begin() + idx);
  for (const auto& [p, par] : map_side(new_side, m).pents) {
    Pentachoron np = p;
    np.sign = p.sign * par * global;
    out.simplices.push_back(np);
  }
  return out;
}

std::array<int, 6> build_map(const std::vector<int>& first, const std::vector<int>& second) {
  std::array<int, 6> m{};
  std::size_t k = 0;
  for (int v : first) m[k++] = v;
  for (int v : second) m[k++] = v;
  return m;
}

std::vector<int> sorted_copy(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool has_face2(const FaceClassification& fc, const Face2& f) {
  return std::binary_search(fc.faces2.begin(), fc.faces2.end(), f);
}
bool has_edge(const FaceClassification& fc, const Edge& e) {
  return std::binary_search(fc.edges.begin(), fc.edges.end(), e);
}
bool has_tet(const FaceClassification& fc, const Tet& t) {
  return fc.tet_incidence.count(t) != 0;
}

}  // namespace

Triangulation apply_bistellar(const Triangulation& t, MoveKind kind, const std::vector<int>& location,
                              RandomSource* rng) {
  FaceClassification fc = classify(t);

  if (kind == MoveKind::M33) {
    if (location.size() != 3) throw std::invalid_argument("apply_bistellar: 3-3 location is a 2-face");
    std::vector<int> pivot = sorted_copy(location);
    std::set<int> around;
    std::set<int> link;
    for (int i = 0; i < int(t.simplices.size()); ++i)
      if (t.simplices[std::size_t(i)].contains_all(pivot.data(), 3)) {
        around.insert(i);
        for (int v : t.simplices[std::size_t(i)].v)
          if (std::find(pivot.begin(), pivot.end(), v) == pivot.end()) link.insert(v);
      }
    if (around.size() != 3 || link.size() != 3)
      throw std::invalid_argument("apply_bistellar: 3-3 pattern not present at location");
    std::vector<int> opp(link.begin(), link.end());
    Face2 new_face{opp[0], opp[1], opp[2]};
    if (has_face2(fc, new_face))
      throw std::invalid_argument("apply_bistellar: opposite 2-face already present");
    return replace_sides(t, canonical_33_lhs(), canonical_33_rhs(), build_map(pivot, opp));
  }

  if (kind == MoveKind::M24) {
    if (location.size() != 4) throw std::invalid_argument("apply_bistellar: 2-4 location is a tetrahedron");
    std::vector<int> facet = sorted_copy(location);
    Tet key{facet[0], facet[1], facet[2], facet[3]};
    auto it = fc.tet_incidence.find(key);
    if (it == fc.tet_incidence.end() || it->second.size() != 2)
      throw std::invalid_argument("apply_bistellar: 2-4 pattern not present at location");
    std::set<int> apexes;
    for (int i : it->second)
      for (int v : t.simplices[std::size_t(i)].v)
        if (std::find(facet.begin(), facet.end(), v) == facet.end()) apexes.insert(v);
    if (apexes.size() != 2) throw std::invalid_argument("apply_bistellar: 2-4 pattern not present at location");
    std::vector<int> apex(apexes.begin(), apexes.end());
    if (has_edge(fc, Edge{apex[0], apex[1]}))
      throw std::invalid_argument("apply_bistellar: opposite edge already present");
    return replace_sides(t, canonical_24_lhs(), canonical_24_rhs(), build_map(facet, apex));
  }

  if (kind == MoveKind::M42) {
    if (location.size() != 2) throw std::invalid_argument("apply_bistellar: 4-2 location is an edge");
    std::vector<int> edge = sorted_copy(location);
    std::set<int> around;
    std::set<int> others;
    for (int i = 0; i < int(t.simplices.size()); ++i)
      if (t.simplices[std::size_t(i)].contains_all(edge.data(), 2)) {
        around.insert(i);
        for (int v : t.simplices[std::size_t(i)].v)
          if (v != edge[0] && v != edge[1]) others.insert(v);
      }
    if (around.size() != 4 || others.size() != 4)
      throw std::invalid_argument("apply_bistellar: 4-2 pattern not present at location");
    std::vector<int> rest(others.begin(), others.end());
    if (has_tet(fc, Tet{rest[0], rest[1], rest[2], rest[3]}))
      throw std::invalid_argument("apply_bistellar: opposite tetrahedron already present");
    return replace_sides(t, canonical_24_rhs(), canonical_24_lhs(), build_map(rest, edge));
  }

  if (kind == MoveKind::M15) {
    if (location.size() != 5) throw std::invalid_argument("apply_bistellar: 1-5 location is a pentachoron");
    std::vector<int> verts = sorted_copy(location);
    PentVerts key{verts[0], verts[1], verts[2], verts[3], verts[4]};
    int idx = find_simplex(t, key);
    if (idx < 0) throw std::invalid_argument("apply_bistellar: 1-5 pattern not present at location");
    const Pentachoron u = t.simplices[std::size_t(idx)];
    Triangulation out = t;
    out.simplices.erase(out.simplices.begin() + idx);
    int w = out.n_vertices + 1;
    out.n_vertices = w;
    if (!out.coords.empty()) {
      if (!rng) throw std::invalid_argument("apply_bistellar: 1-5 on a coordinatized complex needs a random source");
      std::vector<ExactScalar> fresh;
      for (std::size_t k = 0; k < out.coords[0].size(); ++k) fresh.emplace_back(rng->rational());
      out.coords.push_back(std::move(fresh));
    }
    for (int omit = 0; omit < 5; ++omit) {
      Pentachoron np;
      int k = 0;
      for (int i = 0; i < 5; ++i)
        if (i != omit) np.v[k++] = u.v[i];
      np.v[4] = w;  // w exceeds every existing label
      np.sign = (omit % 2 ? -1 : 1) * u.sign;
      out.simplices.push_back(np);
    }
    return out;
  }

  if (kind == MoveKind::M51) {
    if (location.size() != 1) throw std::invalid_argument("apply_bistellar: 5-1 location is a vertex");
    int w = location[0];
    std::vector<int> star;
    std::set<int> rest;
    for (int i = 0; i < int(t.simplices.size()); ++i)
      if (t.simplices[std::size_t(i)].contains(w)) {
        star.push_back(i);
        for (int v : t.simplices[std::size_t(i)].v)
          if (v != w) rest.insert(v);
      }
    if (star.size() != 5 || rest.size() != 5)
      throw std::invalid_argument("apply_bistellar: 5-1 pattern not present at location");
    std::vector<int> base(rest.begin(), rest.end());
    Pentachoron merged;
    std::copy(base.begin(), base.end(), merged.v.begin());
    if (find_simplex(t, merged.v) >= 0)
      throw std::invalid_argument("apply_bistellar: opposite pentachoron already present");
    int sign = 0;
    for (int idx : star) {
      const Pentachoron& p = t.simplices[std::size_t(idx)];
      // p = base minus one vertex, plus w; recover the parent orientation
      int omitted = -1;
      for (int j = 0; j < 5; ++j)
        if (!p.contains(base[std::size_t(j)])) omitted = j;
      int pos_w = int(std::find(p.v.begin(), p.v.end(), w) - p.v.begin());
      if (omitted < 0) throw std::invalid_argument("apply_bistellar: 5-1 pattern not present at location");
      int par_move = (4 - pos_w) % 2 ? -1 : 1;  // move w to the last slot
      int s = p.sign * par_move * ((omitted % 2) ? -1 : 1);
      if (sign == 0)
        sign = s;
      else if (sign != s)
        throw std::invalid_argument("apply_bistellar: inconsistent orientation at location");
    }
    merged.sign = sign;
    Triangulation out = t;
    std::sort(star.rbegin(), star.rend());
    for (int idx : star) out.simplices.erase(out.simplices.begin() + idx);
    out.simplices.push_back(merged);
    // vertex w keeps its label slot; its coordinates (if any) become unused
    return out;
  }

  throw std::invalid_argument("apply_bistellar: unknown move kind");
}

std::vector<std::vector<int>> enumerate_locations(const Triangulation& t, MoveKind kind) {
  FaceClassification fc = classify(t);
  std::vector<std::vector<int>> found;

  auto try_location = [&](const std::vector<int>& loc) {
    try {
      apply_bistellar(t, kind, loc);
      found.push_back(loc);
    } catch (const std::invalid_argument&) {
    }
  };

  switch (kind) {
    case MoveKind::M33:
      for (const Face2& f : fc.faces2) try_location({f[0], f[1], f[2]});
      break;
    case MoveKind::M24:
      for (const Tet& f : fc.inner_tets) try_location({f[0], f[1], f[2], f[3]});
      break;
    case MoveKind::M42:
      for (const Edge& e : fc.inner_edges) try_location({e[0], e[1]});
      break;
    case MoveKind::M15:
      for (const Pentachoron& u : t.simplices)
        found.push_back(std::vector<int>(u.v.begin(), u.v.end()));
      break;
    case MoveKind::M51:
      for (int v : fc.vertices_used) try_location({v});
      break;
  }
  return found;
}

Triangulation random_walk(const Triangulation& t, int steps, const std::vector<MoveKind>& kinds,
                          RandomSource& rng) {
  Triangulation cur = t;
  for (int s = 0; s < steps; ++s) {
    std::vector<MoveKind> order = kinds;
    // random kind first, falling back to the others if no location admits it
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[std::size_t(rng.below(i))]);
    bool applied = false;
    for (MoveKind kind : order) {
      std::vector<std::vector<int>> locs = enumerate_locations(cur, kind);
      if (locs.empty()) continue;
      cur = apply_bistellar(cur, kind, locs[std::size_t(rng.below(locs.size()))], &rng);
      applied = true;
      break;
    }
    if (!applied) throw std::runtime_error("random_walk: no applicable move");
  }
  return cur;
}

Triangulation relabel(const Triangulation& t, const std::vector<int>& perm) {
  if (int(perm.size()) != t.n_vertices) throw std::invalid_argument("relabel: permutation size mismatch");
  Triangulation out = t;
  if (!t.coords.empty())
    for (int v = 1; v <= t.n_vertices; ++v)
      out.coords[std::size_t(perm[std::size_t(v - 1)] - 1)] = t.coords[std::size_t(v - 1)];
  for (std::size_t i = 0; i < t.simplices.size(); ++i) {
    std::vector<int> image;
    for (int v : t.simplices[i].v) image.push_back(perm[std::size_t(v - 1)]);
    int par = permutation_parity(image);
    std::sort(image.begin(), image.end());
    std::copy(image.begin(), image.end(), out.simplices[i].v.begin());
    out.simplices[i].sign = t.simplices[i].sign * par;
  }
  return out;
}

std::string tet_label(const Tet& t) {
  bool small = t[3] <= 9;
  std::string s;
  for (int i = 0; i < 4; ++i) {
    if (i && !small) s += "-";
    s += std::to_string(t[i]);
  }
  return s;
}

Triangulation read_triangulation(std::istream& in) {
  Triangulation t;
  bool have_dim = false, have_vertices = false;
  std::map<int, std::vector<ExactScalar>> coord_lines;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) {
    throw std::invalid_argument("triangulation file, line " + std::to_string(line_no) + ": " + msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ss(line);
    std::string word;
    if (!(ss >> word) || word[0] == '#') continue;
    if (word == "dim") {
      int d;
      if (!(ss >> d) || d != 4) fail("expected `dim 4`");
      have_dim = true;
    } else if (word == "vertices") {
      if (!(ss >> t.n_vertices) || t.n_vertices < 1) fail("bad vertex count");
      have_vertices = true;
    } else if (word == "coord") {
      int label;
      if (!(ss >> label)) fail("bad coord label");
      std::vector<ExactScalar> vals;
      std::string tok;
      while (ss >> tok) {
        auto q = parse_rational(tok);
        if (!q) fail("bad rational `" + tok + "`");
        vals.emplace_back(*q);
      }
      if (vals.size() != 1 && vals.size() != 3) fail("coord takes 1 or 3 rationals");
      if (!coord_lines.emplace(label, std::move(vals)).second) fail("duplicate coord label");
    } else if (word == "simplex") {
      Pentachoron u;
      for (int i = 0; i < 5; ++i)
        if (!(ss >> u.v[i])) fail("simplex needs 5 vertices and a sign");
      std::string sign;
      if (!(ss >> sign)) fail("simplex needs a sign");
      if (sign == "+1" || sign == "1")
        u.sign = 1;
      else if (sign == "-1")
        u.sign = -1;
      else
        fail("sign must be +1 or -1");
      t.simplices.push_back(u);
    } else {
      fail("unknown directive `" + word + "`");
    }
  }
  auto fail_file = [](const std::string& msg) { throw std::invalid_argument("triangulation file: " + msg); };
  if (!have_dim) fail_file("missing `dim 4`");
  if (!have_vertices) fail_file("missing `vertices N`");
  if (!coord_lines.empty()) {
    t.coords.resize(std::size_t(t.n_vertices));
    for (auto& [label, vals] : coord_lines) {
      if (label < 1 || label > t.n_vertices) fail_file("coord label out of range");
      t.coords[std::size_t(label - 1)] = std::move(vals);
    }
    for (const auto& c : t.coords)
      if (c.empty()) fail_file("coordinates must cover every vertex");
  }
  validate(t);
  return t;
}

Triangulation read_triangulation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  return read_triangulation(in);
}

namespace {

std::string rational_str(const ExactScalar& x) {
  if (x.im != 0) throw std::invalid_argument("triangulation file: coordinates must be real rationals");
  return x.re.get_str();
}

}  // namespace

void write_triangulation(const Triangulation& t, std::ostream& out) {
  out << "dim 4\n";
  out << "vertices " << t.n_vertices << "\n";
  for (std::size_t v = 0; v < t.coords.size(); ++v) {
    out << "coord " << v + 1;
    for (const ExactScalar& x : t.coords[v]) out << " " << rational_str(x);
    out << "\n";
  }
  for (const Pentachoron& u : t.simplices) {
    out << "simplex";
    for (int v : u.v) out << " " << v;
    out << " " << (u.sign > 0 ? "+1" : "-1") << "\n";
  }
}

void write_triangulation_file(const Triangulation& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path);
  write_triangulation(t, out);
}

}  // namespace gpach
