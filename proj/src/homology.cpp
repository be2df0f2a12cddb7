#include "gpach/homology.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gpach {

ChainMaps build_chain_maps(const Triangulation& t, const FaceFactorTable<ExactScalar>& phi) {
  FaceClassification fc = classify(t);
  ChainMaps cm;
  cm.pentachora = t.simplices;
  cm.inner_edges = fc.inner_edges;
  int np = int(cm.pentachora.size());
  int ne = int(cm.inner_edges.size());
  cm.g3 = Matrix<ExactScalar>(np, ne);
  cm.g4 = Matrix<ExactScalar>(ne, np);
  for (int ui = 0; ui < np; ++ui) {
    const Pentachoron& u = cm.pentachora[std::size_t(ui)];
    for (int ei = 0; ei < ne; ++ei) {
      const Edge& b = cm.inner_edges[std::size_t(ei)];
      if (!u.contains(b[0]) || !u.contains(b[1])) continue;
      PentVerts ordering;
      ordering[0] = b[0];
      ordering[1] = b[1];
      Face2 rest{};
      int k = 0;
      for (int v : u.v)
        if (v != b[0] && v != b[1]) rest[std::size_t(k)] = v, ordering[std::size_t(2 + k)] = v, ++k;
      ExactScalar den = phi.get(b[0], b[1], rest[0]) * phi.get(b[0], b[1], rest[1]) * phi.get(b[0], b[1], rest[2]);
      if (den.is_zero()) throw Degenerate("vanishing edge factor product");
      cm.g3.at(ui, ei) = ExactScalar(1) / den;
      ExactScalar w = phi.get(rest[0], rest[1], rest[2]);
      if (epsilon_sign(u, ordering) < 0) w = -w;
      cm.g4.at(ei, ui) = w;
    }
  }
  return cm;
}

namespace {

struct Evaluation {
  int rank_g3 = 0;
  int rank_g4 = 0;
  bool composition_zero = false;
};

Evaluation evaluate(const Triangulation& t, const FaceFactorTable<ExactScalar>& phi) {
  ChainMaps cm = build_chain_maps(t, phi);
  Evaluation ev;
  ev.composition_zero = (cm.g4 * cm.g3).is_zero();
  ev.rank_g3 = rank(cm.g3);
  ev.rank_g4 = rank(cm.g4);
  return ev;
}

FaceFactorTable<ExactScalar> draw_family2_table(const Triangulation& t, const std::vector<Face2>& faces,
                                                RandomSource& rng) {
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<std::array<ExactScalar, 3>> params;
    for (int v = 0; v < t.n_vertices; ++v)
      params.push_back({ExactScalar(rng.rational(99, 9)), ExactScalar(rng.rational(99, 9)),
                        ExactScalar(rng.rational(99, 9))});
    try {
      return FaceFactorTable<ExactScalar>::family2(params, faces);
    } catch (const Degenerate&) {
    }
  }
  throw Degenerate("no usable vertex parameter draw after 32 attempts");
}

}  // namespace

ExoticRanks exotic_betti(const Triangulation& t, std::uint64_t seed, int trials) {
  // only three-coordinate vertex data defines the determinant face factors the
  // chain maps are built from; single coordinates belong to the first family
  bool has_params = !t.coords.empty() && t.coords[0].size() == 3;
  if (trials < 1 && !has_params)
    throw std::invalid_argument("exotic_betti: needs trials or three-coordinate vertex data");
  FaceClassification fc = classify(t);
  ExoticRanks out;
  out.n4 = int(t.simplices.size());
  out.n_inner_edges = int(fc.inner_edges.size());
  out.composition_zero = true;
  bool first = true;
  auto take = [&](const Evaluation& ev) {
    int exotic = (out.n4 - ev.rank_g4) - ev.rank_g3;
    if (first || exotic < out.exotic_dim) {
      out.exotic_dim = exotic;
      out.rank_g3 = ev.rank_g3;
      out.rank_g4 = ev.rank_g4;
    }
    out.composition_zero = out.composition_zero && ev.composition_zero;
    first = false;
    ++out.evaluations;
  };
  for (int trial = 0; trial < trials; ++trial) {
    RandomSource rng = RandomSource::trial_stream(seed, std::uint64_t(trial));
    take(evaluate(t, draw_family2_table(t, fc.faces2, rng)));
  }
  if (has_params) {
    std::vector<std::array<ExactScalar, 3>> params;
    for (const auto& c : t.coords) params.push_back({c[0], c[1], c[2]});
    take(evaluate(t, FaceFactorTable<ExactScalar>::family2(params, fc.faces2)));
  }
  return out;
}

int classical_b2(const Triangulation& t) {
  FaceClassification fc = classify(t);
  std::map<Edge, int> edge_index;
  std::map<Face2, int> face_index;
  std::map<Tet, int> tet_index;
  for (const Edge& e : fc.edges) edge_index.emplace(e, int(edge_index.size()));
  for (const Face2& f : fc.faces2) face_index.emplace(f, int(face_index.size()));
  for (const Tet& x : fc.tets) tet_index.emplace(x, int(tet_index.size()));

  Matrix<ExactScalar> d2(int(edge_index.size()), int(face_index.size()));
  for (const auto& [f, fi] : face_index)
    for (int omit = 0; omit < 3; ++omit) {
      Edge e{};
      int k = 0;
      for (int i = 0; i < 3; ++i)
        if (i != omit) e[std::size_t(k++)] = f[std::size_t(i)];
      d2.at(edge_index.at(e), fi) = ExactScalar(omit % 2 ? -1 : 1);
    }

  Matrix<ExactScalar> d3(int(face_index.size()), int(tet_index.size()));
  for (const auto& [x, xi] : tet_index)
    for (int omit = 0; omit < 4; ++omit) {
      Face2 f{};
      int k = 0;
      for (int i = 0; i < 4; ++i)
        if (i != omit) f[std::size_t(k++)] = x[std::size_t(i)];
      d3.at(face_index.at(f), xi) = ExactScalar(omit % 2 ? -1 : 1);
    }

  return int(face_index.size()) - rank(d2) - rank(d3);
}

std::map<Edge, ExactScalar> random_edge_chain(const std::vector<Edge>& edges, RandomSource& rng) {
  std::map<Edge, ExactScalar> chain;
  for (const Edge& e : edges) chain.emplace(e, ExactScalar(rng.rational(99, 9)));
  return chain;
}

}  // namespace gpach
