#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gpach/complexes.hpp"
#include "gpach/linalg.hpp"
#include "gpach/random.hpp"
#include "gpach/weights.hpp"

namespace gpach {

// Face-factor-weighted chain maps. g3 maps inner-edge chains to pentachoron values,
// g4 maps pentachoron chains to inner-edge values; g4 * g3 vanishes on closed complexes.
struct ChainMaps {
  std::vector<Pentachoron> pentachora;
  std::vector<Edge> inner_edges;
  Matrix<ExactScalar> g3;  // pentachora x inner_edges
  Matrix<ExactScalar> g4;  // inner_edges x pentachora
};

ChainMaps build_chain_maps(const Triangulation& t, const FaceFactorTable<ExactScalar>& phi);

struct ExoticRanks {
  int n4 = 0;
  int n_inner_edges = 0;
  int rank_g3 = 0;
  int rank_g4 = 0;
  int exotic_dim = 0;  // (n4 - rank_g4) - rank_g3
  bool composition_zero = false;
  int evaluations = 0;
};

// Minimal exotic dimension over `trials` random three-parameter-per-vertex draws,
// plus one evaluation from stored coordinates when the complex carries triples.
ExoticRanks exotic_betti(const Triangulation& t, std::uint64_t seed, int trials);

// Ordinary second Betti number over the rationals.
int classical_b2(const Triangulation& t);

std::map<Edge, ExactScalar> random_edge_chain(const std::vector<Edge>& edges, RandomSource& rng);

}  // namespace gpach
