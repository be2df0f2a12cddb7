#pragma once

#include <array>
#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "gpach/complexes.hpp"
#include "gpach/grassmann.hpp"
#include "gpach/operators.hpp"

namespace gpach {

// Parameter draw hit a pole or a vanishing face factor; resample and retry.
class Degenerate : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One Grassmann generator per tetrahedron, in the given order.  The registry
// lives behind a shared_ptr so elements built against it stay valid when the
// index is copied or returned by value.
struct TetIndex {
  std::shared_ptr<GeneratorRegistry> registry = std::make_shared<GeneratorRegistry>();
  std::vector<Tet> tets;
  std::map<Tet, int> pos;

  const GeneratorRegistry& reg() const { return *registry; }
  bool has(const Tet& t) const { return pos.count(t) != 0; }
  int index_of(const Tet& t) const {
    auto it = pos.find(t);
    if (it == pos.end()) throw std::invalid_argument("tetrahedron " + tet_label(t) + " is not indexed");
    return it->second;
  }
};

inline TetIndex index_tets(const std::vector<Tet>& tets) {
  TetIndex idx;
  idx.tets = tets;
  for (const Tet& t : tets) {
    int i = idx.registry->add(tet_label(t));
    idx.pos.emplace(t, i);
  }
  return idx;
}

inline std::vector<Face2> all_faces2(int n_vertices) {
  std::vector<Face2> out;
  for (int i = 1; i <= n_vertices; ++i)
    for (int j = i + 1; j <= n_vertices; ++j)
      for (int k = j + 1; k <= n_vertices; ++k) out.push_back({i, j, k});
  return out;
}

inline std::vector<Tet> all_tets(int n_vertices) {
  std::vector<Tet> out;
  for (int i = 1; i <= n_vertices; ++i)
    for (int j = i + 1; j <= n_vertices; ++j)
      for (int k = j + 1; k <= n_vertices; ++k)
        for (int l = k + 1; l <= n_vertices; ++l) out.push_back({i, j, k, l});
  return out;
}

template <class S>
S face_factor_1(const S& xi, const S& xj, const S& xk) {
  S one(1);
  std::array<std::pair<S, S>, 3> pairs = {{{xi, xj}, {xj, xk}, {xk, xi}}};
  S value(1);
  for (const auto& [a, b] : pairs) {
    S den = one + a * b;
    if (den.is_zero()) throw Degenerate("face factor pole");
    value = value * ((a - b) / den);
  }
  if (value.is_zero()) throw Degenerate("vanishing face factor");
  return value;
}

template <class S>
S face_factor_3(const std::array<S, 3>& ci, const std::array<S, 3>& cj, const std::array<S, 3>& ck) {
  S det = ci[0] * (cj[1] * ck[2] - cj[2] * ck[1]) - cj[0] * (ci[1] * ck[2] - ci[2] * ck[1]) +
          ck[0] * (ci[1] * cj[2] - ci[2] * cj[1]);
  if (det.is_zero()) throw Degenerate("vanishing face factor");
  return det;
}

// Totally antisymmetric 2-face factors; stored on ascending triples.
template <class S>
class FaceFactorTable {
 public:
  void set(const Face2& f, S value) { values_[f] = std::move(value); }

  S get(int i, int j, int k) const {
    std::vector<int> order = {i, j, k};
    Face2 f = {i, j, k};
    std::sort(f.begin(), f.end());
    auto it = values_.find(f);
    if (it == values_.end())
      throw std::invalid_argument("face factor for " + std::to_string(i) + "," + std::to_string(j) + "," +
                                  std::to_string(k) + " is not set");
    return permutation_parity(order) > 0 ? it->second : -it->second;
  }

  bool has(const Face2& f) const { return values_.count(f) != 0; }

  // one parameter per vertex, indexed by label-1
  static FaceFactorTable family1(const std::vector<S>& xi, const std::vector<Face2>& faces) {
    FaceFactorTable t;
    for (const Face2& f : faces)
      t.set(f, face_factor_1(xi.at(std::size_t(f[0] - 1)), xi.at(std::size_t(f[1] - 1)),
                             xi.at(std::size_t(f[2] - 1))));
    return t;
  }

  // three parameters per vertex
  static FaceFactorTable family2(const std::vector<std::array<S, 3>>& params, const std::vector<Face2>& faces) {
    FaceFactorTable t;
    for (const Face2& f : faces)
      t.set(f, face_factor_3(params.at(std::size_t(f[0] - 1)), params.at(std::size_t(f[1] - 1)),
                             params.at(std::size_t(f[2] - 1))));
    return t;
  }

 private:
  std::map<Face2, S> values_;
};

// Sum over the ten 2-faces abc of u, with d1 < d2 the remaining vertices:
// sign of (d1 a b c d2) relative to u, times the face factor, times x_{abcd1} x_{abcd2}.
template <class S>
GrassmannElement<S> quadratic_form(const Pentachoron& u, const FaceFactorTable<S>& phi, const TetIndex& idx) {
  GrassmannElement<S> total(&idx.reg());
  for (int p = 0; p < 5; ++p)
    for (int q = p + 1; q < 5; ++q) {
      // d1, d2 = u.v[p], u.v[q]; the 2-face is everything else
      PentVerts ordering;
      ordering[0] = u.v[p];
      ordering[4] = u.v[q];
      int k = 1;
      Tet t1{}, t2{};
      int m1 = 0, m2 = 0;
      Face2 f{};
      int fi = 0;
      for (int i = 0; i < 5; ++i)
        if (i != p && i != q) {
          ordering[k++] = u.v[i];
          f[fi++] = u.v[i];
        }
      for (int i = 0; i < 5; ++i) {
        if (i != q) t1[m1++] = u.v[i];
        if (i != p) t2[m2++] = u.v[i];
      }
      int eps = epsilon_sign(u, ordering);
      S coeff = phi.get(f[0], f[1], f[2]);
      if (eps < 0) coeff = -coeff;
      auto term = GrassmannElement<S>::generator(&idx.reg(), idx.index_of(t1)) *
                  GrassmannElement<S>::generator(&idx.reg(), idx.index_of(t2));
      term *= coeff;
      total += term;
    }
  return total;
}

template <class S>
GrassmannElement<S> weight_family1(const Pentachoron& u, const FaceFactorTable<S>& phi, const TetIndex& idx) {
  return exponential(quadratic_form(u, phi, idx));
}

template <class S>
GrassmannElement<S> weight_family2(const Pentachoron& u, const S& h, const FaceFactorTable<S>& phi,
                                   const TetIndex& idx) {
  return GrassmannElement<S>::scalar(&idx.reg(), h) + quadratic_form(u, phi, idx);
}

// phi_{ijk} phi_{ijl} phi_{ijm} for edge {i,j} inside u, {k,l,m} = u minus the edge
template <class S>
S edge_phi_product(const Edge& b, const Pentachoron& u, const FaceFactorTable<S>& phi) {
  S prod(1);
  for (int v : u.v)
    if (v != b[0] && v != b[1]) prod = prod * phi.get(b[0], b[1], v);
  return prod;
}

// h_u = sum over edges b of u of chain(b) / (phi_{ijk} phi_{ijl} phi_{ijm}); absent entries count as zero
template <class S>
S allowable_h(const Pentachoron& u, const std::map<Edge, S>& chain, const FaceFactorTable<S>& phi) {
  S h(0);
  for (int a = 0; a < 5; ++a)
    for (int b = a + 1; b < 5; ++b) {
      Edge e{u.v[a], u.v[b]};
      auto it = chain.find(e);
      if (it == chain.end() || it->second.is_zero()) continue;
      S den = edge_phi_product(e, u, phi);
      if (den.is_zero()) throw Degenerate("vanishing edge factor product");
      h = h + it->second / den;
    }
  return h;
}

// convenience h for six-vertex complexes: a xi_n + b eta_n + c zeta_n, n the vertex missing from u
template <class S>
S h_missing_vertex(const Pentachoron& u, const std::vector<std::array<S, 3>>& params, const S& a, const S& b,
                   const S& c) {
  int n = 21;
  for (int v : u.v) n -= v;
  const std::array<S, 3>& p = params.at(std::size_t(n - 1));
  return a * p[0] + b * p[1] + c * p[2];
}

// sum over indexed tets t containing the edge of (phi_{ijk} phi_{ijl})^{-1} d/dx_t, {k,l} = t minus edge
template <class S>
FirstOrderOperator<S> edge_operator(const Edge& b, const TetIndex& idx, const FaceFactorTable<S>& phi) {
  FirstOrderOperator<S> op(&idx.reg());
  for (const Tet& t : idx.tets) {
    if (std::find(t.begin(), t.end(), b[0]) == t.end() || std::find(t.begin(), t.end(), b[1]) == t.end())
      continue;
    S prod(1);
    for (int v : t)
      if (v != b[0] && v != b[1]) prod = prod * phi.get(b[0], b[1], v);
    if (prod.is_zero()) throw Degenerate("vanishing edge factor product");
    op.add_beta(idx.index_of(t), S(1) / prod);
  }
  return op;
}

// phi_{ijk} phi_{ijl} x_{ijkl} on the first indexed tet containing the edge; edge_operator of it gives 1
template <class S>
GrassmannElement<S> edge_weight(const Edge& b, const TetIndex& idx, const FaceFactorTable<S>& phi) {
  for (const Tet& t : idx.tets) {
    if (std::find(t.begin(), t.end(), b[0]) == t.end() || std::find(t.begin(), t.end(), b[1]) == t.end())
      continue;
    S prod(1);
    for (int v : t)
      if (v != b[0] && v != b[1]) prod = prod * phi.get(b[0], b[1], v);
    auto x = GrassmannElement<S>::generator(&idx.reg(), idx.index_of(t));
    x *= prod;
    return x;
  }
  throw std::invalid_argument("no indexed tetrahedron contains the edge");
}

template <class S>
S r_factor(const std::vector<S>& xi, int i, int j, int k, int l) {
  const S &a = xi.at(std::size_t(i - 1)), &b = xi.at(std::size_t(j - 1)), &c = xi.at(std::size_t(k - 1)),
          &d = xi.at(std::size_t(l - 1));
  S one(1);
  S num = (a * b + one) * (c * d + one) *
          (a * b * c * d - c * d + b * d + a * d + b * c + a * c - a * b + one);
  S den = (c - a) * (c - b) * (d - a) * (d - b);
  if (den.is_zero()) throw Degenerate("r factor pole");
  return num / den;
}

template <class S>
S s_factor(const std::vector<S>& xi, int i, int j, int k, int l) {
  const S &a = xi.at(std::size_t(i - 1)), &b = xi.at(std::size_t(j - 1)), &c = xi.at(std::size_t(k - 1)),
          &d = xi.at(std::size_t(l - 1));
  S one(1);
  S num = (b - a) * (d - c) * (b * c * d + a * c * d - a * b * d - a * b * c + d + c - b - a);
  S den = (a * c + one) * (b * c + one) * (a * d + one) * (b * d + one);
  if (den.is_zero()) throw Degenerate("s factor pole");
  return -(num / den);
}

enum class MoveSide { Lhs, Rhs };

// Closed-form isotropic first-order operator attached to one pentachoron of the
// three-three move, first family: r_t on derivatives and signed s_t on generators,
// over the three inner tets obtained by dropping 3,2,1 (lhs) or 6,5,4 (rhs).
// The x-coefficient signs form opposite checkerboards on the two sides, indexed
// by which of 6,5,4 (lhs) resp. 3,2,1 (rhs) is missing from u, so that any two
// of the six operators pair to zero.
template <class S>
FirstOrderOperator<S> explicit_isotropic_vector(const Pentachoron& u, MoveSide side, const std::vector<S>& xi,
                                                const TetIndex& idx) {
  const bool lhs = side == MoveSide::Lhs;
  const std::array<int, 3> drops = lhs ? std::array<int, 3>{3, 2, 1} : std::array<int, 3>{6, 5, 4};
  const int missing = 21 - (u.v[0] + u.v[1] + u.v[2] + u.v[3] + u.v[4]);
  const int line = lhs ? 6 - missing : 3 - missing;
  if (line < 0 || line > 2) throw std::invalid_argument("pentachoron is not on the requested side of the move");
  FirstOrderOperator<S> op(&idx.reg());
  for (int c = 0; c < 3; ++c) {
    Tet t{};
    int m = 0;
    bool dropped = false;
    for (int v : u.v) {
      if (v == drops[std::size_t(c)]) {
        dropped = true;
        continue;
      }
      if (m == 4) throw std::invalid_argument("pentachoron is not on the requested side of the move");
      t[m++] = v;
    }
    if (!dropped) throw std::invalid_argument("pentachoron is not on the requested side of the move");
    int ti = idx.index_of(t);
    S r = r_factor(xi, t[0], t[1], t[2], t[3]);
    S s = s_factor(xi, t[0], t[1], t[2], t[3]);
    const bool even = (line + c) % 2 == 0;
    if (even == lhs) s = -s;
    op.add_beta(ti, r);
    op.add_gamma(ti, s);
  }
  return op;
}

}  // namespace gpach
