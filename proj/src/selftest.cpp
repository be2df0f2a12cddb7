#include "gpach/selftest.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "gpach/homology.hpp"
#include "gpach/relations.hpp"

namespace gpach {
namespace {

// Float-backend bounds; the exact backend never rounds, so its checks compare
// structurally instead.
constexpr double kIsotropyBound = 1e-10;
constexpr double kResidualBound = 1e-8;

// Wall-clock budgets the checks must come in under.
constexpr double kKernelBudget = 1.0;
constexpr double kFamily1Budget = 30.0;
constexpr double kPipelineBudget = 120.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

using E = ExactScalar;
using GE = GrassmannElement<E>;

GE random_element(const GeneratorRegistry* reg, RandomSource& rng, int n_gens, int max_terms) {
  GE f(reg);
  int terms = 1 + int(rng.below(std::uint64_t(max_terms)));
  for (int t = 0; t < terms; ++t)
    f.add_term(Mask(rng.below(std::uint64_t(1) << n_gens)), E(rng.nonzero_rational(9, 9)));
  return f;
}

GE random_homogeneous(const GeneratorRegistry* reg, RandomSource& rng, int n_gens, int want_odd) {
  GE f(reg);
  int terms = 1 + int(rng.below(3));
  for (int t = 0; t < terms; ++t) {
    Mask m;
    do
      m = Mask(rng.below(std::uint64_t(1) << n_gens));
    while ((std::popcount(m) & 1) != want_odd);
    f.add_term(m, E(rng.nonzero_rational(9, 9)));
  }
  return f;
}

CheckResult check_grassmann_kernel() {
  auto t0 = Clock::now();
  CheckResult res{"grassmann-kernel", false, "", 0};
  std::ostringstream why;

  GeneratorRegistry reg;
  for (int i = 0; i < 6; ++i) reg.add("x" + std::to_string(i + 1));
  auto mono = [&](Mask m) { return GE::monomial(&reg, m, E(1)); };

  // exp(x1 x2 + x3 x4) written out degree by degree
  GE quad = mono(0b0011) + mono(0b1100);
  GE expected = GE::scalar(&reg, E(1)) + mono(0b0011) + mono(0b1100) + mono(0b1111);
  bool ok = exponential(quad) == expected;
  if (!ok) why << "worked exponential differs; ";

  RandomSource rng(2718);
  int cases = 0, failed = 0;
  auto tally = [&](bool pass) {
    ++cases;
    if (!pass) ++failed;
  };
  for (int it = 0; it < 125; ++it) {
    int i = int(rng.below(6)), j = int(rng.below(6));
    while (j == i) j = int(rng.below(6));
    GE xi = GE::generator(&reg, i), xj = GE::generator(&reg, j);
    GE f = random_element(&reg, rng, 6, 6);
    GE g = random_element(&reg, rng, 6, 6);

    tally((xi * xj + xj * xi).is_zero());
    tally((left_derivative(left_derivative(f, i), j) + left_derivative(left_derivative(f, j), i)).is_zero());
    tally(left_derivative(left_derivative(f, i), i).is_zero());

    int want_odd = int(rng.below(2));
    GE h = random_homogeneous(&reg, rng, 6, want_odd);
    GE lhs = left_derivative(h * g, i);
    GE rhs = left_derivative(h, i) * g;
    GE cross = h * left_derivative(g, i);
    if (want_odd) cross *= E(-1);
    rhs += cross;
    tally(lhs == rhs);

    // integral of c x_i + (terms without x_i) over x_i is c
    E c(rng.nonzero_rational(9, 9));
    GE no_i(&reg);
    for (const auto& [m, v] : g.terms())
      if (!(m & (Mask(1) << i))) no_i.add_term(m, v);
    GE xi_c = xi;
    xi_c *= c;
    tally(berezin_integrate(xi_c + no_i, {i}) == GE::scalar(&reg, c));

    tally(berezin_integrate(f, {i, j}) + berezin_integrate(f, {j, i}) == GE(&reg));

    E c1(rng.nonzero_rational(9, 9)), c2(rng.nonzero_rational(9, 9));
    GE a = mono(0b000011), b = mono(0b110000);
    a *= c1;
    b *= c2;
    tally(exponential(a + b) == exponential(a) * exponential(b));

    // nonzero mask keeps the nilpotent part free of constants
    GE nil = random_element(&reg, rng, 6, 3) * mono(Mask(rng.below(63) + 1));
    GE unit = GE::scalar(&reg, E(1)) + nil;
    tally((unit * inverse(unit)) == GE::scalar(&reg, E(1)));
  }
  if (failed) why << failed << " of " << cases << " property cases failed; ";
  ok = ok && failed == 0;

  res.seconds = seconds_since(t0);
  if (res.seconds >= kKernelBudget) {
    ok = false;
    why << "over the " << kKernelBudget << " s budget; ";
  }
  res.passed = ok;
  res.detail = ok ? "worked exponential and " + std::to_string(cases) + " property cases, all exact"
                  : why.str();
  return res;
}

CheckResult check_family1_three_three() {
  auto t0 = Clock::now();
  CheckResult res{"family1-three-three", false, "", 0};
  std::ostringstream why;
  const int trials = 25;
  int good = 0;
  for (int k = 0; k < trials; ++k) {
    RandomSource rng = RandomSource::trial_stream(1033, std::uint64_t(k));
    try {
      auto rep = with_resampling([&] { return verify_33<E>(draw_xi<E>(rng)); });
      if (rep.equal && rep.lhs_value.terms() == rep.rhs_value.terms())
        ++good;
      else
        why << "trial " << k << " sides differ; ";
    } catch (const std::exception& e) {
      why << "trial " << k << ": " << e.what() << "; ";
    }
  }
  bool ok = good == trials;
  res.seconds = seconds_since(t0);
  if (res.seconds >= kFamily1Budget) {
    ok = false;
    why << "over the " << kFamily1Budget << " s budget; ";
  }
  res.passed = ok;
  res.detail = ok ? std::to_string(good) + "/" + std::to_string(trials) + " draws exactly equal" : why.str();
  return res;
}

// Coefficient matrix of a degree-2 element over the full tetrahedron index.
Matrix<E> quadratic_matrix(const GE& f, int n) {
  Matrix<E> m(n, n);
  for (const auto& [mask, c] : f.terms()) {
    Mask byte = mask;
    int i = std::countr_zero(byte);
    byte &= byte - 1;
    int j = std::countr_zero(byte);
    m.at(i, j) = c;
    m.at(j, i) = -c;
  }
  return m;
}

CheckResult check_family2_relations() {
  auto t0 = Clock::now();
  CheckResult res{"family2-relations", false, "", 0};
  std::ostringstream why;
  const int trials = 25;
  int good = 0;
  std::vector<Edge> edges;
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j) edges.push_back({i, j});
  for (int k = 0; k < trials; ++k) {
    RandomSource rng = RandomSource::trial_stream(2033, std::uint64_t(k));
    try {
      bool trial_ok = with_resampling([&] {
        auto coords = draw_coords<E>(rng);
        std::map<Edge, E> chain;
        if (k != 0) chain = random_edge_chain(edges, rng);  // the first trial keeps the zero chain
        bool ok = verify_33(coords, chain).equal;
        ok = ok && verify_24(coords, chain).equal;
        TetIndex idx = index_tets(all_tets(6));
        auto phi = FaceFactorTable<E>::family2(coords, all_faces2(6));
        for (const Pentachoron& u : delta5_boundary().simplices) {
          E h = allowable_h(u, chain, phi);
          GE quad = quadratic_form(u, phi, idx);
          GE w = weight_family2(u, h, phi, idx);
          ok = ok && (quad * quad).is_zero();
          ok = ok && rank(quadratic_matrix(quad, int(idx.tets.size()))) == 2;
          if (!h.is_zero()) {
            GE scaled = quad;
            scaled *= E(1) / h;
            GE he = exponential(scaled);
            he *= h;
            ok = ok && he == w;
          }
          for (int a = 0; a < 5; ++a)
            for (int b = a + 1; b < 5; ++b)
              ok = ok && apply(edge_operator(Edge{u.v[a], u.v[b]}, idx, phi), w).is_zero();
        }
        return ok;
      });
      if (trial_ok)
        ++good;
      else
        why << "trial " << k << " failed a sub-check; ";
    } catch (const std::exception& e) {
      why << "trial " << k << ": " << e.what() << "; ";
    }
  }
  res.seconds = seconds_since(t0);
  res.passed = good == trials;
  res.detail = res.passed ? std::to_string(good) + "/" + std::to_string(trials) +
                                " draws: both relations, the h-exponential identity, rank 2, and all "
                                "edge equations exact (zero chain included)"
                          : why.str();
  return res;
}

CheckResult check_edge_weight_invariance() {
  auto t0 = Clock::now();
  CheckResult res{"edge-weight-invariance", false, "", 0};
  std::ostringstream why;
  RandomSource rng(4033);
  try {
    auto ctx = with_resampling([&] {
      auto coords = draw_coords<E>(rng);
      std::vector<Edge> edges;
      for (int i = 1; i <= 6; ++i)
        for (int j = i + 1; j <= 6; ++j) edges.push_back({i, j});
      auto chain = random_edge_chain(edges, rng);
      return make_24_context(coords, chain);
    });
    auto base = run_24(ctx, ctx.w56);
    bool ok = base.equal;
    if (!ok) why << "base relation failed; ";
    FirstOrderOperator<E> d56 = edge_operator(Edge{5, 6}, ctx.idx, ctx.phi);
    if (!(apply(d56, ctx.w56) == GE::scalar(&ctx.idx.reg(), E(1)))) {
      ok = false;
      why << "canonical edge weight is not normalized; ";
    }
    const int shifts = 10;
    int good = 0;
    for (int k = 0; k < shifts; ++k) {
      GE tilde = kernel_w_tilde(ctx, rng);
      if (!apply(d56, tilde).is_zero()) {
        why << "shift " << k << " not in the kernel; ";
        continue;
      }
      auto rep = run_24(ctx, ctx.w56 + tilde);
      if (rep.rhs_value.terms() == base.rhs_value.terms())
        ++good;
      else
        why << "shift " << k << " changed the right side; ";
    }
    ok = ok && good == shifts;
    res.passed = ok;
    if (ok)
      res.detail = std::to_string(good) + "/" + std::to_string(shifts) +
                   " kernel shifts leave the right side bit-identical";
  } catch (const std::exception& e) {
    why << e.what();
  }
  if (!res.passed) res.detail = why.str();
  res.seconds = seconds_since(t0);
  return res;
}

CheckResult check_chain_exactness() {
  auto t0 = Clock::now();
  CheckResult res{"chain-exactness", false, "", 0};
  std::ostringstream why;
  Triangulation sphere = delta5_boundary();
  ExoticRanks er = exotic_betti(sphere, 5077, 10);
  int b2 = classical_b2(sphere);
  bool ok = er.composition_zero && er.rank_g3 == 3 && er.rank_g4 == 3 && er.exotic_dim == 0 && b2 == 0 &&
            er.exotic_dim == 6 * b2;
  if (!ok)
    why << "six-simplex sphere: composition_zero=" << er.composition_zero << " ranks=" << er.rank_g3 << "/"
        << er.rank_g4 << " exotic=" << er.exotic_dim << " b2=" << b2 << "; ";
  const int walks = 10;
  int good = 0;
  for (int k = 0; k < walks; ++k) {
    RandomSource rng = RandomSource::trial_stream(5033, std::uint64_t(k));
    Triangulation w = random_walk(sphere, 10 + k % 3,
                                  {MoveKind::M33, MoveKind::M24, MoveKind::M42, MoveKind::M15}, rng);
    ExoticRanks ew = exotic_betti(w, 5100 + std::uint64_t(k), 3);
    int wb2 = classical_b2(w);
    if (ew.composition_zero && ew.exotic_dim == 0 && wb2 == 0 && ew.exotic_dim == 6 * wb2)
      ++good;
    else
      why << "walk " << k << " (" << w.simplices.size() << " simplices): composition_zero="
          << ew.composition_zero << " exotic=" << ew.exotic_dim << " b2=" << wb2 << "; ";
  }
  ok = ok && good == walks;
  res.passed = ok;
  res.detail = ok ? "composition vanishes and ranks are 3/3 with exotic 0 = 6*b2 on the sphere; " +
                        std::to_string(good) + "/" + std::to_string(walks) + " walked triangulations agree"
                  : why.str();
  res.seconds = seconds_since(t0);
  return res;
}

CheckResult check_family_pipeline() {
  auto t0 = Clock::now();
  CheckResult res{"parameter-family-pipeline", false, "", 0};
  std::ostringstream why;
  const int runs = 10;
  int good = 0;
  double worst_pairing = 0, worst_weight = 0, worst_rel = 0, worst_ann = 0;
  for (int k = 0; k < runs; ++k) {
    RandomSource rng = RandomSource::trial_stream(6033, std::uint64_t(k));
    try {
      FamilyRun<FloatScalar> run = run_family_pipeline<FloatScalar>(rng);
      bool ok = true;
      double pair_max = max_pairing_abs(run.basis.v9);
      worst_pairing = std::max(worst_pairing, pair_max);
      if (pair_max >= kIsotropyBound) {
        ok = false;
        why << "run " << k << " pairing " << fmt(pair_max) << "; ";
      }
      for (const auto* side : {&run.weights.lhs, &run.weights.rhs})
        for (const SimplexWeight<FloatScalar>& sw : *side) {
          if (parity(sw.weight) != Parity::Even) {
            ok = false;
            why << "run " << k << " weight not even; ";
          }
          for (const auto& op : sw.space.basis) {
            double r = apply(op, sw.weight).max_abs() / ((1 + sw.weight.max_abs()) * (1 + op.max_abs()));
            worst_weight = std::max(worst_weight, r);
            if (r >= kResidualBound) {
              ok = false;
              why << "run " << k << " weight residual " << fmt(r) << "; ";
            }
          }
        }
      worst_rel = std::max(worst_rel, run.report.relation.residual);
      worst_ann = std::max(worst_ann, run.report.annihilation_residual);
      if (!run.report.relation.equal || run.report.relation.residual >= kResidualBound) {
        ok = false;
        why << "run " << k << " proportionality residual " << fmt(run.report.relation.residual) << "; ";
      }
      if (run.report.annihilation_residual >= kResidualBound) {
        ok = false;
        why << "run " << k << " annihilation residual " << fmt(run.report.annihilation_residual) << "; ";
      }
      if (ok) ++good;
    } catch (const std::exception& e) {
      why << "run " << k << ": " << e.what() << "; ";
    }
  }
  bool ok = good == runs;
  res.seconds = seconds_since(t0);
  if (res.seconds >= kPipelineBudget) {
    ok = false;
    why << "over the " << kPipelineBudget << " s budget; ";
  }
  res.passed = ok;
  res.detail = ok ? std::to_string(good) + "/" + std::to_string(runs) + " runs: pairings <= " +
                        fmt(worst_pairing) + ", weight residuals <= " + fmt(worst_weight) +
                        ", proportionality <= " + fmt(worst_rel) + ", annihilation <= " + fmt(worst_ann)
                  : why.str();
  return res;
}

CheckResult check_explicit_vectors() {
  auto t0 = Clock::now();
  CheckResult res{"explicit-vectors", false, "", 0};
  std::ostringstream why;
  const int trials = 25;
  int good = 0;
  for (int k = 0; k < trials; ++k) {
    RandomSource rng = RandomSource::trial_stream(7033, std::uint64_t(k));
    try {
      bool trial_ok = with_resampling([&] {
        auto xi = draw_xi<E>(rng);
        TetIndex idx = index_tets(all_tets(6));
        auto phi = FaceFactorTable<E>::family1(xi, all_faces2(6));
        MoveInstance mv = builtin_move(BuiltinMove::ThreeThree);
        std::vector<FirstOrderOperator<E>> vecs;
        std::vector<GE> weights;
        for (const Pentachoron& u : mv.lhs.simplices) {
          vecs.push_back(explicit_isotropic_vector(u, MoveSide::Lhs, xi, idx));
          weights.push_back(weight_family1(u, phi, idx));
        }
        for (const Pentachoron& u : mv.rhs.simplices) {
          vecs.push_back(explicit_isotropic_vector(u, MoveSide::Rhs, xi, idx));
          weights.push_back(weight_family1(u, phi, idx));
        }
        bool ok = true;
        for (std::size_t i = 0; i < vecs.size(); ++i)
          for (std::size_t j = i; j < vecs.size(); ++j) ok = ok && pairing(vecs[i], vecs[j]).is_zero();
        for (std::size_t i = 0; i < vecs.size(); ++i) ok = ok && apply(vecs[i], weights[i]).is_zero();
        return ok;
      });
      if (trial_ok)
        ++good;
      else
        why << "trial " << k << " failed; ";
    } catch (const std::exception& e) {
      why << "trial " << k << ": " << e.what() << "; ";
    }
  }
  res.passed = good == trials;
  res.detail = res.passed ? std::to_string(good) + "/" + std::to_string(trials) +
                                " draws: isotropy, orthogonality, and annihilation all exact"
                          : why.str();
  res.seconds = seconds_since(t0);
  return res;
}

CheckResult check_solver_round_trip() {
  auto t0 = Clock::now();
  CheckResult res{"solver-round-trip", false, "", 0};
  std::ostringstream why;
  GeneratorRegistry reg;
  for (int i = 0; i < 5; ++i) reg.add("t" + std::to_string(i));
  std::vector<int> support = {0, 1, 2, 3, 4};
  RandomSource rng(8033);
  const int cases = 100;
  int good = 0;
  for (int k = 0; k < cases; ++k) {
    Matrix<E> alpha(5, 5);
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j) {
        alpha.at(i, j) = E(rng.rational(9, 9));
        alpha.at(j, i) = -alpha.at(i, j);
      }
    try {
      OperatorSpace<E> space = gaussian_annihilators(alpha, support, &reg);
      Matrix<E> back = gaussian_coefficients(space, support);
      bool ok = back.rows == 5 && back.cols == 5;
      for (int i = 0; i < 5 && ok; ++i)
        for (int j = 0; j < 5 && ok; ++j) ok = back.at(i, j) == alpha.at(i, j);
      GE w = gaussian_weight(alpha, support, &reg);
      for (const auto& op : space.basis) ok = ok && apply(op, w).is_zero();
      auto [ann, par] = annihilator_element(space);
      ok = ok && par == Parity::Even && ann == w;
      OperatorSpace<E> swapped{&reg, {}};
      for (const auto& op : space.basis) {
        FirstOrderOperator<E> flip(&reg);
        for (const auto& [t, v] : op.beta) flip.add_gamma(t, v);
        for (const auto& [t, v] : op.gamma) flip.add_beta(t, v);
        swapped.basis.push_back(std::move(flip));
      }
      auto [ann2, par2] = annihilator_element(swapped);
      (void)ann2;
      ok = ok && par2 == Parity::Odd;
      if (ok)
        ++good;
      else
        why << "case " << k << " failed; ";
    } catch (const std::exception& e) {
      why << "case " << k << ": " << e.what() << "; ";
    }
  }
  res.passed = good == cases;
  res.detail = res.passed ? std::to_string(good) + "/" + std::to_string(cases) +
                                " coefficient round-trips exact; annihilator parity flips under the "
                                "derivative-variable interchange"
                          : why.str();
  res.seconds = seconds_since(t0);
  return res;
}

}  // namespace

std::vector<CheckResult> run_acceptance_checks() {
  return {check_grassmann_kernel(),     check_family1_three_three(), check_family2_relations(),
          check_edge_weight_invariance(), check_chain_exactness(),     check_family_pipeline(),
          check_explicit_vectors(),     check_solver_round_trip()};
}

bool run_selftest(std::ostream& out) {
  bool all = true;
  std::vector<CheckResult> checks = run_acceptance_checks();
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const CheckResult& c = checks[i];
    char line[64];
    std::snprintf(line, sizeof line, " (%.2f s)", c.seconds);
    out << (c.passed ? "PASS" : "FAIL") << " " << i + 1 << " " << c.name << ": " << c.detail << line
        << "\n";
    all = all && c.passed;
  }
  out << (all ? "selftest: all checks passed" : "selftest: failures present") << "\n";
  return all;
}

}  // namespace gpach
