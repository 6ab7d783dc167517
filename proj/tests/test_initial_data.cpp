// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "nsmx/initial_data.hpp"

using namespace nsmx;

namespace {

Field3 zero3(Grid g) {
  ScalarField2D z(g);
  return {z, z, z};
}

}  // namespace

TEST_CASE("standard_ic: taylor-green-mhd construction") {
  Grid g(32);
  IcParams p;
  p.amplitude = 0.7;
  auto [u, B] = standard_ic(p, g);
  // u = (-d2 psi, d1 psi, 0) for psi = A sin x1 sin x2
  auto u1 = ScalarField2D::from_function(g, [&](double x1, double x2) {
    return -0.7 * std::sin(x1) * std::cos(x2);
  });
  auto u2 = ScalarField2D::from_function(g, [&](double x1, double x2) {
    return 0.7 * std::cos(x1) * std::sin(x2);
  });
  REQUIRE(l2_norm(u.c1 - u1) < 1e-12);
  REQUIRE(l2_norm(u.c2 - u2) < 1e-12);
  REQUIRE(l2_norm(u.c3) < 1e-13);
  // B comes from the pi/2-shifted stream function A cos x1 sin x2
  auto b2 = ScalarField2D::from_function(g, [&](double x1, double x2) {
    return -0.7 * std::sin(x1) * std::sin(x2);
  });
  REQUIRE(l2_norm(B.c2 - b2) < 1e-12);

  for (const Field3* f : {&u, &B}) {
    REQUIRE(l2_norm(divergence(*f)) < 1e-12);
    REQUIRE(std::abs(mean_value(f->c1)) < 1e-13);
    REQUIRE(std::abs(mean_value(f->c2)) < 1e-13);
  }
}

TEST_CASE("standard_ic: other families and validation") {
  Grid g(32);
  IcParams p;
  p.name = "orszag-tang-like";
  auto [u, B] = standard_ic(p, g);
  REQUIRE(l2_norm(divergence(u)) < 1e-12);
  REQUIRE(l2_norm(divergence(B)) < 1e-12);
  REQUIRE(sq_l2(u) > 0.1);

  IcParams r;
  r.name = "random-smooth";
  r.seed = 42;
  auto [ru, rB] = standard_ic(r, g);
  auto [ru2, rB2] = standard_ic(r, g);
  REQUIRE(l2_norm(ru.c1 - ru2.c1) == 0.0);  // deterministic in the seed
  REQUIRE(l2_norm(rB.c2 - rB2.c2) == 0.0);
  REQUIRE(l2_norm(divergence(ru)) < 1e-11);
  IcParams r3 = r;
  r3.seed = 43;
  auto [ru3, rB3] = standard_ic(r3, g);
  REQUIRE(l2_norm(ru.c1 - ru3.c1) > 1e-6);  // seed actually matters

  IcParams bad;
  bad.name = "vortex-sheet";
  REQUIRE_THROWS_AS(standard_ic(bad, g), std::invalid_argument);
}

TEST_CASE("mollify: identity below cutoff, truncation, monotonicity") {
  Grid g(32);
  IcParams p;
  auto [u, B] = standard_ic(p, g);
  // Taylor-Green lives on |k| = sqrt(2) modes: cutoff 2 is the identity
  Field3 m = mollify(u, 2);
  REQUIRE(l2_norm(m - u) < 1e-13);

  // a pure |k|=5 mode is killed by cutoff 4
  ScalarField2D f(g);
  f.set_mode(3, 4, {0.2, -0.1});
  REQUIRE(l2_norm(mollify(f, 4)) < 1e-15);
  REQUIRE(l2_norm(mollify(f, 5) - f) < 1e-15);

  // H1 norm is non-increasing in sharper cutoffs
  IcParams r;
  r.name = "random-smooth";
  r.seed = 7;
  auto [ru, rB] = standard_ic(r, g);
  double prev = h1_norm(ru);
  for (int c = 10; c >= 2; c -= 2) {
    const double h = h1_norm(mollify(ru, c));
    REQUIRE(h <= prev + 1e-13);
    prev = h;
  }

  REQUIRE_THROWS_AS(mollify(f, 11), std::invalid_argument);  // > n/3
}

TEST_CASE("dtB_at_zero: cancellation, pure diffusion, solenoidality") {
  Grid g(32);
  IcParams p;
  p.amplitude = 0.4;
  auto [u, B] = standard_ic(p, g);

  // u0 = B0: the two advective terms cancel, leaving mu lap B0
  Field3 d = dtB_at_zero(u, u, 0.5);
  Field3 expect = leray_project(0.5 * laplacian(u));
  REQUIRE(l2_norm(d - expect) < 1e-11);

  // B0 = 0: dtB0 = 0
  REQUIRE(sq_l2(dtB_at_zero(u, zero3(g), 1.0)) < 1e-26);

  // generic pair stays divergence-free and mean-free
  Field3 dg = dtB_at_zero(u, B, 1.0);
  REQUIRE(l2_norm(divergence(dg)) < 1e-11);
  REQUIRE(std::abs(mean_value(dg.c1)) < 1e-13);
  REQUIRE(std::abs(mean_value(dg.c2)) < 1e-13);
}

TEST_CASE("solve_E0: examples, residual, gauge, validation") {
  Grid g(32);
  REQUIRE(sq_l2(solve_E0(zero3(g))) < 1e-28);

  // dtB0 = (0, cos x1, 0) -> e3 = sin x1 solves curl E = -dtB0
  ScalarField2D zero(g);
  auto c1f = ScalarField2D::from_function(
      g, [](double x1, double) { return std::cos(x1); });
  auto s1f = ScalarField2D::from_function(
      g, [](double x1, double) { return std::sin(x1); });
  Field3 d{zero, c1f, zero};
  Field3 E = solve_E0(d);
  REQUIRE(l2_norm(E.c3 - s1f) < 1e-12);
  REQUIRE(l2_norm(E.c1) + l2_norm(E.c2) < 1e-14);

  // generic data: curl E0 + dtB0 = 0 to roundoff, gauge is vertical
  IcParams p;
  p.name = "random-smooth";
  p.seed = 11;
  auto [u, B] = standard_ic(p, g);
  Field3 dg = dtB_at_zero(u, B, 1.0);
  Field3 Eg = solve_E0(dg);
  REQUIRE(l2_norm(curl25(Eg) + dg) < 1e-11);
  REQUIRE(l2_norm(Eg.c1) + l2_norm(Eg.c2) < 1e-14);
  REQUIRE(std::abs(mean_value(Eg.c3)) < 1e-13);

  // non-mean-free and non-solenoidal inputs are rejected
  ScalarField2D mean(g);
  mean.set_mode(0, 0, 0.3);
  Field3 with_mean{mean, zero, zero};
  REQUIRE_THROWS_AS(solve_E0(with_mean), std::invalid_argument);
  ScalarField2D div(g);
  div.set_mode(1, 0, {0.2, 0.0});
  Field3 divergent{div, zero, zero};
  REQUIRE_THROWS_AS(solve_E0(divergent), std::invalid_argument);
}

TEST_CASE("prepare_family: residual, ordering, thresholds") {
  Grid g(32);
  REQUIRE(prepare_family(zero3(g), zero3(g), {}, 10).empty());

  IcParams p;
  p.amplitude = 0.5;
  auto [u, B] = standard_ic(p, g);
  auto fam = prepare_family(u, B, {1e-1, 1e-2, 1e-4}, g.dealias_cutoff());
  REQUIRE(fam.size() == 3);
  for (const auto& ps : fam) {
    const NsmState& s = ps.state;
    // well-prepared: curl E0 + dtB|_0 vanishes
    Field3 dtB0 = dtB_at_zero(s.u, s.B, 1.0);
    REQUIRE(l2_norm(curl25(s.E) + dtB0) < 1e-10);
    REQUIRE(l2_norm(divergence(s.B)) < 1e-11);
    REQUIRE(s.t == 0.0);
  }
  // same mollified (u,B,E) across the family; only eps differs
  REQUIRE(l2_norm(fam[0].state.u - fam[2].state.u) == 0.0);
  REQUIRE(l2_norm(fam[0].state.E - fam[2].state.E) == 0.0);
  REQUIRE(fam[0].state.eps == 1e-1);
  REQUIRE(fam[2].state.eps == 1e-4);

  // margin = C/sqrt(eps) - (|u|_inf + |B|_inf) grows as eps shrinks
  REQUIRE(fam[0].smallness_margin < fam[1].smallness_margin);
  REQUIRE(fam[1].smallness_margin < fam[2].smallness_margin);
  REQUIRE(fam[2].threshold_ok);

  // a large amplitude at eps = O(1) flags the threshold without throwing
  IcParams big;
  big.amplitude = 5.0;
  auto [ub, Bb] = standard_ic(big, g);
  auto famb = prepare_family(ub, Bb, {1.0}, g.dealias_cutoff());
  REQUIRE_FALSE(famb[0].threshold_ok);
  REQUIRE(famb[0].smallness_margin < 0.0);
}
