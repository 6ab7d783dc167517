// SPDX-License-Identifier: Apache-2.0
//
// End-to-end acceptance suite. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any criterion fails.

#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <future>
#include <random>
#include <vector>

#include "nsmx/diagnostics.hpp"
#include "nsmx/harness.hpp"
#include "nsmx/initial_data.hpp"
#include "nsmx/mhd.hpp"
#include "nsmx/nsm.hpp"

using namespace nsmx;

namespace {

constexpr double kPi = 3.14159265358979323846;

bool report(int id, const char* what, bool ok, double value) {
  std::printf("criterion %2d: %s — %s (measured %.3e)\n", id,
              ok ? "PASS" : "FAIL", what, value);
  std::fflush(stdout);
  return ok;
}

Field3 zero3(Grid g) {
  ScalarField2D z(g);
  return {z, z, z};
}

Field3 random_solenoidal(Grid g, unsigned seed, double amp, int kmax) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> a(-amp, amp);
  ScalarField2D psi(g);
  for (int k1 = 0; k1 <= kmax; ++k1) {
    for (int k2 = (k1 == 0 ? 1 : -kmax); k2 <= kmax; ++k2) {
      psi.set_mode(k1, k2, std::complex<double>(a(rng), a(rng)));
    }
  }
  ScalarField2D zero(g);
  return {-1.0 * ddx(psi, 2), ddx(psi, 1), zero};
}

// --- criterion 1: spectral identities at full precision ----------------------

bool criterion_1() {
  Grid g(64);
  auto f = ScalarField2D::from_function(g, [](double x1, double x2) {
    return std::sin(3.0 * x1) * std::cos(5.0 * x2);
  });
  auto dfx = ScalarField2D::from_function(g, [](double x1, double x2) {
    return 3.0 * std::cos(3.0 * x1) * std::cos(5.0 * x2);
  });
  // errors are measured relative to the magnitude of the exact field
  double err = l2_norm(ddx(f, 1) - dfx) / l2_norm(dfx);
  err = std::max(err, l2_norm(laplacian(f) + 34.0 * f) / (34.0 * l2_norm(f)));
  // round trip physical <-> spectral
  ScalarField2D rt = ScalarField2D::from_physical(g, f.to_physical());
  err = std::max(err, l2_norm(rt - f) / l2_norm(f));
  // Parseval: int sin^2(3x1) cos^2(5x2) = pi^2
  err = std::max(err, std::abs(sq_l2(f) - kPi * kPi) / (kPi * kPi));
  // Leray annihilates gradients and fixes solenoidal fields
  ScalarField2D zero(g);
  Field3 grad{ddx(f, 1), ddx(f, 2), zero};
  err = std::max(err, l2_norm(leray_project(grad)) / l2_norm(grad));
  Field3 sol{-1.0 * ddx(f, 2), ddx(f, 1), zero};
  err = std::max(err, l2_norm(leray_project(sol) - sol) / l2_norm(sol));
  err = std::max(err, l2_norm(divergence(sol)) / l2_norm(sol));
  return report(1, "spectral derivative/transform/projection identities <= 1e-12",
                err <= 1e-12, err);
}

// --- criterion 2: exact Maxwell-Ohm propagator vs a matrix-exponential
// oracle across stiffness regimes ---------------------------------------------

using C = std::complex<double>;
using Mat6 = std::array<std::array<C, 6>, 6>;
using Vec6 = std::array<C, 6>;

Mat6 mode_generator(int k1, int k2, double eps) {
  Mat6 m{};
  const C I(0.0, 1.0);
  m[0][5] = -I * double(k2);
  m[1][5] = I * double(k1);
  m[2][3] = I * double(k2);
  m[2][4] = -I * double(k1);
  m[3][2] = I * double(k2) / eps;
  m[4][2] = -I * double(k1) / eps;
  m[5][0] = -I * double(k2) / eps;
  m[5][1] = I * double(k1) / eps;
  for (int i = 3; i < 6; ++i) m[i][i] = -1.0 / eps;
  return m;
}

Mat6 matmul(const Mat6& a, const Mat6& b) {
  Mat6 r{};
  for (int i = 0; i < 6; ++i)
    for (int k = 0; k < 6; ++k)
      for (int j = 0; j < 6; ++j) r[i][j] += a[i][k] * b[k][j];
  return r;
}

Mat6 expm(const Mat6& m, double dt) {
  double norm = 0.0;
  for (const auto& row : m)
    for (const auto& v : row) norm = std::max(norm, std::abs(v));
  int s = 0;
  double scale = norm * dt;
  while (scale > 0.25) {
    scale *= 0.5;
    ++s;
  }
  const double h = dt / std::ldexp(1.0, s);
  Mat6 r{};
  Mat6 term{};
  for (int i = 0; i < 6; ++i) {
    r[i][i] = 1.0;
    term[i][i] = 1.0;
  }
  for (int p = 1; p <= 24; ++p) {
    Mat6 nt = matmul(term, m);
    for (auto& row : nt)
      for (auto& v : row) v *= h / p;
    term = nt;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) r[i][j] += term[i][j];
  }
  for (int i = 0; i < s; ++i) r = matmul(r, r);
  return r;
}

bool criterion_2() {
  // |k| in {1, 2, 5}; eps in {1, 1e-2, 1e-4} covers oscillatory,
  // exactly-critical (eps=1e-2, |k|=5) and overdamped branches
  double worst = 0.0;
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> a(-1.0, 1.0);
  for (auto [k1, k2] : {std::pair{1, 0}, {0, 2}, {3, 4}, {5, 0}}) {
    for (double eps : {1.0, 1e-2, 1e-4}) {
      for (double dt : {0.05, 0.37}) {
        Vec6 v;
        for (auto& c : v) c = C(a(rng), a(rng));
        const Mat6 P = expm(mode_generator(k1, k2, eps), dt);
        Vec6 want{};
        for (int i = 0; i < 6; ++i)
          for (int j = 0; j < 6; ++j) want[i] += P[i][j] * v[j];
        const ModeVector got = propagate_mode(
            k1, k2, {v[0], v[1], v[2], v[3], v[4], v[5]}, dt, eps);
        const Vec6 gv{got.B1, got.B2, got.B3, got.E1, got.E2, got.E3};
        double scale_ref = 0.0;
        for (const auto& c : want) scale_ref = std::max(scale_ref, std::abs(c));
        for (int i = 0; i < 6; ++i) {
          worst = std::max(worst,
                           std::abs(gv[i] - want[i]) / std::max(1.0, scale_ref));
        }
      }
    }
  }
  return report(2, "per-mode propagator matches expm oracle to 1e-10",
                worst <= 1e-10, worst);
}

// --- criterion 3: exact cancellation flow + second-order stepping -----------

bool criterion_3() {
  Grid g(32);
  // single-mode u = B = (0, 0.3 sin x1, 0): the nonlinearity cancels and the
  // exact solution is the pure decay e^{-t}
  ScalarField2D zero(g);
  auto s1 = ScalarField2D::from_function(
      g, [](double x1, double) { return 0.3 * std::sin(x1); });
  Field3 w0{zero, s1, zero};
  MhdState s{w0, w0, 0.0, 1.0, 1.0};
  for (int i = 0; i < 1000; ++i) s = step_mhd(s, 1e-3);
  Field3 exact = std::exp(-1.0) * w0;
  const double decay_err = l2_norm(s.u - exact) + l2_norm(s.B - exact);

  // generic data: Richardson order from dt-halving
  MhdState a0{random_solenoidal(g, 103, 0.05, 3),
              random_solenoidal(g, 107, 0.05, 3), 0.0, 1.0, 1.0};
  auto integrate = [&](double dt, int steps) {
    MhdState s2 = a0;
    for (int i = 0; i < steps; ++i) s2 = step_mhd(s2, dt);
    return s2;
  };
  const MhdState r1 = integrate(1e-2, 20);
  const MhdState r2 = integrate(5e-3, 40);
  const MhdState r3 = integrate(2.5e-3, 80);
  const double e1 = std::sqrt(sq_l2(r1.u - r2.u) + sq_l2(r1.B - r2.B));
  const double e2 = std::sqrt(sq_l2(r2.u - r3.u) + sq_l2(r2.B - r3.B));
  const double order = std::log2(e1 / e2);

  const bool ok = decay_err <= 1e-8 && order >= 1.8 && order <= 2.2;
  std::printf("              (heat-flow error %.3e, observed order %.3f)\n",
              decay_err, order);
  return report(3, "cancellation flow <= 1e-8 and dt-order 2.0 +/- 0.2", ok,
                decay_err);
}

// --- criterion 4: classical energy balance ----------------------------------

bool criterion_4() {
  RunConfig c;
  c.system = "nsm";
  c.n = 64;
  c.eps = 1e-2;
  c.t_end = 1.0;
  c.dt = 1e-3;
  c.ic.amplitude = 0.01;

  NsmState s = initial_nsm_state(c);
  std::vector<EnergyReport> fine;  // sampled every 5 steps: dt_s = 5e-3
  fine.push_back(energy_report(s));
  for (int i = 1; i <= 1000; ++i) {
    s = step_nsm(s, c.dt);
    if (i % 5 == 0) fine.push_back(energy_report(s));
  }
  std::vector<EnergyReport> coarse;  // every other sample: dt_s = 1e-2
  for (size_t i = 0; i < fine.size(); i += 2) coarse.push_back(fine[i]);

  auto integral = [](const std::vector<EnergyReport>& reps) {
    double total = 0.0;
    const auto res = energy_balance_residual(reps);
    for (size_t i = 0; i + 1 < reps.size(); ++i) {
      total += res[i] * (reps[i + 1].t - reps[i].t);
    }
    return std::abs(total);
  };
  const double i_coarse = integral(coarse);
  const double i_fine = integral(fine);
  const double ratio = i_coarse / std::max(i_fine, 1e-300);
  const bool ok = i_coarse <= 1e-6 && ratio >= 3.0 && ratio <= 5.0;
  std::printf("              (integrated residual %.3e, refinement ratio %.2f)\n",
              i_coarse, ratio);
  return report(4, "energy balance residual <= 1e-6, shrinks 4x +/- 1", ok,
                i_coarse);
}

// --- criteria 5-8: the eps sweep ---------------------------------------------

struct SweepData {
  double eps;
  double sup_h1;     // sup over samples of H1(u-u_ref) + H1(B-B_ref)
  double vt1, vt2;   // integrated weak-form singular terms
  int lemma_violations;
  int lemma_applicable;
  double max_third;  // sup of third-component norms
  bool ok = false;
};

SweepData sweep_one(double eps, const std::vector<MhdState>& ref,
                    const RunConfig& c, const Field3& phi, const Field3& psi) {
  SweepData out{};
  out.eps = eps;
  RunConfig cn = c;
  cn.eps = eps;
  NsmState s = initial_nsm_state(cn);
  std::vector<EnergyReport> reps;
  std::vector<double> times, v1, v2;
  size_t ref_i = 0;
  auto sample = [&](const NsmState& st) {
    reps.push_back(energy_report(st, c.threshold_c));
    if (ref_i < ref.size()) {
      auto [du, dB] = h1_distance(st, ref[ref_i]);
      out.sup_h1 = std::max(out.sup_h1, du + dB);
    }
    ++ref_i;
    const DerivedFields d = derived_fields(st);
    times.push_back(st.t);
    v1.push_back(st.eps * inner(cross(d.dtE, st.B), phi));
    v2.push_back(st.eps * inner(d.dttB, psi));
    auto [tu, tB] = third_component_norms(st);
    out.max_third = std::max({out.max_third, tu, tB});
  };
  sample(s);
  for (int i = 1; i <= 1000; ++i) {
    s = step_nsm(s, c.dt);
    if (i % 10 == 0) sample(s);
  }
  double t1 = 0.0, t2 = 0.0;
  for (size_t i = 0; i + 1 < times.size(); ++i) {
    const double dts = times[i + 1] - times[i];
    t1 += 0.5 * dts * (v1[i] + v1[i + 1]);
    t2 += 0.5 * dts * (v2[i] + v2[i + 1]);
  }
  out.vt1 = std::abs(t1);
  out.vt2 = std::abs(t2);
  for (const auto& chk : check_lemma_e1(reps)) {
    if (chk.status == IntervalStatus::violated) ++out.lemma_violations;
    if (chk.status != IntervalStatus::not_applicable) ++out.lemma_applicable;
  }
  out.ok = true;
  return out;
}

std::vector<SweepData> run_acceptance_sweep() {
  RunConfig c;
  c.n = 64;
  c.t_end = 1.0;
  c.dt = 1e-3;
  c.ic.amplitude = 0.5;

  Grid g(c.n);
  const Field3 phi = default_phi(g);
  const Field3 psi = default_psi(g);

  // shared MHD reference at the sample times
  std::vector<MhdState> ref;
  {
    MhdState m = initial_mhd_state(c);
    ref.push_back(m);
    for (int i = 1; i <= 1000; ++i) {
      m = step_mhd(m, c.dt);
      if (i % 10 == 0) ref.push_back(m);
    }
  }

  const std::vector<double> eps_list = {1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<std::future<SweepData>> futs;
  for (double eps : eps_list) {
    futs.push_back(std::async(std::launch::async, [&, eps] {
      return sweep_one(eps, ref, c, phi, psi);
    }));
  }
  std::vector<SweepData> out;
  for (auto& f : futs) out.push_back(f.get());
  return out;
}

bool criterion_5(const std::vector<SweepData>& sw) {
  int violations = 0, applicable = 0;
  for (const auto& d : sw) {
    violations += d.lemma_violations;
    applicable += d.lemma_applicable;
  }
  const bool ok = violations == 0 && applicable > 0;
  std::printf("              (%d applicable intervals, %d violations)\n",
              applicable, violations);
  return report(5, "energy-inequality monitor clean on applicable intervals",
                ok, double(violations));
}

bool criterion_6(const std::vector<SweepData>& sw) {
  bool monotone = true;
  for (size_t i = 1; i < sw.size(); ++i) {
    monotone = monotone && sw[i].sup_h1 < sw[i - 1].sup_h1;
  }
  std::vector<ConvergenceRecord> recs;
  for (const auto& d : sw) {
    ConvergenceRecord r{};
    r.eps = d.eps;
    r.sup_t_h1_u = 0.5 * d.sup_h1;
    r.sup_t_h1_B = 0.5 * d.sup_h1;
    recs.push_back(r);
  }
  const double order = fit_convergence_order(recs);
  std::printf("              (sup-H1 distances:");
  for (const auto& d : sw) std::printf(" %.3e", d.sup_h1);
  std::printf("; fitted order %.3f)\n", order);
  const bool ok = monotone && order >= 0.8;
  return report(6, "sup-H1 distance to the limit decreases with order >= 0.8",
                ok, order);
}

bool criterion_7(const std::vector<SweepData>& sw) {
  std::vector<std::pair<double, double>> p1, p2;
  for (const auto& d : sw) {
    if (d.vt1 > 0) p1.push_back({d.eps, d.vt1});
    if (d.vt2 > 0) p2.push_back({d.eps, d.vt2});
  }
  const double s1 = loglog_slope(p1);
  const double s2 = loglog_slope(p2);
  std::printf("              (weak-form term slopes %.3f, %.3f)\n", s1, s2);
  const bool ok = s1 >= 0.8 && s2 >= 0.8;
  return report(7, "singular weak-form terms vanish with slope >= 0.8", ok,
                std::min(s1, s2));
}

bool criterion_8(const std::vector<SweepData>& sw) {
  double worst = 0.0;
  for (const auto& d : sw) worst = std::max(worst, d.max_third);
  return report(8, "third components stay <= 1e-12 along planar runs",
                worst <= 1e-12, worst);
}

// --- criterion 9: well-prepared initial electric field -----------------------

bool criterion_9() {
  Grid g(64);
  double worst = 0.0;
  for (const char* name : {"taylor-green-mhd", "random-smooth"}) {
    IcParams p;
    p.name = name;
    p.amplitude = 0.5;
    p.seed = 5;
    auto [u0, B0] = standard_ic(p, g);
    auto fam = prepare_family(u0, B0, {1e-2, 1e-4}, g.dealias_cutoff());
    for (const auto& ps : fam) {
      const NsmState& s = ps.state;
      Field3 dtB0 = dtB_at_zero(s.u, s.B, 1.0);
      worst = std::max(worst, l2_norm(curl25(s.E) + dtB0));
    }
  }
  return report(9, "prepared data satisfy curl E0 + dtB|0 = 0 to 1e-10",
                worst <= 1e-10, worst);
}

// --- criterion 10: diffusive-scaling equivariance ----------------------------

bool criterion_10() {
  ScalingCheckResult r = run_scaling_check(Grid(64), {1, 2, 3}, 1e-9);
  double worst = 0.0;
  for (const auto& e : r.entries) worst = std::max(worst, e.max_rel_err);
  return report(10, "residuals map exactly under the diffusive rescaling",
                r.pass, worst);
}

// --- criterion 11: extreme-stiffness robustness ------------------------------

bool criterion_11() {
  RunConfig c;
  c.system = "nsm";
  c.n = 64;
  c.eps = 1e-6;
  c.dt = 1e-3;
  c.ic.amplitude = 0.1;

  NsmState full = initial_nsm_state(c);
  NsmState half = full;
  double div_b = 0.0;
  try {
    for (int i = 0; i < 1000; ++i) {
      full = step_nsm(full, 1e-3);
      if (i % 50 == 0) div_b = std::max(div_b, l2_norm(divergence(full.B)));
    }
    for (int i = 0; i < 2000; ++i) half = step_nsm(half, 5e-4);
  } catch (const SolverError& e) {
    std::printf("              (aborted: %s)\n", e.what());
    return report(11, "eps = 1e-6 run stable and step-size insensitive", false,
                  0.0);
  }
  div_b = std::max(div_b, l2_norm(divergence(full.B)));
  const double rel =
      (l2_norm(full.u - half.u) + l2_norm(full.B - half.B)) /
      (l2_norm(full.u) + l2_norm(full.B));
  const bool ok = all_finite(full.u) && all_finite(full.B) &&
                  all_finite(full.E) && div_b <= 1e-11 && rel <= 1e-6;
  std::printf("              (div B %.3e, half-step relative difference %.3e)\n",
              div_b, rel);
  return report(11, "eps = 1e-6 run stable and step-size insensitive", ok, rel);
}

}  // namespace

int main() {
  bool ok = true;
  ok &= criterion_1();
  ok &= criterion_2();
  ok &= criterion_3();
  ok &= criterion_4();
  const auto sw = run_acceptance_sweep();
  ok &= criterion_5(sw);
  ok &= criterion_6(sw);
  ok &= criterion_7(sw);
  ok &= criterion_8(sw);
  ok &= criterion_9();
  ok &= criterion_10();
  ok &= criterion_11();
  std::printf("%s\n", ok ? "ALL CRITERIA PASSED" : "SOME CRITERIA FAILED");
  return ok ? 0 : 1;
}
