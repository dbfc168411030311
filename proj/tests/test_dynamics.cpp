#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oamq/dynamics.hpp"
#include "oamq/errors.hpp"
#include "oamq/quadrature.hpp"

using namespace oamq;
using cd = std::complex<double>;

namespace {

MemoryParams small_params() {
  MemoryParams p;
  p.r = 5.0;
  p.L_tilde = 10.0;
  p.T_W = 5.0;
  p.T_R = 5.0;
  return p;
}

PulseProfile sin2_pulse(const MemoryParams& p, int nt) {
  const auto t = UniformGrid::span(0.0, p.T_W, nt);
  return PulseProfile::sample(t, [&](double s) {
    const double v = std::sin(std::numbers::pi * s / p.T_W);
    return cd(v * v, 0.0);
  });
}

}  // namespace

TEST_CASE("zero input stays zero") {
  const auto p = small_params();
  const auto in = PulseProfile::sample(UniformGrid::span(0.0, p.T_W, 21), [](double) { return cd{}; });
  const auto s = evolve_write(in, ModeIndex(0), std::nullopt, 1.0, p, {21, 21, 0});
  CHECK(s.b.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.c.cwiseAbs().maxCoeff() == 0.0);
  CHECK(s.a.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("written spin wave matches the Green-function solution") {
  const auto p = small_params();
  const PdeGrids grids{101, 101, 0};
  const auto in = sin2_pulse(p, grids.nt);
  const cd chi{0.8, 0.3};
  const auto s = evolve_write(in, ModeIndex(0), std::nullopt, chi, p, grids);
  const auto g = g_kernel_table(s.z, s.t, p.r, std::abs(chi));
  const auto w = trapezoid_weights(s.t.count, s.t.step);
  // the kernel uses |chi|; the drive phase enters as conj(chi)/|chi| on b
  const cd phase = std::conj(chi) / std::abs(chi);
  double worst = 0.0, scale = s.b.cwiseAbs().maxCoeff();
  for (int i = 0; i < s.z.count; ++i) {
    cd b;
    for (int j = 0; j < s.t.count; ++j) b += w[j] * in.samples[j] * g(i, s.t.count - 1 - j);
    b *= -p.kappa() * std::abs(chi) * phase;
    worst = std::max(worst, std::abs(b - s.b[i]));
  }
  CHECK(scale > 0.0);
  CHECK(worst < 1e-3 * scale);
}

TEST_CASE("orbital angular momentum bookkeeping") {
  const auto p = small_params();
  const auto in = sin2_pulse(p, 21);
  const PdeGrids grids{21, 21, 0};
  const auto s = evolve_write(in, ModeIndex(2), Drive(ModeIndex(1)), 0.8, p, grids);
  CHECK(s.l.value() == 2);
  CHECK(s.n.value() == 1);
  const auto stored = apply_storage(s);
  CHECK(evolve_read(stored, Drive(ModeIndex(1)), 0.8, p, grids).output_oam == 2);
  CHECK(evolve_read(stored, Drive(ModeIndex(-1)), 0.8, p, grids).output_oam == 0);
  const auto r = evolve_read(stored, std::nullopt, 1.0, p, grids);
  CHECK(r.output_oam == 1);
  CHECK(r.state.stage == Stage::Read);
  CHECK(r.state.l.value() == 1);
  CHECK(r.output.samples.size() == std::size_t(grids.nt));
  CHECK(r.output.samples[0] == cd(0.0, 0.0));
}

TEST_CASE("storage stage") {
  const auto p = small_params();
  const PdeGrids grids{21, 21, 0};
  const auto s = evolve_write(sin2_pulse(p, 21), ModeIndex(0), std::nullopt, 1.0, p, grids);
  CHECK(s.c.cwiseAbs().maxCoeff() > 0.0);
  CHECK_THROWS_AS(evolve_read(s, std::nullopt, 1.0, p, grids), StageError);
  const auto stored = apply_storage(s);
  CHECK(stored.stage == Stage::Store);
  CHECK(stored.c.cwiseAbs().maxCoeff() == 0.0);
  CHECK(stored.b == s.b);
  const auto twice = apply_storage(stored);
  CHECK(twice.b == stored.b);
  CHECK(twice.c == stored.c);
  const auto read = evolve_read(stored, std::nullopt, 1.0, p, grids);
  CHECK_THROWS_AS(apply_storage(read.state), StageError);
  CHECK_THROWS_AS(evolve_read(stored, std::nullopt, 1.0, p, {31, 21, 0}), GridError);
}

TEST_CASE("read-out is passive") {
  const auto p = small_params();
  const PdeGrids grids{101, 101, 0};
  const auto stored = apply_storage(evolve_write(sin2_pulse(p, 101), ModeIndex(0), std::nullopt, 1.0, p, grids));
  // energy leaving the read stage cannot exceed the stored spin-wave energy
  const auto r = evolve_read(stored, std::nullopt, 1.0, p, grids);
  const auto wz = simpson_weights(stored.z.count, stored.z.step);
  double stored_energy = 0.0, left = 0.0;
  for (int i = 0; i < stored.z.count; ++i) {
    stored_energy += wz[i] * std::norm(stored.b[i]);
    left += wz[i] * (std::norm(r.state.b[i]) + std::norm(r.state.c[i]));
  }
  CHECK(left < stored_energy);
  CHECK(r.output.norm() > 0.0);
}

TEST_CASE("continuity residual converges at second order") {
  const auto p = small_params();
  const auto in = sin2_pulse(p, 51);
  const auto coarse = evolve_write(in, ModeIndex(0), std::nullopt, 1.0, p, {101, 51, 10}, true);
  const auto fine = evolve_write(in, ModeIndex(0), std::nullopt, 1.0, p, {101, 51, 20}, true);
  REQUIRE(std::isfinite(coarse.continuity_residual));
  CHECK(coarse.continuity_residual / fine.continuity_residual >= 3.5);
  CHECK(fine.continuity_residual < 1e-3);
  CHECK(std::isnan(evolve_write(in, ModeIndex(0), std::nullopt, 1.0, p, {101, 51, 10}).continuity_residual));
}

TEST_CASE("linearity in the input") {
  const auto p = small_params();
  const PdeGrids grids{41, 41, 0};
  const auto in = sin2_pulse(p, 41);
  auto doubled = in;
  for (auto& v : doubled.samples) v *= 2.0;
  const auto s1 = evolve_write(in, ModeIndex(0), std::nullopt, 1.0, p, grids);
  const auto s2 = evolve_write(doubled, ModeIndex(0), std::nullopt, 1.0, p, grids);
  CHECK(s2.b == Eigen::VectorXcd(2.0 * s1.b));
  CHECK(s2.a == Eigen::MatrixXcd(2.0 * s1.a));
  const auto r1 = evolve_read(apply_storage(s1), std::nullopt, 1.0, p, grids);
  const auto r2 = evolve_read(apply_storage(s2), std::nullopt, 1.0, p, grids);
  for (std::size_t j = 0; j < r1.output.samples.size(); ++j) CHECK(r2.output.samples[j] == 2.0 * r1.output.samples[j]);
}

TEST_CASE("sign of the detuning") {
  auto p = small_params();
  const PdeGrids grids{41, 41, 0};
  const auto in = sin2_pulse(p, 41);
  const auto plus = evolve_write(in, ModeIndex(0), std::nullopt, 1.0, p, grids);
  p.r = -p.r;
  const auto minus = evolve_write(in, ModeIndex(0), std::nullopt, 1.0, p, grids);
  CHECK((plus.b - minus.b.conjugate()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((plus.b.cwiseAbs() - minus.b.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("plane-wave drive equals a fundamental drive with unit coupling") {
  const auto p = small_params();
  const PdeGrids grids{41, 41, 0};
  const auto in = sin2_pulse(p, 41);
  const auto plane = evolve_write(in, ModeIndex(3), std::nullopt, 1.0, p, grids);
  const auto lg0 = evolve_write(in, ModeIndex(3), Drive(ModeIndex(0)), 1.0, p, grids);
  CHECK(plane.b == lg0.b);
  CHECK(plane.a == lg0.a);
  CHECK(plane.n == lg0.n);
}

TEST_CASE("time step refusal") {
  const auto t = UniformGrid::span(0.0, 10.0, 201);
  CHECK_THROWS_AS(pde_substeps(t, 50.0, 1.0, 1), GridError);
  CHECK(pde_substeps(t, 50.0, 1.0, 0) * 0.02 >= 0.05 * 50.0 - 1e-12);
  CHECK(pde_substeps(t, 0.0, 0.5, 0) == 3);
  CHECK_THROWS_AS(pde_substeps(t, 1.0, 1.0, -2), GridError);
  auto p = small_params();
  p.r = 50.0;
  CHECK_THROWS_AS(evolve_write(sin2_pulse(p, 11), ModeIndex(0), std::nullopt, 1.0, p, {21, 11, 1}), GridError);
}

TEST_CASE("cumulative integral") {
  Eigen::VectorXcd f(11);
  const double h = 0.3;
  for (int i = 0; i < 11; ++i) {
    const double x = i * h;
    f[i] = cd(x * x * x - 2.0 * x, 0.5 * x * x);
  }
  const auto F = cumulative_integral(f, h);
  for (int i = 0; i < 11; ++i) {
    const double x = i * h;
    CHECK(std::abs(F[i] - cd(x * x * x * x / 4 - x * x, x * x * x / 6)) < 1e-12);
  }
  Eigen::VectorXcd g(401);
  for (int i = 0; i < 401; ++i) g[i] = std::exp(cd(0.0, 3.0 * i * 0.01));
  const auto G = cumulative_integral(g, 0.01);
  CHECK(std::abs(G[400] - (std::exp(cd(0.0, 12.0)) - 1.0) / cd(0.0, 3.0)) < 1e-8);
}

TEST_CASE("pulse interpolation") {
  const auto t = UniformGrid::span(0.0, 2.0, 21);
  const auto quad = PulseProfile::sample(t, [](double s) { return cd(s * s - s, 2.0 * s); });
  for (double s = 0.1; s <= 1.9; s += 0.0173) CHECK(std::abs(quad.at(s) - cd(s * s - s, 2.0 * s)) < 1e-12);
  CHECK(quad.at(0.7) == quad.at(0.7));
  CHECK(quad.at(t.at(4)) == quad.samples[4]);
  CHECK(quad.at(-0.01) == cd(0.0, 0.0));
  CHECK(quad.at(2.01) == cd(0.0, 0.0));
  const auto ones = PulseProfile::sample(t, [](double) { return cd(1.0, 0.0); });
  CHECK(ones.norm() == doctest::Approx(2.0));
}
