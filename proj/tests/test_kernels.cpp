#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "oamq/errors.hpp"
#include "oamq/io.hpp"
#include "oamq/kernels.hpp"
#include "oamq/quadrature.hpp"

using namespace oamq;
using cd = std::complex<double>;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

MemoryParams small_params() {
  MemoryParams p;
  p.r = 5.0;
  p.L_tilde = 10.0;
  p.T_W = 5.0;
  p.T_R = 5.0;
  return p;
}

}  // namespace

TEST_CASE("auxiliary factors") {
  for (double r : {-50.0, -1.0, 0.0, 0.3, 7.0, 1e4}) {
    for (double chi : {0.0, 0.2, 1.0, 3.0}) {
      if (r == 0.0 && chi == 0.0) continue;
      const auto a = auxiliary_factors(r, chi);
      CHECK(a.mu + a.nu == doctest::Approx(2.0).epsilon(1e-15));
      CHECK(a.mu >= 0.0);
      CHECK(a.nu >= 0.0);
      CHECK(std::abs(a.mu * a.nu * a.omega_eff * a.omega_eff - chi * chi) <= 1e-14 * a.omega_eff * a.omega_eff);
      CHECK(a.omega_eff == doctest::Approx(std::sqrt(r * r + chi * chi)));
    }
  }
  const auto s = auxiliary_factors(-3.0, 1.0), p = auxiliary_factors(3.0, 1.0);
  CHECK(s.mu == doctest::Approx(p.nu));
  CHECK_THROWS_AS(auxiliary_factors(0.0, 0.0), GridError);
}

TEST_CASE("f0 is bounded and vanishes outside its support") {
  for (double z : {0.0, 1.0, 30.0}) {
    for (double t = 0.0; t <= 10.0; t += 0.37) {
      CHECK(std::abs(f0_factor(z, t, 50.0, 1.0)) <= 1.0);
      CHECK(std::abs(f0_factor(z, t, -2.0, 0.5)) <= 1.0);
    }
  }
  CHECK(f0_factor(1.0, -0.1, 5.0, 1.0) == cd(0.0, 0.0));
  CHECK(f0_factor(1.0, 2.1, 5.0, 1.0, 2.0) == cd(0.0, 0.0));
  CHECK(f0_factor(0.0, 0.0, 5.0, 1.0) == cd(1.0, 0.0));
}

TEST_CASE("f0 reference values") {
  for (double z : {0.0, 3.0, 80.0}) CHECK(f0_factor(z, 0.0, 50.0, 1.0) == cd(1.0, 0.0));
  for (double t : {0.3, 1.0, 7.5}) CHECK(std::abs(f0_factor(0.0, t, 0.0, 1.0) - std::polar(1.0, -t)) < 1e-15);
}

TEST_CASE("kernel is continuous in the coupling") {
  for (double t : {1.0, 4.0}) {
    const cd plane = g_kernel(7.0, t, 5.0, 1.0, 5.0);
    const cd near = g_kernel(7.0, t, 5.0, 1.0 - 1e-9, 5.0);
    CHECK(std::abs(plane - near) < 1e-8);
  }
}

TEST_CASE("f0 approaches the Raman limit at large detuning") {
  double worst = 0.0;
  for (double z = 0.0; z <= 100.0; z += 2.5) {
    for (double t = 0.0; t <= 1.0; t += 0.05) {
      if (z * t > 100.0) continue;
      worst = std::max(worst, std::abs(f0_factor(z, t, 50.0, 1.0) - f0_raman_limit(z, t, 50.0)));
    }
  }
  CHECK(worst < 1e-2);
  double prev = 1.0;
  for (double r : {5.0, 20.0, 80.0, 320.0}) {
    double e = 0.0;
    for (double t = 0.0; t <= 5.0; t += 0.1) e = std::max(e, std::abs(f0_factor(4.0, t, r, 1.0) - f0_raman_limit(4.0, t, r)));
    CHECK(e < prev);
    prev = e;
  }
}

TEST_CASE("Filon convolution matches brute-force Simpson") {
  for (auto [r, chi, z, t] : {std::tuple{5.0, 1.0, 3.0, 2.0}, {50.0, 1.0, 50.0, 10.0}, {-3.0, 0.7, 10.0, 4.0},
                              {0.5, 2.0, 1.0, 6.0}}) {
    const double support = 10.0;
    auto f = [&](double s) { return f0_factor(z, s, r, chi, support); };
    auto g = [&](double s) { return std::conj(f0_factor(z, s, -r, chi, support)); };
    const cd brute = time_convolution(f, g, t, 200000);
    CHECK(std::abs(g_kernel(z, t, r, chi, support) - brute) < 1e-6);
    CHECK(std::abs(g_kernel(z, t, r, chi, support, {1e-3, 256}) - brute) < 1e-9);
  }
}

TEST_CASE("convolution respects the drive window") {
  const double support = 2.0;
  auto f = [&](double s) { return f0_factor(3.0, s, 4.0, 1.0, support); };
  auto g = [&](double s) { return std::conj(f0_factor(3.0, s, -4.0, 1.0, support)); };
  const double t = 3.0;
  // integrand is smooth on [t - support, support]
  const cd brute = time_convolution([&](double s) { return f(1.0 + s) * g(t - 1.0 - s); },
                                    [](double) { return cd(1.0, 0.0); }, 1.0, 100000);
  CHECK(std::abs(g_kernel(3.0, t, 4.0, 1.0, support) - brute) < 1e-8);
  CHECK(g_kernel(3.0, 4.5, 4.0, 1.0, support) == cd(0.0, 0.0));
  CHECK(g_kernel(3.0, 0.0, 4.0, 1.0, support) == cd(0.0, 0.0));
}

TEST_CASE("weak drive reduces to the Raman-limit convolution") {
  for (double t : {0.5, 2.0, 7.0}) {
    const ConvolutionSpec fine{1e-3, 256};
    const cd g0 = g_kernel(6.0, t, 3.0, 0.0, 100.0, fine);
    CHECK(std::abs(g0 - g_kernel_raman_limit(6.0, t, 3.0, fine)) < 1e-11);
    const cd g1 = g_kernel(6.0, t, 3.0, 1e-5, 100.0, fine);
    CHECK(std::abs(g1 - g0) < 1e-8);
  }
}

TEST_CASE("Raman limit is approached as detuning grows") {
  double prev = 1e9;
  for (double r : {2.0, 8.0, 32.0, 128.0}) {
    double e = 0.0;
    for (double t = 0.5; t <= 5.0; t += 0.5) {
      e = std::max(e, std::abs(g_kernel(5.0, t, r, 1.0, 5.0) - g_kernel_raman_limit(5.0, t, r)));
    }
    CHECK(e < prev);
    prev = e;
  }
  CHECK(prev < 0.05);
}

TEST_CASE("tables agree with pointwise evaluation") {
  const auto z = UniformGrid::span(0.0, 20.0, 11);
  const auto t = UniformGrid::span(0.0, 5.0, 51);
  const auto tab = g_kernel_table(z, t, 4.0, 1.0);
  const auto lim = g_kernel_raman_limit_table(z, t, 4.0);
  double worst = 0.0, worst_lim = 0.0;
  for (int i = 0; i < z.count; ++i) {
    for (int j = 0; j < t.count; ++j) {
      worst = std::max(worst, std::abs(tab(i, j) - g_kernel(z.at(i), t.at(j), 4.0, 1.0, 5.0)));
      worst_lim = std::max(worst_lim, std::abs(lim(i, j) - g_kernel_raman_limit(z.at(i), t.at(j), 4.0)));
    }
  }
  CHECK(worst < 1e-7);
  CHECK(worst_lim < 1e-7);
}

TEST_CASE("grid refusal") {
  const auto z = UniformGrid::span(0.0, 1.0, 3);
  const auto coarse = UniformGrid::span(0.0, 10.0, 5);
  CHECK_THROWS_AS(g_kernel_table(z, coarse, 1.0, 1.0, 2), GridError);
  CHECK_THROWS_AS(g_kernel_table(z, coarse, 1.0, 1.0, 3), GridError);
  CHECK_NOTHROW(g_kernel_table(z, coarse, 1.0, 1.0));
  CHECK(auto_substeps(coarse, {}) % 2 == 0);
  CHECK_THROWS_AS(UniformGrid::span(0.0, 1.0, 1), GridError);
  KernelGrids even{40, 41, 0};
  CHECK_THROWS_AS(full_cycle_kernel(ModeIndex(0), std::nullopt, std::nullopt, small_params(), even),
                  GridError);
  MemoryParams bad = small_params();
  bad.T_W = -1.0;
  CHECK_THROWS_AS(full_cycle_kernel(ModeIndex(0), std::nullopt, std::nullopt, bad, {}), ConfigError);
}

TEST_CASE("full cycle kernel against direct z quadrature") {
  const auto p = small_params();
  const auto k = full_cycle_kernel(ModeIndex(0), std::nullopt, std::nullopt, p, {201, 21, 0});
  const double scale = max_abs(k.values);
  REQUIRE(scale > 0.0);
  for (auto [i, j] : {std::pair{5, 5}, {20, 0}, {10, 17}, {20, 20}, {3, 14}}) {
    const double t = k.axis1.at(i), tp = k.axis2.at(j);
    const auto ref = integrate_fixed<cd>(
        [&](double z) {
          return 0.5 * g_kernel(p.L_tilde - z, t, p.r, 1.0, p.T_R) * g_kernel(z, p.T_W - tp, p.r, 1.0, p.T_W);
        },
        0.0, p.L_tilde, 48);
    CHECK(std::abs(k.values(i, j) - ref) < 1e-6 * scale);
  }
  CHECK(k.values.row(0).cwiseAbs().maxCoeff() == 0.0);
  CHECK(k.values.col(k.axis2.count - 1).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("plane-wave kernel does not depend on the signal index") {
  const auto p = small_params();
  const auto k0 = full_cycle_kernel(ModeIndex(0), std::nullopt, std::nullopt, p, {41, 41, 0});
  const auto k7 = full_cycle_kernel(ModeIndex(7), std::nullopt, std::nullopt, p, {41, 41, 0});
  CHECK(k0.values == k7.values);
  CHECK(k7.meta.l == 7);
}

TEST_CASE("z resolution convergence") {
  const auto p = small_params();
  const auto coarse = full_cycle_kernel(ModeIndex(0), std::nullopt, std::nullopt, p, {51, 41, 0});
  const auto fine = full_cycle_kernel(ModeIndex(0), std::nullopt, std::nullopt, p, {201, 41, 0});
  CHECK((coarse.values - fine.values).cwiseAbs().maxCoeff() < 1e-4 * max_abs(fine.values));
}

TEST_CASE("read and write couplings") {
  auto p = small_params();
  StageCouplings same{{0.6, 0.2}, {0.6, -0.2}};
  const auto k = full_cycle_kernel(ModeIndex(1), std::nullopt, Drive(ModeIndex(1)), p, {21, 21, 0}, same);
  CHECK(k.meta.params.chi_eff == doctest::Approx(std::abs(same.write)));
  StageCouplings diff{{0.6, 0.0}, {0.3, 0.0}};
  const auto k2 = full_cycle_kernel(ModeIndex(1), Drive(ModeIndex(1)), Drive(ModeIndex(1)), p, {21, 21, 0}, diff);
  const auto zg = UniformGrid::span(0.0, p.L_tilde, 21);
  const auto tg = UniformGrid::span(0.0, p.T_W, 21);
  const auto gw = g_kernel_table(zg, tg, p.r, 0.6);
  const auto gr = g_kernel_table(zg, tg, p.r, 0.3);
  const auto wz = simpson_weights(21, zg.step);
  cd ref;
  for (int q = 0; q < 21; ++q) ref += 0.5 * wz[q] * gr(20 - q, 12) * gw(q, 20 - 7);
  CHECK(std::abs(k2.values(12, 7) - ref) < 1e-12 * max_abs(k2.values));
}

TEST_CASE("common phase factoring") {
  const auto p = small_params();
  auto k = full_cycle_kernel(ModeIndex(0), std::nullopt, std::nullopt, p, {21, 21, 0});
  const auto raw = k.values;
  factor_common_phase(k);
  CHECK(k.meta.phase_factored);
  CHECK(k.meta.phase_rate == 2.0 * p.r);
  const auto once = k.values;
  factor_common_phase(k);
  CHECK(k.values == once);
  CHECK(std::abs(once(10, 3) - raw(10, 3) * std::polar(1.0, 2.0 * p.r * k.axis1.at(10))) < 1e-15);
  CHECK((once.cwiseAbs() - raw.cwiseAbs()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("binary kernel round trip") {
  const auto p = small_params();
  const auto k = full_cycle_kernel(ModeIndex(2), Drive(ModeIndex(1)), std::nullopt, p, {21, 11, 0},
                                   {{1.0, 0.0}, {0.5, 0.25}}, true);
  const auto dir = std::filesystem::temp_directory_path() / "oamq_kernel_roundtrip";
  std::filesystem::create_directories(dir);
  const auto bin = (dir / "k.bin").string();
  write_kernel_binary(bin, k);
  {
    std::ofstream js(bin + ".json");
    js << kernel_sidecar(k, "k.bin").dump(2);
  }
  CHECK(std::filesystem::file_size(bin) == std::size_t(11 * 11 * 16));
  const auto back = read_kernel(bin, bin + ".json");
  CHECK(back.values == k.values);
  CHECK(back.axis1.count == 11);
  CHECK(back.axis2.end() == doctest::Approx(p.T_W));
  CHECK(back.meta.phase_factored);
  CHECK(back.meta.l == 2);
  CHECK(back.meta.chi_read == k.meta.chi_read);
  std::filesystem::remove_all(dir);
}
