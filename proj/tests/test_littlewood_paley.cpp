#include <gtest/gtest.h>

#include <random>

#include "gbo/error.hpp"
#include "gbo/littlewood_paley.hpp"
#include "gbo/spectral.hpp"
#include "oracles.hpp"

using namespace gbo;
using oracle::pi;

namespace {

double l2(const SpectralField& f) { return std::sqrt(integrate_product(f, f)); }

SpectralField from_spectrum(GridPtr g, const oracle::Spectrum& s) {
  SpectralField f(g);
  const long n = static_cast<long>(g->size());
  for (auto [m, c] : s) f[static_cast<std::size_t>((m + n) % n)] = c;
  return f;
}

// Real spectrum with the given positive modes and random coefficients.
oracle::Spectrum random_modes(const std::vector<long>& modes, std::mt19937_64& rng, double amp) {
  std::normal_distribution<double> n;
  oracle::Spectrum s;
  for (long m : modes) {
    const cplx c(amp * n(rng), amp * n(rng));
    s[m] = c;
    s[-m] = std::conj(c);
  }
  return s;
}

int band_of(long m) { return std::ilogb(static_cast<double>(std::labs(m))); }

}  // namespace

TEST(Dyadic, SingleModeStaysInItsBand) {
  auto g = make_grid(256, 2 * pi, 1);
  auto d = make_decomposition(g);
  auto f = SpectralField::from_function(g, [](double x) { return std::cos(24 * x); });
  for (int j = d.j_min; j <= d.j_max; ++j) {
    auto q = dyadic_project(f, d, j, BandMode::At);
    const double want = j == 4 ? l2(f) : 0.0;
    EXPECT_NEAR(l2(q), want, 1e-14) << "band " << j;
  }
}

TEST(Dyadic, BandsPartitionNonzeroFrequencies) {
  auto g = make_grid(512, 13.0, 1);
  auto d = make_decomposition(g);
  std::mt19937_64 rng(1);
  auto f = random_field(g, 255, 0.5, rng, true);
  SpectralField sum(g);
  sum[0] = f.mean();
  for (int j = d.j_min; j <= d.j_max; ++j) sum += dyadic_project(f, d, j, BandMode::At);
  EXPECT_LE(l2(sum - f), 1e-12 * l2(f));
  for (int j = d.j_min; j <= d.j_max; ++j) {
    auto qj = dyadic_project(f, d, j, BandMode::At);
    for (int i = d.j_min; i <= d.j_max; ++i)
      if (i != j) EXPECT_EQ(l2(dyadic_project(qj, d, i, BandMode::At)), 0.0);
  }
}

TEST(Dyadic, WellBelowOfOneBandFieldIsZero) {
  auto g = make_grid(512, 2 * pi, 1);
  auto d = make_decomposition(g, 5);
  std::mt19937_64 rng(1);
  auto f = from_spectrum(g, random_modes({100, 120}, rng, 1.0));
  EXPECT_EQ(l2(dyadic_project(f, d, 6, BandMode::WellBelow)), 0.0);
  EXPECT_GT(l2(dyadic_project(f, d, 6, BandMode::Near)), 0.0);
}

TEST(Dyadic, OutOfRangeBandIsEmpty) {
  auto g = make_grid(64, 2 * pi, 1);
  auto d = make_decomposition(g);
  auto f = SpectralField::from_function(g, [](double x) { return std::sin(3 * x); });
  EXPECT_EQ(l2(dyadic_project(f, d, 40, BandMode::At)), 0.0);
}

TEST(Besov, SingleBandSingleSnapshot) {
  auto g = make_grid(256, 2 * pi, 1);
  auto d = make_decomposition(g);
  auto f = SpectralField::from_function(g, [](double x) { return std::cos(20 * x) + 0.5 * std::sin(27 * x); });
  SpaceTimeArray a{{f}, 0.0, 1.0};
  // Direct L^4 norm on a fine grid.
  const auto fine = f.fine_samples(4096);
  double acc = 0.0;
  for (double v : fine) acc += std::pow(v, 4);
  const double l4 = std::pow(acc * 2 * pi / 4096, 0.25);
  const double s = 0.3;
  EXPECT_NEAR(besov_spacetime_norm(a, d, s, 4, 2, 1), std::pow(16.0, s) * l4, 1e-12 * l4 * 3);
}

TEST(Besov, L2CaseEqualsSobolevAtOrderZero) {
  auto g = make_grid(256, 9.0, 1);
  auto d = make_decomposition(g);
  std::mt19937_64 rng(2);
  auto f = random_field(g, 120, 0.7, rng);
  SpaceTimeArray a{{f}, 0.0, 1.0};
  const double h0 = sobolev_norm(f, 0.0, true);
  EXPECT_NEAR(besov_spacetime_norm(a, d, 0.0, 2, 2, 2), h0, 1e-12 * h0);
  // For s > 0 the sharp bands give 2^{js} <= |xi|^s < 2^{(j+1)s}.
  const double b = besov_spacetime_norm(a, d, 0.5, 2, 2, 2);
  const double h = sobolev_norm(f, 0.5, true);
  EXPECT_LE(b, h * (1 + 1e-12));
  EXPECT_GE(b * std::sqrt(2.0), h * (1 - 1e-12));
}

TEST(Besov, ZeroArray) {
  auto g = make_grid(64, 2 * pi, 1);
  auto d = make_decomposition(g);
  SpaceTimeArray a{{SpectralField(g), SpectralField(g)}, 0.0, 0.5};
  EXPECT_EQ(besov_spacetime_norm(a, d, 0.2, 2, 4, 2), 0.0);
  EXPECT_EQ(lk_linf(a, 6), 0.0);
  EXPECT_THROW(besov_spacetime_norm(SpaceTimeArray{}, d, 0, 2, 2, 2), InvalidArgument);
}

TEST(Besov, ShrinkingWindowNeverIncreasesNorms) {
  auto g = make_grid(256, 30.0, 1);
  auto d = make_decomposition(g);
  std::mt19937_64 rng(3);
  auto f = random_field(g, 100, 1.0, rng);
  SpaceTimeArray a;
  a.dt_out = 0.1;
  for (int i = 0; i < 12; ++i) a.snapshots.push_back(linear_propagate(f, 0.1 * i));
  const double s = 0.5 - 1.0 / 6;
  for (auto [lo, hi] : {std::pair<std::size_t, std::size_t>{0, 6}, {3, 12}, {5, 6}}) {
    auto w = a.window(lo, hi);
    EXPECT_LE(besov_spacetime_norm(w, d, s, 2, 4, 2), besov_spacetime_norm(a, d, s, 2, 4, 2));
    EXPECT_LE(besov_spacetime_norm(w, d, s, 4, kInf, 2), besov_spacetime_norm(a, d, s, 4, kInf, 2));
    EXPECT_LE(strichartz_norm(w, d, s, 0.5), strichartz_norm(a, d, s, 0.5));
    EXPECT_LE(dual_norm(w, d, s), dual_norm(a, d, s));
    EXPECT_LE(x_norm(w, d, s, 0.1), x_norm(a, d, s, 0.1));
    EXPECT_LE(lk_linf(w, 6), lk_linf(a, 6));
  }
}

TEST(Besov, LinearFlowRatioIsFinite) {
  auto g = make_grid(256, 40.0, 1);
  auto d = make_decomposition(g);
  std::mt19937_64 rng(4);
  const double s = 0.5 - 1.0 / 6;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    auto phi = random_field(g, 100, 1.0, rng);
    SpaceTimeArray a;
    a.dt_out = 0.05;
    for (int t = 0; t < 10; ++t) a.snapshots.push_back(linear_propagate(phi, 0.05 * t));
    worst = std::max(worst, x_norm(a, d, s, 0.1) / sobolev_norm(phi, s, true));
  }
  EXPECT_TRUE(std::isfinite(worst));
  EXPECT_GT(worst, 0.0);
}

TEST(Paraproduct, OneBandFieldHasNoPiPart) {
  auto g = make_grid(512, 2 * pi, 4);
  auto d = make_decomposition(g, 5, default_diagonal_width(6));
  std::mt19937_64 rng(2);
  auto u = from_spectrum(g, random_modes({70, 90}, rng, 0.2));
  auto p = paraproduct_decompose(u, d, 6);
  EXPECT_EQ(l2(p.pi_part), 0.0);
  EXPECT_LE(l2(p.g_part - p.F), 0.0);
}

TEST(Paraproduct, ZeroField) {
  auto g = make_grid(64, 2 * pi, 4);
  auto d = make_decomposition(g);
  auto p = paraproduct_decompose(SpectralField(g), d, 6);
  EXPECT_EQ(l2(p.pi_part), 0.0);
  EXPECT_EQ(l2(p.g_part), 0.0);
}

TEST(Paraproduct, TwoBandFieldMatchesConvolutionOracle) {
  const std::size_t N = 2048;
  auto g = make_grid(N, 2 * pi, 4);
  const int J = 5, k = 6;
  auto d = make_decomposition(g, J, default_diagonal_width(k));
  std::mt19937_64 rng(5);
  // Band 9 (modes 512..1023) and band 1 (modes 2, 3).
  oracle::Spectrum s = random_modes({600, 777, 1000}, rng, 0.2);
  for (auto [m, c] : random_modes({2, 3}, rng, 0.3)) s[m] = c;
  auto u = from_spectrum(g, s);
  auto p = paraproduct_decompose(u, d, k);

  oracle::Spectrum want;
  for (int j = d.j_min; j <= d.j_max; ++j) {
    oracle::Spectrum low, near;
    for (auto [m, c] : s) {
      if (m == 0 || band_of(m) < j - J) low[m] = c;
      if (m != 0 && std::abs(band_of(m) - j) <= J) near[m] = c;
    }
    if (low.empty() || near.empty()) continue;
    for (auto [m, c] : oracle::multiply(oracle::power(low, k), near))
      if (m != 0 && band_of(m) == j && std::labs(m) < static_cast<long>(N / 2))
        want[m] += cplx(0, static_cast<double>(m)) * c;
  }
  auto ref = from_spectrum(g, want);
  ASSERT_GT(l2(ref), 0.0);
  EXPECT_LE(l2(p.pi_part - ref), 1e-8 * l2(ref));
}

TEST(Paraproduct, IdentityAndGroupedRemainderOnRandomFields) {
  auto g = make_grid(256, 50.0, 4);
  auto d = make_decomposition(g, 5, default_diagonal_width(6));
  std::mt19937_64 rng(6);
  for (int i = 0; i < 20; ++i) {
    auto u = random_field(g, 100, 1.0, rng);
    u *= 0.8 / sobolev_norm(u, 0.5, false);
    auto p = paraproduct_decompose(u, d, 6);
    const double fn = l2(p.F);
    EXPECT_LE(l2(p.F + p.pi_part - p.g_part), 1e-10 * fn);
    EXPECT_LE(l2(p.F + p.pi_part - p.g_grouped), 1e-10 * fn);
  }
}

TEST(NonlinearEstimates, ZeroFieldIsSkipped) {
  auto g = make_grid(64, 2 * pi, 4);
  auto d = make_decomposition(g);
  SpaceTimeArray a{{SpectralField(g), SpectralField(g)}, 0.0, 0.1};
  auto r = nonlinear_estimate_ratios({a}, d, 6);
  EXPECT_EQ(r.skipped, 1u);
  EXPECT_TRUE(r.samples.empty());
}

TEST(NonlinearEstimates, SingleBandStationaryFieldIsFinite) {
  auto g = make_grid(256, 2 * pi, 4);
  auto d = make_decomposition(g);
  auto u = SpectralField::from_function(g, [](double x) { return 0.4 * std::cos(20 * x); });
  SpaceTimeArray a{{u, u, u}, 0.0, 0.1};
  auto r = nonlinear_estimate_ratios({a}, d, 6);
  ASSERT_EQ(r.samples.size(), 1u);
  EXPECT_TRUE(std::isfinite(r.g_max));
  EXPECT_TRUE(std::isfinite(r.pi_max));
}

TEST(NonlinearEstimates, StableUnderResolutionDoubling) {
  const double L = 2 * pi;
  auto g1 = make_grid(512, L, 4);
  auto g2 = make_grid(1024, L, 4);
  // J = 2 keeps the high band low enough that u^7 is resolved on both grids.
  auto d1 = make_decomposition(g1, 2, default_diagonal_width(6));
  auto d2 = make_decomposition(g2, 2, default_diagonal_width(6));
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long> lo(2, 3), hi(20, 31);
  std::vector<SpaceTimeArray> e1, e2;
  for (int i = 0; i < 50; ++i) {
    auto s = random_modes({lo(rng), hi(rng)}, rng, 0.2);
    SpaceTimeArray a1, a2;
    a1.dt_out = a2.dt_out = 0.01;
    auto u1 = from_spectrum(g1, s);
    auto u2 = from_spectrum(g2, s);
    for (int t = 0; t < 4; ++t) {
      a1.snapshots.push_back(linear_propagate(u1, 0.01 * t));
      a2.snapshots.push_back(linear_propagate(u2, 0.01 * t));
    }
    e1.push_back(std::move(a1));
    e2.push_back(std::move(a2));
  }
  auto r1 = nonlinear_estimate_ratios(e1, d1, 6);
  auto r2 = nonlinear_estimate_ratios(e2, d2, 6);
  ASSERT_EQ(r1.samples.size(), 50u);
  EXPECT_NEAR(r2.pi_max / r1.pi_max, 1.0, 0.2);
  EXPECT_NEAR(r2.g_max / r1.g_max, 1.0, 0.2);
}
