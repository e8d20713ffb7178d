#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "fastlight/atomic_response.hpp"
#include "fastlight/errors.hpp"
#include "oracles.hpp"

using namespace fastlight;
using namespace std::complex_literals;

namespace {

// Dimensionless reference line: rates in units of Gamma.
MediumSpec reference_spec() {
  MediumSpec s;
  s.beta = 1.0;
  s.gamma = 0.01;
  s.Gamma = 1.0;
  s.omega_c_rabi = 0.2;
  s.Delta = 100.0;
  s.length = 1.0;
  s.omega0 = 1e6;
  s.c = 1.0;
  return s;
}

// Rb-like SI parameters; beta tuned for t0 = 0.28 us.
MediumSpec rubidium_spec() {
  MediumSpec s;
  s.beta = 1.0;
  s.gamma = 2 * M_PI * 50e3;
  s.Gamma = 2 * M_PI * 6e6;
  s.omega_c_rabi = 2 * M_PI * 10e6;
  s.Delta = 2 * M_PI * 1e9;
  s.length = 0.08;
  s.omega0 = 2 * M_PI * kSpeedOfLight / 795e-9;
  return with_advance(s, 0.28e-6);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("chi_full reduces to the one-photon background without coupling") {
  MediumSpec s = reference_spec();
  s.omega_c_rabi = 0.0;
  const std::complex<double> expected = s.beta / (s.Delta - 0.5i * s.Gamma);
  for (double delta : {-3.0, 0.0, 0.017, 42.0}) {
    const auto chi = chi_full(delta, s);
    CHECK(std::abs(chi - expected) <= 1e-15 * std::abs(expected));
  }
}

TEST_CASE("chi_full far from two-photon resonance approaches the background") {
  const MediumSpec s = reference_spec();
  const auto bg = chi_background(s);
  CHECK(std::abs(chi_full(1e12, s) - bg) < 1e-9 * std::abs(bg));
  CHECK(std::abs(chi_full(-1e12, s) - bg) < 1e-9 * std::abs(bg));
}

TEST_CASE("Raman peak of chi_full matches the Lorentzian peak") {
  const MediumSpec s = reference_spec();
  const double d0 = light_shift(s);
  const double gp = effective_linewidth(s);
  const auto bg = chi_background(s);
  const double lorentz_peak = chi_lorentzian(0.0, s).imag();

  // Dense scan of the line riding on the background.
  double peak = 0.0;
  double where = 0.0;
  for (int k = -5000; k <= 5000; ++k) {
    const double d = d0 + 5.0 * gp * k / 5000.0;
    const double im = (chi_full(d, s) - bg).imag();
    if (im > peak) {
      peak = im;
      where = d;
    }
  }
  CHECK(rel(peak, lorentz_peak) < 0.02);
  CHECK(std::abs(where - d0) < 0.05 * gp);
  CHECK(rel((chi_full(d0, s) - bg).imag(), lorentz_peak) < 0.02);
}

TEST_CASE("light shift and power broadening closed forms") {
  const MediumSpec s = reference_spec();
  CHECK(rel(power_broadening(s), 0.04 / 80002.0) < 1e-14);
  CHECK(rel(light_shift(s), 4.0 / 40001.0) < 1e-14);
  CHECK(power_broadening(s) == doctest::Approx(5.0e-7).epsilon(1e-3));
  CHECK(light_shift(s) == doctest::Approx(1.0e-4).epsilon(1e-3));
  CHECK(effective_linewidth(s) == doctest::Approx(0.01 + 0.04 / 80002.0).epsilon(1e-15));
}

TEST_CASE("chi_lorentzian line centre and half width") {
  const MediumSpec s = reference_spec();
  const double gp = effective_linewidth(s);
  const auto centre = chi_lorentzian(0.0, s);
  CHECK(centre.real() == 0.0);
  CHECK(rel(centre.imag(), s.beta * s.omega_c_rabi * s.omega_c_rabi /
                               (4 * s.Delta * s.Delta * gp)) < 1e-14);
  CHECK(rel(chi_lorentzian(gp, s).imag(), 0.5 * centre.imag()) < 1e-14);
  CHECK(rel(chi_lorentzian(-gp, s).imag(), 0.5 * centre.imag()) < 1e-14);
}

TEST_CASE("Lorentzian guard") {
  MediumSpec s = reference_spec();
  s.Delta = 5.0;
  CHECK(lorentzian_validity(s) == LorentzianValidity::invalid);
  try {
    chi_lorentzian(0.0, s);
    FAIL("expected ApproximationDomainError");
  } catch (const ApproximationDomainError& e) {
    CHECK(e.ratio() == doctest::Approx(5.0));
  }
  s.Delta = -50.0;
  CHECK(lorentzian_validity(s) == LorentzianValidity::marginal);
  CHECK_NOTHROW(chi_lorentzian(0.0, s));
  s.Delta = 100.0;
  CHECK(lorentzian_validity(s) == LorentzianValidity::valid);
}

TEST_CASE("medium validation names the field") {
  MediumSpec s = reference_spec();
  s.gamma = 0.0;
  CHECK_THROWS_WITH_AS(s.validate(), doctest::Contains("gamma"), InvalidArgument);
  s = reference_spec();
  s.length = -1.0;
  CHECK_THROWS_AS(group_advance(s), InvalidArgument);
}

TEST_CASE("refractive index linearisation") {
  CHECK(refractive_index(0.0) == std::complex<double>(1.0, 0.0));
  CHECK(refractive_index(0.02i) == std::complex<double>(1.0, 0.01));
  CHECK_THROWS_AS(refractive_index(0.6), InvalidArgument);

  const MediumSpec s = reference_spec();
  const double gp = effective_linewidth(s);
  const auto n = refractive_index(chi_lorentzian(0.0, s));
  CHECK(rel(n.imag(), s.beta * s.omega_c_rabi * s.omega_c_rabi / (8 * s.Delta * s.Delta * gp)) <
        1e-14);
}

TEST_CASE("group index at line centre matches the closed form magnitude") {
  for (const MediumSpec& s : {reference_spec(), rubidium_spec()}) {
    const double gp = effective_linewidth(s);
    const double magnitude = s.beta * s.omega_c_rabi * s.omega_c_rabi * s.omega0 /
                             (8 * s.Delta * s.Delta * gp * gp);
    const double ng = group_index(0.0, s);
    // Absorption line: fast light, n_g below one by the closed-form amount.
    CHECK(ng < 1.0);
    CHECK(rel(1.0 - ng, magnitude) < 1e-6);
  }
}

TEST_CASE("group index without coupling is flat") {
  MediumSpec s = reference_spec();
  s.omega_c_rabi = 0.0;
  for (double d : {-1.0, 0.0, 0.3}) CHECK(group_index(d, s) == 1.0);
}

TEST_CASE("group index structure across the line") {
  const MediumSpec s = reference_spec();
  const LineShape shape = line_shape(s);
  const double gp = shape.width;

  // n_g - 1 changes sign at +-gamma'.
  CHECK(group_index(0.99 * gp, s) < 1.0);
  CHECK(group_index(1.01 * gp, s) > 1.0);
  CHECK(group_index(-0.99 * gp, s) < 1.0);
  CHECK(group_index(-1.01 * gp, s) > 1.0);

  // Finite difference against the analytic slope over a scan.
  const double scale = 1.0 - group_index(0.0, s);
  for (int k = -40; k <= 40; ++k) {
    const double d = 0.1 * gp * k;
    const double exact = 1.0 + 0.5 * lorentzian(shape, d).real() -
                         (s.omega0 - d) * 0.5 * oracle::lorentzian_real_slope(shape.strength, gp, d);
    CHECK(std::abs(group_index(d, s) - exact) < 1e-6 * scale);
  }

  // Extrema of n_g sit where the slope of Re n has its extrema: 0 and +-sqrt(3) gamma'.
  double best = -INFINITY;
  double where = 0.0;
  for (int k = 1; k <= 4000; ++k) {
    const double d = 4.0 * gp * k / 4000.0;
    const double ng = group_index(d, s);
    if (ng > best) {
      best = ng;
      where = d;
    }
  }
  CHECK(where == doctest::Approx(std::sqrt(3.0) * gp).epsilon(2e-3));
}

TEST_CASE("group advance proportionalities") {
  const MediumSpec base = reference_spec();
  const ReducedLine line = group_advance(base);
  CHECK(line.advance);
  CHECK(line.gamma_prime == effective_linewidth(base));

  MediumSpec zero = base;
  zero.length = 0.0;
  CHECK(group_advance(zero).t0 == 0.0);

  MediumSpec doubled = base;
  doubled.beta *= 2.0;
  CHECK(rel(group_advance(doubled).t0, 2.0 * line.t0) < 1e-15);

  MediumSpec broader = base;
  broader.gamma *= 2.0;
  CHECK(group_advance(broader).t0 == doctest::Approx(line.t0 / 4.0).epsilon(1e-3));

  const MediumSpec rb = rubidium_spec();
  CHECK(group_advance(rb).t0 == doctest::Approx(0.28e-6).epsilon(1e-12));
  CHECK(rel(group_advance(rb).t0,
            (1.0 - group_index(0.0, rb)) * rb.length / rb.c) < 1e-6);
}

TEST_CASE("transmission identities") {
  CHECK(transmission(ReducedLine{0.0, 1.0}) == 1.0);
  CHECK(transmission(ReducedLine{std::log(2.0) / 2.0, 1.0}) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(transmission(ReducedLine{1.498e-6, 1e6}) == doctest::Approx(0.05).epsilon(1e-3));

  const MediumSpec rb = rubidium_spec();
  const double alpha = absorption(rb);
  CHECK(rel(alpha, rb.omega0 / rb.c * refractive_index(chi_lorentzian(0.0, rb)).imag()) < 1e-14);
}

TEST_CASE("T = exp(-2 gamma' t0) holds for random media") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    MediumSpec s = rubidium_spec();
    s.beta *= std::pow(10.0, 2.0 * u(rng) - 1.0);
    s.gamma *= std::pow(10.0, 2.0 * u(rng) - 1.0);
    s.omega_c_rabi *= std::pow(10.0, 2.0 * u(rng) - 1.0);
    s.Delta *= (u(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + u(rng));
    s.length *= 0.1 + u(rng);
    const ReducedLine line = group_advance(s);
    CHECK(rel(transmission(s), std::exp(-2.0 * line.gamma_prime * line.t0)) < 1e-12);
  }
}

TEST_CASE("susceptibility is linear in beta") {
  const MediumSpec s = reference_spec();
  for (double k : {0.5, 2.0, 8.0}) {
    MediumSpec scaled = s;
    scaled.beta *= k;
    for (double d : {-0.03, 0.0, 0.011}) {
      CHECK(chi_lorentzian(d, scaled) == k * chi_lorentzian(d, s));
      CHECK(chi_full(d, scaled) == k * chi_full(d, s));
    }
  }
  MediumSpec scaled = s;
  scaled.beta *= 3.7;
  const auto a = chi_full(0.004, scaled);
  const auto b = 3.7 * chi_full(0.004, s);
  CHECK(std::abs(a - b) < 1e-15 * std::abs(b));
}

TEST_CASE("full and Lorentzian models converge with detuning") {
  std::vector<double> worst;
  for (double ratio : {1e2, 1e3, 1e4}) {
    MediumSpec s = reference_spec();
    s.Delta = ratio * s.Gamma;
    s.omega_c_rabi = s.Delta / 10.0;
    const double d0 = light_shift(s);
    const double gp = effective_linewidth(s);
    const auto bg = chi_background(s);
    const double scale = std::abs(chi_lorentzian(0.0, s));
    double discrepancy = 0.0;
    for (int k = -100; k <= 100; ++k) {
      const double dp = 5.0 * gp * k / 100.0;
      discrepancy = std::max(
          discrepancy, std::abs(chi_full(d0 + dp, s) - bg - chi_lorentzian(dp, s)) / scale);
    }
    CHECK(discrepancy < 0.05);
    worst.push_back(discrepancy);
  }
  CHECK(worst[1] < worst[0]);
  CHECK(worst[2] < worst[1]);
}

TEST_CASE("Kramers-Kronig residual on the reference grid") {
  const MediumSpec s = reference_spec();
  const double gp = effective_linewidth(s);
  const KramersKronigReport ref = kk_check(s, DetuningGrid{40.0 * gp, 1u << 14});
  CHECK(ref.consistent);
  CHECK(ref.residual < 0.02);

  double previous = INFINITY;
  for (double half : {40.0, 80.0, 160.0, 320.0}) {
    const double r = kk_check(s, DetuningGrid{half * gp, 1u << 15}).residual;
    CHECK(r < previous);
    previous = r;
  }
}

TEST_CASE("Kramers-Kronig check flags a missing absorptive part") {
  const LineShape shape{1.0, 1.0};
  const DetuningGrid grid{40.0, 1u << 13};
  Eigen::ArrayXcd chi = lorentzian(shape, grid.points());
  chi = chi.real().cast<std::complex<double>>();
  const KramersKronigReport r = kk_residual(chi, grid.step());
  CHECK_FALSE(r.consistent);
  CHECK(r.residual == doctest::Approx(1.0));
}

TEST_CASE("Kramers-Kronig grid requirements") {
  const LineShape shape{1.0, 1.0};
  CHECK_THROWS_AS(kk_check(shape, DetuningGrid{20.0, 1u << 14}), GridError);
  CHECK_THROWS_AS(kk_check(shape, DetuningGrid{40.0, 1000}), GridError);
}

TEST_CASE("Hilbert transform of the Lorentzian absorption profile") {
  const DetuningGrid grid{200.0, 1u << 14};
  const Eigen::ArrayXd x = grid.points();
  const Eigen::ArrayXd v = 1.0 / (x.square() + 1.0);
  const Eigen::ArrayXd h = hilbert_transform(v, grid.step());
  const Eigen::Index mid = x.size() / 2;
  for (Eigen::Index k = mid - 500; k <= mid + 500; k += 50) {
    CHECK(h[k] == doctest::Approx(x[k] / (x[k] * x[k] + 1.0)).epsilon(1e-3).scale(1.0));
  }
}

TEST_CASE("coupling strength from density and dipole moment") {
  const double beta = coupling_strength(1e18, 2.5e-29);
  CHECK(beta == doctest::Approx(1e18 * 6.25e-58 / (kHbar * kVacuumPermittivity)));
  CHECK_THROWS_AS(coupling_strength(-1.0, 1.0), InvalidArgument);
}
