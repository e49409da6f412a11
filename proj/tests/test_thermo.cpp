#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "xx0lab/thermo.hpp"

using namespace xx0lab;
using Catch::Approx;

TEST_CASE("spin-wave dispersion", "[thermo]") {
  REQUIRE(epsilon(0.0, 0.0) == Approx(-4.0));
  REQUIRE(epsilon(kPi / 2, 0.0) == Approx(0.0).margin(1e-15));
  REQUIRE(epsilon(0.0, 2.0) == Approx(0.0).margin(1e-15));
}

TEST_CASE("fermi_weight", "[thermo]") {
  SECTION("eps = 0 gives 1/2") {
    REQUIRE(fermi_weight(kPi / 2, {1.0, 0.0}) == Approx(0.5));
  }
  SECTION("eps = 2 at T = 1 gives 1/(1+4)") {
    REQUIRE(fermi_weight(kPi / 2, {1.0, 1.0}) == Approx(0.2));
  }
  SECTION("T to 0+ saturates occupied modes") {
    REQUIRE(fermi_weight(0.0, {1e-3, 0.0}) == Approx(1.0));
    REQUIRE(fermi_weight(kPi, {1e-3, 0.0}) == Approx(0.0).margin(1e-15));
  }
  SECTION("nonpositive temperature is rejected") {
    REQUIRE_THROWS_AS(fermi_weight(0.0, {0.0, 0.0}), std::invalid_argument);
    REQUIRE_THROWS_AS(fermi_weight(0.0, {-1.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("log2_partition_function", "[thermo]") {
  SECTION("infinite-temperature limit counts states") {
    REQUIRE(log2_partition_function(6, {1e9, 0.0}) == Approx(6.0).epsilon(1e-6));
  }
  SECTION("n=2 matches the dense spectrum shifted by +hn") {
    for (double h : {0.0, 0.5}) {
      const double T = 1.0;
      const auto evals =
          oracles::dense_spectrum(oracles::dense_xx0_hamiltonian(2, h));
      double z = 0.0;
      for (int i = 0; i < evals.size(); ++i) z += std::exp2(-(evals[i] + h * 2) / T);
      REQUIRE(log2_partition_function(2, {T, h}) == Approx(std::log2(z)).epsilon(1e-12));
    }
  }
  SECTION("agrees with direct enumeration over all eigenstates, n=10") {
    const ThermoParams params{0.7, 0.4};
    double max_exp = -1e300;
    std::vector<double> exps;
    for (const auto& s : full_spectrum(10, params.h)) {
      exps.push_back(-s.spinwave_energy / params.T);
      max_exp = std::max(max_exp, exps.back());
    }
    double acc = 0.0;
    for (double e : exps) acc += std::exp2(e - max_exp);
    const double expect = max_exp + std::log2(acc);
    REQUIRE(log2_partition_function(10, params) == Approx(expect).epsilon(1e-12));
  }
  SECTION("small temperatures stay finite in the log domain") {
    const double v = log2_partition_function(12, {0.02, 0.0});
    REQUIRE(std::isfinite(v));
    REQUIRE(v > 0.0);
  }
  SECTION("cap is enforced") {
    REQUIRE_THROWS_AS(log2_partition_function(15, {1.0, 0.0}), std::invalid_argument);
  }
}

TEST_CASE("bulk_free_energy", "[thermo]") {
  SECTION("frozen regime vanishes") {
    REQUIRE(std::abs(bulk_free_energy({0.05, 2.5})) < 1e-5);
  }
  SECTION("infinite-temperature limit is one bit") {
    REQUIRE(bulk_free_energy({1e8, 0.0}) == Approx(1.0).epsilon(1e-6));
  }
  SECTION("finite-n free energies converge toward the bulk value") {
    for (double h : {0.0, 1.0}) {
      const ThermoParams params{1.0, h};
      const double f = bulk_free_energy(params);
      const double err4 = std::abs(log2_partition_function(4, params) / 4 - f);
      const double err10 = std::abs(log2_partition_function(10, params) / 10 - f);
      REQUIRE(err10 < err4);
    }
  }
  SECTION("base-2 convention is detectably different from natural logs") {
    const ThermoParams params{1.0, 0.0};
    const double f2 = bulk_free_energy(params);
    const double fnat = integrate_adaptive(
                            [&](double p) {
                              return std::log1p(std::exp(-epsilon(p, params.h) / params.T)) /
                                     (2.0 * kPi);
                            },
                            -kPi, kPi, 1e-10)
                            .value;
    REQUIRE(std::abs(f2 - fnat) > 0.3);
  }
}

TEST_CASE("entropy_density and the profile identity", "[thermo]") {
  SECTION("limits") {
    REQUIRE(entropy_density({1e8, 0.0}) == Approx(1.0).epsilon(1e-6));
    REQUIRE(std::abs(entropy_density({0.05, 2.5})) < 1e-5);
  }
  SECTION("equals the binned-profile entropy at equilibrium") {
    for (double T : {0.25, 1.0, 4.0}) {
      for (double h : {0.0, 1.0, 2.5}) {
        const ThermoParams params{T, h};
        const double lhs = entropy_density(params);
        const double rhs = entropy_of_profile(equilibrium_rho(params, 4096));
        REQUIRE(std::abs(lhs - rhs) < 1e-10);
      }
    }
  }
}

TEST_CASE("entropy_of_profile", "[thermo]") {
  const double cap = 1.0 / (2.0 * kPi);
  SECTION("empty and full configurations are unique") {
    DensityProfile zero{8, std::vector<double>(8, 0.0)};
    DensityProfile full{8, std::vector<double>(8, cap)};
    REQUIRE(entropy_of_profile(zero) == Approx(0.0).margin(1e-14));
    REQUIRE(entropy_of_profile(full) == Approx(0.0).margin(1e-12));
  }
  SECTION("half filling maximizes the per-mode entropy") {
    DensityProfile half{16, std::vector<double>(16, cap / 2)};
    REQUIRE(entropy_of_profile(half) == Approx(1.0).epsilon(1e-12));
  }
  SECTION("density beyond the continuum bound is rejected") {
    DensityProfile bad{4, std::vector<double>(4, cap * 1.5)};
    REQUIRE_THROWS_AS(entropy_of_profile(bad), std::invalid_argument);
  }
}

TEST_CASE("energy_density", "[thermo]") {
  const double cap = 1.0 / (2.0 * kPi);
  SECTION("empty profile carries no energy") {
    DensityProfile zero{64, std::vector<double>(64, 0.0)};
    REQUIRE(energy_density(zero, 0.7) == Approx(0.0).margin(1e-14));
  }
  SECTION("full profile at h = 0: the cosine integrates away") {
    DensityProfile full{64, std::vector<double>(64, cap)};
    REQUIRE(energy_density(full, 0.0) == Approx(0.0).margin(1e-12));
  }
  SECTION("equilibrium energy density matches finite-n thermal averages") {
    const ThermoParams params{1.0, 0.0};
    const double bulk = energy_density(equilibrium_rho(params, 4096), params.h);
    auto thermal_energy_per_site = [&](int n) {
      const double log2z = log2_partition_function(n, params);
      double e = 0.0;
      for (const auto& s : full_spectrum(n, params.h))
        e += std::exp2(-s.spinwave_energy / params.T - log2z) * s.spinwave_energy;
      return e / n;
    };
    const double gap6 = std::abs(thermal_energy_per_site(6) - bulk);
    const double gap12 = std::abs(thermal_energy_per_site(12) - bulk);
    REQUIRE(gap12 < gap6);
  }
}

TEST_CASE("equilibrium_rho", "[thermo]") {
  const double cap = 1.0 / (2.0 * kPi);
  SECTION("infinite temperature flattens to 1/(4 pi)") {
    const auto rho = equilibrium_rho({1e8, 0.0}, 16);
    for (double v : rho.values) REQUIRE(v == Approx(cap / 2).epsilon(1e-6));
  }
  SECTION("particle-hole symmetry at h = 0") {
    const auto rho = equilibrium_rho({0.8, 0.0}, 32);
    for (int i = 0; i < 32; ++i)
      REQUIRE(rho.values[i] + rho.values[31 - i] == Approx(cap).epsilon(1e-12));
  }
  SECTION("frozen regime empties") {
    const auto rho = equilibrium_rho({0.05, 2.5}, 8);
    for (double v : rho.values) REQUIRE(v < 1e-6);
    REQUIRE(rho.particle_density() < 1e-6);
  }
}

TEST_CASE("empirical_density", "[thermo]") {
  const double cap = 1.0 / (2.0 * kPi);
  SECTION("every slot occupied gives the continuum maximum") {
    std::vector<int> all(8);
    std::iota(all.begin(), all.end(), 0);
    const auto rho = empirical_density(MomentumSet::from_indices(8, all), 2);
    for (double v : rho.values) REQUIRE(v == Approx(cap).epsilon(1e-12));
  }
  SECTION("every second slot gives half the maximum") {
    const auto rho = empirical_density(MomentumSet::from_indices(8, {0, 2, 4, 6}), 2);
    for (double v : rho.values) REQUIRE(v == Approx(cap / 2).epsilon(1e-12));
  }
  SECTION("empty set gives the zero profile") {
    const auto rho = empirical_density(MomentumSet::from_indices(8, {}), 2);
    for (double v : rho.values) REQUIRE(v == 0.0);
  }
  SECTION("too many bins violate the scale separation") {
    REQUIRE_THROWS_AS(empirical_density(MomentumSet::from_indices(8, {0}), 3),
                      std::invalid_argument);
  }
}
