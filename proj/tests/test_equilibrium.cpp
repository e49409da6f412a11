#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "xx0lab/correlations.hpp"
#include "xx0lab/equilibrium.hpp"

using namespace xx0lab;
using Catch::Approx;

TEST_CASE("select_equilibrium_subspace", "[equilibrium]") {
  SECTION("frozen corner keeps only the ferromagnetic state") {
    const auto sub = select_equilibrium_subspace(8, {0.05, 2.5}, 2, kDefaultSelectionTol);
    REQUIRE(sub.dim() == 1);
    REQUIRE(sub.members[0].state.m() == 0);
  }
  SECTION("infinite temperature concentrates at half filling with even spread") {
    const auto sub = select_equilibrium_subspace(8, {1e9, 0.0}, 2, 0.05);
    REQUIRE(sub.dim() == 36);  // C(4,2)^2 ways to put two particles in each bin
    for (const auto& mem : sub.members) {
      REQUIRE(mem.state.m() == 4);
      const auto rho = empirical_density(mem.state.momenta, 2);
      REQUIRE(rho.values[0] == Approx(rho.values[1]));
    }
  }
  SECTION("a vacuous tolerance selects everything") {
    const auto sub = select_equilibrium_subspace(8, {1.0, 0.0}, 2,
                                                 std::numeric_limits<double>::infinity());
    REQUIRE(sub.dim() == 256);
  }
  SECTION("members are sorted by score") {
    const auto sub = select_equilibrium_subspace(10, {1.0, 0.5}, 2, 0.3);
    for (int i = 1; i < sub.dim(); ++i)
      REQUIRE(sub.members[i - 1].score <= sub.members[i].score);
  }
  SECTION("empty selection reports the minimal achievable distance") {
    try {
      select_equilibrium_subspace(8, {1.0, 0.3}, 2, 1e-9);
      FAIL("expected EmptySelectionError");
    } catch (const EmptySelectionError& e) {
      REQUIRE(e.min_score > 1e-9);
    }
  }
  SECTION("selection is deterministic") {
    const auto a = select_equilibrium_subspace(8, {1.0, 0.0}, 2, kDefaultSelectionTol);
    const auto b = select_equilibrium_subspace(8, {1.0, 0.0}, 2, kDefaultSelectionTol);
    REQUIRE(a.dim() == b.dim());
    for (int i = 0; i < a.dim(); ++i) {
      REQUIRE(a.members[i].score == b.members[i].score);
      REQUIRE(a.members[i].state.momenta.indices == b.members[i].state.momenta.indices);
      REQUIRE(a.members[i].state.m() == b.members[i].state.m());
    }
  }
  SECTION("monotone in the tolerance") {
    const auto tight = select_equilibrium_subspace(8, {1.0, 0.0}, 2, 0.1);
    const auto loose = select_equilibrium_subspace(8, {1.0, 0.0}, 2, 0.2);
    REQUIRE(tight.dim() <= loose.dim());
    std::set<std::pair<int, std::vector<int>>> loose_keys;
    for (const auto& mem : loose.members)
      loose_keys.insert({mem.state.m(), mem.state.momenta.indices});
    for (const auto& mem : tight.members)
      REQUIRE(loose_keys.count({mem.state.m(), mem.state.momenta.indices}) == 1);
  }
  SECTION("bin bound is enforced") {
    REQUIRE_THROWS_AS(select_equilibrium_subspace(8, {1.0, 0.0}, 3, 0.15),
                      std::invalid_argument);
  }
}

TEST_CASE("variational scorer cross-validates the density rule", "[equilibrium]") {
  const auto var = select_equilibrium_subspace(8, {1e9, 0.0}, 2, 1e-9,
                                               SelectionRule::variational);
  // At infinite temperature the functional reduces to the profile entropy,
  // maximized by half filling spread evenly over the bins.
  REQUIRE(var.dim() == 36);
  for (const auto& mem : var.members) REQUIRE(mem.state.m() == 4);
}

TEST_CASE("dimension_estimate", "[equilibrium]") {
  SECTION("limits") {
    REQUIRE(dimension_estimate(8, {1e9, 0.0}) == Approx(8.0).epsilon(1e-6));
    REQUIRE(dimension_estimate(8, {0.05, 2.5}) == Approx(0.0).margin(1e-4));
  }
  SECTION("selected dimension tracks n S as a reported trend") {
    const ThermoParams params{1.0, 0.0};
    const auto sub = select_equilibrium_subspace(12, params, 3, kDefaultSelectionTol);
    const double per_site = std::log2(double(sub.dim())) / 12.0;
    const double s = entropy_density(params);
    // Reported, not asserted tightly: the finite-n count sits near n S.
    REQUIRE(per_site > 0.0);
    REQUIRE(per_site < 1.0);
    REQUIRE(std::abs(per_site - s) < 0.25);
  }
}

TEST_CASE("boltzmann_probability", "[equilibrium]") {
  SECTION("uniform at infinite temperature") {
    const ThermoParams params{1e9, 0.0};
    for (const auto& s : full_spectrum(4, params.h))
      REQUIRE(boltzmann_probability(s, 4, params) == Approx(1.0 / 16).epsilon(1e-6));
  }
  SECTION("equal energies have equal probability") {
    const ThermoParams params{0.7, 0.0};
    const auto a = build_eigenstate(6, 0.0, MomentumSet::from_indices(6, {1}));
    const auto b = build_eigenstate(6, 0.0, MomentumSet::from_indices(6, {5}));
    REQUIRE(a.spinwave_energy == Approx(b.spinwave_energy).margin(1e-12));
    REQUIRE(boltzmann_probability(a, 6, params) ==
            Approx(boltzmann_probability(b, 6, params)).epsilon(1e-12));
  }
  SECTION("n=2 probabilities match the dense Boltzmann weights") {
    const ThermoParams params{1.0, 0.0};
    const auto states = full_spectrum(2, params.h);
    double z = 0.0;
    for (const auto& s : states) z += std::exp2(-s.spinwave_energy / params.T);
    for (const auto& s : states)
      REQUIRE(boltzmann_probability(s, 2, params) ==
              Approx(std::exp2(-s.spinwave_energy / params.T) / z).epsilon(1e-12));
  }
  SECTION("probabilities over the full spectrum sum to one") {
    const ThermoParams params{0.8, 0.5};
    double total = 0.0;
    for (const auto& s : full_spectrum(8, params.h))
      total += boltzmann_probability(s, 8, params);
    REQUIRE(total == Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("aggregate Boltzmann mass grows along the sweep", "[equilibrium]") {
  const ThermoParams params{1.0, 0.0};
  const auto sub6 = select_equilibrium_subspace(6, params, default_bins(6), kDefaultSelectionTol);
  const auto sub12 =
      select_equilibrium_subspace(12, params, default_bins(12), kDefaultSelectionTol);
  REQUIRE(boltzmann_mass(sub12) > boltzmann_mass(sub6));
}

TEST_CASE("PackedSubspace is a faithful orthonormal packing", "[equilibrium]") {
  const ThermoParams params{1.0, 0.0};
  const auto sub = select_equilibrium_subspace(8, params, 2, kDefaultSelectionTol);
  const PackedSubspace pack(sub);
  REQUIRE(pack.size() == sub.dim());

  SECTION("member vectors match normalized materialization") {
    for (int j : {0, 1, sub.dim() - 1}) {
      StateVector direct = sub.members[j].state.materialize();
      direct.amp /= direct.amp.norm();
      const StateVector packed = pack.member_vector(j);
      REQUIRE((direct.amp - packed.amp).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  SECTION("assemble reproduces single members") {
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(pack.size());
    g[2] = 1.0;
    const StateVector v = pack.assemble(g);
    REQUIRE((v.amp - pack.member_vector(2).amp).cwiseAbs().maxCoeff() < 1e-14);
  }
  SECTION("identity expectation is exactly one") {
    for (int j = 0; j < sub.dim(); ++j)
      REQUIRE(pack.member_expectation(LocalOperator::identity(), j) == cdouble(1.0));
  }
  SECTION("member expectations agree with the dense route") {
    const LocalOperator op = LocalOperator::from_string(PauliString::single(Axis::z, 1));
    for (int j : {0, 3, sub.dim() - 1}) {
      const cdouble packed = pack.member_expectation(op, j);
      const cdouble dense = state_expectation(op, sub.members[j].state.materialize());
      REQUIRE(std::abs(packed - dense) < 1e-12);
    }
  }
}
