#include <catch2/catch_amalgamated.hpp>

#include <bit>
#include <cmath>
#include <cstdint>

#include "hcq/gmvp.hpp"
#include "oracles.hpp"

namespace {

hcq::GmvpInstance identity_instance(int n, int l, int m) {
  hcq::GmvpInstance inst;
  inst.n = n;
  inst.l = l;
  inst.m = m;
  inst.sigma.assign(std::size_t(n) * n, 0.0);
  for (int i = 0; i < n; ++i) inst.sigma[std::size_t(i) * n + i] = 1.0;
  hcq::validate_instance(inst);
  return inst;
}

}  // namespace

TEST_CASE("decode maps basis indices to block weights", "[gmvp]") {
  REQUIRE_FALSE(hcq::decode(0, 4, 3, 3).has_value());

  const auto w7 = hcq::decode(7, 4, 3, 3);
  REQUIRE(w7.has_value());
  REQUIRE(w7->weights == std::vector<double>{1.0, 0.0, 0.0, 0.0});

  // one excitation in each of blocks 0, 1, 2: bits 0, 3, 6
  const auto w3 = hcq::decode((1u << 0) | (1u << 3) | (1u << 6), 4, 3, 3);
  REQUIRE(w3.has_value());
  for (int t = 0; t < 3; ++t) REQUIRE(w3->weights[std::size_t(t)] == Catch::Approx(1.0 / 3).margin(1e-15));
  REQUIRE(w3->weights[3] == 0.0);
}

TEST_CASE("cost_of_index evaluates the quadratic form", "[gmvp]") {
  const auto identity = identity_instance(4, 3, 3);
  REQUIRE(hcq::cost_of_index(7, identity) == Catch::Approx(1.0));  // w = e_0

  const auto id_m2 = identity_instance(4, 3, 2);
  const std::uint64_t idx = (1u << 0) | (1u << 3);  // w = (1/2, 1/2, 0, 0)
  REQUIRE(hcq::cost_of_index(idx, id_m2) == Catch::Approx(0.5));

  hcq::GmvpInstance ones = identity_instance(4, 3, 3);
  ones.sigma.assign(16, 1.0);
  for (std::uint64_t j : hcq::feasible_indices(4, 3, 3))
    REQUIRE(hcq::cost_of_index(j, ones) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("feasible_indices enumerates the Hamming-weight subspace", "[gmvp]") {
  const auto feas = hcq::feasible_indices(4, 3, 3);
  REQUIRE(feas.size() == 220);  // C(12, 3)
  for (std::size_t i = 1; i < feas.size(); ++i) REQUIRE(feas[i - 1] < feas[i]);
  for (std::uint64_t j : feas) REQUIRE(std::popcount(j) == 3);

  REQUIRE(hcq::feasible_indices(2, 2, 0) == std::vector<std::uint64_t>{0});
  REQUIRE(hcq::feasible_indices(2, 2, 4) == std::vector<std::uint64_t>{15});
}

TEST_CASE("brute_force_optimum is the exhaustive minimum", "[gmvp]") {
  const auto identity = identity_instance(4, 3, 3);
  const auto best = hcq::brute_force_optimum(identity);
  REQUIRE(best.value == Catch::Approx(1.0 / 3).margin(1e-12));

  hcq::GmvpInstance diag = identity_instance(4, 3, 3);
  for (int i = 0; i < 4; ++i) diag.sigma[std::size_t(i) * 4 + i] = double(i + 1);
  REQUIRE(hcq::cost_of_index(7, diag) < hcq::cost_of_index(std::uint64_t(7) << 9, diag));

  const auto inst = hcq::random_instance(5, 4, 3, 3);
  const auto opt = hcq::brute_force_optimum(inst);
  for (std::uint64_t j : hcq::feasible_indices(4, 3, 3))
    REQUIRE(opt.value <= hcq::cost_of_index(j, inst));
}

TEST_CASE("random_instance builds seeded correlation matrices", "[gmvp]") {
  const auto a = hcq::random_instance(42, 4, 3, 3);
  const auto b = hcq::random_instance(42, 4, 3, 3);
  REQUIRE(a.sigma == b.sigma);  // bit-identical
  REQUIRE(hcq::random_instance(43, 4, 3, 3).sigma != a.sigma);

  for (int i = 0; i < 4; ++i) REQUIRE(a.sig(i, i) == 1.0);
  const auto eig = oracle::symmetric_eigenvalues(a.sigma, 4);
  for (double e : eig) REQUIRE(e >= -1e-10);

  REQUIRE_THROWS_AS(hcq::random_instance(1, 1, 3, 3), hcq::config_error);
}

TEST_CASE("cost table matches decode and penalizes infeasible indices", "[gmvp]") {
  const auto inst = hcq::random_instance(9, 4, 3, 3);
  const auto table = hcq::build_cost_table(inst);
  REQUIRE(table.size() == 4096);
  double max_feasible = 0.0;
  for (std::uint64_t j = 0; j < table.size(); ++j) {
    const auto w = hcq::decode(j, 4, 3, 3);
    if (w) {
      REQUIRE(table[j] == hcq::quadratic_form(inst, *w));
      max_feasible = std::max(max_feasible, table[j]);
    }
  }
  for (std::uint64_t j = 0; j < table.size(); ++j)
    if (!hcq::decode(j, 4, 3, 3)) REQUIRE(table[j] == max_feasible + 1.0);
  REQUIRE(hcq::cost_of_index(0, inst) == max_feasible + 1.0);
}

TEST_CASE("instance json round trip and validation", "[gmvp]") {
  const auto inst = hcq::random_instance(13, 4, 3, 3);
  const auto j = hcq::instance_to_json(inst);
  const auto back = hcq::instance_from_json(j);
  REQUIRE(back.sigma == inst.sigma);
  REQUIRE(back.seed == inst.seed);

  auto bad = j;
  bad["sigma"][1] = 0.9;  // breaks symmetry
  REQUIRE_THROWS_AS(hcq::instance_from_json(bad), hcq::config_error);

  auto extra = j;
  extra["surprise"] = 1;
  REQUIRE_THROWS_AS(hcq::instance_from_json(extra), hcq::config_error);

  auto short_sigma = j;
  short_sigma["sigma"] = std::vector<double>{1.0, 0.0};
  REQUIRE_THROWS_AS(hcq::instance_from_json(short_sigma), hcq::config_error);
}
