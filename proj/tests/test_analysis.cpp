#include <random>

#include "collatzlab/analysis.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

using namespace collatzlab;

using V = std::vector<u64>;
using I = std::vector<std::int64_t>;

TEST_CASE("build_set") {
  CHECK(build_set(Form::d, 1'000'000) == V{1, 64, 4096, 262144});
  CHECK(build_set(Form::b, 1'000'000) == V{4, 256, 16384});
  CHECK(build_set(Form::f, 100'000) == V{16, 1024, 65536});
  CHECK(build_set(Form::a, 10) == V{3, 5, 6, 7, 8, 9, 10});
  const auto e = build_set(Form::e, 1000);
  CHECK(e == V{21, 32, 42, 84, 168, 336, 672});
  const auto c = build_set(Form::c, 500);
  u64 expected_c = 0;
  for (u64 v = 1; v <= 500; ++v) expected_c += oracle::raw_subsequence(v).form == 'c';
  CHECK(c.size() == expected_c);
  CHECK(c.front() == 2);
  // a bound beyond the default capture for c still yields the full set
  CHECK(build_set(Form::c, 200'000).size() == oracle::counts_upto(200'000)[2]);
}

TEST_CASE("factorize goldens") {
  CHECK(factorize(u64{87381}).to_string() == "3^2 × 7 × 19 × 73");
  CHECK(factorize(u64{113}).to_string() == "113");
  CHECK(factorize(u64{1}).to_string() == "1");
  CHECK(factorize(u64{65536}).to_string() == "2^16");
  CHECK(factorize(u64{5460}).to_string() == "2^2 × 3 × 5 × 7 × 13");
  CHECK(factorize(u64{18446744073709551557ull}).to_string() == "18446744073709551557");
  CHECK(factorize(u64{4294967291ull} * 4294967279ull).to_string() == "4294967279 × 4294967291");
  const BigInt big = BigInt(1'000'000'007) * BigInt(998'244'353) * BigInt("18446744073709551557");
  CHECK(factorize(big).to_string() == "998244353 × 1000000007 × 18446744073709551557");
  CHECK_THROWS_AS(factorize(u64{0}), InvalidArgument);
}

TEST_CASE("is_prime") {
  CHECK_FALSE(is_prime(u64{1}));
  CHECK(is_prime(u64{2}));
  CHECK_FALSE(is_prime(u64{3215031751ull}));  // strong pseudoprime to bases 2,3,5,7
  CHECK(is_prime(BigInt("170141183460469231731687303715884105727")));  // 2^127 - 1
  CHECK_FALSE(is_prime(BigInt("170141183460469231731687303715884105729")));
  for (u64 n = 1; n < 20'000; ++n) {
    const auto td = oracle::trial_division(n);
    const bool prime = td.size() == 1 && td[0].second == 1 && n > 1;
    if (is_prime(n) != prime) FAIL("is_prime disagrees at " << n);
  }
}

TEST_CASE("property: factorizations reconstruct and match trial division") {
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<u64> dist(1, u64{1} << 40);
  for (int i = 0; i < 1000; ++i) {
    const u64 v = dist(rng);
    const auto f = factorize(v);
    REQUIRE(f.product() == BigInt(v));
    const auto td = oracle::trial_division(v);
    REQUIRE(f.factors.size() == td.size());
    for (std::size_t k = 0; k < td.size(); ++k) {
      REQUIRE(f.factors[k].first == BigInt(td[k].first));
      REQUIRE(f.factors[k].second == td[k].second);
    }
  }
  // above 64 bits; the second factor keeps rho within reach
  std::uniform_int_distribution<u64> wide(u64{1} << 62, ~u64{0});
  std::uniform_int_distribution<u64> narrow(2, u64{1} << 24);
  for (int i = 0; i < 200; ++i) {
    const BigInt v = BigInt(wide(rng)) * BigInt(narrow(rng)) * BigInt(narrow(rng));
    const auto f = factorize(v);
    REQUIRE(f.product() == v);
    for (const auto& [p, e] : f.factors) REQUIRE(is_prime(p));
  }
}

TEST_CASE("factor_report") {
  const auto e = factor_report(Form::e, 100);
  REQUIRE(e.size() == 4);
  CHECK(e[0].element == 21);
  CHECK(e[0].factorization.to_string() == "3 × 7");
  CHECK(e[1].factorization.to_string() == "2^5");
  CHECK(e[3].factorization.to_string() == "2^2 × 3 × 7");

  const auto f = factor_report(Form::f, 100'000);
  REQUIRE(f.size() == 3);
  CHECK(f[2].factorization.to_string() == "2^16");

  const auto a = factor_report(Form::a, 10);
  std::vector<std::string> texts;
  for (const auto& r : a) texts.push_back(r.factorization.to_string());
  CHECK(texts == std::vector<std::string>{"3", "5", "2 × 3", "7", "2^3", "3^2", "2 × 5"});
}

TEST_CASE("power-of-two exponent scans") {
  const auto d = power2_exponent_scan(Form::d, 1'000'000);
  CHECK(d.exponents == std::vector<unsigned>{0, 6, 12, 18});
  CHECK(d.expected_phase == 0);
  CHECK(d.phases_match);
  CHECK_FALSE(d.has_non_powers());

  const auto e = power2_exponent_scan(Form::e, 200'000);
  CHECK(e.exponents == std::vector<unsigned>{5, 11, 17});
  CHECK(e.expected_phase == 5);
  CHECK(e.phases_match);
  CHECK(e.has_non_powers());

  const auto b = power2_exponent_scan(Form::b, 10'000'000);
  CHECK(b.exponents == std::vector<unsigned>{2, 8, 14, 20});
  CHECK_FALSE(b.has_non_powers());

  const auto c = power2_exponent_scan(Form::c, 100'000);
  CHECK(c.exponents == std::vector<unsigned>{1, 7, 13});
  CHECK(c.has_non_powers());
}

TEST_CASE("gap progression reports") {
  const auto e = gap_progression_report(Form::e, 700'000);
  CHECK(e.powers == V{32, 2048, 131072});
  CHECK(e.positions.terms == I{2, 10, 24});
  CHECK(e.positions.first == I{8, 14});
  CHECK(e.positions.second == I{6});
  CHECK(e.exponents.terms == I{5, 11, 17});
  CHECK(e.exponents.first == I{6, 6});
  CHECK(e.values.first == I{2016, 129024});

  const auto d = gap_progression_report(Form::d, 1'000'000);
  CHECK(d.positions.terms == I{1, 2, 3, 4});
  CHECK(d.positions.second == I{0, 0});
  CHECK(d.exponents.first == I{6, 6, 6});

  const auto b = gap_progression_report(Form::b, 100'000);
  CHECK(b.exponents.terms == I{2, 8, 14});

  CHECK_THROWS_AS(gap_progression_report(Form::b, 1000), InvalidArgument);
}

TEST_CASE("sets partition the range and are pairwise disjoint") {
  const u64 bound = 50'000;
  std::vector<int> owner(bound + 1, -1);
  for (Form f : kForms) {
    for (u64 v : build_set(f, bound)) {
      REQUIRE(owner[v] == -1);
      owner[v] = static_cast<int>(index_of(f));
    }
  }
  for (u64 v = 1; v <= bound; ++v) {
    REQUIRE(owner[v] != -1);
    REQUIRE(kForms[owner[v]] == classify(v).terminating_form);
  }
}

TEST_CASE("set report rendering") {
  const auto r = set_report(Form::e, 700'000, true, true);
  CHECK(r.members.size() == 33);
  CHECK(r.factors.size() == 33);
  REQUIRE(r.gaps.has_value());

  const auto text = render_set_report(r, OutputFormat::text);
  CHECK(text.find("87381") != std::string::npos);
  CHECK(text.find("3^2 × 7 × 19 × 73") != std::string::npos);

  const auto j = nlohmann::json::parse(render_set_report(r, OutputFormat::structured));
  CHECK(j["members"].size() == 33);

  const auto csv = render_factor_table(Form::e, r.factors, OutputFormat::csv);
  CHECK(csv.rfind("element,factorization\n21,3 × 7\n", 0) == 0);
}
