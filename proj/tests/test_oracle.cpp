#include <gtest/gtest.h>

#include <random>

#include "osorder/oracle.hpp"
#include "osorder/report_json.hpp"
#include "osorder/ssverify.hpp"

using namespace osorder;

namespace {

TransformedOrderStat W(Reference g, int i, int n) { return {g, {i, n}}; }

}  // namespace

TEST(Probe, IdenticalArgumentsGiveZeroMargins) {
  for (auto order : {StochasticOrder::ST, StochasticOrder::ICV, StochasticOrder::ICX, StochasticOrder::SS}) {
    for (auto g : {Reference::Uniform, Reference::Exponential, Reference::LogLogistic1}) {
      const auto p = probe(order, W(g, 3, 7), W(g, 3, 7), 60);
      for (double m : p.margins) EXPECT_EQ(m, 0.0);
      EXPECT_EQ(p.min_margin, 0.0);
      EXPECT_EQ(p.verdict, ProbeVerdict::ConsistentWithHolds);
    }
  }
}

TEST(ProbeSs, Examples) {
  EXPECT_EQ(probe_ss(W(Reference::Uniform, 2, 3), W(Reference::Uniform, 1, 3), 100).verdict,
            ProbeVerdict::ConsistentWithHolds);
  const auto p = probe_ss(W(Reference::Uniform, 2, 3), W(Reference::Uniform, 3, 4), 100);
  EXPECT_EQ(p.verdict, ProbeVerdict::ViolationFound);
  EXPECT_EQ(p.x_grid.front(), 0.0);
  EXPECT_NEAR(p.margins.front(), -0.1, 1e-10);
  EXPECT_LT(p.argmin, 0.5);
}

TEST(ProbeSs, RejectsUnsupportedInputs) {
  EXPECT_THROW(probe_ss(W(Reference::Logistic, 1, 2), W(Reference::Logistic, 1, 2), 60), std::domain_error);
  EXPECT_THROW(probe_ss(W(Reference::Uniform, 1, 2), W(Reference::Uniform, 1, 2), 49), std::domain_error);
}

TEST(ProbeIcx, Examples) {
  EXPECT_EQ(probe_icx(W(Reference::Uniform, 2, 5), W(Reference::Uniform, 3, 8), 100).verdict,
            ProbeVerdict::ConsistentWithHolds);
  // DHR sums 1/10 vs H_10: the condition fails by a wide margin.
  const auto p = probe_icx(W(Reference::Exponential, 1, 10), W(Reference::Exponential, 10, 10), 100);
  EXPECT_EQ(p.verdict, ProbeVerdict::ViolationFound);
  EXPECT_LT(p.min_margin, -1.0);
}

TEST(ProbeIcv, Examples) {
  EXPECT_EQ(probe_icv(W(Reference::Exponential, 5, 5), W(Reference::Exponential, 3, 3), 100).verdict,
            ProbeVerdict::ConsistentWithHolds);
  EXPECT_EQ(probe_icv(W(Reference::LogLogistic1, 2, 4), W(Reference::LogLogistic1, 1, 2), 100).verdict,
            ProbeVerdict::ConsistentWithHolds);
  EXPECT_EQ(probe_icv(W(Reference::Uniform, 1, 4), W(Reference::Uniform, 3, 4), 100).verdict,
            ProbeVerdict::ViolationFound);
}

TEST(ProbeSt, HigherRankDominates) {
  EXPECT_EQ(probe_st(W(Reference::Logistic, 4, 6), W(Reference::Logistic, 3, 6), 60).verdict,
            ProbeVerdict::ConsistentWithHolds);
  EXPECT_EQ(probe_st(W(Reference::Logistic, 3, 6), W(Reference::Logistic, 4, 6), 60).verdict,
            ProbeVerdict::ViolationFound);
}

TEST(Probe, OrderImplicationChain) {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> size(1, 10);
  int st_pairs = 0;
  for (int rep = 0; rep < 60; ++rep) {
    const int n = size(rng), m = size(rng);
    const int i = std::uniform_int_distribution<int>(1, n)(rng);
    const int j = std::uniform_int_distribution<int>(1, m)(rng);
    for (auto g : {Reference::Uniform, Reference::Exponential, Reference::LogLogistic1}) {
      const auto a = W(g, i, n), b = W(g, j, m);
      const bool st = probe_st(a, b, 60).verdict == ProbeVerdict::ConsistentWithHolds;
      const bool ss = probe_ss(a, b, 60).verdict == ProbeVerdict::ConsistentWithHolds;
      const bool icx = probe_icx(a, b, 60).verdict == ProbeVerdict::ConsistentWithHolds;
      const bool icv = probe_icv(a, b, 60).verdict == ProbeVerdict::ConsistentWithHolds;
      if (st) {
        ++st_pairs;
        EXPECT_TRUE(ss) << short_name(g) << " " << i << "," << n << " " << j << "," << m;
        EXPECT_TRUE(icv) << short_name(g) << " " << i << "," << n << " " << j << "," << m;
      }
      if (ss) {
        EXPECT_TRUE(icx) << short_name(g) << " " << i << "," << n << " " << j << "," << m;
      }
    }
  }
  EXPECT_GT(st_pairs, 10);
}

TEST(MonteCarlo, KnownMeans) {
  const auto id = std::vector<StarShapedFn>{StarShapedFn::power(1.0)};
  const auto est = mc_expect_starshaped(W(Reference::Uniform, 3, 7), W(Reference::Uniform, 1, 1), id, 200000, 7);
  ASSERT_EQ(est.size(), 1u);
  EXPECT_NEAR(est[0].lhs, 3.0 / 8, 3 * est[0].se_lhs);
  EXPECT_NEAR(est[0].rhs, 0.5, 3 * est[0].se_rhs);

  const auto sq = std::vector<StarShapedFn>{StarShapedFn::power(2.0)};
  const auto e2 = mc_expect_starshaped(W(Reference::Uniform, 1, 1), W(Reference::Uniform, 1, 1), sq, 200000, 8);
  EXPECT_NEAR(e2[0].lhs, 1.0 / 3, 3 * e2[0].se_lhs);
  EXPECT_FALSE(e2[0].flagged);
}

TEST(MonteCarlo, IdentityMatchesClosedFormMeans) {
  const auto id = std::vector<StarShapedFn>{StarShapedFn::power(1.0)};
  for (auto g : {Reference::Uniform, Reference::Exponential, Reference::LogLogistic1}) {
    for (auto [i, n] : {std::pair{1, 5}, std::pair{3, 8}, std::pair{4, 12}}) {
      const auto e = mc_expect_starshaped(W(g, i, n), W(g, i, n), id, 100000, 1234 + i);
      EXPECT_NEAR(e[0].lhs, expected_transformed_orderstat(g, {i, n}), 4 * e[0].se_lhs) << short_name(g);
      EXPECT_EQ(e[0].lhs, e[0].rhs);
      EXPECT_EQ(e[0].se_diff, 0.0);
    }
  }
}

TEST(MonteCarlo, StarShapedFamilyOnSsHoldsPair) {
  const OrderStatSpec a(8, 12), b(6, 10);
  ASSERT_TRUE(check_ss_dda(a, b).holds());
  const auto fns = default_star_family({0.2, 0.4, 0.6, 0.8});
  const auto est = mc_expect_starshaped({Reference::Uniform, a}, {Reference::Uniform, b}, fns, 200000, 42);
  ASSERT_EQ(est.size(), fns.size());
  for (std::size_t k = 0; k < est.size(); ++k) {
    EXPECT_GE(est[k].lhs, est[k].rhs - 3 * est[k].se_diff) << fns[k].label();
  }
}

TEST(MonteCarlo, ReproducibleForFixedSeed) {
  const auto fns = default_star_family({0.5});
  const auto a = W(Reference::Exponential, 2, 6), b = W(Reference::Exponential, 3, 9);
  const auto x = mc_expect_starshaped(a, b, fns, 100000, 5);
  const auto y = mc_expect_starshaped(a, b, fns, 100000, 5);
  const auto z = mc_expect_starshaped(a, b, fns, 100000, 6);
  for (std::size_t k = 0; k < fns.size(); ++k) {
    EXPECT_EQ(x[k].lhs, y[k].lhs);
    EXPECT_EQ(x[k].rhs, y[k].rhs);
    EXPECT_NE(x[k].lhs, z[k].lhs);
  }
}

TEST(MonteCarlo, FlagsInfiniteMean) {
  const auto id = std::vector<StarShapedFn>{StarShapedFn::power(1.0)};
  const auto e = mc_expect_starshaped(W(Reference::LogLogistic1, 4, 4), W(Reference::LogLogistic1, 1, 4), id, 100000, 3);
  EXPECT_TRUE(e[0].flagged);
}

TEST(MonteCarlo, InputValidation) {
  const auto id = std::vector<StarShapedFn>{StarShapedFn::power(1.0)};
  EXPECT_THROW(mc_expect_starshaped(W(Reference::Uniform, 1, 2), W(Reference::Uniform, 1, 2), id, 1000, 1),
               std::domain_error);
  EXPECT_THROW(mc_expect_starshaped(W(Reference::Logistic, 1, 2), W(Reference::Logistic, 1, 2), id, 100000, 1),
               std::domain_error);
  EXPECT_THROW(StarShapedFn::power(0.5), std::domain_error);
  EXPECT_THROW(StarShapedFn::ramp(-1.0), std::domain_error);
}

TEST(StarShapedFn, RatioIsNondecreasing) {
  for (const auto& f : default_star_family({0.3, 1.0, 2.5})) {
    EXPECT_EQ(f(0.0), 0.0);
    double prev = 0.0;
    for (int k = 1; k <= 400; ++k) {
      const double x = k / 100.0;
      const double r = f(x) / x;
      EXPECT_GE(r, prev - 1e-15) << f.label();
      prev = r;
    }
  }
}

TEST(Json, ProbeReportLayout) {
  const auto p = probe_ss(W(Reference::Uniform, 2, 3), W(Reference::Uniform, 3, 4), 50);
  const auto j = json::probe(p);
  EXPECT_EQ(j["order"], "ss");
  EXPECT_EQ(j["verdict"], "ViolationFound");
  EXPECT_EQ(j["x_grid"].size(), p.x_grid.size());
  const auto keys = std::vector<std::string>{"order", "verdict", "min_margin", "argmin", "grid_size", "x_grid", "margins"};
  std::size_t k = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++k) EXPECT_EQ(it.key(), keys[k]);
  EXPECT_EQ(json::number(std::numeric_limits<double>::infinity()), "inf");
}
