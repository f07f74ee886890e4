#include <gtest/gtest.h>

#include <boost/math/special_functions/digamma.hpp>

#include "osorder/conditions.hpp"
#include "osorder/oracle.hpp"

using namespace osorder;

namespace {

const ShapeClass& C(std::string_view name) { return parse_shape_class(name); }

constexpr std::array kIcvClasses = {"ID", "IHR", "IOR", "ILOR"};
constexpr std::array kIcxClasses = {"DD", "DHR", "DOR", "DLOR", "DRHR", "DROR"};

}  // namespace

TEST(ShapeCatalog, ParsesAndMapsDirections) {
  EXPECT_EQ(kShapeCatalog.size(), 12u);
  for (const auto& c : kShapeCatalog) EXPECT_EQ(parse_shape_class(to_string(c.name)), c);
  EXPECT_THROW(parse_shape_class("IFR"), std::invalid_argument);
  EXPECT_EQ(*bound_direction(C("IHR")), BoundDirection::UpperBound);
  EXPECT_EQ(*bound_direction(C("DD")), BoundDirection::LowerBound);
  EXPECT_FALSE(bound_direction(C("DDA")).has_value());
  EXPECT_EQ(C("DRHR").reference, Reference::NegExponential);
  EXPECT_EQ(C("DROR").reference, Reference::NegLogLogistic1);
}

TEST(CheckIcv, Examples) {
  auto v = check_icv(C("IHR"), {5, 5}, {3, 3});
  EXPECT_TRUE(v.holds());
  EXPECT_NEAR(v.lhs_witness, 1 + 1.0 / 2 + 1.0 / 3 + 1.0 / 4 + 1.0 / 5, 1e-14);
  EXPECT_NEAR(v.rhs_witness, 1 + 1.0 / 2 + 1.0 / 3, 1e-14);

  v = check_icv(C("ID"), {3, 5}, {2, 4});
  EXPECT_TRUE(v.holds());
  EXPECT_DOUBLE_EQ(v.lhs_witness, 0.5);
  EXPECT_DOUBLE_EQ(v.rhs_witness, 0.4);

  v = check_icv(C("ILOR"), {2, 3}, {1, 2});
  EXPECT_TRUE(v.holds());
  EXPECT_NEAR(v.lhs_witness, 0.0, 1e-15);
  EXPECT_NEAR(v.rhs_witness, -1.0, 1e-15);
}

TEST(CheckIcv, RankPreconditionAndFailures) {
  auto v = check_icv(C("IOR"), {2, 10}, {3, 10});
  EXPECT_EQ(v.status, VerdictStatus::Undetermined);
  EXPECT_NE(v.note.find("rank"), std::string::npos);
  v = check_icv(C("ID"), {3, 10}, {3, 5});
  EXPECT_EQ(v.status, VerdictStatus::Undetermined);
  EXPECT_THROW(check_icv(C("DD"), {1, 2}, {1, 2}), unsupported_class);
  EXPECT_THROW(check_icv(C("DDA"), {1, 2}, {1, 2}), unsupported_class);
}

TEST(CheckIcx, Examples) {
  for (int m = 1; m <= 15; ++m) {
    for (int j = 1; j <= m; ++j) {
      const auto v = check_icx(C("DRHR"), {1, 1}, {j, m});
      EXPECT_EQ(v.holds(), harmonic_sum(j, m) >= 1.0 - 1e-15) << j << "," << m;
    }
  }
  EXPECT_TRUE(check_icx(C("DRHR"), {1, 1}, {3, 10}).holds());
  EXPECT_TRUE(check_icx(C("DD"), {2, 5}, {3, 8}).holds());
  EXPECT_TRUE(check_icx(C("DOR"), {1, 2}, {2, 4}).holds());
  EXPECT_FALSE(check_icx(C("DD"), {3, 10}, {4, 13}).holds());
  EXPECT_THROW(check_icx(C("IHR"), {1, 2}, {1, 2}), unsupported_class);
}

TEST(CheckIcx, NegativeLogLogisticCondition) {
  // Means -(n-i+1)/(i-1): (2,4) -> -3, (2,3) -> -2, (2,2) -> -1, (3,5) -> -1.5.
  EXPECT_FALSE(check_icx(C("DROR"), {2, 4}, {2, 3}).holds());
  EXPECT_FALSE(check_icx(C("DROR"), {2, 3}, {3, 5}).holds());
  EXPECT_TRUE(check_icx(C("DROR"), {2, 2}, {3, 5}).holds());
  EXPECT_TRUE(check_icx(C("DROR"), {1, 3}, {1, 3}).holds());
  EXPECT_THROW(check_icx(C("DROR"), {1, 2}, {1, 5}), boundary_case);
  auto v = check_icx(C("DROR"), {1, 2}, {2, 5});
  EXPECT_FALSE(v.holds());
}

TEST(CheckIcx, LogisticUsesDigammaDifferences) {
  const auto v = check_icx(C("DLOR"), {2, 7}, {4, 9});
  EXPECT_NEAR(v.lhs_witness, boost::math::digamma(2.0) - boost::math::digamma(6.0), 1e-13);
  EXPECT_NEAR(v.rhs_witness, boost::math::digamma(4.0) - boost::math::digamma(6.0), 1e-13);
}

TEST(MeanComparisons, Examples) {
  EXPECT_TRUE(check_mean_dominated_by_orderstat(C("IHR"), {10, 10}).holds());
  EXPECT_FALSE(check_mean_dominated_by_orderstat(C("ID"), {5, 10}).holds());
  const auto v = check_mean_dominated_by_orderstat(C("ILOR"), {6, 10});
  EXPECT_TRUE(v.holds());
  EXPECT_NEAR(v.lhs_witness, 0.2, 1e-14);
  EXPECT_TRUE(check_mean_dominates_orderstat(C("DRHR"), {1, 1}).holds());
  EXPECT_TRUE(check_mean_dominates_orderstat(C("DHR"), {1, 10}).holds());
  EXPECT_FALSE(check_mean_dominates_orderstat(C("DD"), {6, 10}).holds());
  EXPECT_THROW(check_mean_dominated_by_orderstat(C("IOR"), {1, 2}), unsupported_class);
  EXPECT_THROW(check_mean_dominates_orderstat(C("DOR"), {1, 2}), unsupported_class);
}

TEST(MeanComparisons, SpecializationCoherence) {
  for (int n = 1; n <= 12; ++n) {
    for (int i = 1; i <= n; ++i) {
      for (auto name : {"ID", "ILOR", "IHR"}) {
        const auto a = check_mean_dominated_by_orderstat(C(name), {i, n});
        const auto b = check_icv(C(name), {i, n}, {1, 1});
        EXPECT_EQ(a.status, b.status);
        EXPECT_EQ(a.lhs_witness, b.lhs_witness);
      }
      for (auto name : {"DD", "DLOR", "DHR", "DRHR"}) {
        const auto a = check_mean_dominates_orderstat(C(name), {i, n});
        const auto b = check_icx(C(name), {1, 1}, {i, n});
        EXPECT_EQ(a.status, b.status);
        EXPECT_EQ(a.rhs_witness, b.rhs_witness);
      }
    }
  }
}

TEST(Conditions, Reflexivity) {
  for (int n = 1; n <= 10; ++n) {
    for (int i = 1; i <= n; ++i) {
      for (auto name : kIcvClasses) EXPECT_TRUE(check_icv(C(name), {i, n}, {i, n}).holds());
      for (auto name : kIcxClasses) EXPECT_TRUE(check_icx(C(name), {i, n}, {i, n}).holds());
    }
  }
}

TEST(Conditions, HazardRateSymmetry) {
  for (int n = 1; n <= 10; ++n) {
    for (int m = 1; m <= 10; ++m) {
      for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= m; ++j) {
          if (i == j && n == m) continue;
          const auto v = check_icv(C("IHR"), {i, n}, {j, m});
          const auto x = check_icx(C("DHR"), {i, n}, {j, m});
          EXPECT_EQ(v.lhs_witness, x.lhs_witness);
          EXPECT_EQ(v.rhs_witness, x.rhs_witness);
          if (i == j) {
            EXPECT_EQ(v.holds(), x.holds());
          }
        }
      }
    }
  }
}

TEST(Conditions, HoldsVerdictsSurviveTheProbe) {
  int holds = 0;
  for (int n = 1; n <= 7; ++n) {
    for (int m = 1; m <= 7; ++m) {
      for (int i = 1; i <= n; ++i) {
        for (int j = 1; j <= m; ++j) {
          for (auto name : kIcvClasses) {
            const auto& c = C(name);
            if (!check_icv(c, {i, n}, {j, m}).holds()) continue;
            ++holds;
            const auto p = probe_icv({c.reference, {i, n}}, {c.reference, {j, m}}, 60);
            EXPECT_EQ(p.verdict, ProbeVerdict::ConsistentWithHolds) << name << " " << i << n << j << m << " " << p.min_margin;
          }
          for (auto name : kIcxClasses) {
            const auto& c = C(name);
            OrderVerdict v;
            try {
              v = check_icx(c, {i, n}, {j, m});
            } catch (const boundary_case&) {
              continue;
            }
            if (!v.holds()) continue;
            ++holds;
            const auto p = probe_icx({c.reference, {i, n}}, {c.reference, {j, m}}, 60);
            EXPECT_EQ(p.verdict, ProbeVerdict::ConsistentWithHolds) << name << " " << i << n << j << m << " " << p.min_margin;
          }
        }
      }
    }
  }
  EXPECT_GT(holds, 500);
}
