#include <gtest/gtest.h>

#include "sdpguard/metrics.hpp"

using namespace sdpguard;

TEST(Metrics, WorkedExample) {
  const Prf r = precision_recall_f1({1, 2, 3}, {1, 2});
  EXPECT_DOUBLE_EQ(r.precision, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(r.recall, 1.0);
  EXPECT_DOUBLE_EQ(r.f1, 0.8);
}

TEST(Metrics, EmptySetConventions) {
  Prf r = precision_recall_f1({}, {});
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.f1, 1.0);

  r = precision_recall_f1({}, {4});
  EXPECT_EQ(r.precision, 1.0);
  EXPECT_EQ(r.recall, 0.0);
  EXPECT_EQ(r.f1, 0.0);

  r = precision_recall_f1({4}, {});
  EXPECT_EQ(r.precision, 0.0);
  EXPECT_EQ(r.recall, 1.0);
  EXPECT_EQ(r.f1, 0.0);

  r = precision_recall_f1({1}, {2});
  EXPECT_EQ(r.f1, 0.0);
}

TEST(Metrics, HarmonicMean) {
  EXPECT_DOUBLE_EQ(harmonic_f1(0.5, 0.25), 2 * 0.5 * 0.25 / 0.75);
  EXPECT_EQ(harmonic_f1(0.0, 0.0), 0.0);
  EXPECT_EQ(harmonic_f1(1.0, 1.0), 1.0);
}

TEST(Metrics, MaliciousRatio) {
  SuspectSets s;
  s.suspected = {1, 3};
  s.trusted = {0, 2, 4, 5, 6, 7};
  EXPECT_DOUBLE_EQ(malicious_ratio(s), 0.25);
  EXPECT_THROW(malicious_ratio(SuspectSets{}), std::invalid_argument);
}

TEST(Metrics, BoundsOnRandomSets) {
  for (unsigned mask = 0; mask < 256; ++mask) {
    IdSet pred, truth;
    for (int b = 0; b < 4; ++b) {
      if (mask >> b & 1u) pred.insert(b);
      if (mask >> (b + 4) & 1u) truth.insert(b);
    }
    const Prf r = precision_recall_f1(pred, truth);
    EXPECT_GE(r.f1, 0.0);
    EXPECT_LE(r.f1, std::max(r.precision, r.recall) + 1e-15);
    EXPECT_GE(r.f1 + 1e-15, std::min(r.precision, r.recall) * (r.precision + r.recall > 0));
    if (pred == truth) EXPECT_EQ(r.f1, 1.0);
  }
}
