#include <gtest/gtest.h>

#include "gcs/serialization.hpp"
#include "helpers.hpp"

using namespace gcs;

TEST(Serialization, LosslessRoundTrip) {
  for (int n : {2, 3, 6}) {
    const State s = testing_support::sample(n, 8);
    const State back = state_from_string(state_to_string(s));
    EXPECT_EQ(back, s);  // bitwise
  }
}

TEST(Serialization, Layout) {
  const State s = testing_support::two_body(1.0, -1.0, 0.5, -0.5, 0.25, -0.125);
  const auto j = state_to_json(s);
  EXPECT_EQ(j.at("n"), 2);
  EXPECT_EQ(j.at("S_upper").size(), 1u);
  EXPECT_DOUBLE_EQ(j.at("T_upper")[0].get<double>(), -0.125);
}

TEST(Serialization, RejectsMalformed) {
  EXPECT_THROW(state_from_string("{\"n\": 2, \"u\": [1, 0]}"), Error);
  EXPECT_THROW(state_from_string("{\"n\": 2, \"u\": [1], \"v\": [0, 0], \"S_upper\": [0], \"T_upper\": [0]}"), Error);
  EXPECT_THROW(state_from_string("not json"), Error);
}
