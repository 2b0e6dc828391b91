#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "spinsteer/json_io.h"
#include "test_support.h"

namespace spinsteer::io {
namespace {

using testing::Rng;

TEST(MatrixJson, BitExactRoundTrip) {
  Rng rng(90);
  for (int n : {2, 3, 4}) {
    const SquareMatrix x = rng.haar_unitary(n);
    const SquareMatrix back = matrix_from_json(json::parse(matrix_to_json(x).dump()));
    ASSERT_EQ(back.rows(), n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) EXPECT_EQ(back(i, k), x(i, k));
    }
  }
}

TEST(MatrixJson, LayoutAndOptionalImaginary) {
  SquareMatrix x(2, 2);
  x << cplx(1, 2), cplx(3, 4), cplx(5, 6), cplx(7, 8);
  const json j = matrix_to_json(x);
  EXPECT_EQ(j["dim"], 2);
  EXPECT_EQ(j["re"][0][1], 3.0);
  EXPECT_EQ(j["im"][1][0], 6.0);
  const SquareMatrix real = matrix_from_json(json::parse(R"({"dim":2,"re":[[0,1],[-1,0]]})"));
  EXPECT_EQ(real(1, 0), cplx(-1, 0));
  EXPECT_THROW(matrix_from_json(json::parse(R"({"dim":2,"re":[[0,1]]})")), std::invalid_argument);
  EXPECT_THROW(matrix_from_json(json::parse(R"({"re":[[0]]})")), std::invalid_argument);
}

TEST(SequenceJson, RoundTrip) {
  FactorSequence seq;
  seq.steps = {{Generator::Z1, 0.25}, {Generator::Z2, 1.0 / 3.0}, {Generator::Bz, 2.0}};
  const FactorSequence back = sequence_from_json(json::parse(sequence_to_json(seq).dump()));
  ASSERT_EQ(back.steps.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(back.steps[i].gen, seq.steps[i].gen);
    EXPECT_EQ(back.steps[i].duration, seq.steps[i].duration);
  }
  EXPECT_THROW(sequence_from_json(json::parse(R"({"steps":[{"gen":"Q","t":1}]})")), std::invalid_argument);
  EXPECT_THROW(sequence_from_json(json::parse(R"({"steps":[{"gen":"Z1","t":-1}]})")), std::invalid_argument);
}

TEST(ScheduleJson, RoundTripWithModulation) {
  PulseSchedule s;
  s.segments.push_back({0.5, 0.1, -0.2, {}});
  PulseSegment m;
  m.dt = 1.0 / 7.0;
  m.mod = Modulation{0.3, 1.3, 0.25, 1.0};
  s.segments.push_back(m);
  const json j = schedule_to_json(s);
  EXPECT_EQ(j["total_time"], s.total_time());
  const PulseSchedule back = schedule_from_json(json::parse(j.dump()));
  ASSERT_EQ(back.segments.size(), 2u);
  EXPECT_EQ(back.segments[0].uy, -0.2);
  ASSERT_TRUE(back.segments[1].mod);
  EXPECT_EQ(back.segments[1].dt, 1.0 / 7.0);
  EXPECT_EQ(back.segments[1].mod->omega, 1.3);
  EXPECT_EQ(back.segments[1].mod->sign_uy, 1.0);
}

TEST(SpinParamsJson, RoundTripAndIsingDefault) {
  twospin::SpinParams p = twospin::SpinParams::ising(1.0, 2.0, 3.0, 0.4, 0.5);
  p.abc = {0.1, 0.2, 0.3};
  const twospin::SpinParams back = spin_params_from_json(spin_params_to_json(p));
  EXPECT_EQ(back.gamma2, 2.0);
  EXPECT_EQ(back.uz_bar, 0.4);
  EXPECT_EQ(back.abc[1], 0.2);
  const auto ising = spin_params_from_json(json::parse(R"({"gamma1":1,"gamma2":1,"J":6})"));
  EXPECT_EQ(ising.abc[0], 0.0);
  EXPECT_EQ(ising.abc[2], 6.0);
  EXPECT_THROW(spin_params_from_json(json::parse(R"({"gamma1":1,"J":6})")), std::invalid_argument);
}

TEST(Files, WriteThenRead) {
  const auto path = std::filesystem::temp_directory_path() / "spinsteer_json_io_test.json";
  const json j = {{"a", 0.1}, {"b", {1, 2, 3}}};
  write_json_file(path.string(), j);
  EXPECT_EQ(read_json_file(path.string()), j);
  std::filesystem::remove(path);
  EXPECT_THROW(read_json_file(path.string()), std::runtime_error);
}

}  // namespace
}  // namespace spinsteer::io
