#include <gtest/gtest.h>

#include <thread>

#include "actint/errors.hpp"
#include "actint/external_model.hpp"
#include "support.hpp"

namespace actint {
namespace {

std::unique_ptr<ExternalModelSession> stub(std::vector<std::string> args, int handshake_ms = 10'000) {
  ExternalModelConfig cfg;
  cfg.args = std::move(args);
  cfg.handshake_timeout = std::chrono::milliseconds(handshake_ms);
  cfg.request_timeout = std::chrono::milliseconds(10'000);
  return external_model_session(ACTINT_STUB_PATH, cfg);
}

Observation echo_observation(double p) {
  std::vector<double> v(8, 0.0);
  v[0] = p;
  return Observation::from_channels("echo-obs", {{"echo", TimeSeries(v, 1.0, "echo")}}, 1.0, std::nullopt);
}

TEST(ExternalModel, ConstantStub) {
  auto s = stub({"constant", "0.5"});
  EXPECT_EQ(s->name(), "stub-constant");
  const auto obs = test::random_observation("o", {"a"}, 32, 1);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(s->predict_proba(obs).probability, 0.5);
}

TEST(ExternalModel, PassThroughValue) {
  auto s = stub({"constant", "0.73"});
  const auto p = s->predict_proba(test::random_observation("o", {"a"}, 32, 1));
  EXPECT_EQ(p.label, Label::Positive);
  EXPECT_EQ(p.probability, 0.73);
}

TEST(ExternalModel, EchoRoundTripIsExact) {
  auto s = stub({"echo"});
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const double p = rng.uniform01();
    EXPECT_EQ(s->predict_proba(echo_observation(p)).probability, p);
  }
  EXPECT_EQ(s->predict_proba(echo_observation(0.1 + 0.2)).probability, 0.1 + 0.2);
}

TEST(ExternalModel, OutOfRangeProbabilityIsProtocolError) {
  auto s = stub({"constant", "1.2"});
  try {
    s->predict_proba(test::random_observation("o", {"a"}, 32, 1));
    FAIL();
  } catch (const ProtocolError& e) {
    EXPECT_NE(std::string(e.what()).find("probability out of range"), std::string::npos);
  }
}

TEST(ExternalModel, ChildExitNamesRequestInFlight) {
  auto s = stub({"exit-after", "2"});
  const auto obs = test::random_observation("o", {"a"}, 32, 1);
  s->predict_proba(obs);
  s->predict_proba(obs);
  try {
    s->predict_proba(obs);
    FAIL();
  } catch (const ChildExitError& e) {
    ASSERT_TRUE(e.request_id().has_value());
    EXPECT_NE(std::string(e.what()).find(*e.request_id()), std::string::npos);
    EXPECT_EQ(e.exit_status(), 3);
  }
}

TEST(ExternalModel, HandshakeTimeout) {
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_THROW(stub({"silent"}, 300), HandshakeTimeoutError);
  EXPECT_LT(std::chrono::steady_clock::now() - t0, std::chrono::seconds(5));
}

TEST(ExternalModel, MalformedResponsesAreProtocolErrors) {
  const auto obs = test::random_observation("o", {"a"}, 32, 1);
  for (const char* mode : {"bad-json", "wrong-id", "unknown-type"}) {
    auto s = stub({mode});
    EXPECT_THROW(s->predict_proba(obs), ProtocolError) << mode;
  }
}

TEST(ExternalModel, TransportAndProtocolErrorsAreDistinct) {
  static_assert(!std::is_base_of_v<TransportError, ProtocolError>);
  static_assert(std::is_base_of_v<TransportError, ChildExitError>);
  static_assert(std::is_base_of_v<TransportError, HandshakeTimeoutError>);
}

TEST(ExternalModel, MissingExecutable) {
  EXPECT_THROW(external_model_session("/nonexistent/model-binary", {}), TransportError);
}

TEST(ExternalModel, CloseIsIdempotent) {
  auto s = stub({"constant", "0.2"});
  s->close();
  s->close();
  EXPECT_FALSE(s->is_open());
  EXPECT_THROW(s->predict_proba(test::random_observation("o", {"a"}, 32, 1)), TransportError);
}

TEST(ExternalModel, ConcurrentCallersAreSerialized) {
  auto s = stub({"echo"});
  std::vector<std::jthread> threads;
  std::atomic<int> mismatches{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      for (int i = 0; i < 20; ++i) {
        const double p = (t * 20 + i) / 100.0;
        if (s->predict_proba(echo_observation(p)).probability != p) ++mismatches;
      }
    });
  }
  threads.clear();
  EXPECT_EQ(mismatches.load(), 0);
}

TEST(WireFormat, ObservationRoundTrip) {
  const auto obs = test::random_observation("o", {"a", "b"}, 50, 2, 13.5);
  const auto back = observation_from_wire_json(observation_to_wire_json(obs), "o", std::nullopt);
  EXPECT_EQ(back, obs);
  // Without a roc block the ROC is recomputed.
  const auto stripped = R"({"time_of_day":1,"channels":{"c":{"rate_hz":1,"values":[0,1,2,3]}}})";
  const auto o = observation_from_wire_json(stripped, "x", std::nullopt);
  EXPECT_EQ(o.roc("c")[0], 1.0);
}

}  // namespace
}  // namespace actint
