#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "srirnn/cell.hpp"
#include "srirnn/error.hpp"
#include "test_util.hpp"

using namespace srirnn;

namespace {

double sigmoid(double v) { return 1.0 / (1.0 + std::exp(-v)); }

// Gate equations written out element by element, straight from the model tensors.
CellState oracle_step(const RnnModel& m, const CellState& s, double x) {
  const int H = m.hidden_size;
  auto pre = [&](int row, bool with_recurrent) {
    double v = m.w_ih(row, 0) * x + m.b_ih[row];
    if (with_recurrent) {
      v += m.b_hh[row];
      for (int j = 0; j < H; ++j) v += m.w_hh(row, j) * s.h[std::size_t(j)];
    }
    return v;
  };
  CellState out = s;
  if (m.cell_type == CellType::LSTM) {
    for (int u = 0; u < H; ++u) {
      const double i = sigmoid(pre(u, true));
      const double f = sigmoid(pre(H + u, true));
      const double g = std::tanh(pre(2 * H + u, true));
      const double o = sigmoid(pre(3 * H + u, true));
      const double c = f * s.c[std::size_t(u)] + i * g;
      out.c[std::size_t(u)] = c;
      out.h[std::size_t(u)] = o * std::tanh(c);
    }
  } else {
    for (int u = 0; u < H; ++u) {
      const double r = sigmoid(pre(u, true));
      const double z = sigmoid(pre(H + u, true));
      double hn = m.b_hh[2 * H + u];
      for (int j = 0; j < H; ++j) hn += m.w_hh(2 * H + u, j) * s.h[std::size_t(j)];
      const double n = std::tanh(pre(2 * H + u, false) + r * hn);
      out.h[std::size_t(u)] = (1.0 - z) * n + z * s.h[std::size_t(u)];
    }
  }
  return out;
}

double oracle_output(const RnnModel& m, const CellState& s, double x) {
  double y = m.b_out;
  for (int j = 0; j < m.hidden_size; ++j) y += m.w_out[j] * s.h[std::size_t(j)];
  return m.skip ? y + x : y;
}

std::vector<double> oracle_process(const RnnModel& m, const std::vector<double>& x) {
  CellState s = CellState::zeros(m);
  std::vector<double> y;
  for (double v : x) {
    s = oracle_step(m, s, v);
    y.push_back(oracle_output(m, s, v));
  }
  return y;
}

}  // namespace

TEST(LstmStep, ZeroModelZeroStateStaysZero) {
  const RnnModel m = zero_model(CellType::LSTM, 3, false);
  const CellState s = lstm_step(m, CellState::zeros(m), 1.0);
  for (int u = 0; u < 3; ++u) {
    EXPECT_EQ(s.h[std::size_t(u)], 0.0);
    EXPECT_EQ(s.c[std::size_t(u)], 0.0);
  }
}

TEST(LstmStep, ZeroModelUnitCellState) {
  const RnnModel m = zero_model(CellType::LSTM, 4, false);
  CellState s = CellState::zeros(m);
  s.c.assign(4, 1.0);
  const CellState next = lstm_step(m, s, -0.7);
  for (int u = 0; u < 4; ++u) {
    EXPECT_DOUBLE_EQ(next.c[std::size_t(u)], 0.5);
    EXPECT_NEAR(next.h[std::size_t(u)], 0.2310585786300049, 1e-15);
  }
}

TEST(LstmStep, MatchesScalarOracle) {
  const RnnModel m = random_model(CellType::LSTM, 12, 11, 2.0);
  CellState s = CellState::zeros(m);
  const auto x = fixtures::uniform_noise(50, 5);
  for (double v : x) {
    const CellState expect = oracle_step(m, s, v);
    s = lstm_step(m, s, v);
    for (std::size_t u = 0; u < 12; ++u) {
      ASSERT_NEAR(s.h[u], expect.h[u], 1e-12);
      ASSERT_NEAR(s.c[u], expect.c[u], 1e-12);
    }
  }
}

TEST(LstmStep, RejectsWrongStateShape) {
  const RnnModel m = zero_model(CellType::LSTM, 3, false);
  CellState s = CellState::zeros(m);
  s.c.resize(2);
  try {
    lstm_step(m, s, 0.0);
    FAIL() << "expected a shape error";
  } catch (const ShapeError& e) {
    EXPECT_EQ(e.tensor(), "state.c");
    EXPECT_EQ(e.code(), "shape_mismatch");
  }
  EXPECT_THROW(lstm_step(zero_model(CellType::GRU, 3, false), CellState::zeros(m), 0.0), DomainError);
}

TEST(GruStep, ZeroModel) {
  const RnnModel m = zero_model(CellType::GRU, 3, false);
  EXPECT_EQ(gru_step(m, CellState::zeros(m), 0.4).h, std::vector<double>(3, 0.0));
  CellState s = CellState::zeros(m);
  s.h = {0.2, -0.6, 0.9};
  const CellState next = gru_step(m, s, 0.4);
  for (std::size_t u = 0; u < 3; ++u) EXPECT_DOUBLE_EQ(next.h[u], 0.5 * s.h[u]);
}

TEST(GruStep, MatchesScalarOracle) {
  const RnnModel m = random_model(CellType::GRU, 9, 4, 2.0);
  CellState s = CellState::zeros(m);
  for (double v : fixtures::uniform_noise(50, 8)) {
    const CellState expect = oracle_step(m, s, v);
    s = gru_step(m, s, v);
    for (std::size_t u = 0; u < 9; ++u) ASSERT_NEAR(s.h[u], expect.h[u], 1e-12);
  }
}

TEST(GruStep, ResetGateScalesHiddenBias) {
  // Only the candidate's hidden bias is nonzero, and the reset gate is driven to 0:
  // the candidate then sees none of it.
  RnnModel m = zero_model(CellType::GRU, 1, false);
  m.b_hh[2] = 5.0;
  m.b_ih[0] = -800.0;
  EXPECT_DOUBLE_EQ(gru_step(m, CellState::zeros(m), 0.0).h[0], 0.0);
  m.b_ih[0] = 800.0;
  EXPECT_NEAR(gru_step(m, CellState::zeros(m), 0.0).h[0], 0.5 * std::tanh(5.0), 1e-15);
}

TEST(OutputHead, Examples) {
  RnnModel m = zero_model(CellType::GRU, 3, true);
  const std::vector<double> zero(3, 0.0);
  EXPECT_DOUBLE_EQ(output_head(m, zero, 0.3), 0.3);
  m.skip = false;
  m.w_out << 1.0, 0.0, 0.0;
  m.b_out = 2.0;
  EXPECT_DOUBLE_EQ(output_head(m, std::vector<double>{5.0, 1.0, 1.0}, 0.3), 7.0);
  EXPECT_DOUBLE_EQ(output_head(m, zero, 0.3), 2.0);
  EXPECT_THROW(output_head(m, std::vector<double>(2, 0.0), 0.0), ShapeError);
}

TEST(ProcessBaseline, SkipOnlyModelIsIdentity) {
  const RnnModel m = zero_model(CellType::LSTM, 4, true);
  const AudioBuffer x = fixtures::noise_buffer(300, 44100.0, 1);
  EXPECT_EQ(process_baseline(m, x).samples, x.samples);
}

TEST(ProcessBaseline, EmptyInput) {
  const RnnModel m = random_model(CellType::LSTM, 4, 1);
  const AudioBuffer y = process_baseline(m, AudioBuffer{{}, 44100.0});
  EXPECT_TRUE(y.empty());
  EXPECT_EQ(y.rate, 44100.0);
}

TEST(ProcessBaseline, MatchesSampleLoopOracle) {
  for (CellType type : {CellType::LSTM, CellType::GRU}) {
    const RnnModel m = random_model(type, 8, 21, 3.0, true);
    const AudioBuffer x = fixtures::noise_buffer(1000, 44100.0, 2, 0.5);
    const auto expect = oracle_process(m, x.samples);
    const AudioBuffer y = process_baseline(m, x);
    EXPECT_LE(fixtures::max_abs_diff(y.samples, expect), 1e-12) << to_string(type);
  }
}

TEST(ProcessBaseline, RejectsOtherRates) {
  const RnnModel m = random_model(CellType::LSTM, 4, 1);
  try {
    process_baseline(m, fixtures::noise_buffer(10, 48000.0, 1));
    FAIL();
  } catch (const RateError& e) {
    EXPECT_NE(std::string(e.what()).find("process_adapted"), std::string::npos);
  }
}

TEST(ProcessBaseline, SinglePrecisionTracksDouble) {
  const RnnModel m = random_model(CellType::LSTM, 16, 3);
  const AudioBuffer x = fixtures::noise_buffer(2000, 44100.0, 4, 0.5);
  const auto d = process_baseline(m, x, Precision::Double).samples;
  const auto f = process_baseline(m, x, Precision::Single).samples;
  EXPECT_LE(fixtures::relative_rms(d, f), 1e-5);
  EXPECT_GT(fixtures::relative_rms(d, f), 0.0);
}

TEST(BaselineStream, Deterministic) {
  const RnnModel m = random_model(CellType::GRU, 10, 9);
  const AudioBuffer x = fixtures::noise_buffer(500, 44100.0, 3);
  EXPECT_EQ(process_baseline(m, x).samples, process_baseline(m, x).samples);
}

TEST(BaselineStream, ChunkedEqualsWhole) {
  const RnnModel m = random_model(CellType::LSTM, 6, 12);
  const auto x = fixtures::uniform_noise(777, 6);
  std::vector<double> whole(x.size()), chunked(x.size());
  BaselineStream<double> a(m);
  a.process(x, whole);
  BaselineStream<double> b(m);
  const std::size_t cuts[] = {0, 1, 2, 100, 101, 500, 777};
  for (std::size_t i = 0; i + 1 < std::size(cuts); ++i) {
    const std::size_t len = cuts[i + 1] - cuts[i];
    b.process(std::span<const double>(x).subspan(cuts[i], len),
              std::span<double>(chunked).subspan(cuts[i], len));
  }
  EXPECT_EQ(whole, chunked);
}

TEST(BaselineStream, HiddenStateBounded) {
  for (CellType type : {CellType::LSTM, CellType::GRU}) {
    const RnnModel m = random_model(type, 8, 5, 50.0);
    BaselineStream<double> s(m);
    for (double v : fixtures::uniform_noise(3000, 7, 10.0)) {
      s.step(v);
      for (int j = 0; j < m.hidden_size; ++j) ASSERT_LE(std::abs(s.state()[std::size_t(j)]), 1.0);
    }
  }
}

TEST(RnnModel, ValidateCatchesDefects) {
  RnnModel m = random_model(CellType::LSTM, 4, 1);
  EXPECT_NO_THROW(m.validate());
  m.w_hh.resize(16, 3);
  EXPECT_THROW(m.validate(), ShapeError);
  m = random_model(CellType::LSTM, 4, 1);
  m.b_ih[2] = std::nan("");
  EXPECT_THROW(m.validate(), DomainError);
  m = random_model(CellType::GRU, 4, 1);
  m.input_size = 2;
  EXPECT_THROW(m.validate(), Error);
}

TEST(RnnModel, ParseNames) {
  EXPECT_EQ(parse_cell_type("LSTM"), CellType::LSTM);
  EXPECT_EQ(parse_cell_type("gru"), CellType::GRU);
  EXPECT_THROW(parse_cell_type("rnn"), Error);
  EXPECT_EQ(parse_precision("single"), Precision::Single);
  EXPECT_EQ(parse_precision("float"), Precision::Single);
  EXPECT_EQ(parse_precision("double"), Precision::Double);
}

TEST(RnnModel, SeededModelsRepeat) {
  const RnnModel a = random_model(CellType::GRU, 5, 77);
  const RnnModel b = random_model(CellType::GRU, 5, 77);
  EXPECT_EQ(a.w_hh, b.w_hh);
  EXPECT_NE(a.w_hh, random_model(CellType::GRU, 5, 78).w_hh);
  const RnnModel s = synthetic_model(CellType::LSTM, 5, 77);
  EXPECT_DOUBLE_EQ(s.b_ih[5], random_model(CellType::LSTM, 5, 77, kSyntheticInputScale).b_ih[5] +
                                  kSyntheticRetentionBias);
}
