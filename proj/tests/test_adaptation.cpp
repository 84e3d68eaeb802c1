#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "srirnn/adaptation.hpp"
#include "srirnn/error.hpp"
#include "test_util.hpp"

using namespace srirnn;

namespace {

using State = std::vector<double>;

State concat(const CellState& s) {
  State v = s.h;
  v.insert(v.end(), s.c.begin(), s.c.end());
  return v;
}

CellState split(const RnnModel& m, const State& v) {
  CellState s;
  const auto H = std::size_t(m.hidden_size);
  s.h.assign(v.begin(), v.begin() + std::ptrdiff_t(H));
  if (m.cell_type == CellType::LSTM) s.c.assign(v.begin() + std::ptrdiff_t(H), v.end());
  return s;
}

State cell(const RnnModel& m, const State& prev, double x) {
  const CellState s = split(m, prev);
  return concat(m.cell_type == CellType::LSTM ? lstm_step(m, s, x) : gru_step(m, s, x));
}

// Each method written directly from its defining recursion, with the whole
// state history kept and negative times reading as zero.
std::vector<double> oracle_adapted(const RnnModel& m, Method kind, double M,
                                   const std::vector<double>& x) {
  const auto S = std::size_t(m.state_size());
  std::vector<State> hist;
  auto h = [&](long n) { return n < 0 ? State(S, 0.0) : hist[std::size_t(n)]; };
  State a(S, 0.0);
  std::vector<double> y;
  for (long n = 0; n < long(x.size()); ++n) {
    const double xn = x[std::size_t(n)];
    State next(S);
    const bool integer = M == std::floor(M);
    if (kind == Method::Naive) {
      next = cell(m, h(n - 1), xn);
    } else if (kind == Method::STN) {
      const State f = cell(m, h(n - 1), xn);
      const State p = h(n - 1);
      for (std::size_t i = 0; i < S; ++i) next[i] = (1.0 - 1.0 / M) * p[i] + f[i] / M;
    } else if (kind == Method::Delay || integer) {
      next = cell(m, h(n - long(std::lround(M))), xn);
    } else if (kind == Method::LIDL) {
      const long w = long(std::floor(M));
      const double d = M - double(w);
      State in(S);
      for (std::size_t i = 0; i < S; ++i) in[i] = (1.0 - d) * h(n - w)[i] + d * h(n - w - 1)[i];
      next = cell(m, in, xn);
    } else if (kind == Method::APDL) {
      const long w = long(std::floor(M));
      const double d = M - double(w);
      const double eta = (1.0 - d) / (1.0 + d);
      for (std::size_t i = 0; i < S; ++i) a[i] = eta * (h(n - w)[i] - a[i]) + h(n - w - 1)[i];
      next = cell(m, a, xn);
    } else {
      const long off = long(std::floor(std::abs(M - 2.0)));
      const long gamma = 1 + off;
      const double d = M - double(off) - 1.0;
      double l[4];
      for (int k = 0; k < 4; ++k) {
        l[k] = 1.0;
        for (int j = 0; j < 4; ++j) {
          if (j != k) l[k] *= (d - j) / double(k - j);
        }
      }
      State in(S, 0.0);
      for (int k = 0; k < 4; ++k) {
        const State past = h(n - k - gamma);
        for (std::size_t i = 0; i < S; ++i) in[i] += l[k] * past[i];
      }
      next = cell(m, in, xn);
    }
    hist.push_back(next);
    y.push_back(output_head(m, split(m, next).h, xn));
  }
  return y;
}

}  // namespace

TEST(AllpassEta, Values) {
  EXPECT_EQ(allpass_eta(0.0), 1.0);
  EXPECT_EQ(allpass_eta(1.0), 0.0);
  EXPECT_NEAR(allpass_eta(0.0884), 0.837560, 5e-7);
  EXPECT_THROW(allpass_eta(-0.01), DomainError);
  EXPECT_THROW(allpass_eta(1.01), DomainError);
}

TEST(LagrangeKernel, KnownValues) {
  EXPECT_EQ(lagrange_kernel(0.0), (std::array<double, 4>{1.0, 0.0, 0.0, 0.0}));
  EXPECT_EQ(lagrange_kernel(1.0), (std::array<double, 4>{0.0, 1.0, 0.0, 0.0}));
  const auto l = lagrange_kernel(1.5);
  const double expect[] = {-0.0625, 0.5625, 0.5625, -0.0625};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(l[std::size_t(k)], expect[k], 1e-15);
  EXPECT_THROW(lagrange_kernel(2.5), DomainError);
}

TEST(LagrangeKernel, ReproducesCubicsAndSumsToOne) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coef(-2.0, 2.0), pos(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double c[4] = {coef(rng), coef(rng), coef(rng), coef(rng)};
    auto p = [&](double t) { return c[0] + t * (c[1] + t * (c[2] + t * c[3])); };
    const double d = pos(rng);
    const auto l = lagrange_kernel(d);
    double sum = 0.0, value = 0.0;
    for (int k = 0; k < 4; ++k) {
      sum += l[std::size_t(k)];
      value += l[std::size_t(k)] * p(k);
    }
    ASSERT_NEAR(sum, 1.0, 1e-14);
    ASSERT_NEAR(value, p(d), 1e-12);
  }
}

TEST(CidlParams, Examples) {
  auto p = cidl_params(2.0);
  EXPECT_EQ(p.gamma, 1);
  EXPECT_DOUBLE_EQ(p.delta, 1.0);
  p = cidl_params(1.0884);
  EXPECT_EQ(p.gamma, 1);
  EXPECT_NEAR(p.delta, 0.0884, 1e-15);
  p = cidl_params(4.0);
  EXPECT_EQ(p.gamma, 3);
  EXPECT_DOUBLE_EQ(p.delta, 1.0);
  p = cidl_params(96000.0 / 44100.0);
  EXPECT_EQ(p.gamma, 1);
  EXPECT_NEAR(p.delta, 96000.0 / 44100.0 - 1.0, 1e-15);
  EXPECT_THROW(cidl_params(1.0), DomainError);
  EXPECT_THROW(cidl_params(0.5), DomainError);
}

TEST(CidlParams, WindowCentredOnTheTargetDelay) {
  // Taps gamma..gamma+3 sit at delays around M; the fractional point is M itself.
  for (double M : {1.0884, 1.7, 2.0, 2.1768, 3.3, 4.0, 7.25}) {
    const auto p = cidl_params(M);
    EXPECT_NEAR(double(p.gamma) + p.delta, M, 1e-12);
    EXPECT_GE(p.delta, 0.0);
    EXPECT_LE(p.delta, 2.0);
  }
}

TEST(AdaptationMethod, DerivedConstants) {
  const AdaptationMethod lidl(Method::LIDL, 2.1768);
  EXPECT_FALSE(lidl.is_pure_delay());
  EXPECT_EQ(lidl.whole_delay(), 2);
  EXPECT_NEAR(lidl.delta(), 0.1768, 1e-12);
  const AdaptationMethod apdl(Method::APDL, 48000.0 / 44100.0);
  EXPECT_NEAR(apdl.eta(), allpass_eta(48000.0 / 44100.0 - 1.0), 1e-15);
  for (Method m : {Method::LIDL, Method::APDL, Method::CIDL, Method::Delay}) {
    const AdaptationMethod a(m, 3.0);
    EXPECT_TRUE(a.is_pure_delay());
    EXPECT_EQ(a.delay(), 3);
  }
  EXPECT_EQ(AdaptationMethod(Method::Delay, 2.4).delay(), 2);
  EXPECT_EQ(AdaptationMethod(Method::Delay, 2.5).delay(), 3);
  EXPECT_EQ(AdaptationMethod(Method::CIDL, 2.1768).history_depth(), 4);
  EXPECT_THROW(AdaptationMethod(Method::STN, 0.9), DomainError);
  EXPECT_THROW(AdaptationMethod(Method::CIDL, std::nan("")), DomainError);
}

TEST(AdaptationMethod, ParseNames) {
  for (Method m : kAllMethods) EXPECT_EQ(parse_method(to_string(m)), m);
  EXPECT_EQ(parse_method("CIDL"), Method::CIDL);
  EXPECT_THROW(parse_method("sinc"), ParseError);
}

TEST(StateRing, ZeroFilledAndCircular) {
  StateRing<double> ring(2, 3);
  EXPECT_EQ(ring.past(1)[0], 0.0);
  EXPECT_EQ(ring.past(2)[1], 0.0);
  for (int n = 1; n <= 5; ++n) {
    auto slot = ring.next_slot();
    EXPECT_NE(slot.data(), ring.past(1).data());
    EXPECT_NE(slot.data(), ring.past(2).data());
    slot[0] = n;
    slot[1] = -n;
    ring.commit();
    EXPECT_EQ(ring.past(1)[0], n);
    if (n > 1) EXPECT_EQ(ring.past(2)[1], -(n - 1));
  }
  ring.reset();
  EXPECT_EQ(ring.past(1)[0], 0.0);
  EXPECT_THROW(StateRing<double>(2, 1), DomainError);
}

TEST(StateAdapter, CidlCapacityReachesDeepestTap) {
  const AdaptationMethod cidl(Method::CIDL, 4.5);
  StateAdapter<double> adapter(cidl, 3);
  EXPECT_EQ(adapter.history().capacity(), std::size_t(cidl.gamma() + 4));
}

TEST(StateAdapter, CidlInterpolatesCubicTrajectories) {
  // Feed h^n = p(n) per component; the delayed read must be p(n - M).
  for (double M : {1.0884, 2.1768, 3.6}) {
    const AdaptationMethod cidl(Method::CIDL, M);
    StateAdapter<double> adapter(cidl, 2);
    auto p0 = [](double t) { return 0.3 + 0.01 * t - 2e-4 * t * t + 3e-6 * t * t * t; };
    auto p1 = [](double t) { return -1.0 + 0.5e-3 * t * t; };
    for (int n = 0; n < 40; ++n) {
      const auto delayed = adapter.delayed_state();
      if (n >= cidl.gamma() + 3) {
        ASSERT_NEAR(delayed[0], p0(n - M), 1e-12) << M;
        ASSERT_NEAR(delayed[1], p1(n - M), 1e-12) << M;
      }
      auto out = adapter.cell_output();
      out[0] = p0(n);
      out[1] = p1(n);
      adapter.commit();
    }
  }
}

TEST(StateAdapter, EmbeddedAllpassHasUnitMagnitude) {
  // Unit pulse into the ring, no recurrence: the a^n sequence is the
  // all-pass impulse response delayed by floor(M).
  const AdaptationMethod apdl(Method::APDL, 2.37);
  StateAdapter<double> adapter(apdl, 1);
  const std::size_t n = 4096;
  std::vector<double> response(n);
  for (std::size_t i = 0; i < n; ++i) {
    response[i] = adapter.delayed_state()[0];
    adapter.cell_output()[0] = i == 0 ? 1.0 : 0.0;
    adapter.commit();
  }
  // DTFT at a handful of frequencies.
  for (double w : {0.01, 0.3, 1.0, 2.0, 3.1}) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) acc += response[i] * std::polar(1.0, -w * double(i));
    EXPECT_NEAR(std::abs(acc), 1.0, 1e-10) << w;
  }
}

class AdaptedVsOracle : public ::testing::TestWithParam<std::tuple<Method, double, CellType>> {};

TEST_P(AdaptedVsOracle, MatchesExplicitRecursion) {
  const auto [kind, M, type] = GetParam();
  const RnnModel m = random_model(type, 6, 31, 2.0, true);
  const auto x = fixtures::uniform_noise(400, 13, 0.5);
  const auto expect = oracle_adapted(m, kind, M, x);
  const AudioBuffer y = process_adapted(m, AdaptationMethod(kind, M), AudioBuffer{x, M * 44100.0});
  EXPECT_LE(fixtures::max_abs_diff(y.samples, expect), 1e-13);
}

INSTANTIATE_TEST_SUITE_P(
    AllMethods, AdaptedVsOracle,
    ::testing::Combine(::testing::ValuesIn(kAllMethods), ::testing::Values(1.0884, 2.0, 2.1768, 4.5),
                       ::testing::Values(CellType::LSTM, CellType::GRU)));

TEST(ProcessAdapted, UnitFactorReproducesBaseline) {
  const RnnModel m = random_model(CellType::LSTM, 16, 2024);
  const AudioBuffer x = fixtures::noise_buffer(44100, 44100.0, 9, 0.5);
  const auto base = process_baseline(m, x).samples;
  for (Method kind : kAllMethods) {
    const auto y = process_adapted(m, AdaptationMethod(kind, 1.0), x).samples;
    EXPECT_LE(fixtures::relative_rms(base, y), 1e-15) << to_string(kind);
  }
}

TEST(ProcessAdapted, IntegerFactorDelayMethodsAgree) {
  const RnnModel m = random_model(CellType::LSTM, 16, 2024);
  const AudioBuffer x = fixtures::noise_buffer(20000, 88200.0, 10, 0.5);
  const auto delay = process_adapted(m, AdaptationMethod(Method::Delay, 2.0), x).samples;
  for (Method kind : {Method::LIDL, Method::APDL, Method::CIDL}) {
    EXPECT_EQ(process_adapted(m, AdaptationMethod(kind, 2.0), x).samples, delay) << to_string(kind);
  }
}

TEST(ProcessAdapted, StnOnSkipOnlyModelIsIdentity) {
  const RnnModel m = zero_model(CellType::GRU, 5, true);
  const AudioBuffer x = fixtures::noise_buffer(500, 88200.0, 1);
  EXPECT_EQ(process_adapted(m, AdaptationMethod(Method::STN, 2.0), x).samples, x.samples);
}

TEST(ProcessAdapted, StnKeepsHiddenStateBounded) {
  const RnnModel m = random_model(CellType::GRU, 8, 3, 40.0);
  AdaptedStream<double> s(m, AdaptationMethod(Method::STN, 3.3));
  for (double v : fixtures::uniform_noise(5000, 2, 5.0)) {
    s.step(v);
    for (double h : s.state()) ASSERT_LE(std::abs(h), 1.0);
  }
}

TEST(ProcessAdapted, RateMismatch) {
  const RnnModel m = random_model(CellType::LSTM, 4, 1);
  const AdaptationMethod cidl(Method::CIDL, 48000.0 / 44100.0);
  EXPECT_NO_THROW(process_adapted(m, cidl, fixtures::noise_buffer(10, 48000.0, 1)));
  EXPECT_NO_THROW(process_adapted(m, cidl, fixtures::noise_buffer(10, 48004.0, 1)));
  EXPECT_THROW(process_adapted(m, cidl, fixtures::noise_buffer(10, 48010.0, 1)), RateError);
}

TEST(ProcessAdapted, SinglePrecisionRuns) {
  const RnnModel m = random_model(CellType::LSTM, 8, 1);
  const AudioBuffer x = fixtures::noise_buffer(2000, 96000.0, 1, 0.3);
  const AdaptationMethod cidl(Method::CIDL, 96000.0 / 44100.0);
  const auto d = process_adapted(m, cidl, x, Precision::Double).samples;
  const auto f = process_adapted(m, cidl, x, Precision::Single).samples;
  EXPECT_LE(fixtures::relative_rms(d, f), 1e-5);
}
