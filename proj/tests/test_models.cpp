#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "colmodel/models.hpp"
#include "colmodel/nonmarkovianity.hpp"

using namespace colmodel;

namespace {

DirectConfig direct(double J, double Omega, double T, StopPolicy stop = {}) {
  return DirectConfig{SwapStrength(J), SwapStrength(Omega), ThermalSpec(T), stop};
}

IndirectConfig indirect(double kappa, double J, double Omega, double T, StopPolicy stop = {}) {
  return IndirectConfig{SwapStrength(kappa), SwapStrength(J), SwapStrength(Omega), ThermalSpec(T),
                        stop};
}

StatePair direct_start(const DensityMatrix& fresh) {
  const auto [p, m] = optimal_pair();
  return {tensor(p, fresh), tensor(m, fresh)};
}

StepRecord reference_record() {
  StepRecord r;
  r.D = 1.0;
  r.C_S = 0.5;
  r.pop_S = 0.5;
  return r;
}

void expect_records_near(const StepRecord& a, const StepRecord& b, double tol) {
  EXPECT_EQ(a.n, b.n);
  EXPECT_NEAR(a.D, b.D, tol) << "n=" << a.n;
  EXPECT_NEAR(a.dD, b.dD, tol) << "n=" << a.n;
  EXPECT_NEAR(a.C_S, b.C_S, tol) << "n=" << a.n;
  EXPECT_NEAR(a.C_R, b.C_R, tol) << "n=" << a.n;
  EXPECT_NEAR(a.pop_S, b.pop_S, tol) << "n=" << a.n;
}

}  // namespace

// --- step_direct ----------------------------------------------------------

TEST(StepDirect, NoCouplingLeavesSystemAlone) {
  const auto cfg = direct(0.0, 0.7, 1.0);
  const auto fresh = thermal_state(cfg.thermal);
  StatePair pair = direct_start(fresh);
  StepRecord prev = reference_record();
  for (int n = 0; n < 20; ++n) {
    auto out = step_direct(pair, fresh, cfg, prev);
    EXPECT_NEAR(out.record.D, 1.0, 1e-14);
    EXPECT_NEAR(out.record.C_S, 0.5, 1e-14);
    pair = std::move(out.states);
    prev = out.record;
  }
  EXPECT_EQ(prev.n, 20u);
}

TEST(StepDirect, FullSwapWithGroundAncilla) {
  const auto cfg = direct(half_pi, 0.0, 0.0);
  const auto fresh = thermal_state(cfg.thermal);
  const auto out = step_direct(direct_start(fresh), fresh, cfg, reference_record());
  const auto s = partial_trace(out.states.first, 2, 1);
  EXPECT_LT(max_abs_diff(s.matrix(), ket0().matrix()), 1e-15);
  EXPECT_NEAR(out.record.D, 0.0, 1e-15);
  // The system's coherence now sits on R_1, which was traced out, so R_2
  // (untouched by Omega = 0) carries none.
  EXPECT_NEAR(out.record.C_R, 0.0, 1e-15);
}

TEST(StepDirect, ZeroTemperatureWithoutIntracollisionsDecaysMonotonically) {
  for (double J : {0.1, 0.3, 0.8, 1.4}) {
    const auto cfg = direct(J, 0.0, 0.0);
    const auto fresh = thermal_state(cfg.thermal);
    StatePair pair = direct_start(fresh);
    StepRecord prev = reference_record();
    for (int n = 0; n < 60; ++n) {
      auto out = step_direct(pair, fresh, cfg, prev);
      EXPECT_LE(out.record.dD, 1e-12);
      EXPECT_LE(out.record.pop_S, prev.pop_S + 1e-15);  // drifts toward |0><0|
      pair = std::move(out.states);
      prev = out.record;
    }
  }
}

TEST(StepDirect, PairMembersShareCoherence) {
  const auto cfg = direct(0.3, 0.95, 5.0);
  const auto fresh = thermal_state(cfg.thermal);
  StatePair pair = direct_start(fresh);
  StepRecord prev = reference_record();
  for (int n = 0; n < 40; ++n) {
    auto out = step_direct(pair, fresh, cfg, prev);
    pair = std::move(out.states);
    prev = out.record;
    const double cs1 = coherence(partial_trace(pair.first, 2, 1));
    const double cs2 = coherence(partial_trace(pair.second, 2, 1));
    const double cr1 = coherence(partial_trace(pair.first, 2, 0));
    const double cr2 = coherence(partial_trace(pair.second, 2, 0));
    EXPECT_NEAR(cs1, cs2, 1e-14);
    EXPECT_NEAR(cr1, cr2, 1e-14);
    EXPECT_EQ(prev.C_R, cr1);
  }
}

TEST(StepDirect, RejectsCorruptedState) {
  const auto cfg = direct(0.3, 0.5, 1.0);
  const auto fresh = thermal_state(cfg.thermal);
  // Unit trace and Hermitian, but with a negative eigenvalue.
  Matrix bad(4);
  bad(0, 0) = 1.2;
  bad(3, 3) = -0.2;
  const StatePair pair{DensityMatrix(bad, detail::trusted), direct_start(fresh).second};
  StepRecord prev = reference_record();
  prev.n = 6;
  try {
    step_direct(pair, fresh, cfg, prev);
    FAIL() << "expected integrity_error";
  } catch (const integrity_error& e) {
    EXPECT_EQ(e.step(), 7u);
  }
}

TEST(StepDirect, RejectsWrongShapes) {
  const auto cfg = direct(0.3, 0.5, 1.0);
  const auto fresh = thermal_state(cfg.thermal);
  const StatePair small{ket0(), ket0()};
  EXPECT_THROW(step_direct(small, fresh, cfg, reference_record()), dimension_error);
}

// --- step_indirect --------------------------------------------------------

TEST(StepIndirect, FullSwapOscillatesWithPeriodTwo) {
  // kappa = pi/2 is i*SWAP: S and S' trade states every step, and with J = 0
  // S' never loses anything. Odd steps put the (identical) thermal state on
  // S, even steps bring the pure states back.
  const auto traj = run_model(indirect(half_pi, 0.0, 0.0, 1.0, StopPolicy{40, 1e-7, 10}));
  ASSERT_EQ(traj.records.size(), 41u);
  for (const auto& r : traj.records) {
    const double expected = r.n % 2 == 0 ? 1.0 : 0.0;
    EXPECT_NEAR(r.D, expected, 1e-12) << r.n;
  }
  EXPECT_NEAR(blp_measure(traj).N, 20.0, 1e-10);
  EXPECT_FALSE(traj.converged);
}

TEST(StepIndirect, WeakSystemCouplingIsMarkovian) {
  const auto traj = run_model(indirect(0.1, 0.6, 0.0, 1.0));
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    EXPECT_LE(traj.records[i].dD, 1e-12) << i;
  }
}

TEST(StepIndirect, RejectsWrongShapes) {
  const auto cfg = indirect(0.3, 0.3, 0.3, 1.0);
  const auto fresh = thermal_state(cfg.thermal);
  EXPECT_THROW(step_indirect(direct_start(fresh), fresh, cfg, reference_record()),
               dimension_error);
}

// --- run_model ------------------------------------------------------------

TEST(RunModel, MarkovianDirectConverges) {
  const auto traj = run_model(direct(0.3, 0.0, 1.0));
  EXPECT_TRUE(traj.converged);
  EXPECT_LT(traj.steps_run, 3000u);
  EXPECT_EQ(traj.records.size(), traj.steps_run + 1);
  EXPECT_EQ(traj.records.front().D, 1.0);
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    EXPECT_EQ(traj.records[i].n, i);
    EXPECT_LE(traj.records[i].dD, 1e-12);
  }
  // The final settle_window steps are all quiet.
  for (std::size_t i = traj.records.size() - 50; i < traj.records.size(); ++i)
    EXPECT_LT(traj.records[i].D, 1e-7);
}

TEST(RunModel, StrongIntracollisionsShowBackflowAtZeroTemperature) {
  const auto traj = run_model(direct(0.3, 0.95, 0.0));
  EXPECT_TRUE(std::any_of(traj.records.begin(), traj.records.end(),
                          [](const StepRecord& r) { return r.dD > 0.0; }));
  EXPECT_GT(blp_measure(traj).N, 1e-3);
}

TEST(RunModel, DecoupledIndirectNeverMoves) {
  const auto traj = run_model(indirect(0.0, 0.6, 0.5, 2.0));
  EXPECT_FALSE(traj.converged);
  EXPECT_EQ(traj.steps_run, 3000u);
  for (const auto& r : traj.records) EXPECT_NEAR(r.D, 1.0, 1e-12);
  EXPECT_EQ(blp_measure(traj).N, 0.0);
}

TEST(RunModel, TraceDistanceIsTwiceCoherenceInDirectModel) {
  for (double T : {0.0, 1.0, 5.0}) {
    const auto traj = run_model(direct(0.3, 0.95, T));
    for (const auto& r : traj.records) EXPECT_NEAR(r.D, 2.0 * r.C_S, 1e-12) << T << ' ' << r.n;
  }
}

TEST(RunModel, HomogenizesToAncillaState) {
  for (double T : {0.5, 1.0, 5.0}) {
    const auto traj = run_model(direct(0.3, 0.0, T));
    ASSERT_TRUE(traj.converged);
    const double p1 = thermal_state(ThermalSpec(T))(1, 1).real();
    EXPECT_NEAR(traj.records.back().pop_S, p1, 1e-6) << T;
  }
}

TEST(RunModel, RespectsStopPolicyLimits) {
  const auto traj = run_model(direct(0.3, 0.95, 1.0, StopPolicy{120, 1e-7, 50}));
  EXPECT_EQ(traj.steps_run, 120u);
  EXPECT_FALSE(traj.converged);
  EXPECT_EQ(traj.records.size(), 121u);
}

TEST(RunModel, StatesStayValidOverAFullRun) {
  // Every step re-checks the reduced states; a full-length run must not throw.
  EXPECT_NO_THROW(run_model(direct(0.3, half_pi, 3.0)));
  EXPECT_NO_THROW(run_model(indirect(0.4, 0.5, 1.2, 2.0)));
}

TEST(RunModel, InvalidStopPolicy) {
  EXPECT_THROW(run_model(direct(0.3, 0.0, 1.0, StopPolicy{10, 1e-7, 50})), domain_error);
  EXPECT_THROW(run_model(direct(0.3, 0.0, 1.0, StopPolicy{100, 0.0, 5})), domain_error);
  EXPECT_THROW(run_model(direct(0.3, 0.0, 1.0, StopPolicy{100, 1e-7, 0})), domain_error);
}

// --- full_chain_oracle ----------------------------------------------------

TEST(Oracle, FirstStepIdenticalToIteration) {
  for (const ModelConfig& cfg :
       {ModelConfig{direct(0.4, 0.8, 2.0)}, ModelConfig{indirect(0.7, 0.2, 1.1, 0.5)}}) {
    const auto o = full_chain_oracle(cfg, 1);
    const auto it = run_model(cfg);
    ASSERT_EQ(o.records.size(), 2u);
    expect_records_near(o.records[1], it.records[1], 1e-14);
  }
}

TEST(Oracle, DirectSixCollisions) {
  const ModelConfig cfg = direct(0.3, 0.95, 1.0);
  const auto o = full_chain_oracle(cfg, 6);
  const auto it = run_model(cfg);
  for (std::size_t n = 0; n <= 6; ++n) expect_records_near(o.records[n], it.records[n], 1e-10);
}

TEST(Oracle, IndirectFiveCollisions) {
  const ModelConfig cfg = indirect(0.3, 0.5, 0.9, 1.0);
  const auto o = full_chain_oracle(cfg, 5);
  const auto it = run_model(cfg);
  for (std::size_t n = 0; n <= 5; ++n) expect_records_near(o.records[n], it.records[n], 1e-10);
}

TEST(Oracle, RandomConfigsAgree) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<> s(0.0, half_pi);
  std::uniform_real_distribution<> t(0.0, 10.0);
  for (int trial = 0; trial < 3; ++trial) {
    for (const ModelConfig& cfg : {ModelConfig{direct(s(rng), s(rng), t(rng))},
                                   ModelConfig{indirect(s(rng), s(rng), s(rng), t(rng))}}) {
      const auto o = full_chain_oracle(cfg, 4);
      const auto it = run_model(cfg);
      for (std::size_t n = 0; n <= 4; ++n) expect_records_near(o.records[n], it.records[n], 1e-10);
    }
  }
}

TEST(Oracle, RegisterCap) {
  EXPECT_THROW(full_chain_oracle(indirect(0.3, 0.3, 0.3, 1.0), 8), capacity_error);
  EXPECT_THROW(full_chain_oracle(direct(0.3, 0.3, 1.0), 9), capacity_error);
}
