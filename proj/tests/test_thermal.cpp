#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include <xyzent/entanglement.hpp>
#include <xyzent/thermal.hpp>

using namespace xyzent;

namespace {

// Reference values computed with a 40-digit matrix exponential of -H/T.
struct Reference {
  ModelParams p;
  double T;
  double mu_plus, mu_minus, omega1, omega2, z, v, Z;
};

const Reference references[] = {
    {{1, 0, 0, 0, 0}, 1.0, 0.19661193324148185, 0.19661193324148185, 0.30338806675851815,
     0.30338806675851815, -0.23105857863000488, 0.0, 5.0861612696304876},
    {{1, 1, 0, 0, 0}, 1.0, 0.25, 0.25, 0.25, 0.25, -0.19039853898894122, -0.19039853898894122,
     6.1723225392609751},
    {{0.7, 0.4, -1.3, 0.9, 1.7}, 0.6, 0.041691866692910506, 0.62949805503859256,
     0.013044786432167976, 0.31576529183632895, -0.06232480993615079, -0.091436518187106098,
     22.092739321029366},
    {{1, 0.2, 1, 4, 5}, 0.5, 9.3273253527474916e-6, 0.014939729339318373, 0.0095645132045903996,
     0.97548643013073848, -0.096592191692614808, -0.00037326005034914064, 74094.823355776477},
};

double max_element_diff(const GibbsXState& a, const GibbsXState& b) {
  return std::fmax(
      std::fmax(std::fmax(std::abs(a.mu_plus - b.mu_plus), std::abs(a.mu_minus - b.mu_minus)),
                std::fmax(std::abs(a.omega1 - b.omega1), std::abs(a.omega2 - b.omega2))),
      std::fmax(std::abs(a.z - b.z), std::abs(a.v - b.v)));
}

} // namespace

TEST(Temperature, Validation) {
  EXPECT_THROW(Temperature::from_T(0.0), InvalidParameter);
  EXPECT_THROW(Temperature::from_T(-1.0), InvalidParameter);
  EXPECT_THROW(Temperature::from_T(std::nan("")), InvalidParameter);
  EXPECT_DOUBLE_EQ(Temperature::from_T(0.25).beta(), 4.0);
}

TEST(PartitionFunction, References) {
  for (const auto& r : references)
    EXPECT_NEAR(partition_function(r.p, Temperature::from_T(r.T)), r.Z, 1e-12 * r.Z);
  EXPECT_NEAR(partition_function({1, 0, 0, 0, 0}, Temperature::from_T(1)),
              2 * (1 + std::cosh(1.0)), 1e-13);
  EXPECT_NEAR(partition_function({1, 1, 0, 0, 0}, Temperature::from_T(1)), 4 * std::cosh(1.0),
              1e-13);
}

TEST(PartitionFunction, InfiniteTemperature) {
  EXPECT_NEAR(partition_function({1.3, 0.7, -2, 0.4, 3}, Temperature::from_T(1e12)), 4.0, 1e-9);
}

TEST(GibbsClosed, References) {
  for (const auto& r : references) {
    const auto g = gibbs_closed(r.p, Temperature::from_T(r.T));
    EXPECT_NEAR(g.mu_plus, r.mu_plus, 1e-14);
    EXPECT_NEAR(g.mu_minus, r.mu_minus, 1e-14);
    EXPECT_NEAR(g.omega1, r.omega1, 1e-14);
    EXPECT_NEAR(g.omega2, r.omega2, 1e-14);
    EXPECT_NEAR(g.z, r.z, 1e-14);
    EXPECT_NEAR(g.v, r.v, 1e-14);
    EXPECT_NEAR(g.partition, r.Z, 1e-12 * r.Z);
  }
}

// Printing (beta/eta) instead of (B/eta) in mu+- breaks agreement with the
// spectral sum; (B/eta) reproduces it.
TEST(GibbsClosed, FieldOverEtaFormIsTheCorrectOne) {
  const ModelParams p{0.7, 0.4, -1.3, 0.9, 1.7};
  const auto t = Temperature::from_T(0.6);
  const auto oracle = gibbs_oracle(p, t);
  const double beta = t.beta();
  const auto s = energy_scales(p);
  const double Z = partition_function(p, t);
  const double pre = std::exp(-p.Jz * beta / 2) / Z;
  const double with_field = pre * (std::cosh(s.eta * beta) - p.B / s.eta * std::sinh(s.eta * beta));
  const double with_beta = pre * (std::cosh(s.eta * beta) - beta / s.eta * std::sinh(s.eta * beta));
  EXPECT_NEAR(with_field, oracle.mu_plus, 1e-13);
  EXPECT_GT(std::abs(with_beta - oracle.mu_plus), 1e-2);
}

TEST(GibbsClosed, InfiniteTemperatureIsMaximallyMixed) {
  const auto g = gibbs_closed({2, -0.6, 1.1, 3, -4}, Temperature::from_T(1e12));
  for (double d : {g.mu_plus, g.mu_minus, g.omega1, g.omega2}) EXPECT_NEAR(d, 0.25, 1e-10);
  EXPECT_NEAR(g.z, 0.0, 1e-10);
  EXPECT_NEAR(g.v, 0.0, 1e-10);
}

TEST(GibbsClosed, LowTemperatureApproachesGroundProjector) {
  // Ground state is Sigma- = (-|00> + |11>)/sqrt(2) (energy -0.7; psi- sits at -0.5).
  const auto g = gibbs_closed({1, 0.2, -1, 0, 0}, Temperature::from_T(0.001));
  EXPECT_NEAR(g.mu_plus, 0.5, 1e-12);
  EXPECT_NEAR(g.mu_minus, 0.5, 1e-12);
  EXPECT_NEAR(g.v, -0.5, 1e-12);
  EXPECT_NEAR(g.omega1, 0.0, 1e-12);
  EXPECT_NEAR(g.z, 0.0, 1e-12);
}

TEST(GibbsClosed, HugeBetaDoesNotOverflow) {
  for (const ModelParams& p : {ModelParams{1, 0.3, 2, 1, 0.1}, ModelParams{1, 0.3, -4, 5, 3},
                               ModelParams{0, 0, 2, 0, 0}}) {
    const auto g = gibbs_closed(p, Temperature::from_T(1e-6));
    for (double x : {g.mu_plus, g.mu_minus, g.omega1, g.omega2, g.z, g.v})
      EXPECT_TRUE(std::isfinite(x));
    EXPECT_NEAR(g.trace(), 1.0, 1e-12);
    EXPECT_TRUE(g.partition > 0);
  }
}

TEST(GibbsClosed, RemovableSingularitiesAreFinite) {
  // eta = 0 (gamma = B = 0) and xi = 0 (J = b = 0).
  const auto t = Temperature::from_T(0.7);
  for (const ModelParams& p : {ModelParams{1, 0, 0.3, 0, 0.4}, ModelParams{0, 0.5, 0.3, 0.2, 0}}) {
    const auto g = gibbs_closed(p, t);
    const auto o = gibbs_oracle(p, t);
    EXPECT_LE(max_element_diff(g, o), 1e-13);
  }
  // Just above the series cut-over.
  const ModelParams tiny{1, 1e-5, 0.3, 1e-6, 0.4};
  EXPECT_LE(max_element_diff(gibbs_closed(tiny, t), gibbs_oracle(tiny, t)), 1e-13);
}

TEST(GibbsClosed, MatchesOracleRandomized) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-5, 5), temp(0.05, 10);
  double worst = 0;
  for (int n = 0; n < 1000; ++n) {
    const ModelParams p{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto t = Temperature::from_T(temp(rng));
    worst = std::fmax(worst, max_element_diff(gibbs_closed(p, t), gibbs_oracle(p, t)));
  }
  EXPECT_LE(worst, 1e-10);
}

TEST(GibbsClosed, StateInvariants) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-5, 5), temp(0.05, 10);
  for (int n = 0; n < 1000; ++n) {
    const ModelParams p{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto t = Temperature::from_T(temp(rng));
    const auto g = gibbs_closed(p, t);
    EXPECT_NEAR(g.trace(), 1.0, 1e-12);
    EXPECT_GE(g.mu_plus * g.mu_minus - g.v * g.v, -1e-14);
    EXPECT_GE(g.omega1 * g.omega2 - g.z * g.z, -1e-14);
    for (double d : {g.mu_plus, g.mu_minus, g.omega1, g.omega2}) {
      EXPECT_GE(d, 0.0);
      EXPECT_LE(d, 1.0);
    }
    if (g.z != 0) {
      EXPECT_EQ(std::signbit(g.z), !std::signbit(p.J));
    }
    if (g.v != 0) {
      EXPECT_EQ(std::signbit(g.v), !std::signbit(p.J * p.gamma));
    }

    // Sigma-block elements ignore b, psi-block elements ignore B.
    auto moved = p;
    moved.b = u(rng);
    moved.B = p.B;
    const auto gb = gibbs_closed(moved, t);
    const double scale_b = partition_function(moved, t) / partition_function(p, t);
    EXPECT_NEAR(gb.mu_plus * scale_b, g.mu_plus, 1e-12);
    EXPECT_NEAR(gb.v * scale_b, g.v, 1e-12);
    auto movedB = p;
    movedB.B = u(rng);
    const auto gB = gibbs_closed(movedB, t);
    const double scale_B = partition_function(movedB, t) / partition_function(p, t);
    EXPECT_NEAR(gB.omega1 * scale_B, g.omega1, 1e-12);
    EXPECT_NEAR(gB.z * scale_B, g.z, 1e-12);
  }
}

TEST(GibbsOracle, RoutesAgree) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-5, 5), temp(0.05, 10);
  for (int n = 0; n < 300; ++n) {
    const ModelParams p{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto r = gibbs_oracle_routes(p, Temperature::from_T(temp(rng)));
    EXPECT_LE(max_abs_diff(r.spectral, r.series), 1e-12);
  }
}

TEST(GibbsOracle, InfiniteTemperature) {
  const auto g = gibbs_oracle({1, 0.5, 1, 1, 1}, Temperature::from_T(1e12));
  for (double d : {g.mu_plus, g.mu_minus, g.omega1, g.omega2}) EXPECT_NEAR(d, 0.25, 1e-12);
}

TEST(GibbsOracle, XXReference) {
  const auto g = gibbs_oracle({1, 0, 0, 0, 0}, Temperature::from_T(1));
  const auto c = gibbs_closed({1, 0, 0, 0, 0}, Temperature::from_T(1));
  EXPECT_LE(max_element_diff(g, c), 1e-10);
}

TEST(ExpmTaylor, DiagonalAndNilpotent) {
  Mat4 d{};
  d[0][0] = 1;
  d[1][1] = -2;
  d[2][2] = 30;
  d[3][3] = 0;
  const auto e = expm_taylor(d);
  EXPECT_NEAR(e[0][0], std::exp(1.0), 1e-15 * std::exp(1.0));
  EXPECT_NEAR(e[1][1], std::exp(-2.0), 1e-16);
  EXPECT_NEAR(e[2][2], std::exp(30.0), 1e-14 * std::exp(30.0));
  EXPECT_EQ(e[3][3], 1.0);

  Mat4 n{};
  n[0][1] = 2;
  const auto en = expm_taylor(n);
  EXPECT_EQ(en[0][1], 2.0);
  EXPECT_EQ(en[0][0], 1.0);
}

TEST(GroundState, PsiPhaseIsPure) {
  // xi = sqrt(5) > eta - Jz ~ 1.8246.
  const auto g = ground_state_density({1, 0.2, -1, 0.8, 2});
  EXPECT_EQ(g.mu_plus, 0.0);
  EXPECT_EQ(g.mu_minus, 0.0);
  EXPECT_EQ(g.v, 0.0);
  EXPECT_NEAR(g.omega1 * g.omega2, g.z * g.z, 1e-15);
  EXPECT_NEAR(g.trace(), 1.0, 1e-15);
  EXPECT_EQ(g.partition, 1.0);
}

TEST(GroundState, DegeneratePointIsEqualMixture) {
  const auto g = ground_state_density({1, 1, 0, 0, 0});
  EXPECT_EQ(g.partition, 2.0);
  EXPECT_NEAR(g.mu_plus, 0.25, 1e-15);
  EXPECT_NEAR(g.omega1, 0.25, 1e-15);
  EXPECT_NEAR(std::abs(g.z), 0.25, 1e-15);
  EXPECT_NEAR(std::abs(g.v), 0.25, 1e-15);
  EXPECT_NEAR(concurrence_xstate_max(g).value, 0.0, 1e-15);
}

TEST(GroundState, MatchesSmallTemperatureAwayFromCrossing) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-5, 5);
  int checked = 0;
  for (int n = 0; n < 500; ++n) {
    const ModelParams p{u(rng), u(rng), u(rng), u(rng), u(rng)};
    const auto s = energy_scales(p);
    if (std::abs(s.xi - (s.eta - p.Jz)) < 0.05 || s.eta < 0.05 || s.xi < 0.05) continue;
    ++checked;
    EXPECT_LE(max_element_diff(ground_state_density(p), gibbs_closed(p, Temperature::from_T(1e-4))),
              1e-3);
  }
  EXPECT_GT(checked, 300);
}
