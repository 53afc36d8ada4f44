#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "acoint/montecarlo.hpp"
#include "acoint/rng.hpp"
#include "acoint/tables.hpp"
#include "helpers.hpp"

using namespace acoint;

TEST_CASE("break schedule") {
  for (int t = -3; t <= 6; ++t) CHECK(break_sigma(t, 9) == 1.0);
  for (int t = 7; t <= 9; ++t) CHECK(break_sigma(t, 9) == 3.0);
}

TEST_CASE("break innovations switch scale after two thirds of the sample") {
  DgpSpec d = DgpSpec::for_rank(0, 0.0, Innovation::SingleBreak, 30000);
  std::mt19937_64 rng(81);
  const Matrix e = simulate_innovations(d, rng);
  REQUIRE(e.rows() == 30000 + d.K);
  const Matrix before = e.middleRows(d.K, 20000), after = e.bottomRows(10000);
  CHECK((before.transpose() * before / 20000.0 - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.05);
  CHECK((after.transpose() * after / 10000.0 - 9.0 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.5);
}

TEST_CASE("homoskedastic innovations") {
  DgpSpec d = DgpSpec::for_rank(0, 0.0, Innovation::Homoskedastic, 10000);
  std::mt19937_64 rng(82);
  const Matrix e = simulate_innovations(d, rng);
  CHECK((e.transpose() * e / e.rows() - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("stochastic volatility") {
  DgpSpec d = DgpSpec::for_rank(0, 0.0, Innovation::StochasticVolatility, 5000);
  d.sv_sigma_xi = 0.0;
  std::mt19937_64 a(83), b(83);
  const Matrix e = simulate_innovations(d, a);
  // With no volatility shocks, h_0 = 0 and every v draw passes through unscaled.
  std::normal_distribution<double> nd;
  for (int i = 0; i < 2; ++i) nd(b);
  for (int j = 0; j < 20; ++j)
    for (int i = 0; i < 2; ++i) {
      nd(b);
      CHECK(e(j, i) == nd(b));
    }

  // Stationary log-volatility: var(log|eps|) exceeds the Gaussian baseline by var(h).
  DgpSpec s = DgpSpec::for_rank(0, 0.0, Innovation::StochasticVolatility, 200000);
  std::mt19937_64 c(84);
  const Matrix es = simulate_innovations(s, c);
  const Eigen::ArrayXd l = es.col(0).array().abs().log();
  const double var = (l - l.mean()).square().mean();
  const double var_h = 0.25 * s.sv_sigma_xi * s.sv_sigma_xi / (1.0 - s.sv_lambda * s.sv_lambda);
  const double var_log_abs_normal = M_PI * M_PI / 8.0;
  CHECK(var == doctest::Approx(var_log_abs_normal + var_h).epsilon(0.05));
}

TEST_CASE("design validation") {
  DgpSpec d = DgpSpec::for_rank(1, 0.5, Innovation::Homoskedastic, 100);
  CHECK(d.k0() == 2);
  CHECK(d.r0() == 1);
  d.gamma = 1.0;
  CHECK_THROWS_AS(d.validate(), Error);
  d.gamma = 0.5;
  d.a = 0.2;
  CHECK_THROWS_AS(d.validate(), Error);
  d.a = -2.5;
  CHECK_THROWS_AS(d.validate(), Error);
  CHECK_THROWS_AS(DgpSpec::for_rank(3, 0.0, Innovation::Homoskedastic, 100), Error);
  for (int r0 = 0; r0 <= 2; ++r0)
    for (double g : {0.0, 0.1, 0.5, 0.9}) {
      const DgpSpec ok = DgpSpec::for_rank(r0, g, Innovation::Homoskedastic, 50);
      VecmSpec spec = ok.vecm_spec();
      spec.r = r0;
      VecmParams prm = ok.params();
      prm.alpha = prm.alpha.leftCols(r0).eval();
      prm.beta = prm.beta.leftCols(r0).eval();
      prm.rho = prm.rho.leftCols(r0).eval();
      CHECK(check_i1_conditions(prm, spec).pass());
    }
}

TEST_CASE("replications start from zero initial values") {
  const DgpSpec d = DgpSpec::for_rank(1, 0.5, Innovation::SingleBreak, 50);
  const TimeSeriesMatrix x = simulate_dgp(d, 3);
  CHECK(x.T() == 50);
  CHECK(x.presample_rows() == d.K);
  // X_{1-K} is driven by its own innovation only.
  std::mt19937_64 rng = make_stream(d.seed, 3, 0xD6);
  const Matrix e = simulate_innovations(d, rng);
  CHECK((x.presample().row(0) - e.row(0)).norm() < 1e-14);
  CHECK(simulate_dgp(d, 3).values() == x.values());
  CHECK(simulate_dgp(d, 4).values() != x.values());
}

TEST_CASE("frequency tables") {
  const FrequencyTable t = FrequencyTable::tally("m", rank_categories(), {0, 1, 1, 2, -1, 1});
  CHECK(t.reps == 5);
  CHECK(t.failures == 1);
  CHECK(t.percent(1) == doctest::Approx(60.0));
  CHECK(t.mc_se(1) == doctest::Approx(100.0 * std::sqrt(0.6 * 0.4 / 5)));
  CHECK(t.tolerance(0) >= 3.0);
  CHECK(lag_category(1) == 0);
  CHECK(lag_category(2) == 1);
  CHECK(lag_category(4) == 2);
}

TEST_CASE("one replication gives a one-hot table") {
  DgpSpec d = DgpSpec::for_rank(1, 0.5, Innovation::StochasticVolatility, 50);
  d.reps = 1;
  const auto tabs = run_experiment(d, {joint_rank_method(Penalty::BIC, true), lag_method(Penalty::HQC, false)});
  for (const FrequencyTable& t : tabs) {
    int hot = 0;
    for (std::size_t i = 0; i < t.categories.size(); ++i) hot += t.percent(i) == 100.0;
    CHECK(hot == 1);
    CHECK(t.reps == 1);
  }
  CHECK_THROWS_AS(run_experiment(d, {}), Error);
}

TEST_CASE("method failures are tallied separately") {
  DgpSpec d = DgpSpec::for_rank(0, 0.0, Innovation::Homoskedastic, 50);
  d.reps = 3;
  MethodSpec failing{"fails", rank_categories(), [](ReplicationContext&) -> int {
                       throw Error(ErrorKind::RankDeficient, "boom");
                     }};
  const auto tabs = run_experiment(d, {failing});
  CHECK(tabs[0].failures == 3);
  CHECK(tabs[0].reps == 0);
}

TEST_CASE("experiments are identical across worker counts") {
  DgpSpec d = DgpSpec::for_rank(1, 0.5, Innovation::SingleBreak, 50);
  d.reps = 12;
  d.seed = 99;
  ExperimentOptions o;
  o.B = 19;
  const std::vector<MethodSpec> m{joint_rank_method(Penalty::HQC, true),
                                  sequential_rank_method(Penalty::BIC, true, Penalty::BIC, false),
                                  bootstrap_rank_method(BootstrapKind::VarianceBootstrap, LagChoice::AlsBIC)};
  o.workers = 1;
  const auto a = run_experiment(d, m, o);
  o.workers = 3;
  const auto b = run_experiment(d, m, o);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].counts == b[i].counts);
}

TEST_CASE("table text and csv layout") {
  TableConfig cfg;
  cfg.reps = 2;
  cfg.gammas = {0.5};
  cfg.Ts = {50};
  const TableResult t = replicate_table(6, cfg);
  CHECK(t.blocks.size() == 3);
  std::ostringstream csv, txt;
  write_table_csv(csv, t);
  write_table_text(txt, t);
  CHECK(csv.str().rfind("table,section,innovation,r0,gamma,T,method,category,percent", 0) == 0);
  CHECK(txt.str().find("TABLE 6") != std::string::npos);
  CHECK_THROWS_AS(replicate_table(0, cfg), Error);
  CHECK_THROWS_AS(table_title(7), Error);
}
