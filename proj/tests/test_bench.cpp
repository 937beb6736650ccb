#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cns/bench.hpp"
#include "cns/errors.hpp"
#include "oracles.hpp"

using namespace cns;

namespace {

RunConfig small_config(Method m) {
  RunConfig c;
  c.synthetic.n = 200;
  c.synthetic.d = 10;
  c.synthetic.noise = 0.3;
  c.synthetic.min_margin = 0.3;
  c.synthetic.n_test = 50;
  c.synthetic.seed = 3;
  c.loss = LossKind::Hinge;
  c.nu1 = 1e-3;
  c.nu2 = 1e-2;
  c.method = m;
  c.continuation.t1 = 20;
  c.continuation.stages = 3;
  c.continuation.solver.minibatch = 10;
  c.baseline.minibatch = 10;
  c.baseline.strongly_convex = true;
  c.cadence = 10;
  c.seed = 4;
  return c;
}

std::vector<TraceRow> synthetic_trace(double reference, double c, double power) {
  std::vector<TraceRow> rows{{0.0, 0, 0, reference + c, 0.0, 0, RowStatus::Ok}};
  for (std::size_t t = 10; t <= 1000; t *= 2)
    rows.push_back({1e-3 * static_cast<double>(t), t, 1,
                    reference + c * std::pow(static_cast<double>(t), power), 0.0, 0,
                    RowStatus::Ok});
  return rows;
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (auto m : {Method::CnsA, Method::CnsNA, Method::Fobos, Method::Rda, Method::PolySgd,
                 Method::FixedGamma})
    CHECK(method_from_string(to_string(m)) == m);
  CHECK_THROWS_AS(method_from_string("sgd"), ContractViolation);
}

TEST_CASE("cadence above the total budget gives only initial and final rows") {
  for (auto m : {Method::CnsA, Method::CnsNA, Method::Fobos, Method::FixedGamma}) {
    auto c = small_config(m);
    c.cadence = 100000;
    c.iterations = m == Method::CnsA || m == Method::CnsNA ? 0 : 50;
    const auto rows = run_experiment(c);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].cumulative_iterations == 0);
    CHECK(rows[1].cumulative_iterations > 0);
    CHECK(rows[1].status == RowStatus::Ok);
  }
}

TEST_CASE("continuation rows carry the stage of the schedule") {
  const auto c = small_config(Method::CnsA);
  const auto rows = run_experiment(c);
  // T = 20, 29, 40 -> stage ends at 20, 49, 89
  const std::size_t ends[] = {20, 49, 89};
  CHECK(rows.front().stage == 0);
  CHECK(rows.back().cumulative_iterations == 89);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    int expect = 1;
    while (rows[k].cumulative_iterations > ends[expect - 1]) ++expect;
    CHECK(rows[k].stage == expect);
    CHECK(rows[k].wall_time_s >= rows[k - 1].wall_time_s);
    CHECK(rows[k].cumulative_iterations > rows[k - 1].cumulative_iterations);
    CHECK(std::isfinite(rows[k].test_metric));
  }
  for (const auto& r : rows)
    if (r.cumulative_iterations != 89) CHECK(r.cumulative_iterations % 10 == 0);
}

TEST_CASE("baseline rows are tagged -1 and respect the iteration budget") {
  auto c = small_config(Method::Rda);
  c.iterations = 95;
  const auto rows = run_experiment(c);
  CHECK(rows.size() == 11);  // 0, 10, ..., 90, 95
  for (const auto& r : rows) CHECK(r.stage == -1);
  CHECK(rows.back().cumulative_iterations == 95);
}

TEST_CASE("iteration budget truncates a continuation run") {
  auto c = small_config(Method::CnsNA);
  c.iterations = 30;
  const auto rows = run_experiment(c);
  CHECK(rows.back().cumulative_iterations == 30);
  CHECK(rows.back().stage == 2);
}

TEST_CASE("fixed-gamma traces at two smoothing levels") {
  for (double gamma : {1e-2, 1e-3}) {
    auto c = small_config(Method::FixedGamma);
    c.continuation.gamma1 = gamma;
    c.continuation.solver.id = SolverId::AccProxSVRG;
    c.iterations = 60;
    const auto rows = run_experiment(c);
    CHECK(rows.back().cumulative_iterations == 60);
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].stage == 1);
    CHECK(rows.back().objective_original < rows.front().objective_original);
  }
  auto c = small_config(Method::FixedGamma);
  c.iterations = 0;
  CHECK_THROWS_AS(run_experiment(c), ContractViolation);
}

TEST_CASE("divergence is recorded in-row and halts the run") {
  auto c = small_config(Method::PolySgd);
  c.baseline.strongly_convex = false;
  c.baseline.eta0 = 1e12;
  c.iterations = 1000;
  const auto rows = run_experiment(c);
  CHECK(rows.back().status == RowStatus::Diverged);
  CHECK(std::isnan(rows.back().objective_original));
  CHECK(rows.back().cumulative_iterations < 1000);
}

TEST_CASE("trace CSV round trip") {
  auto c = small_config(Method::CnsA);
  c.output = (std::filesystem::temp_directory_path() / "cns_test_trace.csv").string();
  const auto rows = run_experiment(c);
  const auto back = load_trace_csv(c.output);
  CHECK(back == rows);
  std::filesystem::remove(c.output);

  std::vector<TraceRow> odd{{0.5, 3, -1, 1.25, std::nan(""), 2, RowStatus::Ok},
                            {0.75, 4, -1, std::nan(""), std::nan(""), 0, RowStatus::Diverged}};
  std::stringstream ss;
  write_trace_csv(ss, odd);
  const auto parsed = read_trace_csv(ss);
  REQUIRE(parsed.size() == 2);
  CHECK(std::isnan(parsed[0].test_metric));
  CHECK(parsed[1].status == RowStatus::Diverged);
  CHECK(parsed[0].objective_original == 1.25);

  std::istringstream bad("nope\n");
  CHECK_THROWS_AS(read_trace_csv(bad), ParseError);
}

TEST_CASE("compare_report: identical traces, slopes and unreached targets") {
  const double ref = 0.5;
  const auto a = synthetic_trace(ref, 1.0, -2.0);
  const std::vector<NamedTrace> same{{"x", a}, {"y", a}};
  const auto lines = compare_report(same, ref, 1e-4);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].iterations_to_target == lines[1].iterations_to_target);
  CHECK(lines[0].time_to_target == lines[1].time_to_target);
  CHECK(lines[0].slope == lines[1].slope);
  CHECK(lines[0].final_gap == lines[1].final_gap);
  REQUIRE(lines[0].slope.has_value());
  CHECK(*lines[0].slope == doctest::Approx(-2.0).epsilon(1e-9));
  // 1/t^2 <= 1e-4 first at t = 160
  CHECK(lines[0].iterations_to_target == std::optional<std::size_t>{160});

  const std::vector<NamedTrace> two{{"fast", a}, {"slow", synthetic_trace(ref, 1.0, -0.5)}};
  const auto mixed = compare_report(two, ref, 1e-4);
  CHECK(!mixed[1].iterations_to_target.has_value());
  CHECK(!mixed[1].time_to_target.has_value());
  CHECK(format_report(mixed, 1e-4).find("unreached") != std::string::npos);

  const std::vector<NamedTrace> one{{"x", a}};
  CHECK_THROWS_AS(compare_report(one, ref, 1e-4), ContractViolation);
  CHECK(!trailing_slope(std::span<const TraceRow>(a).first(1), ref).has_value());
}

TEST_CASE("test metric conventions") {
  const auto cls = oracle::dense_dataset({{1.0}, {-1.0}, {0.0}}, {1.0, 1.0, -1.0},
                                         Task::Classification);
  const std::vector<double> x{2.0};
  // scores 2, -2, 0 -> predictions +1, -1, -1
  CHECK(test_metric(*cls, x) == doctest::Approx(1.0 / 3.0));
  const auto reg = oracle::dense_dataset({{1.0}, {2.0}}, {1.0, 0.0}, Task::Regression);
  CHECK(test_metric(*reg, x) == doctest::Approx((1.0 + 4.0) / 2.0));
}

TEST_CASE("train and test splits are aligned to the larger dimension") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto train = (dir / "cns_test_train.svm").string();
  const auto test = (dir / "cns_test_test.svm").string();
  std::ofstream(train) << "+1 1:1 5:2\n-1 2:1\n";
  std::ofstream(test) << "+1 3:1\n";
  RunConfig c;
  c.train_path = train;
  c.test_path = test;
  auto data = load_experiment_data(c);
  CHECK(data.train->dim() == 5);
  CHECK(data.test->dim() == 5);
  std::ofstream(test) << "+1 8:1\n";
  data = load_experiment_data(c);
  CHECK(data.train->dim() == 8);
  CHECK(data.test->dim() == 8);
  std::filesystem::remove(train);
  std::filesystem::remove(test);
}

TEST_CASE("step-size tuning") {
  auto c = small_config(Method::PolySgd);
  c.baseline.strongly_convex = false;
  c.iterations = 100;
  const std::vector<double> single{0.3};
  CHECK(tune_stepsize(c, single) == 0.3);

  const std::vector<double> grid{1e12, 0.01, 0.1, 1.0};
  const double best = tune_stepsize(c, grid);
  CHECK(best != 1e12);
  CHECK(tune_stepsize(c, grid) == best);

  const std::vector<double> doomed{1e12, 1e14};
  CHECK_THROWS_AS(tune_stepsize(c, doomed), TuningError);

  auto cns = small_config(Method::CnsA);
  const std::vector<double> scales{0.5, 1.0, 2.0};
  const double s = tune_stepsize(cns, scales);
  CHECK(with_step(cns, s).continuation.solver.step_scale == s);
  CHECK(with_step(small_config(Method::Rda), 7.0).baseline.rda_scale == 7.0);
  CHECK(with_step(small_config(Method::Fobos), 7.0).baseline.eta0 == 7.0);
}
