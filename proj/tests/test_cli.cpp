#include <doctest.h>

#include "latglob/cli.hpp"
#include "latglob/errors.hpp"

using namespace latglob;
using namespace latglob::cli;

namespace {

RunConfig config(Command c, const std::string& key) {
  RunConfig cfg;
  cfg.command = c;
  cfg.system_key = key;
  return cfg;
}

int exit_of(const RunConfig& cfg) {
  try {
    return run(cfg).exit_code;
  } catch (const std::exception& e) {
    return exit_code_for(e);
  }
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("command and format names") {
    for (auto c : {Command::kPredict, Command::kEstimate, Command::kCompare, Command::kDiagnose,
                   Command::kCounterexample, Command::kSweep}) {
      CHECK(parse_command(command_name(c)) == c);
    }
    CHECK(!parse_command("frobnicate"));
    CHECK(parse_format("csv") == Format::kCsv);
    CHECK(!parse_format("xml"));
  }

  TEST_CASE("predict") {
    const auto out = run(config(Command::kPredict, "minors:n=1,m=2"));
    CHECK(out.exit_code == kExitOk);
    CHECK(out.report["mean"]["partial"].get<double>() == doctest::Approx(0.4522474200).epsilon(1e-9));
    CHECK(out.report["euler_product"]["partial"].get<double>() == doctest::Approx(0.6079271019).epsilon(1e-9));
    CHECK(out.report["restricted_mean"]["partial"].get<double>() == doctest::Approx(1.153478).epsilon(1e-6));
    CHECK(out.report["hypotheses_hold"] == true);

    const auto cex = run(config(Command::kPredict, "cex:B"));
    CHECK(cex.report["mean"]["partial"].get<double>() == 0.0);
    CHECK(cex.report["hypotheses_hold"] == false);
    CHECK(cex.report["note"].get<std::string>().find("predicted value 0 is not the mean") != std::string::npos);
    CHECK(cex.report["restricted_mean"]["undefined"] == true);
  }

  TEST_CASE("validation errors map to exit 2") {
    CHECK(exit_of(config(Command::kPredict, "minors:n=3,m=2")) == kExitValidation);
    CHECK(exit_of(config(Command::kPredict, "")) == kExitValidation);
    CHECK(exit_of(config(Command::kEstimate, "minors:n=1,m=2")) == kExitValidation);
    CHECK(exit_of(config(Command::kCounterexample, "minors:n=1,m=2")) == kExitValidation);
    auto bad_eps = config(Command::kPredict, "eisenstein:d=2");
    bad_eps.eps = 0;
    CHECK(exit_of(bad_eps) == kExitValidation);
    auto both = config(Command::kSweep, "eisenstein:d=2");
    both.H = 3;
    both.h_list = {2, 3};
    CHECK(exit_of(both) == kExitValidation);
    auto down = config(Command::kSweep, "eisenstein:d=2");
    down.h_list = {3, 2};
    CHECK(exit_of(down) == kExitValidation);
    auto empty = config(Command::kEstimate, "cex:A");
    empty.H = 1;
    CHECK(exit_of(empty) == kExitOk);
    CHECK(run(empty).report["restricted_mean"]["undefined"] == true);
  }

  TEST_CASE("compare") {
    auto cfg = config(Command::kCompare, "minors:n=1,m=2");
    cfg.h_list = {50, 100};
    cfg.tol = 0.05;
    const auto ok = run(cfg);
    CHECK(ok.exit_code == kExitOk);
    CHECK(ok.report["within_tolerance"] == true);
    cfg.tol = 0;
    CHECK(run(cfg).exit_code == kExitComparisonFailed);

    auto b = config(Command::kCompare, "cex:B");
    b.h_list = {53, 131, 311};
    const auto bo = run(b);
    CHECK(bo.exit_code == kExitComparisonFailed);
    CHECK(bo.report["strictly_increasing"] == true);
    CHECK(bo.report["predicted"]["partial"].get<double>() == 0.0);
  }

  TEST_CASE("estimate and diagnose") {
    auto cfg = config(Command::kEstimate, "minors:n=1,m=2");
    cfg.H = 2;
    const auto e = run(cfg);
    CHECK(e.report["mean"]["num"] == "3");
    CHECK(e.report["mean"]["den"] == "16");
    CHECK(e.report["exceptional"] == "1");

    auto diag = config(Command::kDiagnose, "cex:C");
    diag.H = 10;
    const auto d = run(diag);
    CHECK(d.report["max_ell"] == 27);
    CHECK(d.report["max_ell_witness"] == Json::array({9}));
  }

  TEST_CASE("counterexample defaults") {
    const auto a = run(config(Command::kCounterexample, "cex:A"));
    CHECK(a.report["reference_values_hold"] == true);
    CHECK(a.report["rows"].size() == 14);
    const auto c = run(config(Command::kCounterexample, "cex:C"));
    CHECK(c.report["strictly_increasing"] == true);
    CHECK(c.report["reference_values_hold"] == true);
    auto b = config(Command::kCounterexample, "cex:B");
    b.h_list = {311, 719, 1619};
    const auto bo = run(b);
    CHECK(bo.report["strictly_increasing"] == true);
    CHECK(bo.report["reference_values_hold"] == true);
    // the lower bound only takes hold from L = 6
    b.h_list = {19, 53, 131};
    const auto early = run(b);
    CHECK(early.report["strictly_increasing"] == true);
    CHECK(early.report["rows"][0]["meets_bound"] == false);
    CHECK(early.report["reference_values_hold"] == false);
    const auto full = run(config(Command::kCounterexample, "cex:B"));
    CHECK(full.report["bound_holds_from_L"] == 6);
    CHECK(full.report["reference_values_hold"] == true);
  }

  TEST_CASE("budget exit code") {
    auto cfg = config(Command::kEstimate, "minors:n=2,m=3");
    cfg.H = 100;
    CHECK(exit_of(cfg) == kExitBudget);
    auto cex = config(Command::kCounterexample, "cex:A");
    cex.H = 5;
    cex.max_points = 8;
    CHECK(exit_of(cex) == kExitBudget);
  }

  TEST_CASE("rendering") {
    auto cfg = config(Command::kSweep, "minors:n=1,m=2");
    cfg.h_list = {4, 8};
    const auto out = run(cfg);
    const std::string json = render(out, Format::kJson);
    CHECK(Json::parse(json) == out.report);
    CHECK(json.back() == '\n');
    const std::string csv = render(out, Format::kCsv);
    CHECK(csv.rfind("command,system,quantity,H,num,den,decimal,lower,upper,status\n", 0) == 0);
    CHECK(csv.find("\"minors:n=1,m=2\"") != std::string::npos);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  }

  TEST_CASE("output is byte-identical across worker counts") {
    auto cfg = config(Command::kEstimate, "minors:n=2,m=3");
    cfg.H = 3;
    std::string first;
    for (unsigned w : {1u, 2u, 8u}) {
      cfg.threads = w;
      const std::string text = render(run(cfg), Format::kJson) + render(run(cfg), Format::kCsv);
      if (first.empty()) first = text;
      CHECK(text == first);
    }
  }

  TEST_CASE("serialization helpers") {
    CHECK(rational_json(Rational(3, 4)) == Json{{"num", "3"}, {"den", "4"}, {"decimal", "0.75"}});
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1e-20) == "1e-20");
  }
}
