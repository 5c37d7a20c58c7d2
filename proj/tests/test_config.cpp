#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qs1d/config.hpp"

using namespace qs1d;

TEST_CASE("minimal scatter config resolves to a single-point sweep") {
  const auto cfg = parse_config(
      "task scatter\n"
      "profile.inline 0 2 1 0\n"
      "energy 0.5\n");
  CHECK(cfg.task == Task::kScatter);
  CHECK(cfg.sweep.count == 1);
  CHECK(cfg.sweep.param == "energy");
  CHECK(cfg.sweep.value(0) == 0.5);
  const auto p = cfg.resolve_profile();
  CHECK(p.segments().size() == 1);
  CHECK(p.value_at(1.0) == Complex(1.0));
}

TEST_CASE("inline profiles take semicolon-separated segments and lead levels") {
  const auto cfg = parse_config(
      "task scatter\n"
      "profile.inline 0 1 2 0 ; 1 2 0 0\n"
      "profile.vleft 0.1\n"
      "profile.vright 0.2\n"
      "energy 1.5\n");
  const auto p = cfg.resolve_profile();
  CHECK(p.segments().size() == 2);
  CHECK(p.v_left() == 0.1);
  CHECK(p.v_right() == 0.2);
}

TEST_CASE("sweep blocks parse linear and log scales") {
  const auto cfg = parse_config(
      "task scatter\n"
      "profile.inline 0 2 1 0\n"
      "sweep.param energy\n"
      "sweep.start 0.1\n"
      "sweep.stop 10\n"
      "sweep.count 3\n"
      "sweep.scale log\n");
  CHECK(cfg.sweep.count == 3);
  CHECK(cfg.sweep.value(0) == doctest::Approx(0.1));
  CHECK(cfg.sweep.value(1) == doctest::Approx(1.0));
  CHECK(cfg.sweep.value(2) == doctest::Approx(10.0));
}

TEST_CASE("duplicate keys are rejected, so two sweep blocks cannot coexist") {
  CHECK_THROWS_AS(parse_config("task scatter\n"
                               "profile.inline 0 2 1 0\n"
                               "sweep.param energy\n"
                               "sweep.param gamma\n"
                               "sweep.start 0\n"
                               "sweep.stop 1\n"
                               "sweep.count 2\n"),
                  ParseError);
}

TEST_CASE("config validation errors") {
  CHECK_THROWS_AS(parse_config("task scatter\nenergy 1\nbogus.key 3\n"
                               "profile.inline 0 1 0 0\n"),
                  UnknownKey);
  CHECK_THROWS_AS(parse_config("task scatter\nenergy 1\n"), MissingRequired);
  CHECK_THROWS_AS(parse_config("task scatter\nprofile.inline 0 1 0 0\n"),
                  MissingRequired);
  CHECK_THROWS_AS(parse_config("task clock\nprofile.inline 0 1 0 0\nenergy 1\n"),
                  MissingRequired);  // clock needs a window
  CHECK_THROWS_AS(parse_config("task scatter\nprofile.inline 0 1 0 0\n"
                               "energy abc\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_config("task scatter\nprofile.inline 0 1 0 0\n"
                               "energy 1\nwindow.lo 0.2\n"),
                  MissingRequired);  // window.hi missing
  CHECK_THROWS_AS(parse_config("task scatter\nprofile.inline 0 1 0 0\n"
                               "energy 1\nsweep.param u0\nsweep.start 0\n"
                               "sweep.stop 1\nsweep.count 2\n"),
                  ParseError);  // u0 sweep is a saddle-task parameter
}

TEST_CASE("saddle configs need no profile and accept infinite capacitance") {
  const auto cfg = parse_config(
      "task saddle\n"
      "saddle.c inf\n"
      "saddle.offsets 0,4,8\n"
      "sweep.param u0\n"
      "sweep.start 2\n"
      "sweep.stop -10\n"
      "sweep.count 40\n");
  CHECK(std::isinf(cfg.saddle.c_geom));
  CHECK(cfg.saddle.offsets.size() == 3);
  CHECK(cfg.sweep.count == 40);
}

TEST_CASE("resolved configs echo sorted key-value pairs") {
  const auto cfg = parse_config(
      "task absorb\n"
      "profile.inline 0 2 1 0\n"
      "energy 1.5\n"
      "gamma 1e-3\n"
      "window.lo 0.5\n"
      "window.hi 0.55\n");
  const auto kv = cfg.echo();
  CHECK(std::is_sorted(kv.begin(), kv.end()));
  bool saw_tol = false;
  for (const auto& [k, v] : kv) {
    if (k == "tol.defect") {
      saw_tol = true;
      CHECK(v == "0.0001");  // default for absorb
    }
  }
  CHECK(saw_tol);
}

TEST_CASE("defect tolerances default per task and accept overrides") {
  const auto scatter = parse_config(
      "task scatter\nprofile.inline 0 2 1 0\nenergy 1\n");
  CHECK(scatter.default_defect_tol() == 1e-10);
  const auto luse = parse_config(
      "task scatter\nprofile.inline 0 2 1 0\nenergy 1\ntol.defect 1e-6\n");
  CHECK(luse.defect_tol == 1e-6);
}
