#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "ropesway/errors.hpp"
#include "ropesway/run_config.hpp"

using namespace ropesway;

namespace {

RunConfig parse(const std::string& text) {
  return parse_config_text(text, RunConfig::preset("impulse"));
}

}  // namespace

TEST_CASE("presets") {
  SUBCASE("impulse carries the published test setup") {
    RunConfig c = RunConfig::preset("impulse");
    CHECK(c.scenario == "impulse");
    CHECK(c.spec.params.rho == 2.11);
    CHECK(c.spec.params.l == 390.0);
    CHECK(c.spec.params.H == 402.8);
    CHECK(c.spec.params.m_e == 3500.0);
    CHECK(c.spec.params.n_ropes == 8);
    CHECK(c.spec.params.c_p == 0.0);  // release test zeroes the distributed damping
    CHECK(c.spec.modes == 2);
    CHECK(c.spec.options.q0(0) == 20.0);
    CHECK(c.spec.options.qd0(0) == 5.0);
    CHECK(c.spec.controller.u_max == 1e9);
    CHECK(c.spec.disturbance.kind() == DisturbanceKind::zero);
  }

  SUBCASE("sustained shakes the machine room at the rope resonance") {
    RunConfig c = RunConfig::preset("sustained");
    CHECK(c.scenario == "sustained");
    CHECK(c.spec.params.c_p == 0.0315);
    CHECK(c.spec.disturbance.kind() == DisturbanceKind::sinusoid);
    CHECK(c.spec.disturbance.amplitude() == 0.2);
    CHECK(c.spec.disturbance.frequency_hz() == 0.08);
    CHECK(c.spec.controller.u_max_p == 1e9);
    CHECK(c.spec.controller.v1_max == 1e5);
    CHECK(c.spec.controller.v2_max == 1e5);
    CHECK(c.spec.controller.F_max == 1.0);
    CHECK(c.spec.controller.F_tilde_max == 1.0);
  }

  SUBCASE("custom starts from the plain table values at rest") {
    RunConfig c = RunConfig::preset("custom");
    CHECK(c.spec.params.c_p == 0.0315);
    CHECK(c.spec.options.q0.size() == c.spec.modes);
    CHECK(c.spec.options.q0.norm() == 0.0);
    CHECK(c.spec.options.qd0.norm() == 0.0);
  }

  SUBCASE("unknown preset is rejected") {
    CHECK_THROWS_AS(RunConfig::preset("warp"), ConfigError);
  }
}

TEST_CASE("parsing") {
  SUBCASE("keys override the preset") {
    RunConfig c = parse("rope.l=380\nmodes.count=4\ncontroller.mode=thm1\n");
    CHECK(c.spec.params.l == 380.0);
    CHECK(c.spec.modes == 4);
    CHECK(c.spec.controller.mode == ControllerMode::thm1);
    // impulse initial conditions survive a mode-count resize
    CHECK(c.spec.options.q0.size() == 4);
    CHECK(c.spec.options.q0(0) == 20.0);
    CHECK(c.spec.options.q0(3) == 0.0);
  }

  SUBCASE("comments and blank lines are ignored") {
    RunConfig c = parse("# a note\n\n  rope.l = 380 \n");
    CHECK(c.spec.params.l == 380.0);
  }

  SUBCASE("a scenario line re-bases regardless of position") {
    RunConfig c = parse("rope.l=380\nscenario=sustained\n");
    CHECK(c.scenario == "sustained");
    CHECK(c.spec.params.l == 380.0);  // later pass still applies the key
    CHECK(c.spec.disturbance.kind() == DisturbanceKind::sinusoid);
  }

  SUBCASE("disturbance keys are order-independent") {
    RunConfig a = parse(
        "disturbance.kind=sinusoid\ndisturbance.amplitude=0.3\n"
        "disturbance.frequency_hz=0.1\n");
    RunConfig b = parse(
        "disturbance.amplitude=0.3\ndisturbance.frequency_hz=0.1\n"
        "disturbance.kind=sinusoid\n");
    CHECK(emit_config(a) == emit_config(b));
    CHECK(a.spec.disturbance.amplitude() == 0.3);
  }

  SUBCASE("unknown keys name themselves") {
    CHECK_THROWS_WITH_AS(parse("rope.banana=1\n"),
                         "unknown config key 'rope.banana'", ConfigError);
  }

  SUBCASE("type mismatches name the key") {
    try {
      parse("rope.l=soft\n");
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("rope.l") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("modes.count=2.5\n"), ConfigError);
    CHECK_THROWS_AS(parse("actuator.enabled=maybe\n"), ConfigError);
  }
}

TEST_CASE("round-trip stability") {
  SUBCASE("presets") {
    for (const char* name : {"impulse", "sustained", "custom"}) {
      RunConfig c = RunConfig::preset(name);
      const std::string once = emit_config(c);
      RunConfig back = parse_config_text(once, RunConfig::preset("impulse"));
      CHECK(emit_config(back) == once);
    }
  }

  SUBCASE("a heavily customized run") {
    RunConfig c = parse(
        "scenario=sustained\nrope.l=371.25\nrope.c_p=0.0417\nmodes.count=3\n"
        "controller.mode=thm2\ncontroller.u_max=2000001\n"
        "controller.u_max_p=1000000\ncontroller.v1_max=500000\n"
        "controller.v2_max=500000\n"
        "sensors.noise_amplitude=0.013\nsensors.seed=99\n"
        "sensors.positions=80,190.5,300\n"
        "actuator.cutoff_hz=8.5\nactuator.delay_steps=3\n"
        "disturbance.amplitude=0.25\nsim.dt=0.0005\nsim.duration=42\n"
        "sim.q0=1,2,3\nsim.qd0=0.5,0,0\nout.dir=runs/x\n");
    const std::string once = emit_config(c);
    RunConfig back = parse_config_text(once, RunConfig::preset("impulse"));
    CHECK(emit_config(back) == once);
    CHECK(back.out_dir == "runs/x");
    CHECK(back.spec.sensors.positions.size() == 3);
    CHECK(back.spec.options.q0(2) == 3.0);
  }
}

TEST_CASE("validation") {
  SUBCASE("rope longer than the hoistway") {
    RunConfig c = parse("rope.l=500\n");
    CHECK_THROWS_WITH_AS(validate_config(c), "rope.l must be <= rope.H",
                         ConfigError);
  }

  SUBCASE("controller budget") {
    RunConfig c = parse(
        "controller.mode=thm2\ncontroller.u_max=100\ncontroller.u_max_p=90\n"
        "controller.v1_max=20\ncontroller.v2_max=0\n");
    CHECK_THROWS_WITH_AS(
        validate_config(c),
        "controller.u_max_p + v1_max + v2_max must not exceed controller.u_max",
        ConfigError);
  }

  SUBCASE("loop timing") {
    RunConfig c = parse("sim.dt=0.003\n");  // not a divisor of dt_control
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }

  SUBCASE("sensor stations") {
    RunConfig c = parse("sensors.positions=0,100\n");
    CHECK_THROWS_AS(validate_config(c), ConfigError);
  }

  SUBCASE("presets validate clean") {
    for (const char* name : {"impulse", "sustained"})
      CHECK_NOTHROW(validate_config(RunConfig::preset(name)));
  }
}
