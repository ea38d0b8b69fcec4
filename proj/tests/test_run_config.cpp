#include <doctest.h>

#include "gvfd/errors.hpp"
#include "gvfd/run_config.hpp"

using namespace gvfd;

TEST_CASE("defaults follow the parameter table") {
  const RunConfig obs = defaults_for(AgentKind::obs_only);
  const RunConfig ex = defaults_for(AgentKind::expert);
  const RunConfig me = defaults_for(AgentKind::meta);
  CHECK(obs.epsilon == 0.1);
  CHECK(obs.alpha_control == 0.01);
  CHECK(ex.epsilon == 0.1);
  CHECK(ex.alpha_control == 0.01);
  CHECK(ex.alpha_gvfs == 0.1);
  CHECK(me.epsilon == 0.5);
  CHECK(me.alpha_control == 0.0001);
  CHECK(me.alpha_gvfs == 0.1);
  CHECK(me.alpha_pi == 0.001);
  CHECK(me.alpha_c == 0.1);
  for (const auto& c : {obs, ex, me}) {
    CHECK(c.total_steps == 1000000);
    CHECK(c.eval_steps == 1000);
    CHECK(c.effective_train_steps() == 999000);
    CHECK(c.n_trials == 30);
    CHECK(c.lambda == 0.001);
    CHECK(c.gamma_c == 0.9);
    CHECK(c.t_max == 9.0);
    CHECK(c.memsize == 100);
  }
}

TEST_CASE("parsing applies keys over the agent's defaults") {
  const RunConfig c = parse_config(
      "# meta run\n"
      "agent = meta\n"
      "epsilon = 0.25   # trailing comment\n"
      "\n"
      "  n_trials=3\n"
      "unroll_next_features = true-next\n"
      "train_steps = 990000\n");
  CHECK(c.agent == AgentKind::meta);
  CHECK(c.epsilon == 0.25);
  CHECK(c.n_trials == 3);
  CHECK(c.alpha_pi == 0.001);
  CHECK(c.unroll_next_features == UnrollFeatures::true_next);
  CHECK(c.effective_train_steps() == 990000);
}

TEST_CASE("the agent key picks defaults wherever it appears") {
  const RunConfig c = parse_config("epsilon = 0.3\nagent = meta\n");
  CHECK(c.epsilon == 0.3);
  CHECK(c.alpha_c == 0.1);
  const RunConfig o = parse_config("agent = meta\n", std::string("expert"));
  CHECK(o.agent == AgentKind::expert);
  CHECK(o.epsilon == 0.1);
}

TEST_CASE("bad configs name the offending key") {
  auto key_of = [](const std::string& text) {
    try {
      validate(parse_config(text));
    } catch (const ConfigError& e) {
      return e.key();
    }
    return std::string("<none>");
  };
  CHECK(key_of("warp = 1\n") == "warp");
  CHECK(key_of("epsilon = lots\n") == "epsilon");
  CHECK(key_of("agent = robot\n") == "agent");
  CHECK(key_of("agent = meta\nalpha_pi = -1\n") == "alpha_pi");
  CHECK(key_of("eval_steps = 2000000\n") == "eval_steps");
  CHECK(key_of("n_trials = 0\n") == "n_trials");
  CHECK(key_of("epsilon = 1.5\n") == "epsilon");
  CHECK(key_of("gamma_c = 1\n") == "gamma_c");
  CHECK(key_of("memsize = 20\n") == "memsize");
  CHECK(key_of("unroll_next_features = sideways\n") == "unroll_next_features");
  CHECK(key_of("base_seed = -4\n") == "base_seed");
  CHECK(key_of("t_max = 12\n") == "t_max");
  CHECK(key_of("just some words\n") == "just some words");
  CHECK(key_of("agent = expert\n") == "<none>");
}

TEST_CASE("dump round-trips") {
  RunConfig c = defaults_for(AgentKind::meta);
  c.epsilon = 0.123456789012345;
  c.base_seed = 18446744073709551615ULL;
  c.train_steps = 990000;
  c.out_dir = "results/meta run";
  c.unroll_next_features = UnrollFeatures::true_next;
  CHECK(parse_config(dump_config(c)) == c);
  const RunConfig d = defaults_for(AgentKind::obs_only);
  CHECK(parse_config(dump_config(d)) == d);
  CHECK(dump_config(d).find("train_steps = auto\n") != std::string::npos);
}

TEST_CASE("every documented key is settable") {
  const std::vector<std::string> expected{
      "agent", "total_steps", "train_steps", "eval_steps", "epsilon", "alpha_control", "alpha_gvfs",
      "alpha_pi", "alpha_c", "lambda", "gamma_c", "t_max", "memsize", "n_trials", "base_seed",
      "unroll_next_features", "out_dir"};
  CHECK(config_keys() == expected);
  RunConfig c;
  for (const auto& k : expected) CHECK_NOTHROW(set_key(c, k, get_key(c, k)));
}

TEST_CASE("agent settings derived from a run config") {
  const AgentConfig a = agent_config(defaults_for(AgentKind::expert));
  CHECK(a.rho_cap == doctest::Approx(10.0));
  CHECK(a.cell_rule == CellRule::round);
  CHECK(a.obs_cells_in_control);
  RunConfig c = defaults_for(AgentKind::expert);
  c.rho_cap = 2.0;
  CHECK(agent_config(c).rho_cap == 2.0);
}
