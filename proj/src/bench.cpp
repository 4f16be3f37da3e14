#include "cmefsp/bench.hpp"

namespace cmefsp {

namespace {

SolverConfig base_config() {
  SolverConfig c;
  c.t0 = 0.0;
  c.t_final = 10.0;
  c.dt = 0.1;
  c.alpha = 1e-6;
  c.eps_time = 2e-6;  // eps_time = 2*alpha allocation
  c.eps_global = 1e-3;
  c.expansion_depth = 1;
  c.strategy = PruneStrategy::Quantile;
  c.boundary = BoundaryMode::Closed;
  return c;
}

}  // namespace

BenchmarkModel lotka_volterra(double a, double b, double c) {
  std::vector<Species> species = {{"X1", 0}, {"X2", 1}};
  std::vector<Reaction> reactions = {
      {{{0, 1}}, {{0, 2}}, MassAction{a}},          // X1 -> 2X1
      {{{0, 1}, {1, 1}}, {{1, 2}}, MassAction{b}},  // X1 + X2 -> 2X2
      {{{1, 1}}, {}, MassAction{c}},                // X2 -> 0
  };
  BenchmarkModel model{
      "lotka_volterra",
      "Lotka-Volterra predator-prey model",
      ReactionNetwork(std::move(species), std::move(reactions)),
      State{50, 100},
      base_config()};
  model.config.expansion_depth = 3;
  model.config.t_final = 5.0;
  // Total rates reach ~90 at the default operating point; the depth-3 ring only
  // outruns the per-step displacement when rate*dt stays well under 1.
  model.config.dt = 0.0025;
  model.config.alpha = 1e-7;
  model.config.eps_time = 2e-7;
  return model;
}

BenchmarkModel michaelis_menten(double k1, double km1, double k2) {
  std::vector<Species> species = {{"E", 0}, {"S", 1}, {"ES", 2}, {"P", 3}};
  std::vector<Reaction> reactions = {
      {{{0, 1}, {1, 1}}, {{2, 1}}, MassAction{k1}},  // E + S -> ES
      {{{2, 1}}, {{0, 1}, {1, 1}}, MassAction{km1}},  // ES -> E + S
      {{{2, 1}}, {{0, 1}, {3, 1}}, MassAction{k2}},   // ES -> E + P
  };
  BenchmarkModel model{
      "michaelis_menten",
      "Michaelis-Menten enzyme kinetics",
      ReactionNetwork(std::move(species), std::move(reactions)),
      State{50, 10, 1, 1},
      base_config()};
  model.config.expansion_depth = 2;
  model.config.t_final = 50.0;
  model.config.alpha = 1e-7;
  model.config.eps_time = 2e-7;
  return model;
}

BenchmarkModel toggle_switch(const ToggleParams& p) {
  std::vector<Species> species = {{"U", 0}, {"V", 1}};
  const double u_degradation_rate = p.d1 + p.s * p.gamma / (1.0 + p.s);

  std::vector<Reaction> reactions;
  // Production of U, repressed by V.
  reactions.push_back({{},
                       {{0, 1}},
                       Hill{p.alpha1, p.beta1, p.k1, 3, 1, HillDirection::Repressing, p.eta}});
  // Degradation of U.
  if (p.constant_rate_degradation_u) {
    reactions.push_back({{{0, 1}}, {}, Constant{u_degradation_rate}});
  } else {
    reactions.push_back({{{0, 1}}, {}, MassAction{u_degradation_rate}});
  }
  // Production of V, repressed by U.
  reactions.push_back({{},
                       {{1, 1}},
                       Hill{p.alpha2, p.beta2, p.k2, 3, 0, HillDirection::Repressing, p.eta}});
  // Degradation of V.
  reactions.push_back({{{1, 1}}, {}, MassAction{p.d2}});

  BenchmarkModel model{
      "toggle_switch",
      "Stochastic toggle switch, mutual Hill repression",
      ReactionNetwork(std::move(species), std::move(reactions)),
      State{85, 5},
      base_config()};
  // Horizon long enough for the second basin to fill from the (85, 5) start;
  // the joint distribution is then clearly bimodal.
  model.config.t_final = 100.0;
  model.config.dt = 0.01;
  model.config.alpha = 2e-8;
  model.config.eps_time = 4e-8;
  model.config.eps_global = 1e-3;
  model.config.expansion_depth = 3;
  return model;
}

BenchmarkModel birth_death(double lambda, double mu, std::size_t cap) {
  std::vector<Species> species = {{"X", 0}};
  std::vector<Reaction> reactions = {
      {{}, {{0, 1}}, MassAction{lambda}},   // 0 -> X
      {{{0, 1}}, {}, MassAction{mu}},       // X -> 0
  };
  std::string description = "Birth-death chain";
  if (cap > 0) description += ", dense-oracle domain {0.." + std::to_string(cap) + "}";
  BenchmarkModel model{
      "birth_death",
      std::move(description),
      ReactionNetwork(std::move(species), std::move(reactions)),
      State{0},
      base_config()};
  model.config.t_final = 1.0;
  model.config.dt = 0.05;
  model.config.alpha = 1e-8;
  model.config.eps_time = 2e-8;
  model.config.eps_global = 1e-5;
  // Deep ring: with total rates ~(lambda + mu*x) the support moves several
  // states per step, and oracle-grade accuracy needs the Poisson tail beyond
  // the ring below ~1e-9 per step.
  model.config.expansion_depth = 8;
  if (cap > 0) model.config.max_states = cap + 1;
  return model;
}

}  // namespace cmefsp
