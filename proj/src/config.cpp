#include "cmefsp/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <initializer_list>

namespace cmefsp {

using nlohmann::json;

namespace {

void check_keys(const json& obj, const char* context,
                std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(), [&](const char* k) {
      return item.key() == k;
    });
    if (!known) {
      throw ConfigError(std::string("unknown key \"") + item.key() + "\" in " + context);
    }
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double get_number(const json& obj, const char* context, const char* key, double fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number()) {
    throw ConfigError(std::string(context) + "." + key + " must be a number");
  }
  return v->get<double>();
}

std::int64_t get_integer(const json& obj, const char* context, const char* key,
                         std::int64_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) {
    throw ConfigError(std::string(context) + "." + key + " must be an integer");
  }
  return v->get<std::int64_t>();
}

std::uint64_t get_unsigned(const json& obj, const char* context, const char* key,
                           std::uint64_t fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_number_integer() || v->get<std::int64_t>() < 0) {
    throw ConfigError(std::string(context) + "." + key + " must be a nonnegative integer");
  }
  return v->get<std::uint64_t>();
}

bool get_bool(const json& obj, const char* context, const char* key, bool fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_boolean()) {
    throw ConfigError(std::string(context) + "." + key + " must be a boolean");
  }
  return v->get<bool>();
}

std::string get_string(const json& obj, const char* context, const char* key,
                       const std::string& fallback) {
  const json* v = find(obj, key);
  if (!v) return fallback;
  if (!v->is_string()) {
    throw ConfigError(std::string(context) + "." + key + " must be a string");
  }
  return v->get<std::string>();
}

std::map<std::size_t, Count> parse_side(const json& side, const char* context,
                                        const std::vector<Species>& species) {
  if (!side.is_object()) {
    throw ConfigError(std::string(context) + " must be an object mapping species to counts");
  }
  std::map<std::size_t, Count> out;
  for (const auto& item : side.items()) {
    const auto it = std::find_if(species.begin(), species.end(), [&](const Species& s) {
      return s.name == item.key();
    });
    if (it == species.end()) {
      throw ConfigError(std::string(context) + " references undefined species \"" +
                        item.key() + "\"");
    }
    if (!item.value().is_number_integer() || item.value().get<std::int64_t>() < 0) {
      throw ConfigError(std::string(context) + "." + item.key() +
                        " must be a nonnegative integer");
    }
    out[it->index] = item.value().get<Count>();
  }
  return out;
}

std::size_t species_by_name(const std::vector<Species>& species, const std::string& name,
                            const char* context) {
  const auto it = std::find_if(species.begin(), species.end(), [&](const Species& s) {
    return s.name == name;
  });
  if (it == species.end()) {
    throw ConfigError(std::string(context) + " references undefined species \"" + name + "\"");
  }
  return it->index;
}

PropensityExpr parse_propensity(const json& obj, const char* context,
                                const std::vector<Species>& species) {
  if (!obj.is_object()) {
    throw ConfigError(std::string(context) + " must be an object");
  }
  const std::string type = get_string(obj, context, "type", "");
  if (type == "mass_action") {
    check_keys(obj, context, {"type", "rate"});
    const double rate = get_number(obj, context, "rate", -1.0);
    if (rate < 0.0) throw ConfigError(std::string(context) + ".rate must be >= 0");
    return MassAction{rate};
  }
  if (type == "constant") {
    check_keys(obj, context, {"type", "rate"});
    const double rate = get_number(obj, context, "rate", -1.0);
    if (rate < 0.0) throw ConfigError(std::string(context) + ".rate must be >= 0");
    return Constant{rate};
  }
  if (type == "hill") {
    check_keys(obj, context,
               {"type", "base", "amplitude", "threshold", "exponent", "regulator",
                "direction", "scale"});
    Hill h;
    h.base = get_number(obj, context, "base", 0.0);
    h.amplitude = get_number(obj, context, "amplitude", 0.0);
    h.threshold = get_number(obj, context, "threshold", 1.0);
    h.exponent = static_cast<int>(get_integer(obj, context, "exponent", 1));
    h.scale = get_number(obj, context, "scale", 1.0);
    const std::string reg = get_string(obj, context, "regulator", "");
    if (reg.empty()) {
      throw ConfigError(std::string(context) + ".regulator is required for hill");
    }
    h.regulator = species_by_name(species, reg, context);
    const std::string dir = get_string(obj, context, "direction", "repressing");
    if (dir == "repressing") {
      h.direction = HillDirection::Repressing;
    } else if (dir == "activating") {
      h.direction = HillDirection::Activating;
    } else {
      throw ConfigError(std::string(context) +
                        ".direction must be \"repressing\" or \"activating\"");
    }
    return h;
  }
  throw ConfigError(std::string(context) +
                    ".type must be one of \"mass_action\", \"hill\", \"constant\"");
}

ReactionNetwork parse_inline_network(const json& model) {
  check_keys(model, "model", {"species", "reactions"});
  const json* species_json = find(model, "species");
  const json* reactions_json = find(model, "reactions");
  if (!species_json || !species_json->is_array() || species_json->empty()) {
    throw ConfigError("model.species must be a nonempty array of names");
  }
  if (!reactions_json || !reactions_json->is_array() || reactions_json->empty()) {
    throw ConfigError("model.reactions must be a nonempty array");
  }
  std::vector<Species> species;
  for (std::size_t i = 0; i < species_json->size(); ++i) {
    const json& name = (*species_json)[i];
    if (!name.is_string()) throw ConfigError("model.species entries must be strings");
    species.push_back({name.get<std::string>(), i});
  }
  std::vector<Reaction> reactions;
  for (std::size_t i = 0; i < reactions_json->size(); ++i) {
    const json& r = (*reactions_json)[i];
    const std::string context = "model.reactions[" + std::to_string(i) + "]";
    if (!r.is_object()) throw ConfigError(context + " must be an object");
    check_keys(r, context.c_str(), {"reactants", "products", "propensity"});
    Reaction reaction;
    if (const json* side = find(r, "reactants")) {
      reaction.reactants = parse_side(*side, (context + ".reactants").c_str(), species);
    }
    if (const json* side = find(r, "products")) {
      reaction.products = parse_side(*side, (context + ".products").c_str(), species);
    }
    const json* prop = find(r, "propensity");
    if (!prop) throw ConfigError(context + ".propensity is required");
    reaction.propensity = parse_propensity(*prop, (context + ".propensity").c_str(), species);
    reactions.push_back(std::move(reaction));
  }
  try {
    return ReactionNetwork(std::move(species), std::move(reactions));
  } catch (const InvalidNetworkError& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
}

BenchmarkModel parse_builtin(const json& model) {
  check_keys(model, "model", {"builtin", "params"});
  const std::string name = get_string(model, "model", "builtin", "");
  json params = json::object();
  if (const json* p = find(model, "params")) {
    if (!p->is_object()) throw ConfigError("model.params must be an object");
    params = *p;
  }
  const char* ctx = "model.params";
  if (name == "lotka_volterra") {
    check_keys(params, ctx, {"a", "b", "c"});
    return lotka_volterra(get_number(params, ctx, "a", 0.1),
                          get_number(params, ctx, "b", 0.005),
                          get_number(params, ctx, "c", 0.6));
  }
  if (name == "michaelis_menten") {
    check_keys(params, ctx, {"k1", "km1", "k2"});
    return michaelis_menten(get_number(params, ctx, "k1", 0.01),
                            get_number(params, ctx, "km1", 0.1),
                            get_number(params, ctx, "k2", 0.1));
  }
  if (name == "toggle_switch") {
    check_keys(params, ctx,
               {"eta", "alpha1", "beta1", "k1", "alpha2", "beta2", "k2", "d1", "d2",
                "gamma", "s", "constant_rate_degradation_u"});
    ToggleParams tp;
    tp.eta = get_number(params, ctx, "eta", tp.eta);
    tp.alpha1 = get_number(params, ctx, "alpha1", tp.alpha1);
    tp.beta1 = get_number(params, ctx, "beta1", tp.beta1);
    tp.k1 = get_number(params, ctx, "k1", tp.k1);
    tp.alpha2 = get_number(params, ctx, "alpha2", tp.alpha2);
    tp.beta2 = get_number(params, ctx, "beta2", tp.beta2);
    tp.k2 = get_number(params, ctx, "k2", tp.k2);
    tp.d1 = get_number(params, ctx, "d1", tp.d1);
    tp.d2 = get_number(params, ctx, "d2", tp.d2);
    tp.gamma = get_number(params, ctx, "gamma", tp.gamma);
    tp.s = get_number(params, ctx, "s", tp.s);
    tp.constant_rate_degradation_u =
        get_bool(params, ctx, "constant_rate_degradation_u", false);
    return toggle_switch(tp);
  }
  if (name == "birth_death") {
    check_keys(params, ctx, {"lambda", "mu", "cap"});
    return birth_death(get_number(params, ctx, "lambda", 1.0),
                       get_number(params, ctx, "mu", 1.0),
                       static_cast<std::size_t>(get_integer(params, ctx, "cap", 0)));
  }
  throw ConfigError("model.builtin \"" + name +
                    "\" is not one of lotka_volterra, michaelis_menten, toggle_switch, "
                    "birth_death");
}

State parse_x0(const json& arr, std::size_t n_species) {
  if (!arr.is_array() || arr.size() != n_species) {
    throw ConfigError("x0 must be an array of " + std::to_string(n_species) + " counts");
  }
  State x0;
  for (const json& v : arr) {
    if (!v.is_number_integer() || v.get<std::int64_t>() < 0) {
      throw ConfigError("x0 entries must be nonnegative integers");
    }
    x0.push_back(v.get<Count>());
  }
  return x0;
}

void parse_solver(const json& obj, SolverConfig& solver) {
  const char* ctx = "solver";
  check_keys(obj, ctx,
             {"t0", "t_final", "dt", "alpha", "eps_time", "eps_global", "expansion_depth",
              "prune_every", "boundary", "strategy", "max_states", "snapshot_every", "seed",
              "tie_mode", "max_prune_mass", "max_krylov_dim"});
  solver.t0 = get_number(obj, ctx, "t0", solver.t0);
  solver.t_final = get_number(obj, ctx, "t_final", solver.t_final);
  solver.dt = get_number(obj, ctx, "dt", solver.dt);
  const bool alpha_given = find(obj, "alpha") != nullptr;
  const bool eps_time_given = find(obj, "eps_time") != nullptr;
  solver.alpha = get_number(obj, ctx, "alpha", solver.alpha);
  if (eps_time_given) {
    solver.eps_time = get_number(obj, ctx, "eps_time", solver.eps_time);
  } else if (alpha_given && solver.alpha > 0.0) {
    solver.eps_time = 2.0 * solver.alpha;  // default allocation eps_time = 2*alpha
  }
  solver.eps_global = get_number(obj, ctx, "eps_global", solver.eps_global);
  solver.expansion_depth =
      static_cast<int>(get_integer(obj, ctx, "expansion_depth", solver.expansion_depth));
  if (solver.expansion_depth < 1) {
    throw ConfigError("solver.expansion_depth must be >= 1");
  }
  solver.prune_every = static_cast<int>(get_integer(obj, ctx, "prune_every", solver.prune_every));
  if (solver.prune_every < 1) {
    throw ConfigError("solver.prune_every must be >= 1");
  }
  const std::string boundary =
      get_string(obj, ctx, "boundary", to_string(solver.boundary));
  if (boundary == "closed") {
    solver.boundary = BoundaryMode::Closed;
  } else if (boundary == "absorbing") {
    solver.boundary = BoundaryMode::Absorbing;
  } else {
    throw ConfigError("solver.boundary must be \"closed\" or \"absorbing\"");
  }
  const std::string strategy = get_string(obj, ctx, "strategy", to_string(solver.strategy));
  if (strategy == "quantile") {
    solver.strategy = PruneStrategy::Quantile;
  } else if (strategy == "prune_to_mass") {
    solver.strategy = PruneStrategy::PruneToMass;
  } else if (strategy == "fixed_threshold") {
    solver.strategy = PruneStrategy::FixedThreshold;
  } else if (strategy == "none") {
    solver.strategy = PruneStrategy::None;
  } else {
    throw ConfigError("solver.strategy must be quantile, prune_to_mass, fixed_threshold "
                      "or none");
  }
  solver.max_states =
      static_cast<std::size_t>(get_unsigned(obj, ctx, "max_states", solver.max_states));
  solver.snapshot_every = static_cast<std::size_t>(
      get_unsigned(obj, ctx, "snapshot_every", solver.snapshot_every));
  solver.seed = get_unsigned(obj, ctx, "seed", solver.seed);
  const std::string ties = get_string(obj, ctx, "tie_mode",
                                      solver.prune.ties == TieMode::Inclusive ? "inclusive"
                                                                              : "positional");
  if (ties == "inclusive") {
    solver.prune.ties = TieMode::Inclusive;
  } else if (ties == "positional") {
    solver.prune.ties = TieMode::Positional;
  } else {
    throw ConfigError("solver.tie_mode must be \"inclusive\" or \"positional\"");
  }
  solver.prune.max_prune_mass =
      get_number(obj, ctx, "max_prune_mass", solver.prune.max_prune_mass);
  solver.max_krylov_dim =
      static_cast<int>(get_integer(obj, ctx, "max_krylov_dim", solver.max_krylov_dim));
  if (solver.max_krylov_dim < 2) {
    throw ConfigError("solver.max_krylov_dim must be >= 2");
  }
}

void parse_output(const json& obj, OutputConfig& output) {
  const char* ctx = "output";
  check_keys(obj, ctx, {"dir", "snapshots", "error_trace", "state_size_trace", "ssa_compare"});
  output.dir = get_string(obj, ctx, "dir", output.dir);
  output.snapshots = get_bool(obj, ctx, "snapshots", output.snapshots);
  output.error_trace = get_bool(obj, ctx, "error_trace", output.error_trace);
  output.state_size_trace = get_bool(obj, ctx, "state_size_trace", output.state_size_trace);
  if (const json* ssa = find(obj, "ssa_compare")) {
    const char* sctx = "output.ssa_compare";
    if (!ssa->is_object()) throw ConfigError("output.ssa_compare must be an object");
    check_keys(*ssa, sctx, {"enabled", "n", "seed", "grid_points"});
    output.ssa.enabled = get_bool(*ssa, sctx, "enabled", output.ssa.enabled);
    output.ssa.n = static_cast<std::size_t>(get_unsigned(*ssa, sctx, "n", output.ssa.n));
    output.ssa.seed = get_unsigned(*ssa, sctx, "seed", output.ssa.seed);
    output.ssa.grid_points = static_cast<std::size_t>(
        get_unsigned(*ssa, sctx, "grid_points", output.ssa.grid_points));
  }
}

json network_to_json(const ReactionNetwork& network) {
  json model;
  json species = json::array();
  for (const Species& s : network.species()) species.push_back(s.name);
  model["species"] = std::move(species);
  json reactions = json::array();
  for (const Reaction& r : network.reactions()) {
    json jr;
    json reactants = json::object();
    for (const auto& [idx, coeff] : r.reactants) {
      reactants[network.species()[idx].name] = coeff;
    }
    json products = json::object();
    for (const auto& [idx, coeff] : r.products) {
      products[network.species()[idx].name] = coeff;
    }
    jr["reactants"] = std::move(reactants);
    jr["products"] = std::move(products);
    json prop;
    if (const auto* ma = std::get_if<MassAction>(&r.propensity)) {
      prop["type"] = "mass_action";
      prop["rate"] = ma->rate;
    } else if (const auto* h = std::get_if<Hill>(&r.propensity)) {
      prop["type"] = "hill";
      prop["base"] = h->base;
      prop["amplitude"] = h->amplitude;
      prop["threshold"] = h->threshold;
      prop["exponent"] = h->exponent;
      prop["regulator"] = network.species()[h->regulator].name;
      prop["direction"] =
          h->direction == HillDirection::Repressing ? "repressing" : "activating";
      prop["scale"] = h->scale;
    } else {
      prop["type"] = "constant";
      prop["rate"] = std::get<Constant>(r.propensity).rate;
    }
    jr["propensity"] = std::move(prop);
    reactions.push_back(std::move(jr));
  }
  model["reactions"] = std::move(reactions);
  return model;
}

json solver_to_json(const SolverConfig& s) {
  json obj;
  obj["t0"] = s.t0;
  obj["t_final"] = s.t_final;
  obj["dt"] = s.dt;
  obj["alpha"] = s.alpha;
  obj["eps_time"] = s.eps_time;
  obj["eps_global"] = s.eps_global;
  obj["expansion_depth"] = s.expansion_depth;
  obj["prune_every"] = s.prune_every;
  obj["boundary"] = to_string(s.boundary);
  obj["strategy"] = to_string(s.strategy);
  obj["max_states"] = s.max_states;
  obj["snapshot_every"] = s.snapshot_every;
  obj["seed"] = s.seed;
  obj["tie_mode"] = s.prune.ties == TieMode::Inclusive ? "inclusive" : "positional";
  obj["max_prune_mass"] = s.prune.max_prune_mass;
  obj["max_krylov_dim"] = s.max_krylov_dim;
  return obj;
}

json output_to_json(const OutputConfig& o) {
  json obj;
  obj["dir"] = o.dir;
  obj["snapshots"] = o.snapshots;
  obj["error_trace"] = o.error_trace;
  obj["state_size_trace"] = o.state_size_trace;
  json ssa;
  ssa["enabled"] = o.ssa.enabled;
  ssa["n"] = o.ssa.n;
  ssa["seed"] = o.ssa.seed;
  ssa["grid_points"] = o.ssa.grid_points;
  obj["ssa_compare"] = std::move(ssa);
  return obj;
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config syntax error: ") + e.what());
  }
  if (!root.is_object()) {
    throw ConfigError("config root must be an object");
  }
  check_keys(root, "config", {"model", "x0", "solver", "output", "override_budget"});

  const json* model_json = find(root, "model");
  if (!model_json || !model_json->is_object()) {
    throw ConfigError("config requires a \"model\" object");
  }
  const bool has_builtin = find(*model_json, "builtin") != nullptr;
  const bool has_inline = find(*model_json, "species") != nullptr ||
                          find(*model_json, "reactions") != nullptr;
  if (has_builtin == has_inline) {
    throw ConfigError("model must specify exactly one of builtin or species/reactions");
  }

  if (has_builtin) {
    BenchmarkModel model = parse_builtin(*model_json);
    State x0 = model.x0;
    if (const json* x0_json = find(root, "x0")) {
      x0 = parse_x0(*x0_json, model.network.n_species());
    }
    SolverConfig solver = model.config;
    if (const json* solver_json = find(root, "solver")) {
      if (!solver_json->is_object()) throw ConfigError("solver must be an object");
      parse_solver(*solver_json, solver);
    }
    OutputConfig output;
    if (const json* output_json = find(root, "output")) {
      if (!output_json->is_object()) throw ConfigError("output must be an object");
      parse_output(*output_json, output);
    }
    return RunConfig{model_json->dump(), std::move(model.network), std::move(x0), solver,
                     std::move(output), get_bool(root, "config", "override_budget", false)};
  }

  ReactionNetwork network = parse_inline_network(*model_json);
  const json* x0_json = find(root, "x0");
  if (!x0_json) {
    throw ConfigError("x0 is required for inline models");
  }
  State x0 = parse_x0(*x0_json, network.n_species());
  SolverConfig solver;
  if (const json* solver_json = find(root, "solver")) {
    if (!solver_json->is_object()) throw ConfigError("solver must be an object");
    parse_solver(*solver_json, solver);
  }
  OutputConfig output;
  if (const json* output_json = find(root, "output")) {
    if (!output_json->is_object()) throw ConfigError("output must be an object");
    parse_output(*output_json, output);
  }
  return RunConfig{model_json->dump(), std::move(network), std::move(x0), solver,
                   std::move(output), get_bool(root, "config", "override_budget", false)};
}

std::string to_json(const RunConfig& config) {
  json root;
  root["model"] = json::parse(config.model_json);
  json x0 = json::array();
  for (Count c : config.x0) x0.push_back(c);
  root["x0"] = std::move(x0);
  root["solver"] = solver_to_json(config.solver);
  root["output"] = output_to_json(config.output);
  root["override_budget"] = config.override_budget;
  return root.dump(2);
}

BenchmarkModel builtin_model(const std::string& name, const std::string& params_json) {
  json params;
  try {
    params = json::parse(params_json);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("params syntax error: ") + e.what());
  }
  json model;
  model["builtin"] = name;
  model["params"] = std::move(params);
  return parse_builtin(model);
}

std::string export_model_config(const BenchmarkModel& model) {
  json root;
  root["model"] = network_to_json(model.network);
  json x0 = json::array();
  for (Count c : model.x0) x0.push_back(c);
  root["x0"] = std::move(x0);
  root["solver"] = solver_to_json(model.config);
  root["output"] = output_to_json(OutputConfig{});
  root["override_budget"] = false;
  return root.dump(2);
}

}  // namespace cmefsp
