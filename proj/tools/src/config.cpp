#include "kdvflat_cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "kdvflat/error.hpp"

namespace kdvflat::cli {
namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& what) { fail(ErrorCode::config, what); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) bad("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
void read(const json& obj, const char* key, std::optional<T>& out) {
  if (!obj.contains(key) || obj.at(key).is_null()) return;
  T v{};
  read(obj, key, v);
  out = v;
}

Command parse_command(const std::string& s) {
  if (s == "null-control") return Command::null_control;
  if (s == "reach") return Command::reach;
  if (s == "simulate") return Command::simulate;
  if (s == "airy") return Command::airy;
  if (s == "verify") return Command::verify;
  bad("unknown command '" + s + "'");
}

Discretization parse_disc(const json& d) {
  if (!d.is_object()) bad("discretization must be an object");
  reject_unknown(d, {"n_x", "scheme", "n_t", "stepper", "theta", "startup_steps", "store_every", "n_samples"},
                 "discretization");
  Discretization disc;
  read(d, "n_x", disc.n_x);
  read(d, "n_t", disc.n_t);
  read(d, "theta", disc.theta);
  read(d, "startup_steps", disc.startup_steps);
  read(d, "store_every", disc.store_every);
  read(d, "n_samples", disc.n_samples);
  std::string scheme = "spectral";
  read(d, "scheme", scheme);
  if (scheme == "spectral") {
    disc.scheme = Scheme::spectral_galerkin;
  } else if (scheme == "finite_difference") {
    disc.scheme = Scheme::finite_difference;
  } else {
    bad("scheme must be 'spectral' or 'finite_difference'");
  }
  std::string stepper = "rannacher";
  read(d, "stepper", stepper);
  if (stepper == "rannacher") {
    disc.stepper = Stepper::rannacher;
  } else if (stepper == "theta") {
    disc.stepper = Stepper::theta;
  } else {
    bad("stepper must be 'rannacher' or 'theta'");
  }
  return disc;
}

std::vector<double> fig1_series(int terms) {
  // e^x + j e^{jx} + j^2 e^{j^2 x} = 3 sum_n x^(3n+2)/(3n+2)!
  std::vector<double> c(static_cast<std::size_t>(3 * terms + 3), 0.0);
  for (int n = 0; n <= terms; ++n) c[static_cast<std::size_t>(3 * n + 2)] = 3.0 / std::tgamma(3.0 * n + 3.0);
  return c;
}

}  // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::null_control: return "null-control";
    case Command::reach: return "reach";
    case Command::simulate: return "simulate";
    case Command::airy: return "airy";
    case Command::verify: return "verify";
  }
  return "?";
}

std::vector<double> resolve_target(const std::string& name, int fig1_terms) {
  if (name == "x2") return {0.0, 0.0, 1.0};
  if (name == "x5") return {0.0, 0.0, 0.0, 0.0, 0.0, 1.0};
  if (name == "zero") return {0.0};
  if (name == "fig1") return fig1_series(fig1_terms);
  if (name.starts_with("poly(") && name.ends_with(")")) {
    std::vector<double> c;
    std::stringstream in(name.substr(5, name.size() - 6));
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        std::size_t used = 0;
        c.push_back(std::stod(item, &used));
        if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        bad("bad coefficient '" + item + "' in target " + name);
      }
    }
    if (c.empty()) bad("empty polynomial target");
    return c;
  }
  bad("unknown target '" + name + "'");
}

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) bad("configuration must be a JSON object");
  reject_unknown(doc,
                 {"command", "a", "T", "tau", "s", "M", "N", "trace_depth", "target", "target_terms", "y0", "y0_file",
                  "discretization", "seed", "mutate_g", "tol_steer", "tol_reach", "lemma_count", "snapshots", "airy"},
                 "configuration");
  RunConfig cfg;
  cfg.source = doc;
  if (!doc.contains("command")) bad("missing 'command'");
  std::string command;
  read(doc, "command", command);
  cfg.command = parse_command(command);

  read(doc, "a", cfg.a);
  read(doc, "T", cfg.T);
  cfg.tau = 0.5 * cfg.T;
  read(doc, "tau", cfg.tau);
  read(doc, "s", cfg.s);
  read(doc, "M", cfg.M);
  read(doc, "N", cfg.N);
  read(doc, "trace_depth", cfg.trace_depth);
  read(doc, "target_terms", cfg.target_terms);
  read(doc, "y0", cfg.y0);
  read(doc, "y0_file", cfg.y0_file);
  read(doc, "seed", cfg.seed);
  read(doc, "tol_steer", cfg.tol_steer);
  read(doc, "tol_reach", cfg.tol_reach);
  read(doc, "lemma_count", cfg.lemma_count);
  read(doc, "snapshots", cfg.snapshots);

  if (doc.contains("discretization")) cfg.disc = parse_disc(doc.at("discretization"));
  try {
    cfg.disc.validate();
  } catch (const Error& e) {
    bad(e.what());
  }

  if (doc.contains("mutate_g") && !doc.at("mutate_g").is_null()) {
    const auto& m = doc.at("mutate_g");
    if (!m.is_object()) bad("mutate_g must be an object");
    reject_unknown(m, {"i", "k", "delta"}, "mutate_g");
    Mutation mut;
    read(m, "i", mut.i);
    read(m, "k", mut.k);
    read(m, "delta", mut.delta);
    if (mut.i < 0 || mut.k < 0) bad("mutate_g indices must be >= 0");
    cfg.mutate_g = mut;
  }

  if (doc.contains("airy")) {
    const auto& a = doc.at("airy");
    if (!a.is_object()) bad("airy must be an object");
    reject_unknown(a, {"t", "x_lo", "x_hi", "n_x", "L", "p_max", "R"}, "airy");
    read(a, "t", cfg.airy.t);
    read(a, "x_lo", cfg.airy.x_lo);
    read(a, "x_hi", cfg.airy.x_hi);
    read(a, "n_x", cfg.airy.n_x);
    read(a, "L", cfg.airy.L);
    read(a, "p_max", cfg.airy.p_max);
    read(a, "R", cfg.airy.R);
  }

  if (doc.contains("target")) {
    const auto& t = doc.at("target");
    if (t.is_array()) {
      cfg.target = "list";
      read(doc, "target", cfg.target_coeffs);
    } else {
      read(doc, "target", cfg.target);
    }
  }
  if (cfg.target_terms && *cfg.target_terms < 0) bad("target_terms must be >= 0");
  if (cfg.target != "list") cfg.target_coeffs = resolve_target(cfg.target, cfg.target_terms.value_or(6));
  for (double c : cfg.target_coeffs) {
    if (!std::isfinite(c)) bad("target coefficients must be finite");
  }

  if (!(cfg.a >= 0.0) || !std::isfinite(cfg.a)) bad("a must be >= 0");
  if (!(cfg.T > 0.0) || !std::isfinite(cfg.T)) bad("T must be > 0");
  if (!(cfg.tau > 0.0 && cfg.tau < cfg.T)) bad("need 0 < tau < T");
  if (!(cfg.M > 0.0) || !std::isfinite(cfg.M)) bad("M must be > 0");
  if (cfg.command == Command::null_control && !(cfg.s >= 1.5 && cfg.s < 3.0)) bad("null-control needs s in [3/2, 3)");
  if (cfg.N && *cfg.N < 1) bad("N must be >= 1");
  if (cfg.trace_depth < 0) bad("trace_depth must be >= 0");
  if (cfg.y0 != "sin_pi" && cfg.y0 != "zero" && cfg.y0 != "random_smooth" && cfg.y0 != "file") {
    bad("y0 must be sin_pi, zero, random_smooth or file");
  }
  if (cfg.y0 == "file" && cfg.y0_file.empty()) bad("y0 = file needs y0_file");
  if (!(cfg.tol_steer > 0.0) || !(cfg.tol_reach > 0.0)) bad("tolerances must be > 0");
  if (cfg.lemma_count < 1) bad("lemma_count must be >= 1");
  if (cfg.snapshots < 2) bad("snapshots must be >= 2");
  if (!(cfg.airy.t > 0.0) || !(cfg.airy.x_lo < cfg.airy.x_hi) || cfg.airy.n_x < 2 || !(cfg.airy.L > 0.0) ||
      cfg.airy.p_max < 7 || !(cfg.airy.R > 0.0 && cfg.airy.R < 1.0)) {
    bad("airy block needs t > 0, x_lo < x_hi, n_x >= 2, L > 0, p_max >= 7, R in (0, 1)");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::config, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  auto cfg = parse_config(doc);
  if (cfg.y0 == "file" && std::filesystem::path(cfg.y0_file).is_relative()) {
    cfg.y0_file = (path.parent_path() / cfg.y0_file).string();
  }
  return cfg;
}

}  // namespace kdvflat::cli
