// Command-line front end. Talks to the library only through the C API.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "slopekit/slopekit.h"

namespace {

enum Exit { kPass = 0, kFailed = 1, kConfig = 2 };

struct Flags {
  std::map<std::string, int> ints;
  std::vector<int> weights;
  std::vector<int> hecke_primes;
  std::vector<std::string> bounds;
  std::uint64_t seed = 1;
  std::string output;
};

// Named precision profiles for the default m; an integer is taken literally.
std::optional<int> profile_m() {
  const char* env = std::getenv("SLOPEKIT_PRECISION");
  if (!env || !*env) return std::nullopt;
  const std::string v = env;
  if (v == "low") return 6;
  if (v == "standard") return 10;
  if (v == "high") return 20;
  try {
    std::size_t used = 0;
    const int m = std::stoi(v, &used);
    if (used == v.size()) return m;
  } catch (const std::exception&) {
  }
  throw std::invalid_argument("SLOPEKIT_PRECISION must be low, standard, high or an integer; got '" + v + "'");
}

void add_int(CLI::App* cmd, Flags& f, const std::string& name, const std::string& help) {
  cmd->add_option_function<int>("--" + name, [&f, name](int v) { f.ints[name] = v; }, help);
}

int status_exit(sk_status s) {
  return s == SK_INVALID_ARGUMENT || s == SK_PRECISION_EXCEEDED || s == SK_UNSUPPORTED ? kConfig : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-adic slopes, ordinary families and duality checks for level-1 modular forms"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sk_version()));
  Flags f;

  const std::map<std::string, std::vector<std::string>> flags_of{
      {"basis", {"k", "p", "m", "Q"}},
      {"tp-matrix", {"p", "k", "ell", "Q", "m"}},
      {"ordinary-rank", {"p", "k"}},
      {"control-check", {"p", "k", "n"}},
      {"family-fit", {"p", "component", "m"}},
      {"up-matrix", {"p", "k", "I", "Q", "m"}},
      {"charseries", {"p", "k", "I", "Q", "m"}},
      {"slopes", {"p", "k", "I", "Q", "m"}},
      {"classicality", {"p", "k", "I", "Q", "m"}},
      {"disc", {"p", "component", "center", "poly-degree", "I", "m"}},
      {"duality", {"p", "k", "I", "m"}},
      {"acceptance", {}},
  };
  const std::map<std::string, std::string> help{
      {"p", "prime"},
      {"k", "weight"},
      {"m", "p-adic precision: work mod p^m"},
      {"Q", "q-expansion precision"},
      {"I", "Katz depth (number of Hasse blocks beyond the first)"},
      {"n", "number of weight steps of p - 1"},
      {"ell", "Hecke index (default p)"},
      {"component", "weight-space component k mod (p - 1)"},
      {"center", "disc center weight"},
      {"poly-degree", "interpolation degree (default: samples - 1)"},
  };

  std::map<CLI::App*, std::string> commands;
  for (std::size_t i = 0; i < sk_command_count(); ++i) {
    const std::string name = sk_command_name(i);
    auto* cmd = app.add_subcommand(name);
    commands[cmd] = name;
    for (const auto& flag : flags_of.at(name)) add_int(cmd, f, flag, help.at(flag));
    if (name == "family-fit" || name == "disc")
      cmd->add_option("--weights", f.weights, "sample weights")->required()->delimiter(',');
    if (name == "family-fit") cmd->add_option("--hecke-primes", f.hecke_primes, "primes ell != p")->delimiter(',');
    if (name == "disc") cmd->add_option("--bounds", f.bounds, "slope bounds h, integer or a/b")->delimiter(',');
    if (name == "duality" || name == "acceptance") cmd->add_option("--seed", f.seed, "seed for randomized checks");
    cmd->add_option("--output,-o", f.output, "write JSON here instead of stdout");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  std::string command;
  for (const auto& [cmd, name] : commands)
    if (cmd->parsed()) command = name;

  sk_config* config = nullptr;
  sk_status s = sk_config_new(command.c_str(), &config);
  auto set = [&](sk_status st) {
    if (st != SK_OK && s == SK_OK) s = st;
  };
  try {
    const auto& allowed = flags_of.at(command);
    if (!f.ints.count("m") && std::find(allowed.begin(), allowed.end(), "m") != allowed.end())
      if (const auto m = profile_m()) f.ints["m"] = *m;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    sk_config_free(config);
    return kConfig;
  }
  for (const auto& [name, v] : f.ints) set(sk_config_set_int(config, name == "poly-degree" ? "poly_degree" : name.c_str(), v));
  if (!f.weights.empty()) set(sk_config_set_list(config, "weights", f.weights.data(), f.weights.size()));
  if (!f.hecke_primes.empty())
    set(sk_config_set_list(config, "hecke_primes", f.hecke_primes.data(), f.hecke_primes.size()));
  for (const auto& b : f.bounds) set(sk_config_add_bound(config, b.c_str()));
  set(sk_config_set_seed(config, f.seed));

  sk_result* result = nullptr;
  if (s == SK_OK) s = sk_run(config, &result);
  sk_config_free(config);
  if (s != SK_OK) {
    std::cerr << "error: " << sk_last_error() << "\n";
    return status_exit(s);
  }

  const std::string json = sk_result_json(result);
  const bool passed = sk_result_passed(result) != 0;
  sk_result_free(result);
  if (f.output.empty()) {
    std::cout << json;
  } else {
    std::ofstream out(f.output, std::ios::binary);
    out << json;
    if (!out) {
      std::cerr << "error: cannot write " << f.output << "\n";
      return kFailed;
    }
  }
  if (!passed) std::cerr << "verification failed; see the JSON report\n";
  return passed ? kPass : kFailed;
}
