#include "slopekit/slopekit.h"

#include <cstring>
#include <map>
#include <new>

#include "slopekit/error.hpp"
#include "slopekit/jobs.hpp"

struct sk_config {
  slopekit::JobConfig job;
};

struct sk_result {
  slopekit::JobResult job;
};

namespace {

thread_local std::string last_error;

sk_status fail(sk_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

// Maps whatever escaped the library onto a status code.
template <class F>
sk_status guarded(F&& f) {
  try {
    f();
    return SK_OK;
  } catch (const slopekit::Error& e) {
    return fail(static_cast<sk_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(SK_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(SK_INTERNAL, e.what());
  }
}

std::optional<int> slopekit::JobConfig::* int_field(const std::string& key) {
  using slopekit::JobConfig;
  static const std::map<std::string, std::optional<int> JobConfig::*> fields{
      {"p", &JobConfig::p},         {"k", &JobConfig::k},
      {"I", &JobConfig::depth},     {"Q", &JobConfig::qprec},
      {"m", &JobConfig::m},         {"n", &JobConfig::n},
      {"ell", &JobConfig::ell},     {"component", &JobConfig::component},
      {"center", &JobConfig::center}, {"poly_degree", &JobConfig::poly_degree}};
  const auto it = fields.find(key);
  return it == fields.end() ? nullptr : it->second;
}

}  // namespace

extern "C" {

const char* sk_version(void) { return "0.1.0"; }

const char* sk_last_error(void) { return last_error.c_str(); }

size_t sk_command_count(void) { return slopekit::job_commands().size(); }

const char* sk_command_name(size_t index) {
  const auto& cmds = slopekit::job_commands();
  return index < cmds.size() ? cmds[index].c_str() : nullptr;
}

sk_status sk_config_new(const char* command, sk_config** out) {
  if (!out || !command) return fail(SK_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    auto c = new sk_config;
    c->job.command = command;
    *out = c;
  });
}

sk_status sk_config_from_json(const char* json, sk_config** out) {
  if (!out || !json) return fail(SK_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new sk_config{slopekit::job_from_json(json)}; });
}

void sk_config_free(sk_config* config) { delete config; }

sk_status sk_config_set_int(sk_config* config, const char* key, int value) {
  if (!config || !key) return fail(SK_INVALID_ARGUMENT, "null argument");
  const auto field = int_field(key);
  if (!field) return fail(SK_INVALID_ARGUMENT, std::string("unknown integer field '") + key + "'");
  config->job.*field = value;
  return SK_OK;
}

sk_status sk_config_set_list(sk_config* config, const char* key, const int* values, size_t count) {
  if (!config || !key || (!values && count > 0)) return fail(SK_INVALID_ARGUMENT, "null argument");
  std::vector<int>* dst = nullptr;
  if (std::strcmp(key, "weights") == 0) dst = &config->job.weights;
  if (std::strcmp(key, "hecke_primes") == 0) dst = &config->job.hecke_primes;
  if (!dst) return fail(SK_INVALID_ARGUMENT, std::string("unknown list field '") + key + "'");
  return guarded([&] { dst->assign(values, values + count); });
}

sk_status sk_config_add_bound(sk_config* config, const char* bound) {
  if (!config || !bound) return fail(SK_INVALID_ARGUMENT, "null argument");
  return guarded([&] { config->job.bounds.emplace_back(bound); });
}

sk_status sk_config_set_seed(sk_config* config, uint64_t seed) {
  if (!config) return fail(SK_INVALID_ARGUMENT, "null argument");
  config->job.seed = seed;
  return SK_OK;
}

sk_status sk_config_validate(sk_config* config) {
  if (!config) return fail(SK_INVALID_ARGUMENT, "null argument");
  return guarded([&] { slopekit::validate(config->job); });
}

sk_status sk_run(const sk_config* config, sk_result** out) {
  if (!config || !out) return fail(SK_INVALID_ARGUMENT, "null argument");
  return guarded([&] { *out = new sk_result{slopekit::run_job(config->job)}; });
}

const char* sk_result_json(const sk_result* result) { return result ? result->job.json.c_str() : ""; }

int sk_result_passed(const sk_result* result) { return result && result->job.passed ? 1 : 0; }

void sk_result_free(sk_result* result) { delete result; }

}  // extern "C"
