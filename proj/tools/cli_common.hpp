//
// rlqn - regularized limited-memory quasi-Newton methods
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdio>
#include <string>

#include "rlqn/rlqn.h"

namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitInternal = 2;

// Bad input of any kind is a configuration error; everything else is ours.
inline int exit_code_for(rlqn_status status) {
  switch (status) {
  case RLQN_OK:
    return kExitOk;
  case RLQN_ERR_NUMERICAL:
  case RLQN_ERR_INTERNAL:
    return kExitInternal;
  default:
    return kExitConfig;
  }
}

struct Failure {
  rlqn_status status;
};

inline void check(rlqn_status status, const char *context) {
  if (status == RLQN_OK)
    return;
  std::fprintf(stderr, "error: %s: %s (%s)\n", context, rlqn_last_error(),
               rlqn_status_string(status));
  throw Failure {status};
}

struct ConfigOptions {
  long long memory = 5;
  long long nonmonotone = 0;
  double tol = 1e-4;
  long long max_iters = 100000;
  double mu0 = 1.0;
  long long threads = 1;
};

inline rlqn_config *make_config(const ConfigOptions &o) {
  rlqn_config *cfg = nullptr;
  check(rlqn_config_create(&cfg), "config");
  auto set = [&](const char *key, double v) {
    const rlqn_status st = rlqn_config_set(cfg, key, v);
    if (st != RLQN_OK) {
      rlqn_config_destroy(cfg);
      check(st, key);
    }
  };
  set("m", static_cast<double>(o.memory));
  set("nonmonotone", static_cast<double>(o.nonmonotone));
  set("tol_g", o.tol);
  set("max_iters", static_cast<double>(o.max_iters));
  set("mu0", o.mu0);
  set("threads", static_cast<double>(o.threads));
  const rlqn_status st = rlqn_config_validate(cfg);
  if (st != RLQN_OK) {
    rlqn_config_destroy(cfg);
    check(st, "config");
  }
  return cfg;
}

}  // namespace cli
