#pragma once

#include <ostream>

namespace routerq {

// Quick oracle suite behind `routerq validate`: sampler moments, closed-form
// queue identities, and a short simulation-vs-oracle cross-check. Prints one
// line per check; returns false if any check fails.
bool run_validation_suite(std::ostream& out);

}  // namespace routerq
