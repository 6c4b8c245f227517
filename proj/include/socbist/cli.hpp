// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace socbist {

// Runs one `socbist` invocation. `args` excludes the program name. Returns
// 0 on success, 1 on internal errors and 2 on usage or input errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace socbist
