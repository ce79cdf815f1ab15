#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "toral/azumaya.hpp"
#include "toral/quadform.hpp"

namespace toral::cli {

enum ExitStatus : int { kOk = 0, kDomainError = 1, kUsageError = 2 };

/// Runs one invocation. `args` excludes the program name. The serialized
/// CommandResult goes to `out`; usage errors go to `err` only.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// JSON interchange, shared with the tests.
using Json = nlohmann::ordered_json;

Json to_json(const RDiagonalForm& q);
Json to_json(const LoopNormalForm& lnf);
Json to_json(const BrauerMatrix& b);
Json to_json(const ToralDescriptor& t);
Json to_json(const IntMatrix& g);

RDiagonalForm form_from_json(const Json& j);
LoopNormalForm loop_form_from_json(const Json& j);
BrauerMatrix matrix_from_json(const Json& j);
ToralDescriptor descriptor_from_json(const Json& j);
IntMatrix int_matrix_from_json(const Json& j);

} // namespace toral::cli
