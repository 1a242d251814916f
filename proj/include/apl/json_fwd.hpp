#pragma once

#include "json.hpp"

namespace apl {
// Insertion-ordered so reports list fields in their documented order.
using Json = nlohmann::ordered_json;
}  // namespace apl
