#pragma once

#include <json.hpp>

namespace qforma {

/// Insertion-ordered JSON so wire messages and logs keep their documented field order.
using Json = nlohmann::ordered_json;

}  // namespace qforma
