#pragma once

#include "cda/session/session.hpp"

#include <json.hpp>

#include <ostream>
#include <string>

namespace cda::session {

/// One JSON-lines record. Prices and profits are in currency units.
nlohmann::ordered_json to_json(const SessionResult& r, bool include_tape = false);
nlohmann::ordered_json to_json(const MetricsBundle& m);

void write_jsonl(std::ostream& out, const SessionResult& r, bool include_tape = false);

}  // namespace cda::session
